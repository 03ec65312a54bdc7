/* maskedhls: register-balancing HLS for gadget-masked circuits
 * Copyright (C) 2026
 *
 * Permission is hereby granted, free of charge, to any person
 * obtaining a copy of this software and associated documentation
 * files (the "Software"), to deal in the Software without
 * restriction, including without limitation the rights to use,
 * copy, modify, merge, publish, distribute, sublicense, and/or sell
 * copies of the Software, and to permit persons to whom the
 * Software is furnished to do so, subject to the following
 * conditions:
 *
 * The above copyright notice and this permission notice shall be
 * included in all copies or substantial portions of the Software.
 *
 * THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
 * EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES
 * OF MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND
 * NONINFRINGEMENT. IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT
 * HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER LIABILITY,
 * WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
 * FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR
 * OTHER DEALINGS IN THE SOFTWARE.
 */

/*!
  \file simcheck.hpp
  \brief Cycle-accurate simulation, equivalence and balance checking,
  and the naive full-cut baseline

  Simulation is two-valued and synchronous: registers shift on cycle
  boundaries, combinational values settle within the cycle.
*/

#pragma once

#include "dfg.hpp"
#include "gadgets.hpp"
#include "netlist.hpp"

#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace maskedhls
{

struct sim_trace
{
  std::vector<std::vector<bool>> inputs;
  std::vector<std::vector<bool>> outputs;
};

class sim_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! Streams one input vector per cycle and records the output vector of
 * every cycle. */
class simulator
{
public:
  explicit simulator( pipelined_netlist const& net )
      : net_( net ), order_( net.graph.topo_order() ), wire_k_( net.all_wire_regs() )
  {
    stages_.resize( net.graph.size() );
    for ( auto const& v : net_.graph.nodes() )
    {
      stages_[v.id].assign( wire_k_[v.id] + 1u, 0u );
    }
  }

  std::vector<bool> step( std::vector<bool> const& in )
  {
    auto const& g = net_.graph;
    if ( in.size() != g.inputs().size() )
    {
      throw sim_error( "input vector width mismatch" );
    }
    /* clock edge: shift every register chain */
    for ( auto const& v : g.nodes() )
    {
      auto& st = stages_[v.id];
      for ( uint32_t s = wire_k_[v.id]; s >= 1u; --s )
      {
        st[s] = st[s - 1u];
      }
    }
    /* combinational settle */
    for ( size_t i = 0u; i < g.inputs().size(); ++i )
    {
      stages_[g.inputs()[i]][0] = in[i] ? 1u : 0u;
    }
    auto read = [&]( uint32_t consumer, size_t slot ) -> uint8_t {
      auto const a = g.at( consumer ).args[slot];
      if ( g.at( a ).kind == node_kind::const0 )
      {
        return 0u;
      }
      if ( g.at( a ).kind == node_kind::const1 )
      {
        return 1u;
      }
      return stages_[a][net_.arg_regs[consumer][slot]];
    };
    std::vector<bool> out( g.outputs().size() );
    for ( auto id : order_ )
    {
      auto const& v = g.at( id );
      switch ( v.kind )
      {
      case node_kind::and_gate:
        stages_[id][0] = read( id, 0 ) & read( id, 1 );
        break;
      case node_kind::xor_gate:
        stages_[id][0] = read( id, 0 ) ^ read( id, 1 );
        break;
      case node_kind::not_gate:
        stages_[id][0] = read( id, 0 ) ^ 1u;
        break;
      case node_kind::const0:
        stages_[id][0] = 0u;
        break;
      case node_kind::const1:
        stages_[id][0] = 1u;
        break;
      default:
        break;
      }
    }
    for ( size_t i = 0u; i < g.outputs().size(); ++i )
    {
      out[i] = read( g.outputs()[i], 0 ) != 0u;
    }
    return out;
  }

private:
  pipelined_netlist const& net_;
  std::vector<uint32_t> order_;
  std::vector<uint32_t> wire_k_;
  std::vector<std::vector<uint8_t>> stages_;
};

inline sim_trace simulate( pipelined_netlist const& net, std::vector<std::vector<bool>> const& input_seq )
{
  simulator sim( net );
  sim_trace tr;
  tr.inputs = input_seq;
  for ( auto const& in : input_seq )
  {
    tr.outputs.push_back( sim.step( in ) );
  }
  return tr;
}

struct mismatch
{
  uint64_t cycle;
  std::string wire;
  bool expected, got;
};

struct equivalence_report
{
  bool equivalent{ true };
  uint64_t trials{ 0 };
  bool exhaustive{ false };
  uint64_t seed{ 0 };
  std::vector<mismatch> mismatches;
};

/*! Streams vectors one per cycle; pipelined outputs delayed by
 * `latency` must equal the golden combinational outputs.  Exhaustive
 * when the input space is at most 2^16, randomized otherwise. */
inline equivalence_report check_equivalence( pipelined_netlist const& net, dfg const& golden,
                                             uint64_t trials = 4096, uint64_t seed = 1 )
{
  auto const n_in = golden.inputs().size();
  if ( n_in != net.graph.inputs().size() || golden.outputs().size() != net.graph.outputs().size() )
  {
    throw sim_error( "golden and netlist port lists differ" );
  }

  equivalence_report rep;
  rep.seed = seed;
  rep.exhaustive = n_in <= 16u;
  uint64_t const n_vec = rep.exhaustive ? ( uint64_t( 1 ) << n_in ) : trials;
  rep.trials = n_vec;

  std::mt19937_64 rng( seed );
  std::vector<std::vector<bool>> queue; /* golden outputs awaiting comparison */
  simulator sim( net );

  auto make_vec = [&]( uint64_t idx ) {
    std::vector<bool> v( n_in );
    if ( rep.exhaustive )
    {
      for ( size_t b = 0u; b < n_in; ++b )
      {
        v[b] = ( idx >> b ) & 1u;
      }
    }
    else
    {
      for ( size_t b = 0u; b < n_in; ++b )
      {
        v[b] = rng() & 1u;
      }
    }
    return v;
  };

  std::vector<std::vector<bool>> expected;
  expected.reserve( n_vec );
  for ( uint64_t t = 0u; t < n_vec + net.latency; ++t )
  {
    auto const in = make_vec( t < n_vec ? t : 0u );
    if ( t < n_vec )
    {
      expected.push_back( golden.eval( in ) );
    }
    auto const out = sim.step( in );
    if ( t >= net.latency )
    {
      auto const idx = t - net.latency;
      if ( idx >= n_vec )
      {
        break;
      }
      for ( size_t o = 0u; o < out.size(); ++o )
      {
        if ( out[o] != expected[idx][o] )
        {
          rep.equivalent = false;
          if ( rep.mismatches.size() < 16u )
          {
            rep.mismatches.push_back( { t, net.graph.at( net.graph.outputs()[o] ).name, expected[idx][o], out[o] } );
          }
        }
      }
    }
  }
  return rep;
}

struct balance_report
{
  bool balanced{ true };
  uint32_t latency{ 0 };
  std::string witness; /* first disagreeing join */
};

/*! Forward register-depth labelling; balanced iff every join agrees.
 * Constant operands are always in sync and are skipped. */
inline balance_report check_balance( pipelined_netlist const& net )
{
  auto const& g = net.graph;
  balance_report rep;
  std::vector<int64_t> depth( g.size(), 0 );
  for ( auto id : g.topo_order() )
  {
    auto const& v = g.at( id );
    if ( v.args.empty() )
    {
      depth[id] = 0;
      continue;
    }
    int64_t d = -1;
    for ( size_t s = 0u; s < v.args.size(); ++s )
    {
      if ( is_const( g.at( v.args[s] ).kind ) )
      {
        continue;
      }
      int64_t const ds = depth[v.args[s]] + net.arg_regs[id][s];
      if ( d < 0 )
      {
        d = ds;
      }
      else if ( ds != d )
      {
        rep.balanced = false;
        if ( rep.witness.empty() )
        {
          std::ostringstream os;
          os << "join at '" << v.name << "': operand depths " << d << " vs " << ds;
          rep.witness = os.str();
        }
        d = std::max( d, ds );
      }
    }
    depth[id] = d < 0 ? 0 : d;
  }
  int64_t lat = -1;
  for ( auto o : g.outputs() )
  {
    if ( lat < 0 )
    {
      lat = depth[o];
    }
    else if ( depth[o] != lat )
    {
      rep.balanced = false;
      if ( rep.witness.empty() )
      {
        rep.witness = "outputs disagree on register depth";
      }
      lat = std::max( lat, depth[o] );
    }
  }
  rep.latency = lat < 0 ? 0u : static_cast<uint32_t>( lat );
  return rep;
}

/*! The conventional full-cut baseline: annotated nodes are grouped by
 * combinational depth, and every wire crossing a group's frontier is
 * registered.  Latency equals the number of groups. */
inline pipelined_netlist naive_balance( dfg const& g )
{
  pipelined_netlist net;
  net.graph = g;
  net.arg_regs.resize( g.size() );
  for ( auto const& v : g.nodes() )
  {
    net.arg_regs[v.id].assign( v.args.size(), 0u );
  }

  /* combinational (ASAP) depth; outputs inherit their driver depth */
  std::vector<int64_t> depth( g.size(), 0 );
  for ( auto id : g.topo_order() )
  {
    auto const& v = g.at( id );
    if ( is_gate( v.kind ) )
    {
      int64_t d = 0;
      for ( auto a : v.args )
      {
        d = std::max( d, depth[a] );
      }
      depth[id] = d + 1;
    }
    else if ( v.kind == node_kind::output )
    {
      depth[id] = depth[v.args[0]];
    }
  }

  std::set<int64_t> level_set;
  for ( auto const& v : g.nodes() )
  {
    if ( v.annotated )
    {
      level_set.insert( depth[v.id] );
    }
  }
  std::vector<int64_t> levels( level_set.begin(), level_set.end() );

  for ( auto const& v : g.nodes() )
  {
    for ( size_t s = 0u; s < v.args.size(); ++s )
    {
      auto const a = v.args[s];
      if ( is_const( g.at( a ).kind ) )
      {
        continue;
      }
      int64_t const lo = depth[a];
      bool const to_output = v.kind == node_kind::output;
      uint32_t k = 0u;
      for ( auto L : levels )
      {
        if ( L >= lo && ( to_output || L < depth[v.id] ) )
        {
          ++k;
        }
      }
      net.arg_regs[v.id][s] = k;
    }
  }
  net.latency = static_cast<uint32_t>( levels.size() );
  return net;
}

/*! Exhaustive or randomized recombination check of a masked circuit:
 * the xor of each output share pair must equal the unmasked output for
 * every assignment of shares and randoms. */
inline bool check_recombination( dfg const& unmasked, masking_result const& masked,
                                 uint64_t random_trials = 100000, uint64_t seed = 7 )
{
  auto const n_in = masked.graph.inputs().size();
  bool const exhaustive = n_in <= 20u;
  uint64_t const n_vec = exhaustive ? ( uint64_t( 1 ) << n_in ) : random_trials;
  std::mt19937_64 rng( seed );

  std::vector<bool> min( n_in );
  std::vector<bool> uin( unmasked.inputs().size() );
  for ( uint64_t t = 0u; t < n_vec; ++t )
  {
    for ( size_t b = 0u; b < n_in; ++b )
    {
      min[b] = exhaustive ? ( ( t >> b ) & 1u ) : ( rng() & 1u );
    }
    /* recombine shares into the unmasked input */
    std::fill( uin.begin(), uin.end(), false );
    for ( size_t b = 0u; b < n_in; ++b )
    {
      auto const& org = masked.input_origin[b];
      if ( org[0] >= 0 && min[b] )
      {
        uin[org[0]] = !uin[org[0]];
      }
    }
    auto const want = unmasked.eval( uin );
    auto const got = masked.graph.eval( min );
    for ( size_t o = 0u; o < want.size(); ++o )
    {
      if ( want[o] != ( got[2 * o] ^ got[2 * o + 1] ) )
      {
        return false;
      }
    }
  }
  return true;
}

/*! Structural first-order share separation: no node may combine both
 * shares of one secret inside an annotation-free cone. */
inline std::optional<std::string> share_separation_violation( masking_result const& masked )
{
  auto const& g = masked.graph;
  auto const n_secrets = [&] {
    int max_idx = -1;
    for ( auto const& org : masked.input_origin )
    {
      max_idx = std::max( max_idx, org[0] );
    }
    return max_idx + 1;
  }();
  if ( n_secrets > 64 )
  {
    return std::nullopt; /* bitset width limit; not hit by shipped benchmarks */
  }

  std::vector<uint64_t> dep0( g.size(), 0u ), dep1( g.size(), 0u );
  for ( size_t i = 0u; i < g.inputs().size(); ++i )
  {
    auto const& org = masked.input_origin[i];
    if ( org[0] >= 0 )
    {
      ( org[1] == 0 ? dep0 : dep1 )[g.inputs()[i]] = uint64_t( 1 ) << org[0];
    }
  }
  for ( auto id : g.topo_order() )
  {
    auto const& v = g.at( id );
    if ( !is_gate( v.kind ) && v.kind != node_kind::output )
    {
      continue;
    }
    for ( auto a : v.args )
    {
      if ( g.at( a ).annotated )
      {
        continue; /* register stops the glitch cone */
      }
      dep0[id] |= dep0[a];
      dep1[id] |= dep1[a];
    }
    if ( is_gate( v.kind ) && ( dep0[id] & dep1[id] ) != 0u )
    {
      return "node '" + v.name + "' combines both shares of secret " + std::to_string( __builtin_ctzll( dep0[id] & dep1[id] ) ) + " without an intervening register";
    }
  }
  return std::nullopt;
}

} // namespace maskedhls
