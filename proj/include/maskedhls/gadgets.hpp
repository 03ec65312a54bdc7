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
  \file gadgets.hpp
  \brief Two-share multiplication gadget templates and the masking pass

  Register positions per template (the annotated nodes):

  - DOM:   after each cross-domain remask `(a_i & b_j) ^ r`        (2)
  - HPC1:  after the two refresh xors `b_i ^ r0` plus the two
           DOM positions                                           (4)
  - HPC2:  after all four share carriers `x ^ 0` and after the two
           remask sums `(~a_i & r) ^ (a_i & (b_j ^ r))`            (6)
  - COMAR: after the two a-side input maskings `a_i ^ r`, after the
           four product remasks `g_ij ^ r_k`, and on the root of
           `c1 = r2 ^ r3 ^ r4 ^ r5`                                (7)

  Functional contract (registers ignored):
    c0 ^ c1 == (a0 ^ a1) & (b0 ^ b1) for every assignment of shares
    and randoms.
*/

#pragma once

#include "dfg.hpp"

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace maskedhls
{

enum class gadget_kind : uint8_t
{
  dom,
  hpc1,
  hpc2,
  comar
};

inline char const* gadget_name( gadget_kind k )
{
  switch ( k )
  {
  case gadget_kind::dom:
    return "dom";
  case gadget_kind::hpc1:
    return "hpc1";
  case gadget_kind::hpc2:
    return "hpc2";
  case gadget_kind::comar:
    return "comar";
  }
  return "?";
}

inline std::optional<gadget_kind> gadget_from_string( std::string const& s )
{
  if ( s == "dom" )
    return gadget_kind::dom;
  if ( s == "hpc1" )
    return gadget_kind::hpc1;
  if ( s == "hpc2" )
    return gadget_kind::hpc2;
  if ( s == "comar" )
    return gadget_kind::comar;
  return std::nullopt;
}

inline uint32_t gadget_random_arity( gadget_kind k )
{
  switch ( k )
  {
  case gadget_kind::dom:
    return 1u;
  case gadget_kind::hpc1:
    return 2u;
  case gadget_kind::hpc2:
    return 1u;
  case gadget_kind::comar:
    return 6u;
  }
  return 0u;
}

inline uint32_t gadget_annotation_count( gadget_kind k )
{
  switch ( k )
  {
  case gadget_kind::dom:
    return 2u;
  case gadget_kind::hpc1:
    return 4u;
  case gadget_kind::hpc2:
    return 6u;
  case gadget_kind::comar:
    return 7u;
  }
  return 0u;
}

struct gadget_instance
{
  gadget_kind kind;
  std::array<uint32_t, 4> share_inputs;  /* a0, a1, b0, b1 */
  std::vector<uint32_t> random_inputs;
  std::array<uint32_t, 2> share_outputs; /* c0, c1 */
  std::vector<uint32_t> annotated_nodes;
};

class gadget_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/*! Emits the gadget subgraph into `g`.  `randoms` must have the
 * kind-specific arity.  `const0` caches the shared CONST0 node used by
 * HPC2 share carriers. */
inline gadget_instance instantiate_gadget( dfg& g, gadget_kind kind,
                                           uint32_t a0, uint32_t a1, uint32_t b0, uint32_t b1,
                                           std::vector<uint32_t> const& randoms,
                                           std::string const& prefix,
                                           std::optional<uint32_t>& const0 )
{
  if ( randoms.size() != gadget_random_arity( kind ) )
  {
    throw gadget_error( std::string( gadget_name( kind ) ) + " expects " + std::to_string( gadget_random_arity( kind ) ) + " random inputs, got " + std::to_string( randoms.size() ) );
  }

  auto P = [&]( char const* w ) { return prefix + "_" + w; };
  gadget_instance inst;
  inst.kind = kind;
  inst.share_inputs = { a0, a1, b0, b1 };
  inst.random_inputs = randoms;

  auto dom_core = [&]( uint32_t da0, uint32_t da1, uint32_t db0, uint32_t db1, uint32_t r ) {
    auto p1 = g.add_gate( node_kind::and_gate, { da0, db0 }, P( "p1" ) );
    auto p2 = g.add_gate( node_kind::and_gate, { da0, db1 }, P( "p2" ) );
    auto p3 = g.add_gate( node_kind::and_gate, { da1, db0 }, P( "p3" ) );
    auto p4 = g.add_gate( node_kind::and_gate, { da1, db1 }, P( "p4" ) );
    auto i1 = g.add_gate( node_kind::xor_gate, { p2, r }, P( "i1" ), true );
    auto i2 = g.add_gate( node_kind::xor_gate, { p3, r }, P( "i2" ), true );
    auto c0 = g.add_gate( node_kind::xor_gate, { i1, p1 }, P( "c0" ) );
    auto c1 = g.add_gate( node_kind::xor_gate, { i2, p4 }, P( "c1" ) );
    inst.annotated_nodes.push_back( i1 );
    inst.annotated_nodes.push_back( i2 );
    inst.share_outputs = { c0, c1 };
  };

  switch ( kind )
  {
  case gadget_kind::dom:
  {
    dom_core( a0, a1, b0, b1, randoms[0] );
    break;
  }
  case gadget_kind::hpc1:
  {
    auto const r0 = randoms[0];
    auto bb0 = g.add_gate( node_kind::xor_gate, { b0, r0 }, P( "bb0" ), true );
    auto bb1 = g.add_gate( node_kind::xor_gate, { b1, r0 }, P( "bb1" ), true );
    inst.annotated_nodes.push_back( bb0 );
    inst.annotated_nodes.push_back( bb1 );
    dom_core( a0, a1, bb0, bb1, randoms[1] );
    break;
  }
  case gadget_kind::hpc2:
  {
    auto const r = randoms[0];
    if ( !const0 )
    {
      const0 = g.add_const( false, g.has_name( "0" ) ? "_c0" : "0" );
    }
    auto qa0 = g.add_gate( node_kind::xor_gate, { a0, *const0 }, P( "qa0" ), true );
    auto qa1 = g.add_gate( node_kind::xor_gate, { a1, *const0 }, P( "qa1" ), true );
    auto qb0 = g.add_gate( node_kind::xor_gate, { b0, *const0 }, P( "qb0" ), true );
    auto qb1 = g.add_gate( node_kind::xor_gate, { b1, *const0 }, P( "qb1" ), true );
    auto t0 = g.add_gate( node_kind::xor_gate, { b1, r }, P( "t0" ) );
    auto t1 = g.add_gate( node_kind::xor_gate, { b0, r }, P( "t1" ) );
    auto n0 = g.add_gate( node_kind::not_gate, { qa0 }, P( "n0" ) );
    auto n1 = g.add_gate( node_kind::not_gate, { qa1 }, P( "n1" ) );
    auto u0 = g.add_gate( node_kind::and_gate, { n0, r }, P( "u0" ) );
    auto u1 = g.add_gate( node_kind::and_gate, { n1, r }, P( "u1" ) );
    auto v0 = g.add_gate( node_kind::and_gate, { qa0, t0 }, P( "v0" ) );
    auto v1 = g.add_gate( node_kind::and_gate, { qa1, t1 }, P( "v1" ) );
    auto s0 = g.add_gate( node_kind::xor_gate, { u0, v0 }, P( "s0" ), true );
    auto s1 = g.add_gate( node_kind::xor_gate, { u1, v1 }, P( "s1" ), true );
    auto m0 = g.add_gate( node_kind::and_gate, { qa0, qb0 }, P( "m0" ) );
    auto m1 = g.add_gate( node_kind::and_gate, { qa1, qb1 }, P( "m1" ) );
    auto c0g = g.add_gate( node_kind::xor_gate, { m0, s0 }, P( "c0" ) );
    auto c1g = g.add_gate( node_kind::xor_gate, { m1, s1 }, P( "c1" ) );
    inst.annotated_nodes = { qa0, qa1, qb0, qb1, s0, s1 };
    inst.share_outputs = { c0g, c1g };
    break;
  }
  case gadget_kind::comar:
  {
    auto const r = randoms[0], rp = randoms[1];
    auto const r2 = randoms[2], r3 = randoms[3], r4 = randoms[4], r5 = randoms[5];
    auto ma0 = g.add_gate( node_kind::xor_gate, { a0, r }, P( "ma0" ), true );
    auto ma1 = g.add_gate( node_kind::xor_gate, { a1, r }, P( "ma1" ), true );
    auto mb0 = g.add_gate( node_kind::xor_gate, { b0, rp }, P( "mb0" ) );
    auto mb1 = g.add_gate( node_kind::xor_gate, { b1, rp }, P( "mb1" ) );
    auto g00 = g.add_gate( node_kind::and_gate, { ma0, mb0 }, P( "g00" ) );
    auto g01 = g.add_gate( node_kind::and_gate, { ma0, mb1 }, P( "g01" ) );
    auto g10 = g.add_gate( node_kind::and_gate, { ma1, mb0 }, P( "g10" ) );
    auto g11 = g.add_gate( node_kind::and_gate, { ma1, mb1 }, P( "g11" ) );
    auto h00 = g.add_gate( node_kind::xor_gate, { g00, r2 }, P( "h00" ), true );
    auto h01 = g.add_gate( node_kind::xor_gate, { g01, r3 }, P( "h01" ), true );
    auto h10 = g.add_gate( node_kind::xor_gate, { g10, r4 }, P( "h10" ), true );
    auto h11 = g.add_gate( node_kind::xor_gate, { g11, r5 }, P( "h11" ), true );
    auto k0 = g.add_gate( node_kind::xor_gate, { h00, h01 }, P( "k0" ) );
    auto k1 = g.add_gate( node_kind::xor_gate, { h10, h11 }, P( "k1" ) );
    auto c0g = g.add_gate( node_kind::xor_gate, { k0, k1 }, P( "c0" ) );
    auto x1 = g.add_gate( node_kind::xor_gate, { r2, r3 }, P( "x1" ) );
    auto x2 = g.add_gate( node_kind::xor_gate, { x1, r4 }, P( "x2" ) );
    auto c1g = g.add_gate( node_kind::xor_gate, { x2, r5 }, P( "c1" ), true );
    inst.annotated_nodes = { ma0, ma1, h00, h01, h10, h11, c1g };
    inst.share_outputs = { c0g, c1g };
    break;
  }
  }
  return inst;
}

/*! Self-contained template circuit: inputs a0,a1,b0,b1 followed by the
 * kind-specific randoms, outputs c0,c1. */
inline dfg gadget_template_dfg( gadget_kind kind )
{
  dfg g;
  auto a0 = g.add_input( "a0" );
  auto a1 = g.add_input( "a1" );
  auto b0 = g.add_input( "b0" );
  auto b1 = g.add_input( "b1" );
  std::vector<uint32_t> randoms;
  static char const* const comar_names[] = { "r", "rp", "r2", "r3", "r4", "r5" };
  for ( uint32_t i = 0u; i < gadget_random_arity( kind ); ++i )
  {
    std::string nm;
    if ( kind == gadget_kind::comar )
    {
      nm = comar_names[i];
    }
    else if ( kind == gadget_kind::hpc1 )
    {
      nm = i == 0u ? "r0" : "r";
    }
    else
    {
      nm = "r";
    }
    randoms.push_back( g.add_input( nm ) );
  }
  std::optional<uint32_t> const0;
  auto inst = instantiate_gadget( g, kind, a0, a1, b0, b1, randoms, "g", const0 );
  g.add_output( "c0", inst.share_outputs[0] );
  g.add_output( "c1", inst.share_outputs[1] );
  return g;
}

struct masking_result
{
  dfg graph;
  std::vector<gadget_instance> gadgets;
  /* per masked-graph input id: index of the originating unmasked input
   * and share (0/1), or share == -1 for fresh randoms */
  std::vector<std::array<int, 2>> input_origin;
  uint32_t num_randoms{ 0 };
};

/*! Share-wise masking of an annotation-free circuit.  Every AND becomes
 * a gadget with fresh random inputs; with `share_all_randoms` all COMAR
 * instances reuse one six-wire mask set. */
inline masking_result apply_masking_pass( dfg const& unmasked, gadget_kind kind, bool share_all_randoms = false )
{
  if ( unmasked.num_annotated() != 0u )
  {
    throw gadget_error( "masking pass requires annotation-free input" );
  }

  masking_result res;
  dfg& g = res.graph;

  auto uniq = [&]( std::string const& wanted ) {
    std::string n = wanted;
    while ( g.has_name( n ) )
    {
      n += "_";
    }
    return n;
  };

  std::vector<std::array<uint32_t, 2>> shares( unmasked.size() );
  std::vector<std::array<int, 2>>& origin = res.input_origin;

  /* share inputs, interleaved per original input */
  {
    uint32_t idx = 0u;
    for ( auto i : unmasked.inputs() )
    {
      auto const& nm = unmasked.at( i ).name;
      auto s0 = g.add_input( uniq( nm + "_0" ) );
      auto s1 = g.add_input( uniq( nm + "_1" ) );
      origin.push_back( { static_cast<int>( idx ), 0 } );
      origin.push_back( { static_cast<int>( idx ), 1 } );
      shares[i] = { s0, s1 };
      ++idx;
    }
  }

  std::optional<uint32_t> const0;
  std::vector<uint32_t> shared_randoms;
  uint32_t gadget_counter = 0u;

  auto fresh_randoms = [&]( gadget_kind k, uint32_t idx ) {
    std::vector<uint32_t> rs;
    bool const reuse = share_all_randoms && k == gadget_kind::comar;
    if ( reuse && !shared_randoms.empty() )
    {
      return shared_randoms;
    }
    for ( uint32_t i = 0u; i < gadget_random_arity( k ); ++i )
    {
      std::string nm;
      if ( reuse )
      {
        nm = "rs" + std::to_string( i );
      }
      else if ( k == gadget_kind::hpc1 )
      {
        nm = ( i == 0u ? "rf" : "z" ) + std::to_string( idx );
      }
      else if ( k == gadget_kind::comar )
      {
        nm = "r" + std::to_string( idx ) + "_" + std::to_string( i );
      }
      else
      {
        nm = "z" + std::to_string( idx );
      }
      rs.push_back( g.add_input( uniq( nm ) ) );
      origin.push_back( { -1, static_cast<int>( res.num_randoms++ ) } );
    }
    if ( reuse )
    {
      shared_randoms = rs;
    }
    return rs;
  };

  for ( auto id : unmasked.topo_order() )
  {
    auto const& v = unmasked.at( id );
    switch ( v.kind )
    {
    case node_kind::input:
      break; /* done above */
    case node_kind::const0:
    case node_kind::const1:
    {
      auto s0 = g.add_const( v.kind == node_kind::const1, uniq( v.name ) );
      if ( !const0 && v.kind == node_kind::const0 )
      {
        const0 = s0;
      }
      /* share 1 of a constant is 0 */
      if ( !const0 )
      {
        const0 = g.add_const( false, uniq( "0" ) );
      }
      shares[id] = { s0, *const0 };
      break;
    }
    case node_kind::xor_gate:
    {
      auto const& a = shares[v.args[0]];
      auto const& b = shares[v.args[1]];
      auto s0 = g.add_gate( node_kind::xor_gate, { a[0], b[0] }, uniq( v.name + "_0" ) );
      auto s1 = g.add_gate( node_kind::xor_gate, { a[1], b[1] }, uniq( v.name + "_1" ) );
      shares[id] = { s0, s1 };
      break;
    }
    case node_kind::not_gate:
    {
      auto const& a = shares[v.args[0]];
      auto s0 = g.add_gate( node_kind::not_gate, { a[0] }, uniq( v.name + "_0" ) );
      shares[id] = { s0, a[1] }; /* share 1 passes through */
      break;
    }
    case node_kind::and_gate:
    {
      auto const& a = shares[v.args[0]];
      auto const& b = shares[v.args[1]];
      auto const idx = ++gadget_counter;
      auto rs = fresh_randoms( kind, idx );
      auto inst = instantiate_gadget( g, kind, a[0], a[1], b[0], b[1], rs, uniq( "g" + std::to_string( idx ) + "_" + v.name ), const0 );
      res.gadgets.push_back( inst );
      shares[id] = { inst.share_outputs[0], inst.share_outputs[1] };
      break;
    }
    case node_kind::output:
      break; /* deferred below */
    }
  }

  for ( auto o : unmasked.outputs() )
  {
    auto const& v = unmasked.at( o );
    auto const& s = shares[v.args[0]];
    g.add_output( uniq( v.name + "_0" ), s[0] );
    g.add_output( uniq( v.name + "_1" ), s[1] );
  }
  return res;
}

} // namespace maskedhls
