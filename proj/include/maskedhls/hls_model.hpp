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
  \file hls_model.hpp
  \brief Retiming model built from a dataflow graph

  The model adds a source feeding all entry nodes, a sink collecting
  all outputs, a back edge sink->source weighted with the maximum
  number of annotations on any input-to-output path, one dummy node
  after every annotated node (both with computational delay c), and a
  locked unit-weight register between consecutive annotations that
  share a register-free path.  All other edges carry weight 0 and all
  other nodes delay 0.

  Primary inputs are folded into the source node: an input operand
  never holds a register by itself, so the wire from the source to its
  first consumer is the modelled register location.  Constant operands
  are not modelled at all (delaying a constant is a no-op).
*/

#pragma once

#include "dfg.hpp"

#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace maskedhls
{

enum class model_node_kind : uint8_t
{
  source,
  sink,
  gate,
  dummy,
  lock_in,
  lock_out
};

struct model_node
{
  uint32_t id{};
  model_node_kind kind{ model_node_kind::gate };
  uint32_t dfg_id{ 0 }; /* gate: the dfg node; dummy: the annotated dfg node */
  std::string name;
  int delay{ 0 };
};

struct model_edge
{
  uint32_t id{};
  uint32_t u{}, v{};
  int weight{ 0 };
  bool dumpable{ true }; /* listed in the feasibility dump */
  bool back{ false };
  bool lock{ false };
  /* consumer dfg node and operand slot(s) realized by this edge; set on
   * the last edge of each producer-to-consumer chain */
  std::vector<std::pair<uint32_t, uint32_t>> targets;
};

class model_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct hls_model
{
  std::vector<model_node> nodes;
  std::vector<model_edge> edges;
  uint32_t source{ 0 }, sink{ 1 };
  uint32_t back_edge{ 0 };           /* edge id */
  uint32_t back_weight{ 0 };         /* == max_extra_regs */
  std::vector<std::pair<uint32_t, uint32_t>> locks; /* (lock_in, lock_out) node ids */
  int target_clock{ 1 };
  dfg const* graph{ nullptr };

  std::vector<std::vector<uint32_t>> out_edges; /* per node: edge ids */
  std::vector<std::vector<uint32_t>> in_edges;

  model_node const& at( uint32_t id ) const { return nodes[id]; }

  std::vector<uint32_t> topo_order_dag() const
  {
    std::vector<uint32_t> indeg( nodes.size(), 0u );
    for ( auto const& e : edges )
    {
      if ( !e.back )
      {
        ++indeg[e.v];
      }
    }
    std::vector<uint32_t> order, stack;
    for ( auto const& n : nodes )
    {
      if ( indeg[n.id] == 0u )
      {
        stack.push_back( n.id );
      }
    }
    while ( !stack.empty() )
    {
      auto id = stack.back();
      stack.pop_back();
      order.push_back( id );
      for ( auto eid : out_edges[id] )
      {
        if ( edges[eid].back )
        {
          continue;
        }
        if ( --indeg[edges[eid].v] == 0u )
        {
          stack.push_back( edges[eid].v );
        }
      }
    }
    if ( order.size() != nodes.size() )
    {
      throw model_error( "model is cyclic beyond the back edge" );
    }
    return order;
  }
};

/*! Maximum number of annotated nodes on any source-to-sink path,
 * computed by longest-path DP in topological order. */
inline uint32_t max_extra_regs( hls_model const& m )
{
  std::vector<int> best( m.nodes.size(), -1 );
  best[m.source] = 0;
  for ( auto id : m.topo_order_dag() )
  {
    if ( best[id] < 0 )
    {
      continue;
    }
    int const here = best[id] + ( m.nodes[id].kind == model_node_kind::gate && m.graph->at( m.nodes[id].dfg_id ).annotated ? 1 : 0 );
    /* annotation is counted when leaving the node */
    for ( auto eid : m.out_edges[id] )
    {
      if ( m.edges[eid].back )
      {
        continue;
      }
      auto const v = m.edges[eid].v;
      if ( here > best[v] )
      {
        best[v] = here;
      }
    }
  }
  return best[m.sink] < 0 ? 0u : static_cast<uint32_t>( best[m.sink] );
}

namespace detail
{

inline void model_connect( hls_model& m )
{
  m.out_edges.assign( m.nodes.size(), {} );
  m.in_edges.assign( m.nodes.size(), {} );
  for ( auto const& e : m.edges )
  {
    m.out_edges[e.u].push_back( e.id );
    m.in_edges[e.v].push_back( e.id );
  }
}

} // namespace detail

/*! Builds the retiming model.  `c` only rescales reporting; internally
 * the target clock is normalized to 1 and forced-register nodes carry
 * delay 1. */
inline hls_model build_hls_model( dfg const& g )
{
  {
    auto ds = g.validate();
    if ( !ds.empty() )
    {
      throw model_error( "invalid dataflow graph: " + ds.front().check + ": " + ds.front().message );
    }
  }

  hls_model m;
  m.graph = &g;
  m.nodes.push_back( { 0u, model_node_kind::source, 0u, "source", 0 } );
  m.nodes.push_back( { 1u, model_node_kind::sink, 0u, "sink", 0 } );

  std::vector<uint32_t> model_of( g.size(), 0u );
  std::vector<uint32_t> dummy_of( g.size(), 0u );

  auto add_node = [&]( model_node_kind k, uint32_t dfg_id, std::string name, int delay ) {
    model_node n;
    n.id = static_cast<uint32_t>( m.nodes.size() );
    n.kind = k;
    n.dfg_id = dfg_id;
    n.name = std::move( name );
    n.delay = delay;
    m.nodes.push_back( n );
    return n.id;
  };

  uint32_t dummy_counter = 0u;
  for ( auto id : g.topo_order() )
  {
    auto const& v = g.at( id );
    if ( is_gate( v.kind ) )
    {
      model_of[id] = add_node( model_node_kind::gate, id, v.name, v.annotated ? 1 : 0 );
      if ( v.annotated )
      {
        dummy_of[id] = add_node( model_node_kind::dummy, id, "d" + std::to_string( ++dummy_counter ), 1 );
      }
    }
  }

  /* edges; producer side leaves the dummy when the producer is annotated */
  auto from_node = [&]( uint32_t dfg_id ) {
    return g.at( dfg_id ).annotated ? dummy_of[dfg_id] : model_of[dfg_id];
  };

  std::map<std::pair<uint32_t, uint32_t>, uint32_t> edge_of; /* (u,v) -> edge id */
  auto add_edge = [&]( uint32_t u, uint32_t v, int w, bool dumpable, std::pair<uint32_t, uint32_t> target, bool has_target ) {
    auto key = std::make_pair( u, v );
    auto it = edge_of.find( key );
    if ( it != edge_of.end() )
    {
      if ( has_target )
      {
        m.edges[it->second].targets.push_back( target );
      }
      m.edges[it->second].dumpable = m.edges[it->second].dumpable || dumpable;
      return it->second;
    }
    model_edge e;
    e.id = static_cast<uint32_t>( m.edges.size() );
    e.u = u;
    e.v = v;
    e.weight = w;
    e.dumpable = dumpable;
    if ( has_target )
    {
      e.targets.push_back( target );
    }
    m.edges.push_back( std::move( e ) );
    edge_of.emplace( key, m.edges.back().id );
    return m.edges.back().id;
  };

  for ( auto id : g.topo_order() )
  {
    auto const& v = g.at( id );
    if ( is_gate( v.kind ) )
    {
      bool const entry = [&] {
        for ( auto a : v.args )
        {
          if ( is_gate( g.at( a ).kind ) )
          {
            return false;
          }
        }
        return true;
      }();
      for ( uint32_t s = 0u; s < v.args.size(); ++s )
      {
        auto const& a = g.at( v.args[s] );
        if ( is_gate( a.kind ) )
        {
          add_edge( from_node( a.id ), model_of[id], 0, true, { id, s }, true );
        }
        else if ( a.kind == node_kind::input )
        {
          add_edge( m.source, model_of[id], 0, entry, { id, s }, true );
        }
        /* constants carry no registers and are not modelled */
      }
      if ( v.annotated )
      {
        add_edge( model_of[id], dummy_of[id], 0, true, { 0u, 0u }, false );
      }
    }
    else if ( v.kind == node_kind::output )
    {
      auto const& d = g.at( v.args[0] );
      if ( is_gate( d.kind ) )
      {
        add_edge( from_node( d.id ), m.sink, 0, true, { id, 0u }, true );
      }
      else
      {
        /* pass-through output */
        add_edge( m.source, m.sink, 0, true, { id, 0u }, true );
      }
    }
  }

  /* dummy out-edges are bookkeeping; keep them out of the dump */
  for ( auto& e : m.edges )
  {
    if ( m.nodes[e.u].kind == model_node_kind::dummy )
    {
      e.dumpable = false;
    }
  }

  detail::model_connect( m );

  /* register locks: a unit-weight locked register is spliced into every
   * operand edge of an annotated node that is reachable from some dummy
   * through an annotation-free register-free path */
  {
    std::vector<uint8_t> from_dummy( m.nodes.size(), 0u );
    for ( auto id : m.topo_order_dag() )
    {
      for ( auto eid : m.in_edges[id] )
      {
        auto const& e = m.edges[eid];
        if ( e.back )
        {
          continue;
        }
        auto const& p = m.nodes[e.u];
        if ( p.kind == model_node_kind::dummy )
        {
          from_dummy[id] = 1u;
        }
        else if ( from_dummy[p.id] && !( p.kind == model_node_kind::gate && g.at( p.dfg_id ).annotated ) )
        {
          from_dummy[id] = 1u;
        }
      }
    }

    uint32_t lock_counter = 0u;
    auto const num_edges = static_cast<uint32_t>( m.edges.size() );
    for ( uint32_t eid = 0u; eid < num_edges; ++eid )
    {
      auto const u = m.edges[eid].u;
      auto const v = m.edges[eid].v;
      auto const& pv = m.nodes[v];
      if ( pv.kind != model_node_kind::gate || !g.at( pv.dfg_id ).annotated )
      {
        continue;
      }
      auto const& pu = m.nodes[u];
      bool const needs_lock = pu.kind == model_node_kind::dummy || ( from_dummy[u] && pu.kind == model_node_kind::gate );
      if ( !needs_lock )
      {
        continue;
      }
      ++lock_counter;
      auto ri = add_node( model_node_kind::lock_in, 0u, "R" + std::to_string( lock_counter ) + "i", 0 );
      auto ro = add_node( model_node_kind::lock_out, 0u, "R" + std::to_string( lock_counter ) + "o", 0 );
      m.locks.emplace_back( ri, ro );
      /* redirect: u -> ri -> ro -> v */
      auto targets = std::move( m.edges[eid].targets );
      auto const dump = m.edges[eid].dumpable;
      m.edges[eid].v = ri;
      m.edges[eid].targets.clear();
      model_edge le;
      le.id = static_cast<uint32_t>( m.edges.size() );
      le.u = ri;
      le.v = ro;
      le.weight = 1;
      le.lock = true;
      le.dumpable = dump;
      m.edges.push_back( le );
      model_edge oe;
      oe.id = static_cast<uint32_t>( m.edges.size() );
      oe.u = ro;
      oe.v = v;
      oe.weight = 0;
      oe.dumpable = dump;
      oe.targets = std::move( targets );
      m.edges.push_back( oe );
    }
  }

  detail::model_connect( m );

  /* back edge weighted with the maximum extra registers */
  m.back_weight = max_extra_regs( m );
  {
    model_edge be;
    be.id = static_cast<uint32_t>( m.edges.size() );
    be.u = m.sink;
    be.v = m.source;
    be.weight = static_cast<int>( m.back_weight );
    be.back = true;
    be.dumpable = true;
    m.back_edge = be.id;
    m.edges.push_back( be );
  }
  detail::model_connect( m );
  return m;
}

/*! DOT rendering for golden-file comparison; node label carries the
 * delay, edge label the weight. */
inline std::string model_to_dot( hls_model const& m )
{
  std::ostringstream os;
  os << "digraph hls_model {\n";
  for ( auto const& n : m.nodes )
  {
    os << "  n" << n.id << " [label=\"" << n.name << "/" << n.delay << "\"];\n";
  }
  for ( auto const& e : m.edges )
  {
    os << "  n" << e.u << " -> n" << e.v << " [label=\"" << e.weight << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

} // namespace maskedhls
