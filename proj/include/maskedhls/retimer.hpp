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
  \file retimer.hpp
  \brief Retiming constraints, shortest-path solve and application

  Internal convention: a retiming label r(v) counts registers moved from
  the outputs to the inputs of v, so a retimed edge weight is
  w_r(u->v) = w + r(v) - r(u).  Feasibility demands r(u) - r(v) <= w per
  edge; a critical-path constraint demands r(u) - r(v) <= W(u,v) - 1 for
  node pairs whose register-minimal connection exceeds the target clock.

  Pairs connected only through the back edge get anticipatory bounds:
  the wrap-around connection carries the back-edge weight plus one
  further register whenever the u-to-sink suffix already violates the
  clock.  Those constraints are satisfied by construction and exist to
  mirror the tool's constraint table layout.
*/

#pragma once

#include "hls_model.hpp"
#include "netlist.hpp"

#include <cstdint>
#include <deque>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace maskedhls
{

struct path_matrices
{
  uint32_t n{ 0 };
  std::vector<int32_t> w; /* min registers over DAG paths; INF when unreachable */
  std::vector<int32_t> d; /* max total node delay among W-minimal paths */

  static constexpr int32_t inf = std::numeric_limits<int32_t>::max() / 4;

  int32_t& W( uint32_t u, uint32_t v ) { return w[static_cast<size_t>( u ) * n + v]; }
  int32_t& D( uint32_t u, uint32_t v ) { return d[static_cast<size_t>( u ) * n + v]; }
  int32_t W( uint32_t u, uint32_t v ) const { return w[static_cast<size_t>( u ) * n + v]; }
  int32_t D( uint32_t u, uint32_t v ) const { return d[static_cast<size_t>( u ) * n + v]; }
  bool reachable( uint32_t u, uint32_t v ) const { return W( u, v ) < inf; }
};

/*! All-pairs (register count, path delay) over the acyclic core of the
 * model: lexicographic shortest path minimizing registers and, among
 * register-minimal paths, maximizing total delay. */
inline path_matrices compute_wd( hls_model const& m )
{
  path_matrices pm;
  pm.n = static_cast<uint32_t>( m.nodes.size() );
  pm.w.assign( static_cast<size_t>( pm.n ) * pm.n, path_matrices::inf );
  pm.d.assign( static_cast<size_t>( pm.n ) * pm.n, 0 );

  auto const order = m.topo_order_dag();
  for ( uint32_t s = 0u; s < pm.n; ++s )
  {
    pm.W( s, s ) = 0;
    pm.D( s, s ) = m.nodes[s].delay;
    for ( auto u : order )
    {
      if ( pm.W( s, u ) == path_matrices::inf )
      {
        continue;
      }
      auto const wu = pm.W( s, u );
      auto const du = pm.D( s, u );
      for ( auto eid : m.out_edges[u] )
      {
        auto const& e = m.edges[eid];
        if ( e.back )
        {
          continue;
        }
        int32_t const wv = wu + e.weight;
        int32_t const dv = du + m.nodes[e.v].delay;
        if ( wv < pm.W( s, e.v ) || ( wv == pm.W( s, e.v ) && dv > pm.D( s, e.v ) ) )
        {
          pm.W( s, e.v ) = wv;
          pm.D( s, e.v ) = dv;
        }
      }
    }
  }
  return pm;
}

enum class constraint_kind : uint8_t
{
  feasibility,
  critical_path,
  lock_equality
};

/*! One difference inequality r(lhs) - r(rhs) <= bound. */
struct diff_constraint
{
  uint32_t lhs{}, rhs{};
  int32_t bound{};
  constraint_kind kind{ constraint_kind::feasibility };
  bool dumpable{ true };
};

/*! Feasibility constraints per edge, critical-path constraints per node
 * pair exceeding the clock, and lock equalities.  Exact duplicates are
 * removed within each kind. */
inline std::vector<diff_constraint> gen_constraints( hls_model const& m, path_matrices const& wd, int c = 1 )
{
  std::vector<diff_constraint> cs;
  std::set<std::tuple<uint32_t, uint32_t, int32_t, uint8_t>> seen;
  auto push = [&]( uint32_t lhs, uint32_t rhs, int32_t bound, constraint_kind k, bool dumpable ) {
    if ( seen.emplace( lhs, rhs, bound, static_cast<uint8_t>( k ) ).second )
    {
      cs.push_back( { lhs, rhs, bound, k, dumpable } );
    }
  };

  for ( auto const& e : m.edges )
  {
    push( e.u, e.v, e.weight, constraint_kind::feasibility, e.dumpable );
  }

  auto const n = static_cast<uint32_t>( m.nodes.size() );
  auto const back_w = static_cast<int32_t>( m.back_weight );
  for ( uint32_t u = 0u; u < n; ++u )
  {
    bool const suffix_hot = wd.reachable( u, m.sink ) && wd.D( u, m.sink ) > c;
    for ( uint32_t v = 0u; v < n; ++v )
    {
      if ( u == v )
      {
        continue;
      }
      if ( wd.reachable( u, v ) )
      {
        if ( wd.D( u, v ) > c )
        {
          push( u, v, wd.W( u, v ) - 1, constraint_kind::critical_path, true );
        }
      }
      else if ( wd.reachable( u, m.sink ) && wd.reachable( m.source, v ) )
      {
        bool const prefix_hot = wd.D( m.source, v ) > c;
        if ( !suffix_hot && !prefix_hot )
        {
          continue;
        }
        int32_t const bound = wd.W( u, m.sink ) + back_w + wd.W( m.source, v ) - 1 + ( suffix_hot ? 1 : 0 );
        push( u, v, bound, constraint_kind::critical_path, true );
      }
    }
  }

  for ( auto const& [ri, ro] : m.locks )
  {
    push( ri, ro, 0, constraint_kind::lock_equality, true );
    push( ro, ri, 0, constraint_kind::lock_equality, true );
  }
  return cs;
}

class negative_cycle_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class constraint_violation : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct retiming_solution
{
  std::vector<int32_t> labels;
};

/*! Single-source shortest path over the constraint graph with a virtual
 * node holding zero-weight edges to every label node.  Label-correcting
 * (SPFA) rather than Dijkstra: critical-path bounds can be negative.  A
 * negative cycle signals a malformed model and raises
 * negative_cycle_error.
 *
 * The graph is oriented so that the distances anchor the pointwise
 * minimal label vector: registers settle as late as the constraints
 * allow, which reproduces the reference placements (balancing registers
 * sit on gate outputs rather than being smeared across input wires). */
inline retiming_solution solve_constraints( std::vector<diff_constraint> const& cs, uint32_t num_nodes )
{
  /* minimizing r is maximizing y = -r; constraint r(u) - r(v) <= k
   * reads y(v) - y(u) <= k, giving edge u -> v of weight k */
  std::vector<std::vector<std::pair<uint32_t, int32_t>>> adj( num_nodes );
  for ( auto const& c : cs )
  {
    adj[c.lhs].emplace_back( c.rhs, c.bound );
  }

  /* distances start at 0: the virtual source connects to every node */
  std::vector<int32_t> dist( num_nodes, 0 );
  std::vector<uint8_t> inq( num_nodes, 1u );
  std::vector<uint32_t> relaxed( num_nodes, 0u );
  std::deque<uint32_t> q;
  for ( uint32_t v = 0u; v < num_nodes; ++v )
  {
    q.push_back( v );
  }
  while ( !q.empty() )
  {
    auto const v = q.front();
    q.pop_front();
    inq[v] = 0u;
    for ( auto const& [u, k] : adj[v] )
    {
      if ( dist[v] + k < dist[u] )
      {
        dist[u] = dist[v] + k;
        if ( !inq[u] )
        {
          if ( ++relaxed[u] > num_nodes + 1u )
          {
            throw negative_cycle_error( "negative cycle in constraint graph (model construction bug)" );
          }
          inq[u] = 1u;
          q.push_back( u );
        }
      }
    }
  }
  retiming_solution sol;
  sol.labels.resize( num_nodes );
  for ( uint32_t v = 0u; v < num_nodes; ++v )
  {
    sol.labels[v] = -dist[v];
  }
  return sol;
}

/*! Retimed weight of a model edge under Eq. w_r = w + r(v) - r(u). */
inline int32_t retimed_weight( hls_model const& m, retiming_solution const& sol, model_edge const& e )
{
  return e.weight + sol.labels[e.v] - sol.labels[e.u];
}

/*! Applies the labels: recomputes every edge weight, strips back edge,
 * dummy nodes and lock structures (discarding the deliberately inserted
 * lock register), and accumulates the remaining registers onto the
 * producing wires of the original graph. */
inline pipelined_netlist apply_retiming( hls_model const& m, retiming_solution const& sol )
{
  /* bug guards: every constraint the solver saw must hold */
  for ( auto const& e : m.edges )
  {
    if ( retimed_weight( m, sol, e ) < 0 )
    {
      throw constraint_violation( "negative retimed weight on edge " + m.nodes[e.u].name + " -> " + m.nodes[e.v].name );
    }
  }
  for ( auto const& [ri, ro] : m.locks )
  {
    if ( sol.labels[ri] != sol.labels[ro] )
    {
      throw constraint_violation( "lock register moved by retiming" );
    }
  }

  dfg const& g = *m.graph;
  pipelined_netlist net;
  net.graph = g;
  net.latency = m.back_weight;
  net.arg_regs.resize( g.size() );
  for ( auto const& v : g.nodes() )
  {
    net.arg_regs[v.id].assign( v.args.size(), 0u );
  }

  auto unique_in_edge = [&]( uint32_t node ) -> model_edge const& {
    if ( m.in_edges[node].size() != 1u )
    {
      throw constraint_violation( "synthetic node without unique in-edge" );
    }
    return m.edges[m.in_edges[node][0]];
  };

  for ( auto const& e : m.edges )
  {
    if ( e.back || e.targets.empty() )
    {
      continue;
    }
    int32_t total = retimed_weight( m, sol, e );
    uint32_t cur = e.u;
    while ( true )
    {
      auto const k = m.nodes[cur].kind;
      if ( k == model_node_kind::dummy || k == model_node_kind::lock_in || k == model_node_kind::lock_out )
      {
        auto const& ie = unique_in_edge( cur );
        total += retimed_weight( m, sol, ie ) - ( ie.lock ? 1 : 0 );
        cur = ie.u;
      }
      else
      {
        break;
      }
    }
    if ( total < 0 )
    {
      throw constraint_violation( "negative register count after lock removal" );
    }
    for ( auto const& [dfg_id, slot] : e.targets )
    {
      net.arg_regs[dfg_id][slot] = static_cast<uint32_t>( total );
    }
  }
  return net;
}

/*! Table-style rendering of the constraint system.  Feasibility rows
 * follow the head-minus-tail layout of the tool's constraint tables;
 * critical-path and lock rows print the inequality as stored.  Rows are
 * sorted lexicographically inside each section. */
inline std::string dump_constraints( hls_model const& m, std::vector<diff_constraint> const& cs )
{
  std::vector<std::string> feas, crit, lock;
  for ( auto const& c : cs )
  {
    if ( !c.dumpable )
    {
      continue;
    }
    std::ostringstream os;
    switch ( c.kind )
    {
    case constraint_kind::feasibility:
      os << "r(" << m.nodes[c.rhs].name << ") - r(" << m.nodes[c.lhs].name << ") <= " << c.bound;
      feas.push_back( os.str() );
      break;
    case constraint_kind::critical_path:
      os << "r(" << m.nodes[c.lhs].name << ") - r(" << m.nodes[c.rhs].name << ") <= " << c.bound;
      crit.push_back( os.str() );
      break;
    case constraint_kind::lock_equality:
      os << "r(" << m.nodes[c.lhs].name << ") - r(" << m.nodes[c.rhs].name << ") <= " << c.bound;
      lock.push_back( os.str() );
      break;
    }
  }
  std::sort( feas.begin(), feas.end() );
  std::sort( crit.begin(), crit.end() );
  std::sort( lock.begin(), lock.end() );
  std::ostringstream os;
  os << "# feasibility\n";
  for ( auto const& s : feas )
  {
    os << s << "\n";
  }
  os << "# critical path\n";
  for ( auto const& s : crit )
  {
    os << s << "\n";
  }
  if ( !lock.empty() )
  {
    os << "# register locks\n";
    for ( auto const& s : lock )
    {
      os << s << "\n";
    }
  }
  return os.str();
}

/*! Convenience pipeline: model -> matrices -> constraints -> labels ->
 * balanced netlist. */
inline pipelined_netlist balance( hls_model const& m, int c = 1 )
{
  auto wd = compute_wd( m );
  auto cs = gen_constraints( m, wd, c );
  auto sol = solve_constraints( cs, static_cast<uint32_t>( m.nodes.size() ) );
  return apply_retiming( m, sol );
}

} // namespace maskedhls
