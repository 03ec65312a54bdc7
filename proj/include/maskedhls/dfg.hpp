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
  \file dfg.hpp
  \brief Dataflow graph of single-bit boolean operations with register annotations
*/

#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace maskedhls
{

enum class node_kind : uint8_t
{
  input,
  output,
  and_gate,
  xor_gate,
  not_gate,
  const0,
  const1
};

inline bool is_gate( node_kind k )
{
  return k == node_kind::and_gate || k == node_kind::xor_gate || k == node_kind::not_gate;
}

inline bool is_const( node_kind k )
{
  return k == node_kind::const0 || k == node_kind::const1;
}

inline uint32_t arity( node_kind k )
{
  switch ( k )
  {
  case node_kind::and_gate:
  case node_kind::xor_gate:
    return 2u;
  case node_kind::not_gate:
  case node_kind::output:
    return 1u;
  default:
    return 0u;
  }
}

inline char const* kind_name( node_kind k )
{
  switch ( k )
  {
  case node_kind::input:
    return "INPUT";
  case node_kind::output:
    return "OUTPUT";
  case node_kind::and_gate:
    return "AND";
  case node_kind::xor_gate:
    return "XOR";
  case node_kind::not_gate:
    return "NOT";
  case node_kind::const0:
    return "CONST0";
  case node_kind::const1:
    return "CONST1";
  }
  return "?";
}

/*! One node per operator occurrence.  `annotated` marks a register
 * annotation on the node's result wire. */
struct node
{
  uint32_t id{};
  node_kind kind{ node_kind::input };
  std::vector<uint32_t> args; /* operand node ids, position-indexed */
  bool annotated{ false };
  std::string name; /* wire name of the node's result */
};

struct diagnostic
{
  std::string check; /* violated invariant */
  uint32_t node_id;
  std::string message;
};

/*! \brief Directed acyclic dataflow graph.
 *
 * Nodes are stored in definition order; node ids equal vector indices.
 * Edges are implicit through `node::args` (operand-position indexed).
 */
class dfg
{
public:
  uint32_t add_input( std::string const& name )
  {
    auto const id = add_node( node_kind::input, {}, name, false );
    inputs_.push_back( id );
    return id;
  }

  uint32_t add_const( bool value, std::string const& name )
  {
    return add_node( value ? node_kind::const1 : node_kind::const0, {}, name, false );
  }

  uint32_t add_gate( node_kind kind, std::vector<uint32_t> args, std::string const& name, bool annotated = false )
  {
    return add_node( kind, std::move( args ), name, annotated );
  }

  uint32_t add_output( std::string const& name, uint32_t driver )
  {
    auto const id = add_node( node_kind::output, { driver }, name, false );
    outputs_.push_back( id );
    return id;
  }

  node const& at( uint32_t id ) const { return nodes_[id]; }
  node& at( uint32_t id ) { return nodes_[id]; }
  uint32_t size() const { return static_cast<uint32_t>( nodes_.size() ); }
  std::vector<node> const& nodes() const { return nodes_; }
  std::vector<uint32_t> const& inputs() const { return inputs_; }
  std::vector<uint32_t> const& outputs() const { return outputs_; }

  bool has_name( std::string const& n ) const { return by_name_.count( n ) != 0; }

  uint32_t id_of( std::string const& n ) const { return by_name_.at( n ); }

  void rename( uint32_t id, std::string const& new_name )
  {
    auto it = by_name_.find( nodes_[id].name );
    if ( it != by_name_.end() && it->second == id )
    {
      by_name_.erase( it );
    }
    nodes_[id].name = new_name;
    by_name_.emplace( new_name, id );
  }

  uint32_t num_gates() const
  {
    return static_cast<uint32_t>( std::count_if( nodes_.begin(), nodes_.end(), []( node const& v ) { return is_gate( v.kind ); } ) );
  }

  uint32_t num_gates( node_kind k ) const
  {
    return static_cast<uint32_t>( std::count_if( nodes_.begin(), nodes_.end(), [k]( node const& v ) { return v.kind == k; } ) );
  }

  uint32_t num_annotated() const
  {
    return static_cast<uint32_t>( std::count_if( nodes_.begin(), nodes_.end(), []( node const& v ) { return v.annotated; } ) );
  }

  /*! Topological order over node ids; empty if the graph has a cycle.
   * Definition order is used when it is already topological, so parse
   * results keep their stable numbering. */
  std::vector<uint32_t> topo_order() const
  {
    bool def_order_ok = true;
    for ( auto const& v : nodes_ )
    {
      for ( auto a : v.args )
      {
        if ( a >= v.id )
        {
          def_order_ok = false;
        }
      }
    }
    if ( def_order_ok )
    {
      std::vector<uint32_t> order( nodes_.size() );
      for ( uint32_t i = 0u; i < nodes_.size(); ++i )
      {
        order[i] = i;
      }
      return order;
    }
    return recompute_topo();
  }

  std::vector<std::vector<uint32_t>> fanouts() const
  {
    std::vector<std::vector<uint32_t>> fo( nodes_.size() );
    for ( auto const& v : nodes_ )
    {
      for ( auto a : v.args )
      {
        fo[a].push_back( v.id );
      }
    }
    return fo;
  }

  /*! Combinational evaluation; `in` is positionally aligned with inputs(). */
  std::vector<bool> eval( std::vector<bool> const& in ) const
  {
    std::vector<uint8_t> val( nodes_.size(), 0u );
    std::unordered_map<uint32_t, size_t> pos;
    for ( size_t i = 0u; i < inputs_.size(); ++i )
    {
      pos[inputs_[i]] = i;
    }
    for ( auto id : topo_order() )
    {
      auto const& v = nodes_[id];
      switch ( v.kind )
      {
      case node_kind::input:
        val[id] = in[pos[id]] ? 1u : 0u;
        break;
      case node_kind::const0:
        val[id] = 0u;
        break;
      case node_kind::const1:
        val[id] = 1u;
        break;
      case node_kind::and_gate:
        val[id] = val[v.args[0]] & val[v.args[1]];
        break;
      case node_kind::xor_gate:
        val[id] = val[v.args[0]] ^ val[v.args[1]];
        break;
      case node_kind::not_gate:
        val[id] = val[v.args[0]] ^ 1u;
        break;
      case node_kind::output:
        val[id] = val[v.args[0]];
        break;
      }
    }
    std::vector<bool> out( outputs_.size() );
    for ( size_t i = 0u; i < outputs_.size(); ++i )
    {
      out[i] = val[outputs_[i]] != 0u;
    }
    return out;
  }

  /*! Checks every graph invariant; the returned list is empty iff the
   * graph is well-formed. */
  std::vector<diagnostic> validate() const
  {
    std::vector<diagnostic> ds;
    auto const order = topo_order();
    if ( order.empty() && !nodes_.empty() )
    {
      ds.push_back( { "acyclic", 0u, "graph contains a cycle" } );
      return ds;
    }
    for ( auto const& v : nodes_ )
    {
      if ( v.args.size() != arity( v.kind ) )
      {
        ds.push_back( { "arity", v.id, std::string( kind_name( v.kind ) ) + " node '" + v.name + "' has " + std::to_string( v.args.size() ) + " operands" } );
      }
      for ( auto a : v.args )
      {
        if ( a >= nodes_.size() )
        {
          ds.push_back( { "operand", v.id, "operand id out of range" } );
        }
        else if ( nodes_[a].kind == node_kind::output )
        {
          ds.push_back( { "operand", v.id, "node reads from an output" } );
        }
      }
      if ( v.annotated && !is_gate( v.kind ) )
      {
        ds.push_back( { "annotation", v.id, std::string( "register annotation on " ) + kind_name( v.kind ) + " node '" + v.name + "'" } );
      }
    }
    /* dead code: every non-output node must reach an output */
    std::vector<uint8_t> live( nodes_.size(), 0u );
    for ( auto o : outputs_ )
    {
      live[o] = 1u;
    }
    for ( auto it = order.rbegin(); it != order.rend(); ++it )
    {
      if ( live[*it] )
      {
        for ( auto a : nodes_[*it].args )
        {
          live[a] = 1u;
        }
      }
    }
    for ( auto const& v : nodes_ )
    {
      if ( !live[v.id] )
      {
        ds.push_back( { "dead-code", v.id, "node '" + v.name + "' reaches no output" } );
      }
    }
    if ( outputs_.empty() )
    {
      ds.push_back( { "outputs", 0u, "graph has no outputs" } );
    }
    return ds;
  }

private:
  uint32_t add_node( node_kind kind, std::vector<uint32_t> args, std::string const& name, bool annotated )
  {
    node v;
    v.id = static_cast<uint32_t>( nodes_.size() );
    v.kind = kind;
    v.args = std::move( args );
    v.annotated = annotated;
    v.name = name;
    by_name_.emplace( name, v.id );
    nodes_.push_back( std::move( v ) );
    return nodes_.back().id;
  }

  std::vector<uint32_t> recompute_topo() const
  {
    std::vector<uint32_t> indeg( nodes_.size(), 0u );
    std::vector<std::vector<uint32_t>> fo( nodes_.size() );
    for ( auto const& v : nodes_ )
    {
      indeg[v.id] = static_cast<uint32_t>( v.args.size() );
      for ( auto a : v.args )
      {
        fo[a].push_back( v.id );
      }
    }
    std::vector<uint32_t> order, stack;
    for ( auto const& v : nodes_ )
    {
      if ( indeg[v.id] == 0u )
      {
        stack.push_back( v.id );
      }
    }
    while ( !stack.empty() )
    {
      auto const id = stack.back();
      stack.pop_back();
      order.push_back( id );
      for ( auto s : fo[id] )
      {
        if ( --indeg[s] == 0u )
        {
          stack.push_back( s );
        }
      }
    }
    if ( order.size() != nodes_.size() )
    {
      return {};
    }
    return order;
  }

  std::vector<node> nodes_;
  std::vector<uint32_t> inputs_;
  std::vector<uint32_t> outputs_;
  std::unordered_map<std::string, uint32_t> by_name_;
};

/*! Structural equality up to node renumbering and wire renaming.
 * Inputs and outputs are matched positionally; operand order is
 * significant (the frontend is structure-preserving by contract). */
inline bool isomorphic( dfg const& a, dfg const& b )
{
  if ( a.inputs().size() != b.inputs().size() || a.outputs().size() != b.outputs().size() )
  {
    return false;
  }
  std::vector<std::string> siga( a.size() ), sigb( b.size() );
  auto build = []( dfg const& g, std::vector<std::string>& sig ) {
    std::unordered_map<uint32_t, size_t> ipos;
    for ( size_t i = 0u; i < g.inputs().size(); ++i )
    {
      ipos[g.inputs()[i]] = i;
    }
    for ( auto id : g.topo_order() )
    {
      auto const& v = g.at( id );
      std::string s;
      if ( v.kind == node_kind::input )
      {
        s = "i" + std::to_string( ipos[id] );
      }
      else
      {
        s = kind_name( v.kind );
        s += v.annotated ? "@" : "";
        s += "(";
        for ( auto arg : v.args )
        {
          s += sig[arg];
          s += ",";
        }
        s += ")";
      }
      sig[id] = s;
    }
  };
  build( a, siga );
  build( b, sigb );
  for ( size_t i = 0u; i < a.outputs().size(); ++i )
  {
    if ( siga[a.outputs()[i]] != sigb[b.outputs()[i]] )
    {
      return false;
    }
  }
  return true;
}

} // namespace maskedhls
