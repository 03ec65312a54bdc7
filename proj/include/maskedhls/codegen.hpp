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
  \file codegen.hpp
  \brief Balanced annotated source and pipelined Verilog emission

  Both emitters are one-to-one: exactly one statement per gate, exactly
  one flop per register, no optimization.  The Verilog subset is
  Verilog-2001 continuous assignments plus one `always @(posedge clk)`
  process per flop, without reset: outputs are valid after `latency`
  cycles of stable inputs.
*/

#pragma once

#include "netlist.hpp"

#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace maskedhls
{

namespace detail
{

/*! Stage-qualified reference names: stage 0 is the wire itself, stage k
 * is `<wire>_r<k>`. */
class stage_names
{
public:
  explicit stage_names( dfg const& g )
  {
    for ( auto const& v : g.nodes() )
    {
      taken_.insert( v.name );
    }
  }

  /*! Declares that the wire name itself denotes stage 1 (the defining
   * statement was emitted as `name = reg(expr)`). */
  void alias_stage1( dfg const& g, uint32_t driver )
  {
    names_.emplace( std::make_pair( driver, 1u ), g.at( driver ).name );
  }

  std::string ref( dfg const& g, uint32_t driver, uint32_t stage )
  {
    if ( stage == 0u )
    {
      return g.at( driver ).name;
    }
    auto key = std::make_pair( driver, stage );
    auto it = names_.find( key );
    if ( it != names_.end() )
    {
      return it->second;
    }
    std::string n = g.at( driver ).name + "_r" + std::to_string( stage );
    while ( taken_.count( n ) )
    {
      n += "_";
    }
    taken_.insert( n );
    names_.emplace( key, n );
    return n;
  }

private:
  struct pair_hash
  {
    size_t operator()( std::pair<uint32_t, uint32_t> const& p ) const
    {
      return ( static_cast<size_t>( p.first ) << 20 ) ^ p.second;
    }
  };
  std::unordered_map<std::pair<uint32_t, uint32_t>, std::string, pair_hash> names_;
  std::unordered_set<std::string> taken_;
};

inline bool is_verilog_keyword( std::string const& s )
{
  static std::set<std::string> const kws{
      "always", "and", "assign", "begin", "buf", "case", "default", "else", "end",
      "endcase", "endmodule", "for", "if", "initial", "inout", "input", "module",
      "nand", "negedge", "nor", "not", "or", "output", "posedge", "reg", "wire", "xor" };
  return kws.count( s ) != 0;
}

} // namespace detail

/*! Re-emits the netlist in the frontend dialect.  Every register is
 * rendered as a `reg(...)` annotation: the first register of a wire
 * wraps its defining expression when every consumer reads a delayed
 * stage; further stages (and registers on input wires) become identity
 * carriers `t = reg(prev ^ 0)`. */
inline std::string emit_balanced_source( pipelined_netlist const& net, std::string const& function_name )
{
  dfg const& g = net.graph;
  auto const wire_k = net.all_wire_regs();

  /* minimum stage a consumer reads per driver */
  std::vector<uint32_t> min_stage( g.size(), 0xffffffffu );
  for ( auto const& v : g.nodes() )
  {
    for ( size_t s = 0u; s < v.args.size(); ++s )
    {
      min_stage[v.args[s]] = std::min( min_stage[v.args[s]], net.arg_regs[v.id][s] );
    }
  }

  detail::stage_names names( g );
  std::ostringstream body;

  auto literal = [&]( uint32_t id ) {
    return g.at( id ).kind == node_kind::const1 ? std::string( "1" ) : std::string( "0" );
  };

  auto operand = [&]( uint32_t consumer, size_t slot ) {
    auto const a = g.at( consumer ).args[slot];
    if ( is_const( g.at( a ).kind ) )
    {
      return literal( a );
    }
    return names.ref( g, a, net.arg_regs[consumer][slot] );
  };

  /* register chain beyond the inline stage */
  auto emit_chain = [&]( uint32_t driver, uint32_t from_stage ) {
    for ( uint32_t s = from_stage; s <= wire_k[driver]; ++s )
    {
      auto prev = names.ref( g, driver, s - 1u );
      auto cur = names.ref( g, driver, s );
      body << "  " << cur << " = reg(" << prev << " ^ 0);\n";
    }
  };

  for ( auto id : g.topo_order() )
  {
    auto const& v = g.at( id );
    if ( v.kind == node_kind::input )
    {
      if ( wire_k[id] > 0u )
      {
        emit_chain( id, 1u );
      }
      continue;
    }
    if ( !is_gate( v.kind ) )
    {
      continue;
    }
    std::string expr;
    switch ( v.kind )
    {
    case node_kind::and_gate:
      expr = operand( id, 0 ) + " & " + operand( id, 1 );
      break;
    case node_kind::xor_gate:
      expr = operand( id, 0 ) + " ^ " + operand( id, 1 );
      break;
    case node_kind::not_gate:
      expr = "~" + operand( id, 0 );
      break;
    default:
      break;
    }
    bool const inline_reg = wire_k[id] > 0u && min_stage[id] >= 1u;
    if ( inline_reg )
    {
      /* the wire name denotes the stage-1 value */
      body << "  " << v.name << " = reg(" << expr << ");\n";
      names.alias_stage1( g, id );
      emit_chain( id, 2u );
    }
    else
    {
      body << "  " << v.name << " = " << expr << ";\n";
      emit_chain( id, 1u );
    }
  }

  for ( auto o : g.outputs() )
  {
    body << "  *" << g.at( o ).name << " = " << operand( o, 0 ) << ";\n";
  }

  std::ostringstream os;
  os << "int " << function_name << "(";
  bool first = true;
  for ( auto i : g.inputs() )
  {
    os << ( first ? "" : ", " ) << "bool " << g.at( i ).name;
    first = false;
  }
  for ( auto o : g.outputs() )
  {
    os << ( first ? "" : ", " ) << "bool *" << g.at( o ).name;
    first = false;
  }
  os << ") {\n"
     << body.str()
     << "  return 0;\n}\n";
  return os.str();
}

struct verilog_result
{
  std::string text;
  std::vector<std::string> renamed; /* identifiers that clashed with keywords */
};

/*! One-to-one pipelined Verilog: continuous assignment per gate, one
 * clocked process per flop, ports `clk, inputs..., outputs...`. */
inline verilog_result emit_verilog( pipelined_netlist const& net, std::string const& module_name )
{
  dfg const& g = net.graph;
  auto const wire_k = net.all_wire_regs();
  verilog_result res;

  /* identifier table with keyword renaming */
  std::vector<std::string> vname( g.size() );
  std::unordered_set<std::string> taken;
  for ( auto const& v : g.nodes() )
  {
    std::string n = v.name;
    if ( detail::is_verilog_keyword( n ) )
    {
      res.renamed.push_back( n );
      n += "_w";
    }
    while ( taken.count( n ) )
    {
      n += "_";
    }
    taken.insert( n );
    vname[v.id] = n;
  }

  auto stage_ref = [&]( uint32_t driver, uint32_t stage ) {
    if ( is_const( g.at( driver ).kind ) )
    {
      return std::string( g.at( driver ).kind == node_kind::const1 ? "1'b1" : "1'b0" );
    }
    if ( stage == 0u )
    {
      return vname[driver];
    }
    return vname[driver] + "_r" + std::to_string( stage );
  };

  auto operand = [&]( uint32_t consumer, size_t slot ) {
    auto const a = g.at( consumer ).args[slot];
    if ( is_const( g.at( a ).kind ) )
    {
      return stage_ref( a, 0u );
    }
    return stage_ref( a, net.arg_regs[consumer][slot] );
  };

  std::ostringstream os;
  os << "module " << module_name << "(clk";
  for ( auto i : g.inputs() )
  {
    os << ", " << vname[i];
  }
  for ( auto o : g.outputs() )
  {
    os << ", " << vname[o];
  }
  os << ");\n";
  os << "  input clk;\n";
  for ( auto i : g.inputs() )
  {
    os << "  input " << vname[i] << ";\n";
  }
  for ( auto o : g.outputs() )
  {
    os << "  output " << vname[o] << ";\n";
  }

  /* declarations in topological order by node id */
  for ( auto id : g.topo_order() )
  {
    auto const& v = g.at( id );
    if ( is_gate( v.kind ) )
    {
      os << "  wire " << vname[id] << ";\n";
    }
    if ( ( is_gate( v.kind ) || v.kind == node_kind::input ) && wire_k[id] > 0u )
    {
      for ( uint32_t s = 1u; s <= wire_k[id]; ++s )
      {
        os << "  reg " << stage_ref( id, s ) << ";\n";
      }
    }
  }

  os << "\n";
  for ( auto id : g.topo_order() )
  {
    auto const& v = g.at( id );
    if ( !is_gate( v.kind ) )
    {
      continue;
    }
    os << "  assign " << vname[id] << " = ";
    switch ( v.kind )
    {
    case node_kind::and_gate:
      os << operand( id, 0 ) << " & " << operand( id, 1 );
      break;
    case node_kind::xor_gate:
      os << operand( id, 0 ) << " ^ " << operand( id, 1 );
      break;
    case node_kind::not_gate:
      os << "~" << operand( id, 0 );
      break;
    default:
      break;
    }
    os << ";\n";
  }

  os << "\n";
  for ( auto id : g.topo_order() )
  {
    auto const& v = g.at( id );
    if ( !( is_gate( v.kind ) || v.kind == node_kind::input ) )
    {
      continue;
    }
    for ( uint32_t s = 1u; s <= wire_k[id]; ++s )
    {
      os << "  always @(posedge clk) " << stage_ref( id, s ) << " <= " << stage_ref( id, s - 1u ) << ";\n";
    }
  }

  os << "\n";
  for ( auto o : g.outputs() )
  {
    os << "  assign " << vname[o] << " = " << operand( o, 0 ) << ";\n";
  }
  os << "endmodule\n";
  res.text = os.str();
  return res;
}

} // namespace maskedhls
