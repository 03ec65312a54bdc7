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
  \file json_io.hpp
  \brief JSON netlist interchange

  Canonical schema:
    {"inputs":[...], "outputs":[...],
     "nodes":[{"id":n, "kind":"AND", "args":[id,id], "reg":bool, "name":"w"}, ...]}
*/

#pragma once

#include "dfg.hpp"

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>

namespace maskedhls
{

class json_format_error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline node_kind kind_from_string( std::string const& s )
{
  if ( s == "INPUT" )
    return node_kind::input;
  if ( s == "OUTPUT" )
    return node_kind::output;
  if ( s == "AND" )
    return node_kind::and_gate;
  if ( s == "XOR" )
    return node_kind::xor_gate;
  if ( s == "NOT" )
    return node_kind::not_gate;
  if ( s == "CONST0" )
    return node_kind::const0;
  if ( s == "CONST1" )
    return node_kind::const1;
  throw json_format_error( "unknown node kind '" + s + "'" );
}

inline nlohmann::json dfg_to_json( dfg const& g )
{
  nlohmann::json j;
  j["inputs"] = nlohmann::json::array();
  for ( auto i : g.inputs() )
  {
    j["inputs"].push_back( g.at( i ).name );
  }
  j["outputs"] = nlohmann::json::array();
  for ( auto o : g.outputs() )
  {
    j["outputs"].push_back( g.at( o ).name );
  }
  j["nodes"] = nlohmann::json::array();
  for ( auto const& v : g.nodes() )
  {
    nlohmann::json n;
    n["id"] = v.id;
    n["kind"] = kind_name( v.kind );
    n["name"] = v.name;
    if ( !v.args.empty() )
    {
      n["args"] = v.args;
    }
    if ( v.annotated )
    {
      n["reg"] = true;
    }
    j["nodes"].push_back( std::move( n ) );
  }
  return j;
}

/*! Reads the canonical netlist schema.  External ids may be sparse;
 * they are remapped densely in ascending id order (ids must already be
 * topological, i.e. operands precede consumers). */
inline dfg dfg_from_json( nlohmann::json const& j )
{
  if ( !j.contains( "nodes" ) || !j.contains( "inputs" ) || !j.contains( "outputs" ) )
  {
    throw json_format_error( "netlist requires 'inputs', 'outputs' and 'nodes'" );
  }

  std::map<uint64_t, nlohmann::json const*> by_id;
  for ( auto const& n : j["nodes"] )
  {
    auto const id = n.at( "id" ).get<uint64_t>();
    if ( !by_id.emplace( id, &n ).second )
    {
      throw json_format_error( "duplicate node id " + std::to_string( id ) );
    }
  }

  dfg g;
  std::map<uint64_t, uint32_t> remap;
  std::unordered_map<std::string, uint32_t> input_ids;
  std::unordered_map<std::string, uint32_t> node_by_name;

  /* inputs first, in port order */
  uint32_t unnamed = 0u;
  auto name_of = [&]( nlohmann::json const& n, uint64_t id ) {
    if ( n.contains( "name" ) )
    {
      return n["name"].get<std::string>();
    }
    (void)unnamed;
    return "n" + std::to_string( id );
  };

  for ( auto const& iname : j["inputs"] )
  {
    auto const nm = iname.get<std::string>();
    bool found = false;
    for ( auto const& [id, n] : by_id )
    {
      if ( n->at( "kind" ).get<std::string>() == "INPUT" && name_of( *n, id ) == nm )
      {
        remap[id] = g.add_input( nm );
        found = true;
        break;
      }
    }
    if ( !found )
    {
      throw json_format_error( "input '" + nm + "' has no INPUT node" );
    }
  }

  /* remaining nodes in ascending id order; outputs deferred */
  std::vector<std::pair<uint64_t, nlohmann::json const*>> output_nodes;
  for ( auto const& [id, n] : by_id )
  {
    auto const kind = kind_from_string( n->at( "kind" ).get<std::string>() );
    if ( kind == node_kind::input )
    {
      if ( !remap.count( id ) )
      {
        throw json_format_error( "INPUT node " + std::to_string( id ) + " not listed in 'inputs'" );
      }
      continue;
    }
    if ( kind == node_kind::output )
    {
      output_nodes.emplace_back( id, n );
      continue;
    }
    std::vector<uint32_t> args;
    if ( n->contains( "args" ) )
    {
      for ( auto const& a : ( *n )["args"] )
      {
        auto const ext = a.get<uint64_t>();
        auto it = remap.find( ext );
        if ( it == remap.end() )
        {
          throw json_format_error( "node " + std::to_string( id ) + " references id " + std::to_string( ext ) + " which is undefined or not topologically ordered" );
        }
        args.push_back( it->second );
      }
    }
    bool const reg = n->contains( "reg" ) && ( *n )["reg"].get<bool>();
    auto const nm = name_of( *n, id );
    if ( is_const( kind ) )
    {
      remap[id] = g.add_const( kind == node_kind::const1, nm );
    }
    else
    {
      remap[id] = g.add_gate( kind, std::move( args ), nm, reg );
    }
    node_by_name[nm] = remap[id];
  }

  /* outputs in port order */
  std::unordered_map<std::string, std::pair<uint64_t, nlohmann::json const*>> out_by_name;
  for ( auto const& [id, n] : output_nodes )
  {
    out_by_name[name_of( *n, id )] = { id, n };
  }
  for ( auto const& oname : j["outputs"] )
  {
    auto const nm = oname.get<std::string>();
    auto it = out_by_name.find( nm );
    if ( it == out_by_name.end() )
    {
      throw json_format_error( "output '" + nm + "' has no OUTPUT node" );
    }
    auto const* n = it->second.second;
    if ( !n->contains( "args" ) || ( *n )["args"].size() != 1 )
    {
      throw json_format_error( "output '" + nm + "' must have exactly one driver" );
    }
    auto const ext = ( *n )["args"][0].get<uint64_t>();
    auto rit = remap.find( ext );
    if ( rit == remap.end() )
    {
      throw json_format_error( "output '" + nm + "' references undefined id" );
    }
    g.add_output( nm, rit->second );
  }
  return g;
}

} // namespace maskedhls
