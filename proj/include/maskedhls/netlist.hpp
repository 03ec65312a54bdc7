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
  \file netlist.hpp
  \brief Balanced pipelined netlist: the dataflow graph plus per-operand
  register counts

  Registers live on wires.  `arg_regs[v][s]` is the number of registers
  between the producer of operand `s` of node `v` and the node itself;
  a producer shared by several consumers keeps one register chain and
  each consumer taps its own stage, so the physical flop count of a wire
  is the maximum stage over its consumers.
*/

#pragma once

#include "dfg.hpp"

#include <cstdint>
#include <vector>

namespace maskedhls
{

struct pipelined_netlist
{
  dfg graph;
  std::vector<std::vector<uint32_t>> arg_regs; /* parallel to node args */
  uint32_t latency{ 0 };

  /*! Physical registers on the wire driven by `driver`. */
  uint32_t wire_regs( uint32_t driver ) const
  {
    uint32_t k = 0u;
    for ( auto const& v : graph.nodes() )
    {
      for ( size_t s = 0u; s < v.args.size(); ++s )
      {
        if ( v.args[s] == driver )
        {
          k = std::max( k, arg_regs[v.id][s] );
        }
      }
    }
    return k;
  }

  /*! All wire register counts in one pass; indexed by driver node id. */
  std::vector<uint32_t> all_wire_regs() const
  {
    std::vector<uint32_t> k( graph.size(), 0u );
    for ( auto const& v : graph.nodes() )
    {
      for ( size_t s = 0u; s < v.args.size(); ++s )
      {
        k[v.args[s]] = std::max( k[v.args[s]], arg_regs[v.id][s] );
      }
    }
    return k;
  }

  /*! Total physical register (flop) count. */
  uint32_t total_registers() const
  {
    uint32_t total = 0u;
    for ( auto r : all_wire_regs() )
    {
      total += r;
    }
    return total;
  }

  /*! Registers demanded by annotations (one per annotated node). */
  uint32_t annotated_registers() const { return graph.num_annotated(); }

  /*! Registers added purely for path balancing. */
  uint32_t balancing_registers() const
  {
    auto const t = total_registers();
    auto const a = annotated_registers();
    return t >= a ? t - a : 0u;
  }
};

} // namespace maskedhls
