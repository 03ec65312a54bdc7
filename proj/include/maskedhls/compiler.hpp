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
  \file compiler.hpp
  \brief End-to-end pipeline: parse -> [mask] -> model -> retime ->
  emit -> [check], with report emission

  Exit codes: 0 ok, 2 parse error, 3 validation error, 4 solver
  invariant violation, 5 equivalence failure.
*/

#pragma once

#include "codegen.hpp"
#include "gadgets.hpp"
#include "hls_model.hpp"
#include "json_io.hpp"
#include "netlist.hpp"
#include "parser.hpp"
#include "retimer.hpp"
#include "simcheck.hpp"

#include <chrono>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace maskedhls
{

enum class input_format : uint8_t
{
  auto_detect,
  c,
  json
};

struct compile_config
{
  std::string input_path;
  input_format format{ input_format::auto_detect };
  std::optional<gadget_kind> gadget;
  bool share_randoms{ true }; /* COMAR instances reuse one mask set */
  int target_clock{ 1 };
  bool naive{ false };
  bool run_check{ false };
  uint64_t check_trials{ 100000 };
  uint64_t seed{ 1 };
  std::optional<std::string> verilog_path;
  std::optional<std::string> source_path;
  std::optional<std::string> report_path;
  std::optional<std::string> constraints_path;
  std::optional<std::string> model_path;
  std::string module_name; /* defaults to the parsed function name */
};

enum class exit_code : int
{
  ok = 0,
  parse = 2,
  validation = 3,
  solver = 4,
  equivalence = 5
};

struct compile_result
{
  exit_code status{ exit_code::ok };
  std::string error;
  std::string design;
  std::optional<gadget_kind> gadget;
  bool naive_mode{ false };

  uint32_t ann_regs{ 0 };
  uint32_t bal_regs{ 0 };
  uint32_t total_regs{ 0 };
  uint32_t latency{ 0 };
  uint32_t nodes{ 0 };
  uint32_t model_nodes{ 0 };

  uint32_t naive_regs{ 0 };
  uint32_t naive_latency{ 0 };
  double savings_regs_pct{ 0.0 };
  double savings_latency_pct{ 0.0 };

  std::optional<equivalence_report> equivalence;
  double runtime_seconds{ 0.0 };

  pipelined_netlist net;
  dfg golden;

  nlohmann::json to_json() const
  {
    nlohmann::json j;
    j["schema"] = "maskedhls-report-v1";
    j["design"] = design;
    if ( gadget )
    {
      j["gadget"] = gadget_name( *gadget );
    }
    j["mode"] = naive_mode ? "naive" : "balance";
    j["ann_regs"] = ann_regs;
    j["bal_regs"] = bal_regs;
    j["total_regs"] = total_regs;
    j["registers"] = total_regs;
    j["latency"] = latency;
    j["nodes"] = nodes;
    j["model_nodes"] = model_nodes;
    j["naive_registers"] = naive_regs;
    j["naive_latency"] = naive_latency;
    j["savings_regs_pct"] = savings_regs_pct;
    j["savings_latency_pct"] = savings_latency_pct;
    if ( equivalence )
    {
      j["equivalent"] = equivalence->equivalent;
      j["trials"] = equivalence->trials;
      j["exhaustive"] = equivalence->exhaustive;
      auto ms = nlohmann::json::array();
      for ( auto const& m : equivalence->mismatches )
      {
        ms.push_back( { { "cycle", m.cycle }, { "wire", m.wire }, { "expected", m.expected }, { "got", m.got } } );
      }
      j["mismatches"] = ms;
    }
    j["runtime_seconds"] = runtime_seconds;
    return j;
  }
};

namespace detail
{

inline std::string read_file( std::string const& path )
{
  std::ifstream is( path, std::ios::binary );
  if ( !is )
  {
    throw std::runtime_error( "cannot open '" + path + "'" );
  }
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

inline void write_file( std::string const& path, std::string const& text )
{
  std::ofstream os( path, std::ios::binary );
  if ( !os )
  {
    throw std::runtime_error( "cannot write '" + path + "'" );
  }
  os << text;
}

inline std::string path_stem( std::string const& path )
{
  auto slash = path.find_last_of( "/\\" );
  auto base = slash == std::string::npos ? path : path.substr( slash + 1 );
  auto dot = base.find_last_of( '.' );
  return dot == std::string::npos ? base : base.substr( 0, dot );
}

} // namespace detail

/*! Runs the full pipeline on a source string (exposed for tests). */
inline compile_result compile_text( std::string const& text, compile_config cfg )
{
  using clock = std::chrono::steady_clock;
  auto const t0 = clock::now();
  compile_result res;
  res.naive_mode = cfg.naive;
  res.gadget = cfg.gadget;

  /* parse */
  dfg g;
  std::string fname = cfg.module_name;
  bool const is_json = cfg.format == input_format::json ||
                       ( cfg.format == input_format::auto_detect &&
                         text.find_first_not_of( " \t\r\n" ) != std::string::npos &&
                         text[text.find_first_not_of( " \t\r\n" )] == '{' );
  try
  {
    if ( is_json )
    {
      g = dfg_from_json( nlohmann::json::parse( text ) );
      if ( fname.empty() )
      {
        fname = cfg.input_path.empty() ? "top" : detail::path_stem( cfg.input_path );
      }
    }
    else
    {
      auto pr = parse_masked_c( text );
      g = std::move( pr.graph );
      if ( fname.empty() )
      {
        fname = pr.function_name;
      }
    }
  }
  catch ( std::exception const& e )
  {
    res.status = exit_code::parse;
    res.error = e.what();
    return res;
  }
  res.design = fname;

  /* validate + optional masking pass */
  try
  {
    auto ds = g.validate();
    if ( !ds.empty() )
    {
      res.status = exit_code::validation;
      res.error = ds.front().check + ": " + ds.front().message;
      return res;
    }
    if ( cfg.gadget )
    {
      if ( g.num_annotated() != 0u )
      {
        res.status = exit_code::validation;
        res.error = "masking pass requires annotation-free input";
        return res;
      }
      auto masked = apply_masking_pass( g, *cfg.gadget, cfg.share_randoms );
      g = std::move( masked.graph );
    }
  }
  catch ( std::exception const& e )
  {
    res.status = exit_code::validation;
    res.error = e.what();
    return res;
  }
  res.golden = g;
  res.nodes = g.size();

  /* model + retime (or naive cut) */
  try
  {
    auto const model = build_hls_model( g );
    res.model_nodes = static_cast<uint32_t>( model.nodes.size() );
    if ( cfg.model_path )
    {
      detail::write_file( *cfg.model_path, model_to_dot( model ) );
    }
    auto const wd = compute_wd( model );
    auto const cs = gen_constraints( model, wd, 1 );
    if ( cfg.constraints_path )
    {
      detail::write_file( *cfg.constraints_path, dump_constraints( model, cs ) );
    }
    auto const naive_net = naive_balance( g );
    res.naive_regs = naive_net.total_registers();
    res.naive_latency = naive_net.latency;
    if ( cfg.naive )
    {
      res.net = naive_net;
    }
    else
    {
      auto const sol = solve_constraints( cs, static_cast<uint32_t>( model.nodes.size() ) );
      res.net = apply_retiming( model, sol );
    }
  }
  catch ( std::exception const& e )
  {
    res.status = exit_code::solver;
    res.error = e.what();
    return res;
  }

  res.ann_regs = res.net.annotated_registers();
  res.total_regs = res.net.total_registers();
  res.bal_regs = res.total_regs - std::min( res.total_regs, res.ann_regs );
  res.latency = res.net.latency;
  if ( res.naive_regs > 0u )
  {
    res.savings_regs_pct = 100.0 * ( double( res.naive_regs ) - double( res.total_regs ) ) / double( res.naive_regs );
  }
  if ( res.naive_latency > 0u )
  {
    res.savings_latency_pct = 100.0 * ( double( res.naive_latency ) - double( res.latency ) ) / double( res.naive_latency );
  }

  /* artifacts */
  try
  {
    if ( cfg.source_path )
    {
      detail::write_file( *cfg.source_path, emit_balanced_source( res.net, fname ) );
    }
    if ( cfg.verilog_path )
    {
      detail::write_file( *cfg.verilog_path, emit_verilog( res.net, fname ).text );
    }
  }
  catch ( std::exception const& e )
  {
    res.status = exit_code::validation;
    res.error = e.what();
    return res;
  }

  /* functional check against the pre-balancing graph */
  if ( cfg.run_check )
  {
    res.equivalence = check_equivalence( res.net, res.golden, cfg.check_trials, cfg.seed );
    if ( !res.equivalence->equivalent )
    {
      res.status = exit_code::equivalence;
      res.error = "pipelined netlist differs from the combinational model";
    }
  }

  res.runtime_seconds = std::chrono::duration<double>( clock::now() - t0 ).count();
  if ( cfg.report_path )
  {
    detail::write_file( *cfg.report_path, res.to_json().dump( 2 ) + "\n" );
  }
  return res;
}

inline compile_result compile_file( compile_config cfg )
{
  std::string text;
  try
  {
    text = detail::read_file( cfg.input_path );
  }
  catch ( std::exception const& e )
  {
    compile_result res;
    res.status = exit_code::parse;
    res.error = e.what();
    return res;
  }
  if ( cfg.format == input_format::auto_detect && cfg.input_path.size() > 5 &&
       cfg.input_path.substr( cfg.input_path.size() - 5 ) == ".json" )
  {
    cfg.format = input_format::json;
  }
  return compile_text( text, std::move( cfg ) );
}

} // namespace maskedhls
