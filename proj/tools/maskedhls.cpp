#include <maskedhls/compiler.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main( int argc, char** argv )
{
  CLI::App app{ "maskedhls: register-balancing HLS for gadget-masked circuits" };

  maskedhls::compile_config cfg;
  std::string format = "auto";
  std::string gadget;
  bool no_share_randoms = false;
  uint64_t trials = 100000;

  app.add_option( "input", cfg.input_path, "input program (.c dialect or .json netlist)" )->required();
  app.add_option( "--format", format, "input format: c, json or auto" )
      ->check( CLI::IsMember( { "c", "json", "auto" } ) );
  app.add_option( "--gadget", gadget, "mask the (annotation-free) input with a gadget" )
      ->check( CLI::IsMember( { "dom", "hpc1", "hpc2", "comar" } ) );
  app.add_flag( "--no-share-randoms", no_share_randoms, "give every COMAR instance fresh masks" );
  app.add_option( "--clock", cfg.target_clock, "target clock period (reporting only)" );
  app.add_flag( "--naive", cfg.naive, "full-cut baseline instead of retiming" );
  app.add_flag( "--check", cfg.run_check, "verify the pipelined netlist against the combinational model" );
  app.add_option( "--trials", trials, "random vectors for --check on wide circuits" );
  app.add_option( "--emit-verilog", cfg.verilog_path, "write pipelined Verilog" );
  app.add_option( "--emit-source", cfg.source_path, "write register-balanced annotated source" );
  app.add_option( "--report", cfg.report_path, "write the JSON report" );
  app.add_option( "--dump-constraints", cfg.constraints_path, "write the constraint tables" );
  app.add_option( "--dump-model", cfg.model_path, "write the retiming model as DOT" );
  app.add_option( "--module", cfg.module_name, "module/function name override" );

  CLI11_PARSE( app, argc, argv );

  cfg.format = format == "c"      ? maskedhls::input_format::c
               : format == "json" ? maskedhls::input_format::json
                                  : maskedhls::input_format::auto_detect;
  if ( !gadget.empty() )
  {
    cfg.gadget = maskedhls::gadget_from_string( gadget );
  }
  cfg.share_randoms = !no_share_randoms;
  cfg.check_trials = trials;
  if ( char const* s = std::getenv( "MASKEDHLS_SEED" ) )
  {
    cfg.seed = std::strtoull( s, nullptr, 10 );
  }

  auto const res = maskedhls::compile_file( cfg );
  if ( res.status != maskedhls::exit_code::ok )
  {
    std::cerr << "maskedhls: error: " << res.error << "\n";
    return static_cast<int>( res.status );
  }

  std::cout << res.design
            << ": ann_regs=" << res.ann_regs
            << " bal_regs=" << res.bal_regs
            << " total_regs=" << res.total_regs
            << " latency=" << res.latency
            << " naive_regs=" << res.naive_regs
            << " naive_latency=" << res.naive_latency;
  if ( res.equivalence )
  {
    std::cout << " equivalent=" << ( res.equivalence->equivalent ? "true" : "false" )
              << " trials=" << res.equivalence->trials;
  }
  std::cout << " runtime=" << res.runtime_seconds << "s\n";
  return 0;
}
