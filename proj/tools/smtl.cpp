/* smtl: command-line driver for synthesis, mapping, evaluation and sweeps */

#include <smtl/devices.hpp>
#include <smtl/errors.hpp>
#include <smtl/evaluator.hpp>
#include <smtl/mapper.hpp>
#include <smtl/netlist.hpp>
#include <smtl/serialization.hpp>
#include <smtl/synthesis.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#ifndef SMTL_DEFAULT_PARAMS
#define SMTL_DEFAULT_PARAMS ""
#endif

namespace
{

using namespace smtl;

enum exit_code : int
{
  ok = 0,
  invalid = 1,
  not_equivalent = 2,
  infeasible = 3,
  mismatch = 4,
  timing = 5
};

/* thrown by command bodies to return a specific code after reporting */
struct command_failure
{
  int code;
  std::string message;
};

std::string default_output( std::string const& input, std::string const& suffix )
{
  auto stem = std::filesystem::path( input ).filename().string();
  for ( auto const* ext : { ".tln.json", ".mapped.json", ".json", ".bench" } )
  {
    std::string const e( ext );
    if ( stem.size() > e.size() && stem.compare( stem.size() - e.size(), e.size(), e ) == 0 )
    {
      stem.resize( stem.size() - e.size() );
      break;
    }
  }
  return stem + suffix;
}

boolean_network load_network( std::string const& path )
{
  if ( path.size() > 5 && path.compare( path.size() - 5, 5, ".json" ) == 0 )
  {
    return network_from_json( read_text_file( path ) );
  }
  return read_bench_file( path );
}

device_params load_params( std::string const& explicit_path )
{
  std::string path = explicit_path;
  if ( path.empty() )
  {
    if ( auto const* env = std::getenv( "SMTL_PARAMS" ); env && *env )
    {
      path = env;
    }
    else if ( std::filesystem::exists( SMTL_DEFAULT_PARAMS ) )
    {
      path = SMTL_DEFAULT_PARAMS;
    }
  }
  return path.empty() ? device_params{} : device_params_from_json( read_text_file( path ) );
}

pattern_set make_vectors( uint32_t inputs, uint64_t count, uint64_t seed )
{
  if ( inputs <= 20u && ( uint64_t{ 1 } << inputs ) <= count )
  {
    return pattern_set::exhaustive( inputs );
  }
  return pattern_set::random( inputs, count, seed );
}

void require_grid( std::vector<double> const& grid, char const* what )
{
  if ( grid.empty() )
  {
    throw std::invalid_argument( std::string( what ) + " grid is empty" );
  }
}

struct synth_options
{
  std::string bench, output;
  uint32_t fanin = default_fanin_limit;
  int w_max = default_w_max;
  bool no_collapse = false;
  uint64_t vectors = 10000, seed = 1;
};

void run_synth( synth_options const& o )
{
  auto const net = load_network( o.bench );
  synthesis_params sp{ o.fanin, o.w_max, !o.no_collapse };
  synthesis_stats stats;
  auto tln = synthesize_tln( net, sp, &stats );
  auto const eq = verify_equivalence( net, tln, equivalence_mode::automatic( net.num_inputs(), o.vectors, o.seed ) );

  std::cout << "nodes " << tln.num_nodes() << "\nlevels " << tln.depth() << "\nmax_fanin " << tln.max_fanin() << "\nmerges "
            << stats.merges << "\nequivalence " << ( eq.equivalent ? "pass" : "FAIL" ) << " ("
            << ( eq.exhaustive ? "exhaustive" : "random, seed " + std::to_string( eq.seed ) ) << ", " << eq.vectors << " vectors)\n";
  if ( !eq.equivalent )
  {
    throw command_failure{ not_equivalent, "synthesized network is not equivalent to the source" };
  }
  auto const out = o.output.empty() ? default_output( o.bench, ".tln.json" ) : o.output;
  write_text_file_atomic( out, tln_to_json( { std::move( tln ), sp, net } ) );
  std::cout << "wrote " << out << "\n";
}

struct map_options
{
  std::string tln, output, subarray;
  mapping_params params;
  uint64_t vectors = 10000, seed = 1;
};

void run_map( map_options o )
{
  auto doc = tln_from_json( read_text_file( o.tln ) );
  if ( !o.subarray.empty() )
  {
    auto const x = o.subarray.find_first_of( "xX" );
    try
    {
      if ( x == std::string::npos )
        throw std::invalid_argument( "" );
      std::size_t used = 0;
      o.params.subarray_rows = static_cast<uint32_t>( std::stoul( o.subarray.substr( 0, x ), &used ) );
      o.params.subarray_cols = static_cast<uint32_t>( std::stoul( o.subarray.substr( x + 1 ), &used ) );
      if ( used != o.subarray.size() - x - 1 || !o.params.subarray_rows || !o.params.subarray_cols )
        throw std::invalid_argument( "" );
    }
    catch ( std::exception const& )
    {
      throw std::invalid_argument( "--subarray expects ROWSxCOLS, got '" + o.subarray + "'" );
    }
  }
  if ( doc.synthesis )
  {
    o.params.w_max = doc.synthesis->w_max;
  }
  check_mapping_params( o.params );
  auto design = map_design( doc.tln, o.params, doc.source );
  if ( design.source )
  {
    auto const eq = verify_equivalence( *design.source, design.staged.tln,
                                        equivalence_mode::automatic( design.source->num_inputs(), o.vectors, o.seed ) );
    if ( !eq.equivalent )
    {
      throw command_failure{ not_equivalent, "mapped network is not equivalent to the source" };
    }
  }
  std::cout << mapping_summary( design );
  auto const out = o.output.empty() ? default_output( o.tln, ".mapped.json" ) : o.output;
  write_text_file_atomic( out, design_to_json( design ) );
  std::cout << "wrote " << out << "\n";
}

struct evaluate_options
{
  std::string mapped, params, report;
  double sigma = 0.0;
  uint64_t vectors = 10000, seed = 1;
  evaluation_params eval;
  bool tolerance = false;
  std::vector<double> sigma_grid;
  uint32_t seeds = 5;
  double baseline_energy = 0.0, baseline_delay = 0.0;
};

void run_evaluate( evaluate_options const& o )
{
  auto const design = design_from_json( read_text_file( o.mapped ) );
  auto const params = load_params( o.params );
  if ( o.sigma < 0.0 )
  {
    throw std::invalid_argument( "--sigma must be non-negative" );
  }
  if ( o.vectors == 0u )
  {
    throw std::invalid_argument( "--vectors must be positive" );
  }
  if ( ( o.baseline_energy > 0.0 ) != ( o.baseline_delay > 0.0 ) )
  {
    throw std::invalid_argument( "--baseline-energy and --baseline-delay go together" );
  }

  evaluation_run run;
  run.sigma = o.sigma;
  run.seed = o.seed;
  auto const vectors = make_vectors( design.staged.tln.num_inputs(), o.vectors, o.seed );
  run.simulation = simulate_mapped( design, params, vectors, o.sigma, o.seed, o.eval.i_threshold_eff );
  if ( o.tolerance )
  {
    auto grid = o.sigma_grid;
    if ( grid.empty() )
    {
      for ( int i = 1; i <= 30; ++i )
        grid.push_back( i / 100.0 );
    }
    run.tolerance = variation_tolerance( design, params, grid, o.vectors, o.seeds, o.seed, o.eval.i_threshold_eff );
  }
  std::optional<baseline> reference;
  if ( o.baseline_energy > 0.0 )
  {
    reference = baseline{ o.baseline_energy, o.baseline_delay };
  }
  auto const report = evaluate_design( design, params, o.eval, reference );

  std::cout << "vectors " << run.simulation.vectors << "\nerrors " << run.simulation.errors << "\np_total " << report.power.p_total
            << " W\nlatency " << report.delay.latency << " s\nenergy " << report.energy << " J\narea " << report.area.total << " m^2\n";
  if ( run.tolerance )
  {
    std::cout << "sigma_star " << run.tolerance->sigma_star << "\n";
  }
  if ( reference )
  {
    std::cout << "energy_ratio " << report.energy_ratio << "\nedp_ratio " << report.edp_ratio << "\n";
  }
  if ( !o.report.empty() )
  {
    write_text_file_atomic( o.report, report_to_json( report, run, params, o.eval ) );
    std::cout << "wrote " << o.report << "\n";
  }
  if ( o.sigma == 0.0 && run.simulation.errors > 0u )
  {
    throw command_failure{ mismatch, std::to_string( run.simulation.errors ) + " vectors fail with ideal devices" };
  }
  if ( !report.delay.timing_ok )
  {
    throw command_failure{ timing, "timing violation: " + report.delay.violation };
  }
}

struct sweep_options
{
  std::string mapped, params, parameter, output;
  std::vector<double> grid;
  evaluation_params eval;
};

void run_sweep( sweep_options const& o )
{
  require_grid( o.grid, "sweep" );
  auto const which = sweep_parameter_from_string( o.parameter );
  auto const design = design_from_json( read_text_file( o.mapped ) );
  auto const params = load_params( o.params );
  auto grid = o.grid;
  /* command-line units: mV for delta_v and uA for i_threshold */
  for ( auto& v : grid )
  {
    if ( which == sweep_parameter::delta_v )
      v /= 1e3;
    else if ( which == sweep_parameter::i_threshold )
      v /= 1e6;
  }
  auto const rows = sweep( design, which, grid, params, o.eval );
  write_text_file_atomic( o.output, sweep_csv( which, rows ) );
  std::cout << "wrote " << rows.size() << " rows to " << o.output << "\n";
}

struct write_sim_options
{
  std::string params, output;
  std::vector<uint32_t> bits{ 4, 6, 8 };
  std::vector<double> currents{ 10.0 }; /* uA */
  std::vector<double> t_max{ 2.0 };     /* us */
  uint32_t trials = 200;
  uint64_t seed = 1;
  double offset_sigma = 0.0;
  double dt = 1.0; /* ns */
};

void run_write_sim( write_sim_options const& o )
{
  if ( o.bits.empty() )
  {
    throw std::invalid_argument( "bits grid is empty" );
  }
  require_grid( o.currents, "current" );
  require_grid( o.t_max, "t_max" );
  auto const params = load_params( o.params );
  write_config base;
  base.offset_sigma = o.offset_sigma;
  base.dt = o.dt / 1e9;
  std::vector<double> currents, limits;
  for ( auto i : o.currents )
    currents.push_back( i / 1e6 );
  for ( auto t : o.t_max )
    limits.push_back( t / 1e6 );
  auto const rows = write_sweep( o.bits, currents, limits, o.trials, o.seed, base, params );
  write_text_file_atomic( o.output, write_sweep_csv( rows ) );
  std::cout << "wrote " << rows.size() << " rows to " << o.output << "\n";
}

CLI::Validator const non_empty( []( std::string& s ) { return s.empty() ? std::string( "empty grid value" ) : std::string(); }, "" );

void add_eval_options( CLI::App* cmd, evaluation_params& eval )
{
  cmd->add_option( "--activity", eval.activity, "Switching activity factor" )->check( CLI::Range( 0.0, 1.0 ) )->capture_default_str();
  cmd->add_option( "--c-wire", eval.c_wire, "Wire capacitance per block pitch (F)" )->check( CLI::NonNegativeNumber )->capture_default_str();
  cmd->add_option( "--dv-penalty", eval.dv_penalty, "Extra terminal voltage per block pitch of mean route (V)" )
      ->check( CLI::NonNegativeNumber )
      ->capture_default_str();
  cmd->add_option( "--i-drive", eval.i_drive, "STD drive current for timing (A); 0 uses the DTCS current" )
      ->check( CLI::NonNegativeNumber )
      ->capture_default_str();
}

} // namespace

int main( int argc, char** argv )
{
  CLI::App app{ "Threshold-logic synthesis and spin-memristor crossbar mapping" };
  app.set_version_flag( "--version", std::string( "smtl " ) + SMTL_VERSION );
  app.require_subcommand( 1 );

  synth_options so;
  auto* synth = app.add_subcommand( "synth", "Synthesize a .bench netlist into a threshold network" );
  synth->add_option( "--bench", so.bench, "Input netlist (.bench or network .json)" )->required();
  synth->add_option( "--fanin", so.fanin, "Maximum fan-in per gate" )->capture_default_str();
  synth->add_option( "--wmax", so.w_max, "Maximum absolute weight" )->capture_default_str();
  synth->add_flag( "--no-collapse", so.no_collapse, "Skip the node-merging pass" );
  synth->add_option( "--vectors", so.vectors, "Random vectors for the equivalence check above 20 inputs" )->capture_default_str();
  synth->add_option( "--seed", so.seed, "Seed for random equivalence vectors" )->capture_default_str();
  synth->add_option( "-o,--output", so.output, "Output threshold network (default <name>.tln.json)" );

  map_options mo;
  auto* map = app.add_subcommand( "map", "Map a threshold network onto pipelined crossbar layers" );
  map->add_option( "--tln", mo.tln, "Threshold network JSON" )->required();
  map->add_option( "--levels-per-stage", mo.params.levels_per_stage, "Crossbar levels per pipeline stage" )->capture_default_str();
  map->add_option( "--blocks", mo.params.blocks, "Blocks per layer (0 sizes to the largest layer)" )->capture_default_str();
  map->add_option( "--rows", mo.params.rows, "Input rows per block" )->capture_default_str();
  map->add_option( "--cols", mo.params.cols, "Gates per block" )->capture_default_str();
  map->add_option( "--subarray", mo.subarray, "Sub-array size ROWSxCOLS (default rows x cols)" );
  map->add_option( "--fanout-max", mo.params.fanout_max, "Maximum fan-out per gate" )->capture_default_str();
  map->add_option( "--min-fill", mo.params.min_fill, "Layers filled below this fraction are absorbed" )->capture_default_str();
  map->add_option( "--backward-max", mo.params.backward_max, "Backward connections per block" )->capture_default_str();
  map->add_option( "--reorder-sweeps", mo.params.reorder_sweeps, "Reordering sweep budget" )->capture_default_str();
  map->add_option( "--vectors", mo.vectors, "Random vectors for the equivalence check above 20 inputs" )->capture_default_str();
  map->add_option( "--seed", mo.seed, "Seed for random equivalence vectors" )->capture_default_str();
  map->add_option( "-o,--output", mo.output, "Output mapped design (default <name>.mapped.json)" );

  evaluate_options eo;
  auto* evaluate = app.add_subcommand( "evaluate", "Simulate a mapped design and report power, delay and area" );
  evaluate->add_option( "--mapped", eo.mapped, "Mapped design JSON" )->required();
  evaluate->add_option( "--params", eo.params, "Device parameters JSON (default $SMTL_PARAMS, then table1.json)" );
  evaluate->add_option( "--sigma", eo.sigma, "Relative conductance standard deviation" )->capture_default_str();
  evaluate->add_option( "--vectors", eo.vectors, "Test vectors (exhaustive when they cover all inputs)" )->capture_default_str();
  evaluate->add_option( "--seed", eo.seed, "Seed for vectors and device draws" )->capture_default_str();
  evaluate->add_option( "--i-th-eff", eo.eval.i_threshold_eff, "Indeterminate band half-width (A)" )->capture_default_str();
  evaluate->add_flag( "--tolerance", eo.tolerance, "Also search the variation tolerance" );
  evaluate->add_option( "--sigma-grid", eo.sigma_grid, "Ascending sigma grid for --tolerance (default 0.01..0.30)" )->delimiter( ',' )->check( non_empty );
  evaluate->add_option( "--seeds", eo.seeds, "Device draws per sigma for --tolerance" )->capture_default_str();
  evaluate->add_option( "--baseline-energy", eo.baseline_energy, "Reference energy per evaluation (J)" );
  evaluate->add_option( "--baseline-delay", eo.baseline_delay, "Reference delay (s)" );
  evaluate->add_option( "--report", eo.report, "Evaluation report JSON" );
  add_eval_options( evaluate, eo.eval );

  sweep_options wo;
  auto* sweep_cmd = app.add_subcommand( "sweep", "Evaluate a mapped design over a parameter grid" );
  sweep_cmd->add_option( "--mapped", wo.mapped, "Mapped design JSON" )->required();
  sweep_cmd->add_option( "--params", wo.params, "Device parameters JSON (default $SMTL_PARAMS, then table1.json)" );
  sweep_cmd->add_option( "--param", wo.parameter, "dv (mV), ith (uA), k, or subarray (columns)" )->required();
  sweep_cmd->add_option( "--grid", wo.grid, "Comma-separated values" )->required()->delimiter( ',' )->check( non_empty );
  sweep_cmd->add_option( "-o,--output", wo.output, "Output CSV" )->required();
  add_eval_options( sweep_cmd, wo.eval );

  write_sim_options ws;
  auto* write_sim = app.add_subcommand( "write-sim", "Monte-Carlo of the memristor write-feedback loop" );
  write_sim->add_option( "--params", ws.params, "Device parameters JSON (default $SMTL_PARAMS, then table1.json)" );
  write_sim->add_option( "--bits", ws.bits, "Comparator resolutions" )->delimiter( ',' )->check( non_empty )->capture_default_str();
  write_sim->add_option( "--current", ws.currents, "Programming currents (uA)" )->delimiter( ',' )->check( non_empty )->capture_default_str();
  write_sim->add_option( "--t-max", ws.t_max, "Write time limits (us)" )->delimiter( ',' )->check( non_empty )->capture_default_str();
  write_sim->add_option( "--trials", ws.trials, "Trials per configuration" )->check( CLI::PositiveNumber )->capture_default_str();
  write_sim->add_option( "--seed", ws.seed, "Seed for targets and comparator offsets" )->capture_default_str();
  write_sim->add_option( "--offset-sigma", ws.offset_sigma, "Comparator offset standard deviation (V)" )->capture_default_str();
  write_sim->add_option( "--dt", ws.dt, "Ramp time step (ns)" )->capture_default_str();
  write_sim->add_option( "-o,--output", ws.output, "Output CSV" )->required();

  try
  {
    app.parse( argc, argv );
  }
  catch ( CLI::CallForHelp const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::CallForAllHelp const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::CallForVersion const& e )
  {
    return app.exit( e );
  }
  catch ( CLI::ParseError const& e )
  {
    app.exit( e );
    return invalid;
  }

  try
  {
    if ( *synth )
      run_synth( so );
    else if ( *map )
      run_map( mo );
    else if ( *evaluate )
      run_evaluate( eo );
    else if ( *sweep_cmd )
      run_sweep( wo );
    else if ( *write_sim )
      run_write_sim( ws );
  }
  catch ( command_failure const& f )
  {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  catch ( capacity_error const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return infeasible;
  }
  catch ( std::exception const& e )
  {
    std::cerr << "error: " << e.what() << "\n";
    return invalid;
  }
  return ok;
}
