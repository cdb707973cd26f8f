#include <smtl/errors.hpp>
#include <smtl/evaluator.hpp>
#include <smtl/netlist.hpp>
#include <smtl/synthesis.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>

namespace smtl
{

std::vector<int> bias_row_weights( int bias, int w_max )
{
  auto const magnitude = std::abs( bias );
  auto const rows = ( magnitude + w_max - 1 ) / w_max;
  std::vector<int> weights;
  for ( int r = 0; r < rows; ++r )
  {
    /* larger shares first: 7 over 2 rows is 4 + 3 */
    auto const share = magnitude / rows + ( r < magnitude % rows ? 1 : 0 );
    weights.push_back( bias < 0 ? -share : share );
  }
  return weights;
}

programmed_gate program_gate( threshold_gate const& gate, int w_max, device_params const& params )
{
  programmed_gate column;
  for ( auto w : gate.weights )
  {
    column.inputs.push_back( weight_to_conductance( w, w_max, params ) );
  }
  for ( auto w : bias_row_weights( gate.bias, w_max ) )
  {
    column.bias.push_back( weight_to_conductance( w, w_max, params ) );
  }
  return column;
}

std::vector<programmed_gate> program_design( mapped_design const& design, device_params const& params )
{
  validate_device_params( params );
  std::vector<programmed_gate> columns;
  for ( auto const& n : design.staged.tln.nodes() )
  {
    columns.push_back( program_gate( n.gate, design.params.w_max, params ) );
  }
  return columns;
}

double crossbar_net_current( programmed_gate const& column, uint64_t row, double delta_v )
{
  double g = 0.0;
  for ( std::size_t i = 0; i < column.inputs.size(); ++i )
  {
    if ( ( row >> i ) & 1u )
    {
      g += column.inputs[i].net();
    }
  }
  for ( auto const& b : column.bias )
  {
    g += b.net();
  }
  return delta_v * g;
}

simulation_result simulate_mapped( mapped_design const& design, device_params const& params, pattern_set const& vectors,
                                   double sigma, uint64_t seed, double i_threshold_eff )
{
  auto const& tln = design.staged.tln;
  if ( vectors.num_signals() != tln.num_inputs() )
  {
    throw std::invalid_argument( "vector width does not match the design inputs" );
  }
  if ( sigma < 0.0 )
  {
    throw std::invalid_argument( "sigma must be non-negative" );
  }
  auto columns = program_design( design, params );

  /* one draw per device in a fixed order, so seeds give common random numbers across sigma */
  std::mt19937_64 rng( seed );
  std::normal_distribution<double> normal( 0.0, 1.0 );
  auto perturb = [&]( double& g ) {
    auto const z = normal( rng );
    g = std::max( 0.0, g * ( 1.0 + sigma * z ) );
  };
  for ( auto& c : columns )
  {
    for ( auto* pairs : { &c.inputs, &c.bias } )
    {
      for ( auto& p : *pairs )
      {
        perturb( p.g_plus );
        perturb( p.g_minus );
      }
    }
  }

  auto const words = vectors.num_words();
  auto const n_in = tln.num_inputs();
  std::vector<uint64_t> values( static_cast<std::size_t>( tln.num_signals() ) * words, 0u );
  std::vector<uint64_t> bad( words, 0u );
  for ( uint32_t i = 0; i < n_in; ++i )
  {
    auto const src = vectors.signal( i );
    std::copy( src.begin(), src.end(), values.begin() + static_cast<std::ptrdiff_t>( i * words ) );
  }
  std::vector<uint64_t const*> fanins;
  for ( uint32_t n = 0; n < tln.num_nodes(); ++n )
  {
    auto const& node = tln.nodes()[n];
    truth_table ones{ node.gate.fanin(), 0u }, unknown{ node.gate.fanin(), 0u };
    for ( uint64_t r = 0; r < ones.num_rows(); ++r )
    {
      auto const current = crossbar_net_current( columns[n], r, params.delta_v );
      bool const high = i_threshold_eff > 0.0 ? current >= i_threshold_eff : current > 0.0;
      bool const low = i_threshold_eff > 0.0 ? current <= -i_threshold_eff : current < 0.0;
      if ( high )
        ones.bits |= uint64_t{ 1 } << r;
      else if ( !low )
        unknown.bits |= uint64_t{ 1 } << r;
    }
    fanins.clear();
    for ( auto f : node.fanins )
    {
      fanins.push_back( values.data() + static_cast<std::size_t>( f ) * words );
    }
    auto* out = values.data() + static_cast<std::size_t>( n_in + n ) * words;
    for ( uint64_t w = 0; w < words; ++w )
    {
      out[w] = evaluate_table_word( ones, fanins, w ) & vectors.lane_mask( w );
      if ( unknown.bits )
      {
        bad[w] |= evaluate_table_word( unknown, fanins, w ) & vectors.lane_mask( w );
      }
    }
  }

  simulation_result result;
  result.vectors = vectors.num_vectors();
  result.outputs = pattern_set( tln.num_outputs(), vectors.num_vectors() );
  for ( uint32_t o = 0; o < tln.num_outputs(); ++o )
  {
    auto const* src = values.data() + static_cast<std::size_t>( tln.outputs()[o] ) * words;
    auto dst = result.outputs.signal( o );
    std::copy( src, src + words, dst.begin() );
  }
  auto const expected = design.source ? simulate_network( *design.source, vectors ) : simulate_tln( design.logic, vectors );
  for ( uint64_t w = 0; w < words; ++w )
  {
    uint64_t diff = bad[w];
    for ( uint32_t o = 0; o < tln.num_outputs(); ++o )
    {
      diff |= expected.signal( o )[w] ^ result.outputs.signal( o )[w];
    }
    result.errors += static_cast<uint64_t>( __builtin_popcountll( diff ) );
    result.indeterminate += static_cast<uint64_t>( __builtin_popcountll( bad[w] ) );
  }
  return result;
}

tolerance_result variation_tolerance( mapped_design const& design, device_params const& params, std::vector<double> const& sigma_grid,
                                      uint64_t vectors, uint32_t seeds, uint64_t seed, double i_threshold_eff )
{
  if ( sigma_grid.empty() || !std::is_sorted( sigma_grid.begin(), sigma_grid.end() ) )
  {
    throw std::invalid_argument( "sigma grid must be non-empty and ascending" );
  }
  if ( seeds == 0u || vectors == 0u )
  {
    throw std::invalid_argument( "need at least one seed and one vector" );
  }
  auto const n_in = design.staged.tln.num_inputs();
  std::vector<pattern_set> patterns;
  for ( uint32_t s = 0; s < seeds; ++s )
  {
    patterns.push_back( n_in <= 20u && ( uint64_t{ 1 } << n_in ) <= vectors ? pattern_set::exhaustive( n_in )
                                                                            : pattern_set::random( n_in, vectors, seed + s ) );
  }

  tolerance_result result;
  bool clean = true;
  for ( auto sigma : sigma_grid )
  {
    tolerance_point point{ sigma, 0u, 0u };
    for ( uint32_t s = 0; s < seeds; ++s )
    {
      auto const sim = simulate_mapped( design, params, patterns[s], sigma, seed + 1000003u * ( s + 1u ), i_threshold_eff );
      point.errors += sim.errors;
      point.vectors += sim.vectors;
    }
    clean = clean && point.errors == 0u;
    if ( clean )
    {
      result.sigma_star = sigma;
    }
    result.curve.push_back( point );
  }
  return result;
}

double dtcs_current( device_params const& params, uint32_t k )
{
  return params.i_dtcs * static_cast<double>( k ) * ( params.i_threshold / 2e-6 );
}

power_report estimate_power( mapped_design const& design, device_params const& params, evaluation_params const& eval )
{
  validate_device_params( params );
  power_report p;
  auto const links = design.interconnect();
  for ( auto const& layer : design.layout.layers )
  {
    for ( auto const& b : layer.blocks )
    {
      p.active_rows += b.rows;
    }
  }
  auto const mean_route = links.routed ? static_cast<double>( links.route_length ) / links.routed : 0.0;
  p.delta_v_eff = params.delta_v + eval.dv_penalty * mean_route;
  p.i_dtcs = dtcs_current( params, design.params.levels_per_stage );
  p.p_mca = static_cast<double>( p.active_rows ) * p.i_dtcs * p.delta_v_eff * eval.activity;
  p.p_detect = static_cast<double>( design.staged.tln.num_nodes() ) * params.p_detect * ( params.f_clk / 500e6 );
  p.p_interconnect = eval.c_wire * static_cast<double>( links.route_length ) * p.delta_v_eff * p.delta_v_eff * params.f_clk * eval.activity;
  p.p_total = p.p_mca + p.p_detect + p.p_interconnect;
  return p;
}

delay_report estimate_delay( mapped_design const& design, device_params const& params, evaluation_params const& eval )
{
  validate_device_params( params );
  delay_report d;
  auto const k = design.params.levels_per_stage;
  d.depth = design.staged.num_stages();
  d.clock_period = 1.0 / params.f_clk;
  d.latency = d.depth * d.clock_period;
  d.throughput = params.f_clk;
  auto const drive = eval.i_drive > 0.0 ? eval.i_drive : dtcs_current( params, k );
  auto const sw = std_switch_time( drive, params );
  if ( !sw.switched )
  {
    d.timing_ok = false;
    d.violation = "drive current below the STD threshold";
    return d;
  }
  d.switch_time = sw.time;
  if ( k * sw.time >= d.clock_period )
  {
    d.timing_ok = false;
    std::ostringstream msg;
    msg << k << " levels x " << sw.time * 1e9 << " ns switching does not fit a " << d.clock_period * 1e9 << " ns clock period";
    d.violation = msg.str();
  }
  return d;
}

evaluation_report evaluate_design( mapped_design const& design, device_params const& params, evaluation_params const& eval,
                                   std::optional<baseline> reference )
{
  evaluation_report r;
  r.power = estimate_power( design, params, eval );
  r.delay = estimate_delay( design, params, eval );
  r.links = design.interconnect();
  r.area = area_estimate( design.layout, r.links, eval.area );
  r.nodes = design.staged.tln.num_nodes();
  r.buffers = design.num_buffers();
  r.energy = r.power.p_total * r.delay.latency;
  r.edp = r.energy * r.delay.latency;
  if ( reference )
  {
    if ( !( reference->energy > 0.0 ) || !( reference->delay > 0.0 ) )
    {
      throw std::invalid_argument( "baseline energy and delay must be positive" );
    }
    r.reference = reference;
    r.energy_ratio = r.energy > 0.0 ? reference->energy / r.energy : 0.0;
    r.edp_ratio = r.edp > 0.0 ? reference->energy * reference->delay / r.edp : 0.0;
  }
  return r;
}

sweep_parameter sweep_parameter_from_string( std::string const& name )
{
  if ( name == "dv" || name == "delta_v" )
    return sweep_parameter::delta_v;
  if ( name == "ith" || name == "i_threshold" )
    return sweep_parameter::i_threshold;
  if ( name == "k" || name == "levels_per_stage" )
    return sweep_parameter::levels_per_stage;
  if ( name == "subarray" || name == "subarray_dim" )
    return sweep_parameter::subarray_dim;
  throw std::invalid_argument( "unknown sweep parameter '" + name + "'" );
}

std::string to_string( sweep_parameter p )
{
  switch ( p )
  {
  case sweep_parameter::delta_v:
    return "delta_v";
  case sweep_parameter::i_threshold:
    return "i_threshold";
  case sweep_parameter::levels_per_stage:
    return "levels_per_stage";
  case sweep_parameter::subarray_dim:
    return "subarray_dim";
  }
  return "delta_v";
}

std::vector<sweep_row> sweep( mapped_design const& design, sweep_parameter parameter, std::vector<double> const& grid,
                              device_params const& params, evaluation_params const& eval )
{
  if ( grid.empty() )
  {
    throw std::invalid_argument( "sweep grid is empty" );
  }
  std::vector<sweep_row> rows;
  for ( auto value : grid )
  {
    auto p = params;
    std::optional<mapped_design> remapped;
    auto as_count = [&]( double v ) {
      if ( v < 1.0 || v != std::floor( v ) )
        throw std::invalid_argument( "grid value " + std::to_string( v ) + " must be a positive integer" );
      return static_cast<uint32_t>( v );
    };
    switch ( parameter )
    {
    case sweep_parameter::delta_v:
      p.delta_v = value;
      break;
    case sweep_parameter::i_threshold:
      p.i_threshold = value;
      break;
    case sweep_parameter::levels_per_stage:
    {
      auto mp = design.params;
      mp.levels_per_stage = as_count( value );
      remapped = map_design( design.logic, mp, design.source );
      break;
    }
    case sweep_parameter::subarray_dim:
      remapped = repartition( design, design.params.rows, as_count( value ) );
      break;
    }
    auto const& d = remapped ? *remapped : design;
    sweep_row row;
    row.value = value;
    row.stages = d.staged.num_stages();
    row.report = evaluate_design( d, p, eval );
    row.allocated_cells = d.layout.allocated_cells();
    rows.push_back( std::move( row ) );
  }
  return rows;
}

std::string sweep_csv( sweep_parameter parameter, std::vector<sweep_row> const& rows )
{
  std::ostringstream out;
  out.precision( 9 );
  out << "parameter,value,stages,nodes,buffers,p_mca,p_detect,p_interconnect,p_total,latency,energy,edp,area,"
         "direct_links,routed_links,route_length,allocated_cells,timing_ok\n";
  for ( auto const& r : rows )
  {
    auto const& e = r.report;
    out << to_string( parameter ) << "," << r.value << "," << r.stages << "," << e.nodes << "," << e.buffers << "," << e.power.p_mca << ","
        << e.power.p_detect << "," << e.power.p_interconnect << "," << e.power.p_total << "," << e.delay.latency << "," << e.energy << ","
        << e.edp << "," << e.area.total << "," << e.links.direct << "," << e.links.routed << "," << e.links.route_length << ","
        << r.allocated_cells << "," << ( e.delay.timing_ok ? 1 : 0 ) << "\n";
  }
  return out.str();
}

} // namespace smtl
