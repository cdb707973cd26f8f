#include <smtl/devices.hpp>
#include <smtl/errors.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

namespace smtl
{

void validate_device_params( device_params const& p )
{
  auto positive = []( double v, char const* name ) {
    if ( !( v > 0.0 ) || std::isnan( v ) )
    {
      throw device_error( std::string( name ) + " must be positive" );
    }
  };
  positive( p.i_threshold, "i_threshold" );
  positive( p.t_switch_ref, "t_switch_ref" );
  positive( p.v_supply, "v_supply" );
  positive( p.delta_v, "delta_v" );
  positive( p.r_min, "r_min" );
  positive( p.r_max, "r_max" );
  positive( p.r_off, "r_off" );
  positive( p.r_mtj_parallel, "r_mtj_parallel" );
  positive( p.tmr, "tmr" );
  positive( p.p_detect, "p_detect" );
  positive( p.f_clk, "f_clk" );
  positive( p.i_dtcs, "i_dtcs" );
  positive( p.write_threshold, "write_threshold" );
  positive( p.k_write, "k_write" );
  if ( p.r_min >= p.r_max )
  {
    throw device_error( "r_min must be below r_max" );
  }
  if ( p.r_off <= p.r_max )
  {
    throw device_error( "r_off must exceed r_max" );
  }
}

double unit_conductance( int w_max, device_params const& params )
{
  return ( 1.0 / params.r_min ) / static_cast<double>( w_max );
}

conductance_pair weight_to_conductance( int w, int w_max, device_params const& params )
{
  if ( std::abs( w ) > w_max )
  {
    throw device_error( "weight " + std::to_string( w ) + " exceeds the " + std::to_string( w_max ) + " conductance levels" );
  }
  double const off = 1.0 / params.r_off;
  double const g = std::abs( w ) * unit_conductance( w_max, params );
  if ( w > 0 )
    return { g, off };
  if ( w < 0 )
    return { off, g };
  return { off, off };
}

switch_event std_switch_time( double current, device_params const& params )
{
  auto const magnitude = std::abs( current );
  if ( magnitude < params.i_threshold )
  {
    return {};
  }
  return { true, params.t_switch_ref * params.i_threshold / magnitude, current > 0.0 ? 1 : -1 };
}

read_result std_read( device_params const& params )
{
  read_result r;
  r.r_parallel = params.r_mtj_parallel;
  r.r_antiparallel = params.r_mtj_parallel * ( 1.0 + params.tmr );
  r.r_reference = std::sqrt( r.r_parallel * r.r_antiparallel );
  r.i_parallel = params.v_supply / ( r.r_parallel + r.r_reference );
  r.i_antiparallel = params.v_supply / ( r.r_antiparallel + r.r_reference );
  r.v_swing = params.v_supply * r.r_reference * ( 1.0 / ( r.r_parallel + r.r_reference ) - 1.0 / ( r.r_antiparallel + r.r_reference ) );
  if ( r.i_parallel >= params.i_threshold || r.i_antiparallel >= params.i_threshold )
  {
    throw device_error( "read current reaches the switching threshold (read disturb)" );
  }
  return r;
}

write_result write_with_feedback( double target_r, write_config const& config, device_params const& params, uint64_t seed )
{
  if ( target_r < params.r_min || target_r > params.r_max )
  {
    throw device_error( "target resistance outside the memristor range" );
  }
  if ( config.i_prog < params.write_threshold )
  {
    throw device_error( "programming current below the write threshold" );
  }
  if ( !( config.dt > 0.0 ) || !( config.t_max > 0.0 ) )
  {
    throw device_error( "time step and limit must be positive" );
  }

  auto const i = config.i_prog;
  double reference = i * target_r;
  if ( config.comparator_bits > 0u )
  {
    /* DAC levels span the source voltage range */
    auto const lo = i * params.r_min;
    auto const hi = i * params.r_max;
    auto const steps = std::ldexp( 1.0, static_cast<int>( std::min( config.comparator_bits, 52u ) ) ) - 1.0;
    reference = lo + std::round( ( reference - lo ) / ( hi - lo ) * steps ) / steps * ( hi - lo );
  }
  if ( config.offset_sigma > 0.0 )
  {
    std::mt19937_64 rng( seed );
    std::normal_distribution<double> offset( 0.0, config.offset_sigma );
    reference += offset( rng );
  }

  double r = config.r_start > 0.0 ? config.r_start : params.r_max;
  double const direction = reference < i * r ? -1.0 : 1.0;
  double const step = params.k_write * i * config.dt;
  auto crossed = [&]( double value ) { return direction < 0.0 ? i * value <= reference : i * value >= reference; };

  write_result result;
  auto const max_steps = static_cast<uint64_t>( std::ceil( config.t_max / config.dt - 1e-9 ) );
  uint64_t n = 0;
  while ( !crossed( r ) && n < max_steps )
  {
    r = std::clamp( r + direction * step, params.r_min, params.r_max );
    ++n;
    if ( ( r == params.r_min && direction < 0.0 ) || ( r == params.r_max && direction > 0.0 ) )
    {
      break;
    }
  }
  result.final_r = r;
  result.elapsed = static_cast<double>( n ) * config.dt;
  result.timed_out = !crossed( r ) && n >= max_steps;
  result.error = std::abs( r - target_r ) / target_r;
  return result;
}

std::vector<write_sweep_row> write_sweep( std::vector<uint32_t> const& bits, std::vector<double> const& currents,
                                          std::vector<double> const& t_max, uint32_t trials, uint64_t seed,
                                          write_config const& base, device_params const& params )
{
  if ( bits.empty() || currents.empty() || t_max.empty() || trials == 0u )
  {
    throw std::invalid_argument( "write sweep needs non-empty grids and at least one trial" );
  }
  std::vector<double> targets;
  std::vector<uint64_t> seeds;
  std::mt19937_64 rng( seed );
  std::uniform_real_distribution<double> uniform( params.r_min, params.r_max );
  for ( uint32_t t = 0; t < trials; ++t )
  {
    targets.push_back( uniform( rng ) );
    seeds.push_back( rng() );
  }

  std::vector<write_sweep_row> rows;
  for ( auto b : bits )
  {
    for ( auto i : currents )
    {
      for ( auto limit : t_max )
      {
        auto config = base;
        config.comparator_bits = b;
        config.i_prog = i;
        config.t_max = limit;
        std::vector<double> errors;
        write_sweep_row row{ b, i, limit, 0.0, 0.0, 0u };
        for ( uint32_t t = 0; t < trials; ++t )
        {
          auto const w = write_with_feedback( targets[t], config, params, seeds[t] );
          errors.push_back( w.error );
          row.timeouts += w.timed_out ? 1u : 0u;
        }
        double sum = 0.0;
        for ( auto e : errors )
          sum += e;
        row.mean_error = sum / errors.size();
        std::sort( errors.begin(), errors.end() );
        auto const idx = static_cast<std::size_t>( std::ceil( 0.95 * errors.size() ) ) - 1u;
        row.p95_error = errors[std::min( idx, errors.size() - 1u )];
        rows.push_back( row );
      }
    }
  }
  return rows;
}

std::string write_sweep_csv( std::vector<write_sweep_row> const& rows )
{
  std::ostringstream out;
  out.precision( 9 );
  out << "bits,i_prog,t_max,mean_error,p95_error,timeouts\n";
  for ( auto const& r : rows )
  {
    out << r.bits << "," << r.i_prog << "," << r.t_max << "," << r.mean_error << "," << r.p95_error << "," << r.timeouts << "\n";
  }
  return out.str();
}

} // namespace smtl
