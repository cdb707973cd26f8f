#include <doctest.h>

#include <smtl/devices.hpp>
#include <smtl/errors.hpp>

#include <cmath>
#include <limits>

using namespace smtl;

TEST_CASE( "weight_to_conductance" )
{
  device_params const p;
  CHECK( weight_to_conductance( 6, 6, p ).g_plus == doctest::Approx( 20e-6 ) );
  CHECK( 1.0 / weight_to_conductance( 6, 6, p ).g_plus == doctest::Approx( 50e3 ) );
  CHECK( weight_to_conductance( 1, 6, p ).g_plus == doctest::Approx( 3.3333333e-6 ) );
  CHECK( 1.0 / weight_to_conductance( 1, 6, p ).g_plus == doctest::Approx( 300e3 ) );
  CHECK( weight_to_conductance( 1, 6, p ).g_minus == doctest::Approx( 1.0 / p.r_off ) );

  auto const neg = weight_to_conductance( -3, 6, p );
  CHECK( neg.g_minus == doctest::Approx( 10e-6 ) );
  CHECK( neg.g_plus == doctest::Approx( 1e-7 ) );
  auto const zero = weight_to_conductance( 0, 6, p );
  CHECK( zero.g_plus == zero.g_minus );
  CHECK( zero.net() == 0.0 );

  auto const unit = weight_to_conductance( 1, 6, p ).g_plus;
  for ( int w = 1; w <= 6; ++w )
    CHECK( weight_to_conductance( w, 6, p ).g_plus / unit == w );
  CHECK_THROWS_AS( weight_to_conductance( 7, 6, p ), device_error );
  CHECK_THROWS_AS( weight_to_conductance( -7, 6, p ), device_error );
}

TEST_CASE( "std_switch_time" )
{
  device_params const p;
  auto const at2 = std_switch_time( 2e-6, p );
  CHECK( at2.switched );
  CHECK( at2.time == 1e-9 );
  CHECK( at2.direction == 1 );
  CHECK( std_switch_time( 4e-6, p ).time == doctest::Approx( 0.5e-9 ) );
  CHECK( std_switch_time( -4e-6, p ).direction == -1 );
  CHECK_FALSE( std_switch_time( 1e-6, p ).switched );
  CHECK_FALSE( std_switch_time( 1.999999e-6, p ).switched );
  double previous = std::numeric_limits<double>::infinity();
  for ( double i = 2e-6; i < 50e-6; i += 0.5e-6 )
  {
    auto const t = std_switch_time( i, p ).time;
    CHECK( t <= previous );
    previous = t;
  }
}

TEST_CASE( "std_read divider" )
{
  device_params p;
  auto const r = std_read( p );
  /* independent divider arithmetic */
  double const rp = 300e3, rap = rp * 5.0, rref = std::sqrt( rp * rap );
  double const ip = 0.6 / ( rp + rref ), iap = 0.6 / ( rap + rref );
  double const swing = 0.6 * rref / ( rp + rref ) - 0.6 * rref / ( rap + rref );
  CHECK( r.i_parallel == doctest::Approx( ip ) );
  CHECK( r.i_antiparallel == doctest::Approx( iap ) );
  CHECK( r.i_parallel == doctest::Approx( 0.62e-6 ).epsilon( 0.01 ) );
  CHECK( r.i_antiparallel == doctest::Approx( 0.28e-6 ).epsilon( 0.02 ) );
  CHECK( r.i_parallel < p.i_threshold );
  CHECK( r.i_antiparallel < p.i_threshold );
  CHECK( r.v_swing == doctest::Approx( swing ) );
  CHECK( std::abs( r.v_swing - 0.229 ) <= 0.1 * 0.229 );

  p.tmr = 1e-9;
  CHECK( std_read( p ).v_swing == doctest::Approx( 0.0 ).epsilon( 1e-6 ) );
  p.tmr = 4.0;
  p.v_supply = 3.0;
  CHECK_THROWS_AS( std_read( p ), device_error );
}

TEST_CASE( "device parameter validation" )
{
  device_params p;
  CHECK_NOTHROW( validate_device_params( p ) );
  p.r_min = 2e6;
  CHECK_THROWS_AS( validate_device_params( p ), device_error );
  p = {};
  p.tmr = 0.0;
  CHECK_THROWS_AS( validate_device_params( p ), device_error );
  p = {};
  p.r_off = std::numeric_limits<double>::infinity();
  CHECK_NOTHROW( validate_device_params( p ) );
}

TEST_CASE( "write_with_feedback" )
{
  device_params const p;
  write_config ideal;
  ideal.comparator_bits = 0;
  ideal.dt = 1e-10;
  for ( double target : { 60e3, 123e3, 500e3, 999e3 } )
  {
    auto const w = write_with_feedback( target, ideal, p, 1 );
    double const step = p.k_write * ideal.i_prog * ideal.dt;
    CHECK_FALSE( w.timed_out );
    CHECK( std::abs( w.final_r - target ) <= step * ( 1 + 1e-9 ) );
    CHECK( w.error == doctest::Approx( std::abs( w.final_r - target ) / target ) );
  }
  CHECK( write_with_feedback( 1e6, ideal, p, 1 ).elapsed == 0.0 );

  write_config quick = ideal;
  quick.t_max = 10e-9;
  CHECK( write_with_feedback( 60e3, quick, p, 1 ).timed_out );

  write_config low = ideal;
  low.i_prog = 1e-6;
  CHECK_THROWS_AS( write_with_feedback( 100e3, low, p, 1 ), device_error );
  CHECK_THROWS_AS( write_with_feedback( 10e3, ideal, p, 1 ), device_error );
  CHECK_THROWS_AS( write_with_feedback( 2e6, ideal, p, 1 ), device_error );

  write_config noisy = ideal;
  noisy.offset_sigma = 0.05;
  CHECK( write_with_feedback( 300e3, noisy, p, 9 ).final_r == write_with_feedback( 300e3, noisy, p, 9 ).final_r );
}

TEST_CASE( "write_sweep trends" )
{
  device_params const p;
  write_config base;
  auto const bits = write_sweep( { 4, 6, 8 }, { 10e-6 }, { 2e-6 }, 200, 5, base, p );
  REQUIRE( bits.size() == 3 );
  CHECK( bits[0].mean_error > bits[1].mean_error );
  CHECK( bits[1].mean_error > bits[2].mean_error );

  auto const times = write_sweep( { 6 }, { 10e-6 }, { 0.25e-6, 0.5e-6, 1e-6 }, 200, 5, base, p );
  CHECK( times[0].mean_error > times[1].mean_error );
  CHECK( times[1].mean_error > times[2].mean_error );
  CHECK( times[0].timeouts >= times[1].timeouts );

  /* slower ramp, finer stop: with an ideal reference the error shrinks with the current */
  base.comparator_bits = 0;
  auto const currents = write_sweep( { 0 }, { 5e-6, 10e-6, 20e-6 }, { 10e-6 }, 200, 5, base, p );
  CHECK( currents[0].mean_error < currents[1].mean_error );
  CHECK( currents[1].mean_error < currents[2].mean_error );

  CHECK( write_sweep_csv( bits ).rfind( "bits,i_prog,t_max,mean_error,p95_error,timeouts\n", 0 ) == 0 );
  CHECK_THROWS_AS( write_sweep( {}, { 10e-6 }, { 1e-6 }, 10, 1, base, p ), std::invalid_argument );
}
