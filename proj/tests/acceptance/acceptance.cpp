#include <smtl/devices.hpp>
#include <smtl/evaluator.hpp>
#include <smtl/synthesis.hpp>

#include <chrono>
#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

using namespace smtl;

namespace
{

using clock_type = std::chrono::steady_clock;

double seconds_since( clock_type::time_point start )
{
  return std::chrono::duration<double>( clock_type::now() - start ).count();
}

boolean_network const& bench( std::string const& name )
{
  static auto const c17 = read_bench_file( SMTL_DATA_DIR "/c17.bench" );
  static auto const c432 = read_bench_file( SMTL_DATA_DIR "/c432.bench" );
  return name == "c17" ? c17 : c432;
}

mapped_design map_net( boolean_network const& net, uint32_t fanin, uint32_t k = 2 )
{
  synthesis_params sp;
  sp.fanin_limit = fanin;
  mapping_params mp;
  mp.levels_per_stage = k;
  return map_design( synthesize_tln( net, sp ), mp, net );
}

struct outcome
{
  bool pass = false;
  std::string detail;
};

std::string fmt( char const* format, ... ) __attribute__( ( format( printf, 1, 2 ) ) );

std::string fmt( char const* format, ... )
{
  char buffer[512];
  va_list args;
  va_start( args, format );
  std::vsnprintf( buffer, sizeof( buffer ), format, args );
  va_end( args );
  return buffer;
}

outcome equivalence()
{
  auto start = clock_type::now();
  auto const& c17 = bench( "c17" );
  auto const all = pattern_set::exhaustive( static_cast<uint32_t>( c17.num_inputs() ) );
  auto const small = simulate_mapped( map_net( c17, 4 ), device_params{}, all, 0.0, 1 );
  bool const small_ok = small.errors == 0 && !first_mismatch( simulate_network( c17, all ), small.outputs );
  double const t17 = seconds_since( start );

  start = clock_type::now();
  auto const& c432 = bench( "c432" );
  auto const vectors = pattern_set::random( static_cast<uint32_t>( c432.num_inputs() ), 10000, 1 );
  auto const large = simulate_mapped( map_net( c432, 4 ), device_params{}, vectors, 0.0, 1 );
  bool const large_ok = large.errors == 0 && !first_mismatch( simulate_network( c432, vectors ), large.outputs );
  double const t432 = seconds_since( start );

  return { small_ok && large_ok && small.vectors == 32 && t17 < 1.0 && t432 < 30.0,
           fmt( "C17 %llu vectors %llu errors %.3f s; C432 %llu vectors %llu errors %.3f s",
                static_cast<unsigned long long>( small.vectors ), static_cast<unsigned long long>( small.errors ), t17,
                static_cast<unsigned long long>( large.vectors ), static_cast<unsigned long long>( large.errors ), t432 ) };
}

outcome fanin_constraint()
{
  auto const tln = synthesize_tln( bench( "c432" ) );
  uint32_t max_fanin = 0;
  int max_weight = 0;
  for ( auto const& n : tln.nodes() )
  {
    max_fanin = std::max( max_fanin, n.gate.fanin() );
    for ( auto w : n.gate.weights )
      max_weight = std::max( max_weight, std::abs( w ) );
  }
  return { max_fanin <= 4 && max_weight <= 6, fmt( "C432 %u gates, max fan-in %u, max |w| %d", tln.num_nodes(), max_fanin, max_weight ) };
}

outcome tolerance_trend()
{
  std::vector<double> grid;
  for ( int i = 1; i <= 80; ++i )
    grid.push_back( 0.005 * i );
  device_params const p;
  bool ok = true;
  std::string detail;
  for ( auto const* name : { "c17", "c432" } )
  {
    double s[3];
    for ( uint32_t f = 2; f <= 4; ++f )
      s[f - 2] = variation_tolerance( map_net( bench( name ), f ), p, grid, 10000, 5, 1 ).sigma_star;
    ok = ok && s[0] >= s[1] && s[1] >= s[2] && s[2] >= 0.03 && s[2] <= 0.20;
    detail += fmt( "%s sigma* f2 %.3f f3 %.3f f4 %.3f; ", name, s[0], s[1], s[2] );
  }
  detail += "fan-in 4 band [0.03, 0.20]";
  return { ok, detail };
}

outcome granularity()
{
  device_params const p;
  evaluation_params const e;
  uint32_t buffers[3];
  power_report power[3];
  for ( uint32_t k = 1; k <= 3; ++k )
  {
    auto const d = map_net( bench( "c432" ), 4, k );
    buffers[k - 1] = d.num_buffers();
    power[k - 1] = estimate_power( d, p, e );
  }
  bool ok = true;
  for ( int i = 1; i < 3; ++i )
    ok = ok && buffers[i] <= buffers[i - 1] && power[i].p_detect <= power[i - 1].p_detect && power[i].p_mca >= power[i - 1].p_mca;
  return { ok, fmt( "buffers %u/%u/%u, P_det %.3g/%.3g/%.3g W, P_mca %.3g/%.3g/%.3g W", buffers[0], buffers[1], buffers[2],
                    power[0].p_detect, power[1].p_detect, power[2].p_detect, power[0].p_mca, power[1].p_mca, power[2].p_mca ) };
}

outcome partition_tradeoff()
{
  auto const d = map_net( bench( "c432" ), 4 );
  bool ok = true;
  std::string detail;
  uint32_t routed = ~0u;
  uint64_t length = ~0ull, cells = 0;
  for ( uint32_t dim : { 8u, 16u, 32u, 64u } )
  {
    auto const r = repartition( d, 64, dim );
    auto const s = r.interconnect();
    auto const c = r.layout.allocated_cells();
    ok = ok && s.routed <= routed && s.route_length <= length && c >= cells;
    routed = s.routed;
    length = s.route_length;
    cells = c;
    detail += fmt( "%u: routed %u length %llu cells %llu; ", dim, s.routed, static_cast<unsigned long long>( s.route_length ),
                   static_cast<unsigned long long>( c ) );
  }
  detail.resize( detail.size() - 2 );
  return { ok, detail };
}

outcome device_checks()
{
  device_params const p;
  auto const sw = std_switch_time( 2e-6, p );
  auto const r = std_read( p );
  double const rp = p.r_mtj_parallel, rap = rp * ( 1.0 + p.tmr ), rref = std::sqrt( rp * rap );
  double const swing = p.v_supply * rref / ( rp + rref ) - p.v_supply * rref / ( rap + rref );
  bool const read_ok = r.i_parallel < 2e-6 && r.i_antiparallel < 2e-6 && std::abs( r.v_swing - 0.229 ) <= 0.0229 &&
                       std::abs( r.v_swing - swing ) <= 1e-12;

  uint64_t checked = 0, inconsistent = 0;
  for ( auto const* name : { "c17", "c432" } )
    for ( uint32_t f = 2; f <= 4; ++f )
    {
      auto const d = map_net( bench( name ), f );
      auto const columns = program_design( d, p );
      auto const& nodes = d.staged.tln.nodes();
      for ( std::size_t n = 0; n < nodes.size(); ++n )
        for ( uint64_t row = 0; row < ( uint64_t{ 1 } << nodes[n].gate.fanin() ); ++row )
        {
          auto const i = crossbar_net_current( columns[n], row, p.delta_v );
          ++checked;
          inconsistent += ( i == 0.0 || ( i > 0.0 ) != eval_tlg( nodes[n].gate, row ) ) ? 1u : 0u;
        }
    }
  return { sw.switched && sw.time == 1e-9 && read_ok && inconsistent == 0,
           fmt( "t_switch(2 uA) %.3g s, I_P %.3g A, I_AP %.3g A, V_swing %.4f V, sign checks %llu/%llu", sw.time,
                r.i_parallel, r.i_antiparallel, r.v_swing, static_cast<unsigned long long>( checked - inconsistent ),
                static_cast<unsigned long long>( checked ) ) };
}

outcome write_trends()
{
  auto const start = clock_type::now();
  device_params const p;
  write_config const base;
  auto const bits = write_sweep( { 4, 6, 8 }, { base.i_prog }, { base.t_max }, 200, 1, base, p );
  auto const times = write_sweep( { 6 }, { base.i_prog }, { 0.25e-6, 0.5e-6, 1e-6 }, 200, 1, base, p );
  double const elapsed = seconds_since( start );
  bool const ok = bits[0].mean_error > bits[1].mean_error && bits[1].mean_error > bits[2].mean_error &&
                  times[0].mean_error > times[1].mean_error && times[1].mean_error > times[2].mean_error && elapsed < 10.0;
  return { ok, fmt( "bits 4/6/8 error %.4f/%.4f/%.4f; t_max 0.25/0.5/1 us error %.4f/%.4f/%.4f; %.2f s", bits[0].mean_error,
                    bits[1].mean_error, bits[2].mean_error, times[0].mean_error, times[1].mean_error, times[2].mean_error, elapsed ) };
}

outcome sweep_trends()
{
  auto const d = map_net( bench( "c432" ), 4 );
  device_params const p;
  evaluation_params const e;
  auto const dv = sweep( d, sweep_parameter::delta_v, { 0.025, 0.05, 0.1, 0.2 }, p, e );
  bool ok = true;
  for ( std::size_t i = 1; i < dv.size(); ++i )
    ok = ok && dv[i].report.power.p_total > dv[i - 1].report.power.p_total;

  std::vector<double> const x{ 2e-6, 4e-6, 8e-6 };
  auto const ith = sweep( d, sweep_parameter::i_threshold, x, p, e );
  std::vector<double> y;
  for ( auto const& row : ith )
    y.push_back( row.report.energy );
  double mx = 0, my = 0;
  for ( std::size_t i = 0; i < x.size(); ++i )
  {
    mx += x[i] / x.size();
    my += y[i] / y.size();
  }
  double sxy = 0, sxx = 0, syy = 0;
  for ( std::size_t i = 0; i < x.size(); ++i )
  {
    sxy += ( x[i] - mx ) * ( y[i] - my );
    sxx += ( x[i] - mx ) * ( x[i] - mx );
    syy += ( y[i] - my ) * ( y[i] - my );
  }
  double const r2 = syy == 0.0 ? 0.0 : sxy * sxy / ( sxx * syy );
  ok = ok && y[1] > y[0] && y[2] > y[1] && r2 >= 0.95;
  return { ok, fmt( "P_total %.3g/%.3g/%.3g/%.3g W; energy vs I_th %.3g/%.3g/%.3g J, R^2 %.4f", dv[0].report.power.p_total,
                    dv[1].report.power.p_total, dv[2].report.power.p_total, dv[3].report.power.p_total, y[0], y[1], y[2], r2 ) };
}

outcome baseline_mode()
{
  auto const d = map_net( bench( "c432" ), 4 );
  device_params const p;
  evaluation_params const e;
  auto const own = evaluate_design( d, p, e );
  auto const b = evaluate_design( d, p, e, baseline{ 100.0 * own.energy, 10.0 * own.delay.latency } );
  bool const ok = std::abs( b.energy_ratio - 100.0 ) < 1e-9 && std::abs( b.edp_ratio - 1000.0 ) < 1e-6;
  return { ok, fmt( "substituted: baseline energy/EDP advantages are not reproducible without baseline internals; "
                    "ratio mode reports %.1fx energy, %.1fx EDP for supplied baselines",
                    b.energy_ratio, b.edp_ratio ) };
}

} // namespace

int main()
{
  std::vector<std::pair<char const*, std::function<outcome()>>> const criteria{
      { "functional equivalence", equivalence },
      { "fan-in constraint", fanin_constraint },
      { "variation tolerance trend", tolerance_trend },
      { "pipeline granularity tradeoff", granularity },
      { "partition tradeoff", partition_tradeoff },
      { "device checks", device_checks },
      { "write feedback trends", write_trends },
      { "sweep trends", sweep_trends },
      { "baseline ratio mode", baseline_mode } };

  int failed = 0;
  for ( std::size_t i = 0; i < criteria.size(); ++i )
  {
    outcome o;
    try
    {
      o = criteria[i].second();
    }
    catch ( std::exception const& e )
    {
      o = { false, std::string( "exception: " ) + e.what() };
    }
    failed += o.pass ? 0 : 1;
    std::printf( "%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str() );
    std::fflush( stdout );
  }
  return failed == 0 ? 0 : 1;
}
