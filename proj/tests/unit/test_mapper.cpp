#include <doctest.h>

#include <smtl/errors.hpp>
#include <smtl/mapper.hpp>
#include <smtl/synthesis.hpp>

#include <algorithm>
#include <random>
#include <stdexcept>

using namespace smtl;

namespace
{

threshold_gate const not_gate{ { -2 }, 1 };
threshold_gate const buf_gate{ { 2 }, -1 };

threshold_gate and_gate( uint32_t n )
{
  return { std::vector<int>( n, 2 ), -( 2 * static_cast<int>( n ) - 1 ) };
}

std::vector<std::string> names( char prefix, uint32_t n )
{
  std::vector<std::string> out;
  for ( uint32_t i = 0; i < n; ++i )
    out.push_back( prefix + std::to_string( i ) );
  return out;
}

uint32_t add( threshold_network& t, threshold_gate g, std::vector<uint32_t> fanins, std::string name )
{
  return t.add_node( { std::move( g ), std::move( fanins ), std::move( name ), node_role::logic, 0 } );
}

threshold_network chain( uint32_t length )
{
  threshold_network t( { "a" } );
  uint32_t s = 0;
  for ( uint32_t i = 0; i < length; ++i )
    s = add( t, buf_gate, { s }, "c" + std::to_string( i ) );
  t.add_output( s, "y" );
  return t;
}

std::optional<uint32_t> find_name( threshold_network const& t, std::string const& name )
{
  for ( uint32_t i = 0; i < t.num_nodes(); ++i )
    if ( t.nodes()[i].name == name )
      return t.num_inputs() + i;
  return std::nullopt;
}

bool same_function( threshold_network const& a, threshold_network const& b )
{
  auto const p = pattern_set::exhaustive( a.num_inputs() );
  auto const x = simulate_tln( a, p ), y = simulate_tln( b, p );
  return !first_mismatch( x, y ).has_value();
}

uint32_t max_occupancy( staged_network const& s )
{
  auto const occ = s.occupancy();
  return occ.empty() ? 0u : *std::max_element( occ.begin(), occ.end() );
}

} // namespace

TEST_CASE( "assign_stages groups k levels per stage" )
{
  CHECK( assign_stages( chain( 4 ), 1 ).num_stages() == 4 );
  CHECK( assign_stages( chain( 4 ), 2 ).num_stages() == 2 );
  CHECK( assign_stages( chain( 5 ), 2 ).num_stages() == 3 );
  auto const s = assign_stages( chain( 4 ), 1 );
  for ( uint32_t i = 0; i < 4; ++i )
    CHECK( s.level[1 + i] == i + 1 );
  CHECK_THROWS_AS( assign_stages( chain( 2 ), 0 ), std::invalid_argument );
}

TEST_CASE( "insert_buffers breaks long edges once per intermediate stage" )
{
  threshold_network t( { "a" } );
  auto const n1 = add( t, buf_gate, { 0 }, "n1" );
  auto const n2 = add( t, buf_gate, { n1 }, "n2" );
  auto const n3 = add( t, buf_gate, { n2 }, "n3" );
  auto const n4 = add( t, and_gate( 2 ), { n3, n1 }, "n4" );
  t.add_output( n4, "y" );
  auto const b = insert_buffers( assign_stages( t, 1 ), 8 );
  CHECK( b.tln.count_role( node_role::buffer ) == 2 );
  CHECK( same_function( t, b.tln ) );
  for ( uint32_t id = b.tln.num_inputs(); id < b.tln.num_signals(); ++id )
    for ( auto f : b.tln.node( id ).fanins )
      CHECK( b.stage( id ) == b.stage( f ) + 1 );

  /* balanced: nothing to insert */
  CHECK( insert_buffers( assign_stages( chain( 4 ), 1 ), 8 ).tln.count_role( node_role::buffer ) == 0 );
  /* re-running starts from the unbuffered network */
  CHECK( insert_buffers( b, 8 ).tln.count_role( node_role::buffer ) == 2 );
}

TEST_CASE( "split_fanout deals consumers over copies" )
{
  auto fan = []( uint32_t consumers ) {
    threshold_network t( { "a" } );
    auto const x = add( t, not_gate, { 0 }, "x" );
    for ( uint32_t i = 0; i < consumers; ++i )
      t.add_output( add( t, not_gate, { x }, "y" + std::to_string( i ) ), "o" + std::to_string( i ) );
    return t;
  };
  auto const t9 = fan( 9 );
  auto const s = split_fanout( assign_stages( t9, 1 ), 4 );
  CHECK( s.tln.num_nodes() == t9.num_nodes() + 2 );
  CHECK( s.tln.count_role( node_role::copy ) == 2 );
  auto const fo = s.tln.fanout_counts();
  std::vector<uint32_t> loads;
  for ( uint32_t id = s.tln.num_inputs(); id < s.tln.num_signals(); ++id )
    if ( s.tln.node( id ).name == "x" || s.tln.node( id ).role == node_role::copy )
      loads.push_back( fo[id] );
  std::sort( loads.begin(), loads.end() );
  CHECK( loads == std::vector<uint32_t>{ 1, 4, 4 } );
  CHECK( same_function( t9, s.tln ) );

  CHECK( split_fanout( assign_stages( fan( 8 ), 1 ), 8 ).tln.num_nodes() == fan( 8 ).num_nodes() );
  CHECK( split_fanout( assign_stages( fan( 3 ), 1 ), 4 ).tln.num_nodes() == fan( 3 ).num_nodes() );
}

TEST_CASE( "enforce_capacity defers nodes that skip the next level first" )
{
  /* level 1 holds five nodes against a capacity of four; n4 only feeds level 3 */
  threshold_network t( names( 'i', 5 ) );
  std::vector<uint32_t> n;
  for ( uint32_t i = 0; i < 5; ++i )
    n.push_back( add( t, not_gate, { i }, "n" + std::to_string( i ) ) );
  auto const m = add( t, and_gate( 2 ), { n[0], n[1] }, "m" );
  auto const q = add( t, and_gate( 2 ), { n[2], n[3] }, "q" );
  t.add_output( add( t, and_gate( 3 ), { m, q, n[4] }, "z" ), "z" );

  auto const staged = assign_stages( t, 2 );
  CHECK( staged.occupancy()[0] == 5 );
  auto const fixed = enforce_capacity( staged, 1, 4, 64, 8, 6 );
  CHECK( max_occupancy( fixed ) <= 4 );
  CHECK( fixed.level[*find_name( fixed.tln, "n4" )] == 2 );
  for ( auto const* other : { "n0", "n1", "n2", "n3" } )
    CHECK( fixed.level[*find_name( fixed.tln, other )] == 1 );
  CHECK( same_function( t, fixed.tln ) );

  /* under capacity: unchanged */
  auto const same = enforce_capacity( staged, 1, 8, 64, 8, 6 );
  CHECK( same.level == staged.level );
}

TEST_CASE( "enforce_capacity breaks ties by node id" )
{
  threshold_network t( names( 'i', 5 ) );
  std::vector<uint32_t> n;
  for ( uint32_t i = 0; i < 5; ++i )
    n.push_back( add( t, not_gate, { i }, "n" + std::to_string( i ) ) );
  t.add_output( add( t, and_gate( 3 ), { n[0], n[1], n[2] }, "m" ), "m" );
  t.add_output( add( t, and_gate( 2 ), { n[3], n[4] }, "q" ), "q" );

  auto const fixed = enforce_capacity( assign_stages( t, 2 ), 1, 4, 64, 8, 6 );
  CHECK( fixed.level[*find_name( fixed.tln, "n0" )] == 2 );
  CHECK( fixed.level[*find_name( fixed.tln, "m" )] == 3 );
  CHECK( max_occupancy( fixed ) <= 4 );
  CHECK( same_function( t, fixed.tln ) );
}

TEST_CASE( "enforce_capacity rejects nodes wider than a block" )
{
  threshold_network t( names( 'i', 4 ) );
  t.add_output( add( t, and_gate( 4 ), { 0, 1, 2, 3 }, "z" ), "z" );
  CHECK_THROWS_AS( enforce_capacity( assign_stages( t, 1 ), 1, 4, 2, 8, 6 ), capacity_error );
  CHECK_THROWS_AS( map_design( t, mapping_params{ 2, 2 } ), capacity_error );
}

TEST_CASE( "absorb_small_layers folds a one-node layer into its predecessor" )
{
  mapping_params p;
  p.levels_per_stage = 1;
  threshold_network t( { "a" } );
  auto const n0 = add( t, not_gate, { 0 }, "n0" );
  t.add_output( add( t, not_gate, { n0 }, "z" ), "z" );
  auto const d = map_design( t, p );
  CHECK( d.absorbed_layers == 1 );
  CHECK( d.warnings.empty() );
  uint32_t backward = 0;
  for ( auto const& layer : backward_connections( d.staged, d.layout ) )
    for ( auto c : layer )
      backward += c;
  CHECK( backward == 1 );
  CHECK( d.interconnect().backward == 1 );
  CHECK( validate_design( d ).empty() );

  /* four same-layer sources against a bound of three */
  threshold_network w( names( 'i', 4 ) );
  std::vector<uint32_t> n;
  for ( uint32_t i = 0; i < 4; ++i )
    n.push_back( add( w, not_gate, { i }, "n" + std::to_string( i ) ) );
  w.add_output( add( w, and_gate( 4 ), n, "z" ), "z" );
  p.backward_max = 3;
  auto const skipped = map_design( w, p );
  CHECK( skipped.absorbed_layers == 0 );
  REQUIRE( skipped.warnings.size() == 1 );
  CHECK( skipped.warnings[0].find( "not absorbed" ) != std::string::npos );
  p.backward_max = 4;
  CHECK( map_design( w, p ).absorbed_layers == 1 );

  /* well-filled layers stay put */
  p.cols = 4;
  p.min_fill = 0.2;
  CHECK( map_design( w, p ).absorbed_layers == 0 );
}

TEST_CASE( "reordering keeps a single block per layer fully direct" )
{
  auto const net = read_bench_file( SMTL_DATA_DIR "/c17.bench" );
  mapping_params p;
  p.levels_per_stage = 1;
  p.min_fill = 0.0;
  auto const d = map_design( synthesize_tln( net ), p, net );
  CHECK( d.layout.num_blocks() == d.layout.layers.size() );
  CHECK( d.interconnect().routed == 0 );
}

TEST_CASE( "barycenter reordering improves random placements" )
{
  uint32_t improved = 0, trials = 100;
  for ( uint32_t trial = 0; trial < trials; ++trial )
  {
    std::mt19937_64 rng( 1000 + trial );
    threshold_network t( names( 'i', 32 ) );
    std::vector<uint32_t> first;
    for ( uint32_t i = 0; i < 32; ++i )
      first.push_back( add( t, not_gate, { i }, "a" + std::to_string( i ) ) );
    std::vector<uint32_t> perm( first );
    std::shuffle( perm.begin(), perm.end(), rng );
    for ( uint32_t j = 0; j < 32; ++j )
    {
      auto other = first[rng() % 32];
      while ( other == perm[j] )
        other = first[rng() % 32];
      t.add_output( add( t, and_gate( 2 ), { std::min( perm[j], other ), std::max( perm[j], other ) }, "b" + std::to_string( j ) ),
                    "o" + std::to_string( j ) );
    }
    auto const staged = assign_stages( t, 1 );
    auto layout = partition_design( staged, 64, 8, 6 );
    for ( auto& layer : layout.layers )
    {
      std::vector<uint32_t> nodes;
      for ( auto const& b : layer.blocks )
        nodes.insert( nodes.end(), b.nodes.begin(), b.nodes.end() );
      std::shuffle( nodes.begin(), nodes.end(), rng );
      layer.blocks = partition_stage( staged, nodes, 64, 8, 6 );
    }
    layout.refresh( staged, 6 );
    auto const before = count_direct_links( staged, layout );
    reorder_stages( staged, layout, 6, 10 );
    auto const after = count_direct_links( staged, layout );
    CHECK( after >= before );
    improved += after > before ? 1u : 0u;
  }
  CHECK( improved >= 95u );
}

TEST_CASE( "C432 mapping" )
{
  auto const net = read_bench_file( SMTL_DATA_DIR "/c432.bench" );
  auto const tln = synthesize_tln( net );
  uint32_t previous = ~0u;
  for ( uint32_t k : { 1u, 2u, 3u } )
  {
    mapping_params p;
    p.levels_per_stage = k;
    auto const d = map_design( tln, p, net );
    CHECK( validate_design( d ).empty() );
    CHECK( verify_equivalence( net, d.staged.tln, equivalence_mode::automatic( net.num_inputs(), 4096, 7 ) ).equivalent );
    CHECK( d.num_buffers() <= previous );
    previous = d.num_buffers();
    auto const fo = d.staged.tln.fanout_counts();
    for ( uint32_t id = d.staged.tln.num_inputs(); id < d.staged.tln.num_signals(); ++id )
      CHECK( fo[id] <= p.fanout_max );
    for ( auto o : d.staged.tln.outputs() )
      CHECK( d.staged.stage( o ) == d.staged.num_stages() );
  }
  CHECK_THROWS_AS( check_mapping_params( mapping_params{ 0 } ), std::invalid_argument );
}

TEST_CASE( "fixed block count and repartition" )
{
  auto const net = read_bench_file( SMTL_DATA_DIR "/c432.bench" );
  auto const tln = synthesize_tln( net );
  mapping_params p;
  p.levels_per_stage = 1;
  p.blocks = 1;
  p.cols = 60;
  auto const d = map_design( tln, p, net );
  CHECK( max_occupancy( d.staged ) <= 60u );
  CHECK( d.staged.num_levels() > assign_stages( tln, 1 ).num_levels() );
  p.levels_per_stage = 2;
  p.blocks = 1;
  p.cols = 32;
  CHECK_THROWS_AS( map_design( tln, p, net ), capacity_error );
  CHECK( validate_design( d ).empty() );
  CHECK( verify_equivalence( net, d.staged.tln, equivalence_mode::automatic( net.num_inputs(), 4096, 3 ) ).equivalent );

  auto const r = repartition( map_design( tln, mapping_params{}, net ), 64, 8 );
  CHECK( r.layout.subarray_cols == 8 );
  CHECK( validate_design( r ).empty() );
  CHECK( mapping_summary( r ).find( "pipeline stages" ) != std::string::npos );
}
