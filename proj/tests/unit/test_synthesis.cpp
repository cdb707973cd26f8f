#include <doctest.h>

#include "helpers.hpp"

#include <smtl/synthesis.hpp>

#include <cstdlib>
#include <stdexcept>

using namespace smtl;

namespace
{

bool primitive( gate_kind kind, uint64_t row, uint32_t arity )
{
  std::vector<bool> x( arity );
  for ( uint32_t i = 0; i < arity; ++i )
    x[i] = ( row >> i ) & 1u;
  return evaluate_gate( kind, x );
}

} // namespace

TEST_CASE( "gate_to_tlg realizes every primitive with margin 1" )
{
  CHECK( gate_to_tlg( gate_kind::nand_gate, 2 ) == threshold_gate{ { -2, -2 }, 3 } );
  CHECK( gate_to_tlg( gate_kind::not_gate, 1 ) == threshold_gate{ { -2 }, 1 } );
  CHECK( gate_to_tlg( gate_kind::buff_gate, 1 ) == threshold_gate{ { 2 }, -1 } );
  CHECK( gate_to_tlg( gate_kind::or_gate, 3 ) == threshold_gate{ { 2, 2, 2 }, -1 } );
  for ( auto kind : { gate_kind::and_gate, gate_kind::or_gate, gate_kind::nand_gate, gate_kind::nor_gate } )
  {
    for ( uint32_t n = 1; n <= 4; ++n )
    {
      auto const g = gate_to_tlg( kind, n );
      CHECK( gate_margin( g ) >= 1 );
      for ( uint64_t r = 0; r < ( 1u << n ); ++r )
        CHECK( eval_tlg( g, r ) == primitive( kind, r, n ) );
    }
  }
  CHECK_THROWS_AS( gate_to_tlg( gate_kind::xor_gate, 2 ), std::invalid_argument );
  CHECK_THROWS_AS( gate_to_tlg( gate_kind::and_gate, 5 ), std::invalid_argument );
  CHECK_THROWS_AS( gate_to_tlg( gate_kind::not_gate, 2 ), std::invalid_argument );
}

TEST_CASE( "decompose_xor" )
{
  auto const x2 = decompose_xor( 2 );
  CHECK( x2.num_nodes() <= 3 );
  CHECK( evaluate_tln( x2, { 0, 1 } ) == bit_vector{ 1 } );
  CHECK( evaluate_tln( x2, { 1, 1 } ) == bit_vector{ 0 } );
  CHECK( evaluate_tln( decompose_xor( 3 ), { 1, 1, 1 } ) == bit_vector{ 1 } );
  for ( uint32_t limit : { 2u, 3u, 4u } )
  {
    CHECK( decompose_xor( 2, limit ).num_nodes() <= 3 );
    for ( uint32_t n = 1; n <= 7; ++n )
    {
      auto const t = decompose_xor( n, limit );
      CHECK( check_tln( t, limit, 6 ).empty() );
      for ( uint64_t r = 0; r < ( 1u << n ); ++r )
      {
        bit_vector x( n );
        for ( uint32_t i = 0; i < n; ++i )
          x[i] = ( r >> i ) & 1u;
        CHECK( evaluate_tln( t, x )[0] == ( __builtin_popcountll( r ) % 2 == 1 ) );
      }
    }
  }
}

TEST_CASE( "C17 synthesis" )
{
  auto const net = read_bench_file( SMTL_DATA_DIR "/c17.bench" );
  auto const tln = synthesize_tln( net );
  CHECK( tln.num_nodes() <= 6 );
  CHECK( tln.num_nodes() == 4 );
  auto const eq = verify_equivalence( net, tln, equivalence_mode::automatic( net.num_inputs() ) );
  CHECK( eq.equivalent );
  CHECK( eq.exhaustive );
  CHECK( eq.vectors == 32 );
  CHECK( check_tln( tln, 4, 6 ).empty() );
}

TEST_CASE( "C432 synthesis respects limits and is equivalent" )
{
  auto const net = read_bench_file( SMTL_DATA_DIR "/c432.bench" );
  for ( uint32_t limit : { 2u, 3u, 4u } )
  {
    auto const tln = synthesize_tln( net, { limit, 6, true } );
    CHECK( tln.max_fanin() <= limit );
    CHECK( check_tln( tln, limit, 6 ).empty() );
    auto const eq = verify_equivalence( net, tln, equivalence_mode::automatic( net.num_inputs(), 10000, 42 ) );
    CHECK_FALSE( eq.exhaustive );
    CHECK( eq.vectors == 10000 );
    CHECK( eq.seed == 42 );
    CHECK( eq.equivalent );
  }
}

TEST_CASE( "single gates" )
{
  auto const and2 = parse_bench( "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n" );
  auto const tln = synthesize_tln( and2 );
  CHECK( tln.num_nodes() == 1 );
  CHECK( verify_equivalence( and2, tln, equivalence_mode::automatic( 2 ) ).equivalent );

  auto const wide = parse_bench( "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nINPUT(e)\nINPUT(f)\nINPUT(g)\nINPUT(h)\nINPUT(i)\n"
                                 "OUTPUT(y)\ny = NAND(a, b, c, d, e, f, g, h, i)\n" );
  for ( uint32_t limit : { 2u, 3u, 4u } )
  {
    auto const t = synthesize_tln( wide, { limit, 6, false } );
    CHECK( t.max_fanin() <= limit );
    CHECK( verify_equivalence( wide, t, equivalence_mode::automatic( 9 ) ).equivalent );
  }

  CHECK_THROWS_AS( synthesize_tln( and2, { 1, 6, true } ), std::invalid_argument );
}

TEST_CASE( "verify_equivalence detects mutations" )
{
  auto const net = read_bench_file( SMTL_DATA_DIR "/c17.bench" );
  auto tln = synthesize_tln( net );
  auto const id = tln.num_inputs();
  tln.node( id ).gate.weights[0] = -tln.node( id ).gate.weights[0];
  auto const eq = verify_equivalence( net, tln, equivalence_mode::automatic( 5 ) );
  REQUIRE_FALSE( eq.equivalent );
  REQUIRE( eq.failure );
  CHECK( eq.failure->expected == evaluate_network( net, eq.failure->inputs ) );
  CHECK( eq.failure->actual == evaluate_tln( tln, eq.failure->inputs ) );
  CHECK( eq.failure->expected != eq.failure->actual );

  auto const ident = parse_bench( "INPUT(a)\nOUTPUT(a)\n" );
  threshold_network buf( { "a" } );
  buf.add_output( buf.add_node( { { { 2 }, -1 }, { 0 }, "b", node_role::buffer, 0 } ), "a" );
  CHECK( verify_equivalence( ident, buf, equivalence_mode::automatic( 1 ) ).equivalent );

  threshold_network wrong( { "a", "b" } );
  CHECK_THROWS_AS( verify_equivalence( ident, wrong, equivalence_mode::automatic( 1 ) ), std::invalid_argument );
}

TEST_CASE( "collapse and fan-in properties on random networks" )
{
  std::vector<boolean_network> nets;
  nets.push_back( read_bench_file( SMTL_DATA_DIR "/c17.bench" ) );
  for ( uint64_t seed = 1; seed <= 6; ++seed )
    nets.push_back( test::random_network( 10, 60, seed ) );

  for ( auto const& net : nets )
  {
    uint32_t previous = 0;
    for ( uint32_t limit : { 4u, 3u, 2u } )
    {
      synthesis_stats stats;
      auto const tln = synthesize_tln( net, { limit, 6, true }, &stats );
      CHECK( tln.num_nodes() <= stats.nodes_before_collapse );
      CHECK( tln.num_nodes() + stats.merges == stats.nodes_before_collapse );
      CHECK( tln.num_nodes() >= previous );
      previous = tln.num_nodes();
      CHECK( check_tln( tln, limit, 6 ).empty() );
      CHECK( verify_equivalence( net, tln, equivalence_mode::automatic( net.num_inputs() ) ).equivalent );
      for ( auto const& node : tln.nodes() )
      {
        auto const table = gate_truth_table( node.gate );
        auto const again = solve_weights( table, 6, limit );
        REQUIRE( again );
        CHECK( gate_truth_table( *again ) == table );
      }
    }
  }
}
