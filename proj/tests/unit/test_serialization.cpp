#include <doctest.h>

#include <smtl/errors.hpp>
#include <smtl/serialization.hpp>

#include <cstdio>
#include <filesystem>

using namespace smtl;

namespace
{

boolean_network const& c17()
{
  static auto const net = read_bench_file( SMTL_DATA_DIR "/c17.bench" );
  return net;
}

bool same_network( boolean_network const& a, boolean_network const& b )
{
  return write_bench( a ) == write_bench( b );
}

} // namespace

TEST_CASE( "boolean network JSON round trip" )
{
  auto const net = read_bench_file( SMTL_DATA_DIR "/c432.bench" );
  auto const text = network_to_json( net );
  auto const back = network_from_json( text );
  CHECK( same_network( net, back ) );
  CHECK( network_to_json( back ) == text );
}

TEST_CASE( "threshold network JSON round trip" )
{
  synthesis_params sp;
  sp.fanin_limit = 3;
  auto const tln = synthesize_tln( c17(), sp );
  auto const text = tln_to_json( { tln, sp, c17() } );
  auto const doc = tln_from_json( text );
  REQUIRE( doc.synthesis );
  CHECK( doc.synthesis->fanin_limit == 3 );
  REQUIRE( doc.source );
  CHECK( same_network( *doc.source, c17() ) );
  CHECK( doc.tln.num_nodes() == tln.num_nodes() );
  CHECK( doc.tln.outputs() == tln.outputs() );
  for ( uint32_t i = 0; i < tln.num_nodes(); ++i )
  {
    CHECK( doc.tln.nodes()[i].gate == tln.nodes()[i].gate );
    CHECK( doc.tln.nodes()[i].fanins == tln.nodes()[i].fanins );
  }
  CHECK( tln_to_json( doc ) == text );
  CHECK( text.find( "\"weights\"" ) != std::string::npos );

  auto const bare = tln_from_json( tln_to_json( { tln, std::nullopt, std::nullopt } ) );
  CHECK_FALSE( bare.source );
  CHECK_FALSE( bare.synthesis );
}

TEST_CASE( "mapped design JSON round trip" )
{
  auto const net = read_bench_file( SMTL_DATA_DIR "/c432.bench" );
  auto const d = map_design( synthesize_tln( net ), mapping_params{}, net );
  auto const text = design_to_json( d );
  auto const back = design_from_json( text );
  CHECK( design_to_json( back ) == text );
  CHECK( back.interconnect().routed == d.interconnect().routed );
  CHECK( back.staged.level == d.staged.level );
  REQUIRE( back.source );

  /* a layout that drops a node fails validation */
  auto broken = d;
  broken.layout.layers[0].blocks[0].nodes.pop_back();
  CHECK_THROWS_AS( design_from_json( design_to_json( broken ) ), smtl_error );
}

TEST_CASE( "device parameter files" )
{
  device_params p;
  p.delta_v = 0.1;
  auto const back = device_params_from_json( device_params_to_json( p ) );
  CHECK( back.delta_v == 0.1 );
  CHECK( back.r_min == p.r_min );
  CHECK( back.metadata.cmos_node == "45nm" );

  auto const shipped = device_params_from_json( read_text_file( SMTL_DATA_DIR "/table1.json" ) );
  device_params const defaults;
  CHECK( shipped.i_threshold == defaults.i_threshold );
  CHECK( shipped.delta_v == defaults.delta_v );
  CHECK( shipped.r_min == defaults.r_min );
  CHECK( shipped.r_max == defaults.r_max );
  CHECK( shipped.tmr == defaults.tmr );
  CHECK( shipped.p_detect == defaults.p_detect );
  CHECK( shipped.f_clk == defaults.f_clk );

  CHECK( device_params_from_json( R"({"format":"smtl.device_params","version":1,"tmr":2})" ).tmr == 2.0 );
  CHECK_THROWS_AS( device_params_from_json( R"({"format":"smtl.device_params","version":1,"tmrr":2})" ), parse_error );
  CHECK_THROWS_AS( device_params_from_json( R"({"format":"smtl.device_params","version":1,"tmr":"x"})" ), parse_error );
  CHECK_THROWS_AS( device_params_from_json( R"({"format":"smtl.device_params","version":1,"r_min":-1})" ), device_error );
  CHECK_THROWS_AS( device_params_from_json( R"({"format":"smtl.tln","version":1})" ), parse_error );
}

TEST_CASE( "malformed JSON reports a position" )
{
  try
  {
    network_from_json( "{\n  \"format\": \"smtl.boolean_network\",\n  \"version\": 1,\n  oops\n}" );
    FAIL( "expected a parse error" );
  }
  catch ( parse_error const& e )
  {
    CHECK( e.line() == 4 );
    CHECK( e.column() >= 3 );
  }
  CHECK_THROWS_AS( tln_from_json( R"({"format":"smtl.tln","version":1,"inputs":["a"],"nodes":[{"id":5}],"outputs":[]})" ), parse_error );
  CHECK_THROWS_AS( tln_from_json( R"({"format":"smtl.tln","version":2})" ), parse_error );
}

TEST_CASE( "atomic writes" )
{
  auto const dir = std::filesystem::temp_directory_path() / "smtl_serialization_test";
  std::filesystem::create_directories( dir );
  auto const path = ( dir / "out.txt" ).string();
  write_text_file_atomic( path, "first\n" );
  write_text_file_atomic( path, "second\n" );
  CHECK( read_text_file( path ) == "second\n" );
  CHECK_FALSE( std::filesystem::exists( path + ".tmp" ) );
  CHECK_THROWS_AS( write_text_file_atomic( ( dir / "missing" / "x.txt" ).string(), "x" ), smtl_error );
  CHECK_THROWS_AS( read_text_file( ( dir / "missing.txt" ).string() ), smtl_error );
  std::filesystem::remove_all( dir );
}
