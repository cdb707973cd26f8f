#include <smtl/errors.hpp>
#include <smtl/serialization.hpp>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

namespace smtl
{

using json = nlohmann::ordered_json;

namespace
{

json parse_document( std::string const& text, std::string const& format )
{
  json doc;
  try
  {
    doc = json::parse( text );
  }
  catch ( json::parse_error const& e )
  {
    std::size_t line = 1, column = 1;
    for ( std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i )
    {
      if ( text[i] == '\n' )
      {
        ++line;
        column = 1;
      }
      else
      {
        ++column;
      }
    }
    throw parse_error( "malformed JSON", line, column );
  }
  if ( !doc.is_object() )
  {
    throw parse_error( "expected a JSON object" );
  }
  if ( !doc.contains( "format" ) || doc["format"] != format )
  {
    throw parse_error( "expected a '" + format + "' document" );
  }
  if ( !doc.contains( "version" ) || doc["version"] != 1 )
  {
    throw parse_error( "unsupported '" + format + "' version" );
  }
  return doc;
}

json const& field( json const& obj, char const* key, std::string const& where )
{
  if ( !obj.is_object() || !obj.contains( key ) )
  {
    throw parse_error( where + ": missing field '" + key + "'" );
  }
  return obj[key];
}

template<typename T>
T get_as( json const& value, std::string const& where )
{
  bool ok = false;
  if constexpr ( std::is_same_v<T, std::string> )
    ok = value.is_string();
  else if constexpr ( std::is_same_v<T, double> )
    ok = value.is_number();
  else if constexpr ( std::is_unsigned_v<T> )
    ok = value.is_number_unsigned();
  else if constexpr ( std::is_integral_v<T> )
    ok = value.is_number_integer();
  if ( !ok )
  {
    throw parse_error( where + ": unexpected value type" );
  }
  return value.get<T>();
}

template<typename T>
T get( json const& obj, char const* key, std::string const& where )
{
  return get_as<T>( field( obj, key, where ), where + "." + key );
}

template<typename T>
std::vector<T> get_list( json const& obj, char const* key, std::string const& where )
{
  auto const& arr = field( obj, key, where );
  auto const path = where + "." + key;
  if ( !arr.is_array() )
  {
    throw parse_error( path + ": expected an array" );
  }
  std::vector<T> out;
  for ( std::size_t i = 0; i < arr.size(); ++i )
  {
    out.push_back( get_as<T>( arr[i], path + "[" + std::to_string( i ) + "]" ) );
  }
  return out;
}

json const& get_array( json const& obj, char const* key, std::string const& where )
{
  auto const& arr = field( obj, key, where );
  if ( !arr.is_array() )
  {
    throw parse_error( where + "." + key + ": expected an array" );
  }
  return arr;
}

json network_body( boolean_network const& net )
{
  json j;
  j["inputs"] = net.input_names();
  j["outputs"] = net.output_names();
  j["gates"] = json::array();
  for ( uint32_t g = 0; g < net.num_gates(); ++g )
  {
    auto const& gate = net.gates()[g];
    json ins = json::array();
    for ( auto f : gate.fanins )
    {
      ins.push_back( net.net_name( f ) );
    }
    j["gates"].push_back( { { "output", net.net_name( net.num_inputs() + g ) }, { "type", std::string( to_string( gate.kind ) ) }, { "inputs", ins } } );
  }
  return j;
}

boolean_network network_body_from( json const& j, std::string const& where )
{
  std::vector<gate_declaration> gates;
  auto const& arr = get_array( j, "gates", where );
  for ( std::size_t i = 0; i < arr.size(); ++i )
  {
    auto const at = where + ".gates[" + std::to_string( i ) + "]";
    auto const type = get<std::string>( arr[i], "type", at );
    auto kind = gate_kind_from_string( type );
    if ( !kind )
    {
      throw parse_error( at + ": unknown gate type '" + type + "'" );
    }
    gates.push_back( { get<std::string>( arr[i], "output", at ), *kind, get_list<std::string>( arr[i], "inputs", at ), 0u } );
  }
  return boolean_network::build( get_list<std::string>( j, "inputs", where ), get_list<std::string>( j, "outputs", where ),
                                 std::move( gates ) );
}

json tln_body( threshold_network const& tln )
{
  json j;
  j["inputs"] = tln.input_names();
  j["nodes"] = json::array();
  for ( uint32_t i = 0; i < tln.num_nodes(); ++i )
  {
    auto const& n = tln.nodes()[i];
    j["nodes"].push_back( { { "id", tln.num_inputs() + i },
                            { "name", n.name },
                            { "role", to_string( n.role ) },
                            { "origin", n.origin },
                            { "weights", n.gate.weights },
                            { "bias", n.gate.bias },
                            { "fanins", n.fanins } } );
  }
  j["outputs"] = json::array();
  for ( uint32_t o = 0; o < tln.num_outputs(); ++o )
  {
    j["outputs"].push_back( { { "name", tln.output_names()[o] }, { "id", tln.outputs()[o] } } );
  }
  j["summary"] = { { "nodes", tln.num_nodes() }, { "levels", tln.depth() }, { "max_fanin", tln.max_fanin() } };
  return j;
}

threshold_network tln_body_from( json const& j, std::string const& where )
{
  threshold_network tln( get_list<std::string>( j, "inputs", where ) );
  auto const& nodes = get_array( j, "nodes", where );
  for ( std::size_t i = 0; i < nodes.size(); ++i )
  {
    auto const at = where + ".nodes[" + std::to_string( i ) + "]";
    auto const& jn = nodes[i];
    if ( get<uint32_t>( jn, "id", at ) != tln.num_signals() )
    {
      throw parse_error( at + ": node ids must be consecutive after the inputs" );
    }
    tln_node n;
    n.name = get<std::string>( jn, "name", at );
    try
    {
      n.role = node_role_from_string( get<std::string>( jn, "role", at ) );
    }
    catch ( std::invalid_argument const& e )
    {
      throw parse_error( at + ": " + e.what() );
    }
    n.origin = get<uint32_t>( jn, "origin", at );
    n.gate.weights = get_list<int>( jn, "weights", at );
    n.gate.bias = get<int>( jn, "bias", at );
    n.fanins = get_list<uint32_t>( jn, "fanins", at );
    if ( n.role != node_role::logic && n.origin >= tln.num_signals() )
    {
      throw parse_error( at + ": origin refers to a later signal" );
    }
    try
    {
      tln.add_node( std::move( n ) );
    }
    catch ( std::invalid_argument const& e )
    {
      throw parse_error( at + ": " + e.what() );
    }
  }
  auto const& outs = get_array( j, "outputs", where );
  for ( std::size_t i = 0; i < outs.size(); ++i )
  {
    auto const at = where + ".outputs[" + std::to_string( i ) + "]";
    auto const id = get<uint32_t>( outs[i], "id", at );
    if ( id >= tln.num_signals() )
    {
      throw parse_error( at + ": unknown signal id" );
    }
    tln.add_output( id, get<std::string>( outs[i], "name", at ) );
  }
  return tln;
}

json params_body( mapping_params const& p )
{
  return { { "levels_per_stage", p.levels_per_stage },
           { "rows", p.rows },
           { "cols", p.cols },
           { "blocks", p.blocks },
           { "subarray_rows", p.subarray_rows },
           { "subarray_cols", p.subarray_cols },
           { "fanout_max", p.fanout_max },
           { "min_fill", p.min_fill },
           { "backward_max", p.backward_max },
           { "reorder_sweeps", p.reorder_sweeps },
           { "w_max", p.w_max } };
}

mapping_params params_from( json const& j, std::string const& where )
{
  mapping_params p;
  p.levels_per_stage = get<uint32_t>( j, "levels_per_stage", where );
  p.rows = get<uint32_t>( j, "rows", where );
  p.cols = get<uint32_t>( j, "cols", where );
  p.blocks = get<uint32_t>( j, "blocks", where );
  p.subarray_rows = get<uint32_t>( j, "subarray_rows", where );
  p.subarray_cols = get<uint32_t>( j, "subarray_cols", where );
  p.fanout_max = get<uint32_t>( j, "fanout_max", where );
  p.min_fill = get<double>( j, "min_fill", where );
  p.backward_max = get<uint32_t>( j, "backward_max", where );
  p.reorder_sweeps = get<uint32_t>( j, "reorder_sweeps", where );
  p.w_max = get<int>( j, "w_max", where );
  try
  {
    check_mapping_params( p );
  }
  catch ( std::invalid_argument const& e )
  {
    throw parse_error( where + ": " + e.what() );
  }
  return p;
}

json links_body( interconnect_summary const& s )
{
  return { { "input", s.input },
           { "direct", s.direct },
           { "routed", s.routed },
           { "backward", s.backward },
           { "route_length", s.route_length },
           { "total", s.total() } };
}

/* (name, member) table shared by the device parameter reader and writer */
template<typename Fn>
void for_each_device_field( device_params& p, Fn&& fn )
{
  fn( "i_threshold", p.i_threshold );
  fn( "t_switch_ref", p.t_switch_ref );
  fn( "v_supply", p.v_supply );
  fn( "delta_v", p.delta_v );
  fn( "r_min", p.r_min );
  fn( "r_max", p.r_max );
  fn( "r_off", p.r_off );
  fn( "r_mtj_parallel", p.r_mtj_parallel );
  fn( "tmr", p.tmr );
  fn( "p_detect", p.p_detect );
  fn( "f_clk", p.f_clk );
  fn( "i_dtcs", p.i_dtcs );
  fn( "write_threshold", p.write_threshold );
  fn( "k_write", p.k_write );
}

} // namespace

std::string network_to_json( boolean_network const& network )
{
  json j{ { "format", "smtl.boolean_network" }, { "version", 1 } };
  j.update( network_body( network ) );
  return j.dump( 2 ) + "\n";
}

boolean_network network_from_json( std::string const& text )
{
  return network_body_from( parse_document( text, "smtl.boolean_network" ), "network" );
}

std::string tln_to_json( tln_document const& doc )
{
  json j{ { "format", "smtl.tln" }, { "version", 1 } };
  j.update( tln_body( doc.tln ) );
  if ( doc.synthesis )
  {
    j["synthesis"] = { { "fanin_limit", doc.synthesis->fanin_limit }, { "w_max", doc.synthesis->w_max } };
  }
  if ( doc.source )
  {
    j["source"] = network_body( *doc.source );
  }
  return j.dump( 2 ) + "\n";
}

tln_document tln_from_json( std::string const& text )
{
  auto const j = parse_document( text, "smtl.tln" );
  tln_document doc{ tln_body_from( j, "tln" ), std::nullopt, std::nullopt };
  if ( j.contains( "synthesis" ) )
  {
    synthesis_params sp;
    sp.fanin_limit = get<uint32_t>( j["synthesis"], "fanin_limit", "tln.synthesis" );
    sp.w_max = get<int>( j["synthesis"], "w_max", "tln.synthesis" );
    doc.synthesis = sp;
  }
  if ( j.contains( "source" ) && !j["source"].is_null() )
  {
    doc.source = network_body_from( j["source"], "tln.source" );
    if ( doc.source->num_inputs() != doc.tln.num_inputs() || doc.source->num_outputs() != doc.tln.num_outputs() )
    {
      throw parse_error( "tln.source: interface does not match the network" );
    }
  }
  return doc;
}

std::string design_to_json( mapped_design const& d )
{
  json j{ { "format", "smtl.mapped_design" }, { "version", 1 } };
  j["params"] = params_body( d.params );
  j["source"] = d.source ? network_body( *d.source ) : json( nullptr );
  j["logic"] = tln_body( d.logic );
  j["network"] = tln_body( d.staged.tln );
  j["levels"] = d.staged.level;
  j["levels_per_stage"] = d.staged.levels_per_stage;
  json layers = json::array();
  for ( auto const& layer : d.layout.layers )
  {
    json blocks = json::array();
    for ( auto const& b : layer.blocks )
    {
      blocks.push_back( { { "nodes", b.nodes }, { "rows", b.rows } } );
    }
    layers.push_back( { { "levels", layer.levels }, { "blocks", blocks } } );
  }
  j["layout"] = { { "subarray_rows", d.layout.subarray_rows }, { "subarray_cols", d.layout.subarray_cols }, { "layers", layers } };
  j["links"] = json::array();
  for ( auto const& l : d.links )
  {
    j["links"].push_back( { { "source", l.source }, { "target", l.target }, { "kind", to_string( l.kind ) }, { "length", l.length } } );
  }
  j["warnings"] = d.warnings;
  j["blocks_per_layer"] = d.blocks_per_layer;
  j["absorbed_layers"] = d.absorbed_layers;
  j["summary"] = { { "nodes", d.staged.tln.num_nodes() },
                   { "stages", d.staged.num_stages() },
                   { "layers", d.layout.layers.size() },
                   { "blocks", d.layout.num_blocks() },
                   { "buffers", d.num_buffers() },
                   { "copies", d.num_copies() },
                   { "allocated_cells", d.layout.allocated_cells() },
                   { "links", links_body( d.interconnect() ) } };
  return j.dump( 2 ) + "\n";
}

mapped_design design_from_json( std::string const& text )
{
  auto const j = parse_document( text, "smtl.mapped_design" );
  mapped_design d;
  d.params = params_from( field( j, "params", "design" ), "design.params" );
  if ( !field( j, "source", "design" ).is_null() )
  {
    d.source = network_body_from( j["source"], "design.source" );
  }
  d.logic = tln_body_from( field( j, "logic", "design" ), "design.logic" );
  d.staged.tln = tln_body_from( field( j, "network", "design" ), "design.network" );
  d.staged.level = get_list<uint32_t>( j, "levels", "design" );
  d.staged.levels_per_stage = get<uint32_t>( j, "levels_per_stage", "design" );
  if ( d.staged.level.size() != d.staged.tln.num_signals() )
  {
    throw parse_error( "design.levels: one level per signal expected" );
  }
  if ( d.staged.levels_per_stage != d.params.levels_per_stage )
  {
    throw parse_error( "design.levels_per_stage: disagrees with the mapping parameters" );
  }
  auto const& lj = field( j, "layout", "design" );
  d.layout.subarray_rows = get<uint32_t>( lj, "subarray_rows", "design.layout" );
  d.layout.subarray_cols = get<uint32_t>( lj, "subarray_cols", "design.layout" );
  auto const& layers = get_array( lj, "layers", "design.layout" );
  for ( std::size_t l = 0; l < layers.size(); ++l )
  {
    auto const at = "design.layout.layers[" + std::to_string( l ) + "]";
    layer_layout layer;
    layer.levels = get_list<uint32_t>( layers[l], "levels", at );
    auto const& blocks = get_array( layers[l], "blocks", at );
    for ( std::size_t b = 0; b < blocks.size(); ++b )
    {
      auto const bt = at + ".blocks[" + std::to_string( b ) + "]";
      block_layout block;
      block.nodes = get_list<uint32_t>( blocks[b], "nodes", bt );
      block.rows = get<uint32_t>( blocks[b], "rows", bt );
      for ( auto id : block.nodes )
      {
        if ( id < d.staged.tln.num_inputs() || id >= d.staged.tln.num_signals() )
        {
          throw parse_error( bt + ": invalid node id " + std::to_string( id ) );
        }
      }
      layer.blocks.push_back( std::move( block ) );
    }
    d.layout.layers.push_back( std::move( layer ) );
  }
  d.layout.refresh( d.staged, d.params.w_max );
  d.links = classify_links( d.staged, d.layout );
  d.warnings = get_list<std::string>( j, "warnings", "design" );
  d.blocks_per_layer = get<uint32_t>( j, "blocks_per_layer", "design" );
  d.absorbed_layers = get<uint32_t>( j, "absorbed_layers", "design" );
  auto const issues = validate_design( d );
  if ( !issues.empty() )
  {
    throw netlist_error( "invalid mapped design: " + issues.front() );
  }
  return d;
}

std::string device_params_to_json( device_params const& params )
{
  json j{ { "format", "smtl.device_params" }, { "version", 1 } };
  auto copy = params;
  for_each_device_field( copy, [&]( char const* name, double& value ) { j[name] = value; } );
  auto const& m = params.metadata;
  j["metadata"] = { { "free_domain_size", m.free_domain_size },
                    { "ms_emu_per_cm3", m.ms_emu_per_cm3 },
                    { "ku2v_kbt", m.ku2v_kbt },
                    { "beta", m.beta },
                    { "alpha", m.alpha },
                    { "mtj_oxide_thickness", m.mtj_oxide_thickness },
                    { "mtj_area", m.mtj_area },
                    { "cmos_node", m.cmos_node } };
  return j.dump( 2 ) + "\n";
}

device_params device_params_from_json( std::string const& text )
{
  auto const j = parse_document( text, "smtl.device_params" );
  device_params p;
  std::vector<std::string> known{ "format", "version", "metadata" };
  for_each_device_field( p, [&]( char const* name, double& value ) {
    known.emplace_back( name );
    if ( j.contains( name ) )
    {
      value = get_as<double>( j[name], std::string( "params." ) + name );
    }
  } );
  for ( auto const& [key, _] : j.items() )
  {
    if ( std::find( known.begin(), known.end(), key ) == known.end() )
    {
      throw parse_error( "params: unknown field '" + key + "'" );
    }
  }
  if ( j.contains( "metadata" ) )
  {
    auto const& m = j["metadata"];
    auto& out = p.metadata;
    auto read = [&]( char const* key, auto& value ) {
      if ( m.contains( key ) )
        value = get_as<std::decay_t<decltype( value )>>( m[key], std::string( "params.metadata." ) + key );
    };
    read( "free_domain_size", out.free_domain_size );
    read( "ms_emu_per_cm3", out.ms_emu_per_cm3 );
    read( "ku2v_kbt", out.ku2v_kbt );
    read( "beta", out.beta );
    read( "alpha", out.alpha );
    read( "mtj_oxide_thickness", out.mtj_oxide_thickness );
    read( "mtj_area", out.mtj_area );
    read( "cmos_node", out.cmos_node );
  }
  validate_device_params( p );
  return p;
}

std::string report_to_json( evaluation_report const& r, evaluation_run const& run, device_params const& params,
                            evaluation_params const& eval )
{
  json j{ { "format", "smtl.evaluation_report" }, { "version", 1 } };
  j["run"] = { { "sigma", run.sigma },
               { "seed", run.seed },
               { "vectors", run.simulation.vectors },
               { "activity", eval.activity },
               { "c_wire", eval.c_wire },
               { "dv_penalty", eval.dv_penalty },
               { "i_threshold_eff", eval.i_threshold_eff },
               { "i_drive", eval.i_drive } };
  j["params"] = json::parse( device_params_to_json( params ) );
  j["simulation"] = { { "vectors", run.simulation.vectors },
                      { "errors", run.simulation.errors },
                      { "indeterminate", run.simulation.indeterminate },
                      { "error_rate", run.simulation.vectors ? static_cast<double>( run.simulation.errors ) / run.simulation.vectors : 0.0 } };
  if ( run.tolerance )
  {
    json curve = json::array();
    for ( auto const& p : run.tolerance->curve )
    {
      curve.push_back( { { "sigma", p.sigma }, { "errors", p.errors }, { "vectors", p.vectors } } );
    }
    j["tolerance"] = { { "sigma_star", run.tolerance->sigma_star }, { "curve", curve } };
  }
  j["design"] = { { "nodes", r.nodes }, { "buffers", r.buffers }, { "links", links_body( r.links ) } };
  j["power"] = { { "p_mca", r.power.p_mca },
                 { "p_detect", r.power.p_detect },
                 { "p_interconnect", r.power.p_interconnect },
                 { "p_total", r.power.p_total },
                 { "delta_v_eff", r.power.delta_v_eff },
                 { "i_dtcs", r.power.i_dtcs },
                 { "active_rows", r.power.active_rows } };
  j["delay"] = { { "depth", r.delay.depth },
                 { "clock_period", r.delay.clock_period },
                 { "switch_time", r.delay.switch_time },
                 { "latency", r.delay.latency },
                 { "throughput", r.delay.throughput },
                 { "timing_ok", r.delay.timing_ok },
                 { "violation", r.delay.violation } };
  j["area"] = { { "array", r.area.array }, { "periphery", r.area.periphery }, { "interconnect", r.area.interconnect }, { "total", r.area.total } };
  j["energy"] = r.energy;
  j["edp"] = r.edp;
  if ( r.reference )
  {
    j["baseline"] = { { "energy", r.reference->energy },
                      { "delay", r.reference->delay },
                      { "energy_ratio", r.energy_ratio },
                      { "edp_ratio", r.edp_ratio } };
  }
  return j.dump( 2 ) + "\n";
}

std::string read_text_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
  {
    throw smtl_error( "cannot open '" + path + "'" );
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic( std::string const& path, std::string const& contents )
{
  namespace fs = std::filesystem;
  fs::path const target( path );
  auto tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out( tmp, std::ios::binary | std::ios::trunc );
    if ( !out )
    {
      throw smtl_error( "cannot write '" + tmp.string() + "'" );
    }
    out << contents;
    out.flush();
    if ( !out )
    {
      std::error_code ec;
      fs::remove( tmp, ec );
      throw smtl_error( "write to '" + tmp.string() + "' failed" );
    }
  }
  std::error_code ec;
  fs::rename( tmp, target, ec );
  if ( ec )
  {
    fs::remove( tmp, ec );
    throw smtl_error( "cannot rename into '" + path + "'" );
  }
}

} // namespace smtl
