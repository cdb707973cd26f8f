#include <smtl/devices.hpp>
#include <smtl/errors.hpp>
#include <smtl/evaluator.hpp>
#include <smtl/serialization.hpp>
#include <smtl/synthesis.hpp>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace smtl;

namespace
{

pattern_set make_patterns( uint32_t num_inputs, uint64_t vectors, uint64_t seed )
{
  if ( num_inputs <= 20 && ( uint64_t{ 1 } << num_inputs ) <= vectors )
    return pattern_set::exhaustive( num_inputs );
  return pattern_set::random( num_inputs, vectors, seed );
}

} // namespace

PYBIND11_MODULE( _smtl, m )
{
  m.doc() = "Threshold-logic synthesis and spin-memristor crossbar mapping";
  m.attr( "__version__" ) = SMTL_VERSION;

  auto base = py::register_exception<smtl_error>( m, "SmtlError", PyExc_RuntimeError );
  py::register_exception<parse_error>( m, "ParseError", base.ptr() );
  py::register_exception<netlist_error>( m, "NetlistError", base.ptr() );
  py::register_exception<capacity_error>( m, "CapacityError", base.ptr() );
  py::register_exception<timing_error>( m, "TimingError", base.ptr() );
  py::register_exception<device_error>( m, "DeviceError", base.ptr() );

  /* netlists */
  py::class_<boolean_network>( m, "BooleanNetwork" )
      .def_property_readonly( "num_inputs", &boolean_network::num_inputs )
      .def_property_readonly( "num_outputs", &boolean_network::num_outputs )
      .def_property_readonly( "num_gates", &boolean_network::num_gates )
      .def_property_readonly( "input_names", &boolean_network::input_names )
      .def_property_readonly( "output_names", &boolean_network::output_names )
      .def( "depth", []( boolean_network const& n ) { return network_depth( n ); } )
      .def( "to_bench", []( boolean_network const& n ) { return write_bench( n ); } )
      .def( "to_json", []( boolean_network const& n ) { return network_to_json( n ); } )
      .def( "evaluate", []( boolean_network const& n, std::vector<bool> const& x ) { return evaluate_network( n, x ); } )
      .def_static( "from_json", []( std::string const& text ) { return network_from_json( text ); } );

  m.def( "read_bench", &read_bench_file, py::arg( "path" ) );
  m.def( "parse_bench", []( std::string const& text ) { return parse_bench( std::string_view( text ) ); }, py::arg( "text" ) );

  /* threshold networks */
  py::class_<threshold_gate>( m, "ThresholdGate" )
      .def( py::init<>() )
      .def( py::init( []( std::vector<int> w, int b ) { return threshold_gate{ std::move( w ), b }; } ), py::arg( "weights" ), py::arg( "bias" ) )
      .def_readwrite( "weights", &threshold_gate::weights )
      .def_readwrite( "bias", &threshold_gate::bias )
      .def_property_readonly( "fanin", &threshold_gate::fanin )
      .def( "__call__", []( threshold_gate const& g, std::vector<bool> const& x ) { return eval_tlg( g, x ); } )
      .def( "__eq__", []( threshold_gate const& a, threshold_gate const& b ) { return a == b; } )
      .def( "__repr__", []( threshold_gate const& g ) {
        std::string s = "ThresholdGate([";
        for ( std::size_t i = 0; i < g.weights.size(); ++i )
          s += ( i ? ", " : "" ) + std::to_string( g.weights[i] );
        return s + "], " + std::to_string( g.bias ) + ")";
      } );

  m.def(
      "solve_weights",
      []( std::vector<bool> const& rows, int w_max ) { return solve_weights( truth_table::from_bits( rows ), w_max ); },
      py::arg( "truth_table" ), py::arg( "w_max" ) = default_w_max,
      "Threshold gate realizing the truth table (row i holds f(i), bit j of i is input j), or None." );

  py::class_<tln_node>( m, "TlnNode" )
      .def_readonly( "gate", &tln_node::gate )
      .def_readonly( "fanins", &tln_node::fanins )
      .def_readonly( "name", &tln_node::name )
      .def_property_readonly( "role", []( tln_node const& n ) { return to_string( n.role ); } );

  py::class_<threshold_network>( m, "ThresholdNetwork" )
      .def_property_readonly( "num_inputs", &threshold_network::num_inputs )
      .def_property_readonly( "num_nodes", &threshold_network::num_nodes )
      .def_property_readonly( "num_outputs", &threshold_network::num_outputs )
      .def_property_readonly( "nodes", &threshold_network::nodes )
      .def_property_readonly( "outputs", &threshold_network::outputs )
      .def( "depth", &threshold_network::depth )
      .def( "max_fanin", &threshold_network::max_fanin )
      .def( "evaluate", []( threshold_network const& n, std::vector<bool> const& x ) { return evaluate_tln( n, x ); } )
      .def( "to_json", []( threshold_network const& n ) { return tln_to_json( { n, std::nullopt, std::nullopt } ); } )
      .def_static( "from_json", []( std::string const& text ) { return tln_from_json( text ).tln; } );

  py::class_<synthesis_params>( m, "SynthesisParams" )
      .def( py::init<>() )
      .def_readwrite( "fanin_limit", &synthesis_params::fanin_limit )
      .def_readwrite( "w_max", &synthesis_params::w_max )
      .def_readwrite( "collapse", &synthesis_params::collapse );

  m.def( "synthesize", []( boolean_network const& n, synthesis_params const& p ) { return synthesize_tln( n, p ); },
         py::arg( "network" ), py::arg( "params" ) = synthesis_params{} );

  m.def(
      "verify_equivalence",
      []( boolean_network const& n, threshold_network const& t, uint64_t vectors, uint64_t seed ) {
        return verify_equivalence( n, t, equivalence_mode::automatic( n.num_inputs(), vectors, seed ) ).equivalent;
      },
      py::arg( "network" ), py::arg( "tln" ), py::arg( "vectors" ) = 10000, py::arg( "seed" ) = 1 );

  /* mapping */
  py::class_<mapping_params>( m, "MappingParams" )
      .def( py::init<>() )
      .def_readwrite( "levels_per_stage", &mapping_params::levels_per_stage )
      .def_readwrite( "rows", &mapping_params::rows )
      .def_readwrite( "cols", &mapping_params::cols )
      .def_readwrite( "blocks", &mapping_params::blocks )
      .def_readwrite( "subarray_rows", &mapping_params::subarray_rows )
      .def_readwrite( "subarray_cols", &mapping_params::subarray_cols )
      .def_readwrite( "fanout_max", &mapping_params::fanout_max )
      .def_readwrite( "min_fill", &mapping_params::min_fill )
      .def_readwrite( "backward_max", &mapping_params::backward_max )
      .def_readwrite( "reorder_sweeps", &mapping_params::reorder_sweeps )
      .def_readwrite( "w_max", &mapping_params::w_max );

  py::class_<interconnect_summary>( m, "InterconnectSummary" )
      .def_readonly( "input", &interconnect_summary::input )
      .def_readonly( "direct", &interconnect_summary::direct )
      .def_readonly( "routed", &interconnect_summary::routed )
      .def_readonly( "backward", &interconnect_summary::backward )
      .def_readonly( "route_length", &interconnect_summary::route_length )
      .def_property_readonly( "total", &interconnect_summary::total );

  py::class_<area_report>( m, "AreaReport" )
      .def_readonly( "array", &area_report::array )
      .def_readonly( "periphery", &area_report::periphery )
      .def_readonly( "interconnect", &area_report::interconnect )
      .def_readonly( "total", &area_report::total );

  py::class_<mapped_design>( m, "MappedDesign" )
      .def_readonly( "params", &mapped_design::params )
      .def_readonly( "logic", &mapped_design::logic )
      .def_readonly( "warnings", &mapped_design::warnings )
      .def_readonly( "blocks_per_layer", &mapped_design::blocks_per_layer )
      .def_readonly( "absorbed_layers", &mapped_design::absorbed_layers )
      .def_property_readonly( "network", []( mapped_design const& d ) { return d.staged.tln; } )
      .def_property_readonly( "num_stages", []( mapped_design const& d ) { return d.staged.num_stages(); } )
      .def_property_readonly( "num_layers", []( mapped_design const& d ) { return static_cast<uint32_t>( d.layout.layers.size() ); } )
      .def_property_readonly( "num_blocks", []( mapped_design const& d ) { return d.layout.num_blocks(); } )
      .def_property_readonly( "allocated_cells", []( mapped_design const& d ) { return d.layout.allocated_cells(); } )
      .def_property_readonly( "num_buffers", &mapped_design::num_buffers )
      .def_property_readonly( "num_copies", &mapped_design::num_copies )
      .def( "interconnect", &mapped_design::interconnect )
      .def( "summary", []( mapped_design const& d ) { return mapping_summary( d ); } )
      .def( "to_json", []( mapped_design const& d ) { return design_to_json( d ); } )
      .def_static( "from_json", []( std::string const& text ) { return design_from_json( text ); } );

  m.def(
      "map_design",
      []( threshold_network const& t, mapping_params const& p, std::optional<boolean_network> source ) { return map_design( t, p, std::move( source ) ); },
      py::arg( "tln" ), py::arg( "params" ) = mapping_params{}, py::arg( "source" ) = py::none() );
  m.def( "repartition", &repartition, py::arg( "design" ), py::arg( "subarray_rows" ), py::arg( "subarray_cols" ) );

  /* devices */
  py::class_<device_params>( m, "DeviceParams" )
      .def( py::init<>() )
      .def_readwrite( "i_threshold", &device_params::i_threshold )
      .def_readwrite( "t_switch_ref", &device_params::t_switch_ref )
      .def_readwrite( "v_supply", &device_params::v_supply )
      .def_readwrite( "delta_v", &device_params::delta_v )
      .def_readwrite( "r_min", &device_params::r_min )
      .def_readwrite( "r_max", &device_params::r_max )
      .def_readwrite( "r_off", &device_params::r_off )
      .def_readwrite( "r_mtj_parallel", &device_params::r_mtj_parallel )
      .def_readwrite( "tmr", &device_params::tmr )
      .def_readwrite( "p_detect", &device_params::p_detect )
      .def_readwrite( "f_clk", &device_params::f_clk )
      .def_readwrite( "i_dtcs", &device_params::i_dtcs )
      .def_readwrite( "write_threshold", &device_params::write_threshold )
      .def_readwrite( "k_write", &device_params::k_write )
      .def( "validate", []( device_params const& p ) { validate_device_params( p ); } )
      .def( "to_json", []( device_params const& p ) { return device_params_to_json( p ); } )
      .def_static( "from_json", []( std::string const& text ) { return device_params_from_json( text ); } )
      .def_static( "load", []( std::string const& path ) { return device_params_from_json( read_text_file( path ) ); } );

  py::class_<conductance_pair>( m, "ConductancePair" )
      .def_readonly( "g_plus", &conductance_pair::g_plus )
      .def_readonly( "g_minus", &conductance_pair::g_minus )
      .def_property_readonly( "net", &conductance_pair::net );
  m.def( "weight_to_conductance", &weight_to_conductance, py::arg( "w" ), py::arg( "w_max" ), py::arg( "params" ) = device_params{} );

  py::class_<switch_event>( m, "SwitchEvent" )
      .def_readonly( "switched", &switch_event::switched )
      .def_readonly( "time", &switch_event::time )
      .def_readonly( "direction", &switch_event::direction );
  m.def( "std_switch_time", &std_switch_time, py::arg( "current" ), py::arg( "params" ) = device_params{} );

  py::class_<read_result>( m, "ReadResult" )
      .def_readonly( "r_parallel", &read_result::r_parallel )
      .def_readonly( "r_antiparallel", &read_result::r_antiparallel )
      .def_readonly( "r_reference", &read_result::r_reference )
      .def_readonly( "i_parallel", &read_result::i_parallel )
      .def_readonly( "i_antiparallel", &read_result::i_antiparallel )
      .def_readonly( "v_swing", &read_result::v_swing );
  m.def( "std_read", &std_read, py::arg( "params" ) = device_params{} );

  py::class_<write_config>( m, "WriteConfig" )
      .def( py::init<>() )
      .def_readwrite( "i_prog", &write_config::i_prog )
      .def_readwrite( "comparator_bits", &write_config::comparator_bits )
      .def_readwrite( "offset_sigma", &write_config::offset_sigma )
      .def_readwrite( "dt", &write_config::dt )
      .def_readwrite( "t_max", &write_config::t_max )
      .def_readwrite( "r_start", &write_config::r_start );

  py::class_<write_result>( m, "WriteResult" )
      .def_readonly( "final_r", &write_result::final_r )
      .def_readonly( "error", &write_result::error )
      .def_readonly( "elapsed", &write_result::elapsed )
      .def_readonly( "timed_out", &write_result::timed_out );
  m.def( "write_with_feedback", &write_with_feedback, py::arg( "target_r" ), py::arg( "config" ) = write_config{},
         py::arg( "params" ) = device_params{}, py::arg( "seed" ) = 1 );

  py::class_<write_sweep_row>( m, "WriteSweepRow" )
      .def_readonly( "bits", &write_sweep_row::bits )
      .def_readonly( "i_prog", &write_sweep_row::i_prog )
      .def_readonly( "t_max", &write_sweep_row::t_max )
      .def_readonly( "mean_error", &write_sweep_row::mean_error )
      .def_readonly( "p95_error", &write_sweep_row::p95_error )
      .def_readonly( "timeouts", &write_sweep_row::timeouts );
  m.def( "write_sweep", &write_sweep, py::arg( "bits" ), py::arg( "currents" ), py::arg( "t_max" ), py::arg( "trials" ) = 200,
         py::arg( "seed" ) = 1, py::arg( "base" ) = write_config{}, py::arg( "params" ) = device_params{} );

  /* evaluation */
  py::class_<evaluation_params>( m, "EvaluationParams" )
      .def( py::init<>() )
      .def_readwrite( "activity", &evaluation_params::activity )
      .def_readwrite( "c_wire", &evaluation_params::c_wire )
      .def_readwrite( "dv_penalty", &evaluation_params::dv_penalty )
      .def_readwrite( "i_threshold_eff", &evaluation_params::i_threshold_eff )
      .def_readwrite( "i_drive", &evaluation_params::i_drive );

  py::class_<simulation_result>( m, "SimulationResult" )
      .def_readonly( "vectors", &simulation_result::vectors )
      .def_readonly( "errors", &simulation_result::errors )
      .def_readonly( "indeterminate", &simulation_result::indeterminate );

  m.def(
      "simulate",
      []( mapped_design const& d, device_params const& p, double sigma, uint64_t vectors, uint64_t seed, double i_th_eff ) {
        return simulate_mapped( d, p, make_patterns( d.staged.tln.num_inputs(), vectors, seed ), sigma, seed, i_th_eff );
      },
      py::arg( "design" ), py::arg( "params" ) = device_params{}, py::arg( "sigma" ) = 0.0, py::arg( "vectors" ) = 10000,
      py::arg( "seed" ) = 1, py::arg( "i_threshold_eff" ) = 0.0,
      "Simulates the programmed crossbars; exhaustive when `vectors` covers every input combination." );

  py::class_<tolerance_point>( m, "TolerancePoint" )
      .def_readonly( "sigma", &tolerance_point::sigma )
      .def_readonly( "errors", &tolerance_point::errors )
      .def_readonly( "vectors", &tolerance_point::vectors );
  py::class_<tolerance_result>( m, "ToleranceResult" )
      .def_readonly( "sigma_star", &tolerance_result::sigma_star )
      .def_readonly( "curve", &tolerance_result::curve );
  m.def( "variation_tolerance", &variation_tolerance, py::arg( "design" ), py::arg( "params" ), py::arg( "sigma_grid" ),
         py::arg( "vectors" ) = 10000, py::arg( "seeds" ) = 5, py::arg( "seed" ) = 1, py::arg( "i_threshold_eff" ) = 0.0 );

  py::class_<power_report>( m, "PowerReport" )
      .def_readonly( "p_mca", &power_report::p_mca )
      .def_readonly( "p_detect", &power_report::p_detect )
      .def_readonly( "p_interconnect", &power_report::p_interconnect )
      .def_readonly( "p_total", &power_report::p_total )
      .def_readonly( "delta_v_eff", &power_report::delta_v_eff )
      .def_readonly( "i_dtcs", &power_report::i_dtcs )
      .def_readonly( "active_rows", &power_report::active_rows );

  py::class_<delay_report>( m, "DelayReport" )
      .def_readonly( "depth", &delay_report::depth )
      .def_readonly( "clock_period", &delay_report::clock_period )
      .def_readonly( "switch_time", &delay_report::switch_time )
      .def_readonly( "latency", &delay_report::latency )
      .def_readonly( "throughput", &delay_report::throughput )
      .def_readonly( "timing_ok", &delay_report::timing_ok )
      .def_readonly( "violation", &delay_report::violation );

  py::class_<evaluation_report>( m, "EvaluationReport" )
      .def_readonly( "power", &evaluation_report::power )
      .def_readonly( "delay", &evaluation_report::delay )
      .def_readonly( "area", &evaluation_report::area )
      .def_readonly( "links", &evaluation_report::links )
      .def_readonly( "nodes", &evaluation_report::nodes )
      .def_readonly( "buffers", &evaluation_report::buffers )
      .def_readonly( "energy", &evaluation_report::energy )
      .def_readonly( "edp", &evaluation_report::edp )
      .def_readonly( "energy_ratio", &evaluation_report::energy_ratio )
      .def_readonly( "edp_ratio", &evaluation_report::edp_ratio );

  m.def(
      "evaluate",
      []( mapped_design const& d, device_params const& p, evaluation_params const& e, std::optional<double> baseline_energy,
          std::optional<double> baseline_delay ) {
        std::optional<baseline> reference;
        if ( baseline_energy || baseline_delay )
        {
          if ( !baseline_energy || !baseline_delay )
            throw std::invalid_argument( "baseline needs both energy and delay" );
          reference = baseline{ *baseline_energy, *baseline_delay };
        }
        return evaluate_design( d, p, e, reference );
      },
      py::arg( "design" ), py::arg( "params" ) = device_params{}, py::arg( "eval" ) = evaluation_params{},
      py::arg( "baseline_energy" ) = py::none(), py::arg( "baseline_delay" ) = py::none() );

  py::class_<sweep_row>( m, "SweepRow" )
      .def_readonly( "value", &sweep_row::value )
      .def_readonly( "stages", &sweep_row::stages )
      .def_readonly( "report", &sweep_row::report )
      .def_readonly( "allocated_cells", &sweep_row::allocated_cells );

  m.def(
      "sweep",
      []( mapped_design const& d, std::string const& parameter, std::vector<double> const& grid, device_params const& p,
          evaluation_params const& e ) { return sweep( d, sweep_parameter_from_string( parameter ), grid, p, e ); },
      py::arg( "design" ), py::arg( "parameter" ), py::arg( "grid" ), py::arg( "params" ) = device_params{},
      py::arg( "eval" ) = evaluation_params{}, "Grid values are SI: volts for dv, amperes for ith." );
  m.def(
      "sweep_csv",
      []( std::string const& parameter, std::vector<sweep_row> const& rows ) { return sweep_csv( sweep_parameter_from_string( parameter ), rows ); },
      py::arg( "parameter" ), py::arg( "rows" ) );
}
