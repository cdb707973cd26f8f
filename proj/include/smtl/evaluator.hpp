/*!
  \file evaluator.hpp
  \brief Device-level simulation, variation tolerance, and power/delay/area reports
*/

#pragma once

#include <smtl/devices.hpp>
#include <smtl/mapper.hpp>
#include <smtl/patterns.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smtl
{

/*! \brief Crossbar column of one threshold gate: one pair per fanin, then the bias rows. */
struct programmed_gate
{
  std::vector<conductance_pair> inputs;
  std::vector<conductance_pair> bias; /* always-on rows */
};

/*! \brief Splits `|b|` into `ceil(|b| / w_max)` near-equal row weights carrying the sign of `b`. */
std::vector<int> bias_row_weights( int bias, int w_max );

programmed_gate program_gate( threshold_gate const& gate, int w_max, device_params const& params );

/*! \brief Programs every node of the mapped network, in node order. */
std::vector<programmed_gate> program_design( mapped_design const& design, device_params const& params );

/*! \brief `delta_v * (sum_i x_i (g+ - g-) + sum_bias (g+ - g-))`; bit `i` of `row` is `x_i`. */
double crossbar_net_current( programmed_gate const& column, uint64_t row, double delta_v );

struct evaluation_params
{
  double activity = 0.5;
  double c_wire = 0.2e-15;        /* farad per block pitch */
  double dv_penalty = 0.0;        /* volts per block pitch of mean routed length */
  double i_threshold_eff = 0.0;   /* indeterminate band half-width of the comparison */
  double i_drive = 0.0;           /* STD drive current for timing; 0 uses the scaled DTCS current */
  area_params area;
};

struct simulation_result
{
  pattern_set outputs;
  uint64_t vectors = 0;
  uint64_t errors = 0;        /* vectors with a wrong or indeterminate output */
  uint64_t indeterminate = 0; /* vectors where some gate current fell inside the band */
};

/*! \brief Simulates the mapped network through perturbed crossbar currents.

  Every programmed conductance is replaced by `max(0, g (1 + sigma z))` with
  `z` standard normal, drawn once from `seed`. Reference outputs come from the
  embedded Boolean network when present, otherwise from the logic network.
*/
simulation_result simulate_mapped( mapped_design const& design, device_params const& params, pattern_set const& vectors,
                                   double sigma, uint64_t seed, double i_threshold_eff = 0.0 );

struct tolerance_point
{
  double sigma = 0.0;
  uint64_t errors = 0;
  uint64_t vectors = 0;
};

struct tolerance_result
{
  double sigma_star = 0.0; /* largest grid value with zero errors there and at every smaller value */
  std::vector<tolerance_point> curve;
};

/*! \brief Sweeps `sigma_grid` (ascending) with `seeds` device draws of `vectors` random vectors each.

  Probe `s` uses pattern seed `seed + s` and device seed `seed + 1000003 * (s + 1)`,
  so every grid point sees the same vectors and device draws.
*/
tolerance_result variation_tolerance( mapped_design const& design, device_params const& params, std::vector<double> const& sigma_grid,
                                      uint64_t vectors, uint32_t seeds, uint64_t seed, double i_threshold_eff = 0.0 );

struct power_report
{
  double p_mca = 0.0;
  double p_detect = 0.0;
  double p_interconnect = 0.0;
  double p_total = 0.0;
  double delta_v_eff = 0.0;
  double i_dtcs = 0.0;
  uint64_t active_rows = 0;
};

/*! \brief Row drive current for `k` levels per stage: `i_dtcs * k * (i_threshold / 2 uA)`. */
double dtcs_current( device_params const& params, uint32_t k );

power_report estimate_power( mapped_design const& design, device_params const& params, evaluation_params const& eval );

struct delay_report
{
  uint32_t depth = 0; /* pipeline stages */
  double clock_period = 0.0;
  double switch_time = 0.0; /* per level at the drive current */
  double latency = 0.0;
  double throughput = 0.0;
  bool timing_ok = true;
  std::string violation;
};

/*! \brief Timing holds when `k * t_switch < 1 / f_clk` (strict) at the drive current. */
delay_report estimate_delay( mapped_design const& design, device_params const& params, evaluation_params const& eval );

struct baseline
{
  double energy = 0.0; /* joules per evaluation */
  double delay = 0.0;  /* seconds */
};

struct evaluation_report
{
  power_report power;
  delay_report delay;
  area_report area;
  interconnect_summary links;
  uint32_t nodes = 0;
  uint32_t buffers = 0;
  double energy = 0.0; /* p_total * latency */
  double edp = 0.0;
  std::optional<baseline> reference;
  double energy_ratio = 0.0; /* baseline / ours */
  double edp_ratio = 0.0;
};

evaluation_report evaluate_design( mapped_design const& design, device_params const& params, evaluation_params const& eval,
                                   std::optional<baseline> reference = std::nullopt );

enum class sweep_parameter
{
  delta_v,
  i_threshold,
  levels_per_stage,
  subarray_dim
};

sweep_parameter sweep_parameter_from_string( std::string const& name );
std::string to_string( sweep_parameter p );

struct sweep_row
{
  double value = 0.0;
  uint32_t stages = 0;
  evaluation_report report;
  uint64_t allocated_cells = 0;
};

/*! \brief One full evaluation per grid value.

  `delta_v` and `i_threshold` values are in volts and amperes. The
  `levels_per_stage` sweep re-maps the embedded logic network; `subarray_dim`
  re-partitions with that many columns and the design's row count.
*/
std::vector<sweep_row> sweep( mapped_design const& design, sweep_parameter parameter, std::vector<double> const& grid,
                              device_params const& params, evaluation_params const& eval );

std::string sweep_csv( sweep_parameter parameter, std::vector<sweep_row> const& rows );

} // namespace smtl
