/*!
  \file devices.hpp
  \brief Behavioral models of the memristor crossbar cell and the spin threshold device

  All quantities are SI: amperes, volts, ohms, siemens, seconds, watts, hertz.
*/

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace smtl
{

/*! \brief Carried for reference; no model consumes these values. */
struct device_metadata
{
  std::string free_domain_size = "3x20x40 nm^3";
  double ms_emu_per_cm3 = 400.0;
  double ku2v_kbt = 20.0;
  double beta = 0.1;
  double alpha = 0.01;
  double mtj_oxide_thickness = 1.8e-9;
  double mtj_area = 20e-9 * 20e-9;
  std::string cmos_node = "45nm";
};

struct device_params
{
  double i_threshold = 2e-6;      /* STD switching threshold */
  double t_switch_ref = 1e-9;     /* STD switching time at i_threshold */
  double v_supply = 0.6;          /* STD read supply */
  double delta_v = 0.05;          /* crossbar terminal voltage */
  double r_min = 50e3;            /* memristor range */
  double r_max = 1e6;
  double r_off = 10e6;            /* unprogrammed cell */
  double r_mtj_parallel = 300e3;
  double tmr = 4.0;               /* (R_AP - R_P) / R_P */
  double p_detect = 0.15e-6;      /* sensing unit power at 500 MHz */
  double f_clk = 500e6;
  double i_dtcs = 5e-6;           /* row drive current at one level per stage and a 2 uA threshold */
  double write_threshold = 5e-6;  /* memristor write threshold current */
  double k_write = 9.5e16;        /* ohm per ampere-second: full range in 1 us at 10 uA */
  device_metadata metadata;
};

/*! \brief Throws `device_error` unless all values are positive and ranges ordered. */
void validate_device_params( device_params const& params );

struct conductance_pair
{
  double g_plus = 0.0;
  double g_minus = 0.0;

  double net() const noexcept { return g_plus - g_minus; }
};

/*! \brief Unit conductance `(1 / r_min) / w_max`. */
double unit_conductance( int w_max, device_params const& params );

/*! \brief `|w| * g_unit` on the side matching the sign of `w`, the other side off.

  Throws `device_error` when `|w| > w_max`.
*/
conductance_pair weight_to_conductance( int w, int w_max, device_params const& params );

struct switch_event
{
  bool switched = false;
  double time = 0.0; /* seconds; meaningful when switched */
  int direction = 0; /* sign of the current */
};

/*! \brief Linear model `t = t_ref * I_th / |I|` at or above threshold, no switch below. */
switch_event std_switch_time( double current, device_params const& params );

struct read_result
{
  double r_parallel = 0.0;
  double r_antiparallel = 0.0;
  double r_reference = 0.0;
  double i_parallel = 0.0;
  double i_antiparallel = 0.0;
  double v_swing = 0.0;
};

/*! \brief MTJ voltage divider against a reference of `sqrt(R_P * R_AP)`.

  Throws `device_error` when a read current reaches the switching threshold.
*/
read_result std_read( device_params const& params );

struct write_config
{
  double i_prog = 10e-6;
  uint32_t comparator_bits = 6; /* 0 means an ideal comparator reference */
  double offset_sigma = 0.0;    /* volts */
  double dt = 1e-9;
  double t_max = 2e-6;
  double r_start = 0.0;         /* 0 starts from r_max */
};

struct write_result
{
  double final_r = 0.0;
  double error = 0.0; /* |final - target| / target */
  double elapsed = 0.0;
  bool timed_out = false;
};

/*! \brief Programs one memristor with a ramp and a comparator-controlled cut-off.

  The resistance moves toward the target at `k_write * i_prog` per second.
  Each step compares `i_prog * R` with the DAC level for the target plus a
  Gaussian comparator offset drawn from `seed`, stopping on the first
  crossing or at `t_max`. Throws `device_error` when the target is outside the
  memristor range or the current is below the write threshold.
*/
write_result write_with_feedback( double target_r, write_config const& config, device_params const& params, uint64_t seed );

struct write_sweep_row
{
  uint32_t bits = 0;
  double i_prog = 0.0;
  double t_max = 0.0;
  double mean_error = 0.0;
  double p95_error = 0.0;
  uint32_t timeouts = 0;
};

/*! \brief Monte-Carlo over `trials` uniformly drawn targets for every grid combination.

  Trial `i` uses the same target and comparator seed in every configuration.
*/
std::vector<write_sweep_row> write_sweep( std::vector<uint32_t> const& bits, std::vector<double> const& currents,
                                          std::vector<double> const& t_max, uint32_t trials, uint64_t seed,
                                          write_config const& base, device_params const& params );

std::string write_sweep_csv( std::vector<write_sweep_row> const& rows );

} // namespace smtl
