/*!
  \file synthesis.hpp
  \brief Boolean network to fan-in restricted threshold network

  Each primitive gate becomes one threshold gate (or a balanced tree when its
  arity exceeds the fan-in limit, two gates per XOR2). A greedy pass then
  merges single-fan-out nodes into their consumer whenever the merged function
  is still a threshold function within the limits.
*/

#pragma once

#include <smtl/netlist.hpp>
#include <smtl/threshold.hpp>

#include <cstdint>
#include <optional>

namespace smtl
{

struct synthesis_params
{
  uint32_t fanin_limit = default_fanin_limit;
  int w_max = default_w_max;
  bool collapse = true;
};

struct synthesis_stats
{
  uint32_t nodes_before_collapse = 0;
  uint32_t merges = 0;
};

/*! \brief Threshold gate for a primitive of the given arity.

  Throws `std::invalid_argument` for XOR or when `arity` exceeds `fanin_limit`.
*/
threshold_gate gate_to_tlg( gate_kind kind, uint32_t arity, uint32_t fanin_limit = default_fanin_limit );

/*! \brief Standalone threshold network computing the parity of `arity` inputs. */
threshold_network decompose_xor( uint32_t arity, uint32_t fanin_limit = default_fanin_limit );

/*! \brief Throws `std::invalid_argument` when the fan-in limit is outside 2..6 or `w_max` < 2. */
threshold_network synthesize_tln( boolean_network const& network, synthesis_params const& params = {},
                                  synthesis_stats* stats = nullptr );

/*! \brief Greedy single-fan-out collapse on an existing network; returns the number of merges. */
uint32_t collapse_tln( threshold_network& tln, uint32_t fanin_limit, int w_max );

struct equivalence_mode
{
  bool exhaustive = true;
  uint64_t count = 10000;
  uint64_t seed = 1;

  /*! \brief Exhaustive up to 20 inputs, otherwise `count` seeded random vectors. */
  static equivalence_mode automatic( uint32_t num_inputs, uint64_t count = 10000, uint64_t seed = 1 );
};

struct counterexample
{
  bit_vector inputs;
  bit_vector expected;
  bit_vector actual;
};

struct equivalence_result
{
  bool equivalent = true;
  bool exhaustive = true;
  uint64_t vectors = 0;
  uint64_t seed = 0;
  std::optional<counterexample> failure; /* first failing vector in enumeration order */
};

/*! \brief Compares the threshold network against the Boolean reference.

  Throws `std::invalid_argument` on input or output count mismatch.
*/
equivalence_result verify_equivalence( boolean_network const& network, threshold_network const& tln,
                                       equivalence_mode const& mode );

/*! \brief Shared helper: compares two bit-sliced output sets, returning the first differing vector. */
std::optional<uint64_t> first_mismatch( pattern_set const& expected, pattern_set const& actual );

} // namespace smtl
