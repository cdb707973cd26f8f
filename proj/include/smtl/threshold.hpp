/*!
  \file threshold.hpp
  \brief Threshold logic gates and networks

  A threshold gate outputs 1 iff `sum_i w_i x_i + b >= 0`. Every gate that the
  toolchain produces additionally keeps `|sum_i w_i x_i + b| >= 1` on every input
  row, so the comparison never sits on the zero-current boundary of the
  sensing device.
*/

#pragma once

#include <smtl/patterns.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smtl
{

inline constexpr uint32_t default_fanin_limit = 4u;
inline constexpr int default_w_max = 6;
inline constexpr uint32_t max_truth_table_vars = 6u;

struct threshold_gate
{
  std::vector<int> weights;
  int bias = 0;

  uint32_t fanin() const noexcept { return static_cast<uint32_t>( weights.size() ); }
  bool operator==( threshold_gate const& ) const = default;
};

/*! \brief Complete truth table of up to six variables.

  Row `r` assigns `x_i = (r >> i) & 1`; bit `r` of `bits` is the function value.
*/
struct truth_table
{
  uint32_t num_vars = 0;
  uint64_t bits = 0;

  static truth_table from_bits( std::vector<bool> const& rows );
  uint64_t num_rows() const noexcept { return uint64_t{ 1 } << num_vars; }
  bool get( uint64_t row ) const noexcept { return ( bits >> row ) & 1u; }
  bool depends_on( uint32_t var ) const noexcept;
  bool operator==( truth_table const& ) const = default;
};

/*! \brief `sum_i w_i x_i + b` for the row whose bit `i` is `x_i`. */
int weighted_sum( threshold_gate const& gate, uint64_t row ) noexcept;

bool eval_tlg( threshold_gate const& gate, bit_vector const& x );
bool eval_tlg( threshold_gate const& gate, uint64_t row ) noexcept;

truth_table gate_truth_table( threshold_gate const& gate );

/*! \brief Minimum of `|sum + b|` over all input rows. */
int gate_margin( threshold_gate const& gate );

/*! \brief Bias search bound used by the solver: `n * w_max + 1`. */
int bias_bound( uint32_t num_vars, int w_max ) noexcept;

/*! \brief Finds integer weights realizing a truth table, if any.

  Exhaustive search over `|w_i| <= w_max`, `|b| <= n * w_max + 1`, requiring
  margin >= 1 on every row. Among all solutions the lexicographically smallest
  `(sum |w_i|, weight vector, |b|, b)` is returned, so variables the function
  does not depend on receive weight 0. Returns `std::nullopt` when the table is
  not a threshold function within the bounds.

  Throws `std::invalid_argument` when the table has more than `fanin_limit`
  variables.
*/
std::optional<threshold_gate> solve_weights( truth_table const& table, int w_max = default_w_max,
                                             uint32_t fanin_limit = default_fanin_limit );

/* ---------------------------------------------------------------------- */

enum class node_role : uint8_t
{
  logic,  /* produced by synthesis */
  buffer, /* path-balancing buffer inserted by the mapper */
  copy    /* duplicate created when splitting a large fan-out */
};

std::string to_string( node_role role );
node_role node_role_from_string( std::string const& name );

struct tln_node
{
  threshold_gate gate;
  std::vector<uint32_t> fanins;
  std::string name;
  node_role role = node_role::logic;
  uint32_t origin = 0; /* buffer: signal carried; copy: node duplicated; logic: own id */
};

/*! \brief DAG of threshold gates.

  Ids `0 .. num_inputs()-1` are primary inputs; node `i` has id
  `num_inputs() + i`. Nodes only reference smaller ids, so the node list is a
  topological order.
*/
class threshold_network
{
public:
  threshold_network() = default;
  explicit threshold_network( std::vector<std::string> input_names );

  uint32_t num_inputs() const noexcept { return static_cast<uint32_t>( input_names_.size() ); }
  uint32_t num_nodes() const noexcept { return static_cast<uint32_t>( nodes_.size() ); }
  uint32_t num_signals() const noexcept { return num_inputs() + num_nodes(); }
  uint32_t num_outputs() const noexcept { return static_cast<uint32_t>( outputs_.size() ); }

  bool is_input( uint32_t id ) const noexcept { return id < num_inputs(); }
  tln_node const& node( uint32_t id ) const { return nodes_.at( id - num_inputs() ); }
  tln_node& node( uint32_t id ) { return nodes_.at( id - num_inputs() ); }
  std::vector<tln_node> const& nodes() const noexcept { return nodes_; }

  std::vector<std::string> const& input_names() const noexcept { return input_names_; }
  std::vector<uint32_t> const& outputs() const noexcept { return outputs_; }
  std::vector<std::string> const& output_names() const noexcept { return output_names_; }

  std::string signal_name( uint32_t id ) const;

  /*! \brief Appends a node; all fanins must already exist. Returns its id. */
  uint32_t add_node( tln_node node );
  void add_output( uint32_t id, std::string name );
  void set_output( uint32_t index, uint32_t id ) { outputs_.at( index ) = id; }

  /*! \brief Number of fanin pins plus output references, per signal id. */
  std::vector<uint32_t> fanout_counts() const;

  /*! \brief Consumer node ids per signal id (one entry per pin). */
  std::vector<std::vector<uint32_t>> fanouts() const;

  /*! \brief ASAP level per signal id; inputs are level 0. */
  std::vector<uint32_t> levels() const;
  uint32_t depth() const;

  uint32_t max_fanin() const;
  uint32_t count_role( node_role role ) const;

private:
  std::vector<std::string> input_names_;
  std::vector<tln_node> nodes_;
  std::vector<uint32_t> outputs_;
  std::vector<std::string> output_names_;
};

bit_vector evaluate_tln( threshold_network const& network, bit_vector const& assignment );

/*! \brief Bit-parallel evaluation; returns one signal per primary output. */
pattern_set simulate_tln( threshold_network const& network, pattern_set const& inputs );

/*! \brief Bit-parallel evaluation of one gate whose fanin values are given as words.

  `gate_table` is the gate's truth table; used by both the ideal and the
  device-level simulators.
*/
uint64_t evaluate_table_word( truth_table const& gate_table, std::vector<uint64_t const*> const& fanins, uint64_t word );

/*! \brief Structural checks: DAG order, fan-in bound, weight range, non-zero weights, margin >= 1.

  Returns a list of violations (empty when valid).
*/
std::vector<std::string> check_tln( threshold_network const& network, uint32_t fanin_limit, int w_max );

} // namespace smtl
