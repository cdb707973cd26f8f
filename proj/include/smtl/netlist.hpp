/*!
  \file netlist.hpp
  \brief Gate-level Boolean networks read from ISCAS `.bench` files

  The Boolean network is the functional reference for every equivalence
  check in the flow.
*/

#pragma once

#include <smtl/patterns.hpp>

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace smtl
{

enum class gate_kind : uint8_t
{
  and_gate,
  or_gate,
  nand_gate,
  nor_gate,
  not_gate,
  buff_gate,
  xor_gate
};

std::string_view to_string( gate_kind kind );

/*! \brief Parses an upper- or lower-case `.bench` gate keyword (`BUF` is accepted for `BUFF`). */
std::optional<gate_kind> gate_kind_from_string( std::string_view name );

/*! \brief Boolean value of a primitive gate for the given input bits. */
bool evaluate_gate( gate_kind kind, std::vector<bool> const& inputs );

/*! \brief A gate as written in the source: names only. */
struct gate_declaration
{
  std::string output;
  gate_kind kind;
  std::vector<std::string> inputs;
  std::size_t line = 0; /* 0 when not read from a file */
};

struct network_gate
{
  gate_kind kind;
  std::vector<uint32_t> fanins; /* net ids */
};

/*! \brief Immutable, validated DAG of primitive gates.

  Net ids: primary inputs are `0 .. num_inputs()-1` in declaration order,
  gate `i` drives net `num_inputs() + i`. Gates are stored in topological
  order, which equals file order whenever the file is already topologically
  ordered.
*/
class boolean_network
{
public:
  /*! \brief Validates and builds a network.

    Throws `netlist_error` on duplicate definitions, undefined references,
    bad arity, or cycles.
  */
  static boolean_network build( std::vector<std::string> inputs, std::vector<std::string> outputs,
                                std::vector<gate_declaration> gates );

  uint32_t num_inputs() const noexcept { return static_cast<uint32_t>( input_names_.size() ); }
  uint32_t num_outputs() const noexcept { return static_cast<uint32_t>( outputs_.size() ); }
  uint32_t num_gates() const noexcept { return static_cast<uint32_t>( gates_.size() ); }
  uint32_t num_nets() const noexcept { return num_inputs() + num_gates(); }

  std::vector<std::string> const& input_names() const noexcept { return input_names_; }
  std::vector<std::string> const& output_names() const noexcept { return output_names_; }
  std::vector<uint32_t> const& outputs() const noexcept { return outputs_; }
  std::vector<network_gate> const& gates() const noexcept { return gates_; }

  bool is_input( uint32_t net ) const noexcept { return net < num_inputs(); }
  network_gate const& driver( uint32_t net ) const { return gates_.at( net - num_inputs() ); }

  std::string const& net_name( uint32_t net ) const { return net_names_.at( net ); }
  std::optional<uint32_t> find_net( std::string_view name ) const;

private:
  std::vector<std::string> input_names_;
  std::vector<std::string> output_names_;
  std::vector<uint32_t> outputs_;
  std::vector<network_gate> gates_;
  std::vector<std::string> net_names_;
  std::unordered_map<std::string, uint32_t> net_ids_;
};

/*! \brief Parses ISCAS85 `.bench` text.

  Accepted statements are `INPUT(x)`, `OUTPUT(y)`, `n = GATE(a, b, ...)` and
  `#` comments. Gates may reference nets defined later in the file. Flip-flops
  are rejected.

  Throws `parse_error` (with line and column) on malformed syntax and
  `netlist_error` on structural problems.
*/
boolean_network parse_bench( std::istream& in );
boolean_network parse_bench( std::string_view text );
boolean_network read_bench_file( std::string const& path );

std::string write_bench( boolean_network const& network );

/*! \brief Evaluates all outputs for one assignment of the primary inputs. */
bit_vector evaluate_network( boolean_network const& network, bit_vector const& assignment );

/*! \brief Bit-parallel evaluation; returns one signal per primary output. */
pattern_set simulate_network( boolean_network const& network, pattern_set const& inputs );

/*! \brief Logic level per net id: inputs 0, gates 1 + max fanin level. */
std::vector<uint32_t> topological_levels( boolean_network const& network );

uint32_t network_depth( boolean_network const& network );

} // namespace smtl
