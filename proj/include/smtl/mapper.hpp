/*!
  \file mapper.hpp
  \brief Mapping a threshold network onto pipelined crossbar layers

  Flow: ASAP staging, fan-out splitting, buffer insertion with per-layer
  capacity enforcement, sub-array partitioning, barycenter reordering, and
  absorption of nearly empty layers through backward connections.
*/

#pragma once

#include <smtl/netlist.hpp>
#include <smtl/partitioner.hpp>
#include <smtl/staged.hpp>
#include <smtl/threshold.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace smtl
{

struct mapping_params
{
  uint32_t levels_per_stage = 2; /* k */
  uint32_t rows = 64;            /* M, input rows per block */
  uint32_t cols = 32;            /* N, threshold gates per block */
  uint32_t blocks = 0;           /* blocks per layer; 0 sizes to the largest layer */
  uint32_t subarray_rows = 0;    /* 0 means rows */
  uint32_t subarray_cols = 0;    /* 0 means cols */
  uint32_t fanout_max = 8;
  double min_fill = 0.10;
  uint32_t backward_max = 4;
  uint32_t reorder_sweeps = 10;
  int w_max = default_w_max;

  uint32_t partition_rows() const noexcept { return subarray_rows ? subarray_rows : rows; }
  uint32_t partition_cols() const noexcept { return subarray_cols ? subarray_cols : cols; }
};

/*! \brief Throws `std::invalid_argument` on out-of-range parameters. */
void check_mapping_params( mapping_params const& params );

/*! \brief ASAP levels; throws `std::invalid_argument` when `k` is 0. */
staged_network assign_stages( threshold_network const& tln, uint32_t k );

/*! \brief Replaces every node driving more than `fanout_max` pins and outputs by copies.

  Consumers are dealt to the copies in ascending consumer order, `fanout_max`
  per copy, outputs last. Primary inputs are left alone.
*/
staged_network split_fanout( staged_network const& staged, uint32_t fanout_max );

/*! \brief Removes buffer nodes, reconnecting their consumers to the carried signal. */
staged_network strip_buffers( staged_network const& staged );

/*! \brief Inserts path-balancing buffers.

  Existing buffers are first removed. Each source gets one chain with a buffer
  at the last level of every stage strictly between its own stage and its
  furthest consumer; primary outputs count as consumers one stage past the
  last, so all outputs leave from the final stage. A chain stage serving more
  than `fanout_max` loads uses parallel buffers.
*/
staged_network insert_buffers( staged_network const& staged, uint32_t fanout_max );

/*! \brief Defers nodes until every level holds at most `blocks * cols` nodes.

  Works on the unbuffered network and re-derives buffers after every move.
  Victims come from the lowest overflowing level, ordered by (feeds the next
  level, fan-in, id); the first whose move lowers that level's occupancy is
  moved one level up and its consumers are pushed as needed. Throws
  `capacity_error` when no move helps or a node needs more than `rows` rows.
  Returns the buffered network.
*/
staged_network enforce_capacity( staged_network const& staged, uint32_t blocks, uint32_t cols, uint32_t rows,
                                 uint32_t fanout_max, int w_max );

/*! \brief Barycenter reordering of the nodes inside each layer.

  Alternating downward and upward sweeps; a sweep's result is kept only when
  the number of direct links does not drop. Stops at a fixed point or after
  `sweeps` sweeps. Returns the number of sweeps run.
*/
uint32_t reorder_stages( staged_network const& staged, physical_layout& layout, int w_max, uint32_t sweeps );

uint32_t count_direct_links( staged_network const& staged, physical_layout const& layout );

/*! \brief Moves the nodes of sparsely filled layers into free columns of the previous layer.

  A layer is absorbed when `nodes / (blocks * cols) < min_fill`; each node
  goes to the block holding most of its fanins from that layer. When a block
  would need more than `backward_max` backward connections, or no block has
  room, the layer is left in place and a warning is appended. Returns the
  number of absorbed layers.
*/
uint32_t absorb_small_layers( staged_network const& staged, physical_layout& layout, double min_fill, uint32_t backward_max,
                              int w_max, std::vector<std::string>& warnings );

struct mapped_design
{
  mapping_params params;
  std::optional<boolean_network> source;
  threshold_network logic;
  staged_network staged;
  physical_layout layout;
  std::vector<design_link> links;
  std::vector<std::string> warnings;
  uint32_t blocks_per_layer = 0;
  uint32_t absorbed_layers = 0;

  uint32_t num_buffers() const { return staged.tln.count_role( node_role::buffer ); }
  uint32_t num_copies() const { return staged.tln.count_role( node_role::copy ); }
  interconnect_summary interconnect() const { return interconnect_stats( links ); }
};

/*! \brief Full mapping pipeline, ending with `validate_design`.

  Throws `capacity_error` when the design does not fit and `smtl_error` if the
  final validation fails.
*/
mapped_design map_design( threshold_network const& logic, mapping_params const& params,
                          std::optional<boolean_network> source = std::nullopt );

/*! \brief Re-partitions an existing design with new sub-array dimensions. */
mapped_design repartition( mapped_design const& design, uint32_t subarray_rows, uint32_t subarray_cols );

/*! \brief Structural invariants of a mapped design; returns the violations found. */
std::vector<std::string> validate_design( mapped_design const& design );

/*! \brief Human-readable summary: stages, buffers, link counts. */
std::string mapping_summary( mapped_design const& design );

} // namespace smtl
