/*!
  \file partitioner.hpp
  \brief Sub-array partitioning, interconnect accounting and area

  Each physical layer is a row of crossbar sub-arrays ("blocks") of R input
  rows by C threshold-gate columns. Block `b` of layer `l` faces block `b` of
  layer `l + 1`; an edge between facing blocks is a direct link, any other
  edge between layers goes through the interconnect network.
*/

#pragma once

#include <smtl/staged.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace smtl
{

struct block_layout
{
  std::vector<uint32_t> nodes; /* signal ids in column order */
  uint32_t rows = 0;           /* distinct fanin signals plus shared bias rows */
};

struct layer_layout
{
  std::vector<uint32_t> levels; /* logical levels evaluated in this layer */
  std::vector<block_layout> blocks;

  uint32_t num_nodes() const;
};

struct node_placement
{
  uint32_t layer = 0;
  uint32_t block = 0;
  uint32_t column = 0;
};

struct physical_layout
{
  uint32_t subarray_rows = 64;
  uint32_t subarray_cols = 32;
  std::vector<layer_layout> layers;
  std::vector<node_placement> placement; /* per signal id; entries of primary inputs are unused */

  uint32_t num_blocks() const;
  uint64_t allocated_cells() const;

  /*! \brief Recomputes placements and block row counts from the block contents. */
  void refresh( staged_network const& staged, int w_max );
};

/*! \brief Bins `order` into consecutive sub-arrays.

  A new block starts when the current one has `cols` nodes or the next node
  would push its row count beyond `rows`. Throws `capacity_error` when a
  single node needs more than `rows` rows.
*/
std::vector<block_layout> partition_stage( staged_network const& staged, std::vector<uint32_t> const& order, uint32_t rows,
                                           uint32_t cols, int w_max );

/*! \brief One physical layer per level, nodes in ascending id order. */
physical_layout partition_design( staged_network const& staged, uint32_t rows, uint32_t cols, int w_max );

/*! \brief One block per layer, sized to the largest layer (a monolithic crossbar per level). */
physical_layout monolithic_layout( staged_network const& staged, int w_max );

enum class link_kind : uint8_t
{
  input,   /* primary input to its first consumer */
  direct,  /* facing blocks in consecutive layers */
  routed,  /* through the interconnect network */
  backward /* output column fed back into a block of the same layer */
};

std::string to_string( link_kind kind );

struct design_link
{
  uint32_t source = 0;
  uint32_t target = 0;
  link_kind kind = link_kind::direct;
  uint32_t length = 0; /* block pitches */
};

/*! \brief Classifies every fanin edge of the staged network.

  Routed length is `|block difference| + max(layer difference - 1, 0)`.
*/
std::vector<design_link> classify_links( staged_network const& staged, physical_layout const& layout );

struct interconnect_summary
{
  uint32_t input = 0;
  uint32_t direct = 0;
  uint32_t routed = 0;
  uint32_t backward = 0;
  uint64_t route_length = 0;

  uint32_t total() const noexcept { return input + direct + routed + backward; }
};

interconnect_summary interconnect_stats( std::vector<design_link> const& links );

/*! \brief Distinct same-layer sources feeding each block, indexed `[layer][block]`. */
std::vector<std::vector<uint32_t>> backward_connections( staged_network const& staged, physical_layout const& layout );

struct area_params
{
  double cell_area = 4.0 * 45e-9 * 45e-9; /* m^2, 4F^2 at F = 45 nm */
  double periphery = 0.20;                /* fraction of block array area */
  double wire_rows_per_unit = 1.0;        /* cell rows of interconnect per block pitch */
};

struct area_report
{
  double array = 0.0;
  double periphery = 0.0;
  double interconnect = 0.0;
  double total = 0.0;
};

area_report area_estimate( physical_layout const& layout, interconnect_summary const& links, area_params const& params = {} );

} // namespace smtl
