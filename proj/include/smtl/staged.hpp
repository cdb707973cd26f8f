/*!
  \file staged.hpp
  \brief Threshold network with MCA level assignment

  Level `l >= 1` is one crossbar evaluation; `k` consecutive levels form a
  pipeline stage, so stage = ceil(level / k). Primary inputs sit at level 0,
  stage 0.
*/

#pragma once

#include <smtl/threshold.hpp>

#include <cstdint>
#include <vector>

namespace smtl
{

struct staged_network
{
  threshold_network tln;
  std::vector<uint32_t> level; /* per signal id */
  uint32_t levels_per_stage = 1;

  uint32_t stage_of_level( uint32_t l ) const noexcept { return ( l + levels_per_stage - 1u ) / levels_per_stage; }
  uint32_t stage( uint32_t signal ) const { return stage_of_level( level.at( signal ) ); }

  uint32_t num_levels() const;
  uint32_t num_stages() const { return stage_of_level( num_levels() ); }

  /*! \brief Node count per level, index `l - 1`. */
  std::vector<uint32_t> occupancy() const;

  /*! \brief Node ids per level, index `l - 1`, ascending id. */
  std::vector<std::vector<uint32_t>> nodes_by_level() const;
};

/*! \brief Rows a node occupies in its crossbar: one per fanin plus `ceil(|b| / w_max)` bias rows. */
uint32_t bias_rows( threshold_gate const& gate, int w_max );
uint32_t node_rows( threshold_gate const& gate, int w_max );

} // namespace smtl
