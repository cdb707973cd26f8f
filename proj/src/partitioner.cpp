#include <smtl/errors.hpp>
#include <smtl/partitioner.hpp>

#include <algorithm>
#include <cstdlib>
#include <set>

namespace smtl
{

uint32_t staged_network::num_levels() const
{
  uint32_t m = 0;
  for ( auto l : level )
  {
    m = std::max( m, l );
  }
  return m;
}

std::vector<uint32_t> staged_network::occupancy() const
{
  std::vector<uint32_t> occ( num_levels(), 0u );
  for ( uint32_t id = tln.num_inputs(); id < tln.num_signals(); ++id )
  {
    ++occ[level[id] - 1u];
  }
  return occ;
}

std::vector<std::vector<uint32_t>> staged_network::nodes_by_level() const
{
  std::vector<std::vector<uint32_t>> result( num_levels() );
  for ( uint32_t id = tln.num_inputs(); id < tln.num_signals(); ++id )
  {
    result[level[id] - 1u].push_back( id );
  }
  return result;
}

uint32_t bias_rows( threshold_gate const& gate, int w_max )
{
  return static_cast<uint32_t>( ( std::abs( gate.bias ) + w_max - 1 ) / w_max );
}

uint32_t node_rows( threshold_gate const& gate, int w_max )
{
  return gate.fanin() + bias_rows( gate, w_max );
}

uint32_t layer_layout::num_nodes() const
{
  uint32_t n = 0;
  for ( auto const& b : blocks )
  {
    n += static_cast<uint32_t>( b.nodes.size() );
  }
  return n;
}

uint32_t physical_layout::num_blocks() const
{
  uint32_t n = 0;
  for ( auto const& l : layers )
  {
    n += static_cast<uint32_t>( l.blocks.size() );
  }
  return n;
}

uint64_t physical_layout::allocated_cells() const
{
  return uint64_t{ num_blocks() } * subarray_rows * subarray_cols;
}

namespace
{

uint32_t block_rows( staged_network const& staged, std::vector<uint32_t> const& nodes, int w_max )
{
  std::set<uint32_t> signals;
  uint32_t bias = 0;
  for ( auto id : nodes )
  {
    auto const& n = staged.tln.node( id );
    signals.insert( n.fanins.begin(), n.fanins.end() );
    bias = std::max( bias, bias_rows( n.gate, w_max ) );
  }
  return static_cast<uint32_t>( signals.size() ) + bias;
}

} // namespace

void physical_layout::refresh( staged_network const& staged, int w_max )
{
  placement.assign( staged.tln.num_signals(), node_placement{} );
  for ( uint32_t l = 0; l < layers.size(); ++l )
  {
    for ( uint32_t b = 0; b < layers[l].blocks.size(); ++b )
    {
      auto& block = layers[l].blocks[b];
      block.rows = block_rows( staged, block.nodes, w_max );
      for ( uint32_t c = 0; c < block.nodes.size(); ++c )
      {
        placement[block.nodes[c]] = { l, b, c };
      }
    }
  }
}

std::vector<block_layout> partition_stage( staged_network const& staged, std::vector<uint32_t> const& order, uint32_t rows,
                                           uint32_t cols, int w_max )
{
  if ( rows == 0u || cols == 0u )
  {
    throw std::invalid_argument( "sub-array dimensions must be positive" );
  }
  std::vector<block_layout> blocks;
  std::set<uint32_t> signals;
  uint32_t bias = 0;
  for ( auto id : order )
  {
    auto const& n = staged.tln.node( id );
    auto const own = node_rows( n.gate, w_max );
    if ( own > rows )
    {
      throw capacity_error( "node " + staged.tln.signal_name( id ) + " needs " + std::to_string( own ) +
                            " rows, sub-array has " + std::to_string( rows ) );
    }
    bool fits = !blocks.empty() && blocks.back().nodes.size() < cols;
    if ( fits )
    {
      auto merged = signals;
      merged.insert( n.fanins.begin(), n.fanins.end() );
      fits = merged.size() + std::max( bias, bias_rows( n.gate, w_max ) ) <= rows;
    }
    if ( !fits )
    {
      blocks.emplace_back();
      signals.clear();
      bias = 0;
    }
    signals.insert( n.fanins.begin(), n.fanins.end() );
    bias = std::max( bias, bias_rows( n.gate, w_max ) );
    blocks.back().nodes.push_back( id );
    blocks.back().rows = static_cast<uint32_t>( signals.size() ) + bias;
  }
  return blocks;
}

physical_layout partition_design( staged_network const& staged, uint32_t rows, uint32_t cols, int w_max )
{
  physical_layout layout;
  layout.subarray_rows = rows;
  layout.subarray_cols = cols;
  auto const by_level = staged.nodes_by_level();
  for ( uint32_t l = 0; l < by_level.size(); ++l )
  {
    layer_layout layer;
    layer.levels = { l + 1u };
    layer.blocks = partition_stage( staged, by_level[l], rows, cols, w_max );
    layout.layers.push_back( std::move( layer ) );
  }
  layout.refresh( staged, w_max );
  return layout;
}

physical_layout monolithic_layout( staged_network const& staged, int w_max )
{
  physical_layout layout;
  auto const by_level = staged.nodes_by_level();
  uint32_t rows = 0, cols = 0;
  for ( uint32_t l = 0; l < by_level.size(); ++l )
  {
    layer_layout layer;
    layer.levels = { l + 1u };
    if ( !by_level[l].empty() )
    {
      layer.blocks.push_back( { by_level[l], block_rows( staged, by_level[l], w_max ) } );
      rows = std::max( rows, layer.blocks.back().rows );
      cols = std::max( cols, static_cast<uint32_t>( by_level[l].size() ) );
    }
    layout.layers.push_back( std::move( layer ) );
  }
  layout.subarray_rows = rows;
  layout.subarray_cols = cols;
  layout.refresh( staged, w_max );
  return layout;
}

std::string to_string( link_kind kind )
{
  switch ( kind )
  {
  case link_kind::input:
    return "input";
  case link_kind::direct:
    return "direct";
  case link_kind::routed:
    return "routed";
  case link_kind::backward:
    return "backward";
  }
  return "routed";
}

std::vector<design_link> classify_links( staged_network const& staged, physical_layout const& layout )
{
  std::vector<design_link> links;
  auto const& tln = staged.tln;
  for ( uint32_t id = tln.num_inputs(); id < tln.num_signals(); ++id )
  {
    auto const& to = layout.placement.at( id );
    for ( auto f : tln.node( id ).fanins )
    {
      design_link link{ f, id, link_kind::input, 0u };
      if ( !tln.is_input( f ) )
      {
        auto const& from = layout.placement.at( f );
        auto const dl = static_cast<int64_t>( to.layer ) - static_cast<int64_t>( from.layer );
        auto const db = static_cast<uint32_t>( std::abs( static_cast<int64_t>( to.block ) - static_cast<int64_t>( from.block ) ) );
        if ( dl <= 0 )
        {
          link.kind = link_kind::backward;
          link.length = db;
        }
        else if ( dl == 1 && db == 0u )
        {
          link.kind = link_kind::direct;
        }
        else
        {
          link.kind = link_kind::routed;
          link.length = db + static_cast<uint32_t>( dl - 1 );
        }
      }
      links.push_back( link );
    }
  }
  return links;
}

interconnect_summary interconnect_stats( std::vector<design_link> const& links )
{
  interconnect_summary s;
  for ( auto const& l : links )
  {
    switch ( l.kind )
    {
    case link_kind::input:
      ++s.input;
      break;
    case link_kind::direct:
      ++s.direct;
      break;
    case link_kind::routed:
      ++s.routed;
      break;
    case link_kind::backward:
      ++s.backward;
      break;
    }
    s.route_length += l.length;
  }
  return s;
}

std::vector<std::vector<uint32_t>> backward_connections( staged_network const& staged, physical_layout const& layout )
{
  std::vector<std::vector<std::set<uint32_t>>> sources( layout.layers.size() );
  for ( uint32_t l = 0; l < layout.layers.size(); ++l )
  {
    sources[l].resize( layout.layers[l].blocks.size() );
  }
  auto const& tln = staged.tln;
  for ( uint32_t id = tln.num_inputs(); id < tln.num_signals(); ++id )
  {
    auto const& to = layout.placement.at( id );
    for ( auto f : tln.node( id ).fanins )
    {
      if ( !tln.is_input( f ) && layout.placement.at( f ).layer == to.layer )
      {
        sources[to.layer][to.block].insert( f );
      }
    }
  }
  std::vector<std::vector<uint32_t>> counts( sources.size() );
  for ( uint32_t l = 0; l < sources.size(); ++l )
  {
    for ( auto const& s : sources[l] )
    {
      counts[l].push_back( static_cast<uint32_t>( s.size() ) );
    }
  }
  return counts;
}

area_report area_estimate( physical_layout const& layout, interconnect_summary const& links, area_params const& params )
{
  area_report a;
  a.array = static_cast<double>( layout.allocated_cells() ) * params.cell_area;
  a.periphery = a.array * params.periphery;
  a.interconnect = static_cast<double>( links.route_length ) * params.wire_rows_per_unit * layout.subarray_cols * params.cell_area;
  a.total = a.array + a.periphery + a.interconnect;
  return a;
}

} // namespace smtl
