#include <smtl/errors.hpp>
#include <smtl/mapper.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace smtl
{

namespace
{

threshold_gate const buffer_gate{ { 2 }, -1 };

/* mutable graph whose node order need not be topological */
struct work_graph
{
  std::vector<std::string> inputs;
  std::vector<tln_node> nodes;
  std::vector<uint32_t> level; /* per node */
  std::vector<uint32_t> outputs;
  std::vector<std::string> output_names;

  uint32_t num_inputs() const { return static_cast<uint32_t>( inputs.size() ); }
  uint32_t num_signals() const { return num_inputs() + static_cast<uint32_t>( nodes.size() ); }
  uint32_t level_of( uint32_t sig ) const { return sig < num_inputs() ? 0u : level[sig - num_inputs()]; }
  tln_node& node( uint32_t sig ) { return nodes[sig - num_inputs()]; }
};

work_graph to_work( staged_network const& staged )
{
  work_graph g;
  g.inputs = staged.tln.input_names();
  g.nodes = staged.tln.nodes();
  for ( uint32_t i = 0; i < staged.tln.num_nodes(); ++i )
  {
    g.level.push_back( staged.level[staged.tln.num_inputs() + i] );
  }
  g.outputs = staged.tln.outputs();
  g.output_names = staged.tln.output_names();
  return g;
}

/* nodes sorted by (level, index) form a topological order since levels grow along edges */
staged_network from_work( work_graph const& g, uint32_t k )
{
  auto const n_in = g.num_inputs();
  std::vector<uint32_t> order( g.nodes.size() );
  std::iota( order.begin(), order.end(), 0u );
  std::stable_sort( order.begin(), order.end(), [&]( auto a, auto b ) { return g.level[a] < g.level[b]; } );

  std::vector<uint32_t> remap( g.num_signals() );
  std::iota( remap.begin(), remap.begin() + n_in, 0u );
  for ( uint32_t pos = 0; pos < order.size(); ++pos )
  {
    remap[n_in + order[pos]] = n_in + pos;
  }

  staged_network s;
  s.levels_per_stage = k;
  s.tln = threshold_network( g.inputs );
  s.level.assign( n_in, 0u );
  for ( auto idx : order )
  {
    auto node = g.nodes[idx];
    for ( auto& f : node.fanins )
    {
      f = remap[f];
    }
    if ( node.role != node_role::logic )
    {
      node.origin = remap[node.origin];
    }
    s.tln.add_node( std::move( node ) );
    s.level.push_back( g.level[idx] );
  }
  for ( uint32_t o = 0; o < g.outputs.size(); ++o )
  {
    s.tln.add_output( remap[g.outputs[o]], g.output_names[o] );
  }
  return s;
}

/* consumer pins of a signal, ordered by consumer then pin */
struct pin
{
  uint32_t node; /* consumer id, or the output index for outputs */
  uint32_t index;
  bool output;
};

std::vector<pin> consumers_of( work_graph const& g, uint32_t sig )
{
  std::vector<pin> result;
  for ( uint32_t i = 0; i < g.nodes.size(); ++i )
  {
    auto const& fanins = g.nodes[i].fanins;
    for ( uint32_t p = 0; p < fanins.size(); ++p )
    {
      if ( fanins[p] == sig )
      {
        result.push_back( { g.num_inputs() + i, p, false } );
      }
    }
  }
  for ( uint32_t o = 0; o < g.outputs.size(); ++o )
  {
    if ( g.outputs[o] == sig )
    {
      result.push_back( { o, 0u, true } );
    }
  }
  return result;
}

void rewire( work_graph& g, pin const& p, uint32_t sig )
{
  if ( p.output )
  {
    g.outputs[p.node] = sig;
  }
  else
  {
    g.node( p.node ).fanins[p.index] = sig;
  }
}

} // namespace

void check_mapping_params( mapping_params const& p )
{
  auto fail = []( std::string const& m ) { throw std::invalid_argument( m ); };
  if ( p.levels_per_stage == 0u )
    fail( "levels per stage must be at least 1" );
  if ( p.rows == 0u || p.cols == 0u )
    fail( "block rows and columns must be positive" );
  if ( p.fanout_max < 2u )
    fail( "maximum fan-out must be at least 2" );
  if ( p.min_fill < 0.0 || p.min_fill > 1.0 )
    fail( "minimum fill must be within [0, 1]" );
  if ( p.w_max < 1 )
    fail( "w_max must be positive" );
}

staged_network assign_stages( threshold_network const& tln, uint32_t k )
{
  if ( k == 0u )
  {
    throw std::invalid_argument( "levels per stage must be at least 1" );
  }
  return { tln, tln.levels(), k };
}

staged_network split_fanout( staged_network const& staged, uint32_t fanout_max )
{
  if ( fanout_max < 2u )
  {
    throw std::invalid_argument( "maximum fan-out must be at least 2" );
  }
  auto g = to_work( staged );
  auto const n_in = g.num_inputs();
  auto const original = static_cast<uint32_t>( g.nodes.size() );
  for ( auto i = static_cast<int64_t>( original ) - 1; i >= 0; --i )
  {
    auto const sig = n_in + static_cast<uint32_t>( i );
    auto const pins = consumers_of( g, sig );
    if ( pins.size() <= fanout_max )
    {
      continue;
    }
    auto const instances = ( pins.size() + fanout_max - 1u ) / fanout_max;
    for ( uint32_t c = 1; c < instances; ++c )
    {
      auto copy = g.nodes[i];
      copy.role = node_role::copy;
      copy.origin = sig;
      copy.name = g.nodes[i].name.empty() ? "" : g.nodes[i].name + "_c" + std::to_string( c );
      auto const level = g.level[i];
      g.nodes.push_back( std::move( copy ) );
      g.level.push_back( level );
      auto const copy_id = g.num_signals() - 1u;
      for ( auto p = c * fanout_max; p < std::min<std::size_t>( pins.size(), ( c + 1u ) * fanout_max ); ++p )
      {
        rewire( g, pins[p], copy_id );
      }
    }
  }
  return from_work( g, staged.levels_per_stage );
}

staged_network strip_buffers( staged_network const& staged )
{
  auto g = to_work( staged );
  auto const n_in = g.num_inputs();
  auto resolve = [&]( uint32_t sig ) {
    while ( sig >= n_in && g.nodes[sig - n_in].role == node_role::buffer )
    {
      sig = g.nodes[sig - n_in].fanins.front();
    }
    return sig;
  };
  for ( auto& n : g.nodes )
  {
    for ( auto& f : n.fanins )
    {
      f = resolve( f );
    }
  }
  for ( auto& o : g.outputs )
  {
    o = resolve( o );
  }

  work_graph h;
  h.inputs = g.inputs;
  h.outputs = g.outputs;
  h.output_names = g.output_names;
  std::vector<uint32_t> remap( g.num_signals() );
  std::iota( remap.begin(), remap.begin() + n_in, 0u );
  for ( uint32_t i = 0; i < g.nodes.size(); ++i )
  {
    if ( g.nodes[i].role == node_role::buffer )
    {
      continue;
    }
    remap[n_in + i] = h.num_signals();
    h.nodes.push_back( g.nodes[i] );
    h.level.push_back( g.level[i] );
  }
  for ( auto& n : h.nodes )
  {
    for ( auto& f : n.fanins )
      f = remap[f];
    if ( n.role == node_role::copy )
      n.origin = remap[n.origin];
  }
  for ( auto& o : h.outputs )
  {
    o = remap[o];
  }
  return from_work( h, staged.levels_per_stage );
}

staged_network insert_buffers( staged_network const& staged, uint32_t fanout_max )
{
  auto const base = strip_buffers( staged );
  auto g = to_work( base );
  auto const k = base.levels_per_stage;
  auto const last_level = base.num_levels();
  auto const last_stage = base.num_stages();
  if ( last_stage == 0u )
  {
    return base;
  }
  auto stage_of = [&]( uint32_t sig ) { return base.stage_of_level( g.level_of( sig ) ); };
  /* the final stage's buffers only feed outputs, so they sit on the last occupied level */
  auto buffer_level = [&]( uint32_t t ) { return t == last_stage ? last_level : t * k; };

  auto const signals = g.num_signals();
  for ( uint32_t sig = 0; sig < signals; ++sig )
  {
    auto const a = stage_of( sig );
    auto const pins = consumers_of( g, sig );
    std::map<uint32_t, std::vector<pin>> by_stage;
    uint32_t c_max = 0;
    for ( auto const& p : pins )
    {
      auto const c = p.output ? last_stage + 1u : stage_of( p.node );
      by_stage[c].push_back( p );
      c_max = std::max( c_max, c );
    }
    if ( c_max <= a + 1u )
    {
      continue;
    }

    /* parallel buffers needed per chain stage, from the far end */
    std::map<uint32_t, uint32_t> count;
    uint32_t next = 0;
    for ( auto t = c_max - 1u; t > a; --t )
    {
      auto const load = static_cast<uint32_t>( by_stage[t + 1u].size() ) + next;
      count[t] = std::max<uint32_t>( 1u, ( load + fanout_max - 1u ) / fanout_max );
      next = count[t];
    }

    auto const name = sig < g.num_inputs() ? g.inputs[sig] : g.node( sig ).name;
    std::vector<uint32_t> feeders{ sig };
    for ( auto t = a + 1u; t < c_max; ++t )
    {
      std::vector<uint32_t> layer;
      for ( uint32_t j = 0; j < count[t]; ++j )
      {
        auto const feeder = feeders[std::min<std::size_t>( feeders.size() - 1u, j / fanout_max )];
        auto label = name.empty() ? std::string{} : name + "_b" + std::to_string( t ) + ( count[t] > 1u ? "_" + std::to_string( j ) : "" );
        g.nodes.push_back( tln_node{ buffer_gate, { feeder }, std::move( label ), node_role::buffer, sig } );
        g.level.push_back( buffer_level( t ) );
        layer.push_back( g.num_signals() - 1u );
      }
      if ( t > a + 1u )
      {
        /* feeders of stage t - 1 serve the consumers of stage t first, then the new buffers */
        auto const& direct = by_stage[t];
        for ( std::size_t p = 0; p < direct.size(); ++p )
        {
          rewire( g, direct[p], feeders[std::min<std::size_t>( feeders.size() - 1u, p / fanout_max )] );
        }
        for ( uint32_t j = 0; j < layer.size(); ++j )
        {
          auto const slot = direct.size() + j;
          g.node( layer[j] ).fanins.front() = feeders[std::min<std::size_t>( feeders.size() - 1u, slot / fanout_max )];
        }
      }
      feeders = std::move( layer );
    }
    auto const& tail = by_stage[c_max];
    for ( std::size_t p = 0; p < tail.size(); ++p )
    {
      rewire( g, tail[p], feeders[std::min<std::size_t>( feeders.size() - 1u, p / fanout_max )] );
    }
  }
  return from_work( g, k );
}

staged_network enforce_capacity( staged_network const& staged, uint32_t blocks, uint32_t cols, uint32_t rows,
                                 uint32_t fanout_max, int w_max )
{
  auto const capacity = blocks * cols;
  if ( capacity == 0u )
  {
    throw std::invalid_argument( "layer capacity must be positive" );
  }
  auto base = strip_buffers( staged );
  for ( uint32_t id = base.tln.num_inputs(); id < base.tln.num_signals(); ++id )
  {
    auto const need = node_rows( base.tln.node( id ).gate, w_max );
    if ( need > rows )
    {
      throw capacity_error( "node " + base.tln.signal_name( id ) + " needs " + std::to_string( need ) + " input rows, blocks have " +
                            std::to_string( rows ) );
    }
  }
  if ( node_rows( buffer_gate, w_max ) > rows )
  {
    throw capacity_error( "buffers need " + std::to_string( node_rows( buffer_gate, w_max ) ) + " input rows" );
  }

  auto const fanouts = [&] { return base.tln.fanouts(); };
  /* a fully sequential schedule needs no more levels than this */
  auto const level_limit = base.num_levels() + base.tln.num_nodes();
  for ( uint32_t iteration = 0; iteration < 100000u; ++iteration )
  {
    auto buffered = insert_buffers( base, fanout_max );
    auto const occ = buffered.occupancy();
    if ( buffered.num_levels() > level_limit )
    {
      throw capacity_error( "deferring nodes does not converge within " + std::to_string( level_limit ) + " levels at " +
                            std::to_string( capacity ) + " columns per layer" );
    }
    auto const over = std::find_if( occ.begin(), occ.end(), [&]( auto n ) { return n > capacity; } );
    if ( over == occ.end() )
    {
      return buffered;
    }
    auto const level = static_cast<uint32_t>( over - occ.begin() ) + 1u;

    auto const fo = fanouts();
    std::vector<std::tuple<uint32_t, uint32_t, uint32_t>> candidates;
    for ( uint32_t id = base.tln.num_inputs(); id < base.tln.num_signals(); ++id )
    {
      if ( base.level[id] != level )
        continue;
      bool const feeds_next = std::any_of( fo[id].begin(), fo[id].end(), [&]( auto c ) { return base.level[c] == level + 1u; } );
      candidates.emplace_back( feeds_next ? 1u : 0u, base.tln.node( id ).gate.fanin(), id );
    }
    std::sort( candidates.begin(), candidates.end() );

    bool moved = false;
    for ( auto const& [feeds, fanin, victim] : candidates )
    {
      auto trial = base;
      std::vector<uint32_t> stack{ victim };
      trial.level[victim] = level + 1u;
      while ( !stack.empty() )
      {
        auto const v = stack.back();
        stack.pop_back();
        for ( auto c : fo[v] )
        {
          if ( trial.level[c] <= trial.level[v] )
          {
            trial.level[c] = trial.level[v] + 1u;
            stack.push_back( c );
          }
        }
      }
      auto const trial_occ = insert_buffers( trial, fanout_max ).occupancy();
      if ( trial_occ[level - 1u] < occ[level - 1u] )
      {
        /* renumber so ids follow the new levels */
        auto g = to_work( trial );
        base = from_work( g, trial.levels_per_stage );
        moved = true;
        break;
      }
    }
    if ( !moved )
    {
      throw capacity_error( "level " + std::to_string( level ) + " needs " + std::to_string( occ[level - 1u] ) +
                            " columns but a layer holds " + std::to_string( capacity ) );
    }
  }
  throw capacity_error( "capacity enforcement did not converge" );
}

/* ---------------------------------------------------------------------- */

namespace
{

std::vector<uint32_t> layer_order( layer_layout const& layer )
{
  std::vector<uint32_t> order;
  for ( auto const& b : layer.blocks )
  {
    order.insert( order.end(), b.nodes.begin(), b.nodes.end() );
  }
  return order;
}

} // namespace

uint32_t count_direct_links( staged_network const& staged, physical_layout const& layout )
{
  return interconnect_stats( classify_links( staged, layout ) ).direct;
}

uint32_t reorder_stages( staged_network const& staged, physical_layout& layout, int w_max, uint32_t sweeps )
{
  auto const& tln = staged.tln;
  auto const fo = tln.fanouts();
  auto const num_layers = static_cast<uint32_t>( layout.layers.size() );
  auto position = [&]( uint32_t id ) {
    auto const& p = layout.placement[id];
    return static_cast<double>( p.block * layout.subarray_cols + p.column );
  };

  uint32_t done = 0;
  uint32_t idle = 0;
  for ( ; done < sweeps && idle < 2u; ++done )
  {
    bool const downward = done % 2u == 0u;
    bool changed = false;
    for ( uint32_t step = 1; step < num_layers; ++step )
    {
      auto const l = downward ? step : num_layers - 1u - step;
      auto const neighbour = downward ? l - 1u : l + 1u;
      auto order = layer_order( layout.layers[l] );
      if ( order.size() <= 1u )
        continue;

      std::vector<std::pair<double, uint32_t>> keyed;
      for ( auto id : order )
      {
        double sum = 0.0;
        uint32_t count = 0;
        auto visit = [&]( uint32_t other ) {
          if ( !tln.is_input( other ) && layout.placement[other].layer == neighbour )
          {
            sum += position( other );
            ++count;
          }
        };
        if ( downward )
          for ( auto f : tln.node( id ).fanins )
            visit( f );
        else
          for ( auto c : fo[id] )
            visit( c );
        keyed.emplace_back( count ? sum / count : position( id ), id );
      }
      std::stable_sort( keyed.begin(), keyed.end(), []( auto const& a, auto const& b ) { return a.first < b.first; } );
      std::vector<uint32_t> reordered;
      for ( auto const& [key, id] : keyed )
        reordered.push_back( id );
      if ( reordered == order )
        continue;

      auto const before = count_direct_links( staged, layout );
      auto const saved = layout.layers[l].blocks;
      layout.layers[l].blocks = partition_stage( staged, reordered, layout.subarray_rows, layout.subarray_cols, w_max );
      layout.refresh( staged, w_max );
      if ( count_direct_links( staged, layout ) < before )
      {
        layout.layers[l].blocks = saved;
        layout.refresh( staged, w_max );
      }
      else
      {
        changed = true;
      }
    }
    idle = changed ? 0u : idle + 1u;
  }
  return done;
}

uint32_t absorb_small_layers( staged_network const& staged, physical_layout& layout, double min_fill, uint32_t backward_max,
                              int w_max, std::vector<std::string>& warnings )
{
  auto const& tln = staged.tln;
  uint32_t absorbed = 0;
  uint32_t l = 1;
  while ( l < layout.layers.size() )
  {
    auto const& layer = layout.layers[l];
    auto const nodes = layer.num_nodes();
    auto const slots = static_cast<double>( layer.blocks.size() ) * layout.subarray_cols;
    if ( nodes == 0u || slots == 0.0 || static_cast<double>( nodes ) / slots >= min_fill )
    {
      ++l;
      continue;
    }

    auto const order = layer_order( layer );
    auto const levels = layer.levels;
    auto trial = layout;
    trial.layers[l].blocks.clear();
    auto& host = trial.layers[l - 1u];
    std::string problem;
    for ( auto id : order )
    {
      auto const& fanins = tln.node( id ).fanins;
      std::vector<std::pair<int, uint32_t>> ranked;
      for ( uint32_t b = 0; b < host.blocks.size(); ++b )
      {
        int in_block = 0;
        for ( auto f : fanins )
        {
          auto const& p = trial.placement[f];
          in_block += !tln.is_input( f ) && p.layer == l - 1u && p.block == b;
        }
        ranked.emplace_back( -in_block, b );
      }
      std::sort( ranked.begin(), ranked.end() );
      bool placed = false;
      for ( auto const& [score, b] : ranked )
      {
        auto& block = host.blocks[b];
        if ( block.nodes.size() >= trial.subarray_cols )
          continue;
        block.nodes.push_back( id );
        trial.placement[id] = { l - 1u, b, static_cast<uint32_t>( block.nodes.size() - 1u ) };
        trial.refresh( staged, w_max );
        if ( host.blocks[b].rows > trial.subarray_rows )
        {
          host.blocks[b].nodes.pop_back();
          trial.refresh( staged, w_max );
          continue;
        }
        placed = true;
        break;
      }
      if ( !placed )
      {
        problem = "no free column";
        break;
      }
    }
    if ( problem.empty() )
    {
      trial.layers.erase( trial.layers.begin() + l );
      trial.refresh( staged, w_max );
      auto const counts = backward_connections( staged, trial );
      for ( uint32_t b = 0; b < counts[l - 1u].size(); ++b )
      {
        if ( counts[l - 1u][b] > backward_max )
        {
          problem = "block " + std::to_string( b ) + " would need " + std::to_string( counts[l - 1u][b] ) +
                    " backward connections (limit " + std::to_string( backward_max ) + ")";
          break;
        }
      }
    }
    if ( !problem.empty() )
    {
      warnings.push_back( "layer " + std::to_string( l + 1u ) + " not absorbed: " + problem );
      ++l;
      continue;
    }
    trial.layers[l - 1u].levels.insert( trial.layers[l - 1u].levels.end(), levels.begin(), levels.end() );
    layout = std::move( trial );
    ++absorbed;
  }
  return absorbed;
}

/* ---------------------------------------------------------------------- */

namespace
{

void finish_layout( mapped_design& d )
{
  auto const& p = d.params;
  d.layout = partition_design( d.staged, p.partition_rows(), p.partition_cols(), p.w_max );
  reorder_stages( d.staged, d.layout, p.w_max, p.reorder_sweeps );
  d.warnings.clear();
  d.absorbed_layers = p.min_fill > 0.0 ? absorb_small_layers( d.staged, d.layout, p.min_fill, p.backward_max, p.w_max, d.warnings ) : 0u;
  d.links = classify_links( d.staged, d.layout );
  auto const issues = validate_design( d );
  if ( !issues.empty() )
  {
    throw smtl_error( "mapped design failed validation: " + issues.front() );
  }
}

} // namespace

mapped_design map_design( threshold_network const& logic, mapping_params const& params, std::optional<boolean_network> source )
{
  check_mapping_params( params );
  mapped_design d;
  d.params = params;
  d.source = std::move( source );
  d.logic = logic;

  auto split = split_fanout( assign_stages( logic, params.levels_per_stage ), params.fanout_max );
  auto blocks = params.blocks;
  if ( blocks == 0u )
  {
    auto const occ = insert_buffers( split, params.fanout_max ).occupancy();
    auto const widest = occ.empty() ? 0u : *std::max_element( occ.begin(), occ.end() );
    blocks = std::max( 1u, ( widest + params.cols - 1u ) / params.cols );
  }
  d.blocks_per_layer = blocks;
  d.staged = enforce_capacity( split, blocks, params.cols, params.rows, params.fanout_max, params.w_max );
  finish_layout( d );
  return d;
}

mapped_design repartition( mapped_design const& design, uint32_t subarray_rows, uint32_t subarray_cols )
{
  auto d = design;
  d.params.subarray_rows = subarray_rows;
  d.params.subarray_cols = subarray_cols;
  finish_layout( d );
  return d;
}

std::vector<std::string> validate_design( mapped_design const& d )
{
  std::vector<std::string> issues;
  auto const& s = d.staged;
  auto const& tln = s.tln;
  auto const& p = d.params;

  uint32_t fanin_limit = std::max( 1u, d.logic.max_fanin() );
  for ( auto const& msg : check_tln( tln, fanin_limit, p.w_max ) )
  {
    issues.push_back( msg );
  }
  if ( s.level.size() != tln.num_signals() )
  {
    issues.push_back( "level table does not cover every signal" );
    return issues;
  }

  /* placement: every node exactly once */
  std::vector<uint32_t> seen( tln.num_signals(), 0u );
  for ( uint32_t l = 0; l < d.layout.layers.size(); ++l )
  {
    auto const& layer = d.layout.layers[l];
    for ( uint32_t b = 0; b < layer.blocks.size(); ++b )
    {
      auto const& block = layer.blocks[b];
      if ( block.nodes.size() > d.layout.subarray_cols )
        issues.push_back( "layer " + std::to_string( l ) + " block " + std::to_string( b ) + " exceeds its columns" );
      if ( block.rows > d.layout.subarray_rows )
        issues.push_back( "layer " + std::to_string( l ) + " block " + std::to_string( b ) + " exceeds its rows" );
      for ( auto id : block.nodes )
      {
        if ( id < tln.num_inputs() || id >= tln.num_signals() )
        {
          issues.push_back( "placement references an unknown node" );
          continue;
        }
        ++seen[id];
        if ( std::find( layer.levels.begin(), layer.levels.end(), s.level[id] ) == layer.levels.end() )
          issues.push_back( "node " + tln.signal_name( id ) + " placed in a layer that does not evaluate its level" );
      }
    }
  }
  for ( uint32_t id = tln.num_inputs(); id < tln.num_signals(); ++id )
  {
    if ( seen[id] != 1u )
      issues.push_back( "node " + tln.signal_name( id ) + " placed " + std::to_string( seen[id] ) + " times" );
  }

  /* staging */
  auto const last = s.num_stages();
  for ( uint32_t id = tln.num_inputs(); id < tln.num_signals(); ++id )
  {
    for ( auto f : tln.node( id ).fanins )
    {
      if ( s.level[f] >= s.level[id] )
        issues.push_back( "edge " + tln.signal_name( f ) + " -> " + tln.signal_name( id ) + " does not advance a level" );
      else if ( s.stage( id ) - s.stage( f ) > 1u )
        issues.push_back( "edge " + tln.signal_name( f ) + " -> " + tln.signal_name( id ) + " spans more than one stage boundary" );
    }
  }
  if ( last > 0u )
  {
    for ( auto o : tln.outputs() )
    {
      if ( s.stage( o ) != last )
        issues.push_back( "output " + tln.signal_name( o ) + " does not leave from the final stage" );
    }
  }

  /* capacity, rows and fan-out */
  auto const capacity = d.blocks_per_layer * p.cols;
  auto const occ = s.occupancy();
  for ( uint32_t l = 0; l < occ.size(); ++l )
  {
    if ( occ[l] > capacity )
      issues.push_back( "level " + std::to_string( l + 1u ) + " holds " + std::to_string( occ[l] ) + " nodes, capacity " +
                        std::to_string( capacity ) );
  }
  auto const fo = tln.fanout_counts();
  for ( uint32_t id = tln.num_inputs(); id < tln.num_signals(); ++id )
  {
    if ( node_rows( tln.node( id ).gate, p.w_max ) > p.rows )
      issues.push_back( "node " + tln.signal_name( id ) + " needs more rows than a block has" );
    if ( fo[id] > p.fanout_max )
      issues.push_back( "node " + tln.signal_name( id ) + " has fan-out " + std::to_string( fo[id] ) );
  }

  /* links */
  auto const counts = backward_connections( s, d.layout );
  for ( uint32_t l = 0; l < counts.size(); ++l )
  {
    for ( uint32_t b = 0; b < counts[l].size(); ++b )
    {
      if ( counts[l][b] > p.backward_max )
        issues.push_back( "layer " + std::to_string( l ) + " block " + std::to_string( b ) + " has " +
                          std::to_string( counts[l][b] ) + " backward connections" );
    }
  }
  uint32_t pins = 0;
  for ( auto const& n : tln.nodes() )
  {
    pins += n.gate.fanin();
  }
  if ( d.links.size() != pins || d.interconnect().total() != pins )
  {
    issues.push_back( "link classification does not cover every edge" );
  }
  return issues;
}

std::string mapping_summary( mapped_design const& d )
{
  auto const ic = d.interconnect();
  std::ostringstream out;
  out << "levels per stage : " << d.params.levels_per_stage << "\n"
      << "levels           : " << d.staged.num_levels() << "\n"
      << "pipeline stages  : " << d.staged.num_stages() << "\n"
      << "physical layers  : " << d.layout.layers.size() << " (" << d.absorbed_layers << " absorbed)\n"
      << "blocks per layer : " << d.blocks_per_layer << " x " << d.params.rows << "x" << d.params.cols << "\n"
      << "sub-arrays       : " << d.layout.num_blocks() << " x " << d.layout.subarray_rows << "x" << d.layout.subarray_cols << "\n"
      << "nodes            : " << d.staged.tln.num_nodes() << " (" << d.logic.num_nodes() << " logic, " << d.num_buffers()
      << " buffers, " << d.num_copies() << " copies)\n"
      << "links            : " << ic.direct << " direct, " << ic.routed << " routed, " << ic.backward << " backward, " << ic.input
      << " input\n"
      << "route length     : " << ic.route_length << "\n";
  for ( auto const& w : d.warnings )
  {
    out << "warning: " << w << "\n";
  }
  return out.str();
}

} // namespace smtl
