#include <smtl/threshold.hpp>

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace smtl
{

truth_table truth_table::from_bits( std::vector<bool> const& rows )
{
  truth_table table;
  while ( ( uint64_t{ 1 } << table.num_vars ) < rows.size() )
  {
    ++table.num_vars;
  }
  if ( ( uint64_t{ 1 } << table.num_vars ) != rows.size() || table.num_vars > max_truth_table_vars )
  {
    throw std::invalid_argument( "truth table length must be a power of two of at most 64 rows" );
  }
  for ( std::size_t r = 0; r < rows.size(); ++r )
  {
    if ( rows[r] )
    {
      table.bits |= uint64_t{ 1 } << r;
    }
  }
  return table;
}

bool truth_table::depends_on( uint32_t var ) const noexcept
{
  for ( uint64_t r = 0; r < num_rows(); ++r )
  {
    if ( !( ( r >> var ) & 1u ) && get( r ) != get( r | ( uint64_t{ 1 } << var ) ) )
    {
      return true;
    }
  }
  return false;
}

int weighted_sum( threshold_gate const& gate, uint64_t row ) noexcept
{
  int sum = gate.bias;
  for ( std::size_t i = 0; i < gate.weights.size(); ++i )
  {
    if ( ( row >> i ) & 1u )
    {
      sum += gate.weights[i];
    }
  }
  return sum;
}

bool eval_tlg( threshold_gate const& gate, uint64_t row ) noexcept
{
  return weighted_sum( gate, row ) >= 0;
}

bool eval_tlg( threshold_gate const& gate, bit_vector const& x )
{
  if ( x.size() != gate.weights.size() )
  {
    throw std::invalid_argument( "input vector has " + std::to_string( x.size() ) + " bits, gate has fan-in " +
                                 std::to_string( gate.weights.size() ) );
  }
  int sum = gate.bias;
  for ( std::size_t i = 0; i < x.size(); ++i )
  {
    sum += x[i] ? gate.weights[i] : 0;
  }
  return sum >= 0;
}

truth_table gate_truth_table( threshold_gate const& gate )
{
  if ( gate.fanin() > max_truth_table_vars )
  {
    throw std::invalid_argument( "gate fan-in exceeds truth table capacity" );
  }
  truth_table table{ gate.fanin(), 0u };
  for ( uint64_t r = 0; r < table.num_rows(); ++r )
  {
    if ( eval_tlg( gate, r ) )
    {
      table.bits |= uint64_t{ 1 } << r;
    }
  }
  return table;
}

int gate_margin( threshold_gate const& gate )
{
  if ( gate.fanin() > 20u )
  {
    throw std::invalid_argument( "gate fan-in too large to enumerate" );
  }
  int margin = std::numeric_limits<int>::max();
  for ( uint64_t r = 0; r < ( uint64_t{ 1 } << gate.fanin() ); ++r )
  {
    margin = std::min( margin, std::abs( weighted_sum( gate, r ) ) );
  }
  return margin;
}

int bias_bound( uint32_t num_vars, int w_max ) noexcept
{
  return static_cast<int>( num_vars ) * w_max + 1;
}

std::optional<threshold_gate> solve_weights( truth_table const& table, int w_max, uint32_t fanin_limit )
{
  auto const n = table.num_vars;
  if ( n > fanin_limit || n > max_truth_table_vars )
  {
    throw std::invalid_argument( "truth table has " + std::to_string( n ) + " variables, limit is " +
                                 std::to_string( std::min( fanin_limit, max_truth_table_vars ) ) );
  }
  if ( w_max < 1 )
  {
    throw std::invalid_argument( "w_max must be positive" );
  }

  /* threshold functions are unate; the polarity of each variable fixes the sign of its weight */
  std::vector<int> lo( n ), hi( n );
  for ( uint32_t i = 0; i < n; ++i )
  {
    bool rises = false, falls = false;
    for ( uint64_t r = 0; r < table.num_rows(); ++r )
    {
      if ( ( r >> i ) & 1u )
      {
        continue;
      }
      auto const f0 = table.get( r );
      auto const f1 = table.get( r | ( uint64_t{ 1 } << i ) );
      rises |= !f0 && f1;
      falls |= f0 && !f1;
    }
    if ( rises && falls )
    {
      return std::nullopt;
    }
    lo[i] = rises ? 1 : ( falls ? -w_max : 0 );
    hi[i] = rises ? w_max : ( falls ? -1 : 0 );
  }

  auto const bound = bias_bound( n, w_max );
  std::optional<threshold_gate> best;
  int best_abs = std::numeric_limits<int>::max();

  std::vector<int> w( lo );
  while ( true )
  {
    int abs_sum = 0;
    for ( auto v : w )
    {
      abs_sum += std::abs( v );
    }
    if ( abs_sum <= best_abs )
    {
      /* feasible bias interval: f=1 rows need s+b >= 1, f=0 rows need s+b <= -1 */
      int b_lo = -bound, b_hi = bound;
      for ( uint64_t r = 0; r < table.num_rows() && b_lo <= b_hi; ++r )
      {
        int s = 0;
        for ( uint32_t i = 0; i < n; ++i )
        {
          s += ( ( r >> i ) & 1u ) ? w[i] : 0;
        }
        if ( table.get( r ) )
        {
          b_lo = std::max( b_lo, 1 - s );
        }
        else
        {
          b_hi = std::min( b_hi, -1 - s );
        }
      }
      if ( b_lo <= b_hi )
      {
        int const b = std::clamp( 0, b_lo, b_hi );
        if ( !best || abs_sum < best_abs || ( abs_sum == best_abs && w < best->weights ) )
        {
          best = threshold_gate{ w, b };
          best_abs = abs_sum;
        }
      }
    }

    /* odometer over the per-variable ranges */
    uint32_t i = 0;
    for ( ; i < n; ++i )
    {
      if ( w[i] < hi[i] )
      {
        ++w[i];
        break;
      }
      w[i] = lo[i];
    }
    if ( i == n )
    {
      break;
    }
  }
  return best;
}

/* ---------------------------------------------------------------------- */

std::string to_string( node_role role )
{
  switch ( role )
  {
  case node_role::logic:
    return "logic";
  case node_role::buffer:
    return "buffer";
  case node_role::copy:
    return "copy";
  }
  return "logic";
}

node_role node_role_from_string( std::string const& name )
{
  if ( name == "logic" )
    return node_role::logic;
  if ( name == "buffer" )
    return node_role::buffer;
  if ( name == "copy" )
    return node_role::copy;
  throw std::invalid_argument( "unknown node role '" + name + "'" );
}

threshold_network::threshold_network( std::vector<std::string> input_names ) : input_names_( std::move( input_names ) ) {}

std::string threshold_network::signal_name( uint32_t id ) const
{
  if ( is_input( id ) )
  {
    return input_names_.at( id );
  }
  auto const& n = node( id );
  return n.name.empty() ? "t" + std::to_string( id ) : n.name;
}

uint32_t threshold_network::add_node( tln_node node )
{
  auto const id = num_signals();
  if ( node.fanins.size() != node.gate.weights.size() )
  {
    throw std::invalid_argument( "node fanin count does not match weight count" );
  }
  for ( auto f : node.fanins )
  {
    if ( f >= id )
    {
      throw std::invalid_argument( "node references a signal that does not exist yet" );
    }
  }
  if ( node.role == node_role::logic )
  {
    node.origin = id;
  }
  nodes_.push_back( std::move( node ) );
  return id;
}

void threshold_network::add_output( uint32_t id, std::string name )
{
  if ( id >= num_signals() )
  {
    throw std::invalid_argument( "output references an unknown signal" );
  }
  outputs_.push_back( id );
  output_names_.push_back( std::move( name ) );
}

std::vector<uint32_t> threshold_network::fanout_counts() const
{
  std::vector<uint32_t> counts( num_signals(), 0u );
  for ( auto const& n : nodes_ )
  {
    for ( auto f : n.fanins )
    {
      ++counts[f];
    }
  }
  for ( auto o : outputs_ )
  {
    ++counts[o];
  }
  return counts;
}

std::vector<std::vector<uint32_t>> threshold_network::fanouts() const
{
  std::vector<std::vector<uint32_t>> result( num_signals() );
  for ( uint32_t i = 0; i < num_nodes(); ++i )
  {
    for ( auto f : nodes_[i].fanins )
    {
      result[f].push_back( num_inputs() + i );
    }
  }
  return result;
}

std::vector<uint32_t> threshold_network::levels() const
{
  std::vector<uint32_t> level( num_signals(), 0u );
  for ( uint32_t i = 0; i < num_nodes(); ++i )
  {
    uint32_t max_in = 0;
    for ( auto f : nodes_[i].fanins )
    {
      max_in = std::max( max_in, level[f] );
    }
    level[num_inputs() + i] = max_in + 1u;
  }
  return level;
}

uint32_t threshold_network::depth() const
{
  auto const l = levels();
  return l.empty() ? 0u : *std::max_element( l.begin(), l.end() );
}

uint32_t threshold_network::max_fanin() const
{
  uint32_t m = 0;
  for ( auto const& n : nodes_ )
  {
    m = std::max( m, static_cast<uint32_t>( n.fanins.size() ) );
  }
  return m;
}

uint32_t threshold_network::count_role( node_role role ) const
{
  return static_cast<uint32_t>( std::count_if( nodes_.begin(), nodes_.end(), [role]( auto const& n ) { return n.role == role; } ) );
}

bit_vector evaluate_tln( threshold_network const& network, bit_vector const& assignment )
{
  if ( assignment.size() != network.num_inputs() )
  {
    throw std::invalid_argument( "assignment has " + std::to_string( assignment.size() ) + " bits, network has " +
                                 std::to_string( network.num_inputs() ) + " inputs" );
  }
  std::vector<bool> values( assignment.begin(), assignment.end() );
  values.resize( network.num_signals() );
  for ( uint32_t i = 0; i < network.num_nodes(); ++i )
  {
    auto const& n = network.nodes()[i];
    int sum = n.gate.bias;
    for ( std::size_t j = 0; j < n.fanins.size(); ++j )
    {
      sum += values[n.fanins[j]] ? n.gate.weights[j] : 0;
    }
    values[network.num_inputs() + i] = sum >= 0;
  }
  bit_vector out;
  for ( auto o : network.outputs() )
  {
    out.push_back( values[o] );
  }
  return out;
}

uint64_t evaluate_table_word( truth_table const& gate_table, std::vector<uint64_t const*> const& fanins, uint64_t word )
{
  /* sum of minterms over the smaller onset/offset */
  auto const rows = gate_table.num_rows();
  auto const ones = static_cast<uint64_t>( __builtin_popcountll( gate_table.bits & ( rows == 64u ? ~uint64_t{ 0 } : ( ( uint64_t{ 1 } << rows ) - 1u ) ) ) );
  bool const invert = ones * 2u > rows;
  uint64_t acc = 0;
  for ( uint64_t r = 0; r < rows; ++r )
  {
    if ( gate_table.get( r ) == invert )
    {
      continue;
    }
    uint64_t term = ~uint64_t{ 0 };
    for ( uint32_t i = 0; i < gate_table.num_vars; ++i )
    {
      auto const v = fanins[i][word];
      term &= ( ( r >> i ) & 1u ) ? v : ~v;
    }
    acc |= term;
  }
  return invert ? ~acc : acc;
}

pattern_set simulate_tln( threshold_network const& network, pattern_set const& inputs )
{
  if ( inputs.num_signals() != network.num_inputs() )
  {
    throw std::invalid_argument( "pattern set width does not match network inputs" );
  }
  auto const words = inputs.num_words();
  std::vector<uint64_t> values( static_cast<std::size_t>( network.num_signals() ) * words );
  for ( uint32_t i = 0; i < network.num_inputs(); ++i )
  {
    auto const src = inputs.signal( i );
    std::copy( src.begin(), src.end(), values.begin() + static_cast<std::ptrdiff_t>( i * words ) );
  }
  std::vector<uint64_t const*> fanins;
  for ( uint32_t i = 0; i < network.num_nodes(); ++i )
  {
    auto const& n = network.nodes()[i];
    auto const table = gate_truth_table( n.gate );
    fanins.clear();
    for ( auto f : n.fanins )
    {
      fanins.push_back( values.data() + static_cast<std::size_t>( f ) * words );
    }
    auto* out = values.data() + static_cast<std::size_t>( network.num_inputs() + i ) * words;
    for ( uint64_t w = 0; w < words; ++w )
    {
      out[w] = evaluate_table_word( table, fanins, w ) & inputs.lane_mask( w );
    }
  }
  pattern_set result( network.num_outputs(), inputs.num_vectors() );
  for ( uint32_t o = 0; o < network.num_outputs(); ++o )
  {
    auto const* src = values.data() + static_cast<std::size_t>( network.outputs()[o] ) * words;
    auto dst = result.signal( o );
    std::copy( src, src + words, dst.begin() );
  }
  return result;
}

std::vector<std::string> check_tln( threshold_network const& network, uint32_t fanin_limit, int w_max )
{
  std::vector<std::string> issues;
  for ( uint32_t i = 0; i < network.num_nodes(); ++i )
  {
    auto const id = network.num_inputs() + i;
    auto const& n = network.nodes()[i];
    auto const label = "node " + network.signal_name( id );
    if ( n.fanins.empty() || n.fanins.size() > fanin_limit )
    {
      issues.push_back( label + ": fan-in " + std::to_string( n.fanins.size() ) + " outside [1, " + std::to_string( fanin_limit ) + "]" );
    }
    if ( n.fanins.size() != n.gate.weights.size() )
    {
      issues.push_back( label + ": weight count does not match fan-in" );
      continue;
    }
    for ( auto f : n.fanins )
    {
      if ( f >= id )
      {
        issues.push_back( label + ": fanin is not topologically earlier" );
      }
    }
    for ( auto w : n.gate.weights )
    {
      if ( w == 0 || std::abs( w ) > w_max )
      {
        issues.push_back( label + ": weight " + std::to_string( w ) + " outside 1.." + std::to_string( w_max ) );
      }
    }
    if ( n.fanins.size() <= 20u && gate_margin( n.gate ) < 1 )
    {
      issues.push_back( label + ": margin below 1" );
    }
  }
  for ( auto o : network.outputs() )
  {
    if ( o >= network.num_signals() )
    {
      issues.push_back( "output references an unknown signal" );
    }
  }
  return issues;
}

} // namespace smtl
