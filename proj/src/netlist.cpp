#include <smtl/netlist.hpp>

#include <smtl/errors.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <queue>
#include <sstream>

namespace smtl
{

std::string_view to_string( gate_kind kind )
{
  switch ( kind )
  {
  case gate_kind::and_gate:
    return "AND";
  case gate_kind::or_gate:
    return "OR";
  case gate_kind::nand_gate:
    return "NAND";
  case gate_kind::nor_gate:
    return "NOR";
  case gate_kind::not_gate:
    return "NOT";
  case gate_kind::buff_gate:
    return "BUFF";
  case gate_kind::xor_gate:
    return "XOR";
  }
  return "?";
}

std::optional<gate_kind> gate_kind_from_string( std::string_view name )
{
  std::string upper( name );
  std::transform( upper.begin(), upper.end(), upper.begin(), []( unsigned char c ) { return std::toupper( c ); } );
  if ( upper == "AND" )
    return gate_kind::and_gate;
  if ( upper == "OR" )
    return gate_kind::or_gate;
  if ( upper == "NAND" )
    return gate_kind::nand_gate;
  if ( upper == "NOR" )
    return gate_kind::nor_gate;
  if ( upper == "NOT" || upper == "INV" )
    return gate_kind::not_gate;
  if ( upper == "BUFF" || upper == "BUF" )
    return gate_kind::buff_gate;
  if ( upper == "XOR" )
    return gate_kind::xor_gate;
  return std::nullopt;
}

bool evaluate_gate( gate_kind kind, std::vector<bool> const& inputs )
{
  auto const ones = std::count( inputs.begin(), inputs.end(), true );
  auto const n = static_cast<long>( inputs.size() );
  switch ( kind )
  {
  case gate_kind::and_gate:
    return ones == n;
  case gate_kind::or_gate:
    return ones > 0;
  case gate_kind::nand_gate:
    return ones != n;
  case gate_kind::nor_gate:
    return ones == 0;
  case gate_kind::not_gate:
    return !inputs.at( 0 );
  case gate_kind::buff_gate:
    return inputs.at( 0 );
  case gate_kind::xor_gate:
    return ( ones & 1 ) != 0;
  }
  return false;
}

/* ---------------------------------------------------------------------- */

std::optional<uint32_t> boolean_network::find_net( std::string_view name ) const
{
  if ( auto it = net_ids_.find( std::string( name ) ); it != net_ids_.end() )
  {
    return it->second;
  }
  return std::nullopt;
}

namespace
{

std::string where( gate_declaration const& gate )
{
  return gate.line ? " (line " + std::to_string( gate.line ) + ")" : std::string{};
}

} // namespace

boolean_network boolean_network::build( std::vector<std::string> inputs, std::vector<std::string> outputs,
                                        std::vector<gate_declaration> gates )
{
  std::unordered_map<std::string, std::size_t> gate_index;
  std::unordered_map<std::string, uint32_t> input_index;

  for ( auto const& name : inputs )
  {
    if ( !input_index.emplace( name, static_cast<uint32_t>( input_index.size() ) ).second )
    {
      throw netlist_error( "duplicate definition of input '" + name + "'" );
    }
  }
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    auto const& gate = gates[i];
    if ( input_index.count( gate.output ) || !gate_index.emplace( gate.output, i ).second )
    {
      throw netlist_error( "duplicate definition of net '" + gate.output + "'" + where( gate ) );
    }
    if ( gate.inputs.empty() )
    {
      throw netlist_error( "gate '" + gate.output + "' has no inputs" + where( gate ) );
    }
    if ( ( gate.kind == gate_kind::not_gate || gate.kind == gate_kind::buff_gate ) && gate.inputs.size() != 1u )
    {
      throw netlist_error( "gate '" + gate.output + "' of kind " + std::string( to_string( gate.kind ) ) +
                           " must have exactly one input" + where( gate ) );
    }
  }
  for ( auto const& gate : gates )
  {
    for ( auto const& in : gate.inputs )
    {
      if ( !input_index.count( in ) && !gate_index.count( in ) )
      {
        throw netlist_error( "undefined net '" + in + "' referenced by '" + gate.output + "'" + where( gate ) );
      }
    }
  }

  /* stable topological order (Kahn, smallest declaration index first) */
  std::vector<uint32_t> pending( gates.size(), 0u );
  std::vector<std::vector<std::size_t>> consumers( gates.size() );
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    for ( auto const& in : gates[i].inputs )
    {
      if ( auto it = gate_index.find( in ); it != gate_index.end() )
      {
        ++pending[i];
        consumers[it->second].push_back( i );
      }
    }
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
  for ( std::size_t i = 0; i < gates.size(); ++i )
  {
    if ( pending[i] == 0u )
    {
      ready.push( i );
    }
  }
  std::vector<std::size_t> order;
  order.reserve( gates.size() );
  while ( !ready.empty() )
  {
    auto const i = ready.top();
    ready.pop();
    order.push_back( i );
    for ( auto c : consumers[i] )
    {
      if ( --pending[c] == 0u )
      {
        ready.push( c );
      }
    }
  }
  if ( order.size() != gates.size() )
  {
    auto const it = std::find_if( pending.begin(), pending.end(), []( auto p ) { return p != 0u; } );
    auto const& culprit = gates[static_cast<std::size_t>( it - pending.begin() )];
    throw netlist_error( "cycle detected through net '" + culprit.output + "'" + where( culprit ) );
  }

  boolean_network network;
  network.input_names_ = std::move( inputs );
  network.net_names_ = network.input_names_;
  for ( auto const& name : network.input_names_ )
  {
    network.net_ids_.emplace( name, static_cast<uint32_t>( network.net_ids_.size() ) );
  }
  for ( auto i : order )
  {
    network.net_ids_.emplace( gates[i].output, static_cast<uint32_t>( network.net_names_.size() ) );
    network.net_names_.push_back( gates[i].output );
  }
  network.gates_.reserve( order.size() );
  for ( auto i : order )
  {
    network_gate g{ gates[i].kind, {} };
    for ( auto const& in : gates[i].inputs )
    {
      g.fanins.push_back( network.net_ids_.at( in ) );
    }
    network.gates_.push_back( std::move( g ) );
  }

  std::unordered_map<std::string, bool> seen_output;
  for ( auto& name : outputs )
  {
    auto const id = network.find_net( name );
    if ( !id )
    {
      throw netlist_error( "output '" + name + "' does not name a defined net" );
    }
    if ( !seen_output.emplace( name, true ).second )
    {
      throw netlist_error( "output '" + name + "' declared twice" );
    }
    network.outputs_.push_back( *id );
  }
  network.output_names_ = std::move( outputs );
  return network;
}

/* ---------------------------------------------------------------------- */

namespace
{

class bench_lexer
{
public:
  bench_lexer( std::string_view line, std::size_t line_no ) : line_( line ), line_no_( line_no ) {}

  void skip_space()
  {
    while ( pos_ < line_.size() && std::isspace( static_cast<unsigned char>( line_[pos_] ) ) )
    {
      ++pos_;
    }
  }

  bool at_end()
  {
    skip_space();
    return pos_ >= line_.size();
  }

  std::size_t column() const { return pos_ + 1u; }

  bool accept( char c )
  {
    skip_space();
    if ( pos_ < line_.size() && line_[pos_] == c )
    {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect( char c )
  {
    if ( !accept( c ) )
    {
      fail( std::string( "expected '" ) + c + "'" );
    }
  }

  std::string name()
  {
    skip_space();
    auto const start = pos_;
    while ( pos_ < line_.size() && !std::isspace( static_cast<unsigned char>( line_[pos_] ) ) &&
            std::string_view( "(),=" ).find( line_[pos_] ) == std::string_view::npos )
    {
      ++pos_;
    }
    if ( start == pos_ )
    {
      fail( "expected a net name" );
    }
    return std::string( line_.substr( start, pos_ - start ) );
  }

  [[noreturn]] void fail( std::string const& message ) const
  {
    throw parse_error( message, line_no_, std::min( pos_, line_.size() ) + 1u );
  }

private:
  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
};

std::string upper( std::string s )
{
  std::transform( s.begin(), s.end(), s.begin(), []( unsigned char c ) { return std::toupper( c ); } );
  return s;
}

} // namespace

boolean_network parse_bench( std::istream& in )
{
  std::vector<std::string> inputs, outputs;
  std::vector<gate_declaration> gates;

  std::string raw;
  std::size_t line_no = 0;
  while ( std::getline( in, raw ) )
  {
    ++line_no;
    std::string_view line( raw );
    if ( auto hash = line.find( '#' ); hash != std::string_view::npos )
    {
      line = line.substr( 0, hash );
    }
    bench_lexer lex( line, line_no );
    if ( lex.at_end() )
    {
      continue;
    }

    auto const first_column = lex.column();
    auto const first = lex.name();
    auto const keyword = upper( first );
    if ( lex.accept( '(' ) )
    {
      if ( keyword != "INPUT" && keyword != "OUTPUT" )
      {
        throw parse_error( "unknown declaration '" + first + "'", line_no, first_column );
      }
      auto net = lex.name();
      lex.expect( ')' );
      if ( !lex.at_end() )
      {
        lex.fail( "unexpected text after declaration" );
      }
      ( keyword == "INPUT" ? inputs : outputs ).push_back( std::move( net ) );
      continue;
    }

    lex.expect( '=' );
    lex.skip_space();
    auto const kind_column = lex.column();
    auto const kind_name = lex.name();
    auto const kind = gate_kind_from_string( kind_name );
    if ( !kind )
    {
      auto const kw = upper( kind_name );
      if ( kw == "DFF" || kw == "DFFR" || kw == "LATCH" )
      {
        throw parse_error( "sequential element '" + kind_name + "' is not supported (combinational netlists only)", line_no,
                           kind_column );
      }
      throw parse_error( "unknown gate type '" + kind_name + "'", line_no, kind_column );
    }
    lex.expect( '(' );
    gate_declaration gate{ first, *kind, {}, line_no };
    if ( !lex.accept( ')' ) )
    {
      do
      {
        gate.inputs.push_back( lex.name() );
      } while ( lex.accept( ',' ) );
      lex.expect( ')' );
    }
    if ( !lex.at_end() )
    {
      lex.fail( "unexpected text after gate definition" );
    }
    gates.push_back( std::move( gate ) );
  }

  return boolean_network::build( std::move( inputs ), std::move( outputs ), std::move( gates ) );
}

boolean_network parse_bench( std::string_view text )
{
  std::istringstream in{ std::string( text ) };
  return parse_bench( in );
}

boolean_network read_bench_file( std::string const& path )
{
  std::ifstream in( path );
  if ( !in )
  {
    throw smtl_error( "cannot open '" + path + "'" );
  }
  return parse_bench( in );
}

std::string write_bench( boolean_network const& network )
{
  std::ostringstream out;
  for ( auto const& name : network.input_names() )
  {
    out << "INPUT(" << name << ")\n";
  }
  for ( auto const& name : network.output_names() )
  {
    out << "OUTPUT(" << name << ")\n";
  }
  for ( uint32_t i = 0; i < network.num_gates(); ++i )
  {
    auto const& gate = network.gates()[i];
    out << network.net_name( network.num_inputs() + i ) << " = " << to_string( gate.kind ) << "(";
    for ( std::size_t j = 0; j < gate.fanins.size(); ++j )
    {
      out << ( j ? ", " : "" ) << network.net_name( gate.fanins[j] );
    }
    out << ")\n";
  }
  return out.str();
}

/* ---------------------------------------------------------------------- */

bit_vector evaluate_network( boolean_network const& network, bit_vector const& assignment )
{
  if ( assignment.size() != network.num_inputs() )
  {
    throw std::invalid_argument( "assignment has " + std::to_string( assignment.size() ) + " bits, network has " +
                                 std::to_string( network.num_inputs() ) + " inputs" );
  }
  std::vector<bool> values( assignment.begin(), assignment.end() );
  values.resize( network.num_nets() );
  std::vector<bool> operands;
  for ( uint32_t i = 0; i < network.num_gates(); ++i )
  {
    auto const& gate = network.gates()[i];
    operands.clear();
    for ( auto f : gate.fanins )
    {
      operands.push_back( values[f] );
    }
    values[network.num_inputs() + i] = evaluate_gate( gate.kind, operands );
  }
  bit_vector result;
  for ( auto o : network.outputs() )
  {
    result.push_back( values[o] );
  }
  return result;
}

pattern_set simulate_network( boolean_network const& network, pattern_set const& inputs )
{
  if ( inputs.num_signals() != network.num_inputs() )
  {
    throw std::invalid_argument( "pattern set width does not match network inputs" );
  }
  auto const words = inputs.num_words();
  std::vector<uint64_t> values( static_cast<std::size_t>( network.num_nets() ) * words );
  for ( uint32_t i = 0; i < network.num_inputs(); ++i )
  {
    auto const src = inputs.signal( i );
    std::copy( src.begin(), src.end(), values.begin() + static_cast<std::ptrdiff_t>( i * words ) );
  }
  for ( uint32_t g = 0; g < network.num_gates(); ++g )
  {
    auto const& gate = network.gates()[g];
    auto* out = values.data() + static_cast<std::size_t>( network.num_inputs() + g ) * words;
    for ( uint64_t w = 0; w < words; ++w )
    {
      uint64_t acc = values[gate.fanins[0] * words + w];
      for ( std::size_t j = 1; j < gate.fanins.size(); ++j )
      {
        auto const v = values[gate.fanins[j] * words + w];
        switch ( gate.kind )
        {
        case gate_kind::and_gate:
        case gate_kind::nand_gate:
          acc &= v;
          break;
        case gate_kind::or_gate:
        case gate_kind::nor_gate:
          acc |= v;
          break;
        case gate_kind::xor_gate:
          acc ^= v;
          break;
        default:
          break;
        }
      }
      if ( gate.kind == gate_kind::nand_gate || gate.kind == gate_kind::nor_gate || gate.kind == gate_kind::not_gate )
      {
        acc = ~acc;
      }
      out[w] = acc & inputs.lane_mask( w );
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

std::vector<uint32_t> topological_levels( boolean_network const& network )
{
  std::vector<uint32_t> level( network.num_nets(), 0u );
  for ( uint32_t g = 0; g < network.num_gates(); ++g )
  {
    uint32_t max_in = 0;
    for ( auto f : network.gates()[g].fanins )
    {
      max_in = std::max( max_in, level[f] );
    }
    level[network.num_inputs() + g] = max_in + 1u;
  }
  return level;
}

uint32_t network_depth( boolean_network const& network )
{
  auto const levels = topological_levels( network );
  return levels.empty() ? 0u : *std::max_element( levels.begin(), levels.end() );
}

} // namespace smtl
