#include <smtl/synthesis.hpp>

#include <algorithm>
#include <map>
#include <stdexcept>

namespace smtl
{

threshold_gate gate_to_tlg( gate_kind kind, uint32_t arity, uint32_t fanin_limit )
{
  if ( arity == 0u || arity > fanin_limit )
  {
    throw std::invalid_argument( "gate arity " + std::to_string( arity ) + " outside 1.." + std::to_string( fanin_limit ) );
  }
  auto const n = static_cast<int>( arity );
  switch ( kind )
  {
  case gate_kind::and_gate:
    return { std::vector<int>( arity, 2 ), -( 2 * n - 1 ) };
  case gate_kind::or_gate:
    return { std::vector<int>( arity, 2 ), -1 };
  case gate_kind::nand_gate:
    return { std::vector<int>( arity, -2 ), 2 * n - 1 };
  case gate_kind::nor_gate:
    return { std::vector<int>( arity, -2 ), 1 };
  case gate_kind::not_gate:
  case gate_kind::buff_gate:
    if ( arity != 1u )
    {
      throw std::invalid_argument( "NOT and BUFF take exactly one input" );
    }
    return kind == gate_kind::not_gate ? threshold_gate{ { -2 }, 1 } : threshold_gate{ { 2 }, -1 };
  case gate_kind::xor_gate:
    break;
  }
  throw std::invalid_argument( "XOR is not a threshold function and must be decomposed" );
}

namespace
{

/* XOR2 as t = NAND(a, b), y = [2a + 2b + 4t - 5 >= 0] when fan-in 3 is allowed */
threshold_gate const xor_root{ { 2, 2, 4 }, -5 };

class tln_builder
{
public:
  tln_builder( threshold_network& tln, uint32_t fanin_limit ) : tln_( tln ), limit_( fanin_limit ) {}

  uint32_t gate( gate_kind kind, std::vector<uint32_t> fanins, std::string const& name )
  {
    if ( kind == gate_kind::xor_gate )
    {
      return parity( std::move( fanins ), name );
    }
    if ( kind == gate_kind::buff_gate )
    {
      return fanins.front();
    }
    if ( kind != gate_kind::not_gate )
    {
      /* AND/OR are idempotent */
      std::vector<uint32_t> unique;
      for ( auto f : fanins )
      {
        if ( std::find( unique.begin(), unique.end(), f ) == unique.end() )
        {
          unique.push_back( f );
        }
      }
      fanins = std::move( unique );
    }
    if ( fanins.size() == 1u && ( kind == gate_kind::and_gate || kind == gate_kind::or_gate ) )
    {
      return fanins.front();
    }

    auto const base = ( kind == gate_kind::and_gate || kind == gate_kind::nand_gate ) ? gate_kind::and_gate : gate_kind::or_gate;
    uint32_t part = 0;
    while ( fanins.size() > limit_ )
    {
      fanins = reduce_level( base, fanins, name, part );
    }
    return add( gate_to_tlg( kind, static_cast<uint32_t>( fanins.size() ), limit_ ), fanins, name );
  }

  uint32_t parity( std::vector<uint32_t> fanins, std::string const& name )
  {
    /* duplicated inputs cancel pairwise */
    std::map<uint32_t, uint32_t> count;
    for ( auto f : fanins )
    {
      ++count[f];
    }
    std::vector<uint32_t> odd;
    for ( auto f : fanins )
    {
      if ( count[f] % 2u == 1u && std::find( odd.begin(), odd.end(), f ) == odd.end() )
      {
        odd.push_back( f );
      }
    }
    if ( odd.empty() )
    {
      return constant_zero( fanins.front(), name );
    }
    uint32_t part = 0;
    while ( odd.size() > 1u )
    {
      std::vector<uint32_t> next;
      for ( std::size_t i = 0; i + 1u < odd.size(); i += 2u )
      {
        bool const last = odd.size() == 2u;
        next.push_back( xor2( odd[i], odd[i + 1u], last ? name : name + "_x" + std::to_string( part++ ) ) );
      }
      if ( odd.size() % 2u == 1u )
      {
        next.push_back( odd.back() );
      }
      odd = std::move( next );
    }
    return odd.front();
  }

private:
  uint32_t add( threshold_gate gate, std::vector<uint32_t> fanins, std::string name )
  {
    return tln_.add_node( tln_node{ std::move( gate ), std::move( fanins ), std::move( name ), node_role::logic, 0u } );
  }

  std::vector<uint32_t> reduce_level( gate_kind base, std::vector<uint32_t> const& fanins, std::string const& name, uint32_t& part )
  {
    auto const groups = ( fanins.size() + limit_ - 1u ) / limit_;
    std::vector<uint32_t> next;
    std::size_t pos = 0;
    for ( std::size_t g = 0; g < groups; ++g )
    {
      /* balanced group sizes */
      auto const size = fanins.size() / groups + ( g < fanins.size() % groups ? 1u : 0u );
      std::vector<uint32_t> group( fanins.begin() + static_cast<std::ptrdiff_t>( pos ),
                                   fanins.begin() + static_cast<std::ptrdiff_t>( pos + size ) );
      pos += size;
      if ( group.size() == 1u )
      {
        next.push_back( group.front() );
        continue;
      }
      auto gate = gate_to_tlg( base, static_cast<uint32_t>( group.size() ), limit_ );
      next.push_back( add( std::move( gate ), std::move( group ), name + "_t" + std::to_string( part++ ) ) );
    }
    return next;
  }

  uint32_t xor2( uint32_t a, uint32_t b, std::string const& name )
  {
    auto const t = add( gate_to_tlg( gate_kind::nand_gate, 2u, limit_ ), { a, b }, name + "_n" );
    if ( limit_ >= 3u )
    {
      return add( xor_root, { a, b, t }, name );
    }
    /* fan-in 2: AND(OR(a, b), NAND(a, b)) */
    auto const o = add( gate_to_tlg( gate_kind::or_gate, 2u, limit_ ), { a, b }, name + "_o" );
    return add( gate_to_tlg( gate_kind::and_gate, 2u, limit_ ), { o, t }, name );
  }

  uint32_t constant_zero( uint32_t any, std::string const& name )
  {
    return add( threshold_gate{ { 2 }, -3 }, { any }, name );
  }

  threshold_network& tln_;
  uint32_t limit_;
};

void check_params( uint32_t fanin_limit, int w_max )
{
  if ( fanin_limit < 2u || fanin_limit > max_truth_table_vars )
  {
    throw std::invalid_argument( "fan-in limit must be between 2 and " + std::to_string( max_truth_table_vars ) );
  }
  if ( w_max < 2 )
  {
    throw std::invalid_argument( "w_max must be at least 2" );
  }
}

} // namespace

threshold_network decompose_xor( uint32_t arity, uint32_t fanin_limit )
{
  check_params( fanin_limit, default_w_max );
  if ( arity == 0u )
  {
    throw std::invalid_argument( "XOR needs at least one input" );
  }
  std::vector<std::string> names;
  std::vector<uint32_t> ids;
  for ( uint32_t i = 0; i < arity; ++i )
  {
    names.push_back( "x" + std::to_string( i ) );
    ids.push_back( i );
  }
  threshold_network tln( names );
  tln_builder builder( tln, fanin_limit );
  tln.add_output( builder.parity( ids, "y" ), "y" );
  return tln;
}

uint32_t collapse_tln( threshold_network& tln, uint32_t fanin_limit, int w_max )
{
  auto const num_in = tln.num_inputs();
  std::vector<tln_node> nodes = tln.nodes();
  std::vector<bool> alive( nodes.size(), true );
  std::vector<bool> is_output( tln.num_signals(), false );
  for ( auto o : tln.outputs() )
  {
    is_output[o] = true;
  }

  uint32_t merges = 0;
  bool changed = true;
  while ( changed )
  {
    changed = false;
    /* consumer pins per signal among live nodes */
    std::vector<std::vector<uint32_t>> consumers( tln.num_signals() );
    for ( uint32_t i = 0; i < nodes.size(); ++i )
    {
      if ( alive[i] )
      {
        for ( auto f : nodes[i].fanins )
        {
          consumers[f].push_back( num_in + i );
        }
      }
    }

    for ( auto i = static_cast<int64_t>( nodes.size() ) - 1; i >= 0; --i )
    {
      auto const v = num_in + static_cast<uint32_t>( i );
      if ( !alive[i] || is_output[v] || consumers[v].size() != 1u )
      {
        continue;
      }
      auto const u = consumers[v].front();
      auto const& vn = nodes[i];
      auto& un = nodes[u - num_in];

      std::vector<uint32_t> support;
      for ( auto f : un.fanins )
      {
        if ( f != v )
          support.push_back( f );
      }
      for ( auto f : vn.fanins )
      {
        if ( std::find( support.begin(), support.end(), f ) == support.end() )
          support.push_back( f );
      }
      if ( support.size() > fanin_limit )
      {
        continue;
      }

      auto position = [&]( uint32_t sig ) { return static_cast<uint32_t>( std::find( support.begin(), support.end(), sig ) - support.begin() ); };
      truth_table merged{ static_cast<uint32_t>( support.size() ), 0u };
      for ( uint64_t r = 0; r < merged.num_rows(); ++r )
      {
        uint64_t vrow = 0;
        for ( std::size_t j = 0; j < vn.fanins.size(); ++j )
        {
          vrow |= ( ( r >> position( vn.fanins[j] ) ) & 1u ) << j;
        }
        bool const vval = eval_tlg( vn.gate, vrow );
        uint64_t urow = 0;
        for ( std::size_t j = 0; j < un.fanins.size(); ++j )
        {
          bool const bit = un.fanins[j] == v ? vval : ( ( r >> position( un.fanins[j] ) ) & 1u );
          urow |= uint64_t{ bit } << j;
        }
        if ( eval_tlg( un.gate, urow ) )
        {
          merged.bits |= uint64_t{ 1 } << r;
        }
      }

      /* drop variables the merged function ignores */
      std::vector<uint32_t> kept;
      for ( uint32_t j = 0; j < merged.num_vars; ++j )
      {
        if ( merged.depends_on( j ) )
          kept.push_back( j );
      }
      if ( kept.empty() )
      {
        continue;
      }
      truth_table reduced{ static_cast<uint32_t>( kept.size() ), 0u };
      for ( uint64_t r = 0; r < reduced.num_rows(); ++r )
      {
        uint64_t full = 0;
        for ( std::size_t j = 0; j < kept.size(); ++j )
        {
          full |= ( ( r >> j ) & 1u ) << kept[j];
        }
        if ( merged.get( full ) )
          reduced.bits |= uint64_t{ 1 } << r;
      }
      auto const gate = solve_weights( reduced, w_max, fanin_limit );
      if ( !gate )
      {
        continue;
      }

      std::vector<uint32_t> new_fanins;
      for ( auto j : kept )
      {
        new_fanins.push_back( support[j] );
      }
      /* keep consumer lists current for the remainder of this pass */
      for ( auto f : un.fanins )
      {
        auto& c = consumers[f];
        c.erase( std::find( c.begin(), c.end(), u ) );
      }
      for ( auto f : vn.fanins )
      {
        auto& c = consumers[f];
        c.erase( std::find( c.begin(), c.end(), v ) );
      }
      for ( auto f : new_fanins )
      {
        consumers[f].push_back( u );
      }
      un.fanins = std::move( new_fanins );
      un.gate = *gate;
      alive[i] = false;
      ++merges;
      changed = true;
    }
  }

  /* renumber survivors; relative order is still topological */
  std::vector<uint32_t> remap( tln.num_signals() );
  for ( uint32_t i = 0; i < num_in; ++i )
  {
    remap[i] = i;
  }
  threshold_network result( tln.input_names() );
  for ( uint32_t i = 0; i < nodes.size(); ++i )
  {
    if ( !alive[i] )
    {
      continue;
    }
    auto node = nodes[i];
    for ( auto& f : node.fanins )
    {
      f = remap[f];
    }
    remap[num_in + i] = result.add_node( std::move( node ) );
  }
  for ( uint32_t o = 0; o < tln.num_outputs(); ++o )
  {
    result.add_output( remap[tln.outputs()[o]], tln.output_names()[o] );
  }
  tln = std::move( result );
  return merges;
}

threshold_network synthesize_tln( boolean_network const& network, synthesis_params const& params, synthesis_stats* stats )
{
  check_params( params.fanin_limit, params.w_max );
  threshold_network tln( network.input_names() );
  tln_builder builder( tln, params.fanin_limit );

  std::vector<uint32_t> signal( network.num_nets() );
  for ( uint32_t i = 0; i < network.num_inputs(); ++i )
  {
    signal[i] = i;
  }
  for ( uint32_t g = 0; g < network.num_gates(); ++g )
  {
    auto const net = network.num_inputs() + g;
    auto const& gate = network.gates()[g];
    std::vector<uint32_t> fanins;
    for ( auto f : gate.fanins )
    {
      fanins.push_back( signal[f] );
    }
    signal[net] = builder.gate( gate.kind, std::move( fanins ), network.net_name( net ) );
  }
  for ( uint32_t o = 0; o < network.num_outputs(); ++o )
  {
    tln.add_output( signal[network.outputs()[o]], network.output_names()[o] );
  }

  synthesis_stats local;
  local.nodes_before_collapse = tln.num_nodes();
  if ( params.collapse )
  {
    local.merges = collapse_tln( tln, params.fanin_limit, params.w_max );
  }
  if ( stats )
  {
    *stats = local;
  }
  return tln;
}

equivalence_mode equivalence_mode::automatic( uint32_t num_inputs, uint64_t count, uint64_t seed )
{
  return { num_inputs <= 20u, count, seed };
}

std::optional<uint64_t> first_mismatch( pattern_set const& expected, pattern_set const& actual )
{
  if ( expected.num_signals() != actual.num_signals() || expected.num_vectors() != actual.num_vectors() )
  {
    throw std::invalid_argument( "output sets have different shapes" );
  }
  for ( uint64_t w = 0; w < expected.num_words(); ++w )
  {
    uint64_t diff = 0;
    for ( uint32_t o = 0; o < expected.num_signals(); ++o )
    {
      diff |= expected.signal( o )[w] ^ actual.signal( o )[w];
    }
    if ( diff )
    {
      return w * 64u + static_cast<uint64_t>( __builtin_ctzll( diff ) );
    }
  }
  return std::nullopt;
}

equivalence_result verify_equivalence( boolean_network const& network, threshold_network const& tln, equivalence_mode const& mode )
{
  if ( network.num_inputs() != tln.num_inputs() || network.num_outputs() != tln.num_outputs() )
  {
    throw std::invalid_argument( "networks differ in input or output count" );
  }
  auto const patterns = mode.exhaustive ? pattern_set::exhaustive( network.num_inputs() )
                                        : pattern_set::random( network.num_inputs(), mode.count, mode.seed );
  auto const expected = simulate_network( network, patterns );
  auto const actual = simulate_tln( tln, patterns );

  equivalence_result result;
  result.exhaustive = mode.exhaustive;
  result.vectors = patterns.num_vectors();
  result.seed = mode.exhaustive ? 0u : mode.seed;
  if ( auto const bad = first_mismatch( expected, actual ) )
  {
    result.equivalent = false;
    result.failure = counterexample{ patterns.vector( *bad ), expected.vector( *bad ), actual.vector( *bad ) };
  }
  return result;
}

} // namespace smtl
