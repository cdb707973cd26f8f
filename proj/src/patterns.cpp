#include <smtl/patterns.hpp>

#include <random>
#include <stdexcept>

namespace smtl
{

pattern_set::pattern_set( uint32_t num_signals, uint64_t num_vectors )
    : num_signals_( num_signals ),
      num_vectors_( num_vectors ),
      num_words_( ( num_vectors + 63u ) / 64u ),
      words_( static_cast<std::size_t>( num_signals ) * num_words_, 0u )
{
}

pattern_set pattern_set::exhaustive( uint32_t num_inputs )
{
  if ( num_inputs > 30u )
  {
    throw std::invalid_argument( "exhaustive pattern set limited to 30 inputs" );
  }
  pattern_set patterns( num_inputs, uint64_t{ 1 } << num_inputs );
  for ( uint32_t i = 0; i < num_inputs; ++i )
  {
    auto words = patterns.signal( i );
    if ( i < 6u )
    {
      /* periodic within a word */
      uint64_t word = 0;
      for ( uint32_t b = 0; b < 64u; ++b )
      {
        if ( ( b >> i ) & 1u )
        {
          word |= uint64_t{ 1 } << b;
        }
      }
      for ( uint64_t w = 0; w < patterns.num_words(); ++w )
      {
        words[w] = word & patterns.lane_mask( w );
      }
    }
    else
    {
      for ( uint64_t w = 0; w < patterns.num_words(); ++w )
      {
        words[w] = ( ( w >> ( i - 6u ) ) & 1u ) ? ~uint64_t{ 0 } : 0u;
      }
    }
  }
  return patterns;
}

pattern_set pattern_set::random( uint32_t num_inputs, uint64_t count, uint64_t seed )
{
  pattern_set patterns( num_inputs, count );
  std::mt19937_64 rng( seed );
  for ( uint32_t i = 0; i < num_inputs; ++i )
  {
    auto words = patterns.signal( i );
    for ( uint64_t w = 0; w < patterns.num_words(); ++w )
    {
      words[w] = rng() & patterns.lane_mask( w );
    }
  }
  return patterns;
}

pattern_set pattern_set::from_vectors( uint32_t num_signals, std::vector<bit_vector> const& vectors )
{
  pattern_set patterns( num_signals, vectors.size() );
  for ( uint64_t v = 0; v < vectors.size(); ++v )
  {
    if ( vectors[v].size() != num_signals )
    {
      throw std::invalid_argument( "vector length does not match signal count" );
    }
    for ( uint32_t i = 0; i < num_signals; ++i )
    {
      patterns.set( i, v, vectors[v][i] );
    }
  }
  return patterns;
}

std::span<uint64_t> pattern_set::signal( uint32_t index )
{
  return { words_.data() + static_cast<std::size_t>( index ) * num_words_, static_cast<std::size_t>( num_words_ ) };
}

std::span<uint64_t const> pattern_set::signal( uint32_t index ) const
{
  return { words_.data() + static_cast<std::size_t>( index ) * num_words_, static_cast<std::size_t>( num_words_ ) };
}

bool pattern_set::get( uint32_t signal, uint64_t vector ) const
{
  return ( this->signal( signal )[vector / 64u] >> ( vector % 64u ) ) & 1u;
}

void pattern_set::set( uint32_t signal, uint64_t vector, bool value )
{
  auto& word = this->signal( signal )[vector / 64u];
  auto const bit = uint64_t{ 1 } << ( vector % 64u );
  word = value ? ( word | bit ) : ( word & ~bit );
}

bit_vector pattern_set::vector( uint64_t index ) const
{
  bit_vector bits( num_signals_ );
  for ( uint32_t i = 0; i < num_signals_; ++i )
  {
    bits[i] = get( i, index );
  }
  return bits;
}

uint64_t pattern_set::lane_mask( uint64_t word ) const
{
  if ( word + 1u < num_words_ || num_vectors_ % 64u == 0u )
  {
    return ~uint64_t{ 0 };
  }
  return ( uint64_t{ 1 } << ( num_vectors_ % 64u ) ) - 1u;
}

} // namespace smtl
