#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace smtl
{

using bit_vector = std::vector<bool>;

/*! \brief Bit-sliced set of input (or output) vectors.

  Signal `i` occupies `num_words()` consecutive 64-bit words; bit `b` of word
  `w` is the value of that signal in vector `64 * w + b`. Padding bits past
  `num_vectors()` are zero.
*/
class pattern_set
{
public:
  pattern_set() = default;
  pattern_set( uint32_t num_signals, uint64_t num_vectors );

  /*! \brief All 2^n assignments; vector index doubles as the assignment (bit i = input i). */
  static pattern_set exhaustive( uint32_t num_inputs );

  /*! \brief `count` uniformly random vectors from a seeded generator. */
  static pattern_set random( uint32_t num_inputs, uint64_t count, uint64_t seed );

  static pattern_set from_vectors( uint32_t num_signals, std::vector<bit_vector> const& vectors );

  uint32_t num_signals() const noexcept { return num_signals_; }
  uint64_t num_vectors() const noexcept { return num_vectors_; }
  uint64_t num_words() const noexcept { return num_words_; }

  std::span<uint64_t> signal( uint32_t index );
  std::span<uint64_t const> signal( uint32_t index ) const;

  bool get( uint32_t signal, uint64_t vector ) const;
  void set( uint32_t signal, uint64_t vector, bool value );

  bit_vector vector( uint64_t index ) const;

  /*! \brief Mask of valid lanes in word `w`. */
  uint64_t lane_mask( uint64_t word ) const;

private:
  uint32_t num_signals_ = 0;
  uint64_t num_vectors_ = 0;
  uint64_t num_words_ = 0;
  std::vector<uint64_t> words_;
};

} // namespace smtl
