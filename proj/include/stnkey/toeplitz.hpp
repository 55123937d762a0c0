#pragma once

#include <cstdint>

#include "stnkey/bitmath.hpp"

namespace stnkey {

/// Seeded random binary Toeplitz matrix over GF(2), a two-universal family:
/// for any fixed x != y, Pr over seeds of T x = T y is 2^-out_bits.
/// T[i][j] = d[i + in_bits - 1 - j] for a random diagonal word d of
/// out_bits + in_bits - 1 bits.
class ToeplitzHash {
 public:
  ToeplitzHash(std::size_t out_bits, std::size_t in_bits, std::uint64_t seed);

  std::size_t out_bits() const { return out_bits_; }
  std::size_t in_bits() const { return in_bits_; }

  /// y_i = XOR_j T[i][j] x_j. x must have in_bits bits.
  BitString apply(const BitString& x) const;

 private:
  std::size_t out_bits_;
  std::size_t in_bits_;
  BitString diag_rev_;  // diagonal word, reversed: row i is its window at l-1-i
};

}  // namespace stnkey
