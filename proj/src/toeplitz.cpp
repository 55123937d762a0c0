#include "stnkey/toeplitz.hpp"

#include <bit>
#include <stdexcept>

#include "stnkey/rng.hpp"

namespace stnkey {

ToeplitzHash::ToeplitzHash(std::size_t out_bits, std::size_t in_bits, std::uint64_t seed)
    : out_bits_(out_bits), in_bits_(in_bits) {
  if (in_bits == 0) throw std::invalid_argument("ToeplitzHash: zero input width");
  const std::size_t diag_bits = out_bits + in_bits - 1;
  Rng rng = Rng::stream(seed, 0x746f65706cULL);
  BitString diag(diag_bits);
  for (std::size_t w = 0; w < diag.words().size(); ++w) {
    const std::uint64_t word = rng.next_u64();
    for (std::size_t b = 0; b < 64; ++b) {
      const std::size_t i = w * 64 + b;
      if (i >= diag_bits) break;
      diag.set_bit(i, (word >> b) & 1);
    }
  }
  // Reverse once so each row becomes a contiguous window:
  // T[i][j] = d[i + n-1 - j] = rev[(l-1-i) + j] with l = out_bits, n = in_bits.
  diag_rev_ = BitString(diag_bits);
  for (std::size_t i = 0; i < diag_bits; ++i)
    diag_rev_.set_bit(i, diag.bit(diag_bits - 1 - i));
}

BitString ToeplitzHash::apply(const BitString& x) const {
  if (x.size() != in_bits_)
    throw std::invalid_argument("ToeplitzHash::apply: input width mismatch");
  BitString y(out_bits_);
  const auto& xw = x.words();
  const auto& dw = diag_rev_.words();
  const std::size_t n_words = xw.size();

  for (std::size_t row = 0; row < out_bits_; ++row) {
    const std::size_t offset = out_bits_ - 1 - row;
    const std::size_t word_off = offset >> 6;
    const unsigned bit_off = offset & 63;
    std::uint64_t acc = 0;
    for (std::size_t w = 0; w < n_words; ++w) {
      std::uint64_t window = dw[word_off + w] >> bit_off;
      if (bit_off != 0 && word_off + w + 1 < dw.size())
        window |= dw[word_off + w + 1] << (64 - bit_off);
      acc ^= window & xw[w];
    }
    y.set_bit(row, std::popcount(acc) & 1);
  }
  return y;
}

}  // namespace stnkey
