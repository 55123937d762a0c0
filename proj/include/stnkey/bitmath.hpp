#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stnkey {

class IndexSubset;

/// Bit sequence packed into 64-bit words for fast population counts and XOR.
/// Bit i of word w is logical position 64*w + i; all public indexing is
/// 0-based (reports and CSV output translate to 1-based positions).
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t n) : words_((n + 63) / 64, 0), size_(n) {}

  static BitString zeros(std::size_t n) { return BitString(n); }
  /// Parses "1010..."; the leftmost character is position 0.
  static BitString from_string(std::string_view s);

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  bool bit(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set_bit(std::size_t i, bool v) {
    const std::uint64_t mask = 1ULL << (i & 63);
    if (v)
      words_[i >> 6] |= mask;
    else
      words_[i >> 6] &= ~mask;
  }
  void push_back(bool v);

  /// Hamming weight wt(q).
  std::uint64_t popcount() const;

  BitString prefix(std::size_t n) const;
  /// Bits at the subset's positions, in increasing index order.
  BitString subseq(const IndexSubset& t) const;

  BitString& operator^=(const BitString& other);
  friend BitString operator^(BitString lhs, const BitString& rhs) {
    lhs ^= rhs;
    return lhs;
  }
  bool operator==(const BitString& other) const {
    return size_ == other.size_ && words_ == other.words_;
  }

  std::string to_string() const;
  /// Lowercase hex of the LSB-first byte packing (byte k holds bits 8k..8k+7).
  std::string to_hex() const;

  const std::vector<std::uint64_t>& words() const { return words_; }

 private:
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// Strictly increasing 0-based positions into a parent string of stated size.
class IndexSubset {
 public:
  IndexSubset(std::vector<std::size_t> indices, std::size_t parent_size);

  static IndexSubset all(std::size_t parent_size);

  std::size_t size() const { return indices_.size(); }
  std::size_t parent_size() const { return parent_size_; }
  const std::vector<std::size_t>& indices() const { return indices_; }

  IndexSubset complement() const;

 private:
  std::vector<std::size_t> indices_;
  std::size_t parent_size_;
};

/// h(x) = x log2(1/x) + (1-x) log2(1/(1-x)); h(0) = h(1) = 0.
/// Throws std::domain_error outside [0,1].
double binary_entropy(double x);

/// w(q) = wt(q)/|q|. Throws std::invalid_argument on an empty string.
double relative_weight(const BitString& q);

/// Bitwise XOR of all segments (equal lengths required).
BitString xor_fold(const std::vector<BitString>& segments);
/// Same, restricted to the positions in t (in index order).
BitString xor_fold(const std::vector<BitString>& segments, const IndexSubset& t);

}  // namespace stnkey
