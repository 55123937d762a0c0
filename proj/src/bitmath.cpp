#include "stnkey/bitmath.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace stnkey {

BitString BitString::from_string(std::string_view s) {
  BitString out(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '1')
      out.set_bit(i, true);
    else if (s[i] != '0')
      throw std::invalid_argument("BitString::from_string: character not in {0,1}");
  }
  return out;
}

void BitString::push_back(bool v) {
  if ((size_ & 63) == 0) words_.push_back(0);
  if (v) words_.back() |= 1ULL << (size_ & 63);
  ++size_;
}

std::uint64_t BitString::popcount() const {
  std::uint64_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::uint64_t>(std::popcount(w));
  return total;
}

BitString BitString::prefix(std::size_t n) const {
  if (n > size_) throw std::out_of_range("BitString::prefix: longer than string");
  BitString out(n);
  const std::size_t full = n / 64;
  for (std::size_t w = 0; w < full; ++w) out.words_[w] = words_[w];
  if (n & 63) out.words_[full] = words_[full] & ((1ULL << (n & 63)) - 1);
  return out;
}

BitString BitString::subseq(const IndexSubset& t) const {
  if (t.parent_size() != size_)
    throw std::invalid_argument("BitString::subseq: subset parent size mismatch");
  BitString out(t.size());
  std::size_t pos = 0;
  for (std::size_t i : t.indices()) out.set_bit(pos++, bit(i));
  return out;
}

BitString& BitString::operator^=(const BitString& other) {
  if (size_ != other.size_)
    throw std::invalid_argument("BitString: XOR length mismatch");
  for (std::size_t w = 0; w < words_.size(); ++w) words_[w] ^= other.words_[w];
  return *this;
}

std::string BitString::to_string() const {
  std::string s(size_, '0');
  for (std::size_t i = 0; i < size_; ++i)
    if (bit(i)) s[i] = '1';
  return s;
}

std::string BitString::to_hex() const {
  static const char digits[] = "0123456789abcdef";
  const std::size_t n_bytes = (size_ + 7) / 8;
  std::string s;
  s.reserve(2 * n_bytes);
  for (std::size_t b = 0; b < n_bytes; ++b) {
    const auto byte = static_cast<unsigned>((words_[b >> 3] >> ((b & 7) * 8)) & 0xff);
    s.push_back(digits[byte >> 4]);
    s.push_back(digits[byte & 0xf]);
  }
  return s;
}

IndexSubset::IndexSubset(std::vector<std::size_t> indices, std::size_t parent_size)
    : indices_(std::move(indices)), parent_size_(parent_size) {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] >= parent_size_)
      throw std::invalid_argument("IndexSubset: index beyond parent size");
    if (i > 0 && indices_[i] <= indices_[i - 1])
      throw std::invalid_argument("IndexSubset: indices not strictly increasing");
  }
}

IndexSubset IndexSubset::all(std::size_t parent_size) {
  std::vector<std::size_t> idx(parent_size);
  for (std::size_t i = 0; i < parent_size; ++i) idx[i] = i;
  return IndexSubset(std::move(idx), parent_size);
}

IndexSubset IndexSubset::complement() const {
  std::vector<std::size_t> out;
  out.reserve(parent_size_ - indices_.size());
  std::size_t next = 0;
  for (std::size_t i = 0; i < parent_size_; ++i) {
    if (next < indices_.size() && indices_[next] == i)
      ++next;
    else
      out.push_back(i);
  }
  return IndexSubset(std::move(out), parent_size_);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("binary_entropy: argument outside [0,1]");
  double h = 0.0;
  if (x > 0.0) h += x * std::log2(1.0 / x);
  if (x < 1.0) h += (1.0 - x) * std::log2(1.0 / (1.0 - x));
  return h;
}

double relative_weight(const BitString& q) {
  if (q.empty()) throw std::invalid_argument("relative_weight: empty string");
  return static_cast<double>(q.popcount()) / static_cast<double>(q.size());
}

BitString xor_fold(const std::vector<BitString>& segments) {
  if (segments.empty()) throw std::invalid_argument("xor_fold: no segments");
  BitString acc = segments.front();
  for (std::size_t s = 1; s < segments.size(); ++s) acc ^= segments[s];
  return acc;
}

BitString xor_fold(const std::vector<BitString>& segments, const IndexSubset& t) {
  return xor_fold(segments).subseq(t);
}

}  // namespace stnkey
