#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <vector>

namespace stnkey {

// Deterministic random streams. Every consumer derives its own generator from
// (master seed, stream path), so adding a stream never perturbs the others and
// trials can run on any number of threads with bit-identical results. The
// engine is std::mt19937_64 (output sequence fixed by the standard); variates
// are produced from raw 64-bit draws below instead of std::*_distribution,
// whose algorithms are implementation-defined.

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mixes a master seed with up to three stream coordinates into one 64-bit seed.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a = 0,
                              std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t s = master;
  std::uint64_t out = splitmix64(s);
  s ^= a + 0x632be59bd9b4e019ULL;
  out ^= splitmix64(s);
  s ^= b + 0x100000001b3ULL;
  out ^= splitmix64(s);
  s ^= c + 0xd6e8feb86659fd93ULL;
  out ^= splitmix64(s);
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  static Rng stream(std::uint64_t master, std::uint64_t a = 0, std::uint64_t b = 0,
                    std::uint64_t c = 0) {
    return Rng(mix_seed(master, a, b, c));
  }

  std::uint64_t next_u64() { return eng_(); }

  /// True with probability p (p outside [0,1] saturates).
  bool bernoulli(double p) {
    if (p <= 0.0) {
      next_u64();  // keep stream position independent of p
      return false;
    }
    const double scaled = p * 18446744073709551616.0;
    if (scaled >= 18446744073709551616.0) {  // p ~ 1 may round up to 2^64
      next_u64();
      return true;
    }
    return next_u64() < static_cast<std::uint64_t>(scaled);
  }

  /// Uniform integer in [0, n), unbiased (Lemire with rejection).
  std::uint64_t below(std::uint64_t n) {
    using u128 = unsigned __int128;
    std::uint64_t x = next_u64();
    u128 m = static_cast<u128>(x) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        x = next_u64();
        m = static_cast<u128>(x) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 eng_;
};

/// Uniform size-m subset of {0,..,n-1} via partial Fisher-Yates; sorted ascending.
inline std::vector<std::size_t> sample_subset(std::size_t n, std::size_t m, Rng& rng) {
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(m);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace stnkey
