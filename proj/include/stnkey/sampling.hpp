#pragma once

#include <cstdint>
#include <vector>

#include "stnkey/bitmath.hpp"
#include "stnkey/stats.hpp"

namespace stnkey {

/// One instance of the chain sampling strategy: the 2p+2 equal-length words
/// (r0, l1, r1, ..., lp, rp, l(p+1)), a tolerance delta, and a sample size m.
/// Only the fold r0 ^ (l1 ^ r1) ^ ... ^ l(p+1) enters the good-word test.
class SamplingInstance {
 public:
  /// segments.size() must be even and >= 2 (p = segments.size()/2 - 1);
  /// all segments share length N; 0 < m <= floor(N/2); delta > 0.
  SamplingInstance(std::vector<BitString> segments, double delta, std::size_t sample_size);

  const std::vector<BitString>& segments() const { return segments_; }
  std::size_t stn_count() const { return segments_.size() / 2 - 1; }
  std::size_t word_length() const { return segments_.front().size(); }
  double delta() const { return delta_; }
  std::size_t sample_size() const { return sample_size_; }

  /// The folded word the strategy actually samples.
  const BitString& fold() const { return fold_; }

 private:
  std::vector<BitString> segments_;
  BitString fold_;
  double delta_;
  std::size_t sample_size_;
};

/// True iff |w(fold_t) - w(fold_-t)| <= delta for the subset t (|t| must
/// equal the instance's sample size).
bool good_word_membership(const SamplingInstance& inst, const IndexSubset& t);

/// min(1, 2 exp(-delta^2 m N / (N+2))).
double analytic_failure_bound(std::uint64_t word_length, std::uint64_t sample_size,
                              double delta);

/// Exact failure probability over all C(N, m) subsets, by enumeration.
/// Throws instance_too_large_error when C(N, m) > 1e8.
double exact_failure_probability(const SamplingInstance& inst);

/// Maximum exact failure probability over all N+1 fold-weight classes; the
/// failure probability depends on the fold only through its weight, so one
/// representative per class suffices.
double worst_case_failure(std::uint64_t word_length, std::uint64_t sample_size,
                          double delta, std::size_t stn_count);

struct McEstimate {
  double fraction;
  Interval interval;  ///< Wilson 99%
  std::uint64_t trials;
  std::uint64_t failures;
};

/// Failure fraction over uniformly sampled subsets; deterministic per seed,
/// trial streams independent of each other. Requires trials >= 1000.
McEstimate mc_failure_estimate(const SamplingInstance& inst, std::uint64_t trials,
                               std::uint64_t seed);

/// C(n, k) saturating at 2^64-1 (used by the enumeration guard).
std::uint64_t binomial_or_max(std::uint64_t n, std::uint64_t k);

}  // namespace stnkey
