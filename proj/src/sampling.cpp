#include "stnkey/sampling.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stnkey/errors.hpp"
#include "stnkey/rng.hpp"

namespace stnkey {

namespace {

constexpr std::uint64_t kEnumerationGuard = 100'000'000;  // C(N,m) limit

// Shared by every route below: the good-word test depends on the fold only
// through (ones in sample k, fold weight W), via |k/m - (W-k)/(N-m)|.
bool sample_is_good(std::uint64_t k, std::uint64_t fold_weight, std::uint64_t n,
                    std::uint64_t m, double delta) {
  const double guess = static_cast<double>(k) / static_cast<double>(m);
  const double target =
      static_cast<double>(fold_weight - k) / static_cast<double>(n - m);
  return std::fabs(guess - target) <= delta;
}

}  // namespace

SamplingInstance::SamplingInstance(std::vector<BitString> segments, double delta,
                                   std::size_t sample_size)
    : segments_(std::move(segments)), delta_(delta), sample_size_(sample_size) {
  if (segments_.size() < 2 || segments_.size() % 2 != 0)
    throw std::invalid_argument("SamplingInstance: need an even segment count >= 2");
  const std::size_t n = segments_.front().size();
  if (n == 0) throw std::invalid_argument("SamplingInstance: empty segments");
  for (const auto& s : segments_)
    if (s.size() != n)
      throw std::invalid_argument("SamplingInstance: segment length mismatch");
  if (sample_size_ == 0 || sample_size_ > n / 2)
    throw std::invalid_argument("SamplingInstance: need 0 < m <= floor(N/2)");
  if (!(delta_ > 0.0)) throw std::invalid_argument("SamplingInstance: delta must be > 0");
  fold_ = xor_fold(segments_);
}

bool good_word_membership(const SamplingInstance& inst, const IndexSubset& t) {
  if (t.size() != inst.sample_size())
    throw std::invalid_argument("good_word_membership: |t| != sample size");
  if (t.parent_size() != inst.word_length())
    throw std::invalid_argument("good_word_membership: subset parent mismatch");
  std::uint64_t k = 0;
  for (std::size_t i : t.indices()) k += inst.fold().bit(i);
  return sample_is_good(k, inst.fold().popcount(), inst.word_length(),
                        inst.sample_size(), inst.delta());
}

double analytic_failure_bound(std::uint64_t word_length, std::uint64_t sample_size,
                              double delta) {
  if (word_length == 0 || sample_size == 0 || sample_size > word_length / 2)
    throw std::domain_error("analytic_failure_bound: need 0 < m <= N/2");
  if (!(delta >= 0.0)) throw std::domain_error("analytic_failure_bound: delta < 0");
  const double n = static_cast<double>(word_length);
  const double m = static_cast<double>(sample_size);
  const double raw = 2.0 * std::exp(-delta * delta * m * n / (n + 2.0));
  return raw > 1.0 ? 1.0 : raw;
}

std::uint64_t binomial_or_max(std::uint64_t n, std::uint64_t k) {
  constexpr std::uint64_t kMax = std::numeric_limits<std::uint64_t>::max();
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t c = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    // c = c * (n - k + i) / i, exact at every step; saturate on overflow.
    const std::uint64_t num = n - k + i;
    if (c > kMax / num) return kMax;
    c = c * num / i;
  }
  return c;
}

namespace {

// Counts failing subsets per sample-weight class k, weighting each k by the
// number of enumerated subsets that realize it. Enumeration runs over subset
// masks (Gosper) when N <= 64, otherwise over an index odometer.
std::uint64_t count_failures(const BitString& fold, std::uint64_t n, std::uint64_t m,
                             double delta) {
  const std::uint64_t fold_weight = fold.popcount();
  std::uint64_t failures = 0;

  if (n <= 64) {
    // m <= n/2 <= 32 here, so the shifts below cannot overflow.
    const std::uint64_t word = fold.words().empty() ? 0 : fold.words().front();
    std::uint64_t mask = (1ULL << m) - 1;
    const std::uint64_t last = mask << (n - m);
    while (true) {
      const auto k = static_cast<std::uint64_t>(std::popcount(mask & word));
      if (!sample_is_good(k, fold_weight, n, m, delta)) ++failures;
      if (mask == last) break;
      // Gosper's hack: next mask with the same popcount.
      const std::uint64_t c = mask & (0 - mask);
      const std::uint64_t r = mask + c;
      mask = r | (((mask ^ r) >> 2) / c);
    }
    return failures;
  }

  std::vector<std::uint64_t> idx(m);
  for (std::uint64_t i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    std::uint64_t k = 0;
    for (std::uint64_t i : idx) k += fold.bit(i);
    if (!sample_is_good(k, fold_weight, n, m, delta)) ++failures;
    // advance the odometer
    std::uint64_t pos = m;
    while (pos > 0 && idx[pos - 1] == n - m + pos - 1) --pos;
    if (pos == 0) break;
    ++idx[pos - 1];
    for (std::uint64_t i = pos; i < m; ++i) idx[i] = idx[i - 1] + 1;
  }
  return failures;
}

}  // namespace

double exact_failure_probability(const SamplingInstance& inst) {
  const std::uint64_t n = inst.word_length();
  const std::uint64_t m = inst.sample_size();
  const std::uint64_t total = binomial_or_max(n, m);
  if (total > kEnumerationGuard)
    throw instance_too_large_error("exact_failure_probability: C(N,m) > 1e8");
  const std::uint64_t failures = count_failures(inst.fold(), n, m, inst.delta());
  return static_cast<double>(failures) / static_cast<double>(total);
}

double worst_case_failure(std::uint64_t word_length, std::uint64_t sample_size,
                          double delta, std::size_t stn_count) {
  double worst = 0.0;
  for (std::uint64_t weight = 0; weight <= word_length; ++weight) {
    // Representative fold of this weight, delivered through the full segment
    // tuple so the fold path is exercised as well.
    BitString rep(word_length);
    for (std::uint64_t i = 0; i < weight; ++i) rep.set_bit(i, true);
    std::vector<BitString> segments(2 * stn_count + 2, BitString(word_length));
    segments.front() = rep;
    const SamplingInstance inst(std::move(segments), delta, sample_size);
    const double f = exact_failure_probability(inst);
    if (f > worst) worst = f;
  }
  return worst;
}

McEstimate mc_failure_estimate(const SamplingInstance& inst, std::uint64_t trials,
                               std::uint64_t seed) {
  if (trials < 1000)
    throw std::invalid_argument("mc_failure_estimate: need at least 1000 trials");
  const std::uint64_t n = inst.word_length();
  const std::uint64_t m = inst.sample_size();
  const BitString& fold = inst.fold();
  const std::uint64_t fold_weight = fold.popcount();

  std::uint64_t failures = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::stream(seed, trial);
    std::uint64_t k = 0;
    // Partial Fisher-Yates over positions; only the drawn sample matters.
    // Sorting is unnecessary for the weight count.
    std::vector<std::uint32_t> pool(n);
    for (std::uint64_t i = 0; i < n; ++i) pool[i] = static_cast<std::uint32_t>(i);
    for (std::uint64_t i = 0; i < m; ++i) {
      const std::uint64_t j = i + rng.below(n - i);
      std::swap(pool[i], pool[j]);
      k += fold.bit(pool[i]);
    }
    if (!sample_is_good(k, fold_weight, n, m, inst.delta())) ++failures;
  }

  McEstimate est;
  est.trials = trials;
  est.failures = failures;
  est.fraction = static_cast<double>(failures) / static_cast<double>(trials);
  est.interval = wilson_interval(failures, trials);
  return est;
}

}  // namespace stnkey
