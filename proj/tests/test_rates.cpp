#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "stnkey/bitmath.hpp"
#include "stnkey/params.hpp"
#include "stnkey/rates.hpp"

using namespace stnkey;

namespace {

// Independent oracle: odd-parity probability by enumerating all 2^(p+1)
// error patterns with their exact product weights.
double odd_parity_enumeration(double q, std::uint32_t p) {
  const std::uint32_t links = p + 1;
  double total = 0.0;
  for (std::uint32_t pattern = 0; pattern < (1u << links); ++pattern) {
    const int weight = __builtin_popcount(pattern);
    if (weight % 2 == 0) continue;
    total += std::pow(q, weight) * std::pow(1.0 - q, links - weight);
  }
  return total;
}

DerivedSizes sizes_at(std::uint64_t n, double px = 0.2, double eps_abort = 1e-10) {
  ProtocolParams p;
  p.n_signals = n;
  p.px = px;
  p.eps_abort = eps_abort;
  return derive_sizes(p);
}

// Bisection root of h(x) = 1/2 on (0, 1/2); the key-rate zero with unit
// efficiency and no deviation.
double entropy_half_root() {
  double lo = 0.05, hi = 0.3;
  for (int i = 0; i < 200; ++i) {
    const double mid = (lo + hi) / 2.0;
    if (binary_entropy(mid) < 0.5)
      lo = mid;
    else
      hi = mid;
  }
  return (lo + hi) / 2.0;
}

}  // namespace

TEST_CASE("stn_total_noise closed form") {
  CHECK(stn_total_noise(0.02, 0) == doctest::Approx(0.02).epsilon(1e-15));
  for (double q : {0.0, 0.1, 0.25, 0.4, 0.5})
    CHECK(stn_total_noise(q, 1) == doctest::Approx(2.0 * q * (1.0 - q)).epsilon(1e-14));
  CHECK(stn_total_noise(0.02, 2) == doctest::Approx(0.057632).epsilon(1e-13));
  CHECK_THROWS_AS(stn_total_noise(-0.01, 1), std::domain_error);
  CHECK_THROWS_AS(stn_total_noise(0.51, 1), std::domain_error);
}

TEST_CASE("stn_total_noise equals exhaustive parity enumeration") {
  for (std::uint32_t p = 0; p <= 4; ++p)
    for (int i = 0; i <= 20; ++i) {
      const double q = i * 0.025;
      CHECK(stn_total_noise(q, p) ==
            doctest::Approx(odd_parity_enumeration(q, p)).epsilon(1e-12));
    }
}

TEST_CASE("stn_total_noise monotonicity and the long-chain limit") {
  for (double q : {0.05, 0.2, 0.45}) {
    double prev = 0.0;
    for (std::uint32_t p = 0; p <= 30; ++p) {
      const double w = stn_total_noise(q, p);
      // strictly increasing until the double saturates at 1/2
      if (prev < 0.5 - 1e-12)
        CHECK(w > prev);
      else
        CHECK(w >= prev - 1e-15);
      CHECK(w < 0.5 + 1e-14);  // summation roundoff may overshoot by ulps
      prev = w;
    }
  }
  double prev = -1.0;
  for (double q = 0.0; q <= 0.5 + 1e-12; q += 0.01) {
    const double w = stn_total_noise(std::min(q, 0.5), 3);
    CHECK(w >= prev);
    prev = w;
  }
  for (double q : {0.1, 0.2, 0.3})
    CHECK(std::fabs(stn_total_noise(q, 200) - 0.5) < 1e-12);
}

TEST_CASE("stn_key_length noiseless and saturated regimes") {
  // Large N drives delta -> 0; with w = 0 the rate per key bit approaches 1.
  const DerivedSizes s = sizes_at(100'000'000'000'000ULL);
  const KeyRateResult r = stn_key_length(s, 0.0, 1e-30);
  CHECK(r.key_length / static_cast<double>(s.n0) > 0.999);
  CHECK(r.feasible);
  CHECK(r.key_length ==
        doctest::Approx(r.entropy_term - r.leakage - r.pa_penalty).epsilon(1e-12));

  // Effective noise at or beyond 1/2 saturates h and clamps the key to zero.
  const KeyRateResult dead = stn_key_length(s, 0.6, 1e-30);
  CHECK(dead.key_length_clamped == 0);
  CHECK(!dead.feasible);
  CHECK(dead.per_signal_rate == 0.0);

  CHECK_THROWS_AS(stn_key_length(s, -0.1, 1e-30), std::domain_error);
  CHECK_THROWS_AS(stn_key_length(s, 0.1, 0.0), std::domain_error);
}

TEST_CASE("key rate zero sits at the 11% noise tolerance") {
  const double root = entropy_half_root();
  CHECK(root == doctest::Approx(0.11002786443835955).epsilon(1e-10));

  // With delta ~ 0 (N = 1e14 proxy) the clamped key length flips from
  // positive to zero across the root.
  const DerivedSizes s = sizes_at(100'000'000'000'000ULL);
  CHECK(stn_key_length(s, root - 0.001, 1e-30).feasible);
  CHECK(!stn_key_length(s, root + 0.001, 1e-30).feasible);
}

TEST_CASE("tn_key_length basics and independence from chain length") {
  const DerivedSizes s = sizes_at(10'000'000'000ULL);
  const KeyRateResult r = tn_key_length(s, 0.0, 1e-10);
  CHECK(r.key_length / static_cast<double>(s.n0) > 0.99);
  const KeyRateResult dead = tn_key_length(s, 0.499, 1e-10);
  CHECK(dead.key_length_clamped == 0);

  // l_TN never references p: same sizes, same answer whatever the chain.
  ProtocolParams a;
  a.n_signals = 1'000'000;
  a.stn_count = 1;
  ProtocolParams b = a;
  b.stn_count = 7;
  CHECK(tn_key_length(derive_sizes(a), 0.02, 1e-10).key_length ==
        tn_key_length(derive_sizes(b), 0.02, 1e-10).key_length);
}

TEST_CASE("single-link baseline beats the chain at the figure operating point") {
  const DerivedSizes s = sizes_at(1'000'000);
  const KeyRateResult tn = tn_key_length(s, 0.02, 1e-10);
  double prev = tn.key_length;
  for (std::uint32_t p = 1; p <= 5; ++p) {
    const KeyRateResult stn = stn_key_length(s, stn_total_noise(0.02, p), 1e-30);
    CHECK(stn.key_length < prev);
    prev = stn.key_length;
  }
}

TEST_CASE("stn_key_length monotone in observed noise") {
  const DerivedSizes s = sizes_at(1'000'000);
  double prev = 1e18;
  for (double w = 0.0; w <= 0.2; w += 0.01) {
    const double l = stn_key_length(s, w, 1e-30).key_length;
    CHECK(l < prev);
    prev = l;
  }
}

TEST_CASE("asymptotic rate and finite-size convergence") {
  CHECK(asymptotic_stn_rate(0.0, 5) == 1.0);
  CHECK(asymptotic_stn_rate(0.02, 2) ==
        doctest::Approx(1.0 - 2.0 * binary_entropy(0.057632)).epsilon(1e-13));
  // Beyond the tolerance the clamp engages: Q = 0.0437 composes to w ~ 0.12.
  CHECK(stn_total_noise(0.0437, 2) == doctest::Approx(0.12).epsilon(1e-3));
  CHECK(asymptotic_stn_rate(0.0437, 2) == 0.0);
  CHECK(asymptotic_stn_rate(0.2, 2) == 0.0);

  // Rate per sifted key bit approaches the asymptote from below as N grows.
  const double target = asymptotic_stn_rate(0.02, 2);
  const double w = stn_total_noise(0.02, 2);
  double prev = -1.0;
  for (std::uint64_t n : {std::uint64_t{1'000'000}, std::uint64_t{100'000'000},
                          std::uint64_t{10'000'000'000}}) {
    const DerivedSizes s = sizes_at(n);
    const KeyRateResult r = stn_key_length(s, w, 1e-30);
    const double per_key_bit =
        static_cast<double>(r.key_length_clamped) / static_cast<double>(s.n0);
    CHECK(per_key_bit <= target);
    CHECK(per_key_bit > prev);
    prev = per_key_bit;
  }
  // Residual gap at N = 1e10 is dominated by 2(h(w+delta) - h(w)) ~ 4.7e-3.
  CHECK(target - prev < 0.006);
}
