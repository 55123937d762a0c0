#pragma once

#include <cstdint>

namespace stnkey {

/// User-chosen protocol inputs. Defaults follow the evaluation settings used
/// throughout the reports: eps = 1e-30, eps_abort = eps_prime = 1e-10, px = 0.2.
struct ProtocolParams {
  std::uint64_t n_signals = 1'000'000;  ///< N, signals per establishment
  std::uint32_t stn_count = 2;          ///< p, intermediate nodes in the chain
  double link_noise = 0.02;             ///< Q, per-link bit-flip probability
  double px = 0.2;                      ///< X-basis bias, 0 < px <= 1/2
  double eps = 1e-30;                   ///< sampling/security parameter
  double eps_abort = 1e-10;             ///< abort budget
  double eps_prime = 1e-10;             ///< single-link baseline budget

  /// Throws std::domain_error when any field is outside its range.
  void validate() const;
};

/// Every block size the finite-size reduction produces from ProtocolParams.
/// m0/n0 are the floored counts used for downstream counting; the pre-floor
/// reals are retained for reporting and feed the deviation terms.
struct DerivedSizes {
  double beta;        ///< Hoeffding slack on the per-link sifted count
  double n_tilde;     ///< guaranteed sifted block per link
  double beta_prime;  ///< slack on the basis split within n_tilde
  double m0_real;     ///< X-basis (test) block, pre-floor
  double n0_real;     ///< Z-basis (key) block, pre-floor
  std::uint64_t m0;   ///< floored test block
  std::uint64_t n0;   ///< floored key block
  std::uint64_t block_size;  ///< m0 + n0 (floored)
  double delta;       ///< sampling deviation tolerance
  double mu;          ///< single-link baseline deviation
  std::uint64_t n_signals;   ///< copy of N for per-signal rates
};

/// delta = sqrt((N0+2)/(m0 N0) ln(2/eps^2)) with N0 = m0 + n0.
double sampling_deviation(double m0, double n0, double eps);

/// mu = sqrt((n0+m0)/(n0 m0) * (m0+1)/m0 * ln(2/eps_prime)).
double tn_deviation(double m0, double n0, double eps_prime);

/// Computes beta, n_tilde, beta_prime, m0, n0, delta and mu in that order.
/// Throws infeasible_error when n_tilde, m0 or n0 is not positive (N too
/// small for the chosen budgets).
DerivedSizes derive_sizes(const ProtocolParams& params);

/// 2 eps^(1/3) + 2(p+1) eps, clamped to <= 1. Accepts eps in [0,1].
double failure_probability(double eps, std::uint32_t stn_count);
double failure_probability(const ProtocolParams& params);

/// 9 eps + 4 sqrt(eps). Accepts eps in [0,1).
double pa_epsilon(double eps);

}  // namespace stnkey
