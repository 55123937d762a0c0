#pragma once

#include <cstdint>

#include "stnkey/params.hpp"

namespace stnkey {

/// A key length together with its decomposition. The identity
/// key_length = entropy_term - leakage - pa_penalty always holds;
/// key_length_clamped = max(0, floor(key_length)).
struct KeyRateResult {
  double key_length = 0.0;
  std::uint64_t key_length_clamped = 0;
  double entropy_term = 0.0;
  double leakage = 0.0;      ///< error-correction leakage (bits)
  double pa_penalty = 0.0;   ///< privacy-amplification log term (bits)
  double effective_noise = 0.0;  ///< w_obs + delta (chain) or Q + mu (single link)
  double per_signal_rate = 0.0;  ///< key_length_clamped / N
  bool feasible = false;         ///< key_length_clamped > 0
};

/// Probability of an odd number of independent Bernoulli(q) errors across the
/// p+1 links of a chain with p intermediate nodes:
///   sum_i C(p+1, 2i+1) q^(2i+1) (1-q)^(p-2i).
double stn_total_noise(double link_noise, std::uint32_t stn_count);

/// Chain key length n0 (1 - h(w_obs + delta)) - lambda_EC - 2 log2(1/eps)
/// with lambda_EC = ec_efficiency * n0 * h(w_obs + delta). The noise argument
/// of h is clamped at 1/2.
KeyRateResult stn_key_length(const DerivedSizes& sizes, double w_obs, double eps,
                             double ec_efficiency = 1.0);

/// Same formula from raw observed counts; delta is recomputed from (m0, n0).
KeyRateResult stn_key_length_from_counts(std::uint64_t n0, std::uint64_t m0,
                                         std::uint64_t n_signals, double w_obs,
                                         double eps, double ec_efficiency = 1.0);

/// Single-link baseline n0 (1 - h(Q + mu)) - lambda_EC - 2 log2(2/eps_prime),
/// independent of the chain length.
KeyRateResult tn_key_length(const DerivedSizes& sizes, double link_noise,
                            double eps_prime, double ec_efficiency = 1.0);

/// Large-N limit of the chain rate per sifted key bit:
/// max(0, 1 - (1 + ec_efficiency) h(total noise)).
double asymptotic_stn_rate(double link_noise, std::uint32_t stn_count,
                           double ec_efficiency = 1.0);

}  // namespace stnkey
