#include "stnkey/rates.hpp"

#include <cmath>
#include <stdexcept>

#include "stnkey/bitmath.hpp"

namespace stnkey {

namespace {

KeyRateResult assemble(double n0, double effective_noise, double pa_penalty,
                       double ec_efficiency, double n_signals) {
  const double x = effective_noise < 0.5 ? effective_noise : 0.5;
  const double hx = binary_entropy(x);

  KeyRateResult r;
  r.effective_noise = effective_noise;
  r.entropy_term = n0 * (1.0 - hx);
  r.leakage = ec_efficiency * n0 * hx;
  r.pa_penalty = pa_penalty;
  r.key_length = r.entropy_term - r.leakage - r.pa_penalty;
  r.key_length_clamped =
      r.key_length > 0.0 ? static_cast<std::uint64_t>(std::floor(r.key_length)) : 0;
  r.per_signal_rate = static_cast<double>(r.key_length_clamped) / n_signals;
  r.feasible = r.key_length_clamped > 0;
  return r;
}

}  // namespace

double stn_total_noise(double link_noise, std::uint32_t stn_count) {
  if (!(link_noise >= 0.0 && link_noise <= 0.5))
    throw std::domain_error("stn_total_noise: Q outside [0, 0.5]");
  const double q = link_noise;
  const std::uint64_t links = static_cast<std::uint64_t>(stn_count) + 1;
  if (q == 0.0) return 0.0;

  // Terms stay in [0,1]; the running ratio between consecutive odd binomial
  // terms avoids overflowing C(p+1, k) at large p.
  double term = static_cast<double>(links) * q * std::pow(1.0 - q, static_cast<double>(links - 1));
  double sum = 0.0;
  for (std::uint64_t k = 1; k <= links; k += 2) {
    sum += term;
    if (k + 2 > links) break;
    const double a = static_cast<double>(links - k);
    const double b = static_cast<double>(links - k - 1);
    term *= a * b / (static_cast<double>(k + 1) * static_cast<double>(k + 2)) * q * q /
            ((1.0 - q) * (1.0 - q));
  }
  return sum;
}

KeyRateResult stn_key_length(const DerivedSizes& sizes, double w_obs, double eps,
                             double ec_efficiency) {
  if (!(w_obs >= 0.0 && w_obs <= 1.0))
    throw std::domain_error("stn_key_length: w_obs outside [0,1]");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::domain_error("stn_key_length: eps outside (0,1)");
  const double pa = -2.0 * std::log2(eps);
  return assemble(static_cast<double>(sizes.n0), w_obs + sizes.delta, pa,
                  ec_efficiency, static_cast<double>(sizes.n_signals));
}

KeyRateResult stn_key_length_from_counts(std::uint64_t n0, std::uint64_t m0,
                                         std::uint64_t n_signals, double w_obs,
                                         double eps, double ec_efficiency) {
  if (!(w_obs >= 0.0 && w_obs <= 1.0))
    throw std::domain_error("stn_key_length_from_counts: w_obs outside [0,1]");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::domain_error("stn_key_length_from_counts: eps outside (0,1)");
  const double delta = sampling_deviation(static_cast<double>(m0),
                                          static_cast<double>(n0), eps);
  const double pa = -2.0 * std::log2(eps);
  return assemble(static_cast<double>(n0), w_obs + delta, pa, ec_efficiency,
                  static_cast<double>(n_signals));
}

KeyRateResult tn_key_length(const DerivedSizes& sizes, double link_noise,
                            double eps_prime, double ec_efficiency) {
  if (!(link_noise >= 0.0 && link_noise <= 0.5))
    throw std::domain_error("tn_key_length: Q outside [0, 0.5]");
  if (!(eps_prime > 0.0 && eps_prime < 1.0))
    throw std::domain_error("tn_key_length: eps_prime outside (0,1)");
  const double pa = 2.0 * (1.0 - std::log2(eps_prime));  // 2 log2(2/eps')
  return assemble(static_cast<double>(sizes.n0), link_noise + sizes.mu, pa,
                  ec_efficiency, static_cast<double>(sizes.n_signals));
}

double asymptotic_stn_rate(double link_noise, std::uint32_t stn_count,
                           double ec_efficiency) {
  const double w = stn_total_noise(link_noise, stn_count);
  const double rate = 1.0 - (1.0 + ec_efficiency) * binary_entropy(w < 0.5 ? w : 0.5);
  return rate > 0.0 ? rate : 0.0;
}

}  // namespace stnkey
