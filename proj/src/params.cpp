#include "stnkey/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "stnkey/errors.hpp"

namespace stnkey {

namespace {

// ln(2/e) evaluated as ln 2 - ln e so sub-normal budgets do not overflow 2/e.
double log_two_over(double e) { return std::log(2.0) - std::log(e); }

}  // namespace

void ProtocolParams::validate() const {
  if (n_signals < 1) throw std::domain_error("params: N must be >= 1");
  if (!(link_noise >= 0.0 && link_noise < 0.5))
    throw std::domain_error("params: Q must lie in [0, 0.5)");
  if (!(px > 0.0 && px <= 0.5))
    throw std::domain_error("params: px must lie in (0, 0.5]");
  for (double e : {eps, eps_abort, eps_prime})
    if (!(e > 0.0 && e < 1.0))
      throw std::domain_error("params: epsilons must lie in (0, 1)");
}

double sampling_deviation(double m0, double n0, double eps) {
  const double block = m0 + n0;
  return std::sqrt((block + 2.0) / (m0 * block) * (std::log(2.0) - 2.0 * std::log(eps)));
}

double tn_deviation(double m0, double n0, double eps_prime) {
  return std::sqrt((n0 + m0) / (n0 * m0) * (m0 + 1.0) / m0 * log_two_over(eps_prime));
}

DerivedSizes derive_sizes(const ProtocolParams& params) {
  params.validate();
  const double n = static_cast<double>(params.n_signals);
  const double px = params.px;

  DerivedSizes s{};
  s.n_signals = params.n_signals;
  s.beta = std::sqrt(log_two_over(params.eps_abort) / (2.0 * n));

  const double sift_rate = 1.0 - 2.0 * px * (1.0 - px);
  const double a = sift_rate - s.beta;
  s.n_tilde = n * a;
  if (!(s.n_tilde > 0.0))
    throw infeasible_error("derive_sizes: sifted block n_tilde <= 0 (N too small)");

  s.beta_prime = std::sqrt(log_two_over(params.eps_abort) / (2.0 * s.n_tilde));
  const double x_share = px * px / a;
  s.m0_real = s.n_tilde * (x_share - s.beta_prime);
  s.n0_real = s.n_tilde * (1.0 - x_share - s.beta_prime);
  if (!(s.m0_real > 0.0))
    throw infeasible_error("derive_sizes: test block m0 <= 0 (N too small)");
  if (!(s.n0_real > 0.0))
    throw infeasible_error("derive_sizes: key block n0 <= 0 (N too small)");

  s.m0 = static_cast<std::uint64_t>(std::floor(s.m0_real));
  s.n0 = static_cast<std::uint64_t>(std::floor(s.n0_real));
  s.block_size = s.m0 + s.n0;

  // Deviation terms use the pre-floor reals; the difference is below
  // reporting precision and keeps parameter sweeps step-free.
  s.delta = sampling_deviation(s.m0_real, s.n0_real, params.eps);
  s.mu = tn_deviation(s.m0_real, s.n0_real, params.eps_prime);
  return s;
}

double failure_probability(double eps, std::uint32_t stn_count) {
  if (!(eps >= 0.0 && eps <= 1.0))
    throw std::domain_error("failure_probability: eps outside [0,1]");
  const double p = static_cast<double>(stn_count);
  const double raw = 2.0 * std::cbrt(eps) + 2.0 * (p + 1.0) * eps;
  return raw > 1.0 ? 1.0 : raw;
}

double failure_probability(const ProtocolParams& params) {
  return failure_probability(params.eps, params.stn_count);
}

double pa_epsilon(double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::domain_error("pa_epsilon: eps outside [0,1)");
  return 9.0 * eps + 4.0 * std::sqrt(eps);
}

}  // namespace stnkey
