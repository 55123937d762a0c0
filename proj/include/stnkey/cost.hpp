#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <span>

#include "stnkey/params.hpp"

namespace stnkey {

/// Pluggable cost model for the per-secret-bit comparison. Defaults follow the
/// evaluation setup: EC(N, noise) = N, c(N) = log2 N, and an authentication
/// pool seeded with one single-link key's worth of bits.
struct CostModel {
  /// Cost of one error-correction + privacy-amplification pass over N signals
  /// at the given raw-key noise. The default ignores noise.
  std::function<double(double n_signals, double noise)> ec_cost =
      [](double n, double) { return n; };
  /// Authentication key bits consumed per establishment.
  std::function<double(double n_signals)> auth_cost =
      [](double n) { return std::log2(n); };
  /// Initial authentication pool k; defaults to the single-link key length
  /// computed from the same parameters.
  std::optional<double> initial_pool;
};

struct CostResult {
  std::optional<double> cost_tn;
  std::optional<double> cost_stn;
  std::optional<double> refresh_interval;  ///< J, establishments per pool refill
  bool tn_feasible = false;
  bool stn_feasible = false;  ///< J >= 1 and a positive chain key
};

/// (2p+2) EC(N,Q) / l_TN. Throws infeasible_error when l_TN <= 0.
double cost_tn(const ProtocolParams& params, const CostModel& model = {});

/// J = (k - c(N)) / c(N). Throws pool_exhausted_error when k <= c(N).
double refresh_interval(const ProtocolParams& params, const CostModel& model = {});

/// (2J EC(N, w) + (2p+2) EC(N,Q)) / (J l_STN) with w the composed chain noise.
/// Throws infeasible_error when l_STN <= 0 or J < 1.
double cost_stn(const ProtocolParams& params, const CostModel& model = {});

/// All of the above with infeasibility reported through flags instead of throws.
CostResult evaluate_costs(const ProtocolParams& params, const CostModel& model = {});

/// Smallest grid noise where the chain stops beating the baseline: the first
/// Q with the chain infeasible, or both feasible and C_STN >= C_TN. Returns
/// nullopt when the chain wins everywhere on the grid.
std::optional<double> cost_crossover(const ProtocolParams& base,
                                     std::span<const double> q_grid,
                                     const CostModel& model = {});

}  // namespace stnkey
