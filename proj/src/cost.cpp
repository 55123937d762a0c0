#include "stnkey/cost.hpp"

#include <cmath>

#include "stnkey/errors.hpp"
#include "stnkey/rates.hpp"

namespace stnkey {

namespace {

double tn_length(const ProtocolParams& params) {
  const DerivedSizes sizes = derive_sizes(params);
  return tn_key_length(sizes, params.link_noise, params.eps_prime).key_length;
}

double stn_length(const ProtocolParams& params) {
  const DerivedSizes sizes = derive_sizes(params);
  const double w = stn_total_noise(params.link_noise, params.stn_count);
  return stn_key_length(sizes, w, params.eps).key_length;
}

}  // namespace

double cost_tn(const ProtocolParams& params, const CostModel& model) {
  const double l = tn_length(params);
  if (!(l > 0.0)) throw infeasible_error("cost_tn: baseline key length <= 0");
  const double n = static_cast<double>(params.n_signals);
  const double links = 2.0 * params.stn_count + 2.0;
  return links * model.ec_cost(n, params.link_noise) / l;
}

double refresh_interval(const ProtocolParams& params, const CostModel& model) {
  const double n = static_cast<double>(params.n_signals);
  const double c = model.auth_cost(n);
  const double pool = model.initial_pool ? *model.initial_pool : tn_length(params);
  if (!(pool > c))
    throw pool_exhausted_error("refresh_interval: pool does not cover one establishment");
  return (pool - c) / c;
}

double cost_stn(const ProtocolParams& params, const CostModel& model) {
  const double l = stn_length(params);
  if (!(l > 0.0)) throw infeasible_error("cost_stn: chain key length <= 0");
  const double j = refresh_interval(params, model);
  if (j < 1.0) throw infeasible_error("cost_stn: refresh interval J < 1");
  const double n = static_cast<double>(params.n_signals);
  const double w = stn_total_noise(params.link_noise, params.stn_count);
  const double links = 2.0 * params.stn_count + 2.0;
  return (2.0 * j * model.ec_cost(n, w) + links * model.ec_cost(n, params.link_noise)) /
         (j * l);
}

CostResult evaluate_costs(const ProtocolParams& params, const CostModel& model) {
  CostResult r;
  try {
    r.cost_tn = cost_tn(params, model);
    r.tn_feasible = true;
  } catch (const infeasible_error&) {
  }
  try {
    r.refresh_interval = refresh_interval(params, model);
  } catch (const infeasible_error&) {
  }
  try {
    r.cost_stn = cost_stn(params, model);
    r.stn_feasible = true;
  } catch (const infeasible_error&) {
  }
  return r;
}

std::optional<double> cost_crossover(const ProtocolParams& base,
                                     std::span<const double> q_grid,
                                     const CostModel& model) {
  for (double q : q_grid) {
    ProtocolParams p = base;
    p.link_noise = q;
    const CostResult r = evaluate_costs(p, model);
    if (!r.stn_feasible) return q;
    if (r.tn_feasible && *r.cost_stn >= *r.cost_tn) return q;
  }
  return std::nullopt;
}

}  // namespace stnkey
