#include "stnkey/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "stnkey/cost.hpp"
#include "stnkey/errors.hpp"
#include "stnkey/parallel.hpp"
#include "stnkey/rates.hpp"
#include "stnkey/rng.hpp"
#include "stnkey/sampling.hpp"
#include "stnkey/stats.hpp"
#include "stnkey/svg.hpp"
#include "stnkey/transcript_io.hpp"

namespace stnkey {

GridSpec GridSpec::parse(std::string_view text) {
  GridSpec g;
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t colon = text.find(':', pos);
    if (colon == std::string_view::npos) {
      parts.emplace_back(text.substr(pos));
      break;
    }
    parts.emplace_back(text.substr(pos, colon - pos));
    pos = colon + 1;
  }
  if (parts.size() != 4) throw std::invalid_argument("grid: expected start:stop:points:lin|log");
  try {
    g.start = std::stod(parts[0]);
    g.stop = std::stod(parts[1]);
    g.points = static_cast<std::size_t>(std::stoul(parts[2]));
  } catch (const std::exception&) {
    throw std::invalid_argument("grid: unparsable numeric field");
  }
  if (parts[3] == "log")
    g.log = true;
  else if (parts[3] != "lin")
    throw std::invalid_argument("grid: scale must be lin or log");
  if (g.points == 0) throw std::invalid_argument("grid: empty (points = 0)");
  if (g.log && !(g.start > 0.0 && g.stop > 0.0))
    throw std::invalid_argument("grid: log scale needs positive endpoints");
  return g;
}

std::vector<double> GridSpec::values() const {
  std::vector<double> v;
  v.reserve(points);
  if (points == 1) {
    v.push_back(start);
    return v;
  }
  for (std::size_t i = 0; i < points; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(points - 1);
    v.push_back(log ? start * std::pow(stop / start, f) : start + (stop - start) * f);
  }
  return v;
}

namespace {

constexpr char kPaNote[] =
    "eps_pa = 9*eps + 4*sqrt(eps); its sqrt smoothing term intentionally uses a "
    "different exponent than the cbrt term in eps_fail";
constexpr char kAbortNote[] =
    "abort budget 2*(p+1)*eps_abort is reported separately from eps_fail";

ProtocolParams params_for(const RunConfig& cfg, double n, std::uint32_t p, double q,
                          double px) {
  ProtocolParams out;
  out.n_signals = n < 1.0 ? 0 : static_cast<std::uint64_t>(std::llround(n));
  out.stn_count = p;
  out.link_noise = q;
  out.px = px;
  out.eps = cfg.eps;
  out.eps_abort = cfg.eps_abort;
  out.eps_prime = cfg.eps_prime;
  return out;
}

nlohmann::json config_json(const RunConfig& cfg, const std::string& command) {
  nlohmann::json j;
  j["command"] = command;
  j["N"] = cfg.n_list;
  j["p"] = cfg.p_list;
  j["Q"] = cfg.q_list;
  j["px"] = cfg.px_list;
  j["eps"] = cfg.eps;
  j["eps_abort"] = cfg.eps_abort;
  j["eps_prime"] = cfg.eps_prime;
  j["ec_efficiency"] = cfg.ec_efficiency;
  j["seed"] = cfg.seed;
  j["trials"] = cfg.trials;
  j["threads"] = cfg.threads;
  if (cfg.grid) {
    j["grid"] = {{"start", cfg.grid->start},
                 {"stop", cfg.grid->stop},
                 {"points", cfg.grid->points},
                 {"scale", cfg.grid->log ? "log" : "lin"}};
    j["sweep"] = cfg.sweep_var;
  }
  nlohmann::json budgets = nlohmann::json::array();
  for (std::uint32_t p : cfg.p_list) {
    budgets.push_back({{"p", p},
                       {"eps_fail", failure_probability(cfg.eps, p)},
                       {"abort_budget", 2.0 * (p + 1.0) * cfg.eps_abort}});
  }
  j["failure_budgets"] = budgets;
  j["eps_pa"] = pa_epsilon(cfg.eps);
  j["notes"] = {kPaNote, kAbortNote};
  return j;
}

// Applies the grid to the list selected by sweep_var.
void apply_grid(const RunConfig& cfg, std::vector<double>& n_list,
                std::vector<double>& q_list, std::vector<double>& px_list) {
  if (!cfg.grid) return;
  const auto values = cfg.grid->values();
  if (cfg.sweep_var == "N")
    n_list = values;
  else if (cfg.sweep_var == "Q")
    q_list = values;
  else if (cfg.sweep_var == "px")
    px_list = values;
  else
    throw std::invalid_argument("sweep: variable must be N, Q or px");
}

struct RowResult {
  std::vector<std::string> cells;
  bool feasible = false;
  bool qualifies = false;  // cost crossover predicate
};

}  // namespace

SweepOutput run_keyrate(const RunConfig& cfg) {
  std::vector<double> n_list = cfg.n_list, q_list = cfg.q_list, px_list = cfg.px_list;
  apply_grid(cfg, n_list, q_list, px_list);

  struct Point {
    double n, q, px;
    std::uint32_t p;
  };
  std::vector<Point> points;
  for (double n : n_list)
    for (std::uint32_t p : cfg.p_list)
      for (double q : q_list)
        for (double px : px_list) points.push_back({n, q, px, p});
  if (points.empty()) throw std::invalid_argument("keyrate: empty sweep");

  std::vector<RowResult> results(points.size());
  parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
    const Point& pt = points[i];
    const ProtocolParams params = params_for(cfg, pt.n, pt.p, pt.q, pt.px);
    RowResult& r = results[i];
    std::string reason;
    DerivedSizes sizes{};
    double w_total = 0.0;
    KeyRateResult stn{}, tn{};
    bool have_sizes = false;
    try {
      params.validate();
      w_total = stn_total_noise(pt.q, pt.p);
      sizes = derive_sizes(params);
      have_sizes = true;
      stn = stn_key_length(sizes, w_total, cfg.eps, cfg.ec_efficiency);
      tn = tn_key_length(sizes, pt.q, cfg.eps_prime, cfg.ec_efficiency);
      if (!stn.feasible) reason = "stn-zero-key";
      if (!tn.feasible) reason += reason.empty() ? "tn-zero-key" : ";tn-zero-key";
    } catch (const infeasible_error&) {
      reason = "sizes-infeasible";
    } catch (const std::domain_error&) {
      reason = "invalid-params";
    }
    r.feasible = stn.feasible || tn.feasible;
    r.cells = {format_u64(params.n_signals),
               format_u64(pt.p),
               format_double(pt.q),
               format_double(pt.px),
               format_double(cfg.eps),
               format_double(cfg.eps_abort),
               format_double(cfg.eps_prime),
               format_double(have_sizes ? sizes.beta : 0.0),
               format_double(have_sizes ? sizes.beta_prime : 0.0),
               format_u64(have_sizes ? sizes.n0 : 0),
               format_u64(have_sizes ? sizes.m0 : 0),
               format_double(have_sizes ? sizes.delta : 0.0),
               format_double(have_sizes ? sizes.mu : 0.0),
               format_double(w_total),
               format_u64(stn.key_length_clamped),
               format_u64(tn.key_length_clamped),
               format_double(stn.per_signal_rate),
               format_double(tn.per_signal_rate),
               reason};
  });

  SweepOutput out;
  out.table.header = {"N",     "p",          "Q",     "p_X",   "eps",   "eps_abort",
                      "eps_prime", "beta",  "beta_prime", "n0", "m0",    "delta",
                      "mu",    "w_total",    "l_stn", "l_tn",  "rate_stn", "rate_tn",
                      "reason"};
  bool any_feasible = false;
  for (auto& r : results) {
    any_feasible |= r.feasible;
    out.table.rows.push_back(std::move(r.cells));
  }
  out.status = any_feasible ? SweepStatus::ok : SweepStatus::infeasible_everywhere;
  out.meta_json = config_json(cfg, "keyrate").dump(2);
  return out;
}

SweepOutput run_cost(const RunConfig& cfg) {
  std::vector<double> n_list = cfg.n_list, q_list = cfg.q_list, px_list = cfg.px_list;
  apply_grid(cfg, n_list, q_list, px_list);
  const double px = px_list.front();

  struct Point {
    double n, q;
    std::uint32_t p;
  };
  std::vector<Point> points;
  for (double n : n_list)
    for (std::uint32_t p : cfg.p_list)
      for (double q : q_list) points.push_back({n, q, p});
  if (points.empty()) throw std::invalid_argument("cost: empty sweep");

  std::vector<RowResult> results(points.size());
  parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
    const Point& pt = points[i];
    const ProtocolParams params = params_for(cfg, pt.n, pt.p, pt.q, px);
    RowResult& r = results[i];
    std::string reason;
    CostResult cost{};
    double c_n = 0.0;
    try {
      params.validate();
      c_n = std::log2(static_cast<double>(params.n_signals));
      cost = evaluate_costs(params);
      if (!cost.tn_feasible) reason = "tn-infeasible";
      if (!cost.stn_feasible) reason += reason.empty() ? "stn-infeasible" : ";stn-infeasible";
      if (!cost.refresh_interval)
        reason += reason.empty() ? "pool-exhausted" : ";pool-exhausted";
    } catch (const std::domain_error&) {
      reason = "invalid-params";
    }
    r.feasible = cost.tn_feasible || cost.stn_feasible;
    r.qualifies = !cost.stn_feasible ||
                  (cost.tn_feasible && *cost.cost_stn >= *cost.cost_tn);
    r.cells = {format_u64(params.n_signals),
               format_u64(pt.p),
               format_double(pt.q),
               format_double(cost.refresh_interval ? *cost.refresh_interval : 0.0),
               format_double(c_n),
               format_double(cost.cost_stn ? *cost.cost_stn : 0.0),
               format_double(cost.cost_tn ? *cost.cost_tn : 0.0),
               "0",  // crossover marker filled below
               reason};
  });

  // Mark the first qualifying row inside each (N, p) group, in row order.
  std::map<std::pair<std::string, std::string>, bool> seen;
  for (auto& r : results) {
    const auto key = std::make_pair(r.cells[0], r.cells[1]);
    if (!seen[key] && r.qualifies) {
      r.cells[7] = "1";
      seen[key] = true;
    }
  }

  SweepOutput out;
  out.table.header = {"N", "p", "Q", "J", "cN", "cost_stn", "cost_tn", "crossover", "reason"};
  bool any = false;
  for (auto& r : results) {
    any |= r.feasible;
    out.table.rows.push_back(std::move(r.cells));
  }
  out.status = any ? SweepStatus::ok : SweepStatus::infeasible_everywhere;
  out.meta_json = config_json(cfg, "cost").dump(2);
  return out;
}

SweepOutput run_noise(const RunConfig& cfg) {
  std::vector<double> n_list = cfg.n_list, q_list = cfg.q_list, px_list = cfg.px_list;
  apply_grid(cfg, n_list, q_list, px_list);

  SweepOutput out;
  out.table.header = {"Q", "p", "w_total"};
  for (double q : q_list)
    for (std::uint32_t p : cfg.p_list)
      out.table.rows.push_back(
          {format_double(q), format_u64(p), format_double(stn_total_noise(q, p))});
  if (out.table.rows.empty()) throw std::invalid_argument("noise: empty sweep");
  out.meta_json = config_json(cfg, "noise").dump(2);
  return out;
}

SweepOutput run_simulate(const RunConfig& cfg) {
  SimConfig sim;
  sim.params = params_for(cfg, cfg.n_list.front(), cfg.p_list.front(),
                          cfg.q_list.front(), cfg.px_list.front());
  sim.seed = cfg.seed;
  sim.trials = cfg.trials;
  sim.abort_policy = cfg.abort_policy;
  sim.validate();

  const double n = static_cast<double>(sim.params.n_signals);
  const double w_expected = stn_total_noise(sim.params.link_noise, sim.params.stn_count);

  // Closed-form reference at the nominal block sizes, when they exist.
  double l_closed = 0.0;
  double delta_nominal = 0.0;
  try {
    const DerivedSizes sizes = derive_sizes(sim.params);
    delta_nominal = sizes.delta;
    l_closed = static_cast<double>(
        stn_key_length(sizes, w_expected, cfg.eps, cfg.ec_efficiency).key_length_clamped);
  } catch (const infeasible_error&) {
  }

  struct TrialResult {
    std::vector<std::string> cells;
    bool aborted = false;
    double w_obs = 0.0, sift = 0.0, l_realized = 0.0;
    std::string transcript_json;
  };
  std::vector<TrialResult> results(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t i) {
    const ChainTranscript t = simulate_chain(sim, i);
    TrialResult& r = results[i];
    r.aborted = t.aborted && cfg.abort_policy == AbortPolicy::strict;
    double sift_sum = 0.0;
    for (const auto& l : t.links) sift_sum += static_cast<double>(l.sifted_len) / n;
    r.sift = sift_sum / static_cast<double>(t.links.size());
    r.w_obs = t.w_obs;
    if (!r.aborted) {
      const KeyRateResult rate = stn_key_length_from_counts(
          t.n0_obs, t.m0_obs, sim.params.n_signals, t.w_obs, cfg.eps, cfg.ec_efficiency);
      r.l_realized = static_cast<double>(rate.key_length_clamped);
    }
    r.cells = {format_u64(t.trial),
               r.aborted ? "1" : "0",
               format_u64(t.aborted ? static_cast<std::uint64_t>(t.abort_link) + 1 : 0),
               t.abort_check.empty() ? "none" : t.abort_check,
               format_double(r.sift),
               format_u64(t.n0_obs),
               format_u64(t.m0_obs),
               format_double(t.w_obs),
               format_double(r.l_realized),
               format_double(l_closed)};
    if (cfg.transcripts) r.transcript_json = transcript_to_json(t);
  });

  SweepOutput out;
  out.table.header = {"trial", "aborted", "abort_link", "abort_check", "sift_fraction",
                      "n0_obs", "m0_obs",  "w_obs",      "l_realized",  "l_closed_form"};
  RunningStats w_stats, sift_stats, l_stats;
  std::uint64_t aborts = 0;
  for (auto& r : results) {
    out.table.rows.push_back(std::move(r.cells));
    if (cfg.transcripts) out.transcripts.push_back(std::move(r.transcript_json));
    sift_stats.add(r.sift);
    if (r.aborted) {
      ++aborts;
    } else {
      w_stats.add(r.w_obs);
      l_stats.add(r.l_realized);
    }
  }

  CsvTable summary;
  summary.header = {"trials",       "aborted_trials", "abort_rate",    "w_obs_mean",
                    "w_obs_std",    "w_expected",     "sift_mean",     "sift_std",
                    "l_realized_mean", "l_closed_form", "delta_nominal"};
  summary.rows.push_back(
      {format_u64(cfg.trials), format_u64(aborts),
       format_double(static_cast<double>(aborts) / static_cast<double>(cfg.trials)),
       format_double(w_stats.mean()), format_double(w_stats.stddev()),
       format_double(w_expected), format_double(sift_stats.mean()),
       format_double(sift_stats.stddev()), format_double(l_stats.mean()),
       format_double(l_closed), format_double(delta_nominal)});
  out.summary = std::move(summary);
  out.meta_json = config_json(cfg, "simulate").dump(2);
  return out;
}

SweepOutput run_sample_audit(const RunConfig& cfg) {
  std::vector<double> deltas;
  if (cfg.grid && (cfg.sweep_var.empty() || cfg.sweep_var == "delta"))
    deltas = cfg.grid->values();
  else
    deltas = GridSpec{0.05, 0.5, 10, false}.values();

  struct Point {
    std::uint64_t n, m;
    double delta;
  };
  std::vector<Point> points;
  for (double n_real : cfg.n_list) {
    const auto n = static_cast<std::uint64_t>(std::llround(n_real));
    if (n < 2) throw std::invalid_argument("sample-audit: N must be >= 2");
    std::vector<std::uint64_t> ms = cfg.m_list;
    if (ms.empty())
      for (std::uint64_t m = 1; m <= n / 2; ++m) ms.push_back(m);
    for (std::uint64_t m : ms) {
      if (m == 0 || m > n / 2)
        throw guard_error("sample-audit: m must satisfy 0 < m <= N/2");
      for (double d : deltas) points.push_back({n, m, d});
    }
  }
  if (points.empty()) throw std::invalid_argument("sample-audit: empty sweep");
  for (const Point& pt : points) {
    // Instances beyond the enumeration guard fall back to Monte Carlo, which
    // needs a sane trial count; reject up front rather than mid-parallel-loop.
    if (binomial_or_max(pt.n, pt.m) > 100'000'000ULL && cfg.trials < 1000)
      throw std::invalid_argument("sample-audit: Monte Carlo rows need >= 1000 trials");
  }

  std::vector<RowResult> results(points.size());
  parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
    const Point& pt = points[i];
    const double bound = analytic_failure_bound(pt.n, pt.m, pt.delta);
    std::string method;
    double estimate, lo, hi;
    bool violation;
    if (binomial_or_max(pt.n, pt.m) <= 100'000'000ULL) {
      method = "exact";
      estimate = worst_case_failure(pt.n, pt.m, pt.delta, 1);
      lo = hi = estimate;
      violation = estimate > bound;
    } else {
      method = "mc";
      // Balanced-weight fold: the hardest class for the weight-symmetric test.
      BitString fold(pt.n);
      for (std::uint64_t b = 0; b < pt.n / 2; ++b) fold.set_bit(b, true);
      std::vector<BitString> segments{fold, BitString(pt.n)};
      const SamplingInstance inst(std::move(segments), pt.delta, pt.m);
      const McEstimate mc = mc_failure_estimate(inst, cfg.trials, mix_seed(cfg.seed, i));
      estimate = mc.fraction;
      lo = mc.interval.lower;
      hi = mc.interval.upper;
      // A sampled row breaches the bound only when even the charitable end
      // of its 99% interval sits above it; the upper end is resolution-bound
      // for rows whose true failure probability is far below 1/trials.
      violation = lo > bound;
    }
    results[i].cells = {format_u64(pt.n),      format_u64(pt.m),
                        format_double(pt.delta), method,
                        format_double(estimate), format_double(lo),
                        format_double(hi),       format_double(bound),
                        violation ? "1" : "0"};
  });

  SweepOutput out;
  out.table.header = {"N",        "m",           "delta", "method", "estimate",
                      "wilson_lower", "wilson_upper", "bound", "violation"};
  for (auto& r : results) out.table.rows.push_back(std::move(r.cells));
  out.meta_json = config_json(cfg, "sample-audit").dump(2);
  return out;
}

namespace {

std::size_t distinct_count(const CsvTable& t, const std::string& col) {
  const std::size_t i = t.column(col);
  std::vector<std::string> seen;
  for (const auto& row : t.rows)
    if (std::find(seen.begin(), seen.end(), row[i]) == seen.end()) seen.push_back(row[i]);
  return seen.size();
}

// The x axis follows whichever parameter actually varies in the table.
std::pair<std::string, bool> choose_x(const CsvTable& t, bool has_px) {
  if (distinct_count(t, "N") > 1) return {"N", true};
  if (distinct_count(t, "Q") > 1) return {"Q", false};
  if (has_px && distinct_count(t, "p_X") > 1) return {"p_X", false};
  return {"N", true};
}

// Series keyed by a column's value, points (x_col, y_col), ordered by rows.
std::vector<PlotSeries> series_by_group(const CsvTable& t, const std::string& x_col,
                                        const std::string& y_col,
                                        const std::string& group_col,
                                        const std::string& label_prefix) {
  const std::size_t xi = t.column(x_col), yi = t.column(y_col), gi = t.column(group_col);
  std::vector<PlotSeries> series;
  std::map<std::string, std::size_t> index;
  for (const auto& row : t.rows) {
    const std::string& g = row[gi];
    if (!index.count(g)) {
      index[g] = series.size();
      series.push_back({label_prefix + g, {}});
    }
    series[index[g]].points.emplace_back(std::stod(row[xi]), std::stod(row[yi]));
  }
  return series;
}

}  // namespace

std::string keyrate_plot_svg(const CsvTable& table) {
  const auto [x_col, log_x] = choose_x(table, true);
  auto stn = series_by_group(table, x_col, "l_stn", "p", "chain p=");
  const auto tn = series_by_group(table, x_col, "l_tn", "p", "single-link p=");
  if (!tn.empty()) {
    auto first = tn.front();
    first.label = "single-link";
    stn.push_back(std::move(first));  // baseline is p-independent; plot once
  }
  PlotSpec spec;
  spec.title = "Final key length";
  spec.x_label = log_x ? "log10 " + x_col : x_col;
  spec.y_label = "log10 key bits";
  spec.log_x = log_x;
  spec.log_y = true;
  return render_line_plot(spec, stn);
}

std::string cost_plot_svg(const CsvTable& table) {
  const auto [x_col, log_x] = choose_x(table, false);
  auto stn = series_by_group(table, x_col, "cost_stn", "p", "chain p=");
  auto tn = series_by_group(table, x_col, "cost_tn", "p", "single-link p=");
  for (auto& s : tn) stn.push_back(std::move(s));
  PlotSpec spec;
  spec.title = "Cost per secret key bit";
  spec.x_label = log_x ? "log10 " + x_col : x_col;
  spec.y_label = "log10 cost";
  spec.log_x = log_x;
  spec.log_y = true;
  return render_line_plot(spec, stn);
}

}  // namespace stnkey
