// Command-line front end: closed-form key lengths and costs for chains of
// parity-broadcast nodes, a seeded chain simulator, and a sampling-bound
// audit. Emits CSV (and optional SVG) into an output directory.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stnkey/errors.hpp"
#include "stnkey/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitGuard = 4;

struct CliValues {
  std::vector<double> n_list;
  std::vector<std::uint32_t> p_list;
  std::vector<double> q_list;
  std::vector<double> px_list;
  double eps = 1e-30;
  double eps_abort = 1e-10;
  double eps_prime = 1e-10;
  double ec_eff = 1.0;
  std::string grid;
  std::string sweep;
  std::uint64_t seed = 1;
  std::uint64_t trials = 0;
  std::vector<std::uint64_t> m_list;
  std::string out_dir = "out";
  bool plot = false;
  bool transcripts = false;
  unsigned threads = 1;
  std::string abort_policy = "strict";
};

struct OptionSet {
  CLI::Option* n = nullptr;
  CLI::Option* p = nullptr;
  CLI::Option* q = nullptr;
  CLI::Option* px = nullptr;
  CLI::Option* eps = nullptr;
  CLI::Option* eps_abort = nullptr;
  CLI::Option* eps_prime = nullptr;
  CLI::Option* ec_eff = nullptr;
  CLI::Option* grid = nullptr;
  CLI::Option* sweep = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* trials = nullptr;
  CLI::Option* m = nullptr;
  CLI::Option* out = nullptr;
  CLI::Option* plot = nullptr;
  CLI::Option* transcripts = nullptr;
  CLI::Option* threads = nullptr;
  CLI::Option* abort_policy = nullptr;
};

OptionSet add_common_options(CLI::App* cmd, CliValues& v) {
  OptionSet o;
  o.n = cmd->add_option("--N", v.n_list, "signal count(s) per establishment")
            ->delimiter(',');
  o.p = cmd->add_option("--p", v.p_list, "intermediate node count(s)")->delimiter(',');
  o.q = cmd->add_option("--Q", v.q_list, "link-level noise value(s)")->delimiter(',');
  o.px = cmd->add_option("--px", v.px_list, "X-basis bias value(s)")->delimiter(',');
  o.eps = cmd->add_option("--eps", v.eps, "sampling/security parameter");
  o.eps_abort = cmd->add_option("--eps-abort", v.eps_abort, "abort budget");
  o.eps_prime = cmd->add_option("--eps-prime", v.eps_prime, "single-link baseline budget");
  o.ec_eff = cmd->add_option("--ec-eff", v.ec_eff, "error-correction leakage efficiency");
  o.grid = cmd->add_option("--grid", v.grid, "sweep grid start:stop:points:lin|log");
  o.sweep = cmd->add_option("--sweep", v.sweep, "swept variable (N, Q, px; delta for audits)");
  o.seed = cmd->add_option("--seed", v.seed, "master seed");
  o.trials = cmd->add_option("--trials", v.trials, "Monte Carlo trials");
  o.m = cmd->add_option("--m", v.m_list, "sample size(s) for the audit")->delimiter(',');
  o.out = cmd->add_option("--out", v.out_dir, "output directory");
  o.plot = cmd->add_flag("--plot", v.plot, "emit SVG plots");
  o.transcripts = cmd->add_flag("--transcripts", v.transcripts, "write per-trial JSON");
  o.threads = cmd->add_option("--threads", v.threads, "worker threads");
  o.abort_policy = cmd->add_option("--abort-policy", v.abort_policy, "strict|observe");
  return o;
}

// Flags override config-file values override built-in defaults.
void apply_config(const nlohmann::json& cfg, const OptionSet& o, CliValues& v) {
  const auto list_d = [&](const char* key, std::vector<double>& dst, CLI::Option* opt) {
    if (opt->count() > 0 || !cfg.contains(key)) return;
    dst.clear();
    if (cfg[key].is_array())
      for (const auto& e : cfg[key]) dst.push_back(e.get<double>());
    else
      dst.push_back(cfg[key].get<double>());
  };
  list_d("N", v.n_list, o.n);
  list_d("Q", v.q_list, o.q);
  list_d("px", v.px_list, o.px);
  if (o.p->count() == 0 && cfg.contains("p")) {
    v.p_list.clear();
    if (cfg["p"].is_array())
      for (const auto& e : cfg["p"]) v.p_list.push_back(e.get<std::uint32_t>());
    else
      v.p_list.push_back(cfg["p"].get<std::uint32_t>());
  }
  if (o.m->count() == 0 && cfg.contains("m")) {
    v.m_list.clear();
    if (cfg["m"].is_array())
      for (const auto& e : cfg["m"]) v.m_list.push_back(e.get<std::uint64_t>());
    else
      v.m_list.push_back(cfg["m"].get<std::uint64_t>());
  }
  const auto scalar = [&](const char* key, auto& dst, CLI::Option* opt) {
    if (opt->count() == 0 && cfg.contains(key))
      dst = cfg[key].get<std::remove_reference_t<decltype(dst)>>();
  };
  scalar("eps", v.eps, o.eps);
  scalar("eps-abort", v.eps_abort, o.eps_abort);
  scalar("eps-prime", v.eps_prime, o.eps_prime);
  scalar("ec-eff", v.ec_eff, o.ec_eff);
  scalar("grid", v.grid, o.grid);
  scalar("sweep", v.sweep, o.sweep);
  scalar("seed", v.seed, o.seed);
  scalar("trials", v.trials, o.trials);
  scalar("out", v.out_dir, o.out);
  scalar("plot", v.plot, o.plot);
  scalar("transcripts", v.transcripts, o.transcripts);
  scalar("threads", v.threads, o.threads);
  scalar("abort-policy", v.abort_policy, o.abort_policy);
}

stnkey::RunConfig to_run_config(const CliValues& v, const std::string& default_sweep,
                                std::uint64_t default_trials) {
  stnkey::RunConfig cfg;
  if (!v.n_list.empty()) cfg.n_list = v.n_list;
  if (!v.p_list.empty()) cfg.p_list = v.p_list;
  if (!v.q_list.empty()) cfg.q_list = v.q_list;
  if (!v.px_list.empty()) cfg.px_list = v.px_list;
  cfg.eps = v.eps;
  cfg.eps_abort = v.eps_abort;
  cfg.eps_prime = v.eps_prime;
  cfg.ec_efficiency = v.ec_eff;
  if (!v.grid.empty()) cfg.grid = stnkey::GridSpec::parse(v.grid);
  cfg.sweep_var = v.sweep.empty() ? default_sweep : v.sweep;
  cfg.seed = v.seed;
  cfg.trials = v.trials == 0 ? default_trials : v.trials;
  cfg.m_list = v.m_list;
  cfg.plot = v.plot;
  cfg.transcripts = v.transcripts;
  cfg.threads = v.threads;
  if (v.abort_policy == "strict")
    cfg.abort_policy = stnkey::AbortPolicy::strict;
  else if (v.abort_policy == "observe")
    cfg.abort_policy = stnkey::AbortPolicy::observe_only;
  else
    throw std::invalid_argument("abort-policy must be strict or observe");
  return cfg;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

int finish(const stnkey::SweepOutput& result, const CliValues& v, const std::string& name,
           const std::string& plot_svg = "") {
  const std::filesystem::path dir(v.out_dir);
  std::filesystem::create_directories(dir);
  write_file(dir / (name + ".csv"), result.table.to_string());
  if (result.summary) write_file(dir / (name + "_summary.csv"), result.summary->to_string());
  write_file(dir / "meta.json", result.meta_json + "\n");
  if (!result.transcripts.empty()) {
    std::filesystem::create_directories(dir / "transcripts");
    for (std::size_t i = 0; i < result.transcripts.size(); ++i) {
      char file[32];
      std::snprintf(file, sizeof(file), "trial_%06zu.json", i);
      write_file(dir / "transcripts" / file, result.transcripts[i] + "\n");
    }
  }
  if (!plot_svg.empty()) write_file(dir / (name + ".svg"), plot_svg);
  if (result.status == stnkey::SweepStatus::infeasible_everywhere) {
    std::cerr << name << ": every sweep point infeasible\n";
    return kExitInfeasible;
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-size key lengths, costs and simulation for chains of "
               "parity-broadcast trusted nodes"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags take precedence)")
      ->check(CLI::ExistingFile);

  CliValues v;
  auto* keyrate = app.add_subcommand("keyrate", "closed-form chain and baseline key lengths");
  auto* cost = app.add_subcommand("cost", "cost per secret key bit for both architectures");
  auto* simulate = app.add_subcommand("simulate", "seeded Monte Carlo chain protocol runs");
  auto* audit = app.add_subcommand("sample-audit", "sampling failure audit against the bound");
  auto* noise = app.add_subcommand("noise", "total-noise composition table");
  for (auto* sub : {keyrate, cost, simulate, audit, noise}) sub->fallthrough();
  const OptionSet o_keyrate = add_common_options(keyrate, v);
  const OptionSet o_cost = add_common_options(cost, v);
  const OptionSet o_sim = add_common_options(simulate, v);
  const OptionSet o_audit = add_common_options(audit, v);
  const OptionSet o_noise = add_common_options(noise, v);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    nlohmann::json cfg = nlohmann::json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      in >> cfg;
    }

    if (keyrate->parsed()) {
      apply_config(cfg, o_keyrate, v);
      const auto rc = to_run_config(v, "N", 100);
      const auto result = stnkey::run_keyrate(rc);
      // Plots render from the CSV text exactly as written to disk.
      const std::string svg =
          rc.plot ? stnkey::keyrate_plot_svg(stnkey::CsvTable::parse(result.table.to_string()))
                  : "";
      return finish(result, v, "keyrate", svg);
    }
    if (cost->parsed()) {
      apply_config(cfg, o_cost, v);
      const auto rc = to_run_config(v, "N", 100);
      const auto result = stnkey::run_cost(rc);
      const std::string svg =
          rc.plot ? stnkey::cost_plot_svg(stnkey::CsvTable::parse(result.table.to_string()))
                  : "";
      return finish(result, v, "cost", svg);
    }
    if (simulate->parsed()) {
      apply_config(cfg, o_sim, v);
      const auto rc = to_run_config(v, "N", 100);
      const auto result = stnkey::run_simulate(rc);
      return finish(result, v, "simulate", "");
    }
    if (audit->parsed()) {
      apply_config(cfg, o_audit, v);
      const auto rc = to_run_config(v, "delta", 100'000);
      const auto result = stnkey::run_sample_audit(rc);
      return finish(result, v, "sample_audit", "");
    }
    if (noise->parsed()) {
      apply_config(cfg, o_noise, v);
      const auto rc = to_run_config(v, "Q", 100);
      const auto result = stnkey::run_noise(rc);
      std::cout << result.table.to_string();
      return finish(result, v, "noise", "");
    }
  } catch (const stnkey::guard_error& e) {
    std::cerr << "guard violation: " << e.what() << "\n";
    return kExitGuard;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
