#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stnkey/chainsim.hpp"
#include "stnkey/csv.hpp"
#include "stnkey/params.hpp"

namespace stnkey {

/// "start:stop:points:lin|log" sweep grid.
struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  std::size_t points = 0;
  bool log = false;

  static GridSpec parse(std::string_view text);  // throws std::invalid_argument
  std::vector<double> values() const;
};

/// Resolved configuration for one subcommand run. List fields take part in
/// the row cross product; the grid, when present, replaces the list named by
/// sweep_var ("N", "Q" or "px"; "delta" for the sampling audit).
struct RunConfig {
  std::vector<double> n_list{1e6};
  std::vector<std::uint32_t> p_list{2};
  std::vector<double> q_list{0.02};
  std::vector<double> px_list{0.2};
  double eps = 1e-30;
  double eps_abort = 1e-10;
  double eps_prime = 1e-10;
  double ec_efficiency = 1.0;
  std::optional<GridSpec> grid;
  std::string sweep_var;  // default chosen per subcommand
  std::uint64_t seed = 1;
  std::uint64_t trials = 100;
  std::vector<std::uint64_t> m_list;  // sample-audit; empty = all m <= N/2
  bool plot = false;
  bool transcripts = false;
  unsigned threads = 1;
  AbortPolicy abort_policy = AbortPolicy::strict;
};

enum class SweepStatus { ok, infeasible_everywhere };

struct SweepOutput {
  CsvTable table;
  std::optional<CsvTable> summary;       // simulate only
  std::vector<std::string> transcripts;  // simulate with transcripts enabled
  std::string meta_json;
  SweepStatus status = SweepStatus::ok;
};

SweepOutput run_keyrate(const RunConfig& cfg);
SweepOutput run_cost(const RunConfig& cfg);
SweepOutput run_noise(const RunConfig& cfg);
SweepOutput run_simulate(const RunConfig& cfg);
SweepOutput run_sample_audit(const RunConfig& cfg);

/// Figure renderers; pure functions of the parsed CSV content.
std::string keyrate_plot_svg(const CsvTable& table);
std::string cost_plot_svg(const CsvTable& table);

}  // namespace stnkey
