#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <stdexcept>
#include <string>

#include "stnkey/csv.hpp"
#include "stnkey/sweep.hpp"

using namespace stnkey;

TEST_CASE("doubles round-trip through the CSV format") {
  for (double v : {0.1, 1.0 / 3.0, 6.02214076e23, -2.5e-308, 0.057632}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_u64(10'000'000'000ULL) == "10000000000");
}

TEST_CASE("CsvTable round trip") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{"1", "x"}, {"2", "y"}};
  const CsvTable back = CsvTable::parse(t.to_string());
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK(back.column("b") == 1);
  CHECK_THROWS_AS(back.column("zz"), std::out_of_range);
}

TEST_CASE("grid parsing") {
  const GridSpec lin = GridSpec::parse("0:1:5:lin");
  CHECK(lin.values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const GridSpec log = GridSpec::parse("1e4:1e10:4:log");
  CHECK(log.values()[0] == doctest::Approx(1e4));
  CHECK(log.values()[1] == doctest::Approx(1e6));
  CHECK(log.values()[3] == doctest::Approx(1e10));
  CHECK_THROWS_AS(GridSpec::parse("1:2:0:lin"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("1:2:3"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("0:1:3:log"), std::invalid_argument);
  CHECK_THROWS_AS(GridSpec::parse("a:1:3:lin"), std::invalid_argument);
}

TEST_CASE("keyrate sweep schema and infeasible handling") {
  RunConfig cfg;
  cfg.n_list = {1e3, 1e6};  // 1e3 is infeasible at these budgets
  cfg.p_list = {1};
  const SweepOutput out = run_keyrate(cfg);
  CHECK(out.status == SweepStatus::ok);
  REQUIRE(out.table.rows.size() == 2);

  const auto& header = out.table.header;
  for (const char* col : {"N", "p", "Q", "p_X", "eps", "eps_abort", "eps_prime", "beta",
                          "beta_prime", "n0", "m0", "delta", "mu", "w_total", "l_stn",
                          "l_tn", "rate_stn", "rate_tn", "reason"})
    CHECK(out.table.column(col) < header.size());

  const auto& bad = out.table.rows[0];
  CHECK(bad[out.table.column("reason")] == "sizes-infeasible");
  CHECK(bad[out.table.column("rate_stn")] == "0");
  const auto& good = out.table.rows[1];
  CHECK(good[out.table.column("reason")] == "");
  CHECK(std::stod(good[out.table.column("l_tn")]) > 0.0);

  // No bare "inf"/"nan" token in any cell (infeasibility is a reason string).
  for (const auto& row : out.table.rows)
    for (const auto& cell : row) {
      CHECK(cell != "inf");
      CHECK(cell != "-inf");
      CHECK(cell != "nan");
      CHECK(cell != "-nan");
    }
}

TEST_CASE("keyrate sweep flags an infeasible-everywhere run") {
  RunConfig cfg;
  cfg.n_list = {100, 200};
  const SweepOutput out = run_keyrate(cfg);
  CHECK(out.status == SweepStatus::infeasible_everywhere);
}

TEST_CASE("sweep rows are ordered by grid index regardless of threads") {
  RunConfig cfg;
  cfg.grid = GridSpec::parse("1e5:1e8:7:log");
  cfg.sweep_var = "N";
  cfg.p_list = {1, 2};
  cfg.threads = 1;
  const SweepOutput serial = run_keyrate(cfg);
  cfg.threads = 8;
  const SweepOutput parallel = run_keyrate(cfg);
  CHECK(serial.table.to_string() == parallel.table.to_string());
}

TEST_CASE("cost sweep marks the crossover row") {
  RunConfig cfg;
  cfg.n_list = {1e10};
  cfg.p_list = {2};
  cfg.grid = GridSpec::parse("0.004:0.048:12:lin");
  cfg.sweep_var = "Q";
  const SweepOutput out = run_cost(cfg);
  const std::size_t ci = out.table.column("crossover");
  const std::size_t qi = out.table.column("Q");
  int marks = 0;
  double q_mark = 0.0;
  for (const auto& row : out.table.rows)
    if (row[ci] == "1") {
      ++marks;
      q_mark = std::stod(row[qi]);
    }
  CHECK(marks == 1);
  CHECK(q_mark > 0.004);
  CHECK(q_mark < 0.048);
}

TEST_CASE("chain key dies at lower Q than the single-link baseline") {
  RunConfig cfg;
  cfg.p_list = {2};
  cfg.grid = GridSpec::parse("0.005:0.12:24:lin");
  cfg.sweep_var = "Q";
  for (double n : {1e6, 1e8}) {
    cfg.n_list = {n};
    const SweepOutput out = run_keyrate(cfg);
    const std::size_t qi = out.table.column("Q");
    const std::size_t si = out.table.column("l_stn");
    const std::size_t ti = out.table.column("l_tn");
    double last_stn = -1.0, last_tn = -1.0;
    for (const auto& row : out.table.rows) {
      if (std::stod(row[si]) > 0.0) last_stn = std::stod(row[qi]);
      if (std::stod(row[ti]) > 0.0) last_tn = std::stod(row[qi]);
    }
    CHECK(last_stn > 0.0);
    CHECK(last_tn > last_stn);
  }
}

TEST_CASE("keyrate sweep over the basis bias") {
  RunConfig cfg;
  cfg.n_list = {1e8};
  cfg.p_list = {3};
  cfg.grid = GridSpec::parse("0.05:0.5:10:lin");
  cfg.sweep_var = "px";
  const SweepOutput out = run_keyrate(cfg);
  CHECK(out.status == SweepStatus::ok);
  CHECK(out.table.rows.size() == 10);
  const std::size_t pxi = out.table.column("p_X");
  CHECK(std::stod(out.table.rows[0][pxi]) == doctest::Approx(0.05));
  CHECK(std::stod(out.table.rows[9][pxi]) == doctest::Approx(0.5));
}

TEST_CASE("simulate at Q=0 reports an all-zero error column") {
  RunConfig cfg;
  cfg.n_list = {10'000};
  cfg.q_list = {0.0};
  cfg.p_list = {2};
  cfg.trials = 5;
  const SweepOutput out = run_simulate(cfg);
  const std::size_t wi = out.table.column("w_obs");
  for (const auto& row : out.table.rows) CHECK(row[wi] == "0");
}

TEST_CASE("audit rows at delta = 1 report zero failure") {
  RunConfig cfg;
  cfg.n_list = {10};
  cfg.m_list = {3};
  cfg.grid = GridSpec::parse("1:1:1:lin");
  const SweepOutput out = run_sample_audit(cfg);
  REQUIRE(out.table.rows.size() == 1);
  CHECK(out.table.rows[0][out.table.column("estimate")] == "0");
  CHECK(out.table.rows[0][out.table.column("violation")] == "0");
}

TEST_CASE("noise table") {
  RunConfig cfg;
  cfg.q_list = {0.0, 0.02};
  cfg.p_list = {0, 2};
  const SweepOutput out = run_noise(cfg);
  REQUIRE(out.table.rows.size() == 4);
  CHECK(out.table.rows[0][out.table.column("w_total")] == "0");
  CHECK(std::stod(out.table.rows[3][out.table.column("w_total")]) ==
        doctest::Approx(0.057632));
}

TEST_CASE("simulate sweep is deterministic across runs and thread counts") {
  RunConfig cfg;
  cfg.n_list = {20'000};
  cfg.p_list = {2};
  cfg.q_list = {0.02};
  cfg.trials = 12;
  cfg.seed = 5;
  cfg.threads = 1;
  const SweepOutput a = run_simulate(cfg);
  const SweepOutput b = run_simulate(cfg);
  cfg.threads = 6;
  const SweepOutput c = run_simulate(cfg);
  CHECK(a.table.to_string() == b.table.to_string());
  CHECK(a.table.to_string() == c.table.to_string());
  REQUIRE(a.summary.has_value());
  REQUIRE(c.summary.has_value());
  CHECK(a.summary->to_string() == c.summary->to_string());
  CHECK(a.table.rows.size() == 12);

  // transcripts arrive in trial order when enabled
  cfg.transcripts = true;
  cfg.trials = 3;
  const SweepOutput d = run_simulate(cfg);
  CHECK(d.transcripts.size() == 3);
  CHECK(d.transcripts[0].find("\"trial\": 0") != std::string::npos);
  CHECK(d.transcripts[2].find("\"trial\": 2") != std::string::npos);
}

TEST_CASE("sample audit routes exact vs mc and reports no violations") {
  RunConfig cfg;
  cfg.n_list = {12, 400};
  cfg.m_list = {6};
  cfg.grid = GridSpec::parse("0.1:0.3:3:lin");
  cfg.trials = 2000;
  const SweepOutput out = run_sample_audit(cfg);
  REQUIRE(out.table.rows.size() == 6);
  const std::size_t mi = out.table.column("method");
  const std::size_t vi = out.table.column("violation");
  for (const auto& row : out.table.rows) {
    CHECK(row[vi] == "0");
    if (row[out.table.column("N")] == "12")
      CHECK(row[mi] == "exact");
    else
      CHECK(row[mi] == "mc");  // C(400,6) > 1e8 routes to Monte Carlo
  }
}

TEST_CASE("plots are pure functions of the CSV text") {
  RunConfig cfg;
  cfg.grid = GridSpec::parse("1e5:1e9:9:log");
  cfg.sweep_var = "N";
  cfg.p_list = {1, 2, 3};
  const SweepOutput out = run_keyrate(cfg);
  const std::string csv = out.table.to_string();
  const std::string svg1 = keyrate_plot_svg(CsvTable::parse(csv));
  const std::string svg2 = keyrate_plot_svg(CsvTable::parse(csv));
  CHECK(svg1 == svg2);
  CHECK(svg1.find("<svg") == 0);
  CHECK(svg1.find("polyline") != std::string::npos);

  RunConfig costcfg;
  costcfg.n_list = {1e10};
  costcfg.p_list = {2};
  costcfg.grid = GridSpec::parse("0.005:0.04:8:lin");
  costcfg.sweep_var = "Q";
  const SweepOutput cost = run_cost(costcfg);
  const std::string ctext = cost.table.to_string();
  CHECK(cost_plot_svg(CsvTable::parse(ctext)) == cost_plot_svg(CsvTable::parse(ctext)));
}

TEST_CASE("meta reports both failure budgets") {
  RunConfig cfg;
  cfg.p_list = {2};
  const SweepOutput out = run_keyrate(cfg);
  CHECK(out.meta_json.find("eps_fail") != std::string::npos);
  CHECK(out.meta_json.find("abort_budget") != std::string::npos);
  CHECK(out.meta_json.find("eps_pa") != std::string::npos);
}
