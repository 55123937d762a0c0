#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(STN_CLI_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("stn_cli_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(run("") == 2);                        // missing subcommand
  CHECK(run("keyrate --grid 1:2:0:lin") == 2);  // empty grid
  CHECK(run("keyrate --grid 1:2:oops") == 2);
  CHECK(run("keyrate --no-such-flag") == 2);
  CHECK(run("simulate --abort-policy bogus") == 2);
}

TEST_CASE("guard violations exit with 4") {
  CHECK(run("simulate --N 20000000 --trials 1") == 4);     // above the 1e7 guard
  CHECK(run("sample-audit --N 16 --m 9 --trials 2000") == 4);  // m > N/2
}

TEST_CASE("infeasible-everywhere sweep exits with 3") {
  const fs::path dir = fresh_dir("infeasible");
  CHECK(run("keyrate --N 100,200 --out " + dir.string()) == 3);
}

TEST_CASE("keyrate writes CSV, meta and optional SVG") {
  const fs::path dir = fresh_dir("keyrate");
  CHECK(run("keyrate --grid 1e5:1e8:4:log --sweep N --p 1,2 --plot --out " + dir.string()) ==
        0);
  CHECK(fs::exists(dir / "keyrate.csv"));
  CHECK(fs::exists(dir / "keyrate.svg"));
  CHECK(fs::exists(dir / "meta.json"));
  const std::string csv = slurp(dir / "keyrate.csv");
  CHECK(csv.rfind("N,p,Q,p_X,", 0) == 0);
  CHECK(csv.find("nan") == std::string::npos);
}

TEST_CASE("simulate CSV is byte-identical across runs and thread counts") {
  const fs::path a = fresh_dir("sim_a"), b = fresh_dir("sim_b"), c = fresh_dir("sim_c");
  const std::string base = "simulate --N 20000 --p 2 --Q 0.02 --trials 10 --seed 42 ";
  CHECK(run(base + "--threads 1 --out " + a.string()) == 0);
  CHECK(run(base + "--threads 1 --out " + b.string()) == 0);
  CHECK(run(base + "--threads 6 --out " + c.string()) == 0);
  const std::string ta = slurp(a / "simulate.csv");
  CHECK(!ta.empty());
  CHECK(ta == slurp(b / "simulate.csv"));
  CHECK(ta == slurp(c / "simulate.csv"));
  CHECK(slurp(a / "simulate_summary.csv") == slurp(c / "simulate_summary.csv"));
}

TEST_CASE("simulate can dump per-trial transcripts") {
  const fs::path dir = fresh_dir("transcripts");
  CHECK(run("simulate --N 5000 --p 1 --trials 2 --transcripts --out " + dir.string()) == 0);
  CHECK(fs::exists(dir / "transcripts" / "trial_000000.json"));
  CHECK(fs::exists(dir / "transcripts" / "trial_000001.json"));
  const std::string t0 = slurp(dir / "transcripts" / "trial_000000.json");
  CHECK(t0.find("\"bob_folded_key\"") != std::string::npos);
}

TEST_CASE("config file provides defaults that flags override") {
  const fs::path dir = fresh_dir("config");
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "run.json");
    cfg << R"({"N": 5000, "p": 1, "Q": 0.25, "trials": 3, "seed": 7})";
  }
  const fs::path out1 = dir / "from_config";
  CHECK(run("simulate --config " + (dir / "run.json").string() + " --out " + out1.string()) ==
        0);
  const std::string csv1 = slurp(out1 / "simulate.csv");
  CHECK(csv1.find("\n0,") != std::string::npos);  // three trial rows
  CHECK(csv1.find("\n2,") != std::string::npos);

  // Flag overrides the config's trial count.
  const fs::path out2 = dir / "flag_wins";
  CHECK(run("simulate --config " + (dir / "run.json").string() + " --trials 1 --out " +
            out2.string()) == 0);
  const std::string csv2 = slurp(out2 / "simulate.csv");
  CHECK(csv2.find("\n0,") != std::string::npos);
  CHECK(csv2.find("\n1,") == std::string::npos);
}

TEST_CASE("noise prints the composition table") {
  const fs::path dir = fresh_dir("noise");
  const std::string cmd = std::string(STN_CLI_BIN) + " noise --Q 0.02 --p 0,2 --out " +
                          dir.string() + " > " + (dir / "stdout.txt").string() + " 2>&1";
  fs::create_directories(dir);
  const int status = std::system(cmd.c_str());
  CHECK(WEXITSTATUS(status) == 0);
  const std::string text = slurp(dir / "stdout.txt");
  CHECK(text.rfind("Q,p,w_total", 0) == 0);
  CHECK(text.find("0.02,2,0.0576") != std::string::npos);
  CHECK(fs::exists(dir / "noise.csv"));
}
