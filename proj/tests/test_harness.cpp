#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "smoothlearn/acceptance.hpp"
#include "smoothlearn/harness.hpp"

using namespace smoothlearn;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("smoothlearn_harness_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SMOOTHLEARN_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::size_t line_count(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Simulate, ZeroStepsWritesHeadersOnly) {
  const fs::path dir = scratch("zero");
  harness::SimulateConfig cfg;
  cfg.game = "mp";
  cfg.steps = 0;
  cfg.out_dir = dir;
  const auto res = harness::simulate(cfg);
  EXPECT_EQ(line_count(read_file(dir / "trajectory.csv")), 1u);
  EXPECT_EQ(read_file(dir / "metrics.csv"), "t,negap,sw,sw_running_avg,diag_mass,sum_regret\n");
  const json s = parse_json_text(read_file(dir / "summary.json"), "summary");
  EXPECT_TRUE(s["min_negap"].is_null());
  EXPECT_TRUE(s["regret"].empty());
  fs::remove_all(dir);
}

TEST(Simulate, SummaryAgreesWithSeries) {
  harness::SimulateConfig cfg;
  cfg.game = "shapley3";
  cfg.steps = 3000;
  const auto res = harness::simulate_in_memory(cfg);
  const json& s = res.summary;
  EXPECT_EQ(s["eta_source"], "auto");
  ASSERT_FALSE(res.log.empty());
  EXPECT_NE(res.log[0].find("eta=auto"), std::string::npos);
  EXPECT_DOUBLE_EQ(s["eta"].get<double>(), 1.0 / (4.0 * s["lipschitz"].get<double>()));
  // The cycling game keeps a visible gap throughout.
  EXPECT_GT(s["min_negap"].get<double>(), 0.1);
  EXPECT_GE(s["rvu_min_slack"].get<double>(), -1e-9);
  EXPECT_EQ(line_count(res.metrics_csv), 3001u);

  // The reported minimum is the minimum of the negap column.
  std::istringstream in(res.metrics_csv);
  std::string line;
  std::getline(in, line);
  double lowest = 1e300;
  while (std::getline(in, line)) {
    const auto a = line.find(',') + 1;
    lowest = std::min(lowest, std::stod(line.substr(a, line.find(',', a) - a)));
  }
  EXPECT_DOUBLE_EQ(lowest, s["min_negap"].get<double>());
}

TEST(Simulate, CgdAndExplicitRate) {
  harness::SimulateConfig cfg;
  cfg.game = "random:2x3";
  cfg.algorithm = Algorithm::cgd;
  cfg.steps = 100;
  cfg.seed = 3;
  const auto res = harness::simulate_in_memory(cfg);
  EXPECT_LE(res.summary["max_residual_over_tolerance"].get<double>(), 1.0);
  EXPECT_GE(res.summary["cgd_regret_min_slack"].get<double>(), -1e-9);

  cfg.algorithm = Algorithm::ogd;
  cfg.eta = 0.05;
  const auto ogd = harness::simulate_in_memory(cfg);
  EXPECT_EQ(ogd.summary["eta_source"], "explicit");
  EXPECT_TRUE(ogd.log.empty());
}

TEST(Simulate, LoadsEveryInputFamily) {
  const fs::path samples = SMOOTHLEARN_SAMPLES_DIR;
  for (const std::string& game : std::vector<std::string>{"random-constant-sum:3x2", "random-ring:2x2x2x2", "random-polymatrix:3x2x2",
                                 (samples / "polymatrix_triangle.json").string(),
                                 (samples / "graphical_ring.json").string()}) {
    harness::SimulateConfig cfg;
    cfg.game = game;
    cfg.steps = 20;
    EXPECT_NO_THROW(harness::simulate_in_memory(cfg)) << game;
  }
  harness::SimulateConfig bayes;
  bayes.game = (samples / "bayesian_claim.json").string();
  bayes.steps = 20;
  EXPECT_TRUE(harness::simulate_in_memory(bayes).summary["agent_form"].get<bool>());
  EXPECT_THROW(harness::load_game("random:3xq", 1), Error);
  EXPECT_THROW(harness::load_game("random-weird:3x3", 1), Error);
  EXPECT_THROW(harness::load_game("no_such_game", 1), Error);
}

TEST(Analyze, BuiltinCertificates) {
  harness::AnalyzeConfig cfg;
  cfg.game = "shapley2";
  EXPECT_NEAR(harness::analyze(cfg)["rpoa"]["rho"].get<double>(), 0.0, 1e-9);

  cfg.game = "dominance";
  cfg.after_elimination = true;
  const json dom = harness::analyze(cfg);
  EXPECT_NEAR(dom["rpoa"]["rho"].get<double>(), 0.5, 1e-9);
  EXPECT_NEAR(dom["elimination"]["rpoa"]["rho"].get<double>(), 1.0, 1e-9);
  // Row 0 goes first, then column 0 against the surviving row.
  EXPECT_EQ(dom["elimination"]["log"].size(), 2u);

  cfg.game = "mp";
  cfg.after_elimination = false;
  const json mp = harness::analyze(cfg);
  EXPECT_TRUE(mp["constant_sum"].get<bool>());
  EXPECT_TRUE(mp["minty"]["feasible"].get<bool>());
  EXPECT_TRUE(mp["rpoa"]["flagged_degenerate"].get<bool>());
  EXPECT_TRUE(mp["rpoa"]["lambda"].is_null());
}

TEST(Scan, EmptyDeterministicAndThreadIndependent) {
  harness::ScanConfig empty;
  empty.count = 0;
  EXPECT_EQ(harness::scan(empty).csv, "seed,opt,rpoa,poa_worst,poa_best\n");

  harness::ScanConfig one;
  one.count = 12;
  one.seed = 40;
  one.threads = 1;
  harness::ScanConfig many = one;
  many.threads = 4;
  const auto a = harness::scan(one), b = harness::scan(many), c = harness::scan(many);
  EXPECT_EQ(a.csv, b.csv);
  EXPECT_EQ(b.csv, c.csv);
  EXPECT_EQ(a.violations, 0u);
  EXPECT_EQ(a.rows[5].seed, 45u);

  harness::ScanConfig big;
  big.rows = 6;
  EXPECT_THROW(harness::scan(big), Error);
}

TEST(Acceptance, TamperedDominanceFailsTheGolden) {
  EXPECT_TRUE(acceptance::rpoa_goldens().pass);
  // Raise the off-equilibrium payoff so the certificate moves away from 1/2.
  NormalFormGame tampered({2, 2}, {Vec{0, 0, 1, 1}, Vec{1, 0.9, 0, 1}});
  EXPECT_FALSE(acceptance::rpoa_goldens(builtins::shapley2(), tampered).pass);
}

TEST(Cli, ExitCodes) {
  const fs::path dir = scratch("cli");
  EXPECT_EQ(run_cli("simulate --game mp --steps 5 --out " + (dir / "run").string()), 0);
  EXPECT_TRUE(fs::exists(dir / "run" / "summary.json"));
  EXPECT_EQ(run_cli("analyze --game dominance --out " + (dir / "a.json").string()), 0);
  EXPECT_EQ(run_cli("scan --count 3 --out " + (dir / "scan.csv").string()), 0);
  EXPECT_EQ(run_cli("simulate --game nope"), 2);
  EXPECT_EQ(run_cli("simulate --game mp --eta -1"), 2);
  EXPECT_EQ(run_cli("simulate --game mp --alg sgd"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("scan --rows 9"), 2);
  fs::remove_all(dir);
}
