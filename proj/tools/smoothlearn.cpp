#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "smoothlearn/acceptance.hpp"
#include "smoothlearn/harness.hpp"
#include "smoothlearn/io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCriterion = 1;
constexpr int kExitInput = 2;

std::optional<double> parse_eta(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw smoothlearn::Error(smoothlearn::ErrorCode::invalid_argument, "field 'eta': expected a number or 'auto', got '" + text + "'");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace smoothlearn;
  CLI::App app{"No-regret dynamics and smoothness analysis for finite games"};
  app.require_subcommand(1);

  harness::SimulateConfig sim;
  std::string alg = "ogd", eta = "auto";
  auto* simulate = app.add_subcommand("simulate", "run OGD or CGD and write CSV traces plus a JSON summary");
  simulate->add_option("--game", sim.game, "builtin name, random spec (random:3x3) or JSON file")->required();
  simulate->add_option("--alg", alg, "ogd or cgd")->check(CLI::IsMember({"ogd", "cgd"}));
  simulate->add_option("--eta", eta, "learning rate or 'auto'");
  simulate->add_option("--steps", sim.steps, "number of iterations");
  simulate->add_option("--seed", sim.seed, "seed for random games");
  simulate->add_option("--out", sim.out_dir, "output directory");

  harness::AnalyzeConfig ana;
  std::optional<double> ratio_bound;
  std::string analyze_out;
  auto* analyze = app.add_subcommand("analyze", "smoothness certificates and game statistics as JSON");
  analyze->add_option("--game", ana.game, "builtin name, random spec or JSON file")->required();
  analyze->add_option("--z-min", ana.z_min, "lower bound on the dual weight z");
  analyze->add_option("--ratio-bound", ratio_bound, "bound on z_i / z_j for the weighted LP");
  analyze->add_flag("--after-elimination", ana.after_elimination, "also analyze the game after removing dominated actions");
  analyze->add_option("--seed", ana.seed, "seed for random games");
  analyze->add_option("--out", analyze_out, "write the JSON here instead of stdout");

  harness::ScanConfig scan;
  std::string scan_out;
  auto* scan_cmd = app.add_subcommand("scan", "PoA and rPoA over seeded random bimatrix games");
  scan_cmd->add_option("--count", scan.count, "number of games");
  scan_cmd->add_option("--rows", scan.rows, "row player actions (<= 5)");
  scan_cmd->add_option("--cols", scan.cols, "column player actions (<= 5)");
  scan_cmd->add_option("--seed", scan.seed, "seed of the first game");
  scan_cmd->add_option("--out", scan_out, "write the CSV here instead of stdout");

  auto* examples = app.add_subcommand("examples", "run the reproduction suite and print a pass/fail table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*simulate) {
      sim.algorithm = alg == "cgd" ? Algorithm::cgd : Algorithm::ogd;
      sim.eta = parse_eta(eta);
      const auto res = harness::simulate(sim);
      for (const auto& line : res.log) std::cerr << line << "\n";
      std::cout << res.summary.dump(2) << "\n";
      return kExitOk;
    }
    if (*analyze) {
      ana.ratio_bound = ratio_bound;
      const std::string text = harness::analyze(ana).dump(2) + "\n";
      if (analyze_out.empty()) {
        std::cout << text;
      } else {
        write_file_atomic(analyze_out, text);
      }
      return kExitOk;
    }
    if (*scan_cmd) {
      const auto res = harness::scan(scan);
      if (scan_out.empty()) {
        std::cout << res.csv;
      } else {
        write_file_atomic(scan_out, res.csv);
      }
      if (res.violations) {
        std::cerr << res.violations << " rows with poa_worst < rpoa - 1e-6\n";
        return kExitCriterion;
      }
      return kExitOk;
    }
    if (*examples) {
      bool all = true;
      const auto results = acceptance::run_all([&](const acceptance::CriterionResult& r) {
        std::cout << acceptance::format_line(r) << "  (" << r.seconds << " s)" << std::endl;
      });
      std::size_t passed = 0;
      for (const auto& r : results) {
        passed += r.pass ? 1 : 0;
        all = all && r.pass;
      }
      std::cout << passed << "/" << results.size() << " criteria passed\n";
      return all ? kExitOk : kExitCriterion;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}
