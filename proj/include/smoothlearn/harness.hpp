#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "smoothlearn/bayesian.hpp"
#include "smoothlearn/builtins.hpp"
#include "smoothlearn/dynamics.hpp"
#include "smoothlearn/equilibria.hpp"
#include "smoothlearn/error.hpp"
#include "smoothlearn/games.hpp"
#include "smoothlearn/io.hpp"
#include "smoothlearn/metrics.hpp"
#include "smoothlearn/smoothness.hpp"

namespace smoothlearn::harness {

// ---------------------------------------------------------------------------
// Game sources

struct LoadedGame {
  Game game;
  std::string label;
  MixedProfile init;  // secondary iterate for OGD, x^(0) for CGD
  std::optional<BayesianGame> bayesian;
};

namespace detail {

inline ActionCounts parse_dims(const std::string& text, const std::string& source) {
  ActionCounts dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = std::min(text.find('x', pos), text.size());
    const std::string part = text.substr(pos, next - pos);
    std::size_t value = 0;
    try {
      std::size_t used = 0;
      value = std::stoul(part, &used);
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "game '" + source + "': bad action count '" + part + "'");
    }
    if (value == 0) throw Error(ErrorCode::invalid_argument, "game '" + source + "': action counts must be positive");
    dims.push_back(value);
    pos = next + 1;
  }
  return dims;
}

}  // namespace detail

/// Resolves a builtin name, a "random*:<dims>" spec or a JSON file path.
/// Random specs: random:3x3x3 (uniform [0,1)), random-constant-sum:RxC,
/// random-ring:3x3x3x3 (graphical, degree 2), random-polymatrix:3x3x3 (edge probability 1/2).
inline LoadedGame load_game(const std::string& source, std::uint64_t seed) {
  if (builtins::exists(source)) {
    NormalFormGame g = builtins::get(source);
    MixedProfile init = builtins::reference_init(source, g);
    return {Game(std::move(g)), source, std::move(init), std::nullopt};
  }
  if (const auto colon = source.find(':'); colon != std::string::npos && source.rfind("random", 0) == 0) {
    const std::string kind = source.substr(0, colon);
    const ActionCounts dims = detail::parse_dims(source.substr(colon + 1), source);
    const MixedProfile init = MixedProfile::uniform(dims);
    if (kind == "random") return {Game(random_game(dims, seed)), source, init, std::nullopt};
    if (kind == "random-constant-sum") {
      if (dims.size() != 2) throw Error(ErrorCode::invalid_argument, "game '" + source + "': needs RxC");
      return {Game(random_constant_sum_bimatrix(dims[0], dims[1], seed)), source, init, std::nullopt};
    }
    if (kind == "random-ring") return {Game(random_ring_graphical(dims, seed)), source, init, std::nullopt};
    if (kind == "random-polymatrix") return {Game(random_polymatrix(dims, 0.5, seed)), source, init, std::nullopt};
    throw Error(ErrorCode::invalid_argument, "game '" + source + "': unknown random family '" + kind + "'");
  }
  const std::filesystem::path path(source);
  if (!std::filesystem::exists(path)) {
    throw Error(ErrorCode::invalid_argument, "game '" + source + "' is neither a builtin, a random spec nor a file");
  }
  const json j = parse_json_text(read_file(path), source);
  if (is_bayesian(j)) {
    BayesianGame bg = parse_bayesian(j);
    NormalFormGame agents = agent_form(bg);
    MixedProfile init = MixedProfile::uniform(agents.actions());
    return {Game(std::move(agents)), path.filename().string(), std::move(init), std::move(bg)};
  }
  Game g = parse_game(j);
  MixedProfile init = MixedProfile::uniform(g.actions());
  return {std::move(g), path.filename().string(), std::move(init), std::nullopt};
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateConfig {
  std::string game;
  Algorithm algorithm = Algorithm::ogd;
  std::optional<double> eta;  // empty means auto
  std::size_t steps = 1000;
  std::uint64_t seed = 0;
  std::filesystem::path out_dir = "out";
};

struct SimulateResult {
  json summary;
  std::string trajectory_csv;
  std::string metrics_csv;
  std::vector<std::string> log;
};

namespace detail {

inline std::string csv_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) row += ',';
    row += cells[k];
  }
  row += '\n';
  return row;
}

}  // namespace detail

/// Runs the dynamics without touching the filesystem.
inline SimulateResult simulate_in_memory(const SimulateConfig& cfg) {
  const LoadedGame loaded = load_game(cfg.game, cfg.seed);
  const Game& game = loaded.game;
  const double L = lipschitz_bound(game);
  SimulateResult res;

  double eta = 0.0;
  if (cfg.eta) {
    eta = *cfg.eta;
    if (!(eta > 0.0) || !std::isfinite(eta)) throw Error(ErrorCode::invalid_argument, "field 'eta': must be positive");
  } else {
    eta = cfg.algorithm == Algorithm::ogd ? default_ogd_eta(L) : default_cgd_eta(L);
    res.log.push_back("eta=auto resolved to " + format_double(eta) + " (L=" + format_double(L) + ")");
  }

  Trajectory traj;
  if (cfg.algorithm == Algorithm::ogd) {
    traj = run_ogd(game, eta, cfg.steps, loaded.init);
  } else {
    CgdSchedule schedule = CgdSchedule::standard(game.actions(), L);
    schedule.eta = eta;
    traj = run_cgd(game, schedule, cfg.steps, loaded.init);
  }

  const std::size_t n = game.num_players();
  std::vector<std::string> header = {"t"};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < game.actions()[i]; ++a) header.push_back("x" + std::to_string(i) + "_" + std::to_string(a));
  header.push_back("negap");
  header.push_back("sw");
  res.trajectory_csv = detail::csv_row(header);
  res.metrics_csv = detail::csv_row({"t", "negap", "sw", "sw_running_avg", "diag_mass", "sum_regret"});

  const Vec negap = negap_series(traj);
  const WelfareTrace welfare = welfare_trace(traj);
  const bool has_diag = n >= 2 && game.actions()[0] == game.actions()[1];
  const Vec diag = has_diag ? diagonal_mass(traj) : Vec{};

  std::vector<Vec> cumulative(n);
  for (std::size_t i = 0; i < n; ++i) cumulative[i].assign(game.actions()[i], 0.0);
  Vec realized(n, 0.0);
  for (std::size_t t = 0; t < traj.size(); ++t) {
    std::vector<std::string> row = {std::to_string(t + 1)};
    double sum_regret = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      auto x = traj.x(t, i);
      auto u = traj.u(t, i);
      for (double v : x) row.push_back(format_double(v));
      for (std::size_t a = 0; a < u.size(); ++a) cumulative[i][a] += u[a];
      realized[i] += dot(x, u);
      sum_regret += *std::max_element(cumulative[i].begin(), cumulative[i].end()) - realized[i];
    }
    row.push_back(format_double(negap[t]));
    row.push_back(format_double(welfare.sw[t]));
    res.trajectory_csv += detail::csv_row(row);
    res.metrics_csv += detail::csv_row({std::to_string(t + 1), format_double(negap[t]), format_double(welfare.sw[t]),
                                        format_double(welfare.running_average[t]),
                                        has_diag ? format_double(diag[t]) : std::string(), format_double(sum_regret)});
  }

  json s;
  s["game"] = loaded.label;
  s["algorithm"] = cfg.algorithm == Algorithm::ogd ? "ogd" : "cgd";
  s["eta"] = eta;
  s["eta_source"] = cfg.eta ? "explicit" : "auto";
  s["lipschitz"] = L;
  s["steps"] = cfg.steps;
  s["seed"] = cfg.seed;
  json warnings = json::array();
  if (const auto* nf = game.normal_form(); nf && !nf->range().within_unit_range()) {
    warnings.push_back("utilities span [" + format_double(nf->range().lo) + ", " + format_double(nf->range().hi) +
                       "], outside [-1, 1]");
  }
  if (const auto* gg = game.graphical(); gg && !gg->range().within_unit_range()) {
    warnings.push_back("graphical tables span values outside [-1, 1]");
  }
  if (loaded.bayesian) s["agent_form"] = true;

  if (traj.empty()) {
    for (const char* key : {"min_negap", "min_negap_t", "best_iterate_t", "best_iterate_sum_sq_gap", "sum_regret",
                            "avg_cce_gap"})
      s[key] = nullptr;
    s["regret"] = json::array();
  } else {
    const auto min_it = std::min_element(negap.begin(), negap.end());
    s["min_negap"] = *min_it;
    s["min_negap_t"] = static_cast<std::size_t>(min_it - negap.begin()) + 1;
    const BestIterate best = best_iterate(traj);
    s["best_iterate_t"] = best.t + 1;
    s["best_iterate_sum_sq_gap"] = best.sum_sq_gap;
    const RegretReport reg = regrets(traj);
    s["regret"] = reg.per_player;
    s["sum_regret"] = reg.sum;
    s["avg_cce_gap"] = avg_cce_gap(traj);
    if (cfg.algorithm == Algorithm::ogd) {
      const RvuReport rvu = rvu_audit(traj);
      s["rvu_min_slack"] = rvu.min_slack;
      s["rvu_slack"] = rvu.slack;
      s["path_length"] = rvu.total_path;
    } else {
      const Vec slack = cgd_regret_slack(traj, L);
      s["cgd_regret_min_slack"] = *std::min_element(slack.begin(), slack.end());
      double worst = 0.0;
      std::size_t max_iter = 0;
      for (std::size_t t = 0; t < traj.size(); ++t) {
        worst = std::max(worst, traj.residual(t) / traj.tolerance(t));
        max_iter = std::max(max_iter, traj.picard_iterations(t));
      }
      s["max_residual_over_tolerance"] = worst;
      s["max_picard_iterations"] = max_iter;
    }
  }
  s["warnings"] = warnings;
  res.summary = std::move(s);
  return res;
}

/// Writes trajectory.csv, metrics.csv and summary.json into cfg.out_dir.
inline SimulateResult simulate(const SimulateConfig& cfg) {
  SimulateResult res = simulate_in_memory(cfg);
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) throw Error(ErrorCode::io, "cannot create output directory " + cfg.out_dir.string() + ": " + ec.message());
  write_file_atomic(cfg.out_dir / "trajectory.csv", res.trajectory_csv);
  write_file_atomic(cfg.out_dir / "metrics.csv", res.metrics_csv);
  write_file_atomic(cfg.out_dir / "summary.json", res.summary.dump(2) + "\n");
  return res;
}

// ---------------------------------------------------------------------------
// analyze

struct AnalyzeConfig {
  std::string game;
  double z_min = 0.0;
  std::optional<double> ratio_bound;
  bool after_elimination = false;
  std::uint64_t seed = 0;
};

inline json analyze(const AnalyzeConfig& cfg) {
  const LoadedGame loaded = load_game(cfg.game, cfg.seed);
  const NormalFormGame g = to_normal_form(loaded.game);
  json j;
  j["game"] = loaded.label;
  j["players"] = g.num_players();
  j["actions"] = g.actions();
  j["utility_range"] = {g.range().lo, g.range().hi};
  const ConstantSumTag tag = constant_sum_tag(g);
  j["constant_sum"] = tag.is_constant_sum;
  if (tag.is_constant_sum) j["constant"] = tag.value;
  const Optimum opt = optimal_welfare(g);
  j["opt"] = opt.value;
  j["opt_maximizers"] = opt.maximizers;
  const double sens = sensitivity(g);
  j["sensitivity"] = sens;
  j["lipschitz"] = lipschitz_bound(loaded.game);
  j["lipschitz_with_sensitivity"] = lipschitz_bound(g, sens);
  j["rpoa"] = to_json(rpoa(g, cfg.z_min));
  j["weighted_rpoa"] = to_json(weighted_rpoa(g, cfg.ratio_bound));
  j["minty"] = to_json(minty_certificate(g));
  if (cfg.after_elimination) {
    const Reduction red = eliminate_dominated(g);
    json log = json::array();
    for (const auto& r : red.log) log.push_back({{"player", r.player}, {"action", r.action}, {"dominated_by", r.dominator}});
    j["elimination"] = {{"log", log}, {"kept", red.kept}, {"rpoa", to_json(rpoa(red.game, cfg.z_min))}};
  }
  return j;
}

// ---------------------------------------------------------------------------
// scan

struct ScanConfig {
  std::size_t count = 10;
  std::size_t rows = 3;
  std::size_t cols = 3;
  std::uint64_t seed = 1;
  std::optional<std::size_t> threads;
};

struct ScanRow {
  std::uint64_t seed = 0;
  double opt = 0.0;
  double rpoa = 0.0;
  double poa_worst = 0.0;
  double poa_best = 0.0;
  bool ok = true;  // poa_worst >= rpoa - 1e-6
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::size_t violations = 0;
  std::string csv;
};

inline constexpr double kScanTolerance = 1e-6;

/// SMOOTHLEARN_THREADS if set and positive, else the hardware concurrency.
inline std::size_t thread_budget() {
  if (const char* env = std::getenv("SMOOTHLEARN_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline ScanRow scan_one(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  const NormalFormGame g = random_game({rows, cols}, seed);
  ScanRow r;
  r.seed = seed;
  r.opt = optimal_welfare(g).value;
  r.rpoa = rpoa(g).rho;
  r.poa_worst = poa(g, PoaMode::worst);
  r.poa_best = poa(g, PoaMode::best);
  r.ok = r.poa_worst >= r.rpoa - kScanTolerance;
  return r;
}

/// Game k uses random_game({rows, cols}, seed + k). Rows come out in k order
/// regardless of the number of worker threads.
inline ScanResult scan(const ScanConfig& cfg) {
  if (cfg.rows == 0 || cfg.cols == 0 || cfg.rows > 5 || cfg.cols > 5) {
    throw Error(ErrorCode::invalid_argument, "fields 'rows'/'cols': scan supports 1..5 actions per player");
  }
  ScanResult res;
  res.rows.resize(cfg.count);
  std::vector<std::optional<Error>> errors(cfg.count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cfg.count; k = next++) {
      try {
        res.rows[k] = scan_one(cfg.rows, cfg.cols, cfg.seed + k);
      } catch (const Error& e) {
        errors[k] = e;
      }
    }
  };
  const std::size_t threads = std::min(cfg.threads.value_or(thread_budget()), std::max<std::size_t>(1, cfg.count));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) throw *e;

  res.csv = detail::csv_row({"seed", "opt", "rpoa", "poa_worst", "poa_best"});
  for (const auto& r : res.rows) {
    res.violations += r.ok ? 0 : 1;
    res.csv += detail::csv_row({std::to_string(r.seed), format_double(r.opt), format_double(r.rpoa),
                                format_double(r.poa_worst), format_double(r.poa_best)});
  }
  return res;
}

}  // namespace smoothlearn::harness
