#pragma once

// The reproducible experiment suite run by `smoothlearn examples` and the
// acceptance test binary. Every check compares a measured value with a fixed threshold.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "smoothlearn/bayesian.hpp"
#include "smoothlearn/builtins.hpp"
#include "smoothlearn/dynamics.hpp"
#include "smoothlearn/equilibria.hpp"
#include "smoothlearn/games.hpp"
#include "smoothlearn/harness.hpp"
#include "smoothlearn/lp.hpp"
#include "smoothlearn/metrics.hpp"
#include "smoothlearn/oracles.hpp"
#include "smoothlearn/smoothness.hpp"

namespace smoothlearn::acceptance {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

/// An OGD run kept around for the regret audits. eps_n and mu describe the
/// smoothness guarantee used in the path-length inequality.
struct OgdRun {
  std::string label;
  NormalFormGame game;
  Trajectory traj;
  bool two_player_constant_sum = false;
  double eps_n = 0.0;
  double mu = 0.0;
};

namespace detail {

inline std::string num(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Collects failures; the first few are kept for the report.
struct Failures {
  std::size_t count = 0;
  std::vector<std::string> notes;

  void add(const std::string& note) {
    ++count;
    if (notes.size() < 3) notes.push_back(note);
  }
  std::string summary() const {
    std::string s;
    for (const auto& n : notes) s += (s.empty() ? "" : "; ") + n;
    if (count > notes.size()) s += "; +" + std::to_string(count - notes.size()) + " more";
    return s;
  }
};

inline double min_of(const Vec& v) { return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end()); }

}  // namespace detail

// ---------------------------------------------------------------------------
// 1. Shapley-3

inline constexpr double kShapleyEta = 0.01;
inline constexpr std::size_t kLongHorizon = 100'000;

inline CriterionResult shapley_nonconvergence(std::vector<OgdRun>* runs = nullptr) {
  detail::Stopwatch clock;
  const NormalFormGame g = builtins::shapley3();
  Trajectory traj = run_ogd(g, kShapleyEta, kLongHorizon, builtins::reference_init("shapley3", g));
  const double min_gap = detail::min_of(negap_series(traj));
  const double secs = clock.seconds();
  CriterionResult r{1, "Shapley-3 OGD keeps NEGap >= 0.18 for T=1e5", min_gap >= 0.18 && secs < 30.0,
                    "min NEGap " + detail::num(min_gap) + " (need >= 0.18), " + detail::num(secs) + " s (need < 30)",
                    secs};
  if (runs) runs->push_back({"shapley3", g, std::move(traj), false, 0.0, 0.0});
  return r;
}

// ---------------------------------------------------------------------------
// 2. Smooth but nonconvergent

inline CriterionResult smooth_counterexample(std::vector<OgdRun>* runs = nullptr) {
  detail::Stopwatch clock;
  const NormalFormGame g = builtins::counterexample();
  const SmoothCheck smooth = is_smooth(g, 0.125, 0.0);
  const double opt = optimal_welfare(g).value;
  Trajectory traj = run_ogd(g, kShapleyEta, kLongHorizon);
  const double min_gap = detail::min_of(negap_series(traj));
  const bool pass = smooth.smooth && std::abs(opt - 1.6) <= 1e-9 && min_gap >= 0.04;
  CriterionResult r{2, "counterexample is (1/8,0)-smooth, OPT=1.6, OGD NEGap >= 0.04", pass,
                    std::string("smooth ") + (smooth.smooth ? "yes" : "no") + " (worst slack " +
                        detail::num(smooth.worst_slack) + "), OPT " + detail::num(opt) + ", min NEGap " +
                        detail::num(min_gap),
                    clock.seconds()};
  // rho = 1/8 guarantees eps_n = 1 - rho with mu = 0.
  if (runs) runs->push_back({"counterexample", g, std::move(traj), false, 0.875, 0.0});
  return r;
}

// ---------------------------------------------------------------------------
// 3. rPoA goldens

/// Takes the games as arguments so a tampered copy can be checked.
inline CriterionResult rpoa_goldens(const NormalFormGame& og = builtins::shapley2(),
                                    const NormalFormGame& dom = builtins::dominance(),
                                    const std::vector<std::pair<std::string, NormalFormGame>>& constant_sum = {
                                        {"mp", builtins::mp()}, {"shapley3", builtins::shapley3()}}) {
  detail::Stopwatch clock;
  detail::Failures f;
  std::string detail;
  try {
    const double r_og = rpoa(og).rho;
    const double r_dom = rpoa(dom).rho;
    const double r_elim = rpoa(eliminate_dominated(dom).game).rho;
    if (std::abs(r_og) > 1e-6) f.add("rpoa(shapley2) " + detail::num(r_og) + " expected 0");
    if (std::abs(r_dom - 0.5) > 1e-6) f.add("rpoa(dominance) " + detail::num(r_dom) + " expected 0.5");
    if (std::abs(r_elim - 1.0) > 1e-6) f.add("rpoa(dominance after elimination) " + detail::num(r_elim) + " expected 1");
    detail = "shapley2 " + detail::num(r_og) + ", dominance " + detail::num(r_dom) + ", eliminated " + detail::num(r_elim);
    for (const auto& [name, g] : constant_sum) {
      const SmoothnessCertificate c = rpoa(g, 0.0);
      if (!constant_sum_tag(g).is_constant_sum) f.add(name + " is not constant-sum");
      if (std::abs(c.rho - 1.0) > 1e-6 || c.z != 0.0 || !c.degenerate) {
        f.add(name + " rho " + detail::num(c.rho) + " z " + detail::num(c.z) + (c.degenerate ? " degenerate" : " not flagged"));
      }
      detail += ", " + name + " " + detail::num(c.rho) + (c.degenerate ? " (z=0, degenerate)" : "");
    }
  } catch (const std::exception& e) {
    f.add(e.what());
  }
  return {3, "rPoA golden values", f.count == 0, f.count ? f.summary() : detail, clock.seconds()};
}

// ---------------------------------------------------------------------------
// 4. Two-player zero-sum convergence

inline constexpr std::size_t kZeroSumGames = 10;
inline constexpr std::size_t kZeroSumHorizon = 10'000;

inline CriterionResult zero_sum_convergence(std::vector<OgdRun>* runs = nullptr) {
  detail::Stopwatch clock;
  detail::Failures f;
  double worst_gap = 0.0, worst_ratio = 0.0;
  for (std::size_t k = 1; k <= kZeroSumGames; ++k) {
    const NormalFormGame g = random_constant_sum_bimatrix(5, 5, k);
    const double eta = default_ogd_eta(lipschitz_bound(g));
    Trajectory traj = run_ogd(g, eta, kZeroSumHorizon);
    const double min_gap = detail::min_of(negap_series(traj));
    const double best = best_iterate(traj).sum_sq_gap;
    const double bound = best_iterate_bound(guarantee_constants(g), eta, kZeroSumHorizon, 0.0, 0.0);
    worst_gap = std::max(worst_gap, min_gap);
    worst_ratio = std::max(worst_ratio, best / bound);
    if (min_gap > 0.05) f.add("seed " + std::to_string(k) + " min NEGap " + detail::num(min_gap));
    if (best > bound + 1e-6) f.add("seed " + std::to_string(k) + " best iterate " + detail::num(best) + " > " + detail::num(bound));
    if (runs) runs->push_back({"zero-sum seed " + std::to_string(k), g, std::move(traj), true, 0.0, 0.0});
  }
  const double secs = clock.seconds();
  if (secs >= 60.0) f.add("took " + detail::num(secs) + " s");
  return {4, "zero-sum OGD reaches NEGap <= 0.05 within the best-iterate bound", f.count == 0,
          f.count ? f.summary()
                  : "worst min NEGap " + detail::num(worst_gap) + ", best-iterate/bound <= " + detail::num(worst_ratio) +
                        ", " + detail::num(secs) + " s",
          secs};
}

// ---------------------------------------------------------------------------
// 5. RVU audit

inline CriterionResult rvu_audit_runs(const std::vector<OgdRun>& runs) {
  detail::Stopwatch clock;
  detail::Failures f;
  double min_slack = std::numeric_limits<double>::infinity();
  double max_path_ratio = 0.0;
  for (const auto& run : runs) {
    const RvuReport rvu = rvu_audit(run.traj);
    min_slack = std::min(min_slack, rvu.min_slack);
    if (rvu.min_slack < -1e-6) f.add(run.label + " RVU slack " + detail::num(rvu.min_slack));
    double sum_d2 = 0.0;
    for (std::size_t a : run.game.actions()) sum_d2 += diameter(a) * diameter(a);
    const double eta = run.traj.eta();
    const double T = static_cast<double>(run.traj.size());
    const double opt = optimal_welfare(run.game).value;
    const double stated = 2.0 * sum_d2 + 4.0 * eta * run.eps_n * (1.0 + run.mu) * opt * T;
    const double measured = 2.0 * sum_d2 - 4.0 * eta * rvu.sum_regret;
    max_path_ratio = std::max(max_path_ratio, rvu.total_path / stated);
    if (rvu.total_path > stated + 1e-6) {
      f.add(run.label + " path " + detail::num(rvu.total_path) + " > " + detail::num(stated));
    }
    if (rvu.total_path > measured + 1e-6) {
      f.add(run.label + " path " + detail::num(rvu.total_path) + " > regret form " + detail::num(measured));
    }
  }
  if (runs.empty()) f.add("no trajectories to audit");
  return {5, "RVU slack and path-length inequality on every OGD run", f.count == 0,
          f.count ? f.summary()
                  : std::to_string(runs.size()) + " runs, min RVU slack " + detail::num(min_slack) +
                        ", max path/bound " + detail::num(max_path_ratio),
          clock.seconds()};
}

// ---------------------------------------------------------------------------
// 6. CGD

inline constexpr std::size_t kCgdGames = 5;
inline constexpr std::size_t kCgdHorizon = 2000;

inline CriterionResult cgd_guarantees() {
  detail::Stopwatch clock;
  detail::Failures f;
  double worst_ratio = 0.0, worst_slack = std::numeric_limits<double>::infinity();
  std::size_t max_iter = 0;
  for (std::size_t k = 1; k <= kCgdGames; ++k) {
    const std::string tag = "seed " + std::to_string(k);
    try {
      const NormalFormGame g = random_game({2, 2, 2}, k);
      const double L = lipschitz_bound(g);
      const CgdSchedule schedule = CgdSchedule::standard(g.actions(), L);
      const Trajectory traj = run_cgd(g, schedule, kCgdHorizon);
      const double d_x2 = guarantee_constants(g).d_x2;
      const double bound = 4.0 * L * d_x2 / static_cast<double>(kCgdHorizon);
      const double gap = avg_cce_gap(traj);
      worst_ratio = std::max(worst_ratio, gap / bound);
      if (gap > bound + 1e-6) f.add(tag + " CCE gap " + detail::num(gap) + " > " + detail::num(bound));
      const double slack = detail::min_of(cgd_regret_slack(traj, L));
      worst_slack = std::min(worst_slack, slack);
      if (slack < -1e-6) f.add(tag + " regret slack " + detail::num(slack));
      for (std::size_t t = 0; t < traj.size(); ++t) {
        max_iter = std::max(max_iter, traj.picard_iterations(t));
        if (traj.residual(t) > traj.tolerance(t)) {
          f.add(tag + " residual above tolerance at t=" + std::to_string(t + 1));
          break;
        }
      }
    } catch (const std::exception& e) {
      f.add(tag + ": " + e.what());
    }
  }
  return {6, "CGD CCE gap, per-player regret bound and Picard residuals", f.count == 0,
          f.count ? f.summary()
                  : "CCE gap/bound <= " + detail::num(worst_ratio) + ", min regret slack " + detail::num(worst_slack) +
                        ", max Picard iterations " + std::to_string(max_iter),
          clock.seconds()};
}

// ---------------------------------------------------------------------------
// 7. Minty certificates on constant-sum games

/// min over pure a of sum_i u_i(x*_i, a_{-i}) - SW(a), by direct enumeration.
inline double minty_brute_force_slack(const NormalFormGame& g, const MixedProfile& x_star) {
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < g.num_players(); ++i)
      for (std::size_t b = 0; b < g.num_actions(i); ++b) lhs += x_star[i][b] * g.utility(i, g.deviate(idx, i, b));
    worst = std::min(worst, lhs - g.welfare(idx));
  }
  return worst;
}

inline CriterionResult minty_constant_sum() {
  detail::Stopwatch clock;
  detail::Failures f;
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= 20; ++k) {
    const NormalFormGame g = random_constant_sum_bimatrix(3, 3, k);
    const MintyCertificate c = minty_certificate(g);
    const double brute = minty_brute_force_slack(g, c.x_star);
    worst = std::min(worst, brute);
    const bool verified = brute >= -1e-7;
    if (!c.feasible) f.add("seed " + std::to_string(k) + " reported infeasible");
    if (c.feasible != verified) f.add("seed " + std::to_string(k) + " LP and enumeration disagree (" + detail::num(brute) + ")");
  }
  return {7, "Minty certificates on 20 constant-sum 3x3 games", f.count == 0,
          f.count ? f.summary() : "all feasible, worst enumerated slack " + detail::num(worst), clock.seconds()};
}

// ---------------------------------------------------------------------------
// 8. Lipschitz bounds

template <typename G>
double sampled_lipschitz_ratio(const G& game, std::uint64_t seed, std::size_t samples = 1000) {
  std::mt19937_64 gen(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    const MixedProfile x = random_profile(game.actions(), gen);
    MixedProfile y = random_profile(game.actions(), gen);
    // Every other pair is a small perturbation, where the local slope shows up.
    if (s % 2 == 1) {
      for (std::size_t i = 0; i < y.num_players(); ++i) {
        Vec mix(x[i].size());
        for (std::size_t a = 0; a < mix.size(); ++a) mix[a] = 0.999 * x[i][a] + 0.001 * y[i][a];
        y.strategies[i] = std::move(mix);
      }
    }
    const double dx = profile_distance(x, y);
    if (dx < 1e-12) continue;
    const Vec fx = stack(game_operator(game, x));
    const Vec fy = stack(game_operator(game, y));
    worst = std::max(worst, std::sqrt(squared_distance(fx, fy)) / dx);
  }
  return worst;
}

inline CriterionResult lipschitz_bounds() {
  detail::Stopwatch clock;
  detail::Failures f;
  double ratio[3] = {0.0, 0.0, 0.0};
  auto check = [&](int cls, const char* name, std::size_t k, double sampled, double bound) {
    ratio[cls] = std::max(ratio[cls], sampled / bound);
    if (sampled > bound) f.add(std::string(name) + " seed " + std::to_string(k) + " ratio " + detail::num(sampled) + " > " + detail::num(bound));
  };
  for (std::size_t k = 1; k <= 20; ++k) {
    const NormalFormGame nf = random_game({3, 3, 3}, k);
    check(0, "normal-form", k, sampled_lipschitz_ratio(nf, 1000 + k), lipschitz_bound(nf));
    const GraphicalGame gg = random_ring_graphical({3, 3, 3, 3, 3}, k);
    check(1, "graphical", k, sampled_lipschitz_ratio(gg, 2000 + k), lipschitz_bound(gg));
    const PolymatrixGame pm = random_polymatrix({3, 3, 3, 3}, 0.5, k);
    check(2, "polymatrix", k, sampled_lipschitz_ratio(pm, 3000 + k), lipschitz_bound(pm));
  }
  return {8, "sampled operator ratios stay below the Lipschitz bounds", f.count == 0,
          f.count ? f.summary()
                  : "max sampled/bound: normal-form " + detail::num(ratio[0]) + ", graphical " + detail::num(ratio[1]) +
                        ", polymatrix " + detail::num(ratio[2]),
          clock.seconds()};
}

// ---------------------------------------------------------------------------
// 9. Sum-of-regrets signs

/// Fixed-comparator regret sum of a constantly played pure profile in the
/// augmented game, against every player switching to the fallback action.
inline double barman_fixed_regret_sum(const NormalFormGame& base, double k, const PureProfile& played, std::size_t T) {
  const NormalFormGame aug = barman_augment(base, k, k);
  const MixedProfile x = MixedProfile::pure(aug.actions(), played);
  PureProfile fallback;
  for (std::size_t a : aug.actions()) fallback.push_back(a - 1);
  Trajectory traj(aug.actions(), Algorithm::ogd, 1.0);
  const std::vector<Vec> u = game_operator(aug, x);
  for (std::size_t t = 0; t < T; ++t) traj.push(x, u);
  return regrets(traj, MixedProfile::pure(aug.actions(), fallback)).fixed_sum;
}

inline CriterionResult regret_signs(const std::vector<OgdRun>& runs) {
  detail::Stopwatch clock;
  detail::Failures f;
  double worst = std::numeric_limits<double>::infinity();
  std::size_t audited = 0;
  auto audit = [&](const std::string& label, const Trajectory& traj) {
    const double sum = regrets(traj).sum;
    const double T = static_cast<double>(traj.size());
    worst = std::min(worst, sum / T);
    ++audited;
    if (sum < -1e-6 * T) f.add(label + " sum of regrets " + detail::num(sum));
  };
  for (const auto& run : runs)
    if (run.two_player_constant_sum) audit(run.label, run.traj);
  const NormalFormGame mp = builtins::mp();
  audit("mp ogd", run_ogd(mp, default_ogd_eta(lipschitz_bound(mp)), kZeroSumHorizon));
  audit("mp cgd", run_cgd(mp, CgdSchedule::standard(mp.actions(), lipschitz_bound(mp)), 500));

  const NormalFormGame base = builtins::barman_base();
  const double k = builtins::kBarmanDemoThreshold;
  const double fixed = barman_fixed_regret_sum(base, k, {0, 0}, 100);
  if (!(fixed < 0.0)) f.add("barman fixed regret sum " + detail::num(fixed) + " is not negative");
  return {9, "sum-of-regrets signs (constant-sum >= 0, augmented game < 0)", f.count == 0,
          f.count ? f.summary()
                  : std::to_string(audited) + " constant-sum runs, min sum/T " + detail::num(worst) +
                        "; augmented game fixed regret sum " + detail::num(fixed),
          clock.seconds()};
}

// ---------------------------------------------------------------------------
// 10. PoA versus rPoA scan

inline CriterionResult poa_scan() {
  detail::Stopwatch clock;
  detail::Failures f;
  harness::ScanConfig cfg;
  cfg.count = 10;
  cfg.rows = 3;
  cfg.cols = 3;
  cfg.seed = 1;
  std::string detail;
  try {
    const harness::ScanResult a = harness::scan(cfg);
    cfg.threads = 1;
    const harness::ScanResult b = harness::scan(cfg);
    if (a.rows.size() != 10) f.add(std::to_string(a.rows.size()) + " rows");
    if (a.violations) f.add(std::to_string(a.violations) + " rows with poa_worst < rpoa");
    if (a.csv != b.csv) f.add("repeated scan differs");
    double min_gap = std::numeric_limits<double>::infinity();
    for (const auto& r : a.rows) min_gap = std::min(min_gap, r.poa_worst - r.rpoa);
    detail = "10 rows, min poa_worst - rpoa " + detail::num(min_gap) + ", repeat identical";
  } catch (const std::exception& e) {
    f.add(e.what());
  }
  return {10, "PoA(worst) >= rPoA on a seeded 3x3 scan, deterministic", f.count == 0, f.count ? f.summary() : detail,
          clock.seconds()};
}

// ---------------------------------------------------------------------------
// 11. Oracle suites

inline double projection_oracle_error(std::size_t cases, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (std::size_t c = 0; c < cases; ++c) {
    Vec v(3);
    for (double& x : v) x = normal(gen);
    const Vec p = project_simplex(v);
    const Vec q = oracles::grid_projection3(v);
    for (int k = 0; k < 3; ++k) worst = std::max(worst, std::abs(p[k] - q[k]));
  }
  return worst;
}

/// Random bounded LPs (box [-1, 1] or [0, 1]); returns the worst objective
/// difference and counts status disagreements.
inline double lp_oracle_error(std::size_t cases, std::uint64_t seed, std::size_t& disagreements) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> vars(2, 6), rows(1, 6);
  double worst = 0.0;
  disagreements = 0;
  for (std::size_t c = 0; c < cases; ++c) {
    const std::size_t n = vars(gen), m = rows(gen);
    LinearProgram lp(n);
    for (double& v : lp.c) v = unit(gen);
    for (std::size_t j = 0; j < n; ++j) {
      lp.upper[j] = 1.0;
      if (c % 3 == 0) lp.lower[j] = -1.0;
    }
    for (std::size_t r = 0; r < m; ++r) {
      Vec row(n);
      for (double& v : row) v = unit(gen);
      lp.add_le(row, 0.5 * unit(gen) + (c % 4 == 0 ? 0.0 : 0.5));
    }
    if (c % 5 == 0) lp.add_eq(Vec(n, 1.0), 0.5 * n * std::abs(unit(gen)));
    const LPSolution sol = solve(lp);
    const std::optional<double> oracle = oracles::vertex_enumeration(lp);
    if (sol.status == LPStatus::optimal && oracle) {
      worst = std::max(worst, std::abs(sol.value - *oracle));
    } else if ((sol.status == LPStatus::optimal) != oracle.has_value()) {
      ++disagreements;
    }
  }
  return worst;
}

inline double multilinear_oracle_error(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  double worst = 0.0;
  auto compare = [&](const auto& game, const NormalFormGame& dense) {
    for (int s = 0; s < 20; ++s) {
      const MixedProfile x = random_profile(dense.actions(), gen);
      for (std::size_t i = 0; i < dense.num_players(); ++i) {
        worst = std::max(worst, std::abs(utility(game, i, x) - oracles::expected_utility(dense, i, x)));
      }
    }
  };
  const NormalFormGame nf = random_game({3, 2, 4}, seed);
  compare(nf, nf);
  const PolymatrixGame pm = random_polymatrix({2, 3, 2, 3}, 0.6, seed);
  compare(pm, to_normal_form(pm));
  const GraphicalGame gg = random_ring_graphical({2, 3, 2, 2}, seed);
  compare(gg, to_normal_form(gg));
  return worst;
}

/// Number of 2x2 games where support enumeration and the closed form disagree.
inline std::size_t bimatrix_oracle_mismatches(std::size_t games, std::uint64_t seed) {
  std::size_t mismatches = 0;
  for (std::size_t k = 0; k < games; ++k) {
    const NormalFormGame g = random_game({2, 2}, seed + k);
    const EquilibriumSet found = bimatrix_nash(g);
    const auto expected = oracles::nash_2x2(g);
    bool ok = found.size() == expected.size();
    for (const auto& e : expected) {
      bool matched = false;
      for (const auto& m : found.members) matched = matched || profile_distance(m.x, e) <= 1e-9;
      ok = ok && matched;
    }
    mismatches += ok ? 0 : 1;
  }
  return mismatches;
}

/// Worst deviation over the singleton-type isomorphism and the identity
/// bne_gap(i, v) = |V_i| * BRGap of agent (i, v).
inline double agent_form_oracle_error(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  double worst = 0.0;
  const NormalFormGame base = random_game({3, 2}, seed);
  std::vector<std::vector<Vec>> single(2);
  for (std::size_t i = 0; i < 2; ++i) single[i].push_back(base.tensor(i));
  const NormalFormGame iso = agent_form(BayesianGame(base.actions(), {1, 1}, single));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t idx = 0; idx < base.num_profiles(); ++idx)
      worst = std::max(worst, std::abs(iso.utility(i, idx) - base.utility(i, idx)));

  const ActionCounts actions = {2, 3};
  const std::vector<std::size_t> types = {2, 3};
  std::vector<std::vector<Vec>> utils(2);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t v = 0; v < types[i]; ++v) utils[i].push_back(random_game(actions, seed * 31 + i * 7 + v).tensor(i));
  const BayesianGame bg(actions, types, utils);
  const NormalFormGame af = agent_form(bg);
  for (int s = 0; s < 10; ++s) {
    BayesStrategy strat(2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t v = 0; v < types[i]; ++v) strat[i].push_back(random_simplex_point(actions[i], gen));
    const auto bne = bne_gap(bg, strat);
    const GapReport agent = ne_gap(af, to_agent_profile(bg, strat));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t v = 0; v < types[i]; ++v) {
        const double scaled = static_cast<double>(types[i]) * agent.gaps[bg.agent_offset(i) + v];
        worst = std::max(worst, std::abs(bne[i][v] - scaled));
      }
  }
  return worst;
}

inline CriterionResult oracle_suites() {
  detail::Stopwatch clock;
  detail::Failures f;
  const double proj = projection_oracle_error(40, 11);
  if (proj > 2e-3) f.add("projection error " + detail::num(proj));
  std::size_t lp_status = 0;
  const double lp = lp_oracle_error(60, 12, lp_status);
  if (lp > 1e-6) f.add("LP objective error " + detail::num(lp));
  if (lp_status) f.add(std::to_string(lp_status) + " LP status disagreements");
  const double ml = multilinear_oracle_error(13);
  if (ml > 1e-9) f.add("multilinear error " + detail::num(ml));
  const std::size_t ne = bimatrix_oracle_mismatches(200, 14);
  if (ne) f.add(std::to_string(ne) + " 2x2 equilibrium mismatches");
  const double af = agent_form_oracle_error(15);
  if (af > 1e-9) f.add("agent-form error " + detail::num(af));
  return {11, "oracle suites (projection, LP, multilinear, 2x2 NE, agent form)", f.count == 0,
          f.count ? f.summary()
                  : "projection " + detail::num(proj) + ", LP " + detail::num(lp) + ", multilinear " + detail::num(ml) +
                        ", 2x2 NE 0/200 mismatches, agent form " + detail::num(af),
          clock.seconds()};
}

// ---------------------------------------------------------------------------

/// Runs every criterion in order. `progress` sees each result as it finishes.
inline std::vector<CriterionResult> run_all(const std::function<void(const CriterionResult&)>& progress = {}) {
  std::vector<CriterionResult> out;
  std::vector<OgdRun> runs;
  auto record = [&](CriterionResult r) {
    if (progress) progress(r);
    out.push_back(std::move(r));
  };
  auto guarded = [&](int id, const char* name, auto&& fn) {
    try {
      record(fn());
    } catch (const std::exception& e) {
      record({id, name, false, std::string("error: ") + e.what(), 0.0});
    }
  };
  guarded(1, "Shapley-3", [&] { return shapley_nonconvergence(&runs); });
  guarded(2, "counterexample", [&] { return smooth_counterexample(&runs); });
  guarded(3, "rPoA goldens", [&] { return rpoa_goldens(); });
  guarded(4, "zero-sum convergence", [&] { return zero_sum_convergence(&runs); });
  guarded(5, "RVU audit", [&] { return rvu_audit_runs(runs); });
  guarded(6, "CGD", [&] { return cgd_guarantees(); });
  guarded(7, "Minty", [&] { return minty_constant_sum(); });
  guarded(8, "Lipschitz", [&] { return lipschitz_bounds(); });
  guarded(9, "regret signs", [&] { return regret_signs(runs); });
  guarded(10, "scan", [&] { return poa_scan(); });
  guarded(11, "oracles", [&] { return oracle_suites(); });
  return out;
}

inline std::string format_line(const CriterionResult& r) {
  std::ostringstream ss;
  ss << (r.pass ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << " -- " << r.detail;
  return ss.str();
}

}  // namespace smoothlearn::acceptance
