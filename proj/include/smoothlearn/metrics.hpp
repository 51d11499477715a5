#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "smoothlearn/dynamics.hpp"
#include "smoothlearn/error.hpp"
#include "smoothlearn/games.hpp"
#include "smoothlearn/geometry.hpp"

namespace smoothlearn {

/// max_a u[a] - <x, u>, clamped at 0.
inline double br_gap_from(std::span<const double> x, std::span<const double> u) {
  const double best = *std::max_element(u.begin(), u.end());
  return std::max(0.0, best - dot(x, u));
}

template <MultilinearGame G>
double br_gap(const G& game, const MixedProfile& x, std::size_t i) {
  return br_gap_from(x[i], game.utility_vector(i, x));
}

struct GapReport {
  Vec gaps;         // per player
  double ne_gap = 0.0;
  Vec descending;   // the (eps, delta) frontier

  static GapReport from_gaps(Vec g) {
    GapReport r;
    r.gaps = std::move(g);
    r.descending = r.gaps;
    std::sort(r.descending.begin(), r.descending.end(), std::greater<>());
    r.ne_gap = r.descending.empty() ? 0.0 : r.descending.front();
    return r;
  }
};

template <MultilinearGame G>
GapReport ne_gap(const G& game, const MixedProfile& x) {
  x.validate(game.actions());
  Vec g(game.num_players());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = br_gap(game, x, i);
  return GapReport::from_gaps(std::move(g));
}

/// At least ceil((1 - delta) n) players are eps-best-responding.
inline bool weak_ne_check(const GapReport& r, double eps, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorCode::invalid_argument, "delta must lie in [0, 1)");
  if (!(eps >= 0.0)) throw Error(ErrorCode::invalid_argument, "eps must be nonnegative");
  const double n = static_cast<double>(r.gaps.size());
  const auto quota = static_cast<std::size_t>(std::ceil((1.0 - delta) * n - 1e-12));
  const auto good = static_cast<std::size_t>(std::count_if(r.gaps.begin(), r.gaps.end(), [eps](double g) { return g <= eps; }));
  return good >= quota;
}

template <MultilinearGame G>
bool weak_ne_check(const G& game, const MixedProfile& x, double eps, double delta) {
  return weak_ne_check(ne_gap(game, x), eps, delta);
}

/// Smallest of the floor(delta n) largest gaps (the full NE gap when that count is 0).
inline double weak_ne_epsilon(const GapReport& r, double delta) {
  if (!(delta >= 0.0 && delta < 1.0)) throw Error(ErrorCode::invalid_argument, "delta must lie in [0, 1)");
  const auto k = static_cast<std::size_t>(std::floor(delta * static_cast<double>(r.gaps.size()) + 1e-12));
  if (k == 0) return r.ne_gap;
  return r.descending[k - 1];
}

// ---------------------------------------------------------------------------
// Trajectory metrics (all computed from the recorded utilities)

/// gaps[t][i] = BRGap_i(x^(t)).
inline std::vector<Vec> gap_series(const Trajectory& traj) {
  std::vector<Vec> out(traj.size(), Vec(traj.num_players()));
  for (std::size_t t = 0; t < traj.size(); ++t)
    for (std::size_t i = 0; i < traj.num_players(); ++i) out[t][i] = br_gap_from(traj.x(t, i), traj.u(t, i));
  return out;
}

inline Vec negap_series(const Trajectory& traj) {
  Vec out(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    double g = 0.0;
    for (std::size_t i = 0; i < traj.num_players(); ++i) g = std::max(g, br_gap_from(traj.x(t, i), traj.u(t, i)));
    out[t] = g;
  }
  return out;
}

struct WelfareTrace {
  Vec sw;
  Vec running_average;
};

inline WelfareTrace welfare_trace(const Trajectory& traj) {
  WelfareTrace w;
  w.sw.resize(traj.size());
  w.running_average.resize(traj.size());
  double total = 0.0;
  for (std::size_t t = 0; t < traj.size(); ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < traj.num_players(); ++i) s += dot(traj.x(t, i), traj.u(t, i));
    w.sw[t] = s;
    total += s;
    w.running_average[t] = total / static_cast<double>(t + 1);
  }
  return w;
}

/// Per-step probability that players 1 and 2 pick the same action index.
inline Vec diagonal_mass(const Trajectory& traj) {
  if (traj.num_players() < 2 || traj.actions()[0] != traj.actions()[1]) {
    throw Error(ErrorCode::dimension_mismatch, "diagonal mass needs players 1 and 2 with equal action counts");
  }
  Vec out(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) out[t] = dot(traj.x(t, 0), traj.x(t, 1));
  return out;
}

struct RegretReport {
  Vec per_player;
  double sum = 0.0;
  Vec fixed;  // regret against the comparator, when given
  double fixed_sum = 0.0;

  double weighted_sum(std::span<const double> z) const {
    if (z.size() != per_player.size()) throw Error(ErrorCode::dimension_mismatch, "one weight per player required");
    return dot(z, per_player);
  }
};

/// Reg_i = max_a sum_t u_i^(t)[a] - sum_t <x_i^(t), u_i^(t)>.
inline RegretReport regrets(const Trajectory& traj, const std::optional<MixedProfile>& comparator = std::nullopt) {
  if (traj.empty()) throw Error(ErrorCode::invalid_argument, "regret needs a nonempty trajectory");
  const std::size_t n = traj.num_players();
  if (comparator) comparator->validate(traj.actions());
  RegretReport r;
  r.per_player.resize(n);
  if (comparator) r.fixed.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    Vec cumulative(traj.actions()[i], 0.0);
    double realized = 0.0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
      auto u = traj.u(t, i);
      for (std::size_t a = 0; a < u.size(); ++a) cumulative[a] += u[a];
      realized += dot(traj.x(t, i), u);
    }
    r.per_player[i] = *std::max_element(cumulative.begin(), cumulative.end()) - realized;
    r.sum += r.per_player[i];
    if (comparator) {
      r.fixed[i] = dot((*comparator)[i], cumulative) - realized;
      r.fixed_sum += r.fixed[i];
    }
  }
  return r;
}

/// max_i Reg_i / T, clamped at 0: the CCE gap of the average correlated play.
inline double avg_cce_gap(const Trajectory& traj) {
  const RegretReport r = regrets(traj);
  const double worst = *std::max_element(r.per_player.begin(), r.per_player.end());
  return std::max(0.0, worst / static_cast<double>(traj.size()));
}

// ---------------------------------------------------------------------------
// Regret-bound audits

struct RvuReport {
  Vec regret;           // Reg_i
  Vec bound;            // per-player RVU right-hand side
  Vec slack;            // bound - regret
  Vec path_length;      // per player sum_t ||x - x_hat^(t)||^2 + ||x - x_hat^(t+1)||^2
  double sum_regret = 0.0;
  double sum_bound = 0.0;     // summed RVU bound
  double total_path = 0.0;
  double lipschitz_sum_bound = 0.0;  // (1/2eta) sum D^2 - (1/4eta) path, valid for eta <= 1/(4L)
  double min_slack = 0.0;
};

inline RvuReport rvu_audit(const Trajectory& traj) {
  if (!traj.has_ogd_state() || traj.empty()) {
    throw Error(ErrorCode::invalid_argument, "RVU audit needs a nonempty trajectory with recorded OGD state");
  }
  const double eta = traj.eta();
  if (!(eta > 0.0)) throw Error(ErrorCode::invalid_argument, "RVU audit needs a positive learning rate");
  const std::size_t n = traj.num_players();
  const RegretReport reg = regrets(traj);
  RvuReport r;
  r.regret = reg.per_player;
  r.sum_regret = reg.sum;
  r.bound.resize(n);
  r.slack.resize(n);
  r.path_length.resize(n);
  double sum_d2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = diameter(traj.actions()[i]);
    sum_d2 += d * d;
    double variation = 0.0, path = 0.0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
      variation += squared_distance(traj.u(t, i), traj.prediction(t, i));
      path += squared_distance(traj.x(t, i), traj.x_hat(t, i)) + squared_distance(traj.x(t, i), traj.x_hat(t + 1, i));
    }
    r.path_length[i] = path;
    r.total_path += path;
    r.bound[i] = d * d / (2.0 * eta) + eta * variation - path / (2.0 * eta);
    r.slack[i] = r.bound[i] - r.regret[i];
    r.sum_bound += r.bound[i];
  }
  r.lipschitz_sum_bound = sum_d2 / (2.0 * eta) - r.total_path / (4.0 * eta);
  r.min_slack = *std::min_element(r.slack.begin(), r.slack.end());
  return r;
}

/// Per-player slack in the regret bound for clairvoyant play with eta = 1/(2L):
/// 3 L D_i^2 - (1/(8 L D_i^2)) sum_t BRGap_i^2 + (eta/2) sum_t ||u_i(w) - u_i(x)||^2 - Reg_i.
inline Vec cgd_regret_slack(const Trajectory& traj, double lipschitz) {
  if (!traj.has_cgd_state() || traj.empty()) {
    throw Error(ErrorCode::invalid_argument, "needs a nonempty trajectory with recorded CGD anchors");
  }
  const double eta = traj.eta();
  const RegretReport reg = regrets(traj);
  Vec slack(traj.num_players());
  for (std::size_t i = 0; i < traj.num_players(); ++i) {
    const double d = diameter(traj.actions()[i]);
    double gap_sq = 0.0, anchor_err = 0.0;
    for (std::size_t t = 0; t < traj.size(); ++t) {
      const double g = br_gap_from(traj.x(t, i), traj.u(t, i));
      gap_sq += g * g;
      anchor_err += squared_distance(traj.anchor_utility(t, i), traj.u(t, i));
    }
    double bound = 3.0 * lipschitz * d * d + 0.5 * eta * anchor_err;
    if (d > 0.0) bound -= gap_sq / (8.0 * lipschitz * d * d);
    slack[i] = bound - reg.per_player[i];
  }
  return slack;
}

struct BestIterate {
  std::size_t t = 0;  // 0-based index into the trajectory
  double sum_sq_gap = 0.0;
  Vec sum_sq_series;
};

/// t* = argmin_t sum_i BRGap_i(x^(t))^2 (first minimizer).
inline BestIterate best_iterate(const Trajectory& traj) {
  if (traj.empty()) throw Error(ErrorCode::invalid_argument, "best iterate needs a nonempty trajectory");
  BestIterate b;
  b.sum_sq_series.resize(traj.size());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    double s = 0.0;
    for (std::size_t i = 0; i < traj.num_players(); ++i) {
      const double g = br_gap_from(traj.x(t, i), traj.u(t, i));
      s += g * g;
    }
    b.sum_sq_series[t] = s;
    if (t == 0 || s < b.sum_sq_gap) {
      b.sum_sq_gap = s;
      b.t = t;
    }
  }
  return b;
}

/// Fraction of iterates whose sum of squared gaps is at most `factor` times the mean.
inline double fraction_below_mean_multiple(const Vec& series, double factor) {
  if (series.empty()) return 1.0;
  double mean = 0.0;
  for (double v : series) mean += v;
  mean /= static_cast<double>(series.size());
  const auto count = std::count_if(series.begin(), series.end(), [&](double v) { return v <= factor * mean; });
  return static_cast<double>(count) / static_cast<double>(series.size());
}

}  // namespace smoothlearn
