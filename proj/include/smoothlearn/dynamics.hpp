#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "smoothlearn/error.hpp"
#include "smoothlearn/games.hpp"
#include "smoothlearn/geometry.hpp"

namespace smoothlearn {

enum class Algorithm { ogd, cgd };

/// Flat record of a dynamics run. Time is 0-based here: row t holds iterate t+1.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(ActionCounts actions, Algorithm alg, double eta) : actions_(std::move(actions)), alg_(alg), eta_(eta) {
    offsets_.assign(actions_.size() + 1, 0);
    std::partial_sum(actions_.begin(), actions_.end(), offsets_.begin() + 1);
  }

  const ActionCounts& actions() const { return actions_; }
  std::size_t num_players() const { return actions_.size(); }
  Algorithm algorithm() const { return alg_; }
  double eta() const { return eta_; }
  std::size_t size() const { return steps_; }
  bool empty() const { return steps_ == 0; }
  std::size_t width() const { return offsets_.back(); }

  std::span<const double> x(std::size_t t, std::size_t i) const { return slice(x_, t, i); }
  std::span<const double> u(std::size_t t, std::size_t i) const { return slice(u_, t, i); }
  MixedProfile profile(std::size_t t) const { return unpack(x_, t); }

  // OGD internals: x_hat has size()+1 rows (the final secondary iterate included).
  bool has_ogd_state() const { return !x_hat_.empty(); }
  std::span<const double> x_hat(std::size_t t, std::size_t i) const { return slice(x_hat_, t, i); }
  std::span<const double> prediction(std::size_t t, std::size_t i) const { return slice(m_, t, i); }

  // CGD internals.
  bool has_cgd_state() const { return !w_.empty(); }
  std::span<const double> anchor(std::size_t t, std::size_t i) const { return slice(w_, t, i); }
  std::span<const double> anchor_utility(std::size_t t, std::size_t i) const { return slice(u_w_, t, i); }
  MixedProfile anchor_profile(std::size_t t) const { return unpack(w_, t); }
  double residual(std::size_t t) const { return residual_.at(t); }
  double tolerance(std::size_t t) const { return tolerance_.at(t); }
  std::size_t picard_iterations(std::size_t t) const { return picard_.at(t); }

  void push(const MixedProfile& x, const std::vector<Vec>& u) {
    append(x_, x.strategies);
    append(u_, u);
    ++steps_;
  }
  void push_ogd(const MixedProfile& x_hat, const std::vector<Vec>& m) {
    append(x_hat_, x_hat.strategies);
    append(m_, m);
  }
  void push_final_x_hat(const MixedProfile& x_hat) { append(x_hat_, x_hat.strategies); }
  void push_cgd(const MixedProfile& w, const std::vector<Vec>& u_w, double residual, double tolerance,
                std::size_t iterations) {
    append(w_, w.strategies);
    append(u_w_, u_w);
    residual_.push_back(residual);
    tolerance_.push_back(tolerance);
    picard_.push_back(iterations);
  }

 private:
  std::span<const double> slice(const Vec& store, std::size_t t, std::size_t i) const {
    const std::size_t base = t * width() + offsets_[i];
    if (base + actions_[i] > store.size()) {
      throw Error(ErrorCode::invalid_argument, "trajectory index " + std::to_string(t) + " out of range");
    }
    return {store.data() + base, actions_[i]};
  }
  MixedProfile unpack(const Vec& store, std::size_t t) const {
    MixedProfile p;
    for (std::size_t i = 0; i < actions_.size(); ++i) {
      auto s = slice(store, t, i);
      p.strategies.emplace_back(s.begin(), s.end());
    }
    return p;
  }
  static void append(Vec& store, const std::vector<Vec>& parts) {
    for (const auto& p : parts) store.insert(store.end(), p.begin(), p.end());
  }

  ActionCounts actions_;
  std::vector<std::size_t> offsets_;
  Algorithm alg_ = Algorithm::ogd;
  double eta_ = 0.0;
  std::size_t steps_ = 0;
  Vec x_, u_, x_hat_, m_, w_, u_w_;
  Vec residual_, tolerance_;
  std::vector<std::size_t> picard_;
};

inline double default_ogd_eta(double lipschitz) { return 1.0 / (4.0 * lipschitz); }
inline double default_cgd_eta(double lipschitz) { return 1.0 / (2.0 * lipschitz); }

namespace detail {

inline void require_finite(std::span<const double> v, std::size_t step, std::size_t player, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw Error(ErrorCode::non_finite, std::string(what) + " of player " + std::to_string(player) +
                                             " is not finite at step " + std::to_string(step));
    }
  }
}

inline Vec axpy(std::span<const double> x, double a, std::span<const double> y) {
  Vec out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] + a * y[k];
  return out;
}

}  // namespace detail

/// Per-player optimistic gradient state. After construction (or a step) `x` holds
/// the strategy to play next.
struct OgdState {
  Vec x_hat;
  Vec x;
  Vec m;
  double eta = 0.0;
  std::size_t step = 1;

  OgdState() = default;
  OgdState(Vec x_hat1, Vec m1, double eta_) : x_hat(std::move(x_hat1)), m(std::move(m1)), eta(eta_) {
    if (!(eta >= 0.0) || !std::isfinite(eta)) throw Error(ErrorCode::invalid_argument, "learning rate must be >= 0");
    if (m.size() != x_hat.size()) throw Error(ErrorCode::dimension_mismatch, "prediction and iterate differ in size");
    x = project_simplex(detail::axpy(x_hat, eta, m));
  }
};

/// Consumes u^(t) for the strategy x^(t) just played, then forms x^(t+1).
inline void ogd_step(OgdState& s, std::size_t player, std::span<const double> u) {
  if (u.size() != s.x_hat.size()) {
    throw Error(ErrorCode::dimension_mismatch, "player " + std::to_string(player) + " utility vector has wrong size");
  }
  detail::require_finite(u, s.step, player, "utility vector");
  s.x_hat = project_simplex(detail::axpy(s.x_hat, s.eta, u));
  s.m.assign(u.begin(), u.end());
  s.x = project_simplex(detail::axpy(s.x_hat, s.eta, s.m));
  detail::require_finite(s.x, s.step, player, "iterate");
  ++s.step;
}

/// Synchronous OGD from secondary iterate `init`; m^(1) = u_i(x_hat^(1)_{-i}).
template <MultilinearGame G>
Trajectory run_ogd(const G& game, double eta, std::size_t T, const MixedProfile& init) {
  init.validate(game.actions());
  const std::size_t n = game.num_players();
  Trajectory traj(game.actions(), Algorithm::ogd, eta);
  std::vector<OgdState> players;
  players.reserve(n);
  for (std::size_t i = 0; i < n; ++i) players.emplace_back(init[i], game.utility_vector(i, init), eta);

  MixedProfile x, x_hat;
  x.strategies.resize(n);
  x_hat.strategies.resize(n);
  std::vector<Vec> m(n);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = players[i].x;
      x_hat[i] = players[i].x_hat;
      m[i] = players[i].m;
    }
    std::vector<Vec> u = game_operator(game, x);
    traj.push(x, u);
    traj.push_ogd(x_hat, m);
    for (std::size_t i = 0; i < n; ++i) ogd_step(players[i], i, u[i]);
  }
  if (T > 0) {
    for (std::size_t i = 0; i < n; ++i) x_hat[i] = players[i].x_hat;
    traj.push_final_x_hat(x_hat);
  }
  return traj;
}

template <MultilinearGame G>
Trajectory run_ogd(const G& game, double eta, std::size_t T) {
  return run_ogd(game, eta, T, MixedProfile::uniform(game.actions()));
}

// ---------------------------------------------------------------------------
// Clairvoyant gradient descent

inline constexpr std::size_t kDefaultPicardBudget = 64;

struct FixedPoint {
  MixedProfile w;
  MixedProfile next;  // the map applied to w; the CGD iterate
  std::vector<Vec> u_w;
  double residual = 0.0;
  std::size_t iterations = 0;
  std::vector<double> residuals;  // one per evaluation, starting at w = x_prev
};

/// Picard iteration on w -> prox_{x_prev}(eta * F(w)) from w = x_prev.
template <MultilinearGame G>
FixedPoint cgd_fixed_point(const G& game, const MixedProfile& x_prev, double eta, double eps, double lipschitz,
                           std::size_t budget = kDefaultPicardBudget) {
  if (!(eta > 0.0) || !(eta * lipschitz < 1.0)) {
    throw Error(ErrorCode::invalid_argument, "clairvoyant step needs eta * L < 1 (eta=" + std::to_string(eta) +
                                                 ", L=" + std::to_string(lipschitz) + ")");
  }
  if (!(eps > 0.0)) throw Error(ErrorCode::invalid_argument, "fixed-point tolerance must be positive");
  const std::size_t n = game.num_players();
  auto apply = [&](const MixedProfile& w, std::vector<Vec>& u_w) {
    u_w = game_operator(game, w);
    MixedProfile out;
    out.strategies.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      Vec step(u_w[i].size());
      for (std::size_t k = 0; k < step.size(); ++k) step[k] = eta * u_w[i][k];
      out.strategies.push_back(prox(x_prev[i], step));
    }
    return out;
  };
  FixedPoint fp;
  fp.w = x_prev;
  fp.next = apply(fp.w, fp.u_w);
  fp.residual = profile_distance(fp.w, fp.next);
  fp.residuals.push_back(fp.residual);
  while (fp.residual > eps) {
    if (fp.iterations == budget) {
      throw Error(ErrorCode::iteration_budget, "Picard iteration did not reach tolerance " + std::to_string(eps) +
                                                   " within " + std::to_string(budget) +
                                                   " iterations; last residual " + std::to_string(fp.residual));
    }
    fp.w = std::move(fp.next);
    fp.next = apply(fp.w, fp.u_w);
    fp.residual = profile_distance(fp.w, fp.next);
    fp.residuals.push_back(fp.residual);
    ++fp.iterations;
    if (!std::isfinite(fp.residual)) throw Error(ErrorCode::non_finite, "Picard residual is not finite");
  }
  return fp;
}

struct CgdSchedule {
  double eta = 0.0;
  double lipschitz = 1.0;
  std::function<double(std::size_t)> tolerance;  // t is 1-based
  std::size_t budget = kDefaultPicardBudget;

  /// eta = 1/(2L), eps^(t) = min_i D_i / t^2 over players with D_i > 0.
  static CgdSchedule standard(const ActionCounts& actions, double lipschitz) {
    double dmin = kInfDiameter;
    for (std::size_t a : actions) {
      const double d = diameter(a);
      if (d > 0.0) dmin = std::min(dmin, d);
    }
    if (dmin == kInfDiameter) dmin = 1.0;
    CgdSchedule s;
    s.eta = default_cgd_eta(lipschitz);
    s.lipschitz = lipschitz;
    s.tolerance = [dmin](std::size_t t) {
      const double tt = static_cast<double>(t);
      return dmin / (tt * tt);
    };
    return s;
  }

 private:
  static constexpr double kInfDiameter = std::numeric_limits<double>::infinity();
};

/// x^(t) = prox_{x^(t-1)}(eta F(w^(t))), with x^(0) = init.
template <MultilinearGame G>
Trajectory run_cgd(const G& game, const CgdSchedule& schedule, std::size_t T, const MixedProfile& init) {
  init.validate(game.actions());
  if (!schedule.tolerance) throw Error(ErrorCode::invalid_argument, "schedule has no tolerance sequence");
  Trajectory traj(game.actions(), Algorithm::cgd, schedule.eta);
  MixedProfile prev = init;
  for (std::size_t t = 1; t <= T; ++t) {
    const double eps = schedule.tolerance(t);
    FixedPoint fp = cgd_fixed_point(game, prev, schedule.eta, eps, schedule.lipschitz, schedule.budget);
    std::vector<Vec> u = game_operator(game, fp.next);
    traj.push(fp.next, u);
    traj.push_cgd(fp.w, fp.u_w, fp.residual, eps, fp.iterations);
    prev = std::move(fp.next);
  }
  return traj;
}

template <MultilinearGame G>
Trajectory run_cgd(const G& game, const CgdSchedule& schedule, std::size_t T) {
  return run_cgd(game, schedule, T, MixedProfile::uniform(game.actions()));
}

}  // namespace smoothlearn
