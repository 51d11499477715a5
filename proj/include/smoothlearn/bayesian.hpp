#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "smoothlearn/error.hpp"
#include "smoothlearn/games.hpp"
#include "smoothlearn/metrics.hpp"

namespace smoothlearn {

/// Finite Bayesian game with independent uniform type priors. utilities[i][v] is a
/// flat tensor over joint actions (same layout as NormalFormGame) for player i of type v.
class BayesianGame {
 public:
  BayesianGame() = default;
  BayesianGame(ActionCounts actions, std::vector<std::size_t> types, std::vector<std::vector<Vec>> utilities,
               std::optional<Vec> revenue = std::nullopt, std::size_t cap = kDefaultEnumerationCap)
      : actions_(std::move(actions)), types_(std::move(types)), utilities_(std::move(utilities)),
        revenue_(std::move(revenue)) {
    const std::size_t n = actions_.size();
    if (n == 0) throw Error(ErrorCode::invalid_argument, "game needs at least one player");
    if (types_.size() != n || utilities_.size() != n) {
      throw Error(ErrorCode::dimension_mismatch, "need one type count and one utility list per player");
    }
    profiles_ = checked_profile_count(actions_, cap);
    checked_profile_count(types_, cap);
    for (std::size_t i = 0; i < n; ++i) {
      if (utilities_[i].size() != types_[i]) {
        throw Error(ErrorCode::dimension_mismatch, "player " + std::to_string(i) + " needs one tensor per type");
      }
      for (std::size_t v = 0; v < types_[i]; ++v) {
        if (utilities_[i][v].size() != profiles_) {
          throw Error(ErrorCode::dimension_mismatch, "player " + std::to_string(i) + " type " + std::to_string(v) +
                                                         " tensor has wrong size");
        }
        for (double u : utilities_[i][v]) {
          if (!std::isfinite(u)) throw Error(ErrorCode::non_finite, "player " + std::to_string(i) + " utility");
          if (u < 0.0) {
            throw Error(ErrorCode::invalid_argument, "player " + std::to_string(i) + " type " + std::to_string(v) +
                                                         " has a negative utility");
          }
        }
      }
    }
    if (revenue_) {
      if (revenue_->size() != profiles_) throw Error(ErrorCode::dimension_mismatch, "revenue tensor has wrong size");
      for (double r : *revenue_)
        if (!std::isfinite(r) || r < 0.0) throw Error(ErrorCode::invalid_argument, "revenue must be finite and >= 0");
    }
    strides_.assign(n, 1);
    for (std::size_t i = n - 1; i > 0; --i) strides_[i - 1] = strides_[i] * actions_[i];
  }

  std::size_t num_players() const { return actions_.size(); }
  const ActionCounts& actions() const { return actions_; }
  const std::vector<std::size_t>& types() const { return types_; }
  std::size_t num_profiles() const { return profiles_; }
  double utility(std::size_t i, std::size_t type, std::size_t index) const { return utilities_[i][type][index]; }
  double revenue(std::size_t index) const { return revenue_ ? (*revenue_)[index] : 0.0; }
  bool has_revenue() const { return revenue_.has_value(); }
  std::size_t stride(std::size_t i) const { return strides_[i]; }

  std::size_t index_of(std::span<const std::size_t> a) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < a.size(); ++i) idx += a[i] * strides_[i];
    return idx;
  }

  std::size_t type_profiles() const {
    std::size_t t = 1;
    for (std::size_t v : types_) t *= v;
    return t;
  }

  /// Agent (i, v) sits at position agent_offset(i) + v of the agent form.
  std::size_t agent_offset(std::size_t i) const {
    std::size_t o = 0;
    for (std::size_t j = 0; j < i; ++j) o += types_[j];
    return o;
  }

 private:
  ActionCounts actions_;
  std::vector<std::size_t> types_;
  std::vector<std::vector<Vec>> utilities_;
  std::optional<Vec> revenue_;
  std::vector<std::size_t> strides_;
  std::size_t profiles_ = 0;
};

/// strategy[i][v] is player i's mixed action when of type v.
using BayesStrategy = std::vector<std::vector<Vec>>;

namespace detail {

inline bool advance(std::vector<std::size_t>& counter, std::span<const std::size_t> limits) {
  for (std::size_t k = counter.size(); k-- > 0;) {
    if (++counter[k] < limits[k]) return true;
    counter[k] = 0;
  }
  return false;
}

}  // namespace detail

/// Complete-information game with one agent per (player, type):
/// u_{i,v_i}(b) = (1/|V|) sum_{v with that v_i} u_i(b(v); v_i).
inline NormalFormGame agent_form(const BayesianGame& bg, std::size_t cap = kDefaultEnumerationCap) {
  const std::size_t n = bg.num_players();
  ActionCounts agent_actions;
  std::vector<std::size_t> agent_player;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t v = 0; v < bg.types()[i]; ++v) {
      agent_actions.push_back(bg.actions()[i]);
      agent_player.push_back(i);
    }
  const std::size_t total = checked_profile_count(agent_actions, cap);
  const std::size_t type_profiles = bg.type_profiles();
  if (total > cap / std::max<std::size_t>(1, type_profiles)) {
    throw Error(ErrorCode::enumeration_too_large, "agent-form expansion exceeds enumeration cap");
  }
  const double weight = 1.0 / static_cast<double>(type_profiles);
  const std::size_t agents = agent_actions.size();
  std::vector<Vec> utils(agents, Vec(total, 0.0));
  std::vector<std::size_t> b(agents, 0), v(n, 0), a(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::fill(v.begin(), v.end(), 0);
    do {
      for (std::size_t i = 0; i < n; ++i) a[i] = b[bg.agent_offset(i) + v[i]];
      const std::size_t joint = bg.index_of(a);
      for (std::size_t i = 0; i < n; ++i) utils[bg.agent_offset(i) + v[i]][idx] += weight * bg.utility(i, v[i], joint);
    } while (detail::advance(v, bg.types()));
    detail::advance(b, agent_actions);
  }
  return NormalFormGame(std::move(agent_actions), std::move(utils), cap);
}

inline MixedProfile to_agent_profile(const BayesianGame& bg, const BayesStrategy& s) {
  MixedProfile p;
  for (std::size_t i = 0; i < bg.num_players(); ++i)
    for (std::size_t v = 0; v < bg.types()[i]; ++v) p.strategies.push_back(s.at(i).at(v));
  return p;
}

inline void validate_strategy(const BayesianGame& bg, const BayesStrategy& s) {
  if (s.size() != bg.num_players()) throw Error(ErrorCode::dimension_mismatch, "strategy needs one entry per player");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i].size() != bg.types()[i]) {
      throw Error(ErrorCode::dimension_mismatch, "player " + std::to_string(i) + " needs one strategy per type");
    }
    for (const auto& x : s[i]) {
      if (x.size() != bg.actions()[i] || !is_simplex_point(x)) {
        throw Error(ErrorCode::invalid_argument, "player " + std::to_string(i) + " has an invalid type strategy");
      }
    }
  }
}

/// gaps[i][v]: best deviation gain of player i of type v against the others'
/// type-contingent strategies, in expectation over their types.
inline std::vector<Vec> bne_gap(const BayesianGame& bg, const BayesStrategy& s) {
  validate_strategy(bg, s);
  const std::size_t n = bg.num_players();
  std::vector<Vec> gaps(n);
  for (std::size_t i = 0; i < n; ++i) {
    gaps[i].resize(bg.types()[i]);
    std::vector<std::size_t> others_types = bg.types();
    others_types[i] = 1;
    const double others = static_cast<double>(bg.type_profiles() / bg.types()[i]);
    for (std::size_t vi = 0; vi < bg.types()[i]; ++vi) {
      Vec expected(bg.actions()[i], 0.0);
      std::vector<std::size_t> v(n, 0), a(n, 0);
      do {
        std::fill(a.begin(), a.end(), 0);
        do {
          double w = 1.0 / others;
          for (std::size_t j = 0; j < n; ++j)
            if (j != i) w *= s[j][v[j]][a[j]];
          if (w != 0.0) expected[a[i]] += w * bg.utility(i, vi, bg.index_of(a));
        } while (detail::advance(a, bg.actions()));
      } while (detail::advance(v, others_types));
      gaps[i][vi] = br_gap_from(s[i][vi], expected);
    }
  }
  return gaps;
}

struct MechanismSmoothness {
  bool smooth = false;
  double lambda = 0.0;
  double mu = 0.0;
  double rho_game = 0.0;       // lambda / (1 + mu)
  double rho_mechanism = 0.0;  // lambda / max(1, mu)
  std::optional<std::vector<std::size_t>> violating_types;
};

/// Checks sum_i u_i(a*_i(v), a_{-i}; v_i) >= lambda OPT(v) - mu R(a) for all v and a,
/// trying every welfare-maximizing pure a*(v) for each type profile.
inline MechanismSmoothness mechanism_smoothness(const BayesianGame& bg, double lambda, double mu, double tol = 1e-9) {
  if (!(lambda >= 0.0) || !(mu >= 0.0)) throw Error(ErrorCode::invalid_argument, "mechanism smoothness needs lambda, mu >= 0");
  MechanismSmoothness out;
  out.lambda = lambda;
  out.mu = mu;
  out.rho_game = lambda / (1.0 + mu);
  out.rho_mechanism = lambda / std::max(1.0, mu);
  const std::size_t n = bg.num_players();
  std::vector<std::size_t> v(n, 0);
  auto welfare = [&](std::size_t idx) {
    double s = bg.revenue(idx);
    for (std::size_t i = 0; i < n; ++i) s += bg.utility(i, v[i], idx);
    return s;
  };
  do {
    double opt = -std::numeric_limits<double>::infinity();
    for (std::size_t idx = 0; idx < bg.num_profiles(); ++idx) opt = std::max(opt, welfare(idx));
    bool found = false;
    std::vector<std::size_t> a_star(n), a(n);
    for (std::size_t s_idx = 0; s_idx < bg.num_profiles() && !found; ++s_idx) {
      if (welfare(s_idx) < opt - 1e-12 * std::max(1.0, std::abs(opt))) continue;
      for (std::size_t i = 0; i < n; ++i) a_star[i] = (s_idx / bg.stride(i)) % bg.actions()[i];
      bool ok = true;
      for (std::size_t idx = 0; idx < bg.num_profiles() && ok; ++idx) {
        for (std::size_t i = 0; i < n; ++i) a[i] = (idx / bg.stride(i)) % bg.actions()[i];
        double lhs = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          const std::size_t keep = a[i];
          a[i] = a_star[i];
          lhs += bg.utility(i, v[i], bg.index_of(a));
          a[i] = keep;
        }
        ok = lhs >= lambda * opt - mu * bg.revenue(idx) - tol;
      }
      found = ok;
    }
    if (!found) {
      out.smooth = false;
      out.violating_types = v;
      return out;
    }
  } while (detail::advance(v, bg.types()));
  out.smooth = true;
  return out;
}

}  // namespace smoothlearn
