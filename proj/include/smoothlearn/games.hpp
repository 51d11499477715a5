#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "smoothlearn/error.hpp"
#include "smoothlearn/geometry.hpp"

namespace smoothlearn {

using ActionCounts = std::vector<std::size_t>;
using PureProfile = std::vector<std::size_t>;

/// Default cap on the number of joint pure profiles any enumeration may touch.
inline constexpr std::size_t kDefaultEnumerationCap = 10'000'000;

inline std::size_t checked_profile_count(std::span<const std::size_t> actions,
                                         std::size_t cap = kDefaultEnumerationCap) {
  std::size_t total = 1;
  for (std::size_t a : actions) {
    if (a == 0) throw Error(ErrorCode::invalid_argument, "every player needs at least one action");
    if (total > cap / a) {
      throw Error(ErrorCode::enumeration_too_large,
                  "joint profile count exceeds cap of " + std::to_string(cap));
    }
    total *= a;
  }
  if (total > cap) {
    throw Error(ErrorCode::enumeration_too_large, "joint profile count exceeds cap of " + std::to_string(cap));
  }
  return total;
}

/// One simplex point per player.
struct MixedProfile {
  std::vector<Vec> strategies;

  MixedProfile() = default;
  explicit MixedProfile(std::vector<Vec> s) : strategies(std::move(s)) {}

  static MixedProfile uniform(std::span<const std::size_t> actions) {
    MixedProfile p;
    for (std::size_t a : actions) p.strategies.push_back(uniform_point(a));
    return p;
  }

  static MixedProfile pure(std::span<const std::size_t> actions, std::span<const std::size_t> profile) {
    MixedProfile p;
    for (std::size_t i = 0; i < actions.size(); ++i) p.strategies.push_back(vertex(actions[i], profile[i]));
    return p;
  }

  std::size_t num_players() const { return strategies.size(); }
  const Vec& operator[](std::size_t i) const { return strategies[i]; }
  Vec& operator[](std::size_t i) { return strategies[i]; }

  Vec flatten() const {
    Vec out;
    for (const auto& s : strategies) out.insert(out.end(), s.begin(), s.end());
    return out;
  }

  /// Throws unless the profile matches `actions` and each entry is on its simplex.
  void validate(std::span<const std::size_t> actions) const {
    if (strategies.size() != actions.size()) {
      throw Error(ErrorCode::dimension_mismatch, "profile has " + std::to_string(strategies.size()) +
                                                     " players, game has " + std::to_string(actions.size()));
    }
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (strategies[i].size() != actions[i]) {
        throw Error(ErrorCode::dimension_mismatch, "player " + std::to_string(i) + " strategy has " +
                                                       std::to_string(strategies[i].size()) + " entries, expected " +
                                                       std::to_string(actions[i]));
      }
      if (!is_simplex_point(strategies[i])) {
        throw Error(ErrorCode::invalid_argument, "player " + std::to_string(i) + " strategy is not on the simplex");
      }
    }
  }
};

inline double profile_distance(const MixedProfile& a, const MixedProfile& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.num_players(); ++i) s += squared_distance(a[i], b[i]);
  return std::sqrt(s);
}

struct UtilityRange {
  double lo = 0.0;
  double hi = 0.0;

  bool within_unit_range() const { return lo >= -1.0 && hi <= 1.0; }
  double max_abs() const { return std::max(std::abs(lo), std::abs(hi)); }
};

struct ConstantSumTag {
  bool is_constant_sum = false;
  double value = 0.0;
};

namespace detail {

inline void check_player(std::size_t i, std::size_t n) {
  if (i >= n) {
    throw Error(ErrorCode::dimension_mismatch, "player " + std::to_string(i) + " out of range for " +
                                                   std::to_string(n) + "-player game");
  }
}

inline void check_opponents(const MixedProfile& x, std::span<const std::size_t> actions, std::size_t i) {
  if (x.num_players() != actions.size()) {
    throw Error(ErrorCode::dimension_mismatch, "player " + std::to_string(i) + ": profile has " +
                                                   std::to_string(x.num_players()) + " players, game has " +
                                                   std::to_string(actions.size()));
  }
  for (std::size_t j = 0; j < actions.size(); ++j) {
    if (j != i && x[j].size() != actions[j]) {
      throw Error(ErrorCode::dimension_mismatch, "player " + std::to_string(i) + ": opponent " + std::to_string(j) +
                                                     " strategy has " + std::to_string(x[j].size()) +
                                                     " entries, expected " + std::to_string(actions[j]));
    }
  }
}

inline double uniform01(std::mt19937_64& gen) {
  // 53 random mantissa bits; identical across standard libraries.
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace detail

/// Dense normal-form game. Utilities are stored per player as a flat tensor over
/// joint pure profiles in row-major order (last player's action fastest).
class NormalFormGame {
 public:
  NormalFormGame() = default;

  NormalFormGame(ActionCounts actions, std::vector<Vec> utilities, std::size_t cap = kDefaultEnumerationCap)
      : actions_(std::move(actions)), utilities_(std::move(utilities)) {
    if (actions_.empty()) throw Error(ErrorCode::invalid_argument, "game needs at least one player");
    profiles_ = checked_profile_count(actions_, cap);
    if (utilities_.size() != actions_.size()) {
      throw Error(ErrorCode::dimension_mismatch, "expected one utility tensor per player (" +
                                                     std::to_string(actions_.size()) + "), got " +
                                                     std::to_string(utilities_.size()));
    }
    range_ = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (std::size_t i = 0; i < utilities_.size(); ++i) {
      if (utilities_[i].size() != profiles_) {
        throw Error(ErrorCode::dimension_mismatch, "player " + std::to_string(i) + " tensor has " +
                                                       std::to_string(utilities_[i].size()) + " entries, expected " +
                                                       std::to_string(profiles_));
      }
      for (double u : utilities_[i]) {
        if (!std::isfinite(u)) {
          throw Error(ErrorCode::non_finite, "player " + std::to_string(i) + " tensor has a non-finite entry");
        }
        range_.lo = std::min(range_.lo, u);
        range_.hi = std::max(range_.hi, u);
      }
    }
    strides_.assign(actions_.size(), 1);
    for (std::size_t i = actions_.size() - 1; i > 0; --i) strides_[i - 1] = strides_[i] * actions_[i];
  }

  std::size_t num_players() const { return actions_.size(); }
  std::size_t num_actions(std::size_t i) const { return actions_.at(i); }
  const ActionCounts& actions() const { return actions_; }
  std::size_t num_profiles() const { return profiles_; }
  std::size_t stride(std::size_t i) const { return strides_[i]; }
  const Vec& tensor(std::size_t i) const { return utilities_.at(i); }
  const UtilityRange& range() const { return range_; }

  std::size_t index_of(std::span<const std::size_t> profile) const {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < actions_.size(); ++i) idx += profile[i] * strides_[i];
    return idx;
  }

  PureProfile profile_of(std::size_t index) const {
    PureProfile p(actions_.size());
    for (std::size_t i = 0; i < actions_.size(); ++i) {
      p[i] = index / strides_[i];
      index %= strides_[i];
    }
    return p;
  }

  double utility(std::size_t i, std::size_t index) const { return utilities_[i][index]; }
  double utility(std::size_t i, std::span<const std::size_t> profile) const {
    return utilities_[i][index_of(profile)];
  }

  /// Flat index of `index` with player `i`'s action replaced by `a`.
  std::size_t deviate(std::size_t index, std::size_t i, std::size_t a) const {
    const std::size_t current = (index / strides_[i]) % actions_[i];
    return index - current * strides_[i] + a * strides_[i];
  }

  double welfare(std::size_t index) const {
    double s = 0.0;
    for (const auto& u : utilities_) s += u[index];
    return s;
  }

  /// Entry a_i: E_{a_{-i} ~ x_{-i}} u_i(a_i, a_{-i}). x_i itself is ignored.
  Vec utility_vector(std::size_t i, const MixedProfile& x) const {
    detail::check_player(i, num_players());
    detail::check_opponents(x, actions_, i);
    const std::size_t n = actions_.size();
    Vec out(actions_[i], 0.0);
    PureProfile a(n, 0);
    const Vec& u = utilities_[i];
    for (std::size_t idx = 0; idx < profiles_; ++idx) {
      double w = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) w *= x[j][a[j]];
      }
      if (w != 0.0) out[a[i]] += w * u[idx];
      for (std::size_t j = n; j-- > 0;) {
        if (++a[j] < actions_[j]) break;
        a[j] = 0;
      }
    }
    return out;
  }

 private:
  ActionCounts actions_;
  std::vector<Vec> utilities_;
  std::vector<std::size_t> strides_;
  std::size_t profiles_ = 0;
  UtilityRange range_;
};

/// Polymatrix game with the 1/n-normalized utility
/// u_i(x) = (1/n) sum_{(i,j) in E} x_i^T A_{ij} x_j.
class PolymatrixGame {
 public:
  struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    Vec matrix;  // |A_from| x |A_to|, row-major
  };

  PolymatrixGame() = default;
  PolymatrixGame(ActionCounts actions, std::vector<Edge> edges) : actions_(std::move(actions)), edges_(std::move(edges)) {
    if (actions_.empty()) throw Error(ErrorCode::invalid_argument, "game needs at least one player");
    for (std::size_t a : actions_) {
      if (a == 0) throw Error(ErrorCode::invalid_argument, "every player needs at least one action");
    }
    outgoing_.resize(actions_.size());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& edge = edges_[e];
      if (edge.from >= actions_.size() || edge.to >= actions_.size() || edge.from == edge.to) {
        throw Error(ErrorCode::invalid_argument, "edge " + std::to_string(e) + " has invalid endpoints");
      }
      if (edge.matrix.size() != actions_[edge.from] * actions_[edge.to]) {
        throw Error(ErrorCode::dimension_mismatch, "edge " + std::to_string(e) + " matrix has wrong shape");
      }
      for (double v : edge.matrix) {
        if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "edge " + std::to_string(e) + " has a non-finite entry");
      }
      outgoing_[edge.from].push_back(e);
    }
  }

  std::size_t num_players() const { return actions_.size(); }
  std::size_t num_actions(std::size_t i) const { return actions_.at(i); }
  const ActionCounts& actions() const { return actions_; }
  const std::vector<Edge>& edges() const { return edges_; }

  Vec utility_vector(std::size_t i, const MixedProfile& x) const {
    detail::check_player(i, num_players());
    detail::check_opponents(x, actions_, i);
    const double scale = 1.0 / static_cast<double>(actions_.size());
    Vec out(actions_[i], 0.0);
    for (std::size_t e : outgoing_[i]) {
      const Edge& edge = edges_[e];
      const std::size_t cols = actions_[edge.to];
      for (std::size_t r = 0; r < actions_[i]; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < cols; ++c) s += edge.matrix[r * cols + c] * x[edge.to][c];
        out[r] += scale * s;
      }
    }
    return out;
  }

  /// Largest spectral norm over edge matrices (power iteration on M^T M).
  double max_spectral_norm() const {
    double best = 0.0;
    for (const Edge& edge : edges_) {
      const std::size_t rows = actions_[edge.from];
      const std::size_t cols = actions_[edge.to];
      Vec v(cols, 1.0 / std::sqrt(static_cast<double>(cols)));
      double sigma = 0.0;
      for (int iter = 0; iter < 500; ++iter) {
        Vec mv(rows, 0.0);
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t c = 0; c < cols; ++c) mv[r] += edge.matrix[r * cols + c] * v[c];
        Vec mtmv(cols, 0.0);
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t c = 0; c < cols; ++c) mtmv[c] += edge.matrix[r * cols + c] * mv[r];
        const double nrm = norm2(mtmv);
        if (nrm == 0.0) break;
        const double next = std::sqrt(nrm);
        for (std::size_t c = 0; c < cols; ++c) v[c] = mtmv[c] / nrm;
        if (std::abs(next - sigma) <= 1e-14 * std::max(1.0, next)) {
          sigma = next;
          break;
        }
        sigma = next;
      }
      // Power iteration approaches sigma from below; pad so the bound stays an upper bound.
      best = std::max(best, sigma * (1.0 + 1e-9));
    }
    return best;
  }

 private:
  ActionCounts actions_;
  std::vector<Edge> edges_;
  std::vector<std::vector<std::size_t>> outgoing_;
};

/// Graphical game: player i's utility depends on its own action and those of its
/// neighbors N_i. Local tables are indexed (a_i, a_{N_i[0]}, ..., a_{N_i[k-1]}) in
/// row-major order, own action slowest.
class GraphicalGame {
 public:
  GraphicalGame() = default;
  GraphicalGame(ActionCounts actions, std::vector<std::vector<std::size_t>> neighbors, std::vector<Vec> tables,
                std::optional<std::size_t> declared_degree = std::nullopt)
      : actions_(std::move(actions)), neighbors_(std::move(neighbors)), tables_(std::move(tables)) {
    const std::size_t n = actions_.size();
    if (n == 0) throw Error(ErrorCode::invalid_argument, "game needs at least one player");
    if (neighbors_.size() != n || tables_.size() != n) {
      throw Error(ErrorCode::dimension_mismatch, "need one neighborhood and one table per player");
    }
    std::vector<std::size_t> influence(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      if (actions_[i] == 0) throw Error(ErrorCode::invalid_argument, "every player needs at least one action");
      std::size_t cells = actions_[i];
      for (std::size_t j : neighbors_[i]) {
        if (j >= n || j == i) {
          throw Error(ErrorCode::invalid_argument, "player " + std::to_string(i) + " has an invalid neighbor");
        }
        if (std::count(neighbors_[i].begin(), neighbors_[i].end(), j) != 1) {
          throw Error(ErrorCode::invalid_argument, "player " + std::to_string(i) + " lists a neighbor twice");
        }
        ++influence[j];
        cells *= actions_[j];
      }
      if (tables_[i].size() != cells) {
        throw Error(ErrorCode::dimension_mismatch, "player " + std::to_string(i) + " table has " +
                                                       std::to_string(tables_[i].size()) + " entries, expected " +
                                                       std::to_string(cells));
      }
      for (double v : tables_[i]) {
        if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "player " + std::to_string(i) + " table entry not finite");
      }
      degree_ = std::max(degree_, neighbors_[i].size());
    }
    for (std::size_t i = 0; i < n; ++i) degree_ = std::max(degree_, influence[i]);
    if (declared_degree && degree_ > *declared_degree) {
      throw Error(ErrorCode::invalid_argument, "neighborhood or influence size " + std::to_string(degree_) +
                                                   " exceeds declared degree " + std::to_string(*declared_degree));
    }
    range_ = {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    for (const auto& t : tables_)
      for (double v : t) {
        range_.lo = std::min(range_.lo, v);
        range_.hi = std::max(range_.hi, v);
      }
  }

  std::size_t num_players() const { return actions_.size(); }
  std::size_t num_actions(std::size_t i) const { return actions_.at(i); }
  const ActionCounts& actions() const { return actions_; }
  const std::vector<std::size_t>& neighbors(std::size_t i) const { return neighbors_.at(i); }
  const Vec& table(std::size_t i) const { return tables_.at(i); }
  std::size_t degree() const { return degree_; }
  const UtilityRange& range() const { return range_; }

  Vec utility_vector(std::size_t i, const MixedProfile& x) const {
    detail::check_player(i, num_players());
    detail::check_opponents(x, actions_, i);
    const auto& nb = neighbors_[i];
    std::size_t local = 1;
    for (std::size_t j : nb) local *= actions_[j];
    Vec out(actions_[i], 0.0);
    PureProfile a(nb.size(), 0);
    for (std::size_t idx = 0; idx < local; ++idx) {
      double w = 1.0;
      for (std::size_t k = 0; k < nb.size(); ++k) w *= x[nb[k]][a[k]];
      if (w != 0.0) {
        for (std::size_t ai = 0; ai < actions_[i]; ++ai) out[ai] += w * tables_[i][ai * local + idx];
      }
      for (std::size_t k = nb.size(); k-- > 0;) {
        if (++a[k] < actions_[nb[k]]) break;
        a[k] = 0;
      }
    }
    return out;
  }

 private:
  ActionCounts actions_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<Vec> tables_;
  std::size_t degree_ = 0;
  UtilityRange range_;
};

/// Anything exposing the per-player utility-gradient map of a multilinear game.
template <typename G>
concept MultilinearGame = requires(const G& g, std::size_t i, const MixedProfile& x) {
  { g.num_players() } -> std::convertible_to<std::size_t>;
  { g.actions() } -> std::convertible_to<const ActionCounts&>;
  { g.utility_vector(i, x) } -> std::convertible_to<Vec>;
};

/// Type-erased game over the concrete backings.
class Game {
 public:
  using Backing = std::variant<NormalFormGame, PolymatrixGame, GraphicalGame>;

  Game(NormalFormGame g) : backing_(std::move(g)) {}
  Game(PolymatrixGame g) : backing_(std::move(g)) {}
  Game(GraphicalGame g) : backing_(std::move(g)) {}

  const Backing& backing() const { return backing_; }
  std::size_t num_players() const {
    return std::visit([](const auto& g) { return g.num_players(); }, backing_);
  }
  const ActionCounts& actions() const {
    return std::visit([](const auto& g) -> const ActionCounts& { return g.actions(); }, backing_);
  }
  Vec utility_vector(std::size_t i, const MixedProfile& x) const {
    return std::visit([&](const auto& g) { return g.utility_vector(i, x); }, backing_);
  }
  const NormalFormGame* normal_form() const { return std::get_if<NormalFormGame>(&backing_); }
  const PolymatrixGame* polymatrix() const { return std::get_if<PolymatrixGame>(&backing_); }
  const GraphicalGame* graphical() const { return std::get_if<GraphicalGame>(&backing_); }

 private:
  Backing backing_;
};

static_assert(MultilinearGame<NormalFormGame>);
static_assert(MultilinearGame<PolymatrixGame>);
static_assert(MultilinearGame<GraphicalGame>);
static_assert(MultilinearGame<Game>);

/// F(x): the stacked per-player utility vectors.
template <MultilinearGame G>
std::vector<Vec> game_operator(const G& game, const MixedProfile& x) {
  std::vector<Vec> out;
  out.reserve(game.num_players());
  for (std::size_t i = 0; i < game.num_players(); ++i) out.push_back(game.utility_vector(i, x));
  return out;
}

inline Vec stack(const std::vector<Vec>& parts) {
  Vec out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

template <MultilinearGame G>
double utility(const G& game, std::size_t i, const MixedProfile& x) {
  return dot(x[i], game.utility_vector(i, x));
}

template <MultilinearGame G>
double social_welfare(const G& game, const MixedProfile& x) {
  double s = 0.0;
  for (std::size_t i = 0; i < game.num_players(); ++i) s += utility(game, i, x);
  return s;
}

// ---------------------------------------------------------------------------
// Dense expansion

inline NormalFormGame to_normal_form(const NormalFormGame& g, std::size_t = kDefaultEnumerationCap) { return g; }

inline NormalFormGame to_normal_form(const PolymatrixGame& g, std::size_t cap = kDefaultEnumerationCap) {
  const auto& actions = g.actions();
  const std::size_t total = checked_profile_count(actions, cap);
  const std::size_t n = actions.size();
  const double scale = 1.0 / static_cast<double>(n);
  std::vector<Vec> utils(n, Vec(total, 0.0));
  PureProfile a(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (const auto& edge : g.edges()) {
      utils[edge.from][idx] += scale * edge.matrix[a[edge.from] * actions[edge.to] + a[edge.to]];
    }
    for (std::size_t j = n; j-- > 0;) {
      if (++a[j] < actions[j]) break;
      a[j] = 0;
    }
  }
  return NormalFormGame(actions, std::move(utils), cap);
}

inline NormalFormGame to_normal_form(const GraphicalGame& g, std::size_t cap = kDefaultEnumerationCap) {
  const auto& actions = g.actions();
  const std::size_t total = checked_profile_count(actions, cap);
  const std::size_t n = actions.size();
  std::vector<Vec> utils(n, Vec(total, 0.0));
  PureProfile a(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t local = a[i];
      for (std::size_t j : g.neighbors(i)) local = local * actions[j] + a[j];
      utils[i][idx] = g.table(i)[local];
    }
    for (std::size_t j = n; j-- > 0;) {
      if (++a[j] < actions[j]) break;
      a[j] = 0;
    }
  }
  return NormalFormGame(actions, std::move(utils), cap);
}

inline NormalFormGame to_normal_form(const Game& g, std::size_t cap = kDefaultEnumerationCap) {
  return std::visit([cap](const auto& b) { return to_normal_form(b, cap); }, g.backing());
}

// ---------------------------------------------------------------------------
// Welfare

struct Optimum {
  double value = 0.0;
  std::vector<PureProfile> maximizers;  // lexicographic order
};

inline Optimum optimal_welfare(const NormalFormGame& g) {
  Optimum opt;
  opt.value = -std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) opt.value = std::max(opt.value, g.welfare(idx));
  const double tol = 1e-12 * std::max(1.0, std::abs(opt.value));
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
    if (g.welfare(idx) >= opt.value - tol) opt.maximizers.push_back(g.profile_of(idx));
  }
  return opt;
}

inline ConstantSumTag constant_sum_tag(const NormalFormGame& g, double tol = 1e-9) {
  const double first = g.welfare(0);
  for (std::size_t idx = 1; idx < g.num_profiles(); ++idx) {
    if (std::abs(g.welfare(idx) - first) > tol) return {false, 0.0};
  }
  return {true, first};
}

/// Largest additive change any single opponent deviation causes in a player's utility.
inline double sensitivity(const NormalFormGame& g) {
  const std::size_t n = g.num_players();
  double eps = 0.0;
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
    for (std::size_t i = 0; i < n; ++i) {
      const double base = g.utility(i, idx);
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i) continue;
        for (std::size_t a = 0; a < g.num_actions(j); ++a) {
          eps = std::max(eps, std::abs(g.utility(i, g.deviate(idx, j, a)) - base));
        }
      }
    }
  }
  return eps;
}

// ---------------------------------------------------------------------------
// Lipschitz bounds for the game operator (l2 norm)

namespace detail {

inline std::size_t max_actions(const ActionCounts& actions) {
  return *std::max_element(actions.begin(), actions.end());
}

// The bounds assume utilities in [-1, 1]; larger ranges scale the bound linearly.
inline double range_scale(const UtilityRange& r) { return std::max(1.0, r.max_abs()); }

}  // namespace detail

/// Tightest applicable Lipschitz bound, clamped below by 1. Pass the game's
/// sensitivity to also consider the sensitivity-based bound.
inline double lipschitz_bound(const NormalFormGame& g, std::optional<double> known_sensitivity = std::nullopt) {
  const double n = static_cast<double>(g.num_players());
  const double m = static_cast<double>(detail::max_actions(g.actions()));
  double bound = n * m * detail::range_scale(g.range());
  if (known_sensitivity) bound = std::min(bound, *known_sensitivity * n * m);
  return std::max(1.0, bound);
}

inline double lipschitz_bound(const GraphicalGame& g, std::optional<double> known_sensitivity = std::nullopt) {
  const double n = static_cast<double>(g.num_players());
  const double m = static_cast<double>(detail::max_actions(g.actions()));
  const double scale = detail::range_scale(g.range());
  double bound = std::min(n, static_cast<double>(g.degree())) * m * scale;
  if (known_sensitivity) bound = std::min(bound, *known_sensitivity * n * m);
  return std::max(1.0, bound);
}

inline double lipschitz_bound(const PolymatrixGame& g, std::optional<double> known_sensitivity = std::nullopt) {
  double bound = g.max_spectral_norm();
  if (known_sensitivity) {
    const double n = static_cast<double>(g.num_players());
    const double m = static_cast<double>(detail::max_actions(g.actions()));
    bound = std::min(bound, *known_sensitivity * n * m);
  }
  return std::max(1.0, bound);
}

inline double lipschitz_bound(const Game& g, std::optional<double> known_sensitivity = std::nullopt) {
  return std::visit([&](const auto& b) { return lipschitz_bound(b, known_sensitivity); }, g.backing());
}

/// Upper bound B_i on ||u_i(x_{-i})||_2: sqrt(|A_i|) * max|u_i|.
inline double utility_norm_bound(const NormalFormGame& g, std::size_t i) {
  double m = 0.0;
  for (double u : g.tensor(i)) m = std::max(m, std::abs(u));
  return std::sqrt(static_cast<double>(g.num_actions(i))) * m;
}

// ---------------------------------------------------------------------------
// Sub-games and iterated strict dominance

/// Restriction of `g` to the listed (original-index) actions per player.
inline NormalFormGame restrict_actions(const NormalFormGame& g, const std::vector<std::vector<std::size_t>>& kept) {
  const std::size_t n = g.num_players();
  ActionCounts actions(n);
  for (std::size_t i = 0; i < n; ++i) actions[i] = kept[i].size();
  const std::size_t total = checked_profile_count(actions);
  std::vector<Vec> utils(n, Vec(total));
  PureProfile local(n, 0), original(n);
  for (std::size_t idx = 0; idx < total; ++idx) {
    for (std::size_t i = 0; i < n; ++i) original[i] = kept[i][local[i]];
    const std::size_t src = g.index_of(original);
    for (std::size_t i = 0; i < n; ++i) utils[i][idx] = g.utility(i, src);
    for (std::size_t j = n; j-- > 0;) {
      if (++local[j] < actions[j]) break;
      local[j] = 0;
    }
  }
  return NormalFormGame(std::move(actions), std::move(utils));
}

namespace detail {

/// True iff action `b` strictly beats `a` for player i against every opponent
/// profile drawn from the surviving action sets.
inline bool strictly_dominates(const NormalFormGame& g, const std::vector<std::vector<std::size_t>>& kept,
                               std::size_t i, std::size_t b, std::size_t a) {
  const std::size_t n = g.num_players();
  PureProfile local(n, 0), original(n);
  std::size_t total = 1;
  for (std::size_t j = 0; j < n; ++j)
    if (j != i) total *= kept[j].size();
  for (std::size_t k = 0; k < total; ++k) {
    for (std::size_t j = 0; j < n; ++j) original[j] = j == i ? a : kept[j][local[j]];
    const double ua = g.utility(i, original);
    original[i] = b;
    const double ub = g.utility(i, original);
    if (!(ub > ua)) return false;
    for (std::size_t j = n; j-- > 0;) {
      if (j == i) continue;
      if (++local[j] < kept[j].size()) break;
      local[j] = 0;
    }
  }
  return true;
}

}  // namespace detail

struct Removal {
  std::size_t player = 0;
  std::size_t action = 0;     // original index of the removed action
  std::size_t dominator = 0;  // original index of the dominating action
};

struct Reduction {
  NormalFormGame game;
  std::vector<std::vector<std::size_t>> kept;  // surviving original action indices
  std::vector<Removal> log;
};

/// Iterated removal of actions strictly dominated by another pure action.
inline Reduction eliminate_dominated(const NormalFormGame& g) {
  const std::size_t n = g.num_players();
  std::vector<std::vector<std::size_t>> kept(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t a = 0; a < g.num_actions(i); ++a) kept[i].push_back(a);
  std::vector<Removal> log;
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < n && !changed; ++i) {
      if (kept[i].size() < 2) continue;
      for (std::size_t ka = 0; ka < kept[i].size() && !changed; ++ka) {
        for (std::size_t kb = 0; kb < kept[i].size(); ++kb) {
          if (ka == kb) continue;
          if (detail::strictly_dominates(g, kept, i, kept[i][kb], kept[i][ka])) {
            log.push_back({i, kept[i][ka], kept[i][kb]});
            kept[i].erase(kept[i].begin() + static_cast<std::ptrdiff_t>(ka));
            changed = true;
            break;
          }
        }
      }
    }
  }
  return {restrict_actions(g, kept), kept, std::move(log)};
}

// ---------------------------------------------------------------------------
// Constructions

/// Adds a fallback action b_i (last index) per player:
///  all-original profiles pay SW(a)/n to everyone; exactly one fallback pays k/n to
///  that player and 0 to the rest; two or more fallbacks pay eps/n to each player on
///  the fallback and 0 to the rest.
inline NormalFormGame barman_augment(const NormalFormGame& g, double k, double eps) {
  const std::size_t n = g.num_players();
  const double nn = static_cast<double>(n);
  if (!(k > 0.0)) throw Error(ErrorCode::invalid_argument, "welfare threshold k must be positive");
  if (!(eps >= k / nn - 1e-15 && eps <= k + 1e-15)) {
    throw Error(ErrorCode::invalid_argument, "eps must lie in [k/n, k]; got eps=" + std::to_string(eps) +
                                                 " for k=" + std::to_string(k) + ", n=" + std::to_string(n));
  }
  ActionCounts actions = g.actions();
  for (auto& a : actions) ++a;
  const std::size_t total = checked_profile_count(actions);
  std::vector<Vec> utils(n, Vec(total, 0.0));
  PureProfile a(n, 0);
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t fallbacks = 0;
    for (std::size_t i = 0; i < n; ++i) fallbacks += a[i] == g.num_actions(i);
    if (fallbacks == 0) {
      const double share = g.welfare(g.index_of(a)) / nn;
      for (std::size_t i = 0; i < n; ++i) utils[i][idx] = share;
    } else {
      const double pay = fallbacks == 1 ? k / nn : eps / nn;
      for (std::size_t i = 0; i < n; ++i) utils[i][idx] = a[i] == g.num_actions(i) ? pay : 0.0;
    }
    for (std::size_t j = n; j-- > 0;) {
      if (++a[j] < actions[j]) break;
      a[j] = 0;
    }
  }
  return NormalFormGame(std::move(actions), std::move(utils));
}

/// I.i.d. uniform [0, 1) utilities from a seeded 64-bit Mersenne twister.
inline NormalFormGame random_game(const ActionCounts& actions, std::uint64_t seed,
                                  std::size_t cap = kDefaultEnumerationCap) {
  const std::size_t total = checked_profile_count(actions, cap);
  std::mt19937_64 gen(seed);
  std::vector<Vec> utils(actions.size(), Vec(total));
  for (auto& tensor : utils)
    for (double& u : tensor) u = detail::uniform01(gen);
  return NormalFormGame(actions, std::move(utils), cap);
}

/// Two-player constant-sum game: A uniform [0, 1), B = 1 - A.
inline NormalFormGame random_constant_sum_bimatrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  Vec a(rows * cols), b(rows * cols);
  for (std::size_t k = 0; k < a.size(); ++k) {
    a[k] = detail::uniform01(gen);
    b[k] = 1.0 - a[k];
  }
  return NormalFormGame({rows, cols}, {std::move(a), std::move(b)});
}

/// Polymatrix game on a random directed graph; matrix entries uniform in [-1, 1).
inline PolymatrixGame random_polymatrix(const ActionCounts& actions, double edge_probability, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<PolymatrixGame::Edge> edges;
  for (std::size_t i = 0; i < actions.size(); ++i) {
    for (std::size_t j = 0; j < actions.size(); ++j) {
      if (i == j || detail::uniform01(gen) >= edge_probability) continue;
      PolymatrixGame::Edge e{i, j, Vec(actions[i] * actions[j])};
      for (double& v : e.matrix) v = 2.0 * detail::uniform01(gen) - 1.0;
      edges.push_back(std::move(e));
    }
  }
  return PolymatrixGame(actions, std::move(edges));
}

/// Graphical game on a ring (neighbors i-1 and i+1, degree 2); tables uniform in [-1, 1).
inline GraphicalGame random_ring_graphical(const ActionCounts& actions, std::uint64_t seed) {
  const std::size_t n = actions.size();
  if (n < 3) throw Error(ErrorCode::invalid_argument, "ring graphical game needs at least 3 players");
  std::mt19937_64 gen(seed);
  std::vector<std::vector<std::size_t>> nbrs(n);
  std::vector<Vec> tables(n);
  for (std::size_t i = 0; i < n; ++i) {
    nbrs[i] = {(i + n - 1) % n, (i + 1) % n};
    tables[i].resize(actions[i] * actions[nbrs[i][0]] * actions[nbrs[i][1]]);
    for (double& v : tables[i]) v = 2.0 * detail::uniform01(gen) - 1.0;
  }
  return GraphicalGame(actions, std::move(nbrs), std::move(tables), 2);
}

/// Random simplex point: normalized exponentials, optionally sparsified.
inline Vec random_simplex_point(std::size_t d, std::mt19937_64& gen) {
  Vec v(d);
  double s = 0.0;
  for (double& x : v) {
    x = -std::log(1.0 - detail::uniform01(gen));
    s += x;
  }
  for (double& x : v) x /= s;
  return v;
}

inline MixedProfile random_profile(const ActionCounts& actions, std::mt19937_64& gen) {
  MixedProfile p;
  for (std::size_t a : actions) p.strategies.push_back(random_simplex_point(a, gen));
  return p;
}

}  // namespace smoothlearn
