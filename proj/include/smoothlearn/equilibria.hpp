#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

#include "smoothlearn/error.hpp"
#include "smoothlearn/games.hpp"
#include "smoothlearn/metrics.hpp"

namespace smoothlearn {

inline constexpr double kEquilibriumTol = 1e-8;

struct Equilibrium {
  MixedProfile x;
  double welfare = 0.0;
  double ne_gap = 0.0;
  bool pure = false;
  bool degenerate = false;  // representative of a continuum
};

struct EquilibriumSet {
  std::vector<Equilibrium> members;
  bool degenerate = false;

  bool empty() const { return members.empty(); }
  std::size_t size() const { return members.size(); }
};

/// All pure profiles where no player gains more than `tol` by deviating.
inline EquilibriumSet pure_nash(const NormalFormGame& g, double tol = 1e-9) {
  EquilibriumSet out;
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
    double gap = 0.0;
    for (std::size_t i = 0; i < g.num_players() && gap <= tol; ++i) {
      const double base = g.utility(i, idx);
      for (std::size_t a = 0; a < g.num_actions(i); ++a) gap = std::max(gap, g.utility(i, g.deviate(idx, i, a)) - base);
    }
    if (gap <= tol) {
      const PureProfile p = g.profile_of(idx);
      out.members.push_back({MixedProfile::pure(g.actions(), p), g.welfare(idx), gap, true, false});
    }
  }
  return out;
}

namespace detail {

// Gaussian elimination with partial pivoting on a square system. Returns the
// solution with free variables set to zero and reports rank deficiency.
inline Vec solve_square(std::vector<Vec> M, Vec rhs, bool& rank_deficient) {
  const std::size_t n = rhs.size();
  std::vector<std::size_t> pivot_col(n, n);
  rank_deficient = false;
  std::size_t row = 0;
  for (std::size_t col = 0; col < n && row < n; ++col) {
    std::size_t best = row;
    for (std::size_t r = row + 1; r < n; ++r)
      if (std::abs(M[r][col]) > std::abs(M[best][col])) best = r;
    if (std::abs(M[best][col]) < 1e-12) {
      rank_deficient = true;
      continue;
    }
    std::swap(M[row], M[best]);
    std::swap(rhs[row], rhs[best]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row) continue;
      const double f = M[r][col] / M[row][col];
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) M[r][c] -= f * M[row][c];
      rhs[r] -= f * rhs[row];
    }
    pivot_col[row] = col;
    ++row;
  }
  if (row < n) rank_deficient = true;
  Vec x(n, 0.0);
  for (std::size_t r = 0; r < row; ++r) x[pivot_col[r]] = rhs[r] / M[r][pivot_col[r]];
  // Inconsistent leftover rows mean no solution on this support.
  for (std::size_t r = row; r < n; ++r)
    if (std::abs(rhs[r]) > 1e-9) return {};
  return x;
}

inline std::vector<std::vector<std::size_t>> subsets_of_size(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> cur(k);
  for (std::size_t i = 0; i < k; ++i) cur[i] = i;
  while (true) {
    out.push_back(cur);
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) cur[j] = cur[j - 1] + 1;
  }
  return out;
}

// Mixed strategy on `own` making the opponent indifferent over `other`.
// payoff(r, c) is the opponent's payoff with own action r and opponent action c.
template <typename Payoff>
std::optional<Vec> indifference(const std::vector<std::size_t>& own, const std::vector<std::size_t>& other,
                                std::size_t own_actions, Payoff payoff, bool& degenerate) {
  const std::size_t k = own.size();
  std::vector<Vec> M(k + 1, Vec(k + 1, 0.0));
  Vec rhs(k + 1, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t r = 0; r < k; ++r) M[c][r] = payoff(own[r], other[c]);
    M[c][k] = -1.0;
  }
  for (std::size_t r = 0; r < k; ++r) M[k][r] = 1.0;
  rhs[k] = 1.0;
  bool deficient = false;
  Vec sol = solve_square(std::move(M), std::move(rhs), deficient);
  if (sol.empty()) return std::nullopt;
  degenerate = degenerate || deficient;
  Vec full(own_actions, 0.0);
  for (std::size_t r = 0; r < k; ++r) {
    if (sol[r] < -1e-10) return std::nullopt;
    full[own[r]] = std::max(sol[r], 0.0);
  }
  double s = 0.0;
  for (double v : full) s += v;
  if (!(s > 0.0)) return std::nullopt;
  for (double& v : full) v /= s;
  return full;
}

}  // namespace detail

/// Support enumeration over equal-size support pairs of a bimatrix game.
inline EquilibriumSet bimatrix_nash(const NormalFormGame& g) {
  if (g.num_players() != 2) throw Error(ErrorCode::invalid_argument, "support enumeration needs a two-player game");
  const std::size_t m1 = g.num_actions(0), m2 = g.num_actions(1);
  if (m1 > 5 || m2 > 5) throw Error(ErrorCode::enumeration_too_large, "support enumeration limited to 5 actions per player");
  auto A = [&](std::size_t r, std::size_t c) { return g.utility(0, r * m2 + c); };
  auto B = [&](std::size_t r, std::size_t c) { return g.utility(1, r * m2 + c); };
  EquilibriumSet out;
  for (std::size_t k = 1; k <= std::min(m1, m2); ++k) {
    const auto rows = detail::subsets_of_size(m1, k);
    const auto cols = detail::subsets_of_size(m2, k);
    for (const auto& S1 : rows) {
      for (const auto& S2 : cols) {
        bool degenerate = false;
        // Row player's mix makes the column player indifferent over S2, and vice versa.
        auto x = detail::indifference(S1, S2, m1, [&](std::size_t r, std::size_t c) { return B(r, c); }, degenerate);
        if (!x) continue;
        auto y = detail::indifference(S2, S1, m2, [&](std::size_t c, std::size_t r) { return A(r, c); }, degenerate);
        if (!y) continue;
        MixedProfile p({*x, *y});
        const GapReport gaps = ne_gap(g, p);
        if (gaps.ne_gap > kEquilibriumTol) continue;
        bool duplicate = false;
        for (const auto& e : out.members) {
          if (profile_distance(e.x, p) <= 1e-9) {
            duplicate = true;
            break;
          }
        }
        if (duplicate) continue;
        bool pure = true;
        for (const auto& s : p.strategies)
          for (double v : s) pure = pure && (v == 0.0 || v == 1.0);
        out.degenerate = out.degenerate || degenerate;
        out.members.push_back({p, social_welfare(g, p), gaps.ne_gap, pure, degenerate});
      }
    }
  }
  return out;
}

enum class PoaMode { worst, best };

/// Equilibrium set used for PoA: support enumeration for small bimatrix games, pure NE otherwise.
inline EquilibriumSet enumerable_equilibria(const NormalFormGame& g) {
  if (g.num_players() == 2 && g.num_actions(0) <= 5 && g.num_actions(1) <= 5) return bimatrix_nash(g);
  return pure_nash(g);
}

namespace detail {

inline std::vector<Vec> simplex_grid(std::size_t d, std::size_t steps) {
  std::vector<Vec> out;
  Vec cur(d, 0.0);
  std::vector<std::size_t> counts(d, 0);
  auto rec = [&](auto&& self, std::size_t pos, std::size_t remaining) -> void {
    if (pos + 1 == d) {
      counts[pos] = remaining;
      Vec p(d);
      for (std::size_t k = 0; k < d; ++k) p[k] = static_cast<double>(counts[k]) / static_cast<double>(steps);
      out.push_back(std::move(p));
      return;
    }
    for (std::size_t c = 0; c <= remaining; ++c) {
      counts[pos] = c;
      self(self, pos + 1, remaining - c);
    }
  };
  rec(rec, 0, steps);
  return out;
}

}  // namespace detail

inline constexpr double kEpsPoaGridStep = 0.02;
inline constexpr std::size_t kEpsPoaGridCap = 5'000'000;

/// (worst or best) equilibrium welfare over OPT. With eps, eps-NE from a 0.02 grid
/// (bimatrix only) are added to the exact equilibrium set.
inline double poa(const NormalFormGame& g, PoaMode mode, std::optional<double> eps = std::nullopt) {
  const Optimum opt = optimal_welfare(g);
  if (!(opt.value > 0.0)) throw Error(ErrorCode::invalid_argument, "price of anarchy needs OPT > 0");
  const EquilibriumSet ne = enumerable_equilibria(g);
  std::vector<double> welfare;
  for (const auto& e : ne.members) welfare.push_back(e.welfare);
  if (eps) {
    if (g.num_players() != 2) throw Error(ErrorCode::invalid_argument, "approximate PoA grid supports bimatrix games only");
    const auto steps = static_cast<std::size_t>(std::lround(1.0 / kEpsPoaGridStep));
    const auto g1 = detail::simplex_grid(g.num_actions(0), steps);
    const auto g2 = detail::simplex_grid(g.num_actions(1), steps);
    if (g1.size() > kEpsPoaGridCap / std::max<std::size_t>(1, g2.size())) {
      throw Error(ErrorCode::enumeration_too_large, "approximate-equilibrium grid exceeds cap");
    }
    for (const auto& x : g1)
      for (const auto& y : g2) {
        MixedProfile p({x, y});
        if (ne_gap(g, p).ne_gap <= *eps) welfare.push_back(social_welfare(g, p));
      }
  }
  if (welfare.empty()) throw Error(ErrorCode::undetermined, "no equilibrium found by the available enumeration");
  const double w = mode == PoaMode::worst ? *std::min_element(welfare.begin(), welfare.end())
                                          : *std::max_element(welfare.begin(), welfare.end());
  return w / opt.value;
}

}  // namespace smoothlearn
