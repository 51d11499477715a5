#pragma once

// Slow reference implementations used to cross-check the fast paths.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "smoothlearn/games.hpp"
#include "smoothlearn/geometry.hpp"
#include "smoothlearn/lp.hpp"

namespace smoothlearn::oracles {

/// Nearest point of the grid {k / N} on the 3-simplex (N = 1/spacing).
inline Vec grid_projection3(std::span<const double> v, std::size_t N = 1000) {
  Vec best(3);
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= N; ++i) {
    for (std::size_t j = 0; i + j <= N; ++j) {
      const double p[3] = {static_cast<double>(i) / N, static_cast<double>(j) / N, static_cast<double>(N - i - j) / N};
      double d = 0.0;
      for (int k = 0; k < 3; ++k) d += (v[k] - p[k]) * (v[k] - p[k]);
      if (d < best_d) {
        best_d = d;
        best.assign(p, p + 3);
      }
    }
  }
  return best;
}

/// E_{a ~ x} u_i(a) by summing over every joint profile.
inline double expected_utility(const NormalFormGame& g, std::size_t i, const MixedProfile& x) {
  double total = 0.0;
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
    std::size_t rem = idx;
    double w = 1.0;
    for (std::size_t j = g.num_players(); j-- > 0;) {
      const std::size_t a = rem % g.num_actions(j);
      rem /= g.num_actions(j);
      w *= x[j][a];
    }
    total += w * g.utility(i, idx);
  }
  return total;
}

namespace detail {

inline std::optional<Vec> solve_dense(std::vector<Vec> M, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(M[r][c]) > std::abs(M[p][c])) p = r;
    if (std::abs(M[p][c]) < 1e-10) return std::nullopt;
    std::swap(M[p], M[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = M[r][c] / M[c][c];
      for (std::size_t k = c; k < n; ++k) M[r][k] -= f * M[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t r = n; r-- > 0;) {
    double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= M[r][k] * x[k];
    x[r] = s / M[r][r];
  }
  return x;
}

}  // namespace detail

/// Best objective over basic feasible points (every choice of n tight constraints).
/// Only meaningful for bounded programs; empty when no vertex is feasible.
inline std::optional<double> vertex_enumeration(const LinearProgram& lp, double tol = 1e-9) {
  const std::size_t n = lp.num_vars();
  std::vector<Vec> rows;
  Vec rhs;
  for (std::size_t r = 0; r < lp.G.size(); ++r) {
    rows.push_back(lp.G[r]);
    rhs.push_back(lp.h[r]);
  }
  for (std::size_t r = 0; r < lp.E.size(); ++r) {
    rows.push_back(lp.E[r]);
    rhs.push_back(lp.f[r]);
    Vec neg = lp.E[r];
    for (double& v : neg) v = -v;
    rows.push_back(neg);
    rhs.push_back(-lp.f[r]);
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(lp.upper[j])) {
      Vec e(n, 0.0);
      e[j] = 1.0;
      rows.push_back(e);
      rhs.push_back(lp.upper[j]);
    }
    if (std::isfinite(lp.lower[j])) {
      Vec e(n, 0.0);
      e[j] = -1.0;
      rows.push_back(e);
      rhs.push_back(-lp.lower[j]);
    }
  }
  const std::size_t m = rows.size();
  if (m < n) return std::nullopt;
  std::optional<double> best;
  std::vector<std::size_t> pick(n);
  for (std::size_t k = 0; k < n; ++k) pick[k] = k;
  while (true) {
    std::vector<Vec> M;
    Vec b;
    for (std::size_t k : pick) {
      M.push_back(rows[k]);
      b.push_back(rhs[k]);
    }
    if (auto y = detail::solve_dense(M, b)) {
      bool feasible = true;
      for (std::size_t r = 0; r < m && feasible; ++r) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += rows[r][j] * (*y)[j];
        feasible = s <= rhs[r] + tol * std::max(1.0, std::abs(rhs[r]));
      }
      if (feasible) {
        double val = 0.0;
        for (std::size_t j = 0; j < n; ++j) val += lp.c[j] * (*y)[j];
        if (!best || val > *best) best = val;
      }
    }
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == m - n + i - 1) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

/// All Nash equilibria of a generic 2x2 bimatrix game: pure cells plus the
/// interior mixed point when both indifference probabilities lie in (0, 1).
inline std::vector<MixedProfile> nash_2x2(const NormalFormGame& g) {
  auto A = [&](int r, int c) { return g.utility(0, static_cast<std::size_t>(r * 2 + c)); };
  auto B = [&](int r, int c) { return g.utility(1, static_cast<std::size_t>(r * 2 + c)); };
  std::vector<MixedProfile> out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) {
      if (A(r, c) >= A(1 - r, c) && B(r, c) >= B(r, 1 - c)) {
        out.push_back(MixedProfile({vertex(2, static_cast<std::size_t>(r)), vertex(2, static_cast<std::size_t>(c))}));
      }
    }
  const double dp = B(0, 0) - B(0, 1) - B(1, 0) + B(1, 1);
  const double dq = A(0, 0) - A(0, 1) - A(1, 0) + A(1, 1);
  if (dp != 0.0 && dq != 0.0) {
    const double p = (B(1, 1) - B(1, 0)) / dp;
    const double q = (A(1, 1) - A(0, 1)) / dq;
    if (p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) out.push_back(MixedProfile({{p, 1 - p}, {q, 1 - q}}));
  }
  return out;
}

}  // namespace smoothlearn::oracles
