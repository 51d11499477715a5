#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "smoothlearn/error.hpp"
#include "smoothlearn/geometry.hpp"

namespace smoothlearn {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPivotTol = 1e-9;
inline constexpr double kFeasibilityTol = 1e-7;

/// maximize c.y  subject to  G y <= h,  E y = f,  lower <= y <= upper.
/// Equality rows are optional; lower/upper default to [0, +inf).
struct LinearProgram {
  Vec c;
  std::vector<Vec> G;
  Vec h;
  std::vector<Vec> E;
  Vec f;
  Vec lower;
  Vec upper;

  explicit LinearProgram(std::size_t num_vars = 0)
      : c(num_vars, 0.0), lower(num_vars, 0.0), upper(num_vars, kInf) {}

  std::size_t num_vars() const { return c.size(); }

  void add_le(Vec row, double rhs) {
    G.push_back(std::move(row));
    h.push_back(rhs);
  }
  void add_eq(Vec row, double rhs) {
    E.push_back(std::move(row));
    f.push_back(rhs);
  }
  void set_free(std::size_t j) {
    lower[j] = -kInf;
    upper[j] = kInf;
  }

  void validate() const {
    const std::size_t n = c.size();
    if (lower.size() != n || upper.size() != n) {
      throw Error(ErrorCode::dimension_mismatch, "bounds must have one entry per variable");
    }
    if (G.size() != h.size() || E.size() != f.size()) {
      throw Error(ErrorCode::dimension_mismatch, "constraint rows and right-hand sides differ in count");
    }
    auto check_row = [n](const Vec& row, std::size_t r, const char* kind) {
      if (row.size() != n) {
        throw Error(ErrorCode::dimension_mismatch, std::string(kind) + " row " + std::to_string(r) + " has " +
                                                       std::to_string(row.size()) + " coefficients, expected " +
                                                       std::to_string(n));
      }
      for (double v : row)
        if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, std::string(kind) + " row " + std::to_string(r));
    };
    for (std::size_t r = 0; r < G.size(); ++r) check_row(G[r], r, "inequality");
    for (std::size_t r = 0; r < E.size(); ++r) check_row(E[r], r, "equality");
    for (double v : c)
      if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "objective coefficient");
    for (double v : h)
      if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "inequality right-hand side");
    for (double v : f)
      if (!std::isfinite(v)) throw Error(ErrorCode::non_finite, "equality right-hand side");
    for (std::size_t j = 0; j < n; ++j) {
      if (std::isnan(lower[j]) || std::isnan(upper[j]) || lower[j] > upper[j] || lower[j] == kInf ||
          upper[j] == -kInf) {
        throw Error(ErrorCode::invalid_argument, "variable " + std::to_string(j) + " has inconsistent bounds");
      }
    }
  }
};

enum class LPStatus { optimal, infeasible, unbounded };

inline const char* to_string(LPStatus s) {
  switch (s) {
    case LPStatus::optimal: return "optimal";
    case LPStatus::infeasible: return "infeasible";
    case LPStatus::unbounded: return "unbounded";
  }
  return "unknown";
}

struct LPSolution {
  LPStatus status = LPStatus::infeasible;
  double value = 0.0;
  Vec y;
  std::size_t pivots = 0;
};

namespace detail {

// How an original variable maps onto nonnegative tableau columns.
struct VarMap {
  enum Kind { shifted, flipped, split } kind = shifted;
  double offset = 0.0;
  std::size_t col = 0;  // split uses col and col + 1
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  double& obj(std::size_t c) { return at(m_, c); }  // reduced costs; at(m_, n_) = -objective
  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t e) {
    const double p = at(r, e);
    for (std::size_t c = 0; c <= n_; ++c) at(r, c) /= p;
    at(r, e) = 1.0;
    for (std::size_t k = 0; k <= m_; ++k) {
      if (k == r) continue;
      const double factor = at(k, e);
      if (factor == 0.0) continue;
      for (std::size_t c = 0; c <= n_; ++c) at(k, c) -= factor * at(r, c);
      at(k, e) = 0.0;
    }
    basis_[r] = e;
  }

  void drop_row(std::size_t r) {
    std::vector<double> next;
    next.reserve(m_ * (n_ + 1));
    for (std::size_t k = 0; k <= m_; ++k) {
      if (k == r) continue;
      for (std::size_t c = 0; c <= n_; ++c) next.push_back(at(k, c));
    }
    t_ = std::move(next);
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
    --m_;
  }

  // Runs Bland's rule on the current objective row over columns [0, allowed).
  // Returns false if unbounded.
  bool optimize(std::size_t allowed, std::size_t& pivots) {
    const std::size_t budget = 50'000 + 100 * (m_ + n_);
    for (;;) {
      std::size_t entering = n_;
      for (std::size_t c = 0; c < allowed; ++c) {
        if (obj(c) > kPivotTol) {
          entering = c;
          break;
        }
      }
      if (entering == n_) return true;
      std::size_t leaving = m_;
      double best = kInf;
      for (std::size_t r = 0; r < m_; ++r) {
        const double a = at(r, entering);
        if (a <= kPivotTol) continue;
        const double ratio = std::max(rhs(r), 0.0) / a;
        const double slack = leaving == m_ ? 0.0 : 1e-12 * std::max(1.0, best);
        if (leaving == m_ || ratio < best - slack) {
          best = ratio;
          leaving = r;
        } else if (ratio <= best + slack && basis_[r] < basis_[leaving]) {
          best = std::min(best, ratio);
          leaving = r;
        }
      }
      if (leaving == m_) return false;
      pivot(leaving, entering);
      if (++pivots > budget) {
        throw Error(ErrorCode::lp_ill_conditioned,
                    "pivot budget exceeded at pivot " + std::to_string(pivots) + " (column " +
                        std::to_string(entering) + ")");
      }
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

}  // namespace detail

/// Two-phase dense simplex with Bland's anti-cycling rule.
inline LPSolution solve(const LinearProgram& lp) {
  lp.validate();
  const std::size_t n = lp.num_vars();

  // Map bounded variables to nonnegative columns.
  std::vector<detail::VarMap> vars(n);
  std::size_t structural = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (std::isfinite(lp.lower[j])) {
      vars[j] = {detail::VarMap::shifted, lp.lower[j], structural++};
    } else if (std::isfinite(lp.upper[j])) {
      vars[j] = {detail::VarMap::flipped, lp.upper[j], structural++};
    } else {
      vars[j] = {detail::VarMap::split, 0.0, structural};
      structural += 2;
    }
  }

  struct Row {
    Vec coef;  // over structural columns
    double rhs;
    bool equality;
  };
  std::vector<Row> rows;
  auto translate = [&](const Vec& src, double rhs, bool eq) {
    Row row{Vec(structural, 0.0), rhs, eq};
    for (std::size_t j = 0; j < n; ++j) {
      const double a = src[j];
      if (a == 0.0) continue;
      const auto& v = vars[j];
      switch (v.kind) {
        case detail::VarMap::shifted:
          row.coef[v.col] += a;
          row.rhs -= a * v.offset;
          break;
        case detail::VarMap::flipped:
          row.coef[v.col] -= a;
          row.rhs -= a * v.offset;
          break;
        case detail::VarMap::split:
          row.coef[v.col] += a;
          row.coef[v.col + 1] -= a;
          break;
      }
    }
    rows.push_back(std::move(row));
  };
  for (std::size_t r = 0; r < lp.G.size(); ++r) translate(lp.G[r], lp.h[r], false);
  for (std::size_t j = 0; j < n; ++j) {
    if (vars[j].kind == detail::VarMap::shifted && std::isfinite(lp.upper[j])) {
      Vec e(n, 0.0);
      e[j] = 1.0;
      translate(e, lp.upper[j], false);
    }
  }
  for (std::size_t r = 0; r < lp.E.size(); ++r) translate(lp.E[r], lp.f[r], true);

  // Column layout: structural | one slack per inequality | artificials.
  const std::size_t m = rows.size();
  std::size_t slacks = 0;
  for (const auto& row : rows) slacks += row.equality ? 0 : 1;
  std::size_t artificials = 0;
  for (const auto& row : rows) artificials += (row.equality || row.rhs < 0.0) ? 1 : 0;
  const std::size_t first_art = structural + slacks;
  const std::size_t total_cols = first_art + artificials;

  detail::Tableau tab(m, total_cols);
  std::size_t slack_col = structural;
  std::size_t art_col = first_art;
  for (std::size_t r = 0; r < m; ++r) {
    const auto& row = rows[r];
    const double sign = row.rhs < 0.0 ? -1.0 : 1.0;
    for (std::size_t c = 0; c < structural; ++c) tab.at(r, c) = sign * row.coef[c];
    tab.rhs(r) = sign * row.rhs;
    if (!row.equality) {
      tab.at(r, slack_col) = sign;
      if (sign > 0.0) tab.basis()[r] = slack_col;
      ++slack_col;
    }
    if (row.equality || sign < 0.0) {
      tab.at(r, art_col) = 1.0;
      tab.basis()[r] = art_col;
      ++art_col;
    }
  }

  LPSolution sol;

  // Phase 1: maximize -sum(artificials).
  if (artificials > 0) {
    for (std::size_t r = 0; r < m; ++r) {
      if (tab.basis()[r] < first_art) continue;
      for (std::size_t c = 0; c <= total_cols; ++c) {
        if (c < first_art || c == total_cols) tab.obj(c) += tab.at(r, c);
      }
    }
    tab.optimize(total_cols, sol.pivots);
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < tab.rows(); ++r) {
      if (tab.basis()[r] >= first_art) infeasibility += std::max(tab.rhs(r), 0.0);
    }
    if (infeasibility > kFeasibilityTol) {
      sol.status = LPStatus::infeasible;
      return sol;
    }
    // Drive remaining artificials out of the basis; drop redundant rows.
    for (std::size_t r = 0; r < tab.rows();) {
      if (tab.basis()[r] < first_art) {
        ++r;
        continue;
      }
      std::size_t entering = first_art;
      double best = kPivotTol;
      for (std::size_t c = 0; c < first_art; ++c) {
        if (std::abs(tab.at(r, c)) > best) {
          best = std::abs(tab.at(r, c));
          entering = c;
        }
      }
      if (entering == first_art) {
        tab.drop_row(r);
      } else {
        tab.pivot(r, entering);
        ++sol.pivots;
        ++r;
      }
    }
  }

  // Phase 2 objective in terms of structural columns.
  Vec cost(total_cols, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = vars[j];
    switch (v.kind) {
      case detail::VarMap::shifted: cost[v.col] += lp.c[j]; break;
      case detail::VarMap::flipped: cost[v.col] -= lp.c[j]; break;
      case detail::VarMap::split:
        cost[v.col] += lp.c[j];
        cost[v.col + 1] -= lp.c[j];
        break;
    }
  }
  for (std::size_t c = 0; c <= total_cols; ++c) tab.obj(c) = c < total_cols ? cost[c] : 0.0;
  for (std::size_t r = 0; r < tab.rows(); ++r) {
    const double cb = cost[tab.basis()[r]];
    if (cb == 0.0) continue;
    for (std::size_t c = 0; c <= total_cols; ++c) tab.obj(c) -= cb * tab.at(r, c);
  }
  if (!tab.optimize(first_art, sol.pivots)) {
    sol.status = LPStatus::unbounded;
    return sol;
  }

  Vec col_value(total_cols, 0.0);
  for (std::size_t r = 0; r < tab.rows(); ++r) col_value[tab.basis()[r]] = std::max(tab.rhs(r), 0.0);
  sol.y.assign(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = vars[j];
    switch (v.kind) {
      case detail::VarMap::shifted: sol.y[j] = v.offset + col_value[v.col]; break;
      case detail::VarMap::flipped: sol.y[j] = v.offset - col_value[v.col]; break;
      case detail::VarMap::split: sol.y[j] = col_value[v.col] - col_value[v.col + 1]; break;
    }
  }
  sol.value = dot(lp.c, sol.y);
  sol.status = LPStatus::optimal;

  // Re-verify against the original constraints.
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::lp_ill_conditioned,
                what + " violated at returned point after " + std::to_string(sol.pivots) + " pivots");
  };
  for (std::size_t r = 0; r < lp.G.size(); ++r) {
    const double scale = std::max(1.0, std::abs(lp.h[r]));
    if (dot(lp.G[r], sol.y) - lp.h[r] > kFeasibilityTol * scale) fail("inequality row " + std::to_string(r));
  }
  for (std::size_t r = 0; r < lp.E.size(); ++r) {
    const double scale = std::max(1.0, std::abs(lp.f[r]));
    if (std::abs(dot(lp.E[r], sol.y) - lp.f[r]) > kFeasibilityTol * scale) fail("equality row " + std::to_string(r));
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (sol.y[j] < lp.lower[j] - kFeasibilityTol || sol.y[j] > lp.upper[j] + kFeasibilityTol) {
      fail("bound on variable " + std::to_string(j));
    }
  }
  return sol;
}

}  // namespace smoothlearn
