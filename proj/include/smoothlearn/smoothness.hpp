#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "smoothlearn/error.hpp"
#include "smoothlearn/games.hpp"
#include "smoothlearn/lp.hpp"

namespace smoothlearn {

/// Cap on the dual scalar(s) when breaking ties among optimal rPoA solutions.
inline constexpr double kDualCap = 1e6;
inline constexpr double kDegenerateZ = 1e-9;

/// sum_i u_i(a*_i, a_{-i}) for the pure profile at `index`.
inline double deviation_welfare(const NormalFormGame& g, std::span<const std::size_t> a_star, std::size_t index) {
  double s = 0.0;
  for (std::size_t i = 0; i < g.num_players(); ++i) s += g.utility(i, g.deviate(index, i, a_star[i]));
  return s;
}

struct SmoothnessCertificate {
  double rho = 0.0;
  double z = 0.0;             // uniform LP
  Vec z_i;                    // weighted LP
  bool weighted = false;
  std::optional<double> lambda;
  std::optional<double> mu;
  PureProfile a_star;
  double z_min = 0.0;
  bool degenerate = false;    // dual weight(s) all zero: unbounded-parameter smoothness
  double opt = 0.0;
};

struct SmoothCheck {
  bool smooth = false;
  PureProfile a_star;                 // reference profile that certifies (or the first tried)
  std::optional<PureProfile> witness; // most violated profile when not smooth
  double worst_slack = 0.0;
};

/// Checks sum_i u_i(a*_i, a_{-i}) >= lambda OPT - mu SW(a) for every pure a, trying
/// every welfare-maximizing a*.
inline SmoothCheck is_smooth(const NormalFormGame& g, double lambda, double mu, double tol = 1e-9) {
  if (!(lambda > 0.0) || !(mu > -1.0)) throw Error(ErrorCode::invalid_argument, "need lambda > 0 and mu > -1");
  const Optimum opt = optimal_welfare(g);
  SmoothCheck first;
  for (std::size_t k = 0; k < opt.maximizers.size(); ++k) {
    const auto& a_star = opt.maximizers[k];
    SmoothCheck c;
    c.a_star = a_star;
    c.worst_slack = std::numeric_limits<double>::infinity();
    std::size_t worst_idx = 0;
    for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
      const double slack = deviation_welfare(g, a_star, idx) - lambda * opt.value + mu * g.welfare(idx);
      if (slack < c.worst_slack) {
        c.worst_slack = slack;
        worst_idx = idx;
      }
    }
    c.smooth = c.worst_slack >= -tol;
    if (c.smooth) return c;
    c.witness = g.profile_of(worst_idx);
    if (k == 0) first = c;
  }
  return first;
}

namespace detail {

inline void require_positive_opt(const Optimum& opt) {
  if (!(opt.value > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "robust price of anarchy needs OPT > 0 (got " +
                                                 std::to_string(opt.value) + ")");
  }
}

// rPoA LP for one reference profile. Variables: rho, then weights (1 or n).
inline LinearProgram rpoa_program(const NormalFormGame& g, const PureProfile& a_star, double opt, bool weighted,
                                  double floor, std::optional<double> ratio_bound) {
  const std::size_t n = g.num_players();
  const std::size_t nz = weighted ? n : 1;
  LinearProgram lp(1 + nz);
  lp.set_free(0);
  for (std::size_t j = 1; j <= nz; ++j) lp.lower[j] = floor;
  lp.c[0] = 1.0;
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
    Vec row(1 + nz, 0.0);
    row[0] = opt;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = g.utility(i, g.deviate(idx, i, a_star[i])) - g.utility(i, idx);
      row[weighted ? 1 + i : 1] -= d;
    }
    lp.add_le(std::move(row), g.welfare(idx));
  }
  if (weighted && ratio_bound) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        Vec row(1 + nz, 0.0);
        row[1 + i] = 1.0;
        row[1 + j] = -*ratio_bound;
        lp.add_le(std::move(row), 0.0);
      }
  }
  return lp;
}

inline SmoothnessCertificate solve_rpoa(const NormalFormGame& g, bool weighted, double floor,
                                        std::optional<double> ratio_bound) {
  const Optimum opt = optimal_welfare(g);
  require_positive_opt(opt);
  const std::size_t nz = weighted ? g.num_players() : 1;
  std::optional<SmoothnessCertificate> best;
  for (const auto& a_star : opt.maximizers) {
    LinearProgram lp = rpoa_program(g, a_star, opt.value, weighted, floor, ratio_bound);
    const LPSolution primary = solve(lp);
    if (primary.status != LPStatus::optimal) {
      throw Error(ErrorCode::lp_ill_conditioned,
                  std::string("rPoA program returned status ") + to_string(primary.status));
    }
    const double rho = primary.y[0];
    if (best && rho <= best->rho + 1e-12) continue;

    // The optimal face in the dual weights, with rho pinned at its optimum.
    auto face = [&](double sense, double cap) {
      LinearProgram tie(nz);
      for (std::size_t j = 0; j < nz; ++j) {
        tie.c[j] = sense;
        tie.lower[j] = floor;
        tie.upper[j] = std::max(floor, cap);
      }
      for (std::size_t r = 0; r < lp.G.size(); ++r) {
        Vec row(lp.G[r].begin() + 1, lp.G[r].end());
        tie.add_le(std::move(row), lp.h[r] - lp.G[r][0] * rho + 1e-12 * std::max(1.0, std::abs(lp.h[r])));
      }
      return solve(tie);
    };
    Vec z(primary.y.begin() + 1, primary.y.end());
    const LPSolution widest = face(1.0, kDualCap);
    bool forced_zero = false;
    if (widest.status == LPStatus::optimal) {
      forced_zero = *std::max_element(widest.y.begin(), widest.y.end()) <= kDegenerateZ;
      // Prefer weights closest to 1 from below (lambda = rho, mu = 0 when available).
      const LPSolution unit = face(1.0, 1.0);
      if (unit.status == LPStatus::optimal) {
        z = unit.y;
      } else {
        const LPSolution smallest = face(-1.0, kDualCap);
        if (smallest.status == LPStatus::optimal) z = smallest.y;
      }
    }
    if (forced_zero) std::fill(z.begin(), z.end(), floor);

    SmoothnessCertificate cert;
    cert.rho = rho;
    cert.weighted = weighted;
    cert.a_star = a_star;
    cert.z_min = floor;
    cert.opt = opt.value;
    if (weighted) {
      cert.z_i = z;
    } else {
      cert.z = z[0];
    }
    double zmax = 0.0;
    for (double v : z) zmax = std::max(zmax, v);
    cert.degenerate = forced_zero || zmax <= kDegenerateZ;
    if (!weighted && !cert.degenerate) {
      cert.lambda = rho / cert.z;
      cert.mu = 1.0 / cert.z - 1.0;
    }
    best = cert;
  }
  return *best;
}

}  // namespace detail

/// maximize rho s.t. rho OPT - z sum_i (u_i(a*_i, a_{-i}) - u_i(a)) <= SW(a) for all a, z >= z_min.
inline SmoothnessCertificate rpoa(const NormalFormGame& g, double z_min = 0.0) {
  if (!(z_min >= 0.0)) throw Error(ErrorCode::invalid_argument, "z_min must be nonnegative");
  return detail::solve_rpoa(g, false, z_min, std::nullopt);
}

/// Per-player dual weights z_i, optionally with z_i <= ratio_bound z_j and z_i >= z_floor.
inline SmoothnessCertificate weighted_rpoa(const NormalFormGame& g, std::optional<double> ratio_bound = std::nullopt,
                                           std::optional<double> z_floor = std::nullopt) {
  if (ratio_bound && !(*ratio_bound >= 1.0)) throw Error(ErrorCode::invalid_argument, "ratio bound must be >= 1");
  const double floor = z_floor.value_or(0.0);
  if (!(floor >= 0.0)) throw Error(ErrorCode::invalid_argument, "z floor must be nonnegative");
  return detail::solve_rpoa(g, true, floor, ratio_bound);
}

/// Largest violation of the certificate's constraints (<= 0 means sound).
inline double certificate_violation(const NormalFormGame& g, const SmoothnessCertificate& c) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
    double dual = 0.0;
    for (std::size_t i = 0; i < g.num_players(); ++i) {
      const double d = g.utility(i, g.deviate(idx, i, c.a_star[i])) - g.utility(i, idx);
      dual += (c.weighted ? c.z_i[i] : c.z) * d;
    }
    worst = std::max(worst, c.rho * c.opt - dual - g.welfare(idx));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Minty certificate

struct MintyCertificate {
  bool feasible = false;
  MixedProfile x_star;
  double worst_slack = 0.0;  // min_a sum_i u_i(x*_i, a_{-i}) - SW(a)
};

/// Finds x* maximizing min_a [sum_i <x*_i, u_i(., a_{-i})> - SW(a)].
inline MintyCertificate minty_certificate(const NormalFormGame& g, double tol = 1e-7) {
  const std::size_t n = g.num_players();
  std::vector<std::size_t> offset(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) offset[i + 1] = offset[i] + g.num_actions(i);
  const std::size_t dim = offset[n];
  LinearProgram lp(dim + 1);
  lp.set_free(dim);
  lp.c[dim] = 1.0;
  for (std::size_t idx = 0; idx < g.num_profiles(); ++idx) {
    Vec row(dim + 1, 0.0);
    row[dim] = 1.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t a = 0; a < g.num_actions(i); ++a) row[offset[i] + a] = -g.utility(i, g.deviate(idx, i, a));
    lp.add_le(std::move(row), -g.welfare(idx));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Vec row(dim + 1, 0.0);
    for (std::size_t a = 0; a < g.num_actions(i); ++a) row[offset[i] + a] = 1.0;
    lp.add_eq(std::move(row), 1.0);
  }
  const LPSolution sol = solve(lp);
  if (sol.status != LPStatus::optimal) {
    throw Error(ErrorCode::lp_ill_conditioned, std::string("Minty program returned status ") + to_string(sol.status));
  }
  MintyCertificate cert;
  for (std::size_t i = 0; i < n; ++i) {
    Vec xi(sol.y.begin() + static_cast<std::ptrdiff_t>(offset[i]),
           sol.y.begin() + static_cast<std::ptrdiff_t>(offset[i + 1]));
    for (double& v : xi) v = std::max(v, 0.0);
    cert.x_star.strategies.push_back(project_simplex(xi));
  }
  cert.worst_slack = sol.y[dim];
  cert.feasible = cert.worst_slack >= -tol;
  return cert;
}

// ---------------------------------------------------------------------------
// Convergence bounds and horizons

struct GuaranteeConstants {
  double max_d2 = 0.0;  // max_i D_i^2
  double max_b2 = 0.0;  // max_i B_i^2
  double d_x2 = 0.0;    // sum_i D_i^2
  double opt = 0.0;
};

inline GuaranteeConstants guarantee_constants(const NormalFormGame& g) {
  GuaranteeConstants c;
  for (std::size_t i = 0; i < g.num_players(); ++i) {
    const double d = diameter(g.num_actions(i));
    c.max_d2 = std::max(c.max_d2, d * d);
    c.d_x2 += d * d;
    const double b = utility_norm_bound(g, i);
    c.max_b2 = std::max(c.max_b2, b * b);
  }
  c.opt = optimal_welfare(g).value;
  return c;
}

/// Upper bound on min_t sum_i BRGap_i^2 after T steps of OGD at rate eta.
inline double best_iterate_bound(const GuaranteeConstants& c, double eta, std::size_t T, double eps_n, double mu) {
  if (T == 0) throw Error(ErrorCode::invalid_argument, "horizon must be positive");
  const double lead = c.max_d2 / (eta * eta) + c.max_b2;
  if (eps_n <= 0.0) return 8.0 / static_cast<double>(T) * lead * c.d_x2;
  return 4.0 * lead * (2.0 * c.d_x2 / static_cast<double>(T) + 4.0 * eta * eps_n * (1.0 + mu) * c.opt);
}

/// Bound reached at the horizon: 32 (max D^2/eta^2 + max B^2) eta eps_n (1+mu) OPT.
inline double horizon_bound(const GuaranteeConstants& c, double eta, double eps_n, double mu) {
  return 32.0 * (c.max_d2 / (eta * eta) + c.max_b2) * eta * eps_n * (1.0 + mu) * c.opt;
}

/// T = ceil(D_X^2 / (2 eta eps_n (1 + mu) OPT)); empty when eps_n <= 0 (use the 1/T branch).
inline std::optional<std::size_t> horizon(const GuaranteeConstants& c, double eps_n, double mu, double eta) {
  if (eps_n <= 0.0) return std::nullopt;
  if (!(eta > 0.0) || !(mu > -1.0) || !(c.opt > 0.0)) {
    throw Error(ErrorCode::invalid_argument, "horizon needs eta > 0, mu > -1 and OPT > 0");
  }
  return static_cast<std::size_t>(std::ceil(c.d_x2 / (2.0 * eta * eps_n * (1.0 + mu) * c.opt)));
}

/// Minimum T for the clairvoyant welfare guarantee: 64 L^2 D_X^4 / eps0^2.
inline double cgd_horizon_gate(double lipschitz, double d_x2, double eps0) {
  if (!(eps0 > 0.0)) throw Error(ErrorCode::invalid_argument, "eps0 must be positive");
  return 64.0 * lipschitz * lipschitz * d_x2 * d_x2 / (eps0 * eps0);
}

}  // namespace smoothlearn
