#include <gtest/gtest.h>

#include <random>

#include "smoothlearn/lp.hpp"
#include "smoothlearn/oracles.hpp"

using namespace smoothlearn;

namespace {

bool satisfies(const LinearProgram& lp, const Vec& y, double tol = 1e-7) {
  for (std::size_t r = 0; r < lp.G.size(); ++r)
    if (dot(lp.G[r], y) > lp.h[r] + tol) return false;
  for (std::size_t r = 0; r < lp.E.size(); ++r)
    if (std::abs(dot(lp.E[r], y) - lp.f[r]) > tol) return false;
  for (std::size_t j = 0; j < y.size(); ++j)
    if (y[j] < lp.lower[j] - tol || y[j] > lp.upper[j] + tol) return false;
  return true;
}

}  // namespace

TEST(Simplex, TextbookMaximization) {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18 -> (2, 6), value 36.
  LinearProgram lp(2);
  lp.c = {3, 5};
  lp.add_le({1, 0}, 4);
  lp.add_le({0, 2}, 12);
  lp.add_le({3, 2}, 18);
  const LPSolution s = solve(lp);
  ASSERT_EQ(s.status, LPStatus::optimal);
  EXPECT_NEAR(s.value, 36.0, 1e-9);
  EXPECT_NEAR(s.y[0], 2.0, 1e-9);
  EXPECT_NEAR(s.y[1], 6.0, 1e-9);
}

TEST(Simplex, InfeasibleAndUnbounded) {
  LinearProgram inf(1);
  inf.c = {1};
  inf.add_le({1}, -1);  // y >= 0 and y <= -1
  EXPECT_EQ(solve(inf).status, LPStatus::infeasible);

  LinearProgram unb(2);
  unb.c = {1, 1};
  unb.add_le({1, -1}, 1);
  EXPECT_EQ(solve(unb).status, LPStatus::unbounded);
}

TEST(Simplex, FreeVariablesEqualitiesAndBounds) {
  // max -|s| style: max s s.t. s <= x - 2, x in [0, 1], s free -> s = -1.
  LinearProgram lp(2);
  lp.c = {0, 1};
  lp.upper[0] = 1.0;
  lp.set_free(1);
  lp.add_le({-1, 1}, -2);
  const LPSolution s = solve(lp);
  ASSERT_EQ(s.status, LPStatus::optimal);
  EXPECT_NEAR(s.value, -1.0, 1e-9);

  LinearProgram eq(3);
  eq.c = {1, 2, 3};
  eq.add_eq({1, 1, 1}, 1);
  eq.upper = {1, 1, 0.25};
  const LPSolution e = solve(eq);
  ASSERT_EQ(e.status, LPStatus::optimal);
  EXPECT_NEAR(e.value, 0.75 * 2 + 0.25 * 3, 1e-9);

  // Negative lower bound and an upper-only variable.
  LinearProgram nb(2);
  nb.c = {-1, -1};
  nb.lower = {-2, -kInf};
  nb.upper = {kInf, 3};
  nb.add_le({0, -1}, 1);
  const LPSolution n = solve(nb);
  ASSERT_EQ(n.status, LPStatus::optimal);
  EXPECT_NEAR(n.value, 2.0 + 1.0, 1e-9);
}

TEST(Simplex, DegenerateVertexTerminates) {
  // Several constraints tight at the optimum; Bland's rule must not cycle.
  LinearProgram lp(4);
  lp.c = {0.75, -20, 0.5, -6};
  lp.add_le({0.25, -8, -1, 9}, 0);
  lp.add_le({0.5, -12, -0.5, 3}, 0);
  lp.add_le({0, 0, 1, 0}, 1);
  const LPSolution s = solve(lp);
  ASSERT_EQ(s.status, LPStatus::optimal);
  EXPECT_NEAR(s.value, 1.25, 1e-9);
}

TEST(Simplex, RedundantEqualityRows) {
  LinearProgram lp(2);
  lp.c = {1, 0};
  lp.add_eq({1, 1}, 1);
  lp.add_eq({2, 2}, 2);
  const LPSolution s = solve(lp);
  ASSERT_EQ(s.status, LPStatus::optimal);
  EXPECT_NEAR(s.value, 1.0, 1e-9);
}

TEST(Simplex, MatchesVertexEnumeration) {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> vars(2, 8), rows(1, 20);
  std::size_t optimal = 0, infeasible = 0;
  for (int c = 0; c < 120; ++c) {
    const std::size_t n = vars(gen);
    // Keep the vertex oracle affordable for 8 variables.
    const std::size_t m = n > 5 ? std::min<std::size_t>(rows(gen), 6) : rows(gen) % 12 + 1;
    LinearProgram lp(n);
    for (double& v : lp.c) v = unit(gen);
    for (std::size_t j = 0; j < n; ++j) {
      lp.upper[j] = 1.0 + 0.5 * unit(gen);
      if (c % 2) lp.lower[j] = -1.0;
    }
    for (std::size_t r = 0; r < m; ++r) {
      Vec row(n);
      for (double& v : row) v = unit(gen);
      lp.add_le(row, unit(gen) + (c % 3 ? 0.6 : 0.0));
    }
    if (c % 4 == 0) {
      Vec row(n);
      for (double& v : row) v = unit(gen);
      lp.add_eq(row, 0.3 * unit(gen));
    }
    const LPSolution s = solve(lp);
    const auto oracle = oracles::vertex_enumeration(lp);
    ASSERT_NE(s.status, LPStatus::unbounded);
    ASSERT_EQ(s.status == LPStatus::optimal, oracle.has_value()) << "case " << c;
    if (oracle) {
      ++optimal;
      EXPECT_NEAR(s.value, *oracle, 1e-6) << "case " << c;
      EXPECT_TRUE(satisfies(lp, s.y));
    } else {
      ++infeasible;
    }
  }
  // Both outcomes should be exercised.
  EXPECT_GT(optimal, 50u);
  EXPECT_GT(infeasible, 0u);
}

TEST(Simplex, ValidatesInput) {
  LinearProgram lp(2);
  lp.G.push_back({1.0});
  lp.h.push_back(1.0);
  EXPECT_THROW(solve(lp), Error);
  LinearProgram bad(1);
  bad.lower[0] = 2.0;
  bad.upper[0] = 1.0;
  EXPECT_THROW(solve(bad), Error);
  LinearProgram nan(1);
  nan.c[0] = NAN;
  EXPECT_THROW(solve(nan), Error);
}
