#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "smoothlearn/geometry.hpp"
#include "smoothlearn/oracles.hpp"

using namespace smoothlearn;

TEST(Projection, MatchesGridOracle) {
  std::mt19937_64 gen(3);
  std::normal_distribution<double> normal(0.0, 1.5);
  for (int c = 0; c < 25; ++c) {
    Vec v(3);
    for (double& x : v) x = normal(gen);
    const Vec p = project_simplex(v);
    const Vec q = oracles::grid_projection3(v);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(p[k], q[k], 2e-3) << "case " << c;
  }
}

TEST(Projection, ObtuseAngleCondition) {
  // <v - P(v), y - P(v)> <= 0 for every y in the simplex.
  std::mt19937_64 gen(5);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::exponential_distribution<double> expo(1.0);
  for (int c = 0; c < 200; ++c) {
    const std::size_t d = 2 + c % 6;
    Vec v(d);
    for (double& x : v) x = normal(gen);
    const Vec p = project_simplex(v);
    ASSERT_TRUE(is_simplex_point(p));
    for (int s = 0; s < 20; ++s) {
      Vec y(d);
      double total = 0.0;
      for (double& x : y) total += (x = expo(gen));
      double inner = 0.0;
      for (std::size_t k = 0; k < d; ++k) inner += (v[k] - p[k]) * (y[k] / total - p[k]);
      EXPECT_LE(inner, 1e-12);
    }
  }
}

TEST(Projection, FixesSimplexPointsExactly) {
  const Vec x = {0.2, 0.3, 0.5};
  EXPECT_EQ(project_simplex(x), x);
  const Vec p = project_simplex(Vec{4.0, -1.0, 0.3});
  EXPECT_EQ(project_simplex(p), p);
}

TEST(Projection, KnownCases) {
  const Vec p = project_simplex(Vec{1.0, 1.0});
  EXPECT_DOUBLE_EQ(p[0], 0.5);
  EXPECT_DOUBLE_EQ(p[1], 0.5);
  const Vec q = project_simplex(Vec{2.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(q[0], 1.0);
  EXPECT_DOUBLE_EQ(q[1], 0.0);
  const Vec r = project_simplex(Vec{0.5, 0.5, -3.0});
  EXPECT_DOUBLE_EQ(r[0], 0.5);
  EXPECT_DOUBLE_EQ(r[2], 0.0);
}

TEST(Projection, IsNonexpansive) {
  std::mt19937_64 gen(9);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int c = 0; c < 500; ++c) {
    Vec a(4), b(4);
    for (double& x : a) x = normal(gen);
    for (double& x : b) x = normal(gen);
    EXPECT_LE(squared_distance(project_simplex(a), project_simplex(b)), squared_distance(a, b) + 1e-12);
  }
}

TEST(Prox, IsProjectionOfShiftedPoint) {
  const Vec x = {0.2, 0.5, 0.3};
  const Vec u = {0.4, -0.1, 0.0};
  const Vec expected = project_simplex(Vec{0.6, 0.4, 0.3});
  const Vec got = prox(x, u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], expected[k], 1e-15);
}

TEST(Prox, MaximizesLinearMinusDistance) {
  // Compare against a fine grid search of <y, u> - ||y - x||^2 / 2.
  const Vec x = {0.1, 0.6, 0.3};
  const Vec u = {0.3, -0.2, 0.5};
  const Vec p = prox(x, u);
  auto objective = [&](const Vec& y) { return dot(y, u) - 0.5 * squared_distance(y, x); };
  const double best = objective(p);
  for (int i = 0; i <= 200; ++i)
    for (int j = 0; i + j <= 200; ++j) {
      const Vec y = {i / 200.0, j / 200.0, (200 - i - j) / 200.0};
      EXPECT_LE(objective(y), best + 1e-12);
    }
}

TEST(Projection, RejectsBadInput) {
  EXPECT_THROW(project_simplex(Vec{}), Error);
  EXPECT_THROW(project_simplex(Vec{1.0, std::nan("")}), Error);
  EXPECT_THROW(project_simplex(Vec{INFINITY, 0.0}), Error);
}

TEST(Simplex, DiametersAndPoints) {
  EXPECT_DOUBLE_EQ(diameter(1), 0.0);
  EXPECT_DOUBLE_EQ(diameter(3), std::sqrt(2.0));
  const std::size_t dims[] = {2, 3, 1};
  EXPECT_DOUBLE_EQ(product_diameter(dims), 2.0);
  EXPECT_TRUE(is_simplex_point(uniform_point(5)));
  EXPECT_EQ(vertex(3, 1), (Vec{0.0, 1.0, 0.0}));
  EXPECT_FALSE(is_simplex_point(Vec{0.5, 0.6}));
  EXPECT_FALSE(is_simplex_point(Vec{1.1, -0.1}));
}
