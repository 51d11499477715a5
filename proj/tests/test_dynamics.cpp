#include <gtest/gtest.h>

#include <limits>

#include "smoothlearn/builtins.hpp"
#include "smoothlearn/dynamics.hpp"
#include "smoothlearn/metrics.hpp"

using namespace smoothlearn;

TEST(Ogd, FirstTwoIteratesByHand) {
  // dominance game, eta = 0.1, uniform secondary iterate.
  const NormalFormGame g = builtins::dominance();
  const Trajectory traj = run_ogd(g, 0.1, 2);
  ASSERT_EQ(traj.size(), 2u);
  // x^1 = P(x_hat^1 + eta u(x_hat^1)): player 1 sees (0, 1), player 2 sees (0.5, 0.5).
  EXPECT_NEAR(traj.x(0, 0)[0], 0.45, 1e-15);
  EXPECT_NEAR(traj.x(0, 1)[0], 0.5, 1e-15);
  // x_hat^2 = P(x_hat^1 + eta u^1); x^2 = P(x_hat^2 + eta u^1).
  EXPECT_NEAR(traj.x_hat(1, 0)[0], 0.45, 1e-15);
  EXPECT_NEAR(traj.x_hat(1, 1)[0], 0.495, 1e-15);
  EXPECT_NEAR(traj.x(1, 0)[0], 0.4, 1e-15);
  EXPECT_NEAR(traj.x(1, 1)[0], 0.49, 1e-15);
  EXPECT_EQ(traj.prediction(1, 1)[1], traj.u(0, 1)[1]);
}

TEST(Ogd, RecordedUtilitiesMatchResimulation) {
  const NormalFormGame g = random_game({3, 2, 3}, 5);
  const Trajectory traj = run_ogd(g, 0.05, 200);
  for (std::size_t t = 0; t < traj.size(); t += 17) {
    const auto u = game_operator(g, traj.profile(t));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t a = 0; a < u[i].size(); ++a) EXPECT_DOUBLE_EQ(traj.u(t, i)[a], u[i][a]);
  }
  EXPECT_TRUE(traj.has_ogd_state());
}

TEST(Ogd, ZeroStepsAndBadRates) {
  const NormalFormGame g = builtins::mp();
  const Trajectory empty = run_ogd(g, 0.1, 0);
  EXPECT_TRUE(empty.empty());
  EXPECT_THROW(run_ogd(g, -0.1, 5), Error);
  EXPECT_THROW(run_ogd(g, std::numeric_limits<double>::infinity(), 5), Error);
  EXPECT_THROW(run_ogd(g, 0.1, 5, MixedProfile({{0.5, 0.5}})), Error);
}

TEST(Ogd, UniformInitIsFixedInMatchingPennies) {
  const Trajectory traj = run_ogd(builtins::mp(), 0.1, 50);
  for (std::size_t t = 0; t < traj.size(); ++t) EXPECT_DOUBLE_EQ(traj.x(t, 0)[0], 0.5);
}

TEST(Ogd, IteratesStayOnSimplex) {
  const Trajectory traj = run_ogd(builtins::shapley3(), 0.05, 500, builtins::reference_init("shapley3", builtins::shapley3()));
  for (std::size_t t = 0; t < traj.size(); t += 50)
    for (std::size_t i = 0; i < 3; ++i) EXPECT_TRUE(is_simplex_point(traj.x(t, i)));
}

TEST(Cgd, PicardResidualsContractAtRateEtaL) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const NormalFormGame g = random_game({2, 2, 2}, seed);
    const double L = lipschitz_bound(g);
    const double eta = default_cgd_eta(L);
    std::mt19937_64 gen(seed);
    const MixedProfile x = random_profile(g.actions(), gen);
    const FixedPoint fp = cgd_fixed_point(g, x, eta, 1e-13, L);
    for (std::size_t k = 1; k < fp.residuals.size(); ++k) {
      EXPECT_LE(fp.residuals[k], (eta * L + 1e-9) * fp.residuals[k - 1] + 1e-15);
    }
    EXPECT_LE(fp.residual, 1e-13);
    EXPECT_EQ(fp.iterations + 1, fp.residuals.size());
  }
}

TEST(Cgd, RejectsNonContractiveStep) {
  const NormalFormGame g = random_game({2, 2}, 3);
  const MixedProfile x = MixedProfile::uniform(g.actions());
  try {
    cgd_fixed_point(g, x, 1.0, 1e-6, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::invalid_argument);
  }
  EXPECT_THROW(cgd_fixed_point(g, x, 0.1, 0.0, 1.0), Error);
}

TEST(Cgd, BudgetExhaustionIsReported) {
  const NormalFormGame g = random_game({3, 3}, 6);
  const double L = lipschitz_bound(g);
  const MixedProfile x = MixedProfile::uniform(g.actions());
  try {
    cgd_fixed_point(g, x, 0.4 / L, 1e-14, L, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::iteration_budget);
  }
}

TEST(Cgd, TrajectoryRecordsAnchorsWithinTolerance) {
  const NormalFormGame g = random_game({2, 3}, 2);
  const double L = lipschitz_bound(g);
  const CgdSchedule schedule = CgdSchedule::standard(g.actions(), L);
  EXPECT_DOUBLE_EQ(schedule.eta, 1.0 / (2.0 * L));
  EXPECT_DOUBLE_EQ(schedule.tolerance(2), std::sqrt(2.0) / 4.0);
  const Trajectory traj = run_cgd(g, schedule, 300);
  ASSERT_TRUE(traj.has_cgd_state());
  for (std::size_t t = 0; t < traj.size(); ++t) {
    EXPECT_LE(traj.residual(t), traj.tolerance(t));
    // The iterate is the map applied to the anchor.
    const MixedProfile prev = t == 0 ? MixedProfile::uniform(g.actions()) : traj.profile(t - 1);
    for (std::size_t i = 0; i < 2; ++i) {
      Vec step(traj.anchor_utility(t, i).begin(), traj.anchor_utility(t, i).end());
      for (double& v : step) v *= schedule.eta;
      const Vec expected = prox(prev[i], step);
      for (std::size_t a = 0; a < expected.size(); ++a) EXPECT_NEAR(traj.x(t, i)[a], expected[a], 1e-14);
    }
  }
}

TEST(Cgd, WorksOnSuccinctGames) {
  const GraphicalGame gg = random_ring_graphical({2, 2, 2, 2}, 1);
  const double L = lipschitz_bound(gg);
  const Trajectory traj = run_cgd(gg, CgdSchedule::standard(gg.actions(), L), 50);
  EXPECT_EQ(traj.size(), 50u);
  const PolymatrixGame pm = random_polymatrix({3, 3, 3}, 0.7, 2);
  const Trajectory traj2 = run_ogd(pm, default_ogd_eta(lipschitz_bound(pm)), 50);
  EXPECT_EQ(traj2.size(), 50u);
}
