#include <gtest/gtest.h>

#include <random>

#include "smoothlearn/bayesian.hpp"
#include "smoothlearn/smoothness.hpp"

using namespace smoothlearn;

namespace {

// Two claimants with values {1, 2}; actions {abstain, claim}. A lone claimant
// gets its value, two claimants get 0.75 of their values each.
BayesianGame claim_game() {
  const Vec values = {1.0, 2.0};
  std::vector<std::vector<Vec>> u(2, std::vector<Vec>(2, Vec(4, 0.0)));
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t v = 0; v < 2; ++v)
      for (std::size_t a0 = 0; a0 < 2; ++a0)
        for (std::size_t a1 = 0; a1 < 2; ++a1) {
          const std::size_t mine = i == 0 ? a0 : a1, other = i == 0 ? a1 : a0;
          u[i][v][a0 * 2 + a1] = mine == 0 ? 0.0 : (other == 0 ? values[v] : 0.75 * values[v]);
        }
  return BayesianGame({2, 2}, {2, 2}, u);
}

BayesianGame random_bayesian(const ActionCounts& actions, const std::vector<std::size_t>& types, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::size_t profiles = 1;
  for (std::size_t a : actions) profiles *= a;
  std::vector<std::vector<Vec>> u(actions.size());
  for (std::size_t i = 0; i < actions.size(); ++i)
    for (std::size_t v = 0; v < types[i]; ++v) {
      Vec t(profiles);
      for (double& x : t) x = unit(gen);
      u[i].push_back(t);
    }
  return BayesianGame(actions, types, u);
}

}  // namespace

TEST(AgentForm, SingletonTypesReproduceTheGame) {
  const NormalFormGame base = random_game({3, 2, 2}, 3);
  std::vector<std::vector<Vec>> single;
  for (std::size_t i = 0; i < 3; ++i) single.push_back({base.tensor(i)});
  const NormalFormGame iso = agent_form(BayesianGame(base.actions(), {1, 1, 1}, single));
  ASSERT_EQ(iso.actions(), base.actions());
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t idx = 0; idx < base.num_profiles(); ++idx)
      EXPECT_DOUBLE_EQ(iso.utility(i, idx), base.utility(i, idx));
}

TEST(AgentForm, UtilityAveragesOverTypes) {
  const BayesianGame bg = claim_game();
  const NormalFormGame g = agent_form(bg);
  ASSERT_EQ(g.num_players(), 4u);
  // Agents: (0, v=1), (0, v=2), (1, v=1), (1, v=2). Everyone claims except agent (1, v=2).
  const std::size_t idx = g.index_of(std::vector<std::size_t>{1, 1, 1, 0});
  // Agent (0, v=1) meets a claimant or an abstainer with equal odds: (0.75 + 1) / 4.
  EXPECT_DOUBLE_EQ(g.utility(0, idx), 0.4375);
  // Agent (1, v=2) abstains.
  EXPECT_DOUBLE_EQ(g.utility(3, idx), 0.0);
}

TEST(AgentForm, GapRescalingIdentity) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const BayesianGame bg = random_bayesian({2, 3}, {2, 3}, seed);
    const NormalFormGame g = agent_form(bg);
    std::mt19937_64 gen(seed + 100);
    BayesStrategy s(2);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t v = 0; v < bg.types()[i]; ++v) s[i].push_back(random_simplex_point(bg.actions()[i], gen));
    const auto gaps = bne_gap(bg, s);
    const GapReport agent = ne_gap(g, to_agent_profile(bg, s));
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t v = 0; v < bg.types()[i]; ++v)
        EXPECT_NEAR(gaps[i][v], static_cast<double>(bg.types()[i]) * agent.gaps[bg.agent_offset(i) + v], 1e-12);
  }
}

TEST(Mechanism, ClaimGameIsSmooth) {
  const BayesianGame bg = claim_game();
  const MechanismSmoothness m = mechanism_smoothness(bg, 1.0, 0.0);
  EXPECT_TRUE(m.smooth);
  EXPECT_DOUBLE_EQ(m.rho_game, 1.0);
  EXPECT_DOUBLE_EQ(m.rho_mechanism, 1.0);
  EXPECT_TRUE(is_smooth(agent_form(bg), 1.0, 0.0).smooth);

  const MechanismSmoothness too_much = mechanism_smoothness(bg, 1.5, 0.0);
  EXPECT_FALSE(too_much.smooth);
  ASSERT_TRUE(too_much.violating_types.has_value());
  EXPECT_THROW(mechanism_smoothness(bg, -1.0, 0.0), Error);
}

TEST(Bayesian, RejectsBadInput) {
  std::vector<std::vector<Vec>> neg = {{Vec{1, 1, 1, -0.1}}, {Vec{1, 1, 1, 1}}};
  EXPECT_THROW(BayesianGame({2, 2}, {1, 1}, neg), Error);
  std::vector<std::vector<Vec>> short_list = {{Vec(4, 1.0)}, {Vec(4, 1.0)}};
  EXPECT_THROW(BayesianGame({2, 2}, {2, 1}, short_list), Error);
  EXPECT_THROW(BayesianGame({2, 2}, {1, 1}, short_list, Vec{1, 1, 1, -1}), Error);

  const BayesianGame bg = claim_game();
  EXPECT_THROW(bne_gap(bg, BayesStrategy{{Vec{1, 0}}, {Vec{1, 0}, Vec{1, 0}}}), Error);
  EXPECT_THROW(bne_gap(bg, BayesStrategy{{Vec{1, 0}, Vec{0.7, 0.7}}, {Vec{1, 0}, Vec{1, 0}}}), Error);

  // Ten players with four types each: 2^40 agent profiles.
  const BayesianGame big = random_bayesian(ActionCounts(10, 2), std::vector<std::size_t>(10, 4), 1);
  try {
    agent_form(big);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::enumeration_too_large);
  }
}
