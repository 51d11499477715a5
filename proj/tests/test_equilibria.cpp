#include <gtest/gtest.h>

#include "smoothlearn/builtins.hpp"
#include "smoothlearn/equilibria.hpp"
#include "smoothlearn/oracles.hpp"

using namespace smoothlearn;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::io;
}

}  // namespace

TEST(Bimatrix, MatchesClosedFormOn2x2) {
  for (std::uint64_t seed = 500; seed < 700; ++seed) {
    const NormalFormGame g = random_game({2, 2}, seed);
    const EquilibriumSet found = bimatrix_nash(g);
    const auto expected = oracles::nash_2x2(g);
    ASSERT_EQ(found.size(), expected.size()) << "seed " << seed;
    for (const auto& e : expected) {
      bool matched = false;
      for (const auto& m : found.members) matched = matched || profile_distance(m.x, e) <= 1e-9;
      EXPECT_TRUE(matched) << "seed " << seed;
    }
  }
}

TEST(Bimatrix, RockPaperScissors) {
  // Win 1, lose 0, tie 0.5: the unique equilibrium is uniform.
  const NormalFormGame g({3, 3}, {Vec{0.5, 0, 1, 1, 0.5, 0, 0, 1, 0.5}, Vec{0.5, 1, 0, 0, 0.5, 1, 1, 0, 0.5}});
  const EquilibriumSet ne = bimatrix_nash(g);
  ASSERT_EQ(ne.size(), 1u);
  for (double v : ne.members[0].x[0]) EXPECT_NEAR(v, 1.0 / 3.0, 1e-12);
  EXPECT_FALSE(ne.members[0].pure);
  EXPECT_NEAR(ne.members[0].welfare, 1.0, 1e-12);
}

TEST(Bimatrix, EveryMemberHasZeroGap) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const NormalFormGame g = random_game({4, 3}, seed);
    const EquilibriumSet ne = bimatrix_nash(g);
    // Nondegenerate games have an odd number of equilibria.
    EXPECT_EQ(ne.size() % 2, 1u) << "seed " << seed;
    for (const auto& e : ne.members) EXPECT_LE(ne_gap(g, e.x).ne_gap, kEquilibriumTol);
  }
  EXPECT_THROW(bimatrix_nash(builtins::shapley3()), Error);
  EXPECT_EQ(code_of([] { bimatrix_nash(random_game({6, 2}, 1)); }), ErrorCode::enumeration_too_large);
}

TEST(PureNash, Coordination) {
  const EquilibriumSet ne = pure_nash(builtins::barman_base());
  ASSERT_EQ(ne.size(), 2u);
  EXPECT_DOUBLE_EQ(ne.members[0].welfare, 2.0);
  EXPECT_DOUBLE_EQ(ne.members[1].welfare, 1.0);
  EXPECT_TRUE(pure_nash(builtins::mp()).empty());
}

TEST(Poa, KnownValues) {
  // The mixed equilibrium (1/3, 2/3) earns 2/3 against OPT = 2.
  EXPECT_NEAR(poa(builtins::barman_base(), PoaMode::worst), 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(poa(builtins::barman_base(), PoaMode::best), 1.0, 1e-9);
  EXPECT_NEAR(poa(builtins::mp(), PoaMode::worst), 1.0, 1e-9);
  EXPECT_NEAR(poa(builtins::dominance(), PoaMode::worst), 1.0, 1e-9);
}

TEST(Poa, ErrorsAreTyped) {
  EXPECT_EQ(code_of([] { poa(builtins::shapley3(), PoaMode::worst); }), ErrorCode::undetermined);
  const NormalFormGame zero({2, 2}, {Vec(4, 0.0), Vec(4, 0.0)});
  EXPECT_EQ(code_of([&] { poa(zero, PoaMode::worst); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { poa(builtins::shapley3(), PoaMode::worst, 0.1); }), ErrorCode::invalid_argument);
}

TEST(Poa, ApproximateEquilibriaWidenTheRange) {
  const NormalFormGame g = random_game({2, 3}, 4);
  const double exact_worst = poa(g, PoaMode::worst), exact_best = poa(g, PoaMode::best);
  const double loose_worst = poa(g, PoaMode::worst, 0.1), loose_best = poa(g, PoaMode::best, 0.1);
  EXPECT_LE(loose_worst, exact_worst + 1e-12);
  EXPECT_GE(loose_best, exact_best - 1e-12);
  EXPECT_LE(poa(g, PoaMode::worst, 0.2), loose_worst + 1e-12);
}
