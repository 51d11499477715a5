#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "smoothlearn/error.hpp"
#include "smoothlearn/games.hpp"

namespace smoothlearn::builtins {

namespace detail {

inline NormalFormGame bimatrix(std::size_t rows, std::size_t cols, Vec a, Vec b) {
  return NormalFormGame({rows, cols}, {std::move(a), std::move(b)});
}

}  // namespace detail

/// Three-player variant of Shapley's game: u1 = x1'A x2, u2 = x1'B x2, u3 = 3 - u1 - u2.
inline NormalFormGame shapley3() {
  const Vec A = {1, 1, 2, 2, 1, 1, 1, 2, 1};
  const Vec B = {1, 2, 1, 1, 1, 2, 2, 1, 1};
  ActionCounts actions = {3, 3, 3};
  std::vector<Vec> u(3, Vec(27));
  for (std::size_t a1 = 0; a1 < 3; ++a1)
    for (std::size_t a2 = 0; a2 < 3; ++a2)
      for (std::size_t a3 = 0; a3 < 3; ++a3) {
        const std::size_t idx = (a1 * 3 + a2) * 3 + a3;
        u[0][idx] = A[a1 * 3 + a2];
        u[1][idx] = B[a1 * 3 + a2];
        u[2][idx] = 3.0 - A[a1 * 3 + a2] - B[a1 * 3 + a2];
      }
  return NormalFormGame(std::move(actions), std::move(u));
}

/// Smooth bimatrix game on which optimistic play cycles (OPT = 1.6).
inline NormalFormGame counterexample() {
  return detail::bimatrix(4, 4,
                          {0.2, 0.8, 0.9, 0.3,
                           0.2, 0.8, 0.2, 0.3,
                           0.9, 0.2, 0.4, 0.4,
                           0.6, 0.9, 0.3, 0.1},
                          {0.4, 0.2, 0.0, 0.1,
                           0.5, 0.0, 0.2, 0.8,
                           0.7, 0.8, 0.0, 0.4,
                           0.0, 0.0, 0.1, 0.4});
}

/// Shapley's 3x3 bimatrix game; every off-diagonal cell has welfare 1.
inline NormalFormGame shapley2() {
  return detail::bimatrix(3, 3, {0, 0, 1, 1, 0, 0, 0, 1, 0}, {0, 1, 0, 0, 0, 1, 1, 0, 0});
}

/// 2x2 game whose top row is strictly dominated.
inline NormalFormGame dominance() { return detail::bimatrix(2, 2, {0, 0, 1, 1}, {1, 0, 0, 1}); }

/// Matching pennies written as a constant-sum game with values in {0, 1}.
inline NormalFormGame mp() { return detail::bimatrix(2, 2, {1, 0, 0, 1}, {0, 1, 1, 0}); }

/// 2x2 coordination game; (0, 0) has welfare 2 and (1, 1) welfare 1.
inline NormalFormGame barman_base() { return detail::bimatrix(2, 2, {1, 0, 0, 0.5}, {1, 0, 0, 0.5}); }

inline constexpr double kBarmanDemoThreshold = 1.5;

/// Fallback-augmented coordination game (k = 1.5, eps = k).
inline NormalFormGame barman_demo() { return barman_augment(barman_base(), kBarmanDemoThreshold, kBarmanDemoThreshold); }

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> list = {"shapley3", "counterexample", "shapley2",
                                                "dominance", "mp",             "barman-demo"};
  return list;
}

inline bool exists(std::string_view name) {
  for (const auto& n : names())
    if (n == name) return true;
  return false;
}

inline NormalFormGame get(std::string_view name) {
  if (name == "shapley3") return shapley3();
  if (name == "counterexample") return counterexample();
  if (name == "shapley2") return shapley2();
  if (name == "dominance") return dominance();
  if (name == "mp") return mp();
  if (name == "barman-demo") return barman_demo();
  throw Error(ErrorCode::invalid_argument, "unknown builtin game '" + std::string(name) + "'");
}

/// Initial secondary iterate used for the builtin's reference OGD run.
inline MixedProfile reference_init(std::string_view name, const NormalFormGame& g) {
  if (name == "shapley3") {
    return MixedProfile({{0.5, 0.25, 0.25}, {0.25, 0.5, 0.25}, uniform_point(3)});
  }
  return MixedProfile::uniform(g.actions());
}

}  // namespace smoothlearn::builtins
