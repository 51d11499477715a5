#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "smoothlearn/error.hpp"

namespace smoothlearn {

using Vec = std::vector<double>;

inline constexpr double kSimplexSumTol = 1e-9;
inline constexpr double kSimplexNegTol = 1e-12;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

inline double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

/// True iff `x` is a probability vector: entries >= -1e-12 and sum within 1e-9 of one.
inline bool is_simplex_point(std::span<const double> x, double tol = kSimplexSumTol) {
  if (x.empty()) return false;
  double s = 0.0;
  for (double v : x) {
    if (!std::isfinite(v) || v < -kSimplexNegTol) return false;
    s += v;
  }
  return std::abs(s - 1.0) <= tol;
}

/// Euclidean projection onto the probability simplex (sort-and-threshold).
///
/// Sorting gives the threshold tau with sum(max(v - tau, 0)) = 1. The output is
/// clamped at zero and renormalized so downstream expectations stay valid.
inline Vec project_simplex(std::span<const double> v) {
  if (v.empty()) throw Error(ErrorCode::invalid_argument, "cannot project an empty vector");
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!std::isfinite(v[k])) {
      throw Error(ErrorCode::non_finite, "projection input entry " + std::to_string(k) + " is not finite");
    }
  }
  // Points already on the simplex up to rounding are returned untouched, which
  // makes the projection exactly idempotent.
  {
    double s = 0.0;
    bool nonneg = true;
    for (double x : v) {
      nonneg = nonneg && x >= 0.0;
      s += x;
    }
    const double rounding = 4.0 * static_cast<double>(v.size()) * std::numeric_limits<double>::epsilon();
    if (nonneg && std::abs(s - 1.0) <= rounding) return Vec(v.begin(), v.end());
  }
  Vec sorted(v.begin(), v.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double tau = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) tau = candidate;
  }
  Vec out(v.size());
  double total = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out[k] = std::max(v[k] - tau, 0.0);
    total += out[k];
  }
  if (total > 0.0 && total != 1.0) {
    for (double& o : out) o /= total;
  }
  return out;
}

/// argmax_{x'} <x', u> - 0.5 ||x - x'||^2 over the simplex, i.e. P(x + u).
inline Vec prox(std::span<const double> x, std::span<const double> u) {
  if (x.size() != u.size()) {
    throw Error(ErrorCode::dimension_mismatch,
                "prox: point has " + std::to_string(x.size()) + " entries, utility " + std::to_string(u.size()));
  }
  Vec shifted(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) shifted[k] = x[k] + u[k];
  return project_simplex(shifted);
}

/// l2-diameter of the simplex in dimension d.
inline double diameter(std::size_t d) {
  if (d == 0) throw Error(ErrorCode::invalid_argument, "simplex dimension must be >= 1");
  return d >= 2 ? std::sqrt(2.0) : 0.0;
}

/// Diameter of a product of simplices: D^2 = sum_i D_i^2.
inline double product_diameter(std::span<const std::size_t> dims) {
  double sq = 0.0;
  for (std::size_t d : dims) {
    const double di = diameter(d);
    sq += di * di;
  }
  return std::sqrt(sq);
}

inline Vec uniform_point(std::size_t d) { return Vec(d, 1.0 / static_cast<double>(d)); }

inline Vec vertex(std::size_t d, std::size_t k) {
  Vec e(d, 0.0);
  e.at(k) = 1.0;
  return e;
}

}  // namespace smoothlearn
