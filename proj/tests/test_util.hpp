#pragma once

#include <cmath>
#include <random>
#include <string>

#include "quasumb/expr.hpp"
#include "quasumb/generators.hpp"
#include "quasumb/mink_algebra.hpp"

namespace quasumb::testing {

/// Fixed-seed generator so every run sees the same samples.
inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng());
}

inline MVec3 random_vec(double scale = 1.0) {
  return {uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)};
}

/// theta1 = a u + b sin(c u) with a > |b c| (strictly increasing or, with a
/// sign flip, decreasing); theta2 = theta1 + pi + d sin(e u) with |d| < 1.
inline ThetaSpec random_theta_spec() {
  const double c = uniform(0.5, 2), b = uniform(-0.5, 0.5);
  const double a = (std::abs(b * c) + uniform(0.2, 1.5)) * (uniform(0, 1) < 0.5 ? -1 : 1);
  const double d = uniform(-0.9, 0.9), e = uniform(0.3, 2);
  const std::string t1 = format_number(a) + "*u + " + format_number(b) + "*sin(" + format_number(c) + "*u)";
  const std::string t2 = "(" + t1 + ") + pi + " + format_number(d) + "*sin(" + format_number(e) + "*u)";
  return {parse_expr(t1), parse_expr(t2), {uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)}};
}

}  // namespace quasumb::testing
