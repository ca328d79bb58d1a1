#pragma once

#include <cstddef>

namespace quasumb {

/// n evenly spaced samples on [lo, hi], endpoints included.
struct GridAxis {
  double lo = 0, hi = 1;
  int n = 2;
  double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

/// Tensor grid; nodes are visited row-major (u outer, v inner).
struct Grid {
  GridAxis u, v;
  std::size_t size() const { return static_cast<std::size_t>(u.n) * static_cast<std::size_t>(v.n); }
};

}  // namespace quasumb
