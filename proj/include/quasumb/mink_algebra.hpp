#pragma once

// Linear algebra of R^{1,2}: the inner product <v,w> = v0 w0 - v1 w1 - v2 w2,
// the matching cross product, causal classification and null frames.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

#include "quasumb/error.hpp"

namespace quasumb {

/// A vector of R^{1,2} with components (x0, x1, x2); x0 is the time axis.
/// The scalar type is a template parameter so that the same algebra runs on
/// plain doubles and on derivative-carrying numbers (Jet2, Taylor3).
template <typename T>
struct BasicVec3 {
  T x0{};
  T x1{};
  T x2{};

  BasicVec3& operator+=(const BasicVec3& o) {
    x0 += o.x0;
    x1 += o.x1;
    x2 += o.x2;
    return *this;
  }
  BasicVec3& operator-=(const BasicVec3& o) {
    x0 -= o.x0;
    x1 -= o.x1;
    x2 -= o.x2;
    return *this;
  }
  BasicVec3& operator*=(const T& s) {
    x0 *= s;
    x1 *= s;
    x2 *= s;
    return *this;
  }

  friend BasicVec3 operator+(BasicVec3 a, const BasicVec3& b) { return a += b; }
  friend BasicVec3 operator-(BasicVec3 a, const BasicVec3& b) { return a -= b; }
  friend BasicVec3 operator-(const BasicVec3& a) { return {-a.x0, -a.x1, -a.x2}; }
  friend BasicVec3 operator*(BasicVec3 a, const T& s) { return a *= s; }
  friend BasicVec3 operator*(const T& s, BasicVec3 a) { return a *= s; }
  friend BasicVec3 operator/(const BasicVec3& a, const T& s) { return {a.x0 / s, a.x1 / s, a.x2 / s}; }
  friend bool operator==(const BasicVec3&, const BasicVec3&) = default;
};

using MVec3 = BasicVec3<double>;

inline std::ostream& operator<<(std::ostream& os, const MVec3& v) {
  return os << '(' << v.x0 << ", " << v.x1 << ", " << v.x2 << ')';
}

template <typename T>
T minkowski_inner(const BasicVec3<T>& v, const BasicVec3<T>& w) {
  return v.x0 * w.x0 - v.x1 * w.x1 - v.x2 * w.x2;
}

/// Minkowski cross product, oriented so that <u, v x w> = det[u v w] and
/// e0 x e1 = -e2 for the standard basis.
template <typename T>
BasicVec3<T> minkowski_cross(const BasicVec3<T>& v, const BasicVec3<T>& w) {
  return {v.x1 * w.x2 - v.x2 * w.x1, v.x0 * w.x2 - v.x2 * w.x0, v.x1 * w.x0 - v.x0 * w.x1};
}

inline double euclidean_dot(const MVec3& v, const MVec3& w) {
  return v.x0 * w.x0 + v.x1 * w.x1 + v.x2 * w.x2;
}

inline double euclidean_norm(const MVec3& v) { return std::sqrt(euclidean_dot(v, v)); }

inline double max_abs(const MVec3& v) {
  return std::max({std::abs(v.x0), std::abs(v.x1), std::abs(v.x2)});
}

inline MVec3 euclidean_cross(const MVec3& v, const MVec3& w) {
  return {v.x1 * w.x2 - v.x2 * w.x1, v.x2 * w.x0 - v.x0 * w.x2, v.x0 * w.x1 - v.x1 * w.x0};
}

inline double det3(const MVec3& a, const MVec3& b, const MVec3& c) {
  return euclidean_dot(a, euclidean_cross(b, c));
}

inline bool is_finite(const MVec3& v) {
  return std::isfinite(v.x0) && std::isfinite(v.x1) && std::isfinite(v.x2);
}

enum class CausalClass { Spacelike, Timelike, Null };

inline const char* to_string(CausalClass c) noexcept {
  switch (c) {
    case CausalClass::Spacelike: return "spacelike";
    case CausalClass::Timelike: return "timelike";
    case CausalClass::Null: return "null";
  }
  return "unknown";
}

/// Null when |<v,v>| <= tol * |v|_E^2, so the test does not depend on the
/// length of v.
inline CausalClass causal_class(const MVec3& v, double tol = 1e-8) {
  const double e2 = euclidean_dot(v, v);
  if (e2 == 0.0) throw Error(ErrorKind::ZeroVector, "causal class of the zero vector");
  const double q = minkowski_inner(v, v);
  if (std::abs(q) <= tol * e2) return CausalClass::Null;
  return q > 0.0 ? CausalClass::Timelike : CausalClass::Spacelike;
}

/// Discrete sign of a null frame change.
enum class Sign : int { Plus = 1, Minus = -1 };

constexpr double as_double(Sign s) noexcept { return static_cast<int>(s); }

inline constexpr double kDefaultFrameTol = 1e-8;

struct OrthoFrame {
  MVec3 e0, e1, e2;

  static OrthoFrame standard() { return {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}; }
};

struct NullFrame {
  MVec3 f1, f2, f3;

  static NullFrame standard() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {{r, r, 0}, {r, -r, 0}, {0, 0, 1}};
  }
};

struct FrameValidity {
  double max_defect = 0.0;
  bool pass = false;
};

/// Max-norm defect of the six Gram conditions
/// <f1,f1> = <f2,f2> = 0, <f1,f2> = 1, <f1,f3> = <f2,f3> = 0, <f3,f3> = -1.
inline double null_frame_defect(const NullFrame& fr) {
  const double d[] = {
      std::abs(minkowski_inner(fr.f1, fr.f1)),
      std::abs(minkowski_inner(fr.f2, fr.f2)),
      std::abs(minkowski_inner(fr.f1, fr.f2) - 1.0),
      std::abs(minkowski_inner(fr.f1, fr.f3)),
      std::abs(minkowski_inner(fr.f2, fr.f3)),
      std::abs(minkowski_inner(fr.f3, fr.f3) + 1.0),
  };
  return *std::max_element(std::begin(d), std::end(d));
}

inline FrameValidity validate_null_frame(const NullFrame& fr, double tol = kDefaultFrameTol) {
  const double defect = null_frame_defect(fr);
  return {defect, defect <= tol};
}

/// Gram defect plus the orientation defect |e0 x e1 + e2|.
inline FrameValidity validate_ortho_frame(const OrthoFrame& fr, double tol = kDefaultFrameTol) {
  const double d[] = {
      std::abs(minkowski_inner(fr.e0, fr.e0) - 1.0),
      std::abs(minkowski_inner(fr.e1, fr.e1) + 1.0),
      std::abs(minkowski_inner(fr.e2, fr.e2) + 1.0),
      std::abs(minkowski_inner(fr.e0, fr.e1)),
      std::abs(minkowski_inner(fr.e0, fr.e2)),
      std::abs(minkowski_inner(fr.e1, fr.e2)),
      max_abs(minkowski_cross(fr.e0, fr.e1) + fr.e2),
  };
  const double defect = *std::max_element(std::begin(d), std::end(d));
  return {defect, defect <= tol};
}

inline NullFrame null_frame_from_orthonormal(const OrthoFrame& fr, double tol = kDefaultFrameTol) {
  const auto validity = validate_ortho_frame(fr, tol);
  if (!validity.pass) {
    throw Error(ErrorKind::InvalidFrame,
                "orthonormal frame defect " + std::to_string(validity.max_defect));
  }
  const double r = 1.0 / std::numbers::sqrt2;
  return {(fr.e0 + fr.e1) * r, (fr.e0 - fr.e1) * r, fr.e2};
}

inline OrthoFrame orthonormal_from_null(const NullFrame& fr) {
  const double r = 1.0 / std::numbers::sqrt2;
  return {(fr.f1 + fr.f2) * r, (fr.f1 - fr.f2) * r, fr.f3};
}

/// (f1, f2, f3) -> (eps1 e^theta f1, eps1 e^-theta f2, eps2 f3).
inline NullFrame boost_null_frame(const NullFrame& fr, double theta, Sign eps1 = Sign::Plus,
                                  Sign eps2 = Sign::Plus) {
  const double s1 = as_double(eps1);
  return {fr.f1 * (s1 * std::exp(theta)), fr.f2 * (s1 * std::exp(-theta)), fr.f3 * as_double(eps2)};
}

/// Coefficients of the second fundamental form with respect to the null
/// tangent vectors of an adapted null frame: S(f1) = k12 f1 + k11 f2,
/// S(f2) = k22 f1 + k12 f2.
struct NullFrameCoefficients {
  double k11 = 0.0;
  double k12 = 0.0;
  double k22 = 0.0;
};

/// How the k_ij change under boost_null_frame(theta, eps1, eps2).
inline NullFrameCoefficients boost_coefficients(const NullFrameCoefficients& k, double theta,
                                                Sign /*eps1*/, Sign eps2) {
  const double s2 = as_double(eps2);
  return {s2 * std::exp(2 * theta) * k.k11, s2 * k.k12, s2 * std::exp(-2 * theta) * k.k22};
}

}  // namespace quasumb
