#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "quasumb/error.hpp"
#include "quasumb/mink_algebra.hpp"
#include "quasumb/surface_spec.hpp"

namespace quasumb {

inline constexpr double kClassifyTol = 1e-7;
inline constexpr double kTimelikeTol = 1e-12;

struct FirstFundamental {
  double E, F, G;
  double det() const { return E * G - F * F; }
};

struct SecondFundamental {
  double L, M, N;
};

/// Shape operator in the coordinate basis (x_u, x_v); columns are images:
/// S(x_u) = s11 x_u + s21 x_v, S(x_v) = s12 x_u + s22 x_v.
struct ShapeMatrix {
  double s11 = 0, s12 = 0, s21 = 0, s22 = 0;

  double trace() const { return s11 + s22; }
  double det() const { return s11 * s22 - s12 * s21; }
  double max_abs() const { return std::max({std::abs(s11), std::abs(s12), std::abs(s21), std::abs(s22)}); }
  friend bool operator==(const ShapeMatrix&, const ShapeMatrix&) = default;
};

enum class PointClass { Umbilic, QuasiUmbilic, RealDiagonalizable, ComplexDiagonalizable };

inline const char* to_string(PointClass c) noexcept {
  switch (c) {
    case PointClass::Umbilic: return "umbilic";
    case PointClass::QuasiUmbilic: return "quasi_umbilic";
    case PointClass::RealDiagonalizable: return "real_diagonalizable";
    case PointClass::ComplexDiagonalizable: return "complex_diagonalizable";
  }
  return "?";
}

struct PointReport {
  double K = 0;
  double H = 0;
  double disc = 0;
  PointClass cls = PointClass::Umbilic;
  std::optional<double> lambda;
};

/// E, F, G of the induced metric. Throws NotTimelike unless EG - F^2 < 0
/// beyond a tolerance relative to |x_u|^2 |x_v|^2.
inline FirstFundamental first_fundamental(const SurfaceJet& j, double tol = kTimelikeTol) {
  const FirstFundamental I{minkowski_inner(j.xu, j.xu), minkowski_inner(j.xu, j.xv),
                           minkowski_inner(j.xv, j.xv)};
  const double scale = euclidean_dot(j.xu, j.xu) * euclidean_dot(j.xv, j.xv);
  if (!(I.det() < -tol * scale)) {
    throw Error(ErrorKind::NotTimelike, "induced metric is not indefinite (EG - F^2 = " +
                                            format_number(I.det()) + ")");
  }
  return I;
}

/// n = sign (x_u x x_v) / sqrt(-<x_u x x_v, x_u x x_v>), a unit spacelike
/// normal.
inline MVec3 unit_normal(const SurfaceJet& j, Sign sign = Sign::Plus, double tol = kTimelikeTol) {
  const MVec3 c = minkowski_cross(j.xu, j.xv);
  const double q = minkowski_inner(c, c);
  if (!(q < -tol * euclidean_dot(c, c))) {
    throw Error(ErrorKind::NotTimelike, "normal x_u x x_v is not spacelike (<c,c> = " + format_number(q) + ")");
  }
  return c * (as_double(sign) / std::sqrt(-q));
}

inline SecondFundamental second_fundamental(const SurfaceJet& j, const MVec3& n) {
  return {minkowski_inner(n, j.xuu), minkowski_inner(n, j.xuv), minkowski_inner(n, j.xvv)};
}

/// S = [[E,F],[F,G]]^{-1} [[L,M],[M,N]].
inline ShapeMatrix shape_operator(const FirstFundamental& I, const SecondFundamental& II) {
  const double det = I.det();
  const double scale = std::max({std::abs(I.E), std::abs(I.F), std::abs(I.G)});
  if (!(std::abs(det) > 1e-14 * scale * scale) || !std::isfinite(det)) {
    throw Error(ErrorKind::SingularMetric, "first fundamental form is singular");
  }
  const double inv = 1.0 / det;
  return {inv * (I.G * II.L - I.F * II.M), inv * (I.G * II.M - I.F * II.N),
          inv * (I.E * II.M - I.F * II.L), inv * (I.E * II.N - I.F * II.M)};
}

struct Curvatures {
  double K;
  double H;
};

inline Curvatures curvatures(const ShapeMatrix& S) { return {S.det(), 0.5 * S.trace()}; }

/// Algebraic type of S. The discriminant H^2 - K is compared against
/// tol * max(1, |S|_max^2); near zero the trace-free part decides between
/// umbilic and quasi-umbilic.
inline PointReport classify_point(const ShapeMatrix& S, double tol = kClassifyTol) {
  const auto [K, H] = curvatures(S);
  PointReport r{K, H, H * H - K, PointClass::Umbilic, std::nullopt};
  const double m = S.max_abs();
  const double scale = std::max(1.0, m * m);
  if (r.disc > tol * scale) {
    r.cls = PointClass::RealDiagonalizable;
  } else if (r.disc < -tol * scale) {
    r.cls = PointClass::ComplexDiagonalizable;
  } else {
    const ShapeMatrix nil{S.s11 - H, S.s12, S.s21, S.s22 - H};
    r.cls = nil.max_abs() <= tol * std::max(1.0, m) ? PointClass::Umbilic : PointClass::QuasiUmbilic;
    r.lambda = H;
  }
  return r;
}

/// Coordinates (a, b) of a vector spanning ker(S - H Id), assuming S has a
/// repeated eigenvalue and a nonzero nilpotent part.
inline std::array<double, 2> repeated_eigenvector(const ShapeMatrix& S) {
  const double H = 0.5 * S.trace();
  const double p = S.s11 - H, q = S.s12, r = S.s21, t = S.s22 - H;
  // Rows (p, q) and (r, t) annihilate (-q, p) and (-t, r) respectively.
  if (std::hypot(p, q) >= std::hypot(r, t)) return {-q, p};
  return {-t, r};
}

/// The tangent vector a x_u + b x_v for coordinates from repeated_eigenvector.
inline MVec3 tangent_vector(const SurfaceJet& j, const std::array<double, 2>& ab) {
  return j.xu * ab[0] + j.xv * ab[1];
}

struct PointAnalysis {
  SurfaceJet jet;
  FirstFundamental I;
  MVec3 normal;
  SecondFundamental II;
  ShapeMatrix S;
  PointReport report;
};

inline PointAnalysis analyze_jet(const SurfaceJet& j, Sign sign, double tol) {
  const FirstFundamental I = first_fundamental(j);
  const MVec3 n = unit_normal(j, sign);
  const SecondFundamental II = second_fundamental(j, n);
  const ShapeMatrix S = shape_operator(I, II);
  return {j, I, n, II, S, classify_point(S, tol)};
}

/// Full pipeline at one parameter point using exact jets.
inline PointAnalysis analyze_point(const SurfaceSpec& spec, double u, double v, double tol = kClassifyTol) {
  return analyze_jet(surface_jet(spec, u, v), spec.normal_sign, tol);
}

inline ShapeMatrix shape_operator_at(const SurfaceSpec& spec, double u, double v) {
  return analyze_point(spec, u, v).S;
}

/// Same pipeline on central-difference jets with step h, as an independent
/// oracle for the exact path.
inline ShapeMatrix finite_diff_shape_operator(const SurfaceSpec& spec, double u, double v, double h = 1e-4) {
  const SurfaceJet j = finite_diff_surface_jet(spec, u, v, h);
  check_regular(j);
  return analyze_jet(j, spec.normal_sign, kClassifyTol).S;
}

}  // namespace quasumb
