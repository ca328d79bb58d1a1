#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "quasumb/error.hpp"
#include "quasumb/expr.hpp"
#include "quasumb/expr_eval.hpp"
#include "quasumb/jet.hpp"
#include "quasumb/mink_algebra.hpp"
#include "quasumb/surface_geometry.hpp"
#include "quasumb/surface_spec.hpp"

namespace quasumb {

/// Null ruled surface data in angle form: alpha' = (1, cos theta1, sin theta1),
/// ruling (1, cos theta2, sin theta2), alpha(0) = base.
struct ThetaSpec {
  Expr theta1;
  Expr theta2;
  MVec3 base{0, 0, 0};
};

struct SampleInterval {
  double lo = -std::numbers::pi;
  double hi = std::numbers::pi;
  int n = 256;

  double at(int i) const { return n == 1 ? lo : lo + (hi - lo) * i / (n - 1); }
};

/// Throws DegenerateSpec unless theta1' != 0 and theta1 != theta2 (mod 2 pi)
/// at every sample of the interval.
inline void validate_theta_spec(const ThetaSpec& t, const SampleInterval& iv = {}) {
  for (const Expr& e : {t.theta1, t.theta2}) {
    if (depends_on(e, Var::V)) throw Error(ErrorKind::DegenerateSpec, "theta must depend on u only");
  }
  for (int i = 0; i < iv.n; ++i) {
    const double u = iv.at(i);
    const Jet2 t1 = eval_jet2(t.theta1, u, 0.0);
    const double t2 = eval(t.theta2, u);
    if (!(std::abs(t1.du) > 1e-12)) {
      throw Error(ErrorKind::DegenerateSpec, "theta1' vanishes at u = " + format_number(u));
    }
    const double gap = std::remainder(t1.val - t2, 2 * std::numbers::pi);
    if (!(std::abs(gap) > 1e-9)) {
      throw Error(ErrorKind::DegenerateSpec, "theta1 = theta2 (mod 2 pi) at u = " + format_number(u));
    }
  }
}

/// x(u,v) = base + int_0^u (1, cos theta1, sin theta1) ds + v (1, cos theta2, sin theta2).
inline SurfaceSpec ruled_null_surface(const ThetaSpec& t, const SampleInterval& iv = {}) {
  validate_theta_spec(t, iv);
  const Expr th1 = rebind_u_to_s(t.theta1);
  const Expr u = variable(Var::U), v = variable(Var::V);
  return expression_surface(constant(t.base.x0) + u + v,
                            constant(t.base.x1) + integral(call(Func::Cos, th1)) + v * call(Func::Cos, t.theta2),
                            constant(t.base.x2) + integral(call(Func::Sin, th1)) + v * call(Func::Sin, t.theta2),
                            "ruled null surface");
}

/// The null-coordinate cylinder determined by f(u) and initial data
/// (x0, frame) at the origin:
///   x = x0 + u e^{f(0)} f1 + (v + P/2) e^{-f(0)} f2 - Q f3,
/// with I(s) = int_0^s e^{2f}, Q = int_0^u I, P = int_0^u I^2.
inline SurfaceSpec case1_cylinder(const Expr& f, const NullFrame& frame, const MVec3& x0 = {0, 0, 0}) {
  if (depends_on(f, Var::V)) throw Error(ErrorKind::DegenerateSpec, "f must depend on u only");
  if (!validate_null_frame(frame).pass) throw Error(ErrorKind::InvalidFrame, "initial frame is not a null frame");
  const double ef0 = std::exp(eval(f, 0.0));
  const Expr I = integral(call(Func::Exp, constant(2) * rebind_u_to_s(f)));
  const Expr Q = integral(I);
  const Expr P = integral(binary(BinaryOp::Pow, I, constant(2)));
  const Expr u = variable(Var::U), v = variable(Var::V);
  const Expr w = v + constant(0.5) * P;
  const auto component = [&](double p, double a, double b, double c) {
    return constant(p) + u * constant(ef0 * a) + w * constant(b / ef0) - Q * constant(c);
  };
  return expression_surface(component(x0.x0, frame.f1.x0, frame.f2.x0, frame.f3.x0),
                            component(x0.x1, frame.f1.x1, frame.f2.x1, frame.f3.x1),
                            component(x0.x2, frame.f1.x2, frame.f2.x2, frame.f3.x2), "case-1 cylinder");
}

/// Closed-form builtin surfaces. The hyperboloid is oriented so that its
/// shape operator is -Id.
inline SurfaceSpec builtin_example(BuiltinId id) {
  SurfaceSpec s{BuiltinSurface{id}, Sign::Plus, to_string(id)};
  if (id == BuiltinId::Hyperboloid) s.normal_sign = Sign::Minus;
  return s;
}

/// Angle data of Examples 1-3 (Example 2 with its base point (0, 0, -1)).
inline ThetaSpec example_theta_spec(BuiltinId id) {
  switch (id) {
    case BuiltinId::Ex1: return {parse_expr("2*atan(u)"), parse_expr("pi"), {0, 0, 0}};
    case BuiltinId::Ex2: return {parse_expr("u"), parse_expr("u+pi"), {0, 0, -1}};
    case BuiltinId::Ex3: return {parse_expr("u^3+u"), parse_expr("u^3+u+pi"), {0, 0, 0}};
    default: throw Error(ErrorKind::DegenerateSpec, std::string(to_string(id)) + " has no angle form");
  }
}

using Taylor3Curve = std::function<BasicVec3<Taylor3>(double)>;

/// A null ruled surface alpha(u) + v d(u), described by the third-order
/// jets of alpha' and of the ruling field d.
struct RuledNullData {
  Taylor3Curve alpha_prime;
  Taylor3Curve director;
};

inline RuledNullData ruled_null_data(const ThetaSpec& t) {
  const auto unit_null = [](const Expr& theta) {
    return [theta](double u) {
      const Taylor3 th = eval_taylor(theta, u, 0.0);
      return BasicVec3<Taylor3>{Taylor3(1.0), cos(th), sin(th)};
    };
  };
  return {unit_null(t.theta1), unit_null(t.theta2)};
}

struct RuledFrameDerivatives {
  double h11 = 0, h31 = 0, h32 = 0;
  double h32_prime = 0;
  double residual = 0;  // max-norm mismatch of the reconstructed frame derivatives
  double c = 0;         // <alpha', d>, the ruling rescaling factor
  double c_prime = 0;
};

namespace detail {

inline MVec3 values(const BasicVec3<Taylor3>& p) { return {p.x0.d0, p.x1.d0, p.x2.d0}; }
inline BasicVec3<Taylor3> derivative(const BasicVec3<Taylor3>& p) {
  return {differentiate(p.x0), differentiate(p.x1), differentiate(p.x2)};
}

}  // namespace detail

/// h11, h31, h32 (and h32') of the frame fb1 = alpha', fb2 = d / <alpha', d>,
/// fb3 = unit normal along alpha, where
///   fb1' = h11 fb1 + h31 fb3,  fb2' = -h11 fb2 + h32 fb3,  fb3' = h32 fb1 + h31 fb2.
inline RuledFrameDerivatives ruled_frame_derivatives(const RuledNullData& d, double u) {
  using T = Taylor3;
  const BasicVec3<T> a = d.alpha_prime(u);
  const BasicVec3<T> dir = d.director(u);
  const T c = minkowski_inner(a, dir);
  const double scale = euclidean_norm(detail::values(a)) * euclidean_norm(detail::values(dir));
  if (!(std::abs(c.d0) > 1e-12 * scale)) {
    throw Error(ErrorKind::DegenerateFrame, "ruling is not transverse to alpha' at u = " + format_number(u));
  }
  const BasicVec3<T> f1 = a;
  const BasicVec3<T> f2 = dir / c;
  const BasicVec3<T> cr = minkowski_cross(a, dir);
  const BasicVec3<T> f3 = cr / sqrt(-minkowski_inner(cr, cr));

  const BasicVec3<T> df1 = detail::derivative(f1), df2 = detail::derivative(f2);
  const T h32 = -minkowski_inner(df2, f3);

  RuledFrameDerivatives h;
  h.h11 = minkowski_inner(df1, f2).d0;
  h.h31 = -minkowski_inner(df1, f3).d0;
  h.h32 = h32.d0;
  h.h32_prime = h32.d1;
  h.c = c.d0;
  h.c_prime = c.d1;

  const MVec3 F1 = detail::values(f1), F2 = detail::values(f2), F3 = detail::values(f3);
  const MVec3 r1 = detail::values(df1) - (F1 * h.h11 + F3 * h.h31);
  const MVec3 r2 = detail::values(df2) - (F2 * -h.h11 + F3 * h.h32);
  const MVec3 r3 = detail::values(detail::derivative(f3)) - (F1 * h.h32 + F2 * h.h31);
  h.residual = std::max({max_abs(r1), max_abs(r2), max_abs(r3)});

  const double curvature_scale = std::max(1.0, max_abs(detail::values(df1)));
  if (!(std::abs(h.h31) > 1e-12 * curvature_scale)) {
    throw Error(ErrorKind::DegenerateFrame, "alpha is degenerate (h31 = 0) at u = " + format_number(u));
  }
  return h;
}

/// [[-h32, 0], [-h31 - vt h32', -h32]] in the basis (x_u, x_vt) of
/// x = alpha(u) + vt fb2(u), fb2 the normalized ruling.
inline ShapeMatrix shape_closed_form(const RuledFrameDerivatives& h, double vt) {
  return {-h.h32, 0.0, -h.h31 - vt * h.h32_prime, -h.h32};
}

/// The closed form transported to the basis (x_u, x_v) of x = alpha + v d,
/// where vt = c(u) v, x_u = x_u|vt + c' v x_vt and x_v = c x_vt.
inline ShapeMatrix shape_closed_form_surface_basis(const RuledFrameDerivatives& h, double v) {
  const ShapeMatrix S = shape_closed_form(h, h.c * v);
  // P = [[1, 0], [c' v, c]]; result is P^{-1} S P.
  const double p21 = h.c_prime * v, p22 = h.c;
  const double sp11 = S.s11 + S.s12 * p21, sp12 = S.s12 * p22;
  const double sp21 = S.s21 + S.s22 * p21, sp22 = S.s22 * p22;
  return {sp11, sp12, (sp21 - p21 * sp11) / p22, (sp22 - p21 * sp12) / p22};
}

}  // namespace quasumb
