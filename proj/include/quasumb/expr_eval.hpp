#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <type_traits>

#include "quasumb/error.hpp"
#include "quasumb/expr.hpp"
#include "quasumb/jet.hpp"

namespace quasumb {

inline constexpr double kQuadratureAbsTol = 1e-10;

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct RuleResult {
  double value;
  double error;
};

template <typename F>
RuleResult gauss_kronrod_15(F& g, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const double fc = g(mid);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = g(mid - dx) + g(mid + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return {kronrod * half, std::abs((kronrod - gauss) * half)};
}

template <typename F>
RuleResult adaptive_gk(F& g, double a, double b, double tol, int depth) {
  const RuleResult whole = gauss_kronrod_15(g, a, b);
  if (whole.error <= tol || depth == 0 || !std::isfinite(whole.value)) return whole;
  const double mid = 0.5 * (a + b);
  const RuleResult left = adaptive_gk(g, a, mid, 0.5 * tol, depth - 1);
  const RuleResult right = adaptive_gk(g, mid, b, 0.5 * tol, depth - 1);
  return {left.value + right.value, left.error + right.error};
}

}  // namespace detail

/// Integral of g over [0, upper] by adaptive Gauss-Kronrod (G7/K15) bisection
/// with absolute tolerance kQuadratureAbsTol. Throws QuadratureFailure when
/// the accumulated error estimate exceeds it.
template <typename F>
double integrate_from_zero(F&& g, double upper) {
  if (upper == 0.0) return 0.0;
  const auto r = detail::adaptive_gk(g, 0.0, upper, kQuadratureAbsTol, 30);
  if (!std::isfinite(r.value) || r.error > kQuadratureAbsTol) {
    throw Error(ErrorKind::QuadratureFailure, "integral to " + format_number(upper) +
                                                  " has error estimate " + format_number(r.error));
  }
  return r.value;
}

namespace detail {

template <typename Num>
struct Env {
  Num u;
  Num v;
  const Num* s = nullptr;  // bound variable inside an integrand
};

[[noreturn]] inline void domain_error(const Expr& node, double value, const char* why) {
  throw Error(ErrorKind::DomainError,
              std::string(why) + " in '" + to_string(node) + "' at argument " + format_number(value));
}

template <typename Num>
Num eval_node(const Expr& e, const Env<Num>& env);

template <typename Num>
Num eval_call(const Expr& node, Func fn, const Num& a) {
  using std::atan, std::cos, std::cosh, std::exp, std::log, std::sin, std::sinh, std::sqrt,
      std::tan, std::abs;
  constexpr bool with_derivatives = !std::is_same_v<Num, double>;
  const double x = value_of(a);
  switch (fn) {
    case Func::Sin: return sin(a);
    case Func::Cos: return cos(a);
    case Func::Tan:
      if (std::cos(x) == 0.0) domain_error(node, x, "tan pole");
      return tan(a);
    case Func::Atan: return atan(a);
    case Func::Sinh: return sinh(a);
    case Func::Cosh: return cosh(a);
    case Func::Exp: return exp(a);
    case Func::Ln:
      if (!(x > 0.0)) domain_error(node, x, "ln of non-positive value");
      return log(a);
    case Func::Sqrt:
      if (x < 0.0 || (with_derivatives && x == 0.0)) domain_error(node, x, "sqrt outside its domain");
      return sqrt(a);
    case Func::Abs:
      if (with_derivatives && x == 0.0) domain_error(node, x, "abs is not differentiable at 0");
      return abs(a);
  }
  domain_error(node, x, "unknown function");
}

template <typename Num>
Num eval_pow(const Expr& node, const Num& base, const Expr& exponent_expr, const Num& exponent) {
  using std::exp, std::log, std::pow;
  const double b = value_of(base);
  const double p = value_of(exponent);
  const bool constant_exponent = !depends_on(exponent_expr, Var::U) &&
                                 !depends_on(exponent_expr, Var::V) &&
                                 !depends_on(exponent_expr, Var::S);
  if (constant_exponent) {
    const bool integer = std::floor(p) == p;
    if (!integer && b <= 0.0) domain_error(node, b, "non-integer power of non-positive base");
    if (integer && p < 0.0 && b == 0.0) domain_error(node, b, "negative power of zero");
    if constexpr (std::is_same_v<Num, double>) {
      return pow(b, p);
    } else {
      return pow(base, p);
    }
  }
  if (!(b > 0.0)) domain_error(node, b, "variable exponent requires a positive base");
  return exp(exponent * log(base));
}

/// Integral node evaluated at upper limit x. The derivatives with respect to
/// x are g(x), g'(x), g''(x), obtained by evaluating the integrand on a
/// Taylor3 in its bound variable.
template <typename Num>
Num eval_integral(const Expr& integrand, const Num& x) {
  const double upper = value_of(x);
  const double value = integrate_from_zero(
      [&](double s) {
        Env<double> inner{0.0, 0.0, &s};
        return eval_node<double>(integrand, inner);
      },
      upper);
  if constexpr (std::is_same_v<Num, double>) {
    return value;
  } else {
    const Taylor3 s = Taylor3::variable(upper);
    Env<Taylor3> inner{Taylor3(0.0), Taylor3(0.0), &s};
    const Taylor3 g = eval_node<Taylor3>(integrand, inner);
    return lift(x, Derivs{value, g.d0, g.d1, g.d2});
  }
}

template <typename Num>
Num eval_node(const Expr& e, const Env<Num>& env) {
  return std::visit(
      [&](const auto& x) -> Num {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Constant>) {
          return Num(x.value);
        } else if constexpr (std::is_same_v<T, Variable>) {
          switch (x.var) {
            case Var::U: return env.u;
            case Var::V: return env.v;
            case Var::S:
              if (!env.s) throw Error(ErrorKind::EvaluationError, "bound variable s outside integ");
              return *env.s;
          }
          return Num(0.0);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const Num a = eval_node(x.lhs, env);
          const Num b = eval_node(x.rhs, env);
          switch (x.op) {
            case BinaryOp::Add: return a + b;
            case BinaryOp::Sub: return a - b;
            case BinaryOp::Mul: return a * b;
            case BinaryOp::Div:
              if (value_of(b) == 0.0) domain_error(e, 0.0, "division by zero");
              return a / b;
            case BinaryOp::Pow: return eval_pow(e, a, x.rhs, b);
          }
          return Num(0.0);
        } else if constexpr (std::is_same_v<T, Negate>) {
          return -eval_node(x.arg, env);
        } else if constexpr (std::is_same_v<T, Call>) {
          return eval_call(e, x.fn, eval_node(x.arg, env));
        } else {
          // Upper limit: u at top level, the enclosing bound variable inside.
          return eval_integral<Num>(x.integrand, env.s ? *env.s : env.u);
        }
      },
      e->data);
}

}  // namespace detail

/// Evaluates e with u and v replaced by the given numbers. Num is double,
/// Jet2 or Taylor3.
template <typename Num>
Num evaluate(const Expr& e, const Num& u, const Num& v) {
  return detail::eval_node<Num>(e, detail::Env<Num>{u, v, nullptr});
}

inline double eval(const Expr& e, double u, double v = 0.0) { return evaluate<double>(e, u, v); }

/// Value and exact first and second partials of e at (u, v).
inline Jet2 eval_jet2(const Expr& e, double u, double v) {
  return evaluate<Jet2>(e, Jet2::u_variable(u), Jet2::v_variable(v));
}

enum class Axis { U, V };

/// Derivatives up to third order along one coordinate axis.
inline Taylor3 eval_taylor(const Expr& e, double u, double v, Axis axis = Axis::U) {
  if (axis == Axis::U) return evaluate<Taylor3>(e, Taylor3::variable(u), Taylor3(v));
  return evaluate<Taylor3>(e, Taylor3(u), Taylor3::variable(v));
}

using ScalarField = std::function<double(double, double)>;

/// Central-difference estimate of the 2-jet on a 9-point stencil, O(h^2).
inline Jet2 finite_diff_jet2(const ScalarField& fn, double u, double v, double h) {
  if (!(h > 0.0)) throw Error(ErrorKind::EvaluationError, "finite-difference step must be positive");
  const double f00 = fn(u, v);
  const double fp0 = fn(u + h, v), fm0 = fn(u - h, v);
  const double f0p = fn(u, v + h), f0m = fn(u, v - h);
  const double fpp = fn(u + h, v + h), fpm = fn(u + h, v - h);
  const double fmp = fn(u - h, v + h), fmm = fn(u - h, v - h);
  return {f00,
          (fp0 - fm0) / (2 * h),
          (f0p - f0m) / (2 * h),
          (fp0 - 2 * f00 + fm0) / (h * h),
          (fpp - fpm - fmp + fmm) / (4 * h * h),
          (f0p - 2 * f00 + f0m) / (h * h)};
}

}  // namespace quasumb
