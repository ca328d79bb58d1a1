#pragma once

// Truncated-Taylor arithmetic.
//
//   Jet2    : value and all partials of order <= 2 in (u, v).
//   Taylor3 : value and derivatives of order <= 3 in one variable.
//
// Both carry exact derivatives through +, -, *, / and the elementary
// functions via the chain rule; there is no step size anywhere.

#include <array>
#include <concepts>
#include <cmath>
#include <limits>
#include <ostream>

namespace quasumb {

/// Value and first three derivatives of a univariate function at a point.
struct Derivs {
  double d0 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;
};

struct Jet2 {
  double val = 0.0;
  double du = 0.0;
  double dv = 0.0;
  double duu = 0.0;
  double duv = 0.0;
  double dvv = 0.0;

  constexpr Jet2() = default;
  constexpr Jet2(double c) : val(c) {}  // NOLINT(google-explicit-constructor)
  constexpr Jet2(double v0, double v_u, double v_v, double v_uu, double v_uv, double v_vv)
      : val(v0), du(v_u), dv(v_v), duu(v_uu), duv(v_uv), dvv(v_vv) {}

  static constexpr Jet2 u_variable(double u) { return {u, 1, 0, 0, 0, 0}; }
  static constexpr Jet2 v_variable(double v) { return {v, 0, 1, 0, 0, 0}; }

  Jet2& operator+=(const Jet2& o) {
    val += o.val;
    du += o.du;
    dv += o.dv;
    duu += o.duu;
    duv += o.duv;
    dvv += o.dvv;
    return *this;
  }
  Jet2& operator-=(const Jet2& o) {
    val -= o.val;
    du -= o.du;
    dv -= o.dv;
    duu -= o.duu;
    duv -= o.duv;
    dvv -= o.dvv;
    return *this;
  }
  Jet2& operator*=(const Jet2& o) { return *this = *this * o; }
  Jet2& operator/=(const Jet2& o) { return *this = *this / o; }

  friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
  friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
  friend Jet2 operator-(const Jet2& a) { return {-a.val, -a.du, -a.dv, -a.duu, -a.duv, -a.dvv}; }
  friend Jet2 operator*(const Jet2& a, const Jet2& b) {
    return {a.val * b.val,
            a.du * b.val + a.val * b.du,
            a.dv * b.val + a.val * b.dv,
            a.duu * b.val + 2 * a.du * b.du + a.val * b.duu,
            a.duv * b.val + a.du * b.dv + a.dv * b.du + a.val * b.duv,
            a.dvv * b.val + 2 * a.dv * b.dv + a.val * b.dvv};
  }
  friend Jet2 operator/(const Jet2& a, const Jet2& b);
  friend bool operator==(const Jet2&, const Jet2&) = default;
};

/// Chain rule: the jet of F(a) given F and its derivatives at a.val.
inline Jet2 lift(const Jet2& a, const Derivs& F) {
  return {F.d0,
          F.d1 * a.du,
          F.d1 * a.dv,
          F.d2 * a.du * a.du + F.d1 * a.duu,
          F.d2 * a.du * a.dv + F.d1 * a.duv,
          F.d2 * a.dv * a.dv + F.d1 * a.dvv};
}

inline std::ostream& operator<<(std::ostream& os, const Jet2& j) {
  return os << "{val=" << j.val << ", du=" << j.du << ", dv=" << j.dv << ", duu=" << j.duu
            << ", duv=" << j.duv << ", dvv=" << j.dvv << '}';
}

struct Taylor3 {
  double d0 = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d3 = 0.0;

  constexpr Taylor3() = default;
  constexpr Taylor3(double c) : d0(c) {}  // NOLINT(google-explicit-constructor)
  constexpr Taylor3(double a0, double a1, double a2, double a3) : d0(a0), d1(a1), d2(a2), d3(a3) {}

  static constexpr Taylor3 variable(double t) { return {t, 1, 0, 0}; }

  Taylor3& operator+=(const Taylor3& o) {
    d0 += o.d0;
    d1 += o.d1;
    d2 += o.d2;
    d3 += o.d3;
    return *this;
  }
  Taylor3& operator-=(const Taylor3& o) {
    d0 -= o.d0;
    d1 -= o.d1;
    d2 -= o.d2;
    d3 -= o.d3;
    return *this;
  }
  Taylor3& operator*=(const Taylor3& o) { return *this = *this * o; }
  Taylor3& operator/=(const Taylor3& o) { return *this = *this / o; }

  friend Taylor3 operator+(Taylor3 a, const Taylor3& b) { return a += b; }
  friend Taylor3 operator-(Taylor3 a, const Taylor3& b) { return a -= b; }
  friend Taylor3 operator-(const Taylor3& a) { return {-a.d0, -a.d1, -a.d2, -a.d3}; }
  friend Taylor3 operator*(const Taylor3& a, const Taylor3& b) {
    return {a.d0 * b.d0, a.d1 * b.d0 + a.d0 * b.d1, a.d2 * b.d0 + 2 * a.d1 * b.d1 + a.d0 * b.d2,
            a.d3 * b.d0 + 3 * a.d2 * b.d1 + 3 * a.d1 * b.d2 + a.d0 * b.d3};
  }
  friend Taylor3 operator/(const Taylor3& a, const Taylor3& b);
  friend bool operator==(const Taylor3&, const Taylor3&) = default;
};

inline Taylor3 lift(const Taylor3& a, const Derivs& F) {
  return {F.d0, F.d1 * a.d1, F.d2 * a.d1 * a.d1 + F.d1 * a.d2,
          F.d3 * a.d1 * a.d1 * a.d1 + 3 * F.d2 * a.d1 * a.d2 + F.d1 * a.d3};
}

/// Derivative of a Taylor3 as a function of t. The top slot is unknown.
inline Taylor3 differentiate(const Taylor3& a) {
  return {a.d1, a.d2, a.d3, std::numeric_limits<double>::quiet_NaN()};
}

inline std::ostream& operator<<(std::ostream& os, const Taylor3& t) {
  return os << '[' << t.d0 << ", " << t.d1 << ", " << t.d2 << ", " << t.d3 << ']';
}

// Derivative tables of the elementary functions. Domain checks live in the
// expression evaluator; these assume a valid argument.
namespace derivs {

inline Derivs sin(double x) {
  const double s = std::sin(x), c = std::cos(x);
  return {s, c, -s, -c};
}
inline Derivs cos(double x) {
  const double s = std::sin(x), c = std::cos(x);
  return {c, -s, -c, s};
}
inline Derivs tan(double x) {
  const double t = std::tan(x), s2 = 1 + t * t;
  return {t, s2, 2 * t * s2, 2 * s2 * (1 + 3 * t * t)};
}
inline Derivs atan(double x) {
  const double q = 1 / (1 + x * x);
  return {std::atan(x), q, -2 * x * q * q, (6 * x * x - 2) * q * q * q};
}
inline Derivs sinh(double x) {
  const double s = std::sinh(x), c = std::cosh(x);
  return {s, c, s, c};
}
inline Derivs cosh(double x) {
  const double s = std::sinh(x), c = std::cosh(x);
  return {c, s, c, s};
}
inline Derivs exp(double x) {
  const double e = std::exp(x);
  return {e, e, e, e};
}
inline Derivs log(double x) {
  const double r = 1 / x;
  return {std::log(x), r, -r * r, 2 * r * r * r};
}
inline Derivs sqrt(double x) {
  const double s = std::sqrt(x);
  return {s, 0.5 / s, -0.25 / (s * x), 0.375 / (s * x * x)};
}
inline Derivs abs(double x) {
  return {std::abs(x), x > 0 ? 1.0 : -1.0, 0.0, 0.0};
}
inline Derivs recip(double x) {
  const double r = 1 / x;
  return {r, -r * r, 2 * r * r * r, -6 * r * r * r * r};
}
/// x^p for a constant exponent. Terms whose falling-factorial coefficient
/// vanishes are exactly zero, so integer powers are safe at x = 0.
inline Derivs pow(double x, double p) {
  std::array<double, 4> d{};
  double coeff = 1.0;
  for (int k = 0; k < 4; ++k) {
    d[k] = coeff == 0.0 ? 0.0 : coeff * std::pow(x, p - k);
    coeff *= (p - k);
  }
  return {d[0], d[1], d[2], d[3]};
}

}  // namespace derivs

inline Jet2 operator/(const Jet2& a, const Jet2& b) { return a * lift(b, derivs::recip(b.val)); }
inline Taylor3 operator/(const Taylor3& a, const Taylor3& b) {
  return a * lift(b, derivs::recip(b.d0));
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet2& j) { return j.val; }
inline double value_of(const Taylor3& t) { return t.d0; }

/// The derivative-carrying number types. Plain double is deliberately not a
/// member: generic code calls the std functions for it.
template <typename T>
concept JetNumber = std::same_as<T, Jet2> || std::same_as<T, Taylor3>;

template <JetNumber T> T sin(const T& a) { return lift(a, derivs::sin(value_of(a))); }
template <JetNumber T> T cos(const T& a) { return lift(a, derivs::cos(value_of(a))); }
template <JetNumber T> T tan(const T& a) { return lift(a, derivs::tan(value_of(a))); }
template <JetNumber T> T atan(const T& a) { return lift(a, derivs::atan(value_of(a))); }
template <JetNumber T> T sinh(const T& a) { return lift(a, derivs::sinh(value_of(a))); }
template <JetNumber T> T cosh(const T& a) { return lift(a, derivs::cosh(value_of(a))); }
template <JetNumber T> T exp(const T& a) { return lift(a, derivs::exp(value_of(a))); }
template <JetNumber T> T log(const T& a) { return lift(a, derivs::log(value_of(a))); }
template <JetNumber T> T sqrt(const T& a) { return lift(a, derivs::sqrt(value_of(a))); }
template <JetNumber T> T abs(const T& a) { return lift(a, derivs::abs(value_of(a))); }
template <JetNumber T> T pow(const T& a, double p) { return lift(a, derivs::pow(value_of(a), p)); }

}  // namespace quasumb
