#pragma once

// Liouville and Backlund checks, the Case-2 forms, and integration of the
// Maurer-Cartan system
//
//   dx  = f1 eta1 + f2 eta2
//   df1 = f1 eta11 + f3 eta31
//   df2 = -f2 eta11 + f3 eta32
//   df3 = f1 eta32 + f2 eta31
//
// with eta1 = e^f du, eta2 = e^g dv, eta11 = g_u du - f_v dv,
// eta31 = -(e^f du + H e^g dv), eta32 = -H e^f du.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "quasumb/error.hpp"
#include "quasumb/expr.hpp"
#include "quasumb/expr_eval.hpp"
#include "quasumb/grid.hpp"
#include "quasumb/jet.hpp"
#include "quasumb/mink_algebra.hpp"
#include "quasumb/parallel.hpp"
#include "quasumb/surface_geometry.hpp"

namespace quasumb {

namespace detail {

/// Jet2 of a function of u alone, and of its derivative, from a Taylor3.
inline Jet2 u_jet(const Taylor3& t) { return {t.d0, t.d1, 0, t.d2, 0, 0}; }
inline Jet2 u_jet_of_derivative(const Taylor3& t) { return {t.d1, t.d2, 0, t.d3, 0, 0}; }
inline Jet2 v_jet(const Taylor3& t) { return {t.d0, 0, t.d1, 0, 0, t.d2}; }
inline Jet2 v_jet_of_derivative(const Taylor3& t) { return {t.d1, 0, t.d2, 0, 0, t.d3}; }

[[noreturn]] inline void chart_error(const std::string& why, double u, double v) {
  throw Error(ErrorKind::DomainError, why + " at (u, v) = (" + format_number(u) + ", " + format_number(v) + ")");
}

}  // namespace detail

// --- Liouville equation ------------------------------------------------------

/// z = ln(2 phi'(u) psi'(v) / (phi(u) + psi(v))^2) as a 2-jet. phi is an
/// expression in u, psi an expression in v.
inline Jet2 liouville_solution_jet(const Expr& phi, const Expr& psi, double u, double v) {
  const Taylor3 p = eval_taylor(phi, u, v, Axis::U);
  const Taylor3 q = eval_taylor(psi, u, v, Axis::V);
  if (p.d1 == 0.0) detail::chart_error("phi' = 0", u, v);
  if (q.d1 == 0.0) detail::chart_error("psi' = 0", u, v);
  const Jet2 sum = detail::u_jet(p) + detail::v_jet(q);
  if (sum.val == 0.0) detail::chart_error("phi + psi = 0", u, v);
  const Jet2 arg = 2.0 * detail::u_jet_of_derivative(p) * detail::v_jet_of_derivative(q) / (sum * sum);
  if (!(arg.val > 0.0)) detail::chart_error("non-positive logarithm argument", u, v);
  return log(arg);
}

inline double liouville_solution(const Expr& phi, const Expr& psi, double u, double v) {
  return liouville_solution_jet(phi, psi, u, v).val;
}

/// z_uv - e^z.
inline double liouville_residual(const Jet2& z) { return z.duv - std::exp(z.val); }
inline double liouville_residual(const Expr& z, double u, double v) {
  return liouville_residual(eval_jet2(z, u, v));
}

/// (z_u - w_u - 2 e^{(z+w)/2}, z_v + w_v - e^{(z-w)/2}).
inline std::pair<double, double> backlund_residual(const Jet2& z, const Jet2& w) {
  return {z.du - w.du - 2 * std::exp(0.5 * (z.val + w.val)), z.dv + w.dv - std::exp(0.5 * (z.val - w.val))};
}
inline std::pair<double, double> backlund_residual(const Expr& z, const Expr& w, double u, double v) {
  return backlund_residual(eval_jet2(z, u, v), eval_jet2(w, u, v));
}

// --- Case 2 -------------------------------------------------------------------

struct FieldJets {
  Jet2 f, g, H;
};

/// f = 1/2 ln A and g = ln(2 / (H^2 (u+v)^2)) - 1/2 ln A with
/// A = -2 H' / (H^2 (u+v)) - k, together with H, as 2-jets.
inline FieldJets case2_jets(const Expr& H, const Expr& k, double u, double v) {
  const Taylor3 h = eval_taylor(H, u, v, Axis::U);
  if (h.d0 == 0.0) detail::chart_error("H = 0", u, v);
  if (u + v == 0.0) detail::chart_error("u + v = 0", u, v);
  const Jet2 Hj = detail::u_jet(h), Hp = detail::u_jet_of_derivative(h);
  const Jet2 s = Jet2::u_variable(u) + Jet2::v_variable(v);
  const Jet2 A = -2.0 * Hp / (Hj * Hj * s) - eval_jet2(k, u, v);
  if (!(A.val > 0.0)) detail::chart_error("non-positive logarithm argument A = " + format_number(A.val), u, v);
  const Jet2 half_log_A = 0.5 * log(A);
  return {half_log_A, log(2.0 / (Hj * Hj * s * s)) - half_log_A, Hj};
}

inline std::pair<double, double> case2_forms(const Expr& H, const Expr& k, double u, double v) {
  const FieldJets j = case2_jets(H, k, u, v);
  return {j.f.val, j.g.val};
}

struct PdeResiduals {
  double r1, r2, r3;
};

/// r1 = H_v, r2 = H_u - 2 f_v e^{f-g}, r3 = (f+g)_uv - H^2 e^{f+g}.
inline PdeResiduals pde_residuals(const FieldJets& j) {
  return {j.H.dv, j.H.du - 2 * j.f.dv * std::exp(j.f.val - j.g.val),
          j.f.duv + j.g.duv - j.H.val * j.H.val * std::exp(j.f.val + j.g.val)};
}

using JetField = std::function<Jet2(double, double)>;

inline JetField jet_field(const Expr& e) {
  return [e](double u, double v) { return eval_jet2(e, u, v); };
}

inline PdeResiduals pde_residuals(const JetField& f, const JetField& g, const JetField& H, double u, double v) {
  return pde_residuals(FieldJets{f(u, v), g(u, v), H(u, v)});
}

// --- Maurer-Cartan forms and frames --------------------------------------------

/// du and dv coefficients of one 1-form.
struct FormCoeffs {
  double du = 0, dv = 0;
  double along(double du_dt, double dv_dt) const { return du * du_dt + dv * dv_dt; }
};

struct MCValues {
  FormCoeffs eta1, eta2, eta11, eta31, eta32;
};

struct MCForms {
  std::function<MCValues(double, double)> at;

  static MCForms zero() {
    return {[](double, double) { return MCValues{}; }};
  }

  /// Forms built from the fields f, g, H.
  static MCForms from_fields(std::function<FieldJets(double, double)> fields) {
    return {[fields = std::move(fields)](double u, double v) {
      const FieldJets j = fields(u, v);
      const double ef = std::exp(j.f.val), eg = std::exp(j.g.val), H = j.H.val;
      return MCValues{{ef, 0}, {0, eg}, {j.g.du, -j.f.dv}, {-ef, -H * eg}, {-H * ef, 0}};
    }};
  }

  /// Case 1: g = -f(u), H = 0.
  static MCForms case1(const Expr& f) {
    return from_fields([f](double u, double) {
      const Taylor3 t = eval_taylor(f, u, 0.0, Axis::U);
      const Jet2 fj = detail::u_jet(t);
      return FieldJets{fj, -fj, Jet2(0.0)};
    });
  }

  static MCForms case2(const Expr& H, const Expr& k) {
    return from_fields([H, k](double u, double v) { return case2_jets(H, k, u, v); });
  }
};

struct FrameState {
  MVec3 x;
  MVec3 f1, f2, f3;

  static FrameState standard(const MVec3& x0 = {0, 0, 0}) {
    const NullFrame n = NullFrame::standard();
    return {x0, n.f1, n.f2, n.f3};
  }
  NullFrame frame() const { return {f1, f2, f3}; }

  FrameState& operator+=(const FrameState& o) {
    x += o.x;
    f1 += o.f1;
    f2 += o.f2;
    f3 += o.f3;
    return *this;
  }
  friend FrameState operator+(FrameState a, const FrameState& b) { return a += b; }
  friend FrameState operator*(FrameState a, double s) {
    a.x *= s;
    a.f1 *= s;
    a.f2 *= s;
    a.f3 *= s;
    return a;
  }
};

inline constexpr double kBlowupNorm = 1e12;
inline constexpr double kDefaultStep = 1e-3;

struct ParamPoint {
  double u = 0, v = 0;
};

using Polyline = std::vector<ParamPoint>;

namespace detail {

inline FrameState mc_rhs(const MCForms& mc, const FrameState& s, double u, double v, double du_dt, double dv_dt) {
  const MCValues w = mc.at(u, v);
  const double e1 = w.eta1.along(du_dt, dv_dt), e2 = w.eta2.along(du_dt, dv_dt);
  const double e11 = w.eta11.along(du_dt, dv_dt);
  const double e31 = w.eta31.along(du_dt, dv_dt), e32 = w.eta32.along(du_dt, dv_dt);
  return {s.f1 * e1 + s.f2 * e2, s.f1 * e11 + s.f3 * e31, s.f2 * -e11 + s.f3 * e32, s.f1 * e32 + s.f2 * e31};
}

inline void check_blowup(const FrameState& s, double u, double v) {
  const double m = std::max({max_abs(s.x), max_abs(s.f1), max_abs(s.f2), max_abs(s.f3)});
  if (!(m <= kBlowupNorm)) {
    throw Error(ErrorKind::IntegrationBlowup,
                "state norm " + format_number(m) + " at (" + format_number(u) + ", " + format_number(v) + ")");
  }
}

/// Classical RK4 along the straight segment a -> b with at most `step`
/// parameter length per step.
inline FrameState rk4_segment(const MCForms& mc, FrameState s, ParamPoint a, ParamPoint b, double step) {
  const double du = b.u - a.u, dv = b.v - a.v;
  const double length = std::hypot(du, dv);
  if (length == 0.0) return s;
  const int n = static_cast<int>(std::ceil(length / step - 1e-9));
  const double h = 1.0 / n;
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    const auto at = [&](double tt) { return ParamPoint{a.u + tt * du, a.v + tt * dv}; };
    const ParamPoint p0 = at(t), pm = at(t + 0.5 * h), p1 = at(t + h);
    const FrameState k1 = mc_rhs(mc, s, p0.u, p0.v, du, dv);
    const FrameState k2 = mc_rhs(mc, s + k1 * (0.5 * h), pm.u, pm.v, du, dv);
    const FrameState k3 = mc_rhs(mc, s + k2 * (0.5 * h), pm.u, pm.v, du, dv);
    const FrameState k4 = mc_rhs(mc, s + k3 * h, p1.u, p1.v, du, dv);
    s += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
    check_blowup(s, p1.u, p1.v);
  }
  return s;
}

}  // namespace detail

struct FrameFlowResult {
  FrameState state;
  double gram_defect = 0;  // max deviation of the six null-frame Gram conditions
};

/// Integrates the Maurer-Cartan system from init at path.front() along the
/// polyline with fixed-step RK4.
inline FrameFlowResult integrate_frame(const MCForms& mc, const FrameState& init, const Polyline& path,
                                       double step = kDefaultStep) {
  if (!(step > 0.0)) throw Error(ErrorKind::UsageError, "integration step must be positive");
  if (path.empty()) throw Error(ErrorKind::UsageError, "integration path is empty");
  FrameState s = init;
  for (std::size_t i = 1; i < path.size(); ++i) s = detail::rk4_segment(mc, s, path[i - 1], path[i], step);
  return {s, null_frame_defect(s.frame())};
}

// --- Case-2 reconstruction --------------------------------------------------------

struct Case2Node {
  double u = 0, v = 0;
  MVec3 x;
  MVec3 f3;
  double K = std::numeric_limits<double>::quiet_NaN();  // recomputed from sampled x
  double H = std::numeric_limits<double>::quiet_NaN();
  double disc = std::numeric_limits<double>::quiet_NaN();
  PointClass cls = PointClass::Umbilic;
  double null_defect = 0;      // |<x_v, x_v>| / |x_v|^2
  double straight_defect = 0;  // |x_v x x_vv| / |x_v|^2 (Euclidean)
};

struct Case2Reconstruction {
  GridAxis u_axis, v_axis;
  std::vector<Case2Node> nodes;  // row-major: index = i * v_axis.n + j
  double max_gram_defect = 0;

  const Case2Node& node(int i, int j) const { return nodes[static_cast<std::size_t>(i) * v_axis.n + j]; }
};

inline constexpr double kReconstructionStencil = 2e-3;

/// Integrates the Case-2 frame from init at (u_lo, v_lo): first along
/// v = v_lo in u, then along each v-line. Every node also gets a 9-point
/// stencil of width h, from which H, the class, and the ruling defects are
/// recomputed with the surface_geometry pipeline.
inline Case2Reconstruction reconstruct_case2(const Expr& H, const Expr& k, const FrameState& init,
                                             const GridAxis& u_axis, const GridAxis& v_axis,
                                             double step = kDefaultStep, double h = kReconstructionStencil,
                                             double tol = kClassifyTol) {
  const MCForms mc = MCForms::case2(H, k);
  const double u0 = u_axis.lo, v0 = v_axis.lo;

  // Stencil offsets -h, 0, +h in each direction.
  std::vector<double> us;
  for (int i = 0; i < u_axis.n; ++i)
    for (int d = -1; d <= 1; ++d) us.push_back(u_axis.at(i) + d * h);
  std::vector<double> vs;
  for (int j = 0; j < v_axis.n; ++j)
    for (int d = -1; d <= 1; ++d) vs.push_back(v_axis.at(j) + d * h);

  // u-sweep along v = v0, visiting us in ascending order.
  std::vector<std::size_t> order(us.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return us[a] < us[b]; });
  std::vector<FrameState> base(us.size());
  {
    FrameState s = init;
    ParamPoint at{u0, v0};
    for (std::size_t idx : order) {
      const ParamPoint next{us[idx], v0};
      s = detail::rk4_segment(mc, s, at, next, step);
      at = next;
      base[idx] = s;
    }
  }

  // v-sweeps from every base point; each visits vs in ascending order.
  std::vector<std::size_t> v_order(vs.size());
  for (std::size_t j = 0; j < v_order.size(); ++j) v_order[j] = j;
  std::sort(v_order.begin(), v_order.end(), [&](auto a, auto b) { return vs[a] < vs[b]; });
  std::vector<FrameState> states(us.size() * vs.size());
  parallel_for(us.size(), [&](std::size_t i) {
    FrameState s = base[i];
    ParamPoint at{us[i], v0};
    for (std::size_t jdx : v_order) {
      const ParamPoint next{us[i], vs[jdx]};
      s = detail::rk4_segment(mc, s, at, next, step);
      at = next;
      states[i * vs.size() + jdx] = s;
    }
  });

  Case2Reconstruction out{u_axis, v_axis, {}, 0.0};
  for (const FrameState& s : states) out.max_gram_defect = std::max(out.max_gram_defect, null_frame_defect(s.frame()));
  const auto x_at = [&](int i, int di, int j, int dj) -> const MVec3& {
    return states[static_cast<std::size_t>(3 * i + 1 + di) * vs.size() + (3 * j + 1 + dj)].x;
  };
  out.nodes.resize(static_cast<std::size_t>(u_axis.n) * v_axis.n);
  for (int i = 0; i < u_axis.n; ++i) {
    for (int j = 0; j < v_axis.n; ++j) {
      Case2Node& nd = out.nodes[static_cast<std::size_t>(i) * v_axis.n + j];
      nd.u = u_axis.at(i);
      nd.v = v_axis.at(j);
      nd.x = x_at(i, 0, j, 0);
      nd.f3 = states[static_cast<std::size_t>(3 * i + 1) * vs.size() + (3 * j + 1)].f3;
      const MVec3 c = nd.x;
      SurfaceJet jet{c,
                     (x_at(i, 1, j, 0) - x_at(i, -1, j, 0)) / (2 * h),
                     (x_at(i, 0, j, 1) - x_at(i, 0, j, -1)) / (2 * h),
                     (x_at(i, 1, j, 0) - 2.0 * c + x_at(i, -1, j, 0)) / (h * h),
                     (x_at(i, 1, j, 1) - x_at(i, 1, j, -1) - x_at(i, -1, j, 1) + x_at(i, -1, j, -1)) / (4 * h * h),
                     (x_at(i, 0, j, 1) - 2.0 * c + x_at(i, 0, j, -1)) / (h * h)};
      const double xv2 = euclidean_dot(jet.xv, jet.xv);
      nd.null_defect = std::abs(minkowski_inner(jet.xv, jet.xv)) / xv2;
      nd.straight_defect = euclidean_norm(euclidean_cross(jet.xv, jet.xvv)) / xv2;
      // The integrated f3 is the normal the input H refers to.
      const MVec3 n_formula = unit_normal(jet);
      const Sign sign = minkowski_inner(n_formula, nd.f3) < 0 ? Sign::Plus : Sign::Minus;
      const PointAnalysis a = analyze_jet(jet, sign, tol);
      nd.K = a.report.K;
      nd.H = a.report.H;
      nd.disc = a.report.disc;
      nd.cls = a.report.cls;
    }
  }
  return out;
}

}  // namespace quasumb
