#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quasumb/error.hpp"
#include "quasumb/frame_flow.hpp"
#include "quasumb/generators.hpp"
#include "quasumb/loci_classify.hpp"

namespace quasumb {

/// One line of a verification run. `observed` is a number or a string.
struct Check {
  std::string name;
  nlohmann::json observed;
  std::string requirement;
  bool pass = false;
};

namespace detail {

inline Check at_most(std::string name, double value, double limit) {
  char req[48];
  std::snprintf(req, sizeof req, "<= %g", limit);
  return {std::move(name), value, req, value <= limit};
}

inline Check at_least(std::string name, double value, double limit) {
  char req[48];
  std::snprintf(req, sizeof req, ">= %g", limit);
  return {std::move(name), value, req, value >= limit};
}

inline Check equals(std::string name, const std::string& value, const std::string& want) {
  return {std::move(name), value, "== " + want, value == want};
}

template <typename Fn>
void for_grid(const Grid& g, Fn&& fn) {
  for (int i = 0; i < g.u.n; ++i)
    for (int j = 0; j < g.v.n; ++j) fn(g.u.at(i), g.v.at(j));
}

inline std::vector<Check> verify_ex1() {
  const SurfaceSpec s = builtin_example(BuiltinId::Ex1);
  const Grid g{{-3, 3, 40}, {-2, 2, 40}};
  double k = 0, h = 0, cyl = 0;
  std::size_t qu = 0;
  const MVec3 ruling{1, -1, 0};
  for_grid(g, [&](double u, double v) {
    const PointReport r = analyze_point(s, u, v).report;
    k = std::max(k, std::abs(r.K));
    h = std::max(h, std::abs(r.H));
    if (r.cls == PointClass::QuasiUmbilic) ++qu;
    const MVec3 d = surface_point(s, u, v + 0.7) - surface_point(s, u, v);
    cyl = std::max(cyl, euclidean_norm(euclidean_cross(d, ruling)) / euclidean_norm(ruling));
  });
  return {at_most("max |K|", k, 1e-8), at_most("max |H|", h, 1e-8),
          at_least("quasi-umbilic fraction", static_cast<double>(qu) / g.size(), 1.0),
          at_most("cylinder defect |dx x (1,-1,0)|", cyl, 1e-10)};
}

inline std::vector<Check> verify_ex2() {
  const SurfaceSpec s = builtin_example(BuiltinId::Ex2);
  const Grid g{{-std::numbers::pi, std::numbers::pi, 64}, {-1, 1, 64}};
  double k = 0, h = 0, m = 0;
  for_grid(g, [&](double u, double v) {
    const PointAnalysis a = analyze_point(s, u, v);
    k = std::max(k, std::abs(a.report.K - 0.25));
    h = std::max(h, std::abs(a.report.H - 0.5));
    const ShapeMatrix want{0.5, 0, -0.5, 0.5};
    m = std::max({m, std::abs(a.S.s11 - want.s11), std::abs(a.S.s12 - want.s12), std::abs(a.S.s21 - want.s21),
                  std::abs(a.S.s22 - want.s22)});
  });
  return {at_most("max |K - 1/4|", k, 1e-9), at_most("max |H - 1/2|", h, 1e-9),
          at_most("max |S - [[1/2,0],[-1/2,1/2]]|", m, 1e-9),
          equals("verdict", to_string(classify_surface(s, g).verdict), "totally_quasi_umbilic")};
}

inline std::vector<Check> verify_ex3() {
  const SurfaceSpec s = builtin_example(BuiltinId::Ex3);
  const Grid g{{-1.2, 1.2, 40}, {-1, 1, 40}};
  double k = 0, h = 0;
  for_grid(g, [&](double u, double v) {
    const PointReport r = analyze_point(s, u, v).report;
    const double a = 3 * u * u + 1;
    k = std::max(k, std::abs(r.K - 0.25 * a * a) / (1 + std::abs(r.K)));
    h = std::max(h, std::abs(r.H - 0.5 * a) / (1 + std::abs(r.H)));
  });
  const UmbilicLocus l = umbilic_locus(s, g.u, -3, 3);
  double res = 0;
  for (const LocusPoint& p : l.points) res = std::max(res, std::abs(3 * p.u * p.v - 0.5 * (3 * p.u * p.u + 1)));
  return {at_most("max rel |K - (3u^2+1)^2/4|", k, 1e-8), at_most("max rel |H - (3u^2+1)/2|", h, 1e-8),
          at_least("locus samples", static_cast<double>(l.points.size()), 1),
          at_most("max locus residual |3uv - (3u^2+1)/2|", res, 1e-8),
          equals("verdict", to_string(classify_surface(s, g).verdict), "quasi_umbilic_with_umbilic_curve")};
}

}  // namespace detail

/// Left side of the displayed umbilic-curve equation for Example 4.
inline double example4_locus_residual(double u, double v) {
  const double s = std::sin(u);
  return (8 * std::sin(u - s) + 8 * s - std::sin(2 * u + s) + std::sin(2 * u - s) - 2 * std::sin(s)) * v +
         (8 * std::cos(u + 0.5 * s) + 8 * std::cos(u - 0.5 * s));
}

namespace detail {

inline std::vector<Check> verify_ex4() {
  const SurfaceSpec s = builtin_example(BuiltinId::Ex4);
  const Grid g{{0, 2 * std::numbers::pi, 64}, {-3, 3, 64}};
  const GlobalReport r = classify_surface(s, g);
  double res = 0;
  for (const LocusPoint& p : r.umbilic_locus) res = std::max(res, std::abs(example4_locus_residual(p.u, p.v)));
  return {equals("verdict", to_string(r.verdict), "quasi_umbilic_with_umbilic_curve"),
          at_least("locus samples", static_cast<double>(r.umbilic_locus.size()), 1),
          at_most("max locus residual", res, 1e-6)};
}

inline std::vector<Check> verify_liouville() {
  const Expr phi = parse_expr("u + u^3"), psi = parse_expr("exp(v) - 1 + v");
  double res = 0;
  for_grid({{0.2, 2, 20}, {0.2, 2, 20}},
           [&](double u, double v) { res = std::max(res, std::abs(liouville_residual(liouville_solution_jet(phi, psi, u, v)))); });
  const double z11 = liouville_solution(parse_expr("u"), parse_expr("v"), 1, 1);
  return {at_most("|z(1,1) + ln 2| for phi=u, psi=v", std::abs(z11 + std::log(2.0)), 1e-14),
          at_most("max |z_uv - e^z|", res, 1e-9)};
}

inline std::vector<Check> verify_backlund() {
  const Expr z = parse_expr("ln(1/(u+v/2)^2)"), w = parse_expr("0");
  double r1 = 0, r2 = 0, lv = 0;
  for_grid({{-3, -0.5, 20}, {-1, 0.5, 20}}, [&](double u, double v) {
    const auto [a, b] = backlund_residual(z, w, u, v);
    r1 = std::max(r1, std::abs(a));
    r2 = std::max(r2, std::abs(b));
    lv = std::max(lv, std::abs(liouville_residual(z, u, v)));
  });
  return {at_most("max |z_u - w_u - 2 e^{(z+w)/2}|", r1, 1e-9), at_most("max |z_v + w_v - e^{(z-w)/2}|", r2, 1e-9),
          at_most("max Liouville residual of z", lv, 1e-9)};
}

inline std::vector<Check> verify_case1() {
  const auto run = [](const Expr& f, double step) {
    const SurfaceSpec closed = case1_cylinder(f, NullFrame::standard());
    const FrameFlowResult r = integrate_frame(MCForms::case1(f), FrameState::standard(), {{0, 0}, {1, 0}}, step);
    return std::pair{max_abs(r.state.x - surface_point(closed, 1, 0)), r.gram_defect};
  };
  const Expr zero = parse_expr("0"), curved = parse_expr("sin(2*u) + 0.5*u");
  const auto [e0, gram] = run(zero, 1e-3);
  const double ratio = run(curved, 0.04).first / run(curved, 0.02).first;
  return {at_most("|x - closed form|, f = 0, step 1e-3", e0, 1e-8), at_most("frame Gram defect", gram, 1e-8),
          at_most("|x - closed form|, f = sin(2u) + u/2", run(curved, 1e-3).first, 1e-8),
          at_least("error ratio on halving the step, f = sin(2u) + u/2", ratio, 12)};
}

inline std::vector<Check> verify_case2() {
  const Case2Reconstruction rec =
      reconstruct_case2(parse_expr("1"), parse_expr("-1"), FrameState::standard(), {0.5, 1.5, 6}, {0.5, 1.5, 6});
  double h = 0, nd = 0, sd = 0;
  std::size_t qu = 0;
  for (const Case2Node& n : rec.nodes) {
    h = std::max(h, std::abs(n.H - 1));
    nd = std::max(nd, n.null_defect);
    sd = std::max(sd, n.straight_defect);
    if (n.cls == PointClass::QuasiUmbilic) ++qu;
  }
  return {at_most("max |H - 1|", h, 1e-4), at_most("max ruling null defect", nd, 1e-5),
          at_most("max ruling straightness defect", sd, 1e-5),
          at_least("quasi-umbilic fraction", static_cast<double>(qu) / rec.nodes.size(), 0.99),
          at_most("frame Gram defect", rec.max_gram_defect, 1e-8)};
}

}  // namespace detail

inline const std::vector<std::string>& verify_example_names() {
  static const std::vector<std::string> names{"ex1",       "ex2",      "ex3",   "ex4",
                                              "liouville", "backlund", "case1", "case2"};
  return names;
}

inline std::vector<Check> verify_example(const std::string& name) {
  if (name == "ex1") return detail::verify_ex1();
  if (name == "ex2") return detail::verify_ex2();
  if (name == "ex3") return detail::verify_ex3();
  if (name == "ex4") return detail::verify_ex4();
  if (name == "liouville") return detail::verify_liouville();
  if (name == "backlund") return detail::verify_backlund();
  if (name == "case1") return detail::verify_case1();
  if (name == "case2") return detail::verify_case2();
  throw Error(ErrorKind::UsageError, "unknown example " + name);
}

}  // namespace quasumb
