#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/tools/roots.hpp>

#include "quasumb/error.hpp"
#include "quasumb/expr.hpp"
#include "quasumb/expr_eval.hpp"
#include "quasumb/grid.hpp"
#include "quasumb/mink_algebra.hpp"
#include "quasumb/parallel.hpp"
#include "quasumb/surface_geometry.hpp"
#include "quasumb/surface_spec.hpp"

namespace quasumb {

inline constexpr int kLocusBrackets = 64;
inline constexpr double kLocusBracketTol = 1e-10;
inline constexpr double kRulingTol = 1e-7;
inline constexpr double kNondegeneracyTol = 1e-6;
inline constexpr double kThinUmbilicFraction = 0.05;

struct LocusPoint {
  double u = 0, v = 0;
  bool operator==(const LocusPoint&) const = default;
};

struct UmbilicLocus {
  std::vector<LocusPoint> points;  // ordered by u sample, then v
  std::vector<std::string> notes;  // one per skipped u sample
};

namespace detail {

/// ||S - H Id||_max, carrying the sign of the largest off-diagonal entry of
/// the trace-free part (the diagonal entry when both off-diagonals vanish
/// along the whole line). `which` selects the entry: 0 = s11 - H, 1 = s12, 2 = s21.
inline double signed_nil(const ShapeMatrix& S, int which) {
  const double H = 0.5 * S.trace();
  const ShapeMatrix nil{S.s11 - H, S.s12, S.s21, S.s22 - H};
  const double entry = which == 1 ? nil.s12 : which == 2 ? nil.s21 : nil.s11;
  if (entry == 0.0) return 0.0;
  return std::copysign(nil.max_abs(), entry);
}

inline int dominant_entry(const std::vector<ShapeMatrix>& line) {
  double q = 0, r = 0;
  for (const ShapeMatrix& S : line) {
    q = std::max(q, std::abs(S.s12));
    r = std::max(r, std::abs(S.s21));
  }
  if (q == 0 && r == 0) return 0;
  return r >= q ? 2 : 1;
}

/// Roots on one u-line; throws whatever the geometry throws.
inline std::vector<double> locus_on_line(const SurfaceSpec& spec, double u, double v_lo, double v_hi, double tol) {
  std::vector<double> vs(kLocusBrackets + 1);
  std::vector<ShapeMatrix> line(vs.size());
  for (int k = 0; k <= kLocusBrackets; ++k) {
    vs[k] = v_lo + (v_hi - v_lo) * k / kLocusBrackets;
    line[k] = shape_operator_at(spec, u, vs[k]);
  }
  const int which = dominant_entry(line);
  const auto g = [&](double v) { return signed_nil(shape_operator_at(spec, u, v), which); };
  std::vector<double> g_samples(vs.size());
  for (std::size_t k = 0; k < vs.size(); ++k) g_samples[k] = signed_nil(line[k], which);

  std::vector<double> candidates;
  for (std::size_t k = 0; k < vs.size(); ++k) {
    if (g_samples[k] == 0.0) {
      candidates.push_back(vs[k]);
    } else if (k + 1 < vs.size() && g_samples[k + 1] != 0.0 && (g_samples[k] < 0) != (g_samples[k + 1] < 0)) {
      std::uintmax_t iters = 200;
      const auto [a, b] = boost::math::tools::bisect(
          g, vs[k], vs[k + 1], [](double x, double y) { return std::abs(y - x) <= kLocusBracketTol; }, iters);
      candidates.push_back(0.5 * (a + b));
    }
  }
  // A sign change can be a jump of the dominant entry rather than a zero of
  // S - H Id; only genuine umbilic points survive.
  std::vector<double> roots;
  for (double v : candidates) {
    if (analyze_point(spec, u, v, tol).report.cls == PointClass::Umbilic) roots.push_back(v);
  }
  return roots;
}

}  // namespace detail

/// Umbilic points on each u sample of u_axis, found by scanning [v_lo, v_hi]
/// in 64 brackets and bisecting sign changes of the trace-free part of S.
/// u samples without a root, or where evaluation fails, are skipped with a
/// note; a non-timelike sample is an error.
inline UmbilicLocus umbilic_locus(const SurfaceSpec& spec, const GridAxis& u_axis, double v_lo, double v_hi,
                                  double tol = kClassifyTol) {
  if (!(v_lo < v_hi) || u_axis.n < 1) throw Error(ErrorKind::UsageError, "empty locus search range");
  std::vector<std::vector<double>> roots(static_cast<std::size_t>(u_axis.n));
  std::vector<std::string> notes(roots.size());
  parallel_for(roots.size(), [&](std::size_t i) {
    const double u = u_axis.at(static_cast<int>(i));
    try {
      roots[i] = detail::locus_on_line(spec, u, v_lo, v_hi, tol);
      if (roots[i].empty()) notes[i] = Error(ErrorKind::NoRootInRange, "u = " + format_number(u)).what();
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotTimelike) throw;
      notes[i] = std::string(e.what()) + " at u = " + format_number(u);
    }
  });
  UmbilicLocus out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    for (double v : roots[i]) out.points.push_back({u_axis.at(static_cast<int>(i)), v});
    if (!notes[i].empty()) out.notes.push_back(notes[i]);
  }
  return out;
}

// --- null rulings --------------------------------------------------------------

struct NullRulingReport {
  bool is_ruled_null = false;
  double max_null_defect = 0;      // |<x_v, x_v>| / |x_v|^2
  double max_straight_defect = 0;  // |x_v x x_vv| / |x_v|^2, Euclidean
};

/// Checks that every v-curve is a null straight line. Straightness is
/// x_vv parallel to x_v, so reparametrized rulings still pass.
inline NullRulingReport detect_null_rulings(const SurfaceSpec& spec, const Grid& grid) {
  std::vector<std::array<double, 2>> defects(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    const int i = static_cast<int>(k / grid.v.n), j = static_cast<int>(k % grid.v.n);
    const SurfaceJet jet = surface_jet(spec, grid.u.at(i), grid.v.at(j));
    const double xv2 = euclidean_dot(jet.xv, jet.xv);
    defects[k] = {std::abs(minkowski_inner(jet.xv, jet.xv)) / xv2,
                  euclidean_norm(euclidean_cross(jet.xv, jet.xvv)) / xv2};
  });
  NullRulingReport r;
  for (const auto& d : defects) {
    r.max_null_defect = std::max(r.max_null_defect, d[0]);
    r.max_straight_defect = std::max(r.max_straight_defect, d[1]);
  }
  r.is_ruled_null = r.max_null_defect <= kRulingTol && r.max_straight_defect <= kRulingTol;
  return r;
}

// --- nondegeneracy of the base curve ---------------------------------------------

/// First and second derivative of a curve at one parameter value.
struct CurveDerivatives {
  MVec3 d1, d2;
};
using CurveFn = std::function<CurveDerivatives(double)>;

/// alpha given by three expressions in u.
inline CurveFn expression_curve(const std::array<Expr, 3>& alpha) {
  return [alpha](double u) {
    const Taylor3 a0 = eval_taylor(alpha[0], u, 0.0);
    const Taylor3 a1 = eval_taylor(alpha[1], u, 0.0);
    const Taylor3 a2 = eval_taylor(alpha[2], u, 0.0);
    return CurveDerivatives{{a0.d1, a1.d1, a2.d1}, {a0.d2, a1.d2, a2.d2}};
  };
}

/// The curve v = v0 on a surface; for a ruled surface at v0 = 0 this is the
/// base curve alpha.
inline CurveFn base_curve(const SurfaceSpec& spec, double v0 = 0.0) {
  return [spec, v0](double u) {
    const SurfaceJet j = surface_jet(spec, u, v0);
    return CurveDerivatives{j.xu, j.xuu};
  };
}

struct NondegeneracyReport {
  bool pass = false;
  double min_independence = 0;  // min |a' x a''| / (|a'| |a''|), Euclidean
};

inline NondegeneracyReport nondegeneracy_check(const CurveFn& alpha, const GridAxis& u_axis) {
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < u_axis.n; ++i) {
    const double u = u_axis.at(i);
    CurveDerivatives c;
    try {
      c = alpha(u);
    } catch (const Error& e) {
      throw Error(ErrorKind::EvaluationError, std::string(e.what()) + " at u = " + format_number(u));
    }
    if (!is_finite(c.d1) || !is_finite(c.d2))
      throw Error(ErrorKind::EvaluationError, "non-finite curve derivative at u = " + format_number(u));
    const double denom = euclidean_norm(c.d1) * euclidean_norm(c.d2);
    const double measure = denom == 0.0 ? 0.0 : euclidean_norm(euclidean_cross(c.d1, c.d2)) / denom;
    worst = std::min(worst, measure);
  }
  return {worst >= kNondegeneracyTol, worst};
}

// --- whole-surface classification --------------------------------------------------

enum class Verdict { TotallyQuasiUmbilic, QuasiUmbilicWithUmbilicCurve, TotallyUmbilic, Mixed, NotTimelike };

inline const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::TotallyQuasiUmbilic: return "totally_quasi_umbilic";
    case Verdict::QuasiUmbilicWithUmbilicCurve: return "quasi_umbilic_with_umbilic_curve";
    case Verdict::TotallyUmbilic: return "totally_umbilic";
    case Verdict::Mixed: return "mixed";
    case Verdict::NotTimelike: return "not_timelike";
  }
  return "unknown";
}

/// One grid node. `error` is set when the pipeline threw; report and x are
/// then meaningless.
struct NodeResult {
  double u = 0, v = 0;
  MVec3 x{std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN(),
          std::numeric_limits<double>::quiet_NaN()};
  PointReport report;
  std::optional<ErrorKind> error;
};

/// Runs the point pipeline at every node, row-major.
inline std::vector<NodeResult> evaluate_grid(const SurfaceSpec& spec, const Grid& grid, double tol = kClassifyTol) {
  std::vector<NodeResult> out(grid.size());
  parallel_for(grid.size(), [&](std::size_t k) {
    NodeResult& nd = out[k];
    nd.u = grid.u.at(static_cast<int>(k / grid.v.n));
    nd.v = grid.v.at(static_cast<int>(k % grid.v.n));
    try {
      nd.x = surface_point(spec, nd.u, nd.v);
      nd.report = analyze_point(spec, nd.u, nd.v, tol).report;
    } catch (const Error& e) {
      nd.error = e.kind();
    }
  });
  return out;
}

struct ClassCounts {
  std::size_t umbilic = 0, quasi_umbilic = 0, real_diagonalizable = 0, complex_diagonalizable = 0;
  std::size_t not_timelike = 0, failed = 0;  // error points

  std::size_t classified() const { return umbilic + quasi_umbilic + real_diagonalizable + complex_diagonalizable; }
};

struct Extremum {
  double min = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();

  void add(double x) {
    if (!(x >= min)) min = std::isnan(min) ? x : std::min(min, x);
    if (!(x <= max)) max = std::isnan(max) ? x : std::max(max, x);
  }
};

struct GlobalReport {
  Verdict verdict = Verdict::Mixed;
  std::size_t grid_size = 0;
  ClassCounts counts;
  Extremum K, H, disc;
  std::vector<LocusPoint> umbilic_locus;
  std::vector<std::string> notes;
};

/// Verdict from the counts. An umbilic curve is recognized either from
/// umbilic grid nodes or from a nonempty root-found locus, since a grid
/// almost never lands exactly on a curve.
inline Verdict verdict_from(const ClassCounts& c, bool locus_found) {
  if (c.not_timelike > 0) return Verdict::NotTimelike;
  const std::size_t n = c.classified();
  if (n == 0) return Verdict::Mixed;
  if (c.umbilic == n) return Verdict::TotallyUmbilic;
  if (c.umbilic + c.quasi_umbilic != n) return Verdict::Mixed;
  if (c.umbilic == 0 && !locus_found) return Verdict::TotallyQuasiUmbilic;
  if (static_cast<double>(c.umbilic) < kThinUmbilicFraction * static_cast<double>(n))
    return Verdict::QuasiUmbilicWithUmbilicCurve;
  return Verdict::Mixed;
}

inline GlobalReport summarize(const std::vector<NodeResult>& nodes) {
  GlobalReport r;
  r.grid_size = nodes.size();
  for (const NodeResult& nd : nodes) {
    if (nd.error) {
      (*nd.error == ErrorKind::NotTimelike ? r.counts.not_timelike : r.counts.failed)++;
      continue;
    }
    switch (nd.report.cls) {
      case PointClass::Umbilic: ++r.counts.umbilic; break;
      case PointClass::QuasiUmbilic: ++r.counts.quasi_umbilic; break;
      case PointClass::RealDiagonalizable: ++r.counts.real_diagonalizable; break;
      case PointClass::ComplexDiagonalizable: ++r.counts.complex_diagonalizable; break;
    }
    r.K.add(nd.report.K);
    r.H.add(nd.report.H);
    r.disc.add(nd.report.disc);
  }
  return r;
}

/// Classifies every node and, when the nodes are all quasi-umbilic or
/// umbilic, searches for an umbilic curve on the grid's u samples.
/// Per-node errors are counted, never thrown.
inline GlobalReport classify_surface(const SurfaceSpec& spec, const Grid& grid, double tol = kClassifyTol) {
  if (grid.size() == 0) throw Error(ErrorKind::UsageError, "empty grid");
  GlobalReport r = summarize(evaluate_grid(spec, grid, tol));
  const ClassCounts& c = r.counts;
  const bool candidate = c.not_timelike == 0 && c.quasi_umbilic > 0 && c.umbilic + c.quasi_umbilic == c.classified();
  if (candidate && grid.v.lo < grid.v.hi) {
    try {
      UmbilicLocus locus = umbilic_locus(spec, grid.u, grid.v.lo, grid.v.hi, tol);
      r.umbilic_locus = std::move(locus.points);
    } catch (const Error& e) {
      r.notes.push_back(std::string("locus search abandoned: ") + e.what());
    }
  }
  r.verdict = verdict_from(c, !r.umbilic_locus.empty());
  return r;
}

}  // namespace quasumb
