#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "quasumb/frame_flow.hpp"
#include "quasumb/generators.hpp"
#include "test_util.hpp"

namespace quasumb {
namespace {

using testing::uniform;

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::UsageError;
}

std::string num(double x) { return "(" + format_number(x) + ")"; }

// --- Liouville ---------------------------------------------------------------

TEST(Liouville, LinearSolutionAtOneOne) {
  EXPECT_NEAR(liouville_solution(parse_expr("u"), parse_expr("v"), 1, 1), -std::log(2.0), 1e-15);
  const Jet2 z = liouville_solution_jet(parse_expr("u"), parse_expr("v"), 0.3, 2.0);
  const Jet2 ref = eval_jet2(parse_expr("ln(2/(u+v)^2)"), 0.3, 2.0);
  EXPECT_NEAR(z.val, ref.val, 1e-15);
  EXPECT_NEAR(z.duv, ref.duv, 1e-15);
  EXPECT_NEAR(z.duu, ref.duu, 1e-15);
}

TEST(Liouville, ResidualExamples) {
  EXPECT_NEAR(liouville_residual(parse_expr("ln(2/(u+v)^2)"), 1, 1), 0.0, 1e-15);
  EXPECT_EQ(liouville_residual(parse_expr("0"), 0.4, 0.2), -1.0);
}

TEST(Liouville, DomainErrors) {
  EXPECT_EQ(kind_of([] { liouville_solution(parse_expr("1"), parse_expr("v"), 1, 1); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { liouville_solution(parse_expr("u^2"), parse_expr("v"), 0, 1); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { liouville_solution(parse_expr("u"), parse_expr("v"), 1, -1); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { liouville_solution(parse_expr("u"), parse_expr("-v"), 1, 0.5); }), ErrorKind::DomainError);
}

TEST(Liouville, RandomSolutionsSatisfyTheEquation) {
  for (int n = 0; n < 50; ++n) {
    // Strictly increasing and positive on (0, inf): polynomial plus exponential.
    const Expr phi = parse_expr(num(uniform(0.2, 2)) + "*u + " + num(uniform(0, 1)) + "*u^3 + " +
                                num(uniform(0, 1)) + "*(exp(" + num(uniform(0.1, 1.5)) + "*u) - 1)");
    const Expr psi = parse_expr(num(uniform(0.2, 2)) + "*v + " + num(uniform(0, 1)) + "*v^3 + " +
                                num(uniform(0, 1)) + "*(exp(" + num(uniform(0.1, 1.5)) + "*v) - 1)");
    for (int i = 0; i < 20; ++i) {
      const double u = uniform(0.2, 2), v = uniform(0.2, 2);
      EXPECT_LE(std::abs(liouville_residual(liouville_solution_jet(phi, psi, u, v))), 1e-9);
    }
  }
}

TEST(Backlund, RemarkConstructionWithZeroWave) {
  // rho = sigma = 0: phi = u, psi = v/2, z = ln(1/(u + v/2)^2). The remark's
  // e^{(z+w)/2} picks the branch u + v/2 < 0.
  const Expr z = parse_expr("ln(2*1*0.5/(u+v/2)^2)");
  const Expr w = parse_expr("0");
  for (int i = 0; i < 50; ++i) {
    const double u = uniform(-3, -0.5), v = uniform(-1, 0.5);
    const auto [r1, r2] = backlund_residual(z, w, u, v);
    EXPECT_LE(std::abs(r1), 1e-9);
    EXPECT_LE(std::abs(r2), 1e-9);
    EXPECT_NEAR(liouville_residual(z, u, v), 0.0, 1e-9);
  }
}

TEST(Backlund, ZeroFields) {
  const auto [r1, r2] = backlund_residual(parse_expr("0"), parse_expr("0"), 0.3, 0.7);
  EXPECT_EQ(r1, -2.0);
  EXPECT_EQ(r2, -1.0);
}

TEST(Backlund, SeparableWaveHasZeroMixedPartial) {
  EXPECT_EQ(eval_jet2(parse_expr("sin(u)*3 + exp(v) - v^2"), 0.4, -0.9).duv, 0.0);
}

// --- Case 2 forms and PDE residuals ---------------------------------------------

TEST(Case2Forms, ConstantMeanCurvature) {
  const auto [f, g] = case2_forms(parse_expr("1.5"), parse_expr("-1"), 0.7, 0.4);
  EXPECT_EQ(f, 0.0);
  EXPECT_NEAR(g, std::log(2 / (2.25 * 1.1 * 1.1)), 1e-15);
  EXPECT_NEAR(case2_forms(parse_expr("1"), parse_expr("-1"), 1, 1).second, std::log(0.5), 1e-15);
  const FieldJets j = case2_jets(parse_expr("1.5"), parse_expr("-1"), 0.7, 0.4);
  EXPECT_EQ(j.f.dv, 0.0);
  const PdeResiduals r = pde_residuals(j);
  EXPECT_LE(std::abs(r.r1), 1e-9);
  EXPECT_LE(std::abs(r.r2), 1e-9);
  EXPECT_LE(std::abs(r.r3), 1e-9);
}

TEST(Case2Forms, ChartBoundariesAreErrors) {
  EXPECT_EQ(kind_of([] { case2_forms(parse_expr("0*u"), parse_expr("-1"), 1, 1); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { case2_forms(parse_expr("1"), parse_expr("-1"), 1, -1); }), ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { case2_forms(parse_expr("1"), parse_expr("1"), 1, 1); }), ErrorKind::DomainError);
}

TEST(PdeResiduals, Case1DataAndConstantMismatch) {
  const PdeResiduals c1 = pde_residuals(jet_field(parse_expr("sin(u) + u^2")), jet_field(parse_expr("0")),
                                        jet_field(parse_expr("0")), 0.3, -0.8);
  EXPECT_EQ(c1.r1, 0.0);
  EXPECT_EQ(c1.r2, 0.0);
  EXPECT_EQ(c1.r3, 0.0);
  const PdeResiduals one = pde_residuals(jet_field(parse_expr("0")), jet_field(parse_expr("0")),
                                         jet_field(parse_expr("1")), 0.3, -0.8);
  EXPECT_EQ(one.r3, -1.0);
}

TEST(PdeResiduals, RandomCase2DataSatisfiesTheSystem) {
  for (int n = 0; n < 20; ++n) {
    const Expr H = parse_expr(num(uniform(1, 2) * (uniform(0, 1) < 0.5 ? -1 : 1)) + " + " + num(uniform(-0.2, 0.2)) +
                              "*sin(" + num(uniform(0.2, 1)) + "*u)");
    const Expr k = parse_expr(num(uniform(-4, -3)) + " + " + num(uniform(-0.5, 0.5)) + "*cos(u)");
    for (int i = 0; i < 10; ++i) {
      const double u = uniform(0.5, 1.5), v = uniform(0.5, 1.5);
      const PdeResiduals r = pde_residuals(case2_jets(H, k, u, v));
      EXPECT_LE(std::abs(r.r1), 1e-8);
      EXPECT_LE(std::abs(r.r2), 1e-8);
      EXPECT_LE(std::abs(r.r3), 1e-8);
    }
  }
}

// --- frame integration -------------------------------------------------------------

double max_diff(const MVec3& a, const MVec3& b) { return max_abs(a - b); }

TEST(IntegrateFrame, ZeroFormsKeepEverythingConstant) {
  const FrameState init = FrameState::standard({1, 2, 3});
  const FrameFlowResult r = integrate_frame(MCForms::zero(), init, {{0, 0}, {1, 0.5}, {-2, 3}}, 1e-2);
  EXPECT_EQ(r.state.x, init.x);
  EXPECT_EQ(r.state.f1, init.f1);
  EXPECT_EQ(r.state.f3, init.f3);
  EXPECT_LT(r.gram_defect, 1e-15);
}

TEST(IntegrateFrame, Case1MatchesClosedForm) {
  for (const char* f : {"0", "0.3*u + 0.1*sin(u)"}) {
    const Expr fe = parse_expr(f);
    const NullFrame frame = NullFrame::standard();
    const SurfaceSpec closed = case1_cylinder(fe, frame);
    // The frame at the origin must match the closed form's normalization.
    const FrameState init{{0, 0, 0}, frame.f1, frame.f2, frame.f3};
    const FrameFlowResult r = integrate_frame(MCForms::case1(fe), init, {{0, 0}, {1, 0}}, 1e-3);
    EXPECT_LE(max_diff(r.state.x, surface_point(closed, 1, 0)), 1e-8) << f;
    EXPECT_LE(r.gram_defect, 1e-8) << f;
    const FrameFlowResult r2 = integrate_frame(MCForms::case1(fe), init, {{0, 0}, {0.6, 0}, {0.6, -0.8}}, 1e-3);
    EXPECT_LE(max_diff(r2.state.x, surface_point(closed, 0.6, -0.8)), 1e-8) << f;
  }
}

TEST(IntegrateFrame, PathIndependence) {
  const MCForms mc = MCForms::case1(parse_expr("0.3*u + 0.1*sin(u)"));
  const FrameState init = FrameState::standard();
  const FrameState a = integrate_frame(mc, init, {{0, 0}, {1, 0}, {1, 1}}).state;
  const FrameState b = integrate_frame(mc, init, {{0, 0}, {0, 1}, {1, 1}}).state;
  EXPECT_LE(max_diff(a.x, b.x), 1e-7);
  EXPECT_LE(max_diff(a.f1, b.f1), 1e-7);
  EXPECT_LE(max_diff(a.f3, b.f3), 1e-7);
}

TEST(IntegrateFrame, FourthOrderConvergenceOnCurvedData) {
  // f = sin(2u) makes the system non-nilpotent, so RK4 has a visible
  // truncation error.
  const Expr f = parse_expr("sin(2*u) + 0.5*u");
  const SurfaceSpec closed = case1_cylinder(f, NullFrame::standard());
  const MVec3 exact = surface_point(closed, 1, 0);
  const auto error = [&](double step) {
    const FrameState s = integrate_frame(MCForms::case1(f), FrameState::standard(), {{0, 0}, {1, 0}}, step).state;
    return max_diff(s.x, exact);
  };
  const double e1 = error(0.04), e2 = error(0.02);
  EXPECT_GT(e1, 1e-11);
  EXPECT_GE(e1 / e2, 12.0);
}

TEST(IntegrateFrame, ErrorsSurface) {
  const MCForms wild = MCForms::from_fields([](double u, double) {
    const Jet2 f = 60.0 * Jet2::u_variable(u);
    return FieldJets{f, -f, Jet2(0.0)};
  });
  EXPECT_EQ(kind_of([&] { integrate_frame(wild, FrameState::standard(), {{0, 0}, {1, 0}}, 1e-2); }),
            ErrorKind::IntegrationBlowup);
  EXPECT_EQ(kind_of([] { integrate_frame(MCForms::case2(parse_expr("1"), parse_expr("-1")), FrameState::standard(),
                                         {{0.5, 0.5}, {-1, -1}}, 1e-2); }),
            ErrorKind::DomainError);
  EXPECT_EQ(kind_of([] { integrate_frame(MCForms::zero(), FrameState::standard(), {{0, 0}}, 0.0); }),
            ErrorKind::UsageError);
}

// --- Case-2 reconstruction --------------------------------------------------------------

TEST(ReconstructCase2, ConstantMeanCurvatureSelfConsistency) {
  const Case2Reconstruction rec = reconstruct_case2(parse_expr("1"), parse_expr("-1"), FrameState::standard(),
                                                    {0.5, 1.5, 6}, {0.5, 1.5, 6}, 1e-3);
  int interior = 0, quasi = 0;
  double worst_h = 0, worst_null = 0, worst_straight = 0;
  for (int i = 1; i + 1 < 6; ++i) {
    for (int j = 1; j + 1 < 6; ++j) {
      const Case2Node& nd = rec.node(i, j);
      ++interior;
      if (nd.cls == PointClass::QuasiUmbilic) ++quasi;
      worst_h = std::max(worst_h, std::abs(nd.H - 1.0));
      worst_null = std::max(worst_null, nd.null_defect);
      worst_straight = std::max(worst_straight, nd.straight_defect);
    }
  }
  EXPECT_LE(worst_h, 1e-4);
  EXPECT_LE(worst_null, 1e-5);
  EXPECT_LE(worst_straight, 1e-5);
  EXPECT_GE(quasi, 0.99 * interior);
  EXPECT_LE(rec.max_gram_defect, 1e-8);
}

TEST(ReconstructCase2, StartsAtTheInitialState) {
  const FrameState init = FrameState::standard({1, -1, 2});
  const Case2Reconstruction rec =
      reconstruct_case2(parse_expr("1"), parse_expr("-1"), init, {0.5, 1.5, 3}, {0.5, 1.5, 3}, 1e-2);
  EXPECT_LE(max_diff(rec.node(0, 0).x, init.x), 1e-12);
  EXPECT_EQ(rec.nodes.size(), 9u);
}

}  // namespace
}  // namespace quasumb
