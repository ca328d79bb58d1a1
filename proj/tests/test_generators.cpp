#include <cmath>
#include <numbers>
#include <string>

#include <gtest/gtest.h>

#include "quasumb/generators.hpp"
#include "test_util.hpp"

namespace quasumb {
namespace {

using testing::random_theta_spec;
using testing::uniform;

void expect_vec_near(const MVec3& a, const MVec3& b, double tol) {
  EXPECT_NEAR(a.x0, b.x0, tol);
  EXPECT_NEAR(a.x1, b.x1, tol);
  EXPECT_NEAR(a.x2, b.x2, tol);
}

void expect_matrix_near(const ShapeMatrix& a, const ShapeMatrix& b, double tol) {
  EXPECT_NEAR(a.s11, b.s11, tol);
  EXPECT_NEAR(a.s12, b.s12, tol);
  EXPECT_NEAR(a.s21, b.s21, tol);
  EXPECT_NEAR(a.s22, b.s22, tol);
}

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::UsageError;
}

// --- ruled_null_surface ------------------------------------------------------

TEST(RuledNullSurface, ReproducesExamples) {
  for (BuiltinId id : {BuiltinId::Ex1, BuiltinId::Ex2, BuiltinId::Ex3}) {
    const SurfaceSpec ruled = ruled_null_surface(example_theta_spec(id));
    const SurfaceSpec closed = builtin_example(id);
    for (int i = 0; i < 20; ++i) {
      const double u = uniform(-1.5, 1.5), v = uniform(-1, 1);
      const SurfaceJet a = surface_jet(ruled, u, v), b = surface_jet(closed, u, v);
      expect_vec_near(a.x, b.x, 1e-10);
      expect_vec_near(a.xu, b.xu, 1e-12);
      expect_vec_near(a.xuu, b.xuu, 1e-12);
      expect_vec_near(a.xuv, b.xuv, 1e-12);
    }
  }
}

TEST(RuledNullSurface, Example2ClosedForm) {
  const SurfaceSpec s = ruled_null_surface(example_theta_spec(BuiltinId::Ex2));
  const double u = 0.9, v = -0.3;
  expect_vec_near(surface_point(s, u, v),
                  {u + v, std::sin(u) - v * std::cos(u), -std::cos(u) - v * std::sin(u)}, 1e-12);
}

TEST(RuledNullSurface, RejectsDegenerateAngles) {
  EXPECT_EQ(kind_of([] { ruled_null_surface({parse_expr("1"), parse_expr("2")}); }), ErrorKind::DegenerateSpec);
  EXPECT_EQ(kind_of([] { ruled_null_surface({parse_expr("u"), parse_expr("u")}); }), ErrorKind::DegenerateSpec);
  EXPECT_EQ(kind_of([] { ruled_null_surface({parse_expr("u"), parse_expr("u+2*pi")}); }),
            ErrorKind::DegenerateSpec);
  EXPECT_EQ(kind_of([] { ruled_null_surface({parse_expr("(u-pi)^2"), parse_expr("pi")}); }),
            ErrorKind::DegenerateSpec);  // theta1'(pi) = 0 at the last sample
  EXPECT_EQ(kind_of([] { ruled_null_surface({parse_expr("u+v"), parse_expr("pi")}); }),
            ErrorKind::DegenerateSpec);
}

// --- case1_cylinder ------------------------------------------------------------

TEST(Case1Cylinder, ZeroFAtUnitU) {
  const SurfaceSpec s = case1_cylinder(parse_expr("0"), NullFrame::standard());
  const double r = 1 / std::numbers::sqrt2;
  expect_vec_near(surface_point(s, 1, 0), {7.0 / 6 * r, 5.0 / 6 * r, -0.5}, 1e-13);
}

TEST(Case1Cylinder, StartsOnTheRulingThroughX0) {
  const MVec3 x0{0.5, -1, 2};
  const SurfaceSpec s = case1_cylinder(parse_expr("0"), NullFrame::standard(), x0);
  for (double v : {-2.0, 0.0, 0.7}) expect_vec_near(surface_point(s, 0, v), x0 + NullFrame::standard().f2 * v, 1e-15);
}

TEST(Case1Cylinder, TranslationAlongRulings) {
  const Expr f = parse_expr("0.5 + 0.3*u + 0.2*sin(2*u)");
  const NullFrame frame = boost_null_frame(NullFrame::standard(), 0.4);
  const SurfaceSpec s = case1_cylinder(f, frame, {1, 2, 3});
  for (int i = 0; i < 20; ++i) {
    const double u = uniform(-1, 1), v = uniform(-1, 1), t = uniform(-2, 2);
    expect_vec_near(surface_point(s, u, v + t) - surface_point(s, u, v), frame.f2 * (t * std::exp(-0.5)), 1e-12);
  }
}

TEST(Case1Cylinder, FlatAndQuasiUmbilic) {
  for (const char* f : {"0", "0.3*u", "sin(u)", "0.5*u^2 - 0.2"}) {
    const SurfaceSpec s = case1_cylinder(parse_expr(f), NullFrame::standard());
    for (int i = 0; i < 30; ++i) {
      const PointReport r = analyze_point(s, uniform(-1, 1), uniform(-1, 1)).report;
      EXPECT_LE(std::abs(r.K), 1e-8) << f;
      EXPECT_LE(std::abs(r.H), 1e-8) << f;
      EXPECT_EQ(r.cls, PointClass::QuasiUmbilic) << f;
    }
  }
}

TEST(Case1Cylinder, RejectsBadInput) {
  NullFrame bad = NullFrame::standard();
  bad.f3 = bad.f3 * 1.1;
  EXPECT_EQ(kind_of([&] { case1_cylinder(parse_expr("0"), bad); }), ErrorKind::InvalidFrame);
  EXPECT_EQ(kind_of([] { case1_cylinder(parse_expr("v"), NullFrame::standard()); }), ErrorKind::DegenerateSpec);
}

// --- builtins ------------------------------------------------------------------

TEST(BuiltinExample, Example2AtOrigin) {
  expect_vec_near(surface_point(builtin_example(BuiltinId::Ex2), 0, 0), {0, 0, -1}, 0);
}

TEST(BuiltinExample, HyperboloidIsUmbilicWithMinusOne) {
  const SurfaceSpec h = builtin_example(BuiltinId::Hyperboloid);
  for (int i = 0; i < 200; ++i) {
    const double u = uniform(-std::numbers::pi, std::numbers::pi), v = uniform(-3, 3);
    const MVec3 x = surface_point(h, u, v);
    EXPECT_NEAR(minkowski_inner(x, x), -1.0, 1e-12);
    const PointReport r = analyze_point(h, u, v).report;
    EXPECT_EQ(r.cls, PointClass::Umbilic);
    EXPECT_NEAR(*r.lambda, -1.0, 1e-12);
    EXPECT_NEAR(r.K, 1.0, 1e-12);
    EXPECT_NEAR(r.H, -1.0, 1e-12);
  }
}

TEST(BuiltinExample, PlaneIsUmbilicWithZero) {
  const PointReport r = analyze_point(builtin_example(BuiltinId::TimelikePlane), 0.4, -2).report;
  EXPECT_EQ(r.cls, PointClass::Umbilic);
  EXPECT_EQ(*r.lambda, 0.0);
}

TEST(BuiltinExample, ConstantTheta2IffMeanCurvatureVanishes) {
  const SurfaceSpec constant_t2 = ruled_null_surface({parse_expr("2*atan(u)"), parse_expr("pi")});
  const SurfaceSpec varying_t2 = ruled_null_surface({parse_expr("2*atan(u)"), parse_expr("pi + 0.3*sin(u)")});
  double max_h_const = 0, max_h_vary = 0;
  for (int i = 0; i < 64; ++i) {
    const double u = -3 + 6.0 * i / 63, v = 0.25;
    max_h_const = std::max(max_h_const, std::abs(analyze_point(constant_t2, u, v).report.H));
    max_h_vary = std::max(max_h_vary, std::abs(analyze_point(varying_t2, u, v).report.H));
  }
  EXPECT_LE(max_h_const, 1e-10);
  EXPECT_GT(max_h_vary, 1e-3);
}

// --- ruled frame derivatives ---------------------------------------------------

TEST(RuledFrame, Example2Coefficients) {
  const RuledNullData d = ruled_null_data(example_theta_spec(BuiltinId::Ex2));
  for (double u : {-2.0, 0.0, 0.5, 3.0}) {
    const RuledFrameDerivatives h = ruled_frame_derivatives(d, u);
    EXPECT_NEAR(h.h32, -0.5, 1e-14);
    EXPECT_NEAR(h.h32_prime, 0.0, 1e-14);
    EXPECT_NEAR(h.h31, 1.0, 1e-14);
    EXPECT_NEAR(h.c, 2.0, 1e-14);
    EXPECT_LE(h.residual, 1e-8);
    expect_matrix_near(shape_closed_form(h, 0.3), {0.5, 0, -h.h31, 0.5}, 1e-14);
  }
}

TEST(RuledFrame, ClosedFormAtZeroV) {
  const RuledFrameDerivatives h = ruled_frame_derivatives(ruled_null_data(example_theta_spec(BuiltinId::Ex3)), 0.7);
  expect_matrix_near(shape_closed_form(h, 0.0), {-h.h32, 0, -h.h31, -h.h32}, 0);
}

TEST(RuledFrame, ClosedFormMatchesShapeOperator) {
  for (BuiltinId id : {BuiltinId::Ex2, BuiltinId::Ex3}) {
    const RuledNullData d = ruled_null_data(example_theta_spec(id));
    const SurfaceSpec s = builtin_example(id);
    for (int i = 0; i < 100; ++i) {
      const double u = uniform(-1.2, 1.2), v = uniform(-1, 1);
      const RuledFrameDerivatives h = ruled_frame_derivatives(d, u);
      EXPECT_LE(h.residual, 1e-8);
      EXPECT_NE(h.h31, 0.0);
      expect_matrix_near(shape_closed_form_surface_basis(h, v), shape_operator_at(s, u, v), 1e-6);
    }
  }
}

TEST(RuledFrame, DegenerateData) {
  const auto constant = [](MVec3 c) {
    return [c](double) { return BasicVec3<Taylor3>{Taylor3(c.x0), Taylor3(c.x1), Taylor3(c.x2)}; };
  };
  const RuledNullData straight{constant({1, 1, 0}), constant({1, -1, 0})};
  EXPECT_EQ(kind_of([&] { ruled_frame_derivatives(straight, 0.3); }), ErrorKind::DegenerateFrame);
  const RuledNullData parallel{[](double u) {
                                 const Taylor3 t = Taylor3::variable(u);
                                 return BasicVec3<Taylor3>{Taylor3(1.0), cos(t), sin(t)};
                               },
                               [](double u) {
                                 const Taylor3 t = Taylor3::variable(u);
                                 return BasicVec3<Taylor3>{Taylor3(1.0), cos(t), sin(t)};
                               }};
  EXPECT_EQ(kind_of([&] { ruled_frame_derivatives(parallel, 0.3); }), ErrorKind::DegenerateFrame);
}

// --- random angle data ------------------------------------------------------------

TEST(RandomThetaSpecs, NullFrameAndQuasiUmbilicEverywhere) {
  for (int n = 0; n < 20; ++n) {
    const ThetaSpec t = random_theta_spec();
    const SurfaceSpec s = ruled_null_surface(t);
    const RuledNullData d = ruled_null_data(t);
    for (int i = 0; i < 100; ++i) {
      const double u = uniform(-std::numbers::pi, std::numbers::pi), v = uniform(-1, 1);
      const BasicVec3<Taylor3> a = d.alpha_prime(u), r = d.director(u);
      EXPECT_EQ(causal_class(MVec3{a.x0.d0, a.x1.d0, a.x2.d0}), CausalClass::Null);
      EXPECT_EQ(causal_class(MVec3{r.x0.d0, r.x1.d0, r.x2.d0}), CausalClass::Null);
      const PointClass c = analyze_point(s, u, v).report.cls;
      EXPECT_TRUE(c == PointClass::QuasiUmbilic || c == PointClass::Umbilic) << to_string(t.theta1);
    }
  }
}

}  // namespace
}  // namespace quasumb
