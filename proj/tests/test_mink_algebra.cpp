#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "quasumb/mink_algebra.hpp"
#include "test_util.hpp"

namespace quasumb {
namespace {

using testing::random_vec;
using testing::uniform;

void expect_vec_near(const MVec3& a, const MVec3& b, double tol) {
  EXPECT_NEAR(a.x0, b.x0, tol);
  EXPECT_NEAR(a.x1, b.x1, tol);
  EXPECT_NEAR(a.x2, b.x2, tol);
}

TEST(MinkowskiInner, BasisAndMixedVectors) {
  EXPECT_EQ(minkowski_inner(MVec3{1, 0, 0}, MVec3{1, 0, 0}), 1.0);
  EXPECT_EQ(minkowski_inner(MVec3{0, 1, 0}, MVec3{0, 1, 0}), -1.0);
  EXPECT_EQ(minkowski_inner(MVec3{1, 1, 0}, MVec3{1, -1, 0}), 2.0);
}

TEST(MinkowskiInner, SymmetricAndBilinear) {
  for (int i = 0; i < 200; ++i) {
    const MVec3 a = random_vec(3), b = random_vec(3), c = random_vec(3);
    const double s = uniform(-2, 2);
    EXPECT_EQ(minkowski_inner(a, b), minkowski_inner(b, a));
    EXPECT_NEAR(minkowski_inner(a * s + b, c), s * minkowski_inner(a, c) + minkowski_inner(b, c),
                1e-12);
  }
}

TEST(MinkowskiCross, OrientationOfStandardBasis) {
  EXPECT_EQ(minkowski_cross(MVec3{1, 0, 0}, MVec3{0, 1, 0}), (MVec3{0, 0, -1}));
  EXPECT_EQ(minkowski_cross(MVec3{1, 1, 0}, MVec3{1, -1, 0}), (MVec3{0, 0, 2}));
  const MVec3 v{0.3, -1.2, 2.5};
  EXPECT_EQ(minkowski_cross(v, v), (MVec3{0, 0, 0}));
}

TEST(MinkowskiCross, TripleProductIsDeterminant) {
  for (int i = 0; i < 1000; ++i) {
    const MVec3 u = random_vec(5), v = random_vec(5), w = random_vec(5);
    const double det = det3(u, v, w);
    const double scale = euclidean_norm(u) * euclidean_norm(v) * euclidean_norm(w);
    EXPECT_LE(std::abs(minkowski_inner(u, minkowski_cross(v, w)) - det), 1e-12 * scale);
    EXPECT_EQ(minkowski_cross(v, w), -minkowski_cross(w, v));
  }
}

TEST(CausalClass, Examples) {
  EXPECT_EQ(causal_class(MVec3{1, 0, 0}), CausalClass::Timelike);
  EXPECT_EQ(causal_class(MVec3{0, 1, 0}), CausalClass::Spacelike);
  for (double theta = -7.0; theta < 7.0; theta += 0.37) {
    EXPECT_EQ(causal_class(MVec3{1, std::cos(theta), std::sin(theta)}), CausalClass::Null);
  }
}

TEST(CausalClass, ScaleInvariant) {
  const MVec3 null{1, std::cos(0.4), std::sin(0.4)};
  EXPECT_EQ(causal_class(null * 1e-9), CausalClass::Null);
  EXPECT_EQ(causal_class(null * 1e9), CausalClass::Null);
}

TEST(CausalClass, ZeroVectorThrows) {
  try {
    causal_class(MVec3{0, 0, 0});
    FAIL() << "expected ZeroVector";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroVector);
  }
}

TEST(NullFrame, FromStandardOrthonormal) {
  const NullFrame nf = null_frame_from_orthonormal(OrthoFrame::standard());
  const double r = 1 / std::numbers::sqrt2;
  expect_vec_near(nf.f1, {r, r, 0}, 1e-15);
  expect_vec_near(nf.f2, {r, -r, 0}, 1e-15);
  expect_vec_near(nf.f3, {0, 0, 1}, 0.0);
  EXPECT_NEAR(minkowski_inner(nf.f1, nf.f2), 1.0, 1e-15);
}

TEST(NullFrame, FromBoostedOrthonormal) {
  const double t = 0.8;
  const OrthoFrame e = OrthoFrame::standard();
  const OrthoFrame boosted{e.e0 * std::cosh(t) + e.e1 * std::sinh(t),
                           e.e0 * std::sinh(t) + e.e1 * std::cosh(t), e.e2};
  const auto v = validate_null_frame(null_frame_from_orthonormal(boosted));
  EXPECT_TRUE(v.pass);
  EXPECT_LT(v.max_defect, 1e-14);
}

TEST(NullFrame, RejectsInvalidOrthonormal) {
  OrthoFrame bad = OrthoFrame::standard();
  bad.e2 = -bad.e2;  // wrong orientation
  EXPECT_THROW(null_frame_from_orthonormal(bad), Error);
  bad = OrthoFrame::standard();
  bad.e1 = bad.e1 * 1.01;
  EXPECT_THROW(null_frame_from_orthonormal(bad), Error);
}

TEST(NullFrame, InverseConstructionIsIdentity) {
  for (int i = 0; i < 50; ++i) {
    const double t = uniform(-3, 3);
    const NullFrame nf = boost_null_frame(NullFrame::standard(), t);
    const NullFrame back = null_frame_from_orthonormal(orthonormal_from_null(nf), 1e-6);
    const double scale = std::exp(std::abs(t));
    expect_vec_near(back.f1, nf.f1, 1e-14 * scale);
    expect_vec_near(back.f2, nf.f2, 1e-14 * scale);
    expect_vec_near(back.f3, nf.f3, 1e-14);
  }
}

TEST(BoostNullFrame, IdentityAtZero) {
  const NullFrame nf = NullFrame::standard();
  const NullFrame same = boost_null_frame(nf, 0.0, Sign::Plus, Sign::Plus);
  EXPECT_EQ(same.f1, nf.f1);
  EXPECT_EQ(same.f2, nf.f2);
  EXPECT_EQ(same.f3, nf.f3);
}

TEST(BoostNullFrame, PreservesGramConditions) {
  for (double theta = -10; theta <= 10; theta += 0.5) {
    for (Sign e1 : {Sign::Plus, Sign::Minus}) {
      for (Sign e2 : {Sign::Plus, Sign::Minus}) {
        const NullFrame b = boost_null_frame(NullFrame::standard(), theta, e1, e2);
        EXPECT_NEAR(minkowski_inner(b.f1, b.f2), 1.0, 1e-14);
        EXPECT_LE(null_frame_defect(b), 1e-14) << theta;
      }
    }
  }
}

TEST(BoostNullFrame, NormalisesK11) {
  const NullFrameCoefficients k{4.0, 0.5, 0.0};
  const auto kt = boost_coefficients(k, -std::log(2.0), Sign::Plus, Sign::Plus);
  EXPECT_NEAR(kt.k11, 1.0, 1e-15);
  EXPECT_EQ(kt.k12, 0.5);
  const auto flipped = boost_coefficients(k, 0.0, Sign::Minus, Sign::Minus);
  EXPECT_EQ(flipped.k11, -4.0);
}

TEST(ValidateNullFrame, Examples) {
  const auto ok = validate_null_frame(NullFrame::standard(), 1e-8);
  EXPECT_TRUE(ok.pass);
  EXPECT_LT(ok.max_defect, 1e-15);

  NullFrame scaled = NullFrame::standard();
  scaled.f3 = scaled.f3 * 1.1;
  const auto bad = validate_null_frame(scaled, 1e-8);
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.max_defect, 0.21, 1e-12);

  EXPECT_TRUE(validate_null_frame(boost_null_frame(NullFrame::standard(), 5.0), 1e-8).pass);
}

}  // namespace
}  // namespace quasumb
