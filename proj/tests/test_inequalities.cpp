#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gmt/inequalities.hpp"

using namespace gmt;
using std::numbers::pi;

namespace {

DomainPtr square(double h) { return share(make_box(2, {0, 0, 0}, {1, 1, 0}, h)); }
DomainPtr disk(double h, double r = 1.0) { return share(make_ball(2, {0, 0, 0}, r, h)); }

// Gamma-function oracle, independent of unit_ball_volume.
double iso_oracle(int n) { return std::pow(std::tgamma(n / 2.0 + 1.0), 1.0 / n) / (n * std::sqrt(pi)); }

}  // namespace

TEST(Constants, IsoConstant) {
  EXPECT_NEAR(iso_constant(1), 0.5, 1e-15);
  EXPECT_NEAR(iso_constant(2), 1.0 / (2.0 * std::sqrt(pi)), 1e-15);
  EXPECT_NEAR(iso_constant(2), 0.2820948, 1e-7);
  EXPECT_NEAR(iso_constant(3), 0.2067834, 1e-7);
  for (int n = 1; n <= 4; ++n) EXPECT_NEAR(iso_constant(n), iso_oracle(n), 1e-10 * iso_oracle(n));
  EXPECT_THROW(iso_constant(0), Error);
}

TEST(Constants, BoundaryFactor) {
  EXPECT_NEAR(paper_boundary_factor(2), 2 * pi, 1e-12);
  EXPECT_NEAR(paper_boundary_factor(3), 16.0, 1e-12);
  EXPECT_THROW(paper_boundary_factor(1), Error);
}

TEST(Isoperimetric, DiskNearEquality) {
  const Report r = check_isoperimetric(disk(1.0 / 512));
  EXPECT_TRUE(r.holds);
  EXPECT_GE(r.ratio, 0.97);
  EXPECT_LE(r.ratio, 1.01);
}

TEST(Isoperimetric, Square) {
  const Report r = check_isoperimetric(square(1.0 / 256));
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lhs, 1.0, 1e-12);
  EXPECT_NEAR(r.rhs, 4 * iso_constant(2), 0.03 * 4 * iso_constant(2));
  EXPECT_NEAR(r.ratio, 0.886, 0.03);
}

TEST(Isoperimetric, SingleCell) {
  const Report r = check_isoperimetric(share(make_box(2, {0, 0, 0}, {0.01, 0.01, 0}, 0.01)));
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lhs, 0.01, 1e-15);
}

TEST(Isoperimetric, TranslationInvariant) {
  const auto a = make_ball(2, {0, 0, 0}, 1.0, 1.0 / 128);
  const Report r0 = check_isoperimetric(share(a));
  const Report r1 = check_isoperimetric(share(translate(a, {17, -5, 0})));
  EXPECT_NEAR(r1.ratio, r0.ratio, 1e-9);
}

TEST(Isoperimetric, ScaleInvariant) {
  const Report r1 = check_isoperimetric(disk(1.0 / 128));
  const Report r2 = check_isoperimetric(disk(2.0 / 128, 2.0));
  EXPECT_NEAR(r2.ratio, r1.ratio, 1e-9);
}

TEST(Sobolev, Zero) {
  const Report r = check_sobolev(extend_to_box(constant(disk(1.0 / 64), 0.0)));
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(Sobolev, Tent) {
  const auto box = share(make_box(2, {-1.5, -1.5, 0}, {1.5, 1.5, 0}, 1.0 / 512));
  const auto u = sample(box, [](const Vec& x) { return std::max(0.0, 1.0 - std::hypot(x[0], x[1])); });
  const Report r = check_sobolev(u);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lhs, std::sqrt(pi / 6), 0.01);
  EXPECT_NEAR(r.rhs, iso_constant(2) * pi, 0.01);
  EXPECT_LT(r.ratio, 1.0);
}

TEST(Sobolev, MollifiedIndicatorNearSharp) {
  const Report r = check_sobolev(mollify(constant(disk(1.0 / 256), 1.0), 16));
  EXPECT_TRUE(r.holds);
  EXPECT_GE(r.ratio, 0.9);
  EXPECT_LE(r.ratio, 1.0 + r.tol);
}

TEST(Sobolev, NonvanishingTraceRejected) {
  try {
    check_sobolev(constant(disk(1.0 / 32), 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::support);
  }
}

TEST(Mazya, DiskIndicatorOptimal) {
  const Report r = check_mazya(constant(disk(1.0 / 512), 1.0), ConstantMode::optimal);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lhs, std::sqrt(pi), 0.01);
  EXPECT_GE(r.ratio, 0.95);
  EXPECT_LE(r.ratio, 1.02);
}

TEST(Mazya, DiskIndicatorFactorMode) {
  const Report r = check_mazya(constant(disk(1.0 / 256), 1.0), ConstantMode::paper_factor);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.ratio, 1.0 / (2 * pi), 0.03 / (2 * pi));
}

TEST(Mazya, ParaboloidFactorMode) {
  const auto u = sample(disk(1.0 / 256), [](const Vec& x) { return x[0] * x[0] + x[1] * x[1]; }, 2.0);
  const Report r = check_mazya(u, ConstantMode::paper_factor);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lhs, std::sqrt(pi / 3), 0.01);
  EXPECT_NEAR(r.metadata["grad_l1"].get<double>(), 4 * pi / 3, 0.03 * 4 * pi / 3);
  EXPECT_NEAR(r.metadata["boundary_integral"].get<double>(), 2 * pi, 0.03 * 2 * pi);
}

TEST(Mazya, FactorModeNeverBelowOptimal) {
  for (auto f : {+[](const Vec&) { return 1.0; }, +[](const Vec& x) { return x[0] * x[0]; },
                 +[](const Vec& x) { return std::max(0.0, 1 - x[0] * x[0] - x[1] * x[1]); }}) {
    const auto u = sample(disk(1.0 / 64), f);
    EXPECT_GE(check_mazya(u, ConstantMode::paper_factor).rhs, check_mazya(u, ConstantMode::optimal).rhs);
  }
}

TEST(Mazya, SuppliedConstants) {
  const auto u = constant(square(1.0 / 64), 1.0);
  const Report r = check_mazya(u, ConstantMode::supplied, MazyaConstants{1.0, 0.0});
  EXPECT_EQ(r.constant_mode, ConstantMode::supplied);
  EXPECT_NEAR(r.rhs, 0.0, 1e-12);
  EXPECT_FALSE(r.holds);
  EXPECT_THROW(check_mazya(u, ConstantMode::supplied), Error);
}

TEST(MazyaL2, Zero) {
  const Report r = check_mazya_l2(constant(square(1.0 / 64), 0.0), 1.0);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(MazyaL2, SquareOne) {
  const Report r = check_mazya_l2(constant(square(1.0 / 128), 1.0), 1.0);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lhs, 1.0, 1e-12);
  EXPECT_NEAR(r.rhs, 8.0, 0.03 * 8.0);
}

TEST(MazyaL2, SquareLinear) {
  const Report r = check_mazya_l2(sample(square(1.0 / 128), [](const Vec& x) { return x[0]; }), 1.0);
  EXPECT_TRUE(r.holds);
  EXPECT_NEAR(r.lhs, 1.0 / 3, 0.01);
  EXPECT_NEAR(r.rhs, 22.0 / 3, 0.03 * 22.0 / 3);
}

TEST(MazyaL2, RejectsNonpositiveC1) { EXPECT_THROW(check_mazya_l2(constant(square(0.1), 1.0), 0.0), Error); }

TEST(BvBound, Square) {
  const Report one = check_bv_bound(constant(square(1.0 / 128), 1.0));
  EXPECT_TRUE(one.holds);
  EXPECT_NEAR(one.lhs, 4.0, 0.08);
  EXPECT_NEAR(one.rhs, 8 * pi, 0.03 * 8 * pi);
  const Report lin = check_bv_bound(sample(square(1.0 / 128), [](const Vec& x) { return x[0]; }));
  EXPECT_TRUE(lin.holds);
  EXPECT_NEAR(lin.lhs, 3.0, 0.06);
  EXPECT_NEAR(lin.rhs, 1 + 4 * pi, 0.03 * (1 + 4 * pi));
  EXPECT_TRUE(check_bv_bound(constant(square(1.0 / 32), 0.0)).holds);
}

TEST(BrunnMinkowski, Pairs) {
  const auto sq = make_box(2, {0, 0, 0}, {1, 1, 0}, 1.0 / 64);
  const Report same = check_brunn_minkowski(sq, sq);
  EXPECT_NEAR(same.lhs, 2.0, 1e-12);
  EXPECT_NEAR(same.rhs, 2.0, 0.01);
  const Report disks = check_brunn_minkowski(make_ball(2, {0, 0, 0}, 1.0, 1.0 / 128),
                                             make_ball(2, {0, 0, 0}, 0.5, 1.0 / 128));
  EXPECT_NEAR(disks.rhs / disks.lhs, 1.0, 0.01);
  const Report boxes = check_brunn_minkowski(make_box(2, {0, 0, 0}, {1, 2, 0}, 1.0 / 64),
                                             make_box(2, {0, 0, 0}, {2, 1, 0}, 1.0 / 64));
  EXPECT_TRUE(boxes.holds);
  EXPECT_NEAR(boxes.rhs, 3.0, 0.02);
  EXPECT_NEAR(boxes.lhs, 2 * std::sqrt(2.0), 1e-12);
  EXPECT_THROW(check_brunn_minkowski(sq, make_ball(3, {0, 0, 0}, 1.0, 0.1)), Error);
}

TEST(ExtendedSobolev, Indicators) {
  const Report d = check_extended_sobolev(constant(disk(1.0 / 128), 1.0), {4, 8});
  EXPECT_TRUE(d.holds);
  EXPECT_NEAR(d.lhs, std::sqrt(pi), 0.01);
  EXPECT_TRUE(d.metadata["chain_holds"].get<bool>());
  const Report s = check_extended_sobolev(constant(square(1.0 / 128), 1.0), {4});
  EXPECT_TRUE(s.holds);
  EXPECT_NEAR(s.lhs, 1.0, 1e-12);
  EXPECT_NEAR(s.rhs, 4 * iso_constant(2), 0.02 * 4 * iso_constant(2));
  EXPECT_TRUE(check_extended_sobolev(constant(square(1.0 / 32), 0.0), {}).holds);
}

TEST(PerimeterIso, Disk) { EXPECT_TRUE(check_perimeter_iso(disk(1.0 / 128)).holds); }

TEST(Report, RatioConventions) {
  EXPECT_EQ(safe_ratio(0.0, 0.0), 0.0);
  EXPECT_TRUE(std::isinf(safe_ratio(1.0, 0.0)));
  const Json j = to_json(make_report(InequalityId::mazya, 1.0, 0.0, ConstantMode::optimal, 1.0, 0.02));
  EXPECT_TRUE(j["ratio"].is_null());
  EXPECT_FALSE(j["holds"].get<bool>());
}
