#include <gtest/gtest.h>

#include <numbers>
#include <sstream>

#include "gmt/domain.hpp"
#include "gmt/error.hpp"

using namespace gmt;
using std::numbers::pi;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::io;
}

GridDomain unit_square(double h) { return make_box(2, {0, 0, 0}, {1, 1, 0}, h); }

}  // namespace

TEST(Ball, DiskVolume) { EXPECT_NEAR(volume(make_ball(2, {0, 0, 0}, 1.0, 0.01)), pi, 0.01 * pi); }

TEST(Ball, CoarseSpacingRejected) {
  EXPECT_EQ(kind_of([] { make_ball(2, {0, 0, 0}, 1.0, 2.0); }), ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([] { make_ball(2, {0, 0, 0}, -1.0, 0.1); }), ErrorKind::invalid_argument);
}

TEST(Ball, ThreeDimensionalVolume) {
  EXPECT_NEAR(volume(make_ball(3, {0, 0, 0}, 1.0, 0.02)), 4.0 * pi / 3.0, 0.01 * 4.0 * pi / 3.0);
}

TEST(Polygon, UnitSquare) {
  const double h = 1.0 / 128;
  EXPECT_NEAR(volume(rasterize_polygon({{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, h)), 1.0, 2 * h);
}

TEST(Polygon, Triangle) {
  const double h = 1.0 / 128;
  EXPECT_NEAR(volume(rasterize_polygon({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, h)), 0.5, 2 * h);
}

TEST(Polygon, LShapeMatchesShoelace) {
  const std::vector<Vec> l{{0, 0, 0}, {1, 0, 0}, {1, 0.5, 0}, {0.5, 0.5, 0}, {0.5, 1, 0}, {0, 1, 0}};
  const double h = 1.0 / 128;
  EXPECT_DOUBLE_EQ(polygon_area(l), 0.75);
  EXPECT_NEAR(volume(rasterize_polygon(l, h)), polygon_area(l), 2 * h);
}

TEST(Polygon, BadInputs) {
  EXPECT_EQ(kind_of([] { rasterize_polygon({{0, 0, 0}, {1, 1, 0}, {1, 0, 0}, {0, 1, 0}}, 0.01); }),
            ErrorKind::invalid_argument);
  EXPECT_EQ(kind_of([] { rasterize_polygon({{0, 0, 0}, {1, 0, 0}, {2, 0, 0}}, 0.01); }),
            ErrorKind::invalid_argument);
}

TEST(Boundary, SquareWeightIsPerimeter) {
  const double h = 1.0 / 64;
  EXPECT_NEAR(extract_boundary(unit_square(h)).total_weight(), 4.0, 2 * h);
}

TEST(Boundary, DiskWeightIsTaxicabPerimeter) {
  const auto cloud = extract_boundary(make_ball(2, {0, 0, 0}, 1.0, 1.0 / 256));
  EXPECT_NEAR(cloud.total_weight(), 8.0, 0.02);
}

TEST(Boundary, SingleCell) {
  const auto cloud = extract_boundary(make_box(2, {0, 0, 0}, {0.1, 0.1, 0}, 0.1));
  ASSERT_EQ(cloud.size(), 4u);
  EXPECT_NEAR(cloud.total_weight(), 0.4, 1e-12);
}

TEST(Boundary, EmptyMaskRejected) {
  GridDomain empty(2, 0.1, {0, 0, 0}, {4, 4, 1}, std::vector<std::uint8_t>(16, 0));
  EXPECT_EQ(volume(empty), 0.0);
  EXPECT_EQ(kind_of([&] { extract_boundary(empty); }), ErrorKind::empty_domain);
}

TEST(Dilate, ZeroIsIdentity) {
  const auto d = make_ball(2, {0, 0, 0}, 1.0, 1.0 / 64);
  EXPECT_EQ(dilate(d, 0.0).mask(), d.mask());
}

TEST(Dilate, SquareGrowsBySteinerFormula) {
  // The faces move by whole cells, so the error is up to h times the perimeter.
  const double h = 1.0 / 256;
  EXPECT_NEAR(volume(dilate(unit_square(h), 0.1)), 1.0 + 0.4 + pi * 0.01, (4.0 + 2 * pi * 0.1) * h);
}

TEST(Dilate, DiskRadiusGrows) {
  EXPECT_NEAR(volume(dilate(make_ball(2, {0, 0, 0}, 1.0, 1.0 / 128), 0.5)), pi * 2.25, 0.01 * pi * 2.25);
}

TEST(Volume, Square) { EXPECT_NEAR(volume(unit_square(1.0 / 128)), 1.0, 2.0 / 128); }

TEST(Volume, Disk) { EXPECT_NEAR(volume(make_ball(2, {0, 0, 0}, 1.0, 1.0 / 256)), pi, 0.01 * pi); }

TEST(Annulus, Volume) {
  EXPECT_NEAR(volume(make_annulus(2, {0, 0, 0}, 0.5, 1.0, 1.0 / 256)), pi * 0.75, 0.01 * pi);
}

TEST(Grid, TextRoundTrip) {
  const auto d = rasterize_polygon({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, 1.0 / 32);
  std::stringstream ss;
  write_grid(ss, d);
  EXPECT_EQ(read_grid(ss), d);
}
