#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <vector>

#include "gmt/error.hpp"
#include "gmt/numeric.hpp"

namespace gmt {

/// Sampled boundary: points with per-point (n-1)-measure weights.
///
/// Each point optionally carries a patch, the parallelotope
/// `point + a * span[0] + b * span[1]` with `a, b` in [-1, 1]. For faces of a
/// rasterized domain the patch is the face itself; for samples of a curve it
/// is the tangent segment the sample stands for. Diameters of sets of points
/// are taken over the union of their patches, so neighbouring cells of a
/// covering leave no gaps along the sampled boundary.
struct BoundaryCloud {
  static constexpr std::size_t no_cell = std::numeric_limits<std::size_t>::max();

  int dim = 2;
  double resolution = 0.0;
  std::vector<Vec> points;
  std::vector<double> weights;
  std::vector<std::array<Vec, 2>> patches;
  // Only filled for clouds extracted from a GridDomain: the interior cell a
  // face belongs to and the face code `2 * axis + (outward ? 1 : 0)`.
  std::vector<std::size_t> cells;
  std::vector<int> faces;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  double total_weight() const { return pairwise_sum(weights); }

  /// Largest distance from a point to any corner of its own patch.
  double max_patch_radius() const {
    double r = 0.0;
    for (const auto& p : patches) {
      Vec corner{};
      for (int i = 0; i < 3; ++i) corner[i] = std::abs(p[0][i]) + std::abs(p[1][i]);
      r = std::max(r, std::sqrt(dot(corner, corner, dim)));
    }
    return r;
  }

  /// Corners of the patch of point `i` (one corner when the patch is empty).
  std::vector<Vec> corners(std::size_t i) const {
    std::vector<Vec> out;
    const Vec& p = points[i];
    if (patches.empty()) {
      out.push_back(p);
      return out;
    }
    const auto& s = patches[i];
    const bool has0 = dot(s[0], s[0], dim) > 0.0;
    const bool has1 = dot(s[1], s[1], dim) > 0.0;
    for (int a : {-1, 1}) {
      for (int b : {-1, 1}) {
        if (!has0 && a > 0) continue;
        if (!has1 && b > 0) continue;
        Vec c = p;
        for (int k = 0; k < dim; ++k) {
          c[k] += (has0 ? a * s[0][k] : 0.0) + (has1 ? b * s[1][k] : 0.0);
        }
        out.push_back(c);
      }
    }
    return out;
  }
};

/// Diameter of the union of the patches of the listed points.
inline double patch_diameter(const BoundaryCloud& cloud, const std::vector<std::size_t>& members) {
  std::vector<Vec> corners;
  corners.reserve(members.size() * 4);
  for (std::size_t m : members) {
    auto c = cloud.corners(m);
    corners.insert(corners.end(), c.begin(), c.end());
  }
  double best = 0.0;
  const int n = cloud.dim;
  for (std::size_t i = 0; i < corners.size(); ++i) {
    for (std::size_t j = i + 1; j < corners.size(); ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) {
        const double d = corners[i][k] - corners[j][k];
        s += d * d;
      }
      best = std::max(best, s);
    }
  }
  return std::sqrt(best);
}

inline BoundaryCloud point_cloud(int dim, std::vector<Vec> points, std::vector<double> weights,
                                 double resolution) {
  require(dim == 2 || dim == 3, ErrorKind::invalid_argument, "dimension must be 2 or 3");
  require(points.size() == weights.size(), ErrorKind::invalid_argument,
          "points and weights differ in length");
  BoundaryCloud c;
  c.dim = dim;
  c.resolution = resolution;
  c.points = std::move(points);
  c.weights = std::move(weights);
  return c;
}

/// Midpoint samples of the segment [a, b], one per `spacing`, each standing
/// for its own sub-segment.
inline BoundaryCloud sample_segment(int dim, const Vec& a, const Vec& b, double spacing) {
  require(spacing > 0.0, ErrorKind::invalid_argument, "spacing must be positive");
  const double len = distance(a, b, dim);
  require(len > 0.0, ErrorKind::invalid_argument, "degenerate segment");
  const auto count = static_cast<std::size_t>(std::max(1.0, std::round(len / spacing)));
  const double w = len / static_cast<double>(count);
  BoundaryCloud c;
  c.dim = dim;
  c.resolution = w;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = (static_cast<double>(i) + 0.5) / static_cast<double>(count);
    Vec p{}, half{};
    for (int k = 0; k < dim; ++k) {
      p[k] = a[k] + t * (b[k] - a[k]);
      half[k] = 0.5 * (b[k] - a[k]) / static_cast<double>(count);
    }
    c.points.push_back(p);
    c.weights.push_back(w);
    c.patches.push_back({half, Vec{}});
  }
  return c;
}

/// Samples of the planar ellipse with semi-axes (a, b), at parameter spacing
/// chosen so consecutive samples are about `spacing` apart. Weights are the
/// midpoint-rule arc lengths; patches are tangent segments of that length.
inline BoundaryCloud sample_ellipse(const Vec& center, double a, double b, double spacing) {
  require(a > 0.0 && b > 0.0 && spacing > 0.0, ErrorKind::invalid_argument,
          "ellipse axes and spacing must be positive");
  // Ramanujan's perimeter approximation only sizes the sample count.
  const double approx = std::numbers::pi * (3.0 * (a + b) - std::sqrt((3.0 * a + b) * (a + 3.0 * b)));
  const auto count = static_cast<std::size_t>(std::max(8.0, std::ceil(approx / spacing)));
  const double dt = 2.0 * std::numbers::pi / static_cast<double>(count);
  BoundaryCloud c;
  c.dim = 2;
  c.resolution = spacing;
  for (std::size_t i = 0; i < count; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * dt;
    const Vec p{center[0] + a * std::cos(t), center[1] + b * std::sin(t), 0.0};
    const double dx = -a * std::sin(t), dy = b * std::cos(t);
    const double speed = std::hypot(dx, dy);
    const double w = speed * dt;
    c.points.push_back(p);
    c.weights.push_back(w);
    c.patches.push_back({Vec{0.5 * w * dx / speed, 0.5 * w * dy / speed, 0.0}, Vec{}});
  }
  return c;
}

inline BoundaryCloud sample_circle(const Vec& center, double r, double spacing) {
  return sample_ellipse(center, r, r, spacing);
}

}  // namespace gmt
