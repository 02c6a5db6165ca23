#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gmt/cloud.hpp"
#include "gmt/error.hpp"
#include "gmt/numeric.hpp"

namespace gmt {

using Dims = std::array<int, 3>;

/// Rasterized bounded open set: a boolean mask over a box of cells of side h.
///
/// Cell `(i, j, k)` occupies `[origin + (i, j, k) h, origin + (i+1, j+1, k+1) h]`
/// and belongs to the domain when its center does. All factories align cells
/// to the global lattice with centers at `(m + 1/2) h`, so domains built at the
/// same spacing can be combined cell by cell.
class GridDomain {
 public:
  GridDomain() = default;

  GridDomain(int dim, double h, Vec origin, Dims dims, std::vector<std::uint8_t> mask)
      : dim_(dim), h_(h), origin_(origin), dims_(dims), mask_(std::move(mask)) {
    require(dim == 2 || dim == 3, ErrorKind::invalid_argument, "dimension must be 2 or 3");
    require(h > 0.0 && std::isfinite(h), ErrorKind::invalid_argument, "spacing must be positive");
    if (dim == 2) dims_[2] = 1;
    for (int a = 0; a < dim; ++a) {
      require(dims_[a] >= 3, ErrorKind::invalid_argument, "grid needs at least 3 cells per axis");
    }
    require(mask_.size() == size(), ErrorKind::invalid_argument, "mask size does not match dims");
    strides_ = {1, static_cast<std::ptrdiff_t>(dims_[0]),
                static_cast<std::ptrdiff_t>(dims_[0]) * dims_[1]};
    for (std::size_t c = 0; c < size(); ++c) {
      if (!mask_[c]) continue;
      const auto ijk = coords(c);
      for (int a = 0; a < dim_; ++a) {
        require(ijk[a] > 0 && ijk[a] < dims_[a] - 1, ErrorKind::invalid_argument,
                "mask must keep a false layer on every face of the grid");
      }
    }
    count_ = static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), std::uint8_t{1}));
  }

  int dim() const { return dim_; }
  double spacing() const { return h_; }
  const Vec& origin() const { return origin_; }
  const Dims& dims() const { return dims_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  std::ptrdiff_t stride(int axis) const { return strides_[axis]; }

  std::size_t size() const {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * (dim_ == 3 ? dims_[2] : 1);
  }
  std::size_t count() const { return count_; }
  bool empty() const { return count_ == 0; }
  bool inside(std::size_t c) const { return mask_[c] != 0; }
  double cell_volume() const { return std::pow(h_, dim_); }

  std::size_t index(int i, int j, int k = 0) const {
    return static_cast<std::size_t>((static_cast<std::ptrdiff_t>(k) * dims_[1] + j) * dims_[0] + i);
  }

  Dims coords(std::size_t c) const {
    const auto nx = static_cast<std::size_t>(dims_[0]);
    const auto ny = static_cast<std::size_t>(dims_[1]);
    return {static_cast<int>(c % nx), static_cast<int>((c / nx) % ny), static_cast<int>(c / (nx * ny))};
  }

  Vec center(std::size_t c) const {
    const auto ijk = coords(c);
    Vec x{};
    for (int a = 0; a < dim_; ++a) x[a] = origin_[a] + (ijk[a] + 0.5) * h_;
    return x;
  }

  /// Lattice index of the cell containing x along each axis (may be out of range).
  Dims locate(const Vec& x) const {
    Dims ijk{0, 0, 0};
    for (int a = 0; a < dim_; ++a) ijk[a] = static_cast<int>(std::floor((x[a] - origin_[a]) / h_));
    return ijk;
  }

  bool in_grid(const Dims& ijk) const {
    for (int a = 0; a < dim_; ++a) {
      if (ijk[a] < 0 || ijk[a] >= dims_[a]) return false;
    }
    return true;
  }

  /// Cells on the outermost layer of the box are never inside, so every inside
  /// cell has all 2n neighbours in the grid.
  bool is_edge_cell(std::size_t c) const {
    const auto ijk = coords(c);
    for (int a = 0; a < dim_; ++a) {
      if (ijk[a] == 0 || ijk[a] == dims_[a] - 1) return true;
    }
    return false;
  }

  friend bool operator==(const GridDomain& a, const GridDomain& b) {
    return a.dim_ == b.dim_ && a.h_ == b.h_ && a.origin_ == b.origin_ && a.dims_ == b.dims_ &&
           a.mask_ == b.mask_;
  }

 private:
  int dim_ = 2;
  double h_ = 1.0;
  Vec origin_{};
  Dims dims_{3, 3, 1};
  std::vector<std::uint8_t> mask_;
  std::array<std::ptrdiff_t, 3> strides_{1, 3, 9};
  std::size_t count_ = 0;
};

namespace detail {

/// Lattice box covering centers in [lo, hi] plus `pad` empty layers.
struct LatticeBox {
  Vec origin{};
  Dims dims{1, 1, 1};
};

inline LatticeBox lattice_box(int n, const Vec& lo, const Vec& hi, double h, int pad) {
  LatticeBox box;
  for (int a = 0; a < n; ++a) {
    const auto kmin = static_cast<long>(std::floor(lo[a] / h - 0.5)) - pad;
    const auto kmax = static_cast<long>(std::ceil(hi[a] / h - 0.5)) + pad;
    box.origin[a] = static_cast<double>(kmin) * h;
    box.dims[a] = static_cast<int>(kmax - kmin + 1);
  }
  return box;
}

template <class Inside>
GridDomain rasterize(int n, const Vec& lo, const Vec& hi, double h, Inside inside) {
  const auto box = lattice_box(n, lo, hi, h, 2);
  Dims dims = box.dims;
  if (n == 2) dims[2] = 1;
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 0);
  for (int k = 0; k < dims[2]; ++k) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int i = 0; i < dims[0]; ++i) {
        Vec x{box.origin[0] + (i + 0.5) * h, box.origin[1] + (j + 0.5) * h,
              n == 3 ? box.origin[2] + (k + 0.5) * h : 0.0};
        const bool edge = i == 0 || j == 0 || i == dims[0] - 1 || j == dims[1] - 1 ||
                          (n == 3 && (k == 0 || k == dims[2] - 1));
        if (!edge && inside(x)) {
          mask[(static_cast<std::size_t>(k) * dims[1] + j) * dims[0] + i] = 1;
        }
      }
    }
  }
  return GridDomain(n, h, box.origin, dims, std::move(mask));
}

/// Exact 1D squared distance transform (lower envelope of parabolas).
inline void distance_transform_1d(std::vector<double>& f, std::vector<double>& out,
                                  std::vector<int>& v, std::vector<double>& z) {
  const int len = static_cast<int>(f.size());
  constexpr double inf = std::numeric_limits<double>::infinity();
  int k = -1;
  for (int q = 0; q < len; ++q) {
    if (f[q] == inf) continue;
    if (k < 0) {
      k = 0;
      v[0] = q;
      z[0] = -inf;
      z[1] = inf;
      continue;
    }
    double s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    while (s <= z[k]) {
      --k;
      s = ((f[q] + double(q) * q) - (f[v[k]] + double(v[k]) * v[k])) / (2.0 * q - 2.0 * v[k]);
    }
    ++k;
    v[k] = q;
    z[k] = s;
    z[k + 1] = inf;
  }
  if (k < 0) {
    std::fill(out.begin(), out.end(), inf);
    return;
  }
  int j = 0;
  for (int q = 0; q < len; ++q) {
    while (z[j + 1] < q) ++j;
    const double d = q - v[j];
    out[q] = d * d + f[v[j]];
  }
}

}  // namespace detail

/// Squared Euclidean distance (in cell units) from every cell center to the
/// nearest center of a cell whose membership equals `target`.
inline std::vector<double> squared_distance_to_cells(const GridDomain& d, bool target) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(d.size());
  for (std::size_t c = 0; c < d.size(); ++c) dist[c] = d.inside(c) == target ? 0.0 : inf;
  const auto& dims = d.dims();
  for (int axis = 0; axis < d.dim(); ++axis) {
    const int len = dims[axis];
    std::vector<double> f(len), out(len), z(len + 1);
    std::vector<int> v(len);
    const std::ptrdiff_t stride = d.stride(axis);
    for (std::size_t c = 0; c < d.size(); ++c) {
      if (d.coords(c)[axis] != 0) continue;
      for (int q = 0; q < len; ++q) f[q] = dist[c + q * stride];
      detail::distance_transform_1d(f, out, v, z);
      for (int q = 0; q < len; ++q) dist[c + q * stride] = out[q];
    }
  }
  return dist;
}

inline std::vector<double> squared_distance_to_mask(const GridDomain& d) {
  return squared_distance_to_cells(d, true);
}

/// Ball of the given center and radius; the dimension is `n`.
inline GridDomain make_ball(int n, const Vec& center, double radius, double h) {
  require(radius > 0.0, ErrorKind::invalid_argument, "radius must be positive");
  require(h > 0.0, ErrorKind::invalid_argument, "spacing must be positive");
  require(h < radius, ErrorKind::invalid_argument, "spacing must be smaller than the radius");
  Vec lo{}, hi{};
  for (int a = 0; a < n; ++a) {
    lo[a] = center[a] - radius;
    hi[a] = center[a] + radius;
  }
  return detail::rasterize(n, lo, hi, h, [&](const Vec& x) {
    return distance(x, center, n) < radius;
  });
}

/// Open axis-aligned box lo < x < hi.
inline GridDomain make_box(int n, const Vec& lo, const Vec& hi, double h) {
  require(h > 0.0, ErrorKind::invalid_argument, "spacing must be positive");
  for (int a = 0; a < n; ++a) {
    require(hi[a] > lo[a], ErrorKind::invalid_argument, "box must have positive extent");
  }
  return detail::rasterize(n, lo, hi, h, [&](const Vec& x) {
    for (int a = 0; a < n; ++a) {
      if (!(x[a] > lo[a] && x[a] < hi[a])) return false;
    }
    return true;
  });
}

/// Open spherical shell inner < |x - center| < outer.
inline GridDomain make_annulus(int n, const Vec& center, double inner, double outer, double h) {
  require(inner >= 0.0 && outer > inner, ErrorKind::invalid_argument,
          "annulus needs 0 <= inner < outer");
  require(h > 0.0 && h < outer - inner, ErrorKind::invalid_argument,
          "spacing must be positive and resolve the annulus width");
  Vec lo{}, hi{};
  for (int a = 0; a < n; ++a) {
    lo[a] = center[a] - outer;
    hi[a] = center[a] + outer;
  }
  return detail::rasterize(n, lo, hi, h, [&](const Vec& x) {
    const double r = distance(x, center, n);
    return r > inner && r < outer;
  });
}

namespace detail {

inline double cross2(const Vec& o, const Vec& a, const Vec& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

inline bool on_segment(const Vec& p, const Vec& q, const Vec& r) {
  return std::min(p[0], r[0]) <= q[0] && q[0] <= std::max(p[0], r[0]) &&
         std::min(p[1], r[1]) <= q[1] && q[1] <= std::max(p[1], r[1]);
}

inline bool segments_intersect(const Vec& p1, const Vec& p2, const Vec& p3, const Vec& p4) {
  const double d1 = cross2(p3, p4, p1), d2 = cross2(p3, p4, p2);
  const double d3 = cross2(p1, p2, p3), d4 = cross2(p1, p2, p4);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    return true;
  }
  if (d1 == 0 && on_segment(p3, p1, p4)) return true;
  if (d2 == 0 && on_segment(p3, p2, p4)) return true;
  if (d3 == 0 && on_segment(p1, p3, p2)) return true;
  if (d4 == 0 && on_segment(p1, p4, p2)) return true;
  return false;
}

}  // namespace detail

inline double polygon_area(const std::vector<Vec>& v) {
  double twice = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec& a = v[i];
    const Vec& b = v[(i + 1) % v.size()];
    twice += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * std::abs(twice);
}

/// Cells whose centers lie strictly inside a simple polygon (even-odd rule).
inline GridDomain rasterize_polygon(const std::vector<Vec>& vertices, double h) {
  require(vertices.size() >= 3, ErrorKind::invalid_argument, "polygon needs at least 3 vertices");
  require(h > 0.0, ErrorKind::invalid_argument, "spacing must be positive");
  const std::size_t m = vertices.size();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      const bool adjacent = j == i + 1 || (i == 0 && j == m - 1);
      if (adjacent) continue;
      require(!detail::segments_intersect(vertices[i], vertices[(i + 1) % m], vertices[j],
                                          vertices[(j + 1) % m]),
              ErrorKind::invalid_argument, "polygon is self-intersecting");
    }
  }
  require(polygon_area(vertices) > 0.0, ErrorKind::invalid_argument, "polygon has zero area");
  Vec lo{vertices[0][0], vertices[0][1], 0.0}, hi = lo;
  for (const auto& p : vertices) {
    lo[0] = std::min(lo[0], p[0]);
    lo[1] = std::min(lo[1], p[1]);
    hi[0] = std::max(hi[0], p[0]);
    hi[1] = std::max(hi[1], p[1]);
  }
  return detail::rasterize(2, lo, hi, h, [&](const Vec& x) {
    bool in = false;
    for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
      const Vec& a = vertices[i];
      const Vec& b = vertices[j];
      if ((a[1] > x[1]) != (b[1] > x[1])) {
        const double xc = a[0] + (x[1] - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
        if (x[0] == xc) return false;  // on an edge: not strictly inside
        if (x[0] < xc) in = !in;
      }
    }
    return in;
  });
}

inline double volume(const GridDomain& d) {
  return static_cast<double>(d.count()) * d.cell_volume();
}

/// One sample per face between an inside and an outside cell, at the face
/// center, carrying weight h^(n-1) and the face as its patch.
inline BoundaryCloud extract_boundary(const GridDomain& d) {
  require(!d.empty(), ErrorKind::empty_domain, "domain has no cells");
  const int n = d.dim();
  const double h = d.spacing();
  const double w = std::pow(h, n - 1);
  BoundaryCloud cloud;
  cloud.dim = n;
  cloud.resolution = h;
  for (std::size_t c = 0; c < d.size(); ++c) {
    if (!d.inside(c)) continue;
    const Vec x = d.center(c);
    for (int axis = 0; axis < n; ++axis) {
      for (int side = 0; side < 2; ++side) {
        const std::ptrdiff_t step = side ? d.stride(axis) : -d.stride(axis);
        if (d.inside(static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) + step))) continue;
        Vec p = x;
        p[axis] += side ? 0.5 * h : -0.5 * h;
        std::array<Vec, 2> patch{};
        int slot = 0;
        for (int t = 0; t < n; ++t) {
          if (t == axis) continue;
          patch[slot][t] = 0.5 * h;
          ++slot;
        }
        cloud.points.push_back(p);
        cloud.weights.push_back(w);
        cloud.patches.push_back(patch);
        cloud.cells.push_back(c);
        cloud.faces.push_back(2 * axis + side);
      }
    }
  }
  return cloud;
}

/// Copy of `d` on a grid enlarged by `layers` cells on every side.
inline GridDomain pad_grid(const GridDomain& d, int layers) {
  if (layers <= 0) return d;
  const int n = d.dim();
  Dims dims = d.dims();
  Vec origin = d.origin();
  for (int a = 0; a < n; ++a) {
    dims[a] += 2 * layers;
    origin[a] -= layers * d.spacing();
  }
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2], 0);
  for (std::size_t c = 0; c < d.size(); ++c) {
    if (!d.inside(c)) continue;
    auto ijk = d.coords(c);
    for (int a = 0; a < n; ++a) ijk[a] += layers;
    mask[(static_cast<std::size_t>(ijk[2]) * dims[1] + ijk[1]) * dims[0] + ijk[0]] = 1;
  }
  return GridDomain(n, d.spacing(), origin, dims, std::move(mask));
}

/// Cells whose centers lie within Euclidean distance eps of a center of the
/// original mask (discrete Minkowski sum with the closed eps-ball). The grid
/// grows so the result is never clipped.
inline GridDomain dilate(const GridDomain& d, double eps) {
  require(eps >= 0.0, ErrorKind::invalid_argument, "dilation radius must be nonnegative");
  if (eps == 0.0) return d;
  const int layers = static_cast<int>(std::ceil(eps / d.spacing())) + 1;
  GridDomain padded = pad_grid(d, layers);
  const auto dist2 = squared_distance_to_mask(padded);
  const double r = eps / d.spacing();
  const double limit = r * r * (1.0 + 1e-12);
  std::vector<std::uint8_t> mask(padded.size(), 0);
  for (std::size_t c = 0; c < padded.size(); ++c) mask[c] = dist2[c] <= limit ? 1 : 0;
  return GridDomain(d.dim(), d.spacing(), padded.origin(), padded.dims(), std::move(mask));
}

/// Shift by a whole number of cells.
inline GridDomain translate(const GridDomain& d, const Dims& cells) {
  Vec origin = d.origin();
  for (int a = 0; a < d.dim(); ++a) origin[a] += cells[a] * d.spacing();
  return GridDomain(d.dim(), d.spacing(), origin, d.dims(), d.mask());
}

namespace detail {

struct RowRun {
  int j, k, lo, hi;  // inclusive x-range of a run of inside cells in row (j, k)
};

inline std::vector<RowRun> row_runs(const GridDomain& d) {
  std::vector<RowRun> runs;
  const auto& dims = d.dims();
  for (int k = 0; k < dims[2]; ++k) {
    for (int j = 0; j < dims[1]; ++j) {
      const std::size_t row = d.index(0, j, k);
      int i = 0;
      while (i < dims[0]) {
        if (!d.inside(row + i)) {
          ++i;
          continue;
        }
        int e = i;
        while (e < dims[0] && d.inside(row + e)) ++e;
        runs.push_back({j, k, i, e - 1});
        i = e;
      }
    }
  }
  return runs;
}

inline void set_bits(std::uint64_t* row, int lo, int hi) {
  int w0 = lo >> 6, w1 = hi >> 6;
  const std::uint64_t first = ~std::uint64_t{0} << (lo & 63);
  const std::uint64_t last = ~std::uint64_t{0} >> (63 - (hi & 63));
  if (w0 == w1) {
    row[w0] |= first & last;
    return;
  }
  row[w0] |= first;
  for (int w = w0 + 1; w < w1; ++w) row[w] = ~std::uint64_t{0};
  row[w1] |= last;
}

}  // namespace detail

/// Minkowski sum of the cell unions of A and B (cells as closed cubes).
///
/// The sum of cube a and cube b is the 2h-cube covering cells a+b and a+b+1
/// of the lattice anchored at originA + originB, so the result is the index
/// sum set dilated by {0,1}^n. Exact for unions of lattice cells.
inline GridDomain minkowski_sum(const GridDomain& A, const GridDomain& B) {
  require(A.dim() == B.dim(), ErrorKind::invalid_argument, "dimension mismatch");
  require(A.spacing() == B.spacing(), ErrorKind::invalid_argument, "spacing mismatch");
  const int n = A.dim();
  Dims dims{1, 1, 1};
  Vec origin{};
  for (int a = 0; a < n; ++a) {
    dims[a] = A.dims()[a] + B.dims()[a];
    origin[a] = A.origin()[a] + B.origin()[a];
  }
  const std::size_t words = static_cast<std::size_t>(dims[0] + 63) / 64;
  const std::size_t rows = static_cast<std::size_t>(dims[1]) * dims[2];
  std::vector<std::uint64_t> bits(rows * words, 0);
  auto row_ptr = [&](int j, int k) { return bits.data() + (static_cast<std::size_t>(k) * dims[1] + j) * words; };

  const auto runs_a = detail::row_runs(A);
  const auto runs_b = detail::row_runs(B);
  for (const auto& rb : runs_b) {
    for (const auto& ra : runs_a) {
      // +1 on the upper end realizes the {0,1} dilation along x.
      detail::set_bits(row_ptr(ra.j + rb.j, ra.k + rb.k), ra.lo + rb.lo, ra.hi + rb.hi + 1);
    }
  }
  for (int axis = 1; axis < n; ++axis) {
    for (int k = dims[2] - 1; k >= 0; --k) {
      for (int j = dims[1] - 1; j >= 0; --j) {
        const int pj = axis == 1 ? j - 1 : j;
        const int pk = axis == 2 ? k - 1 : k;
        if (pj < 0 || pk < 0) continue;
        std::uint64_t* dst = row_ptr(j, k);
        const std::uint64_t* src = row_ptr(pj, pk);
        for (std::size_t w = 0; w < words; ++w) dst[w] |= src[w];
      }
    }
  }
  std::vector<std::uint8_t> mask(rows * static_cast<std::size_t>(dims[0]), 0);
  for (std::size_t r = 0; r < rows; ++r) {
    for (int i = 0; i < dims[0]; ++i) {
      mask[r * dims[0] + i] = (bits[r * words + (i >> 6)] >> (i & 63)) & 1u;
    }
  }
  return GridDomain(n, A.spacing(), origin, dims, std::move(mask));
}

/// Text serialization: a `GMT-GRID v1 n h origin... dims...` header line and a
/// second line of alternating run lengths, starting with a run of false cells.
inline void write_grid(std::ostream& os, const GridDomain& d) {
  std::ostringstream head;
  head.precision(17);
  head << "GMT-GRID v1 " << d.dim() << ' ' << d.spacing();
  for (int a = 0; a < d.dim(); ++a) head << ' ' << d.origin()[a];
  for (int a = 0; a < d.dim(); ++a) head << ' ' << d.dims()[a];
  os << head.str() << '\n';
  std::uint8_t current = 0;
  std::size_t run = 0;
  bool first = true;
  for (std::uint8_t m : d.mask()) {
    if (m == current) {
      ++run;
      continue;
    }
    os << (first ? "" : " ") << run;
    first = false;
    current = m;
    run = 1;
  }
  os << (first ? "" : " ") << run << '\n';
}

inline GridDomain read_grid(std::istream& is) {
  std::string magic, version;
  int n = 0;
  double h = 0.0;
  is >> magic >> version >> n;
  require(is && magic == "GMT-GRID" && version == "v1", ErrorKind::parse, "not a GMT-GRID v1 stream");
  require(n == 2 || n == 3, ErrorKind::parse, "grid dimension must be 2 or 3");
  is >> h;
  Vec origin{};
  Dims dims{1, 1, 1};
  for (int a = 0; a < n; ++a) is >> origin[a];
  for (int a = 0; a < n; ++a) is >> dims[a];
  require(static_cast<bool>(is), ErrorKind::parse, "truncated GMT-GRID header");
  const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  std::vector<std::uint8_t> mask;
  mask.reserve(total);
  std::uint8_t current = 0;
  std::size_t run = 0;
  while (mask.size() < total && (is >> run)) {
    require(mask.size() + run <= total, ErrorKind::parse, "run lengths exceed grid size");
    mask.insert(mask.end(), run, current);
    current = current ? 0 : 1;
  }
  require(mask.size() == total, ErrorKind::parse, "run lengths do not cover the grid");
  return GridDomain(n, h, origin, dims, std::move(mask));
}

}  // namespace gmt
