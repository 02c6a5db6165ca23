#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <vector>

#include "gmt/cloud.hpp"
#include "gmt/domain.hpp"
#include "gmt/error.hpp"
#include "gmt/hausdorff.hpp"
#include "gmt/numeric.hpp"

namespace gmt {

/// Weights against which boundary integrals are taken, plus how they were made.
struct BoundaryMeasure {
  std::vector<double> weights;
  bool calibrated = false;
  double factor = 1.0;
  double delta = 0.0;
};

inline BoundaryMeasure raw_measure(const BoundaryCloud& cloud) {
  return {cloud.weights, false, 1.0, 0.0};
}

/// Face weights recalibrated against the Hausdorff estimator at scale delta.
inline BoundaryMeasure calibrated_measure(const BoundaryCloud& cloud, double delta) {
  BoundaryMeasure m;
  if (cloud.empty()) return m;
  Calibration info;
  const BoundaryCloud cal = calibrate_weights(cloud, cloud.dim - 1, delta, &info);
  m.weights = cal.weights;
  m.calibrated = true;
  m.factor = info.factor;
  m.delta = delta;
  return m;
}

/// True when the cloud is large compared with delta, so that coverings at
/// scale delta follow its shape rather than collapsing it to its diameter.
inline bool covering_resolves(const BoundaryCloud& cloud, double delta) {
  if (cloud.empty()) return false;
  Vec lo = cloud.points.front(), hi = lo;
  for (const auto& p : cloud.points) {
    for (int a = 0; a < cloud.dim; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  }
  return distance(lo, hi, cloud.dim) >= 4.0 * delta;
}

/// Calibrated weights at scale 8h, or the face weights when the boundary is
/// too small for that scale.
inline BoundaryMeasure default_measure(const BoundaryCloud& cloud, double h) {
  const double delta = 8.0 * h;
  if (!covering_resolves(cloud, delta)) return raw_measure(cloud);
  return calibrated_measure(cloud, delta);
}

/// A domain together with its extracted boundary cloud. Shared by every
/// function defined on the domain.
struct DomainData {
  GridDomain grid;
  BoundaryCloud boundary;

  explicit DomainData(GridDomain g) : grid(std::move(g)), boundary(extract_boundary(grid)) {}
  DomainData(GridDomain g, BoundaryCloud b) : grid(std::move(g)), boundary(std::move(b)) {}

  /// Default boundary measure, computed on first use.
  const BoundaryMeasure& measure() const {
    std::call_once(measure_once_, [this] { measure_ = default_measure(boundary, grid.spacing()); });
    return measure_;
  }

  /// Cloud point on face `face` of inside cell `cell`, if the face is a boundary face.
  std::optional<std::size_t> face_point(std::size_t cell, int face) const {
    const auto& cells = boundary.cells;
    if (cells.empty()) return std::nullopt;
    const auto key = [&](std::size_t i) { return cells[i] * 8 + static_cast<std::size_t>(boundary.faces[i]); };
    const std::size_t want = cell * 8 + static_cast<std::size_t>(face);
    std::size_t lo = 0, hi = cells.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (key(mid) < want) lo = mid + 1; else hi = mid;
    }
    if (lo < cells.size() && key(lo) == want) return lo;
    return std::nullopt;
  }

 private:
  mutable std::once_flag measure_once_;
  mutable BoundaryMeasure measure_;
};

using DomainPtr = std::shared_ptr<const DomainData>;

inline DomainPtr share(GridDomain g) { return std::make_shared<const DomainData>(std::move(g)); }

/// u on the closure of a rasterized domain: one value per cell of the grid box
/// (zero outside the domain, i.e. the extension by zero) and one trace value
/// per boundary sample.
class GridFunction {
 public:
  GridFunction() = default;

  GridFunction(DomainPtr domain, std::vector<double> values, std::vector<double> trace,
               std::optional<double> lipschitz = std::nullopt)
      : domain_(std::move(domain)), values_(std::move(values)), trace_(std::move(trace)),
        lipschitz_(lipschitz) {
    require(domain_ != nullptr, ErrorKind::invalid_argument, "function needs a domain");
    const auto& g = domain_->grid;
    require(values_.size() == g.size(), ErrorKind::invalid_argument, "value count does not match grid");
    require(trace_.empty() || trace_.size() == domain_->boundary.size(), ErrorKind::invalid_argument,
            "trace count does not match boundary");
    for (std::size_t c = 0; c < g.size(); ++c) {
      if (!g.inside(c)) {
        values_[c] = 0.0;
        continue;
      }
      require(std::isfinite(values_[c]), ErrorKind::invalid_argument, "function values must be finite");
    }
    for (double t : trace_) require(std::isfinite(t), ErrorKind::invalid_argument, "trace values must be finite");
    if (lipschitz_) check_trace_consistency();
  }

  const DomainPtr& domain_ptr() const { return domain_; }
  const GridDomain& grid() const { return domain_->grid; }
  const BoundaryCloud& boundary() const { return domain_->boundary; }
  const std::vector<double>& values() const { return values_; }
  const std::vector<double>& trace() const { return trace_; }
  bool has_trace() const { return !trace_.empty() || domain_->boundary.empty(); }
  std::optional<double> lipschitz() const { return lipschitz_; }

  double operator[](std::size_t c) const { return values_[c]; }

  double max_value() const {
    double m = 0.0;
    bool any = false;
    for (std::size_t c = 0; c < values_.size(); ++c) {
      if (!grid().inside(c)) continue;
      m = any ? std::max(m, values_[c]) : values_[c];
      any = true;
    }
    for (double t : trace_) {
      m = any ? std::max(m, t) : t;
      any = true;
    }
    return m;
  }

  double min_value() const {
    double m = 0.0;
    bool any = false;
    for (std::size_t c = 0; c < values_.size(); ++c) {
      if (!grid().inside(c)) continue;
      m = any ? std::min(m, values_[c]) : values_[c];
      any = true;
    }
    for (double t : trace_) {
      m = any ? std::min(m, t) : t;
      any = true;
    }
    return m;
  }

 private:
  void check_trace_consistency() const {
    const auto& cloud = domain_->boundary;
    if (trace_.empty() || cloud.cells.empty()) return;
    const double reach = grid().spacing() * std::sqrt(static_cast<double>(grid().dim()));
    const double bound = *lipschitz_ * reach * (1.0 + 1e-9) + 1e-12;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      require(std::abs(trace_[i] - values_[cloud.cells[i]]) <= bound, ErrorKind::invalid_argument,
              "trace is inconsistent with the declared modulus of continuity");
    }
  }

  DomainPtr domain_;
  std::vector<double> values_;
  std::vector<double> trace_;
  std::optional<double> lipschitz_;
};

using ScalarField = std::function<double(const Vec&)>;

/// Samples f at cell centers and, for the trace, at the boundary samples.
inline GridFunction sample(const DomainPtr& domain, const ScalarField& f,
                           std::optional<double> lipschitz = std::nullopt) {
  const auto& g = domain->grid;
  std::vector<double> values(g.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.inside(c)) values[c] = f(g.center(c));
  }
  std::vector<double> trace(domain->boundary.size());
  for (std::size_t i = 0; i < trace.size(); ++i) trace[i] = f(domain->boundary.points[i]);
  return GridFunction(domain, std::move(values), std::move(trace), lipschitz);
}

inline GridFunction constant(const DomainPtr& domain, double value) {
  return sample(domain, [value](const Vec&) { return value; }, 0.0);
}

inline GridFunction scaled(const GridFunction& u, double factor) {
  auto v = u.values();
  auto t = u.trace();
  for (double& x : v) x *= factor;
  for (double& x : t) x *= factor;
  std::optional<double> lip;
  if (u.lipschitz()) lip = *u.lipschitz() * std::abs(factor);
  return GridFunction(u.domain_ptr(), std::move(v), std::move(t), lip);
}

namespace detail {

/// Forward-difference gradient of u at cell c of the grid box.
///
/// Inside cells: axes whose forward neighbour is outside use the one-sided
/// difference to the trace at the shared face, over the half-cell distance.
/// Outside cells: only axes whose forward neighbour is inside contribute, with
/// the one-sided difference from the trace at the shared face into that
/// neighbour. Jumps across lower and upper boundary faces are thus charged
/// alike.
inline std::array<double, 3> forward_gradient(const GridFunction& u, std::size_t c) {
  const auto& g = u.grid();
  const double h = g.spacing();
  const bool has_trace = !u.trace().empty();
  std::array<double, 3> grad{0.0, 0.0, 0.0};
  if (g.inside(c)) {
    for (int a = 0; a < g.dim(); ++a) {
      const std::size_t next = c + static_cast<std::size_t>(g.stride(a));
      if (g.inside(next)) {
        grad[a] = (u[next] - u[c]) / h;
      } else if (has_trace) {
        if (auto p = u.domain_ptr()->face_point(c, 2 * a + 1)) grad[a] = (u.trace()[*p] - u[c]) / (0.5 * h);
      }
    }
    return grad;
  }
  if (!has_trace) return grad;
  const auto ijk = g.coords(c);
  for (int a = 0; a < g.dim(); ++a) {
    if (ijk[a] + 1 >= g.dims()[a]) continue;
    const std::size_t next = c + static_cast<std::size_t>(g.stride(a));
    if (!g.inside(next)) continue;
    if (auto p = u.domain_ptr()->face_point(next, 2 * a)) grad[a] = (u[next] - u.trace()[*p]) / (0.5 * h);
  }
  return grad;
}

/// True for the cells whose forward gradient can be nonzero: inside cells and
/// outside cells with an inside forward neighbour.
inline bool carries_gradient(const GridDomain& g, std::size_t c) {
  if (g.inside(c)) return true;
  const auto ijk = g.coords(c);
  for (int a = 0; a < g.dim(); ++a) {
    if (ijk[a] + 1 < g.dims()[a] && g.inside(c + static_cast<std::size_t>(g.stride(a)))) return true;
  }
  return false;
}

}  // namespace detail

/// Sum of |forward-difference gradient| h^n over the cells of the domain and
/// the outside cells facing it.
inline double grad_l1(const GridFunction& u) {
  const auto& g = u.grid();
  std::vector<double> terms;
  terms.reserve(g.count());
  const double vol = g.cell_volume();
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!detail::carries_gradient(g, c)) continue;
    const auto d = detail::forward_gradient(u, c);
    terms.push_back(std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) * vol);
  }
  return pairwise_sum(terms);
}

/// Sum of |forward-difference gradient|^2 h^n over the same cells as grad_l1.
inline double grad_l2_squared(const GridFunction& u) {
  const auto& g = u.grid();
  std::vector<double> terms;
  terms.reserve(g.count());
  const double vol = g.cell_volume();
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!detail::carries_gradient(g, c)) continue;
    const auto d = detail::forward_gradient(u, c);
    terms.push_back((d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) * vol);
  }
  return pairwise_sum(terms);
}

/// (sum |u|^q h^n)^(1/q) over the inside cells accepted by `keep`.
template <class Keep>
double lq_norm_where(const GridFunction& u, double q, Keep keep) {
  require(q >= 1.0, ErrorKind::invalid_argument, "q must be at least 1");
  const auto& g = u.grid();
  std::vector<double> terms;
  terms.reserve(g.count());
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.inside(c) && keep(c)) terms.push_back(std::pow(std::abs(u[c]), q));
  }
  return std::pow(pairwise_sum(terms) * g.cell_volume(), 1.0 / q);
}

inline double lq_norm(const GridFunction& u, double q) {
  return lq_norm_where(u, q, [](std::size_t) { return true; });
}

inline double sup_norm(const GridFunction& u) {
  return std::max(std::abs(u.max_value()), std::abs(u.min_value()));
}

namespace detail {

inline double trace_sum(const GridFunction& u, const std::vector<double>& weights, double power) {
  require(u.has_trace(), ErrorKind::no_trace, "function has no boundary trace");
  require(weights.size() == u.trace().size(), ErrorKind::invalid_argument,
          "boundary weights do not match the trace");
  std::vector<double> terms(weights.size());
  for (std::size_t i = 0; i < weights.size(); ++i) terms[i] = std::pow(std::abs(u.trace()[i]), power) * weights[i];
  return pairwise_sum(terms);
}

}  // namespace detail

/// Sum over boundary samples of |trace| times weight.
inline double boundary_integral(const GridFunction& u, const BoundaryMeasure& measure) {
  return detail::trace_sum(u, measure.weights, 1.0);
}

/// Against the face weights.
inline double boundary_integral(const GridFunction& u) {
  return detail::trace_sum(u, u.boundary().weights, 1.0);
}

inline double boundary_integral_sq(const GridFunction& u, const BoundaryMeasure& measure) {
  return detail::trace_sum(u, measure.weights, 2.0);
}

namespace detail {

template <class Op>
GridFunction combine(const GridFunction& u, const GridFunction& v, Op op) {
  require(u.domain_ptr() == v.domain_ptr() || u.grid() == v.grid(), ErrorKind::invalid_argument,
          "functions live on different domains");
  std::vector<double> values(u.values().size());
  for (std::size_t c = 0; c < values.size(); ++c) values[c] = op(u[c], v[c]);
  std::vector<double> trace;
  if (!u.trace().empty() && !v.trace().empty()) {
    trace.resize(u.trace().size());
    for (std::size_t i = 0; i < trace.size(); ++i) trace[i] = op(u.trace()[i], v.trace()[i]);
  }
  return GridFunction(u.domain_ptr(), std::move(values), std::move(trace));
}

}  // namespace detail

/// Cellwise and tracewise minimum u ^ v.
inline GridFunction pointwise_min(const GridFunction& u, const GridFunction& v) {
  return detail::combine(u, v, [](double a, double b) { return std::min(a, b); });
}

inline GridFunction pointwise_max(const GridFunction& u, const GridFunction& v) {
  return detail::combine(u, v, [](double a, double b) { return std::max(a, b); });
}

inline GridFunction abs_value(const GridFunction& u) {
  auto v = u.values();
  auto t = u.trace();
  for (double& x : v) x = std::abs(x);
  for (double& x : t) x = std::abs(x);
  return GridFunction(u.domain_ptr(), std::move(v), std::move(t), u.lipschitz());
}

/// Gradient mass of the ramp height * dist(x, B(0, r)) / s on the shell
/// B(0, r + s) \ B(0, r) in R^n: height / s * omega_n ((r + s)^n - r^n).
inline double shell_mass(double r, double s, double height, int n) {
  require(s > 0.0, ErrorKind::invalid_argument, "shell width must be positive");
  require(r >= 0.0 && height >= 0.0, ErrorKind::invalid_argument, "radius and height must be nonnegative");
  return height / s * unit_ball_volume(n) * (std::pow(r + s, n) - std::pow(r, n));
}

/// Limit of shell_mass as s -> 0: height * n * omega_n * r^(n-1).
inline double shell_mass_limit(double r, double height, int n) {
  require(r >= 0.0 && height >= 0.0, ErrorKind::invalid_argument, "radius and height must be nonnegative");
  return height * n * unit_ball_volume(n) * std::pow(r, n - 1);
}

/// Value of the barrier at x: height * dist(x, B(x_C, radius)) / s inside the
/// closed ball of radius radius + s, `outside` elsewhere.
inline double barrier_value(const Vec& x, const Vec& x_c, double radius, double s, double height,
                            double outside, int n) {
  const double r = distance(x, x_c, n);
  if (r > radius + s) return outside;
  return height * std::max(0.0, r - radius) / s;
}

/// Barrier psi_{C,s} sampled on the domain. The value outside the closed ball
/// is the finite `sentinel`, which the caller must choose above every value it
/// will be compared with.
inline GridFunction barrier(const Vec& x_c, double radius, double s, double height, const DomainPtr& domain,
                            double sentinel) {
  require(s > 0.0, ErrorKind::invalid_argument, "shell width must be positive");
  require(radius >= 0.0 && height >= 0.0, ErrorKind::invalid_argument, "radius and height must be nonnegative");
  const int n = domain->grid.dim();
  return sample(domain, [&](const Vec& x) { return barrier_value(x, x_c, radius, s, height, sentinel, n); });
}

/// The barrier continued by its height beyond the shell, so its gradient mass
/// is exactly the shell ramp.
inline GridFunction barrier_ramp(const Vec& x_c, double radius, double s, double height, const DomainPtr& domain) {
  const int n = domain->grid.dim();
  return sample(domain, [&](const Vec& x) { return barrier_value(x, x_c, radius, s, height, height, n); });
}

struct BarrierSpec {
  Vec center{};
  double radius = 0.0;  // zero set radius: diam(C) plus the resolution pad
  double height = 0.0;  // u(x_C) + eps
};

struct Truncation {
  GridFunction function;
  std::vector<BarrierSpec> barriers;
  double s = 0.0;
  double eps = 0.0;
  double pad = 0.0;
  double sentinel = 0.0;
};

/// u_{eps,s} = u ^ inf_C psi_{C,s} for the partition cells C.
///
/// Barrier heights are trace(x_C) + eps and zero sets have radius
/// diam(C) + pad (pad defaults to h), so every cell within h of a boundary
/// sample is cut to zero. `partition_delta` is the scale the partition was
/// built for; s must lie in (0, partition_delta / 2).
inline Truncation truncate(const GridFunction& u, const Partition& part, double eps, double s,
                           double partition_delta, std::optional<double> pad = std::nullopt) {
  require(u.min_value() >= 0.0, ErrorKind::invalid_argument, "truncation needs u >= 0");
  require(eps > 0.0, ErrorKind::invalid_argument, "eps must be positive");
  require(s > 0.0 && s < 0.5 * partition_delta, ErrorKind::invalid_argument, "s must lie in (0, delta/2)");
  require(!u.trace().empty(), ErrorKind::no_trace, "truncation needs the boundary trace");
  const auto& g = u.grid();
  const auto& cloud = u.boundary();
  const int n = g.dim();
  const double h = g.spacing();
  Truncation out;
  out.s = s;
  out.eps = eps;
  out.pad = pad.value_or(h);

  for (const auto& cell : part.cells) {
    BarrierSpec b;
    b.center = cell.representative;
    b.radius = 2.0 * cell.rd + out.pad;
    b.height = u.trace()[cell.representative_index] + eps;
    out.barriers.push_back(b);
  }
  double top = u.max_value();
  for (const auto& b : out.barriers) top = std::max(top, b.height);
  out.sentinel = 2.0 * top + 1.0;

  std::vector<double> values = u.values();
  std::vector<double> trace = u.trace();
  detail::BucketGrid buckets(cloud, std::max(h, 1e-12));
  for (const auto& b : out.barriers) {
    const double reach = b.radius + s;
    Vec lo{}, hi{};
    for (int a = 0; a < n; ++a) {
      lo[a] = b.center[a] - reach;
      hi[a] = b.center[a] + reach;
    }
    auto ilo = g.locate(lo), ihi = g.locate(hi);
    for (int a = 0; a < 3; ++a) {
      if (a >= n) {
        ilo[a] = 0;
        ihi[a] = 0;
        continue;
      }
      ilo[a] = std::max(ilo[a], 0);
      ihi[a] = std::min(ihi[a], g.dims()[a] - 1);
    }
    for (int k = ilo[2]; k <= ihi[2]; ++k) {
      for (int j = ilo[1]; j <= ihi[1]; ++j) {
        for (int i = ilo[0]; i <= ihi[0]; ++i) {
          const std::size_t c = g.index(i, j, k);
          if (!g.inside(c)) continue;
          const double psi = barrier_value(g.center(c), b.center, b.radius, s, b.height, out.sentinel, n);
          values[c] = std::min(values[c], psi);
        }
      }
    }
    buckets.for_each_near(b.center, reach, [&](std::size_t p) {
      const double psi = barrier_value(cloud.points[p], b.center, b.radius, s, b.height, out.sentinel, n);
      trace[p] = std::min(trace[p], psi);
    });
  }
  out.function = GridFunction(u.domain_ptr(), std::move(values), std::move(trace));
  return out;
}

/// Isotropic discrete total variation of u extended by zero: sum over every
/// cell of the grid box of |forward-difference gradient| h^n, jumps across
/// the domain boundary included.
inline double total_variation(const GridFunction& u) {
  const auto& g = u.grid();
  const auto& dims = g.dims();
  const double h = g.spacing();
  const double vol = g.cell_volume();
  std::vector<double> terms(g.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    const auto ijk = g.coords(c);
    double s2 = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      const double next = ijk[a] + 1 < dims[a] ? u[c + static_cast<std::size_t>(g.stride(a))] : 0.0;
      const double d = (next - u[c]) / h;
      s2 += d * d;
    }
    terms[c] = std::sqrt(s2) * vol;
  }
  return pairwise_sum(terms);
}

/// Domain covering the whole grid box but its outer layer, on a grid grown by
/// `layers` cells per side.
inline GridDomain box_domain_like(const GridDomain& g, int layers) {
  Dims dims = g.dims();
  Vec origin = g.origin();
  for (int a = 0; a < g.dim(); ++a) {
    dims[a] += 2 * layers;
    origin[a] -= layers * g.spacing();
  }
  const std::size_t total = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2];
  std::vector<std::uint8_t> mask(total, 1);
  GridDomain probe(g.dim(), g.spacing(), origin, dims, std::vector<std::uint8_t>(total, 0));
  for (std::size_t c = 0; c < total; ++c) {
    if (probe.is_edge_cell(c)) mask[c] = 0;
  }
  return GridDomain(g.dim(), g.spacing(), origin, dims, std::move(mask));
}

/// Extension by zero of u to a box domain one layer larger than its grid.
/// The result has zero trace, so it is compactly supported in the box.
inline GridFunction extend_to_box(const GridFunction& u) {
  const auto& g = u.grid();
  auto box = share(box_domain_like(g, 1));
  const auto& bg = box->grid;
  std::vector<double> values(bg.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!g.inside(c)) continue;
    auto ijk = g.coords(c);
    for (int a = 0; a < g.dim(); ++a) ijk[a] += 1;
    values[bg.index(ijk[0], ijk[1], ijk[2])] = u[c];
  }
  std::vector<double> trace(box->boundary.size(), 0.0);
  return GridFunction(box, std::move(values), std::move(trace));
}

/// Radial bump kernel of support radius 1/k sampled on the lattice and
/// renormalized to unit discrete mass.
struct Mollifier {
  int k = 1;
  double radius = 0.0;
  int reach = 0;  // support radius in cells
  std::vector<std::array<int, 3>> offsets;
  std::vector<double> weights;  // kernel * h^n, summing to 1
};

inline Mollifier make_mollifier(int k, double h, int n) {
  require(k >= 1, ErrorKind::invalid_argument, "mollifier index must be positive");
  Mollifier m;
  m.k = k;
  m.radius = 1.0 / k;
  require(m.radius >= 2.0 * h, ErrorKind::resolution, "mollifier support is not resolved by the grid");
  m.reach = static_cast<int>(std::ceil(m.radius / h));
  const int kz = n == 3 ? m.reach : 0;
  for (int dz = -kz; dz <= kz; ++dz) {
    for (int dy = -m.reach; dy <= m.reach; ++dy) {
      for (int dx = -m.reach; dx <= m.reach; ++dx) {
        const double t = h * std::sqrt(double(dx) * dx + double(dy) * dy + double(dz) * dz) / m.radius;
        if (t >= 1.0) continue;
        m.offsets.push_back({dx, dy, dz});
        m.weights.push_back(std::exp(-1.0 / (1.0 - t * t)));
      }
    }
  }
  const double total = pairwise_sum(m.weights);
  for (double& w : m.weights) w /= total;
  return m;
}

/// rho_k * u for u extended by zero. The result lives on a box domain grown
/// by the kernel reach, so no mass is lost at the grid edge.
inline GridFunction mollify(const GridFunction& u, int k) {
  const auto& g = u.grid();
  const Mollifier m = make_mollifier(k, g.spacing(), g.dim());
  auto box = share(box_domain_like(g, m.reach + 1));
  const auto& bg = box->grid;
  const int shift = m.reach + 1;
  std::vector<double> source(bg.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (!g.inside(c) || u[c] == 0.0) continue;
    auto ijk = g.coords(c);
    for (int a = 0; a < g.dim(); ++a) ijk[a] += shift;
    source[bg.index(ijk[0], ijk[1], ijk[2])] = u[c];
  }
  // Gather form: every output cell sums the kernel taps in a fixed order.
  std::vector<std::ptrdiff_t> taps(m.offsets.size());
  for (std::size_t t = 0; t < taps.size(); ++t) {
    const auto& o = m.offsets[t];
    taps[t] = o[0] * bg.stride(0) + o[1] * bg.stride(1) + (g.dim() == 3 ? o[2] * bg.stride(2) : 0);
  }
  std::vector<double> values(bg.size(), 0.0);
  const auto& dims = bg.dims();
  for (std::size_t c = 0; c < bg.size(); ++c) {
    if (!bg.inside(c)) continue;
    const auto ijk = bg.coords(c);
    bool near_edge = false;
    for (int a = 0; a < g.dim(); ++a) {
      if (ijk[a] < m.reach || ijk[a] >= dims[a] - m.reach) near_edge = true;
    }
    double acc = 0.0;
    if (near_edge) {
      for (std::size_t t = 0; t < taps.size(); ++t) {
        Dims src = ijk;
        for (int a = 0; a < g.dim(); ++a) src[a] -= m.offsets[t][a];
        if (bg.in_grid(src)) acc += m.weights[t] * source[bg.index(src[0], src[1], src[2])];
      }
    } else {
      for (std::size_t t = 0; t < taps.size(); ++t) {
        acc += m.weights[t] * source[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(c) - taps[t])];
      }
    }
    values[c] = acc;
  }
  std::vector<double> trace(box->boundary.size(), 0.0);
  return GridFunction(box, std::move(values), std::move(trace));
}

/// Sum of values times h^n (the integral of u extended by zero).
inline double mass(const GridFunction& u) {
  std::vector<double> terms;
  const auto& g = u.grid();
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.inside(c)) terms.push_back(u[c]);
  }
  return pairwise_sum(terms) * g.cell_volume();
}

/// L1 distance between two functions given on (possibly different) grids of
/// the same lattice, both extended by zero.
inline double l1_distance(const GridFunction& u, const GridFunction& v) {
  const auto& gu = u.grid();
  const auto& gv = v.grid();
  require(gu.spacing() == gv.spacing() && gu.dim() == gv.dim(), ErrorKind::invalid_argument,
          "functions live on different lattices");
  const double h = gu.spacing();
  std::vector<double> terms;
  std::vector<std::uint8_t> seen(gv.size(), 0);
  for (std::size_t c = 0; c < gu.size(); ++c) {
    if (!gu.inside(c)) continue;
    const Vec x = gu.center(c);
    double other = 0.0;
    Dims ijk{0, 0, 0};
    for (int a = 0; a < gv.dim(); ++a) ijk[a] = static_cast<int>(std::lround((x[a] - gv.origin()[a]) / h - 0.5));
    if (gv.in_grid(ijk)) {
      const std::size_t cv = gv.index(ijk[0], ijk[1], ijk[2]);
      if (gv.inside(cv)) {
        other = v[cv];
        seen[cv] = 1;
      }
    }
    terms.push_back(std::abs(u[c] - other));
  }
  for (std::size_t c = 0; c < gv.size(); ++c) {
    if (gv.inside(c) && !seen[c]) terms.push_back(std::abs(v[c]));
  }
  return pairwise_sum(terms) * gu.cell_volume();
}

/// Mollified indicator of the domain, restricted back to the domain: cell
/// values from the convolution, trace the average across each boundary face.
inline GridFunction mollified_indicator(const DomainPtr& domain, int k) {
  const GridFunction one = constant(domain, 1.0);
  const GridFunction smooth = mollify(one, k);
  const auto& g = domain->grid;
  const auto& sg = smooth.grid();
  const double h = g.spacing();
  auto at = [&](const Vec& x) {
    Dims ijk{0, 0, 0};
    for (int a = 0; a < g.dim(); ++a) ijk[a] = static_cast<int>(std::floor((x[a] - sg.origin()[a]) / h));
    return sg.in_grid(ijk) ? smooth[sg.index(ijk[0], ijk[1], ijk[2])] : 0.0;
  };
  std::vector<double> values(g.size(), 0.0);
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.inside(c)) values[c] = at(g.center(c));
  }
  const auto& cloud = domain->boundary;
  std::vector<double> trace(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const int axis = cloud.faces[i] / 2;
    Vec in = cloud.points[i], out = cloud.points[i];
    const double step = (cloud.faces[i] % 2 ? 0.5 : -0.5) * h;
    in[axis] -= step;
    out[axis] += step;
    trace[i] = 0.5 * (at(in) + at(out));
  }
  return GridFunction(domain, std::move(values), std::move(trace));
}

struct SteinerPoint {
  double eps = 0.0;
  double quotient = 0.0;
};

struct SteinerResult {
  std::vector<SteinerPoint> points;  // by decreasing eps
  double perimeter_estimate = 0.0;   // quotient at the smallest eps
  std::optional<double> extrapolated;
};

/// Value at 0 of the polynomial through the points (Neville).
inline double extrapolate_to_zero(const std::vector<SteinerPoint>& pts) {
  std::vector<double> p;
  for (const auto& s : pts) p.push_back(s.quotient);
  const std::size_t m = pts.size();
  for (std::size_t level = 1; level < m; ++level) {
    for (std::size_t i = 0; i + level < m; ++i) {
      const double xi = pts[i].eps, xj = pts[i + level].eps;
      p[i] = (xj * p[i] - xi * p[i + 1]) / (xj - xi);
    }
  }
  return p[0];
}

/// Difference quotients (vol(D + eps B) - vol(D)) / eps.
inline SteinerResult minkowski_steiner(const GridDomain& d, std::vector<double> eps_list) {
  require(!eps_list.empty(), ErrorKind::invalid_argument, "need at least one eps");
  std::sort(eps_list.begin(), eps_list.end(), std::greater<>());
  for (double e : eps_list) {
    require(e > 2.0 * d.spacing(), ErrorKind::resolution, "eps must exceed twice the spacing");
  }
  const double base = volume(d);
  const double h = d.spacing();
  SteinerResult out;
  for (double e : eps_list) {
    // The lattice dilation only resolves whole cells along the axes, so the
    // radius is snapped to a multiple of h and the quotient uses that radius.
    const double snapped = std::max(1.0, std::round(e / h)) * h;
    out.points.push_back({snapped, (volume(dilate(d, snapped)) - base) / snapped});
  }
  out.perimeter_estimate = out.points.back().quotient;
  if (out.points.size() >= 3) out.extrapolated = extrapolate_to_zero(out.points);
  return out;
}

}  // namespace gmt
