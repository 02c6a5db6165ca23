#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <queue>
#include <string>
#include <vector>

#include "gmt/cloud.hpp"
#include "gmt/error.hpp"
#include "gmt/numeric.hpp"

namespace gmt {

/// Volume of the unit ball in dimension d, pi^(d/2) / Gamma(d/2 + 1).
inline double unit_ball_volume(double d) {
  require(d >= 0.0, ErrorKind::invalid_argument, "dimension must be nonnegative");
  return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

struct CoverCell {
  Vec center{};
  double rd = 0.0;  // half the diameter of the covered point set, not a ball radius
  std::vector<std::size_t> members;
};

struct Covering {
  double dim_d = 1.0;
  std::vector<CoverCell> cells;

  double max_rd() const {
    double r = 0.0;
    for (const auto& c : cells) r = std::max(r, c.rd);
    return r;
  }
};

/// omega_d * sum of rd^d over the cells.
inline double cover_sum(const Covering& cov) {
  std::vector<double> terms;
  terms.reserve(cov.cells.size());
  for (const auto& c : cov.cells) terms.push_back(std::pow(c.rd, cov.dim_d));
  return unit_ball_volume(cov.dim_d) * pairwise_sum(terms);
}

/// True when every cloud point belongs to at least one cell.
inline bool covers(const Covering& cov, const BoundaryCloud& cloud) {
  std::vector<std::uint8_t> hit(cloud.size(), 0);
  for (const auto& c : cov.cells) {
    for (std::size_t m : c.members) {
      if (m >= cloud.size()) return false;
      hit[m] = 1;
    }
  }
  return std::all_of(hit.begin(), hit.end(), [](std::uint8_t v) { return v != 0; });
}

namespace detail {

using BoxKey = std::array<long, 3>;

inline BoxKey box_key(const Vec& p, double side, int n) {
  BoxKey k{0, 0, 0};
  for (int a = 0; a < n; ++a) k[a] = static_cast<long>(std::floor(p[a] / side));
  return k;
}

/// Members of every nonempty lattice box of the given side, in key order.
inline std::map<BoxKey, std::vector<std::size_t>> bin_points(const BoundaryCloud& cloud, double side) {
  std::map<BoxKey, std::vector<std::size_t>> bins;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    bins[box_key(cloud.points[i], side, cloud.dim)].push_back(i);
  }
  return bins;
}

/// Uniform bucket grid in compressed-row layout for radius queries.
class BucketGrid {
 public:
  BucketGrid(const BoundaryCloud& cloud, double cell) : cloud_(cloud), n_(cloud.dim) {
    Vec lo = cloud.points[0], hi = lo;
    for (const auto& p : cloud.points) {
      for (int a = 0; a < n_; ++a) {
        lo[a] = std::min(lo[a], p[a]);
        hi[a] = std::max(hi[a], p[a]);
      }
    }
    double extent = 0.0;
    for (int a = 0; a < n_; ++a) extent = std::max(extent, hi[a] - lo[a]);
    const double cap = n_ == 2 ? 1024.0 : 128.0;
    cell_ = std::max({cell, extent / cap, 1e-300});
    lo_ = lo;
    dims_ = {1, 1, 1};
    for (int a = 0; a < n_; ++a) dims_[a] = static_cast<int>((hi[a] - lo[a]) / cell_) + 1;
    const std::size_t total = static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
    offsets_.assign(total + 1, 0);
    std::vector<std::size_t> bucket(cloud.size());
    for (std::size_t i = 0; i < cloud.size(); ++i) {
      bucket[i] = flat(cell_of(cloud.points[i]));
      ++offsets_[bucket[i] + 1];
    }
    for (std::size_t b = 0; b < total; ++b) offsets_[b + 1] += offsets_[b];
    items_.resize(cloud.size());
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t i = 0; i < cloud.size(); ++i) items_[fill[bucket[i]]++] = i;
  }

  /// Calls fn(i) for every point in buckets meeting the ball B(x, r).
  template <class Fn>
  void for_each_near(const Vec& x, double r, Fn fn) const {
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int a = 0; a < n_; ++a) {
      lo[a] = std::max(0, static_cast<int>(std::floor((x[a] - r - lo_[a]) / cell_)));
      hi[a] = std::min(dims_[a] - 1, static_cast<int>(std::floor((x[a] + r - lo_[a]) / cell_)));
      if (lo[a] > hi[a]) return;
    }
    for (int k = lo[2]; k <= hi[2]; ++k) {
      for (int j = lo[1]; j <= hi[1]; ++j) {
        for (int i = lo[0]; i <= hi[0]; ++i) {
          const std::size_t b = flat({i, j, k});
          for (std::size_t t = offsets_[b]; t < offsets_[b + 1]; ++t) fn(items_[t]);
        }
      }
    }
  }

 private:
  std::array<int, 3> cell_of(const Vec& p) const {
    std::array<int, 3> c{0, 0, 0};
    for (int a = 0; a < n_; ++a) {
      c[a] = std::clamp(static_cast<int>((p[a] - lo_[a]) / cell_), 0, dims_[a] - 1);
    }
    return c;
  }
  std::size_t flat(const std::array<int, 3>& c) const {
    return (static_cast<std::size_t>(c[2]) * dims_[1] + c[1]) * dims_[0] + c[0];
  }

  const BoundaryCloud& cloud_;
  int n_;
  double cell_ = 1.0;
  Vec lo_{};
  std::array<int, 3> dims_{1, 1, 1};
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> items_;
};

}  // namespace detail

/// Covering by the nonempty cells of the lattice of boxes with the given side.
inline Covering dyadic_covering(const BoundaryCloud& cloud, double d, double side) {
  require(side > 0.0, ErrorKind::invalid_argument, "box side must be positive");
  Covering cov;
  cov.dim_d = d;
  for (auto& [key, members] : detail::bin_points(cloud, side)) {
    CoverCell cell;
    for (int a = 0; a < cloud.dim; ++a) cell.center[a] = (static_cast<double>(key[a]) + 0.5) * side;
    cell.rd = 0.5 * patch_diameter(cloud, members);
    cell.members = std::move(members);
    cov.cells.push_back(std::move(cell));
  }
  return cov;
}

/// Farthest-point (Gonzalez) centers until every point is within `radius` of
/// a center; each point then joins its nearest center (lowest index on ties).
inline Covering greedy_ball_covering(const BoundaryCloud& cloud, double d, double radius) {
  require(radius > 0.0, ErrorKind::invalid_argument, "ball radius must be positive");
  Covering cov;
  cov.dim_d = d;
  if (cloud.empty()) return cov;
  const std::size_t N = cloud.size();
  const int n = cloud.dim;
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(N, inf);
  std::vector<std::size_t> owner(N, 0);
  std::vector<std::size_t> centers;
  detail::BucketGrid grid(cloud, radius);
  std::priority_queue<std::pair<double, std::size_t>> heap;

  auto add_center = [&](std::size_t c, double reach) {
    const std::size_t id = centers.size();
    centers.push_back(c);
    const Vec& x = cloud.points[c];
    auto update = [&](std::size_t i) {
      const double di = distance(cloud.points[i], x, n);
      if (di < dist[i]) {
        dist[i] = di;
        owner[i] = id;
        heap.emplace(di, i);
      }
    };
    if (reach == inf) {
      for (std::size_t i = 0; i < N; ++i) update(i);
    } else {
      grid.for_each_near(x, reach, update);
    }
  };

  add_center(0, inf);
  while (true) {
    while (!heap.empty() && heap.top().first != dist[heap.top().second]) heap.pop();
    if (heap.empty() || heap.top().first <= radius) break;
    const auto [far, idx] = heap.top();
    add_center(idx, far);
  }
  cov.cells.resize(centers.size());
  for (std::size_t k = 0; k < centers.size(); ++k) cov.cells[k].center = cloud.points[centers[k]];
  for (std::size_t i = 0; i < N; ++i) cov.cells[owner[i]].members.push_back(i);
  for (auto& cell : cov.cells) cell.rd = 0.5 * patch_diameter(cloud, cell.members);
  return cov;
}

struct HmEstimate {
  double value = 0.0;
  bool upper_bound = true;  // feasible coverings only bound the infimum from above
  std::string method;       // "dyadic" or "greedy"
  double scale = 0.0;       // admissible scale of the winning covering
  double raw_total = 0.0;   // plain sum of cloud weights, for comparison
  std::size_t cells = 0;
};

/// Upper estimate of H_{d,delta} of the sampled set.
///
/// Candidates are dyadic-box coverings of side s/sqrt(n) and greedy ball
/// coverings with rd <= s, for s = delta, delta/2, ... down to twice the
/// resolution. Any covering admissible at a finer scale is admissible at
/// delta, so the candidate set for delta contains the one for delta/2 and the
/// estimate is non-increasing along halving sequences.
inline HmEstimate estimate_hm(const BoundaryCloud& cloud, double d, double delta) {
  require(delta > 0.0, ErrorKind::invalid_argument, "delta must be positive");
  require(delta >= 2.0 * cloud.resolution, ErrorKind::resolution,
          "delta must be at least twice the cloud resolution");
  HmEstimate best;
  best.raw_total = cloud.total_weight();
  if (cloud.empty()) {
    best.value = 0.0;
    best.method = "empty";
    return best;
  }
  best.value = std::numeric_limits<double>::infinity();
  const double root_n = std::sqrt(static_cast<double>(cloud.dim));
  const double patch = cloud.max_patch_radius();
  const double floor_scale = std::max(2.0 * cloud.resolution, 1e-12);
  for (double s = delta; s >= floor_scale * (1.0 - 1e-12); s *= 0.5) {
    const Covering boxes = dyadic_covering(cloud, d, s / root_n);
    const double box_sum = cover_sum(boxes);
    if (box_sum < best.value) {
      best.value = box_sum;
      best.method = "dyadic";
      best.scale = s;
      best.cells = boxes.cells.size();
    }
    if (s - patch > 0.0) {
      const Covering balls = greedy_ball_covering(cloud, d, s - patch);
      const double ball_sum = cover_sum(balls);
      if (ball_sum < best.value) {
        best.value = ball_sum;
        best.method = "greedy";
        best.scale = s;
        best.cells = balls.cells.size();
      }
    }
    if (s == 0.0) break;
  }
  return best;
}

struct PartitionCell {
  std::vector<std::size_t> members;
  Vec representative{};
  std::size_t representative_index = 0;
  double rd = 0.0;
  double hm_est = 0.0;
};

/// Finite partition of a cloud into Borel pieces, each with a chosen member x_C.
struct Partition {
  int dim = 2;
  double dim_d = 1.0;
  double delta = 0.0;
  double side = 0.0;
  std::vector<PartitionCell> cells;

  double max_rd() const {
    double r = 0.0;
    for (const auto& c : cells) r = std::max(r, c.rd);
    return r;
  }
  double total_hm() const {
    std::vector<double> t;
    for (const auto& c : cells) t.push_back(c.hm_est);
    return pairwise_sum(t);
  }
};

/// Partition from the dyadic boxes of side delta/sqrt(n); only nonempty boxes
/// become cells. x_C is the member nearest the centroid of the member points,
/// ties broken by lexicographically smallest coordinates.
inline Partition build_partition(const BoundaryCloud& cloud, double d, double delta) {
  require(!cloud.empty(), ErrorKind::empty_cloud, "cannot partition an empty cloud");
  require(delta > 0.0 && delta >= 4.0 * cloud.resolution, ErrorKind::resolution,
          "delta must be at least four times the cloud resolution");
  Partition part;
  part.dim = cloud.dim;
  part.dim_d = d;
  part.delta = delta;
  part.side = delta / std::sqrt(static_cast<double>(cloud.dim));
  const int n = cloud.dim;
  for (auto& [key, members] : detail::bin_points(cloud, part.side)) {
    PartitionCell cell;
    Vec centroid{};
    for (std::size_t m : members) {
      for (int a = 0; a < n; ++a) centroid[a] += cloud.points[m][a];
    }
    for (int a = 0; a < n; ++a) centroid[a] /= static_cast<double>(members.size());
    std::size_t best = members.front();
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t m : members) {
      const double dm = distance(cloud.points[m], centroid, n);
      const auto& p = cloud.points[m];
      const auto& q = cloud.points[best];
      const bool tie = dm == best_d && std::lexicographical_compare(p.begin(), p.begin() + n, q.begin(),
                                                                    q.begin() + n);
      if (dm < best_d || tie) {
        best_d = dm;
        best = m;
      }
    }
    std::vector<double> w;
    for (std::size_t m : members) w.push_back(cloud.weights[m]);
    cell.hm_est = pairwise_sum(w);
    cell.representative = cloud.points[best];
    cell.representative_index = best;
    cell.rd = 0.5 * patch_diameter(cloud, members);
    cell.members = std::move(members);
    part.cells.push_back(std::move(cell));
  }
  return part;
}

/// Sum over cells of |H_d(C) - omega_d rd(C)^d|.
inline double partition_defect(const Partition& part, double d) {
  const double omega = unit_ball_volume(d);
  std::vector<double> terms;
  terms.reserve(part.cells.size());
  for (const auto& c : part.cells) terms.push_back(std::abs(c.hm_est - omega * std::pow(c.rd, d)));
  return pairwise_sum(terms);
}

/// Structural check: nonempty, disjoint, union = cloud, x_C in C, rd <= bound.
inline bool is_valid_partition(const Partition& part, const BoundaryCloud& cloud, double rd_bound) {
  std::vector<int> hits(cloud.size(), 0);
  for (const auto& c : part.cells) {
    if (c.members.empty()) return false;
    if (c.rd > rd_bound) return false;
    bool has_rep = false;
    for (std::size_t m : c.members) {
      if (m >= cloud.size()) return false;
      ++hits[m];
      if (m == c.representative_index) has_rep = true;
    }
    if (!has_rep || cloud.points[c.representative_index] != c.representative) return false;
  }
  return std::all_of(hits.begin(), hits.end(), [](int v) { return v == 1; });
}

struct Calibration {
  double factor = 1.0;  // calibrated total / raw total
  double delta = 0.0;
  HmEstimate estimate;
};

/// Reweights the cloud so each piece of a partition at scale delta carries
/// omega_d rd(C)^d instead of its raw weight, then rescales globally so the
/// total equals estimate_hm(cloud, d, delta).
inline BoundaryCloud calibrate_weights(const BoundaryCloud& cloud, double d, double delta,
                                       Calibration* info = nullptr) {
  BoundaryCloud out = cloud;
  if (cloud.empty()) return out;
  const double part_delta = std::max(delta, 4.0 * cloud.resolution);
  const Partition part = build_partition(cloud, d, part_delta);
  const double omega = unit_ball_volume(d);
  for (const auto& c : part.cells) {
    const double target = omega * std::pow(c.rd, d);
    const double scale = c.hm_est > 0.0 ? target / c.hm_est : 0.0;
    for (std::size_t m : c.members) out.weights[m] = cloud.weights[m] * scale;
  }
  const HmEstimate est = estimate_hm(cloud, d, std::max(delta, 2.0 * cloud.resolution));
  const double local_total = out.total_weight();
  const double global = local_total > 0.0 ? est.value / local_total : 0.0;
  for (double& w : out.weights) w *= global;
  if (info) {
    info->estimate = est;
    info->delta = delta;
    const double raw = cloud.total_weight();
    info->factor = raw > 0.0 ? est.value / raw : 1.0;
  }
  return out;
}

}  // namespace gmt
