#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "gmt/calculus.hpp"
#include "gmt/inequalities.hpp"
#include "gmt/tolerances.hpp"

namespace gmt {

struct SearchResult {
  GridFunction best;
  double quotient = 0.0;
  std::vector<double> trajectory;  // Q after each sweep, starting with Q(u0)
  double bound = 0.0;              // c(n) (1 + tolerance::search)
  bool bound_held = true;
  std::size_t accepted = 0;
};

/// Q(u) = ||u||_q / (grad_l1(u) + f int_boundary |u|), f = paper_boundary_factor(n).
inline double mazya_quotient(const GridFunction& u) {
  const int n = u.grid().dim();
  const double num = lq_norm(u, static_cast<double>(n) / (n - 1.0));
  const double den = grad_l1(u) + paper_boundary_factor(n) * boundary_integral(u, u.domain_ptr()->measure());
  if (num == 0.0) return 0.0;
  require(den > 0.0, ErrorKind::degenerate_start, "quotient undefined: zero denominator");
  return num / den;
}

/// Derivative-free coordinate ascent on the quotient. Each sweep visits every
/// cell value and trace value once, in an order shuffled with `seed`, tries
/// +step*scale then -step*scale (scale = current maximum of u, values kept
/// nonnegative) and keeps a change only if Q increases. After each sweep u is
/// renormalized to unit L_q norm; a sweep whose exactly recomputed Q fell
/// below the previous one (rounding in the running sums) is undone, so the
/// trajectory is non-decreasing.
inline SearchResult quotient_search(const GridFunction& u0, int iters, double step, std::uint64_t seed = 0) {
  require(iters >= 1, ErrorKind::invalid_argument, "iters must be at least 1");
  require(step >= 0.0, ErrorKind::invalid_argument, "step must be nonnegative");
  require(u0.min_value() >= 0.0, ErrorKind::invalid_argument, "search needs u0 >= 0");
  require(!u0.trace().empty(), ErrorKind::no_trace, "search needs the boundary trace");
  require(u0.max_value() > 0.0, ErrorKind::degenerate_start, "search cannot start from u0 = 0");

  const auto& dom = *u0.domain_ptr();
  const auto& g = dom.grid;
  const auto& cloud = dom.boundary;
  const auto& weights = dom.measure().weights;
  const int n = g.dim();
  const double q = static_cast<double>(n) / (n - 1.0);
  const double f = paper_boundary_factor(n);
  const double h = g.spacing();
  const double vol = g.cell_volume();

  SearchResult res;
  res.bound = iso_constant(n) * (1.0 + tolerance::search);
  res.best = u0;
  res.quotient = mazya_quotient(u0);
  res.trajectory.push_back(res.quotient);
  res.bound_held = res.quotient <= res.bound;
  if (step == 0.0) return res;

  std::vector<double> vals = u0.values();
  std::vector<double> trace = u0.trace();

  // Trace point on face 2a (lower) or 2a+1 (upper) of each inside cell.
  std::vector<std::size_t> face_of(g.size() * static_cast<std::size_t>(2 * n), SIZE_MAX);
  for (std::size_t i = 0; i < cloud.size(); ++i) face_of[cloud.cells[i] * 2 * n + cloud.faces[i]] = i;
  auto grad_at = [&](std::size_t c) {
    double s2 = 0.0;
    if (g.inside(c)) {
      for (int a = 0; a < n; ++a) {
        const std::size_t next = c + static_cast<std::size_t>(g.stride(a));
        double d = 0.0;
        if (g.inside(next)) {
          d = (vals[next] - vals[c]) / h;
        } else if (const std::size_t p = face_of[c * 2 * n + 2 * a + 1]; p != SIZE_MAX) {
          d = (trace[p] - vals[c]) / (0.5 * h);
        }
        s2 += d * d;
      }
      return std::sqrt(s2);
    }
    const auto ijk = g.coords(c);
    for (int a = 0; a < n; ++a) {
      if (ijk[a] + 1 >= g.dims()[a]) continue;
      const std::size_t next = c + static_cast<std::size_t>(g.stride(a));
      if (!g.inside(next)) continue;
      if (const std::size_t p = face_of[next * 2 * n + 2 * a]; p != SIZE_MAX) {
        const double d = (vals[next] - trace[p]) / (0.5 * h);
        s2 += d * d;
      }
    }
    return std::sqrt(s2);
  };

  std::vector<std::size_t> cells, carriers;
  for (std::size_t c = 0; c < g.size(); ++c) {
    if (g.inside(c)) cells.push_back(c);
    if (detail::carries_gradient(g, c)) carriers.push_back(c);
  }
  std::vector<double> grad(g.size(), 0.0);
  double lq_sum = 0.0, grad_sum = 0.0, bdry_sum = 0.0;
  auto reset_sums = [&] {
    lq_sum = grad_sum = bdry_sum = 0.0;
    for (std::size_t c : cells) lq_sum += std::pow(vals[c], q);
    for (std::size_t c : carriers) {
      grad[c] = grad_at(c);
      grad_sum += grad[c];
    }
    for (std::size_t i = 0; i < trace.size(); ++i) bdry_sum += trace[i] * weights[i];
  };
  auto quotient = [&](double l, double gs, double bs) {
    const double num = std::pow(std::max(l, 0.0) * vol, 1.0 / q);
    const double den = gs * vol + f * bs;
    return den > 0.0 ? num / den : 0.0;
  };

  // Coordinates: cells first, then trace points (offset by the cell count).
  std::vector<std::size_t> order(cells.size() + trace.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);

  for (int sweep = 0; sweep < iters; ++sweep) {
    const std::vector<double> saved_vals = vals, saved_trace = trace;
    reset_sums();
    double cur = quotient(lq_sum, grad_sum, bdry_sum);
    double top = 0.0;
    for (std::size_t c : cells) top = std::max(top, vals[c]);
    for (double t : trace) top = std::max(top, t);
    const double delta = step * top;
    std::shuffle(order.begin(), order.end(), rng);
    bool changed = false;

    for (std::size_t k : order) {
      if (k < cells.size()) {
        const std::size_t c = cells[k];
        std::size_t touched[4] = {c, SIZE_MAX, SIZE_MAX, SIZE_MAX};
        for (int a = 0; a < n; ++a) {
          touched[a + 1] = c - static_cast<std::size_t>(g.stride(a));
        }
        const double old = vals[c];
        for (double cand : {old + delta, std::max(0.0, old - delta)}) {
          if (cand == old) continue;
          vals[c] = cand;
          double gs = grad_sum;
          double new_grad[4];
          for (int t = 0; t <= n; ++t) {
            if (touched[t] == SIZE_MAX) continue;
            new_grad[t] = grad_at(touched[t]);
            gs += new_grad[t] - grad[touched[t]];
          }
          const double ls = lq_sum + std::pow(cand, q) - std::pow(old, q);
          const double trial = quotient(ls, gs, bdry_sum);
          if (trial > cur) {
            cur = trial;
            lq_sum = ls;
            grad_sum = gs;
            for (int t = 0; t <= n; ++t) {
              if (touched[t] != SIZE_MAX) grad[touched[t]] = new_grad[t];
            }
            changed = true;
            ++res.accepted;
            if (cur > res.bound) res.bound_held = false;
            break;
          }
          vals[c] = old;
        }
      } else {
        const std::size_t i = k - cells.size();
        // The trace on an upper face feeds its cell, on a lower face the
        // outside cell below it.
        const int axis = cloud.faces[i] / 2;
        const std::size_t owner = cloud.faces[i] % 2 == 1
                                      ? cloud.cells[i]
                                      : cloud.cells[i] - static_cast<std::size_t>(g.stride(axis));
        const double old = trace[i];
        for (double cand : {old + delta, std::max(0.0, old - delta)}) {
          if (cand == old) continue;
          trace[i] = cand;
          const double owner_grad = grad_at(owner);
          const double gs = grad_sum + owner_grad - grad[owner];
          const double bs = bdry_sum + (cand - old) * weights[i];
          const double trial = quotient(lq_sum, gs, bs);
          if (trial > cur) {
            cur = trial;
            grad_sum = gs;
            bdry_sum = bs;
            grad[owner] = owner_grad;
            changed = true;
            ++res.accepted;
            if (cur > res.bound) res.bound_held = false;
            break;
          }
          trace[i] = old;
        }
      }
    }

    if (changed) {
      const GridFunction raw(u0.domain_ptr(), vals, trace);
      const double norm = lq_norm(raw, q);
      for (double& v : vals) v /= norm;
      for (double& t : trace) t /= norm;
      GridFunction next(u0.domain_ptr(), vals, trace);
      const double exact = mazya_quotient(next);
      if (exact >= res.quotient) {
        res.best = std::move(next);
        res.quotient = exact;
      } else {
        vals = saved_vals;
        trace = saved_trace;
      }
    }
    if (res.quotient > res.bound) res.bound_held = false;
    res.trajectory.push_back(res.quotient);
  }
  return res;
}

}  // namespace gmt
