#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "gmt/calculus.hpp"
#include "gmt/hausdorff.hpp"
#include "gmt/inequalities.hpp"
#include "gmt/tolerances.hpp"

namespace gmt {

struct TraceStep {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
  Json detail = Json::object();
};

struct TraceReport {
  double eps = 0.0;
  double delta = 0.0;
  double s = 0.0;
  double partition_delta = 0.0;
  double lipschitz = 0.0;
  double tol = 0.0;
  Partition partition;
  Truncation truncation;
  std::vector<TraceStep> steps;

  bool all_hold() const {
    for (const auto& st : steps) {
      if (!st.holds) return false;
    }
    return true;
  }
};

inline constexpr const char* trace_labels[] = {"main4", "main5", "main6", "prelim_est", "hm_sum_estimate", "main3"};

namespace detail {

/// Sum of |forward-difference gradient| h^n of f over the lattice cells whose
/// centers lie within `reach` of x_c (every cell of the lattice, not only the
/// domain).
template <class F>
double lattice_gradient_mass(const GridDomain& g, const Vec& x_c, double reach, F f) {
  const int n = g.dim();
  const double h = g.spacing();
  std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
  for (int a = 0; a < n; ++a) {
    lo[a] = static_cast<int>(std::floor((x_c[a] - reach - g.origin()[a]) / h)) - 1;
    hi[a] = static_cast<int>(std::ceil((x_c[a] + reach - g.origin()[a]) / h)) + 1;
  }
  std::vector<double> terms;
  for (int k = lo[2]; k <= hi[2]; ++k) {
    for (int j = lo[1]; j <= hi[1]; ++j) {
      for (int i = lo[0]; i <= hi[0]; ++i) {
        const std::array<int, 3> ijk{i, j, k};
        Vec x{};
        for (int a = 0; a < n; ++a) x[a] = g.origin()[a] + (ijk[a] + 0.5) * h;
        const double fx = f(x);
        double s2 = 0.0;
        for (int a = 0; a < n; ++a) {
          Vec y = x;
          y[a] += h;
          const double d = (f(y) - fx) / h;
          s2 += d * d;
        }
        if (s2 > 0.0) terms.push_back(std::sqrt(s2));
      }
    }
  }
  return pairwise_sum(terms) * g.cell_volume();
}

/// grad_l1 of f sampled on the domain, restricted to cells within `reach` of
/// x_c (f vanishes in gradient elsewhere).
template <class F>
double domain_gradient_mass(const DomainData& dom, const Vec& x_c, double reach, F f) {
  const auto& g = dom.grid;
  const int n = g.dim();
  const double h = g.spacing();
  Vec lo{}, hi{};
  for (int a = 0; a < n; ++a) {
    lo[a] = x_c[a] - reach - 2.0 * h;
    hi[a] = x_c[a] + reach + 2.0 * h;
  }
  auto ilo = g.locate(lo), ihi = g.locate(hi);
  for (int a = 0; a < 3; ++a) {
    if (a >= n) {
      ilo[a] = ihi[a] = 0;
      continue;
    }
    ilo[a] = std::max(ilo[a], 0);
    ihi[a] = std::min(ihi[a], g.dims()[a] - 1);
  }
  std::vector<double> terms;
  for (int k = ilo[2]; k <= ihi[2]; ++k) {
    for (int j = ilo[1]; j <= ihi[1]; ++j) {
      for (int i = ilo[0]; i <= ihi[0]; ++i) {
        const std::size_t c = g.index(i, j, k);
        double s2 = 0.0;
        if (g.inside(c)) {
          const double fc = f(g.center(c));
          for (int a = 0; a < n; ++a) {
            const std::size_t next = c + static_cast<std::size_t>(g.stride(a));
            double d = 0.0;
            if (g.inside(next)) {
              d = (f(g.center(next)) - fc) / h;
            } else if (auto p = dom.face_point(c, 2 * a + 1)) {
              d = (f(dom.boundary.points[*p]) - fc) / (0.5 * h);
            }
            s2 += d * d;
          }
        } else {
          const auto ijk = g.coords(c);
          for (int a = 0; a < n; ++a) {
            if (ijk[a] + 1 >= g.dims()[a]) continue;
            const std::size_t next = c + static_cast<std::size_t>(g.stride(a));
            if (!g.inside(next)) continue;
            if (auto p = dom.face_point(next, 2 * a)) {
              const double d = (f(g.center(next)) - f(dom.boundary.points[*p])) / (0.5 * h);
              s2 += d * d;
            }
          }
        }
        if (s2 > 0.0) terms.push_back(std::sqrt(s2));
      }
    }
  }
  return pairwise_sum(terms) * g.cell_volume();
}

}  // namespace detail

/// Numerical trace of the constructive proof of the boundary-term Sobolev
/// bound, one record per labeled inequality.
///
/// delta = min(eps, eps / L) from the declared Lipschitz constant L. The
/// partition of the boundary is built at scale delta/2 - h, so that
/// diam(C) + h + s < delta for every s < delta/2 (h pads the barrier zero set
/// so that cells next to the boundary are cut to zero). s defaults to delta/4.
inline TraceReport proof_trace(const GridFunction& u, double eps, std::optional<double> s = std::nullopt,
                               std::optional<double> tol = std::nullopt) {
  require(u.min_value() >= 0.0, ErrorKind::invalid_argument, "proof trace needs u >= 0");
  require(u.lipschitz().has_value(), ErrorKind::no_modulus, "proof trace needs a declared modulus of continuity");
  require(eps > 0.0, ErrorKind::invalid_argument, "eps must be positive");
  require(!u.trace().empty(), ErrorKind::no_trace, "proof trace needs the boundary trace");
  const auto& dom = *u.domain_ptr();
  const auto& g = dom.grid;
  const int n = g.dim();
  const double h = g.spacing();
  const double c = iso_constant(n);
  const double f = paper_boundary_factor(n);
  const double q = static_cast<double>(n) / (n - 1.0);

  TraceReport tr;
  tr.eps = eps;
  tr.lipschitz = *u.lipschitz();
  tr.delta = tr.lipschitz > 0.0 ? std::min(eps, eps / tr.lipschitz) : eps;
  tr.partition_delta = 0.5 * tr.delta - h;
  require(tr.partition_delta >= 4.0 * h, ErrorKind::resolution, "eps is too small for the grid spacing");
  tr.s = s.value_or(0.25 * tr.delta);
  require(tr.s > 0.0 && tr.s < 0.5 * tr.delta, ErrorKind::invalid_argument, "s must lie in (0, delta/2)");
  tr.tol = tol.value_or(tolerance::at(tolerance::trace_step, h));

  const BoundaryMeasure& measure = dom.measure();
  BoundaryCloud cloud = dom.boundary;
  cloud.weights = measure.weights;
  tr.partition = build_partition(cloud, n - 1.0, tr.partition_delta);
  tr.truncation = truncate(u, tr.partition, eps, tr.s, tr.delta);
  const GridFunction& ut = tr.truncation.function;

  const double grad_u = grad_l1(u);
  const double grad_ut = grad_l1(ut);

  // Gradient mass of each barrier over its whole ball, and over the domain only.
  std::vector<double> full, inside, shell, limit, limit_padded, cell_terms;
  double worst_shell_gap = 0.0;
  for (std::size_t i = 0; i < tr.truncation.barriers.size(); ++i) {
    const auto& b = tr.truncation.barriers[i];
    const auto ramp = [&](const Vec& x) { return barrier_value(x, b.center, b.radius, tr.s, b.height, b.height, n); };
    const double reach = b.radius + tr.s + h;
    full.push_back(detail::lattice_gradient_mass(g, b.center, reach, ramp));
    inside.push_back(detail::domain_gradient_mass(dom, b.center, reach, ramp));
    shell.push_back(shell_mass(b.radius, tr.s, b.height, n));
    worst_shell_gap = std::max(worst_shell_gap, std::abs(full.back() - shell.back()) / shell.back());
    const double rd = tr.partition.cells[i].rd;
    limit.push_back(shell_mass_limit(2.0 * rd, b.height, n));
    limit_padded.push_back(shell_mass_limit(b.radius, b.height, n));
    cell_terms.push_back(b.height * unit_ball_volume(n - 1.0) * std::pow(rd, n - 1.0));
  }
  const double full_sum = pairwise_sum(full);
  const double inside_sum = pairwise_sum(inside);
  const double shell_sum = pairwise_sum(shell);
  const double cell_sum = pairwise_sum(cell_terms);

  auto step = [&](const char* label, double lhs, double rhs, Json detail = Json::object()) {
    TraceStep st;
    st.label = label;
    st.lhs = lhs;
    st.rhs = rhs;
    st.holds = lhs <= rhs * (1.0 + tr.tol);
    st.detail = std::move(detail);
    return st;
  };

  tr.steps.push_back(step("main4", grad_ut, grad_u + full_sum,
                          Json{{"grad_l1_u", grad_u},
                               {"barrier_mass_full_balls", full_sum},
                               {"barrier_mass_in_domain", inside_sum},
                               {"rhs_domain_restricted", grad_u + inside_sum}}));

  // An identity in the continuum: judged as a two-sided match.
  const double shell_gap = shell_sum > 0.0 ? std::abs(full_sum - shell_sum) / shell_sum : 0.0;
  TraceStep s5 = step("main5", full_sum, shell_sum,
                      Json{{"relative_gap", shell_gap},
                           {"worst_cell_gap", worst_shell_gap},
                           {"match_window", tolerance::shell_match},
                           {"barriers", tr.truncation.barriers.size()}});
  s5.holds = shell_gap <= tolerance::shell_match;
  tr.steps.push_back(std::move(s5));

  // Omega_eps: cells whose eps-ball avoids every exterior cell.
  const auto d2 = squared_distance_to_cells(g, false);
  const double clearance = eps / h + 0.5 * std::sqrt(static_cast<double>(n));
  std::size_t interior_cells = 0;
  const auto in_omega_eps = [&](std::size_t cell) {
    return std::sqrt(d2[cell]) >= clearance;
  };
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    if (g.inside(cell) && in_omega_eps(cell)) ++interior_cells;
  }
  const double lq_eps = lq_norm_where(u, q, in_omega_eps);
  const double lq_ut = lq_norm(ut, q);
  bool agree = true;
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    if (g.inside(cell) && in_omega_eps(cell) && ut[cell] != u[cell]) agree = false;
  }
  TraceStep s6 = step("main6", lq_eps, c * grad_ut,
                      Json{{"lq_truncated", lq_ut},
                           {"truncated_agrees_on_omega_eps", agree},
                           {"omega_eps_cells", interior_cells}});
  s6.holds = s6.holds && lq_eps <= lq_ut && agree;
  tr.steps.push_back(std::move(s6));

  tr.steps.push_back(step("prelim_est", lq_eps, c * (grad_u + f * cell_sum),
                          Json{{"limit_sum", pairwise_sum(limit)},
                               {"limit_sum_padded", pairwise_sum(limit_padded)},
                               {"rhs_padded", c * (grad_u + pairwise_sum(limit_padded))}}));

  const double defect = partition_defect(tr.partition, n - 1.0);
  const double sup_u = u.max_value();
  std::vector<double> shifted(u.trace().size());
  for (std::size_t i = 0; i < shifted.size(); ++i) shifted[i] = (u.trace()[i] + 2.0 * eps) * measure.weights[i];
  const double shifted_integral = pairwise_sum(shifted);
  tr.steps.push_back(step("hm_sum_estimate", cell_sum, (sup_u + eps) * defect + shifted_integral,
                          Json{{"defect", defect},
                               {"defect_within_eps", defect <= eps},
                               {"boundary_integral_shifted", shifted_integral}}));

  const Report mazya = check_mazya(u, ConstantMode::paper_factor, std::nullopt, tr.tol);
  const double hm_total = pairwise_sum(measure.weights);
  const double bdry = boundary_integral(u, measure);
  tr.steps.push_back(step("main3", mazya.lhs, mazya.rhs,
                          Json{{"eps_form_lhs", lq_eps},
                               {"eps_form_rhs", c * (grad_u + f * (bdry + eps * (2.0 * hm_total + sup_u + eps)))},
                               {"boundary_measure", hm_total}}));
  return tr;
}

inline Json to_json(const TraceReport& tr) {
  Json j;
  Json p;
  p["eps"] = tr.eps;
  p["delta"] = tr.delta;
  p["s"] = tr.s;
  p["partition_delta"] = tr.partition_delta;
  p["lipschitz"] = tr.lipschitz;
  p["pad"] = tr.truncation.pad;
  p["sentinel"] = tr.truncation.sentinel;
  p["tol"] = tr.tol;
  p["partition"] = Json{{"cells", tr.partition.cells.size()},
                        {"side", tr.partition.side},
                        {"max_rd", tr.partition.max_rd()},
                        {"total_hm", tr.partition.total_hm()},
                        {"defect", partition_defect(tr.partition, tr.partition.dim_d)}};
  j["parameters"] = p;
  Json steps = Json::array();
  for (const auto& st : tr.steps) {
    steps.push_back(Json{{"label", st.label}, {"lhs", st.lhs}, {"rhs", st.rhs}, {"holds", st.holds}, {"detail", st.detail}});
  }
  j["steps"] = steps;
  j["all_hold"] = tr.all_hold();
  return j;
}

/// Partition export: one record per cell.
inline Json to_json(const Partition& part) {
  Json j;
  j["dim"] = part.dim;
  j["dim_d"] = part.dim_d;
  j["delta"] = part.delta;
  j["side"] = part.side;
  j["max_rd"] = part.max_rd();
  j["defect"] = partition_defect(part, part.dim_d);
  Json cells = Json::array();
  for (const auto& c : part.cells) {
    Json x = Json::array();
    for (int a = 0; a < part.dim; ++a) x.push_back(c.representative[a]);
    cells.push_back(Json{{"x_c", x}, {"rd", c.rd}, {"hm_est", c.hm_est}, {"members", c.members.size()}});
  }
  j["cells"] = cells;
  return j;
}

}  // namespace gmt
