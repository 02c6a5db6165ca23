#pragma once

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gmt/calculus.hpp"
#include "gmt/domain.hpp"
#include "gmt/error.hpp"
#include "gmt/hausdorff.hpp"
#include "gmt/tolerances.hpp"
#include "json.hpp"

namespace gmt {

using Json = nlohmann::ordered_json;

enum class InequalityId {
  mazya,
  mazya_l2,
  isoperimetric,
  sobolev,
  sobolev_extended,
  brunn_minkowski,
  bv_bound,
  perimeter_iso,
};

inline constexpr InequalityId all_inequalities[] = {
    InequalityId::mazya,           InequalityId::mazya_l2,        InequalityId::isoperimetric,
    InequalityId::sobolev,         InequalityId::sobolev_extended, InequalityId::brunn_minkowski,
    InequalityId::bv_bound,        InequalityId::perimeter_iso,
};

inline const char* to_string(InequalityId id) {
  switch (id) {
    case InequalityId::mazya: return "mazya";
    case InequalityId::mazya_l2: return "mazya_l2";
    case InequalityId::isoperimetric: return "isoperimetric";
    case InequalityId::sobolev: return "sobolev";
    case InequalityId::sobolev_extended: return "sobolev_extended";
    case InequalityId::brunn_minkowski: return "brunn_minkowski";
    case InequalityId::bv_bound: return "bv_bound";
    case InequalityId::perimeter_iso: return "perimeter_iso";
  }
  return "?";
}

inline std::optional<InequalityId> parse_inequality(std::string_view name) {
  for (InequalityId id : all_inequalities) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

enum class ConstantMode { optimal, paper_factor, supplied };

inline const char* to_string(ConstantMode m) {
  switch (m) {
    case ConstantMode::optimal: return "optimal";
    case ConstantMode::paper_factor: return "paper_factor";
    case ConstantMode::supplied: return "supplied";
  }
  return "?";
}

inline std::optional<ConstantMode> parse_mode(std::string_view name) {
  for (ConstantMode m : {ConstantMode::optimal, ConstantMode::paper_factor, ConstantMode::supplied}) {
    if (name == to_string(m)) return m;
  }
  return std::nullopt;
}

/// Verdict on one inequality lhs <= rhs.
struct Report {
  InequalityId id = InequalityId::mazya;
  double lhs = 0.0;
  double rhs = 0.0;
  ConstantMode constant_mode = ConstantMode::optimal;
  double constant_value = 0.0;
  double ratio = 0.0;
  bool holds = true;
  double tol = 0.0;
  Json metadata = Json::object();
};

inline double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

/// Fills ratio and holds. With `reversed` the verdict is rhs >= lhs (1 - tol),
/// the orientation used for Brunn-Minkowski.
inline Report make_report(InequalityId id, double lhs, double rhs, ConstantMode mode, double constant, double tol,
                          bool reversed = false) {
  Report r;
  r.id = id;
  r.lhs = lhs;
  r.rhs = rhs;
  r.constant_mode = mode;
  r.constant_value = constant;
  r.tol = tol;
  r.ratio = safe_ratio(lhs, rhs);
  r.holds = reversed ? rhs >= lhs * (1.0 - tol) : lhs <= rhs * (1.0 + tol);
  return r;
}

/// c(n) = 1 / (n omega_n^(1/n)), checked against Gamma(n/2+1)^(1/n) / (n sqrt(pi)).
inline double iso_constant(int n) {
  require(n >= 1, ErrorKind::invalid_argument, "dimension must be at least 1");
  const double nd = n;
  const double a = 1.0 / (nd * std::pow(unit_ball_volume(nd), 1.0 / nd));
  const double b = std::pow(std::tgamma(nd / 2.0 + 1.0), 1.0 / nd) / (nd * std::sqrt(std::numbers::pi));
  require(std::abs(a - b) <= 1e-12 * std::abs(a), ErrorKind::validation, "closed forms of c(n) disagree");
  return a;
}

/// 2^(n-1) n omega_n / omega_(n-1), the boundary factor of the constructive proof.
///
/// omega_n / omega_(n-1) is 2^(m+1) m! / (2m+1)!! for n = 2m+1 and
/// pi (2m-1)!! / (2^m m!) for n = 2m; the integer parts are formed first and
/// divided once, so small n give exact values (2 pi, 16).
inline double paper_boundary_factor(int n) {
  require(n >= 2, ErrorKind::invalid_argument, "boundary factor needs n >= 2");
  const int m = n / 2;
  double m_factorial = 1.0, odd_double_factorial = 1.0;  // m! and (2m-1)!! or (2m+1)!!
  for (int i = 2; i <= m; ++i) m_factorial *= i;
  const int last_odd = n % 2 == 1 ? 2 * m + 1 : 2 * m - 1;
  for (int i = 3; i <= last_odd; i += 2) odd_double_factorial *= i;
  const double lead = std::pow(2.0, n - 1) * n;
  if (n % 2 == 1) return lead * std::pow(2.0, m + 1) * m_factorial / odd_double_factorial;
  return lead * odd_double_factorial / (std::pow(2.0, m) * m_factorial) * std::numbers::pi;
}

namespace detail {

inline double conjugate_exponent(int n) {
  require(n >= 2, ErrorKind::invalid_argument, "dimension must be at least 2");
  return static_cast<double>(n) / (n - 1.0);
}

inline void measure_metadata(Json& meta, const BoundaryMeasure& m, const BoundaryCloud& cloud) {
  meta["boundary_measure"] = m.calibrated ? "covering" : "face_count";
  meta["calibration_factor"] = m.factor;
  meta["calibration_delta"] = m.delta;
  meta["covering_upper_bound"] = m.calibrated;
  meta["face_count_total"] = cloud.total_weight();
}

}  // namespace detail

/// vol(D)^((n-1)/n) <= c(n) H_(n-1)(boundary), boundary measured by coverings at 8h.
inline Report check_isoperimetric(const DomainPtr& domain, std::optional<double> tol = std::nullopt) {
  const auto& g = domain->grid;
  require(!g.empty(), ErrorKind::empty_domain, "isoperimetric check needs a nonempty domain");
  const int n = g.dim();
  const double c = iso_constant(n);
  const BoundaryMeasure& m = domain->measure();
  const double perimeter = pairwise_sum(m.weights);
  const double lhs = std::pow(volume(g), (n - 1.0) / n);
  Report r = make_report(InequalityId::isoperimetric, lhs, c * perimeter, ConstantMode::optimal, c,
                         tol.value_or(tolerance::at(tolerance::isoperimetric, g.spacing())));
  r.metadata["h"] = g.spacing();
  r.metadata["delta_auto"] = 8.0 * g.spacing();
  r.metadata["volume"] = volume(g);
  r.metadata["perimeter"] = perimeter;
  detail::measure_metadata(r.metadata, m, domain->boundary);
  return r;
}

/// ||u||_q <= c(n) grad_l1(u) for u with vanishing trace.
inline Report check_sobolev(const GridFunction& u, std::optional<double> tol = std::nullopt) {
  const auto& g = u.grid();
  require(u.has_trace(), ErrorKind::support, "support of u cannot be verified without a trace");
  for (double t : u.trace()) {
    require(t == 0.0, ErrorKind::support, "u does not vanish on the boundary; extend it to a box first");
  }
  const int n = g.dim();
  const double q = detail::conjugate_exponent(n);
  const double c = iso_constant(n);
  const double grad = grad_l1(u);
  Report r = make_report(InequalityId::sobolev, lq_norm(u, q), c * grad, ConstantMode::optimal, c,
                         tol.value_or(tolerance::at(tolerance::sobolev, g.spacing())));
  r.metadata["h"] = g.spacing();
  r.metadata["q"] = q;
  r.metadata["grad_l1"] = grad;
  return r;
}

/// Constant and boundary factor used by check_mazya.
struct MazyaConstants {
  double c = 0.0;
  double factor = 1.0;
};

/// ||u||_q <= c (grad_l1(u) + f int_boundary |u|).
///
/// optimal: (c(n), 1); paper_factor: (c(n), paper_boundary_factor(n));
/// supplied: the given pair.
inline Report check_mazya(const GridFunction& u, ConstantMode mode,
                          std::optional<MazyaConstants> supplied = std::nullopt,
                          std::optional<double> tol = std::nullopt) {
  const auto& g = u.grid();
  const int n = g.dim();
  const double q = detail::conjugate_exponent(n);
  MazyaConstants k{iso_constant(n), 1.0};
  if (mode == ConstantMode::paper_factor) k.factor = paper_boundary_factor(n);
  if (mode == ConstantMode::supplied) {
    require(supplied.has_value(), ErrorKind::invalid_argument, "supplied mode needs constants");
    require(supplied->c > 0.0 && supplied->factor >= 0.0, ErrorKind::invalid_argument,
            "supplied constants must be positive");
    k = *supplied;
  }
  const BoundaryMeasure& m = u.domain_ptr()->measure();
  const double grad = grad_l1(u);
  const double bdry = boundary_integral(u, m);
  Report r = make_report(InequalityId::mazya, lq_norm(u, q), k.c * (grad + k.factor * bdry), mode, k.c,
                         tol.value_or(tolerance::at(tolerance::mazya, g.spacing())));
  r.metadata["h"] = g.spacing();
  r.metadata["q"] = q;
  r.metadata["boundary_factor"] = k.factor;
  r.metadata["grad_l1"] = grad;
  r.metadata["boundary_integral"] = bdry;
  detail::measure_metadata(r.metadata, m, u.boundary());
  return r;
}

/// c1 used when none is supplied: Hoelder's inequality turns the optimal L_q
/// bound into ||u||_1 <= c(n) vol^(1/n) (grad + boundary).
inline double auto_c1(const GridDomain& g) {
  return iso_constant(g.dim()) * std::pow(volume(g), 1.0 / g.dim());
}

/// ||u||_2^2 <= 2 c1 (2 c1 int |grad u|^2 + int_boundary |u|^2), with the
/// intermediate steps of its derivation from the L_1 bound.
inline Report check_mazya_l2(const GridFunction& u, std::optional<double> c1 = std::nullopt,
                             std::optional<double> tol = std::nullopt) {
  const auto& g = u.grid();
  if (c1) require(*c1 > 0.0, ErrorKind::invalid_argument, "c1 must be positive");
  const double c = c1.value_or(auto_c1(g));
  const BoundaryMeasure& m = u.domain_ptr()->measure();
  const double norm = lq_norm(u, 2.0);
  const double grad_sq = grad_l2_squared(u);
  const double bdry_sq = boundary_integral_sq(u, m);
  const double lhs = norm * norm;
  const double rhs = 2.0 * c * (2.0 * c * grad_sq + bdry_sq);
  Report r = make_report(InequalityId::mazya_l2, lhs, rhs, c1 ? ConstantMode::supplied : ConstantMode::optimal, c,
                         tol.value_or(tolerance::at(tolerance::mazya_l2, g.spacing())));

  // int |u| |grad |u||, the quantity the Cauchy-Schwarz and Young steps bound.
  const GridFunction a = abs_value(u);
  std::vector<double> terms;
  for (std::size_t cell = 0; cell < g.size(); ++cell) {
    if (!g.inside(cell)) continue;
    const auto d = detail::forward_gradient(a, cell);
    terms.push_back(a[cell] * std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]));
  }
  const double mixed = pairwise_sum(terms) * g.cell_volume();
  const double gamma = 1.0 / (4.0 * c);
  const double grad_norm = std::sqrt(grad_sq);
  const double l1 = lq_norm(u, 1.0);
  const double l1_den = grad_l1(u) + boundary_integral(u, m);

  r.metadata["h"] = g.spacing();
  r.metadata["c1"] = c;
  r.metadata["c1_source"] = c1 ? "supplied" : "auto";
  if (!c1) r.metadata["c1_rule"] = "c(n) vol^(1/n)";
  r.metadata["c1_empirical"] = l1_den > 0.0 ? l1 / l1_den : 0.0;
  r.metadata["steps"] = Json::array({
      Json{{"label", "l1_bound"}, {"lhs", l1}, {"rhs", c * l1_den}},
      Json{{"label", "squared"}, {"lhs", lhs}, {"rhs", c * (2.0 * mixed + bdry_sq)}},
      Json{{"label", "cauchy_schwarz"}, {"lhs", mixed}, {"rhs", norm * grad_norm}},
      Json{{"label", "young"}, {"lhs", norm * grad_norm}, {"rhs", gamma * lhs + grad_sq / (4.0 * gamma)}},
  });
  detail::measure_metadata(r.metadata, m, u.boundary());
  return r;
}

/// TV(u extended by zero) <= grad_l1(u) + f int_boundary |u|, f = paper_boundary_factor(n).
inline Report check_bv_bound(const GridFunction& u, std::optional<double> tol = std::nullopt) {
  const auto& g = u.grid();
  const int n = g.dim();
  const double f = paper_boundary_factor(n);
  const BoundaryMeasure& m = u.domain_ptr()->measure();
  const double tv = total_variation(u);
  const double grad = grad_l1(u);
  const double bdry = boundary_integral(u, m);
  Report r = make_report(InequalityId::bv_bound, tv, grad + f * bdry, ConstantMode::paper_factor, f,
                         tol.value_or(tolerance::at(tolerance::bv_bound, g.spacing())));
  r.metadata["h"] = g.spacing();
  r.metadata["tv_scheme"] = "forward_l2";
  r.metadata["grad_l1"] = grad;
  r.metadata["boundary_integral"] = bdry;
  detail::measure_metadata(r.metadata, m, u.boundary());
  return r;
}

/// vol(A)^(1/n) + vol(B)^(1/n) <= vol(A + B)^(1/n).
inline Report check_brunn_minkowski(const GridDomain& A, const GridDomain& B,
                                    std::optional<double> tol = std::nullopt) {
  require(A.dim() == B.dim(), ErrorKind::invalid_argument, "domains have different dimensions");
  const int n = A.dim();
  const GridDomain sum = minkowski_sum(A, B);
  const double va = volume(A), vb = volume(B), vs = volume(sum);
  const double lhs = std::pow(va, 1.0 / n) + std::pow(vb, 1.0 / n);
  const double rhs = std::pow(vs, 1.0 / n);
  Report r = make_report(InequalityId::brunn_minkowski, lhs, rhs, ConstantMode::optimal, 1.0,
                         tol.value_or(tolerance::at(tolerance::brunn_minkowski, A.spacing())), true);
  r.metadata["h"] = A.spacing();
  r.metadata["orientation"] = "rhs >= lhs (1 - tol)";
  r.metadata["volume_a"] = va;
  r.metadata["volume_b"] = vb;
  r.metadata["volume_sum"] = vs;
  r.metadata["sum_semantics"] = "union of lattice cells";
  return r;
}

/// ||u||_q <= c(n) TV(u) for u extended by zero, with the mollified chain
/// ||rho_k * u||_q <= c(n) TV(u) recorded for each k.
inline Report check_extended_sobolev(const GridFunction& u, const std::vector<int>& k_list,
                                     std::optional<double> tol = std::nullopt) {
  const auto& g = u.grid();
  const int n = g.dim();
  const double q = detail::conjugate_exponent(n);
  const double c = iso_constant(n);
  const double tv = total_variation(u);
  const double t = tol.value_or(tolerance::at(tolerance::sobolev_extended, g.spacing()));
  Report r = make_report(InequalityId::sobolev_extended, lq_norm(u, q), c * tv, ConstantMode::optimal, c, t);
  r.metadata["h"] = g.spacing();
  r.metadata["q"] = q;
  r.metadata["tv"] = tv;
  r.metadata["tv_scheme"] = "forward_l2";
  Json chain = Json::array();
  bool chain_holds = true;
  for (int k : k_list) {
    const GridFunction smooth = mollify(u, k);
    const double norm_k = lq_norm(smooth, q);
    const double tv_k = total_variation(smooth);
    const bool ok = norm_k <= c * tv * (1.0 + t);
    chain_holds = chain_holds && ok;
    chain.push_back(Json{{"k", k}, {"lq_mollified", norm_k}, {"tv_mollified", tv_k}, {"holds", ok}});
  }
  r.metadata["mollified_chain"] = chain;
  r.metadata["chain_holds"] = chain_holds;
  return r;
}

/// vol(D)^((n-1)/n) <= c(n) P(D), perimeter as the TV of the indicator.
inline Report check_perimeter_iso(const DomainPtr& domain, std::optional<double> tol = std::nullopt) {
  const auto& g = domain->grid;
  require(!g.empty(), ErrorKind::empty_domain, "perimeter check needs a nonempty domain");
  const int n = g.dim();
  const double c = iso_constant(n);
  const double perimeter = total_variation(constant(domain, 1.0));
  Report r = make_report(InequalityId::perimeter_iso, std::pow(volume(g), (n - 1.0) / n), c * perimeter,
                         ConstantMode::optimal, c, tol.value_or(tolerance::at(tolerance::perimeter_iso, g.spacing())));
  r.metadata["h"] = g.spacing();
  r.metadata["perimeter_tv"] = perimeter;
  r.metadata["tv_scheme"] = "forward_l2";
  return r;
}

inline Json to_json(const Report& r) {
  Json j;
  j["inequality_id"] = to_string(r.id);
  j["lhs"] = r.lhs;
  j["rhs"] = r.rhs;
  j["constant_mode"] = to_string(r.constant_mode);
  j["constant_value"] = r.constant_value;
  j["ratio"] = std::isfinite(r.ratio) ? Json(r.ratio) : Json(nullptr);
  j["holds"] = r.holds;
  j["tol"] = r.tol;
  j["metadata"] = r.metadata;
  return j;
}

}  // namespace gmt
