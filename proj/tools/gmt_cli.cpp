// gmt: command-line front end for the inequality checks.
//
// Exit status: 0 when every report holds and nothing errored, 1 when a check
// failed or an entry errored, 2 on bad input.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gmt/search.hpp"
#include "gmt/suite.hpp"
#include "gmt/trace.hpp"

namespace {

using gmt::Json;

std::uint64_t seed_from_env() {
  const char* s = std::getenv("GMT_SEED");
  if (s == nullptr || *s == '\0') return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw gmt::Error(gmt::ErrorKind::validation, std::string("GMT_SEED is not an integer: ") + s);
  }
}

gmt::DomainPtr load_domain(const std::string& path) {
  return gmt::share(gmt::build_domain(gmt::parse_domain_spec(gmt::read_json_file(path), path)));
}

gmt::GridFunction load_function(const gmt::DomainPtr& domain, const std::string& path) {
  return gmt::build_function(domain, gmt::parse_function_spec(gmt::read_json_file(path), path));
}

void print(const Json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream os(out, std::ios::binary);
  if (!os) throw gmt::Error(gmt::ErrorKind::io, "cannot write " + out);
  os << j.dump(2) << '\n';
  if (!os) throw gmt::Error(gmt::ErrorKind::io, "cannot write " + out);
}

std::string real(double v) { return gmt::detail::fmt_real(v); }

gmt::EmitFormat pick_format(const std::string& format, const std::string& out) {
  if (format == "json") return gmt::EmitFormat::json;
  if (format == "csv") return gmt::EmitFormat::csv;
  if (format == "tsv-plots") return gmt::EmitFormat::tsv_plots;
  if (out.size() >= 4 && out.compare(out.size() - 4, 4, ".csv") == 0) return gmt::EmitFormat::csv;
  return gmt::EmitFormat::json;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete checks of isoperimetric-type inequalities on rasterized domains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", gmt::tool_version);

  std::string suite_path, out, format, domain_path, func_path, plots;
  std::optional<double> h_opt, tol_opt;
  double d = 1.0, delta = 0.0, eps = 0.0, step = 0.05;
  std::optional<double> s_opt, d_opt;
  int iters = 100;
  std::vector<double> eps_list;

  auto* verify = app.add_subcommand("verify", "run a suite of checks");
  verify->set_help_flag("--help", "print this help and exit");
  verify->add_option("suite", suite_path, "suite JSON")->required();
  verify->add_option("--out", out, "report path (.json or .csv; a directory for tsv-plots)");
  verify->add_option("--format", format, "json, csv or tsv-plots (default: from --out)")
      ->check(CLI::IsMember({"json", "csv", "tsv-plots"}));
  verify->add_option("--h", h_opt, "override every grid spacing");
  verify->add_option("--tol", tol_opt, "override every tolerance");

  auto* hm = app.add_subcommand("estimate-hm", "estimate the Hausdorff measure of a domain boundary");
  hm->add_option("domain", domain_path, "domain JSON")->required();
  hm->add_option("--d", d_opt, "dimension of the measure (default n - 1)");
  hm->add_option("--delta", delta, "covering scale")->required();

  auto* part = app.add_subcommand("partition", "partition the boundary cloud into small pieces");
  part->add_option("domain", domain_path, "domain JSON")->required();
  part->add_option("--delta", delta, "partition scale")->required();
  part->add_option("--out", out, "cells JSON (default stdout)");
  part->add_option("--plots", plots, "write (delta, defect) over three halvings to this file");

  auto* trace = app.add_subcommand("trace", "numerical trace of the main estimate");
  trace->add_option("domain", domain_path, "domain JSON")->required();
  trace->add_option("function", func_path, "function JSON")->required();
  trace->add_option("--eps", eps, "boundary layer width")->required();
  trace->add_option("--s", s_opt, "shell thickness (default delta / 4)");
  trace->add_option("--out", out, "trace JSON (default stdout)");
  trace->add_option("--plots", plots, "directory for one series file per step");

  auto* search = app.add_subcommand("search", "coordinate ascent on the quotient");
  search->add_option("domain", domain_path, "domain JSON")->required();
  search->add_option("function", func_path, "starting function JSON")->required();
  search->add_option("--iters", iters, "number of sweeps")->required();
  search->add_option("--step", step, "relative step size")->required();
  search->add_option("--out", out, "result JSON (default stdout)");
  search->add_option("--plots", plots, "write (sweep, Q) to this file");

  auto* steiner = app.add_subcommand("steiner", "perimeter from Minkowski difference quotients");
  steiner->add_option("domain", domain_path, "domain JSON")->required();
  steiner->add_option("--eps", eps_list, "dilation radii")->required()->delimiter(',');
  steiner->add_option("--out", out, "result JSON (default stdout)");
  steiner->add_option("--plots", plots, "write (eps, quotient) to this file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      const gmt::SuiteSpec spec = gmt::parse_suite(suite_path);
      const gmt::RunManifest m = gmt::run_suite(spec, {h_opt, tol_opt});
      const auto fmt = pick_format(format, out);
      if (out.empty()) {
        if (fmt == gmt::EmitFormat::csv) {
          gmt::write_csv(std::cout, m);
        } else {
          require(fmt == gmt::EmitFormat::json, gmt::ErrorKind::validation, "tsv-plots needs --out <dir>");
          std::cout << gmt::to_json(m).dump(2) << '\n';
        }
      } else {
        gmt::emit(m, fmt, out);
      }
      for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
      for (const auto& e : m.errors) std::cerr << "entry " << e.entry << " (" << e.check << "): " << e.message << '\n';
      return m.pass ? 0 : 1;
    }

    if (*hm) {
      const auto dom = load_domain(domain_path);
      const double dd = d_opt.value_or(dom->grid.dim() - 1.0);
      const gmt::HmEstimate est = gmt::estimate_hm(dom->boundary, dd, delta);
      print(Json{{"d", dd},
                 {"delta", delta},
                 {"value", est.value},
                 {"upper_bound", est.upper_bound},
                 {"method", est.method},
                 {"scale", est.scale},
                 {"cells", est.cells},
                 {"face_count_total", est.raw_total}},
            out);
      return 0;
    }

    if (*part) {
      const auto dom = load_domain(domain_path);
      gmt::BoundaryCloud cloud = dom->boundary;
      cloud.weights = dom->measure().weights;
      const double dd = dom->grid.dim() - 1.0;
      const gmt::Partition p = gmt::build_partition(cloud, dd, delta);
      Json j = gmt::to_json(p);
      j["defect"] = gmt::partition_defect(p, dd);
      j["boundary_measure"] = dom->measure().calibrated ? "covering" : "face_count";
      print(j, out);
      if (!plots.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (double dl = delta, k = 0; k < 4; dl *= 0.5, ++k) {
          if (dl < 4.0 * cloud.resolution) break;
          rows.push_back({real(dl), real(gmt::partition_defect(gmt::build_partition(cloud, dd, dl), dd))});
        }
        gmt::write_series(plots, {"delta", "defect"}, rows);
      }
      return 0;
    }

    if (*trace) {
      const auto dom = load_domain(domain_path);
      const gmt::TraceReport tr = gmt::proof_trace(load_function(dom, func_path), eps, s_opt);
      print(gmt::to_json(tr), out);
      if (!plots.empty()) gmt::emit_trace_series(tr, plots);
      return tr.all_hold() ? 0 : 1;
    }

    if (*search) {
      const auto dom = load_domain(domain_path);
      const gmt::SearchResult r = gmt::quotient_search(load_function(dom, func_path), iters, step, seed_from_env());
      print(Json{{"iters", iters},
                 {"step", step},
                 {"seed", seed_from_env()},
                 {"quotient", r.quotient},
                 {"bound", r.bound},
                 {"bound_held", r.bound_held},
                 {"accepted", r.accepted},
                 {"trajectory", r.trajectory}},
            out);
      if (!plots.empty()) {
        std::vector<std::vector<std::string>> rows;
        for (std::size_t i = 0; i < r.trajectory.size(); ++i) rows.push_back({std::to_string(i), real(r.trajectory[i])});
        gmt::write_series(plots, {"sweep", "quotient"}, rows);
      }
      return r.bound_held ? 0 : 1;
    }

    if (*steiner) {
      const auto dom = load_domain(domain_path);
      const gmt::SteinerResult r = gmt::minkowski_steiner(dom->grid, eps_list);
      Json pts = Json::array();
      std::vector<std::vector<std::string>> rows;
      for (const auto& p : r.points) {
        pts.push_back(Json{{"eps", p.eps}, {"quotient", p.quotient}});
        rows.push_back({real(p.eps), real(p.quotient)});
      }
      Json j{{"points", pts}, {"perimeter_estimate", r.perimeter_estimate}};
      j["extrapolated"] = r.extrapolated ? Json(*r.extrapolated) : Json(nullptr);
      print(j, out);
      if (!plots.empty()) gmt::write_series(plots, {"eps", "quotient"}, rows);
      return 0;
    }
  } catch (const gmt::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
