// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Oracles are closed forms computed here, independently of
// the library.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "gmt/search.hpp"
#include "gmt/suite.hpp"
#include "gmt/trace.hpp"

using namespace gmt;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// omega_n by the recursion omega_n = 2 pi / n * omega_(n-2).
double omega_oracle(int n) {
  if (n == 0) return 1.0;
  if (n == 1) return 2.0;
  return 2.0 * pi / n * omega_oracle(n - 2);
}

double c_oracle(int n) { return 1.0 / (n * std::pow(omega_oracle(n), 1.0 / n)); }

DomainPtr disk(double h, double r = 1.0) { return share(make_ball(2, {0, 0, 0}, r, h)); }

Outcome constants() {
  Outcome o;
  for (int n = 1; n <= 4; ++n) {
    o.expect(rel(unit_ball_volume(n), omega_oracle(n)) <= 1e-10, fmt("omega_%d", n));
    o.expect(rel(iso_constant(n), c_oracle(n)) <= 1e-10, fmt("c(%d)", n));
    const double gamma_form = std::pow(std::tgamma(n / 2.0 + 1.0), 1.0 / n) / (n * std::sqrt(pi));
    o.expect(rel(iso_constant(n), gamma_form) <= 1e-12, fmt("closed forms agree, n=%d", n));
  }
  // Reference values are quoted to seven decimals.
  o.expect(std::abs(iso_constant(2) - 0.2820948) < 1e-7 && std::abs(iso_constant(3) - 0.2067834) < 1e-7,
           "reference digits");
  o.note(fmt("c(2)=%.9f c(3)=%.9f", iso_constant(2), iso_constant(3)));
  return o;
}

Outcome hausdorff() {
  Outcome o;
  const auto circle = sample_circle({0, 0, 0}, 1.0, 1.0 / 512);
  const double hc = estimate_hm(circle, 1, 0.05).value;
  o.expect(rel(hc, 2 * pi) <= 0.03, "circle within 3%");
  const double hs = estimate_hm(sample_segment(2, {0, 0, 0}, {1, 0, 0}, 1.0 / 512), 1, 0.05).value;
  o.expect(rel(hs, 1.0) <= 0.03, "segment within 3%");
  double prev = 0.0;
  bool mono = true;
  for (double delta : {0.4, 0.2, 0.1, 0.05}) {
    const double v = estimate_hm(circle, 1, delta).value;
    mono = mono && v >= prev;
    prev = v;
  }
  o.expect(mono, "non-increasing in delta");
  o.note(fmt("circle %.5f (2pi %.5f), segment %.5f", hc, 2 * pi, hs));
  return o;
}

Outcome defect() {
  Outcome o;
  const auto check = [&](const char* name, const BoundaryCloud& cloud) {
    double d0 = partition_defect(build_partition(cloud, 1, 0.4), 1);
    std::string trail = fmt("%s %.2e", name, d0);
    for (double delta : {0.2, 0.1, 0.05}) {
      const double d1 = partition_defect(build_partition(cloud, 1, delta), 1);
      o.expect(d1 <= 0.75 * d0, fmt("%s halving to %g", name, delta));
      trail += fmt(" %.2e", d1);
      d0 = d1;
    }
    o.note(trail);
  };
  check("circle", sample_circle({0, 0, 0}, 1.0, 1.0 / 4096));
  check("ellipse", sample_ellipse({0, 0, 0}, 1.0, 0.5, 1.0 / 4096));
  const double res = 1.0 / 512;
  const auto seg = sample_segment(2, {0, 0, 0}, {1, 0, 0}, res);
  const auto part = build_partition(seg, 1, 0.25);
  const double sd = partition_defect(part, 1);
  o.expect(sd <= 2 * res * part.cells.size(), "segment within quantization bound");
  o.note(fmt("segment %.2e", sd));
  return o;
}

Outcome shell() {
  Outcome o;
  for (int n : {2, 3}) {
    for (double r : {0.1, 1.0}) {
      const double limit = n * omega_oracle(n) * std::pow(r, n - 1);
      o.expect(rel(shell_mass(r, r / 1000, 1.0, n), limit) < 0.01, fmt("limit n=%d r=%g", n, r));
      o.expect(rel(shell_mass_limit(r, 1.0, n), limit) < 1e-12, fmt("limit formula n=%d r=%g", n, r));
    }
  }
  const auto box = share(make_box(2, {-0.5, -0.5, 0}, {0.5, 0.5, 0}, 1.0 / 512));
  const double mass = grad_l1(barrier_ramp({0, 0, 0}, 0.2, 0.05, 1.0, box));
  const double annulus = (std::pow(0.25, 2) - std::pow(0.2, 2)) * pi / 0.05;
  o.expect(rel(mass, annulus) <= 0.05, "barrier gradient mass within 5%");
  o.note(fmt("barrier %.5f vs %.5f", mass, annulus));
  return o;
}

Outcome equality() {
  Outcome o;
  const auto d = disk(1.0 / 512);
  const Report iso = check_isoperimetric(d);
  o.expect(iso.holds && iso.ratio >= 0.97 && iso.ratio <= 1.01, "isoperimetric ratio in [0.97, 1.01]");
  const Report mz = check_mazya(constant(d, 1.0), ConstantMode::optimal);
  o.expect(mz.holds && mz.ratio >= 0.95 && mz.ratio <= 1.02, "mazya ratio in [0.95, 1.02]");
  o.note(fmt("isoperimetric %.5f, mazya %.5f", iso.ratio, mz.ratio));
  return o;
}

Outcome matrix() {
  Outcome o;
  const SuiteSpec spec = parse_suite(GMT_SUITES_DIR "/full_matrix.json");
  const RunManifest m = run_suite(spec);
  std::set<std::string> domains, functions, ids;
  double worst = 0.0;
  for (const auto& row : m.reports) {
    domains.insert(row.domain);
    functions.insert(row.function);
    ids.insert(std::string(to_string(row.report.id)) + "/" + to_string(row.report.constant_mode));
    worst = std::max(worst, row.report.ratio);
    o.expect(row.report.holds, fmt("%s on %s with %s", to_string(row.report.id), row.domain.c_str(),
                                   row.function.c_str()));
  }
  o.expect(m.errors.empty(), "no entry errors");
  o.expect(domains.size() == 5 && functions.size() == 6, "matrix coverage");
  o.expect(m.reports.size() == 5 * 6 * 7, "report count");
  o.note(fmt("%zu reports over %zu domains x %zu functions, largest ratio %.4f", m.reports.size(), domains.size(),
             functions.size(), worst));
  return o;
}

Outcome traces() {
  Outcome o;
  const auto run = [&](const char* name, const GridFunction& u, double eps) {
    const TraceReport tr = proof_trace(u, eps);
    o.expect(tr.steps.size() == 6, fmt("%s has six steps", name));
    for (const auto& st : tr.steps) o.expect(st.holds, fmt("%s %s", name, st.label.c_str()));
    const Report m = check_mazya(u, ConstantMode::paper_factor);
    const auto& main3 = tr.steps.back();
    o.expect(main3.label == "main3" && rel(main3.lhs, m.lhs) <= 1e-9 && rel(main3.rhs, m.rhs) <= 1e-9,
             fmt("%s main3 agrees with the mazya check", name));
    const auto& main5 = tr.steps[1];
    o.note(fmt("%s main5 %.4f/%.4f", name, main5.lhs, main5.rhs));
  };
  const auto d = disk(1.0 / 512);
  run("u=1", constant(d, 1.0), 0.1);
  run("u=1-r^2", sample(d, [](const Vec& x) { return std::max(0.0, 1 - x[0] * x[0] - x[1] * x[1]); }, 2.0), 0.05);
  o.expect(paper_boundary_factor(2) == 2 * pi, "factor(2) = 2 pi");
  o.expect(paper_boundary_factor(3) == 16.0, "factor(3) = 16");
  return o;
}

Outcome lattice() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  int pairs = 0;
  double worst_tv = -1e300, worst_mass = 0.0, worst_gap = 0.0;
  for (int cells : {32, 64}) {
    const double h = 1.0 / cells;
    const auto dom = share(make_box(2, {0, 0, 0}, {1, 1, 0}, h));
    for (int t = 0; t < 100; ++t, ++pairs) {
      const auto u = sample(dom, [&](const Vec&) { return U(rng); });
      const auto v = sample(dom, [&](const Vec&) { return U(rng); });
      const double lhs = grad_l1(pointwise_min(u, v));
      const double bound = grad_l1(u) + grad_l1(v);
      worst_gap = std::max(worst_gap, lhs / bound);
      const double osc = std::max(u.max_value(), v.max_value()) - std::min(u.min_value(), v.min_value());
      o.expect(lhs <= bound + tolerance::lattice * h * osc, fmt("min gradient, grid %d pair %d", cells, t));
      if (t % 10 != 0) continue;
      const double tv = total_variation(u);
      for (int k : {4, 8, 16}) {
        const auto m = mollify(u, k);
        worst_tv = std::max(worst_tv, total_variation(m) - tv);
        o.expect(total_variation(m) <= tv + tolerance::mollify_tv, fmt("TV after mollify, grid %d k %d", cells, k));
        worst_mass = std::max(worst_mass, rel(mass(m), mass(u)));
      }
    }
  }
  o.expect(worst_mass <= 1e-12, "mollifier mass conservation");
  o.note(fmt("%d pairs, max grad(u^v)/(grad u + grad v) %.3f, max TV change %.2e, max mass drift %.2e", pairs,
             worst_gap, worst_tv, worst_mass));
  return o;
}

Outcome steiner() {
  Outcome o;
  const auto sd = minkowski_steiner(make_ball(2, {0, 0, 0}, 1.0, 1.0 / 512), {0.2, 0.1, 0.05});
  const auto ss = minkowski_steiner(make_box(2, {0, 0, 0}, {1, 1, 0}, 1.0 / 512), {0.2, 0.1, 0.05});
  o.expect(sd.extrapolated && rel(*sd.extrapolated, 2 * pi) <= 0.02, "disk within 2%");
  o.expect(ss.extrapolated && rel(*ss.extrapolated, 4.0) <= 0.02, "square within 2%");
  o.note(fmt("disk %.4f, square %.4f", sd.extrapolated.value_or(0), ss.extrapolated.value_or(0)));
  return o;
}

Outcome brunn_minkowski() {
  Outcome o;
  const auto equality = [&](const char* name, const GridDomain& a, const GridDomain& b) {
    const Report r = check_brunn_minkowski(a, b);
    o.expect(r.holds && std::abs(r.rhs / r.lhs - 1.0) <= 0.01, fmt("%s within 1%%", name));
    o.note(fmt("%s %.4f", name, r.rhs / r.lhs));
  };
  equality("squares", make_box(2, {0, 0, 0}, {1, 1, 0}, 1.0 / 64), make_box(2, {0, 0, 0}, {0.5, 0.5, 0}, 1.0 / 64));
  equality("cubes", make_box(3, {0, 0, 0}, {1, 1, 1}, 1.0 / 32), make_box(3, {0, 0, 0}, {0.5, 0.5, 0.5}, 1.0 / 32));
  equality("disks", make_ball(2, {0, 0, 0}, 1.0, 1.0 / 256), make_ball(2, {0, 0, 0}, 0.5, 1.0 / 256));
  equality("balls", make_ball(3, {0, 0, 0}, 1.0, 1.0 / 64), make_ball(3, {0, 0, 0}, 0.5, 1.0 / 64));
  const Report boxes = check_brunn_minkowski(make_box(2, {0, 0, 0}, {1, 2, 0}, 1.0 / 64),
                                             make_box(2, {0, 0, 0}, {2, 1, 0}, 1.0 / 64));
  o.expect(boxes.holds && boxes.rhs / boxes.lhs >= 1.05, "box pair strict");
  o.note(fmt("boxes %.4f (3/(2 sqrt 2) = %.4f)", boxes.rhs / boxes.lhs, 3.0 / (2 * std::sqrt(2.0))));
  return o;
}

Outcome search() {
  Outcome o;
  const auto d = disk(1.0 / 32);
  o.expect(d->grid.dims()[0] >= 64, "64 cells across");
  const SearchResult r = quotient_search(constant(d, 1.0), 200, 0.05, 0);
  const double cap = iso_constant(2) * 1.05;
  bool mono = true, bounded = true;
  for (std::size_t i = 0; i < r.trajectory.size(); ++i) {
    if (i > 0) mono = mono && r.trajectory[i] >= r.trajectory[i - 1];
    bounded = bounded && r.trajectory[i] <= cap;
  }
  o.expect(r.trajectory.size() == 201, "200 sweeps recorded");
  o.expect(mono, "monotone per sweep");
  o.expect(bounded, "never above 1.05 c(2)");
  o.expect(rel(mazya_quotient(r.best), r.quotient) <= 1e-9, "reported Q recomputes");
  o.note(fmt("Q %.5f -> %.5f, cap %.5f", r.trajectory.front(), r.quotient, cap));
  return o;
}

int run_cli(const std::string& args, const fs::path& stdout_path) {
  const std::string cmd = std::string("\"") + GMT_CLI_PATH + "\" " + args + " > \"" + stdout_path.string() + "\" 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "gmt_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string suites = GMT_SUITES_DIR;

  const SuiteSpec spec = parse_suite(suites + "/full_matrix.json");
  const fs::path rt = dir / "roundtrip.json";
  std::ofstream(rt) << to_json(spec).dump(2);
  o.expect(parse_suite(rt.string()) == spec, "suite round-trip");

  const int a = run_cli("verify " + suites + "/smoke.json --format csv", dir / "a.csv");
  const int b = run_cli("verify " + suites + "/smoke.json --format csv", dir / "b.csv");
  const std::string body = slurp(dir / "a.csv");
  o.expect(a == 0 && b == 0, "smoke exits 0");
  o.expect(!body.empty() && body == slurp(dir / "b.csv"), "identical CSV across runs");
  o.expect(body.rfind("inequality_id,domain,function,h,lhs,rhs,ratio,holds\n", 0) == 0, "CSV header");

  const int c = run_cli("verify " + suites + "/smoke.json --out " + (dir / "m.json").string(), dir / "none");
  o.expect(c == 0 && slurp(dir / "m.json").find("\"holds\": true") != std::string::npos, "JSON manifest");

  o.expect(run_cli("verify " + suites + "/forced_failure.json", dir / "f") == 1, "forced failure exits 1");
  o.expect(run_cli("verify " + suites + "/entry_error.json", dir / "e") == 1, "entry error exits 1");
  o.expect(run_cli("verify " + suites + "/empty.json", dir / "z") == 0, "empty suite exits 0");
  o.expect(run_cli("verify " + (dir / "missing.json").string(), dir / "x") != 0, "missing suite fails");
  o.expect(run_cli("verify " + rt.string() + " --h 0.03125 --format csv", dir / "rt.csv") == 0,
           "round-tripped matrix verifies");
  o.note("exit codes and CSV bodies as contracted");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"constants", constants},
      {"hausdorff estimator", hausdorff},
      {"partition defect", defect},
      {"shell formula", shell},
      {"equality probes", equality},
      {"inequality matrix", matrix},
      {"proof trace", traces},
      {"lattice and TV", lattice},
      {"Minkowski-Steiner", steiner},
      {"Brunn-Minkowski", brunn_minkowski},
      {"quotient search", search},
      {"CLI contract", cli},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s (%.1fs): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, secs,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
