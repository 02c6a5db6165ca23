#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "gmt/calculus.hpp"
#include "gmt/domain.hpp"
#include "gmt/error.hpp"
#include "gmt/expression.hpp"
#include "gmt/inequalities.hpp"
#include "gmt/io.hpp"
#include "gmt/trace.hpp"

namespace gmt {

inline constexpr const char* tool_version = "0.1.0";

struct DomainSpec {
  std::string kind;  // ball, box, polygon, annulus
  Json params = Json::object();
  double h = 0.0;
  std::optional<std::string> label;

  bool operator==(const DomainSpec&) const = default;
  std::string name() const { return label.value_or(kind); }
};

struct FunctionSpec {
  enum class Kind { indicator, expr, mollified_indicator };
  Kind kind = Kind::indicator;
  std::string expr;
  std::optional<double> lipschitz;
  int k = 0;

  bool operator==(const FunctionSpec&) const = default;
  std::string name() const {
    switch (kind) {
      case Kind::indicator: return "indicator";
      case Kind::expr: return expr;
      case Kind::mollified_indicator: return "mollified_indicator(k=" + std::to_string(k) + ")";
    }
    return "?";
  }
};

struct EntryParams {
  std::optional<double> h;
  std::optional<double> eps;
  std::optional<double> s;
  std::optional<double> delta;
  std::optional<double> c1;  // absent: auto
  std::optional<double> constant;
  std::optional<double> factor;
  std::optional<double> tol;
  std::vector<int> k_list{4, 8};

  bool operator==(const EntryParams&) const = default;
};

struct SuiteEntry {
  DomainSpec domain;
  FunctionSpec function;
  std::vector<std::string> checks;
  std::vector<ConstantMode> modes{ConstantMode::optimal};
  EntryParams params;
  std::optional<DomainSpec> other;  // second body for brunn_minkowski

  bool operator==(const SuiteEntry&) const = default;
};

struct SuiteSpec {
  std::string name;
  std::vector<SuiteEntry> entries;

  bool operator==(const SuiteSpec&) const = default;
};

/// Check ids accepted in suites: every inequality plus the negative-path
/// fixture swap_test (isoperimetric with its sides exchanged).
inline bool known_check(std::string_view id) { return parse_inequality(id).has_value() || id == "swap_test"; }

namespace detail {

inline void only_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& where) {
  require(j.is_object(), ErrorKind::validation, where + ": expected an object");
  for (const auto& [key, _] : j.items()) {
    const bool ok = std::any_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; });
    require(ok, ErrorKind::validation, where + ": unknown key \"" + key + "\"");
  }
}

inline double number(const Json& j, const char* key, const std::string& where) {
  require(j.contains(key), ErrorKind::validation, where + ": missing \"" + key + "\"");
  require(j.at(key).is_number(), ErrorKind::validation, where + ": \"" + key + "\" must be a number");
  return j.at(key).get<double>();
}

inline std::optional<double> maybe_number(const Json& j, const char* key, const std::string& where) {
  if (!j.contains(key)) return std::nullopt;
  return number(j, key, where);
}

inline Vec vector_of(const Json& j, const std::string& where, int& n) {
  require(j.is_array() && (j.size() == 2 || j.size() == 3), ErrorKind::validation,
          where + ": expected a 2- or 3-vector");
  Vec v{};
  n = static_cast<int>(j.size());
  for (int a = 0; a < n; ++a) {
    require(j[a].is_number(), ErrorKind::validation, where + ": vector entries must be numbers");
    v[a] = j[a].get<double>();
  }
  return v;
}

inline std::string line_column(const std::string& text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  // nlohmann reports the position after the offending character.
  if (col > 1) --col;
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace detail

inline DomainSpec parse_domain_spec(const Json& j, const std::string& where = "domain") {
  detail::only_keys(j, {"kind", "params", "h", "label"}, where);
  DomainSpec d;
  require(j.contains("kind") && j["kind"].is_string(), ErrorKind::validation, where + ": missing \"kind\"");
  d.kind = j["kind"].get<std::string>();
  d.h = detail::number(j, "h", where);
  require(d.h > 0.0, ErrorKind::validation, where + ": \"h\" must be positive");
  if (j.contains("params")) d.params = j["params"];
  if (j.contains("label")) {
    require(j["label"].is_string(), ErrorKind::validation, where + ": \"label\" must be a string");
    d.label = j["label"].get<std::string>();
  }
  const std::string pw = where + ".params";
  if (d.kind == "ball") {
    detail::only_keys(d.params, {"r", "center", "dim"}, pw);
    detail::number(d.params, "r", pw);
  } else if (d.kind == "annulus") {
    detail::only_keys(d.params, {"inner", "outer", "center", "dim"}, pw);
    detail::number(d.params, "inner", pw);
    detail::number(d.params, "outer", pw);
  } else if (d.kind == "box") {
    detail::only_keys(d.params, {"lo", "hi"}, pw);
    require(d.params.contains("lo") && d.params.contains("hi"), ErrorKind::validation, pw + ": needs lo and hi");
  } else if (d.kind == "polygon") {
    detail::only_keys(d.params, {"vertices"}, pw);
    require(d.params.contains("vertices") && d.params["vertices"].is_array(), ErrorKind::validation,
            pw + ": needs a vertex list");
  } else {
    throw Error(ErrorKind::validation, where + ": unknown domain kind \"" + d.kind + "\"");
  }
  if (d.params.contains("dim")) {
    require(d.params["dim"].is_number_integer(), ErrorKind::validation, pw + ": \"dim\" must be 2 or 3");
    const int n = d.params["dim"].get<int>();
    require(n == 2 || n == 3, ErrorKind::validation, pw + ": \"dim\" must be 2 or 3");
  }
  return d;
}

inline Json to_json(const DomainSpec& d) {
  Json j;
  j["kind"] = d.kind;
  j["params"] = d.params;
  j["h"] = d.h;
  if (d.label) j["label"] = *d.label;
  return j;
}

inline GridDomain build_domain(const DomainSpec& d, std::optional<double> h_override = std::nullopt) {
  const double h = h_override.value_or(d.h);
  const Json& p = d.params;
  const std::string where = "domain " + d.name();
  int n = p.contains("dim") ? p["dim"].get<int>() : 2;
  Vec center{};
  if (p.contains("center")) {
    int m = 0;
    center = detail::vector_of(p["center"], where + ".center", m);
    if (!p.contains("dim")) n = m;
    require(m == n, ErrorKind::validation, where + ": center does not match dim");
  }
  if (d.kind == "ball") return make_ball(n, center, p["r"].get<double>(), h);
  if (d.kind == "annulus") return make_annulus(n, center, p["inner"].get<double>(), p["outer"].get<double>(), h);
  if (d.kind == "box") {
    int na = 0, nb = 0;
    const Vec lo = detail::vector_of(p["lo"], where + ".lo", na);
    const Vec hi = detail::vector_of(p["hi"], where + ".hi", nb);
    require(na == nb, ErrorKind::validation, where + ": lo and hi differ in length");
    return make_box(na, lo, hi, h);
  }
  if (d.kind == "polygon") {
    std::vector<Vec> vertices;
    for (const auto& v : p["vertices"]) {
      int m = 0;
      vertices.push_back(detail::vector_of(v, where + ".vertices", m));
      require(m == 2, ErrorKind::validation, where + ": polygon vertices must be 2-vectors");
    }
    return rasterize_polygon(vertices, h);
  }
  throw Error(ErrorKind::validation, where + ": unknown kind");
}

inline FunctionSpec parse_function_spec(const Json& j, const std::string& where = "function") {
  FunctionSpec f;
  if (j.is_string()) {
    require(j.get<std::string>() == "indicator", ErrorKind::validation,
            where + ": the only string function is \"indicator\"");
    return f;
  }
  require(j.is_object(), ErrorKind::validation, where + ": expected \"indicator\" or an object");
  if (j.contains("expr")) {
    detail::only_keys(j, {"expr", "lipschitz"}, where);
    require(j["expr"].is_string(), ErrorKind::validation, where + ": \"expr\" must be a string");
    f.kind = FunctionSpec::Kind::expr;
    f.expr = j["expr"].get<std::string>();
    Expression check(f.expr);  // parse errors surface here
    f.lipschitz = detail::maybe_number(j, "lipschitz", where);
    if (f.lipschitz) require(*f.lipschitz >= 0.0, ErrorKind::validation, where + ": lipschitz must be >= 0");
    return f;
  }
  detail::only_keys(j, {"kind", "k"}, where);
  require(j.contains("kind") && j["kind"] == "mollified_indicator", ErrorKind::validation,
          where + ": expected \"expr\" or kind \"mollified_indicator\"");
  require(j.contains("k") && j["k"].is_number_integer() && j["k"].get<int>() >= 1, ErrorKind::validation,
          where + ": \"k\" must be a positive integer");
  f.kind = FunctionSpec::Kind::mollified_indicator;
  f.k = j["k"].get<int>();
  return f;
}

inline Json to_json(const FunctionSpec& f) {
  switch (f.kind) {
    case FunctionSpec::Kind::indicator: return "indicator";
    case FunctionSpec::Kind::expr: {
      Json j{{"expr", f.expr}};
      if (f.lipschitz) j["lipschitz"] = *f.lipschitz;
      return j;
    }
    case FunctionSpec::Kind::mollified_indicator: return Json{{"kind", "mollified_indicator"}, {"k", f.k}};
  }
  return nullptr;
}

inline GridFunction build_function(const DomainPtr& domain, const FunctionSpec& f) {
  switch (f.kind) {
    case FunctionSpec::Kind::indicator: return constant(domain, 1.0);
    case FunctionSpec::Kind::expr: {
      const Expression e(f.expr);
      return sample(domain, [&](const Vec& x) { return e(x); }, f.lipschitz);
    }
    case FunctionSpec::Kind::mollified_indicator: return mollified_indicator(domain, f.k);
  }
  throw Error(ErrorKind::validation, "unknown function kind");
}

/// Reads a JSON file, reporting syntax errors with line and column.
inline Json read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, path + ": file not found");
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::parse, path + ": malformed JSON at " + detail::line_column(text, e.byte));
  }
}

inline SuiteSpec parse_suite_json(const Json& j) {
  detail::only_keys(j, {"name", "entries"}, "suite");
  SuiteSpec spec;
  require(j.contains("name") && j["name"].is_string(), ErrorKind::validation, "suite: missing \"name\"");
  spec.name = j["name"].get<std::string>();
  require(j.contains("entries") && j["entries"].is_array(), ErrorKind::validation, "suite: missing \"entries\"");
  for (std::size_t i = 0; i < j["entries"].size(); ++i) {
    const Json& e = j["entries"][i];
    const std::string where = "entries[" + std::to_string(i) + "]";
    detail::only_keys(e, {"domain", "function", "checks", "modes", "params", "other"}, where);
    SuiteEntry entry;
    require(e.contains("domain"), ErrorKind::validation, where + ": missing \"domain\"");
    entry.domain = parse_domain_spec(e["domain"], where + ".domain");
    require(e.contains("function"), ErrorKind::validation, where + ": missing \"function\"");
    entry.function = parse_function_spec(e["function"], where + ".function");
    require(e.contains("checks") && e["checks"].is_array(), ErrorKind::validation, where + ": missing \"checks\"");
    for (const auto& c : e["checks"]) {
      require(c.is_string(), ErrorKind::validation, where + ": check ids must be strings");
      const std::string id = c.get<std::string>();
      require(known_check(id), ErrorKind::validation, "unknown inequality id \"" + id + "\"");
      entry.checks.push_back(id);
    }
    if (e.contains("modes")) {
      require(e["modes"].is_array(), ErrorKind::validation, where + ": \"modes\" must be a list");
      entry.modes.clear();
      for (const auto& m : e["modes"]) {
        const auto mode = m.is_string() ? parse_mode(m.get<std::string>()) : std::nullopt;
        require(mode.has_value(), ErrorKind::validation, where + ": unknown constant mode " + m.dump());
        entry.modes.push_back(*mode);
      }
    }
    if (e.contains("params")) {
      const Json& p = e["params"];
      const std::string pw = where + ".params";
      detail::only_keys(p, {"h", "eps", "s", "delta", "c1", "constant", "factor", "tol", "k_list"}, pw);
      entry.params.h = detail::maybe_number(p, "h", pw);
      entry.params.eps = detail::maybe_number(p, "eps", pw);
      entry.params.s = detail::maybe_number(p, "s", pw);
      entry.params.delta = detail::maybe_number(p, "delta", pw);
      entry.params.constant = detail::maybe_number(p, "constant", pw);
      entry.params.factor = detail::maybe_number(p, "factor", pw);
      entry.params.tol = detail::maybe_number(p, "tol", pw);
      if (p.contains("c1") && !(p["c1"].is_string() && p["c1"] == "auto")) {
        entry.params.c1 = detail::number(p, "c1", pw);
      }
      if (p.contains("k_list")) {
        require(p["k_list"].is_array(), ErrorKind::validation, pw + ": \"k_list\" must be a list");
        entry.params.k_list.clear();
        for (const auto& k : p["k_list"]) {
          require(k.is_number_integer() && k.get<int>() >= 1, ErrorKind::validation,
                  pw + ": k_list entries must be positive integers");
          entry.params.k_list.push_back(k.get<int>());
        }
      }
    }
    if (e.contains("other")) entry.other = parse_domain_spec(e["other"], where + ".other");
    spec.entries.push_back(std::move(entry));
  }
  return spec;
}

inline SuiteSpec parse_suite(const std::string& path) { return parse_suite_json(read_json_file(path)); }

inline Json to_json(const SuiteSpec& spec) {
  Json j;
  j["name"] = spec.name;
  Json entries = Json::array();
  for (const auto& e : spec.entries) {
    Json x;
    x["domain"] = to_json(e.domain);
    x["function"] = to_json(e.function);
    x["checks"] = e.checks;
    Json modes = Json::array();
    for (ConstantMode m : e.modes) modes.push_back(to_string(m));
    x["modes"] = modes;
    Json p;
    if (e.params.h) p["h"] = *e.params.h;
    if (e.params.eps) p["eps"] = *e.params.eps;
    if (e.params.s) p["s"] = *e.params.s;
    if (e.params.delta) p["delta"] = *e.params.delta;
    p["c1"] = e.params.c1 ? Json(*e.params.c1) : Json("auto");
    if (e.params.constant) p["constant"] = *e.params.constant;
    if (e.params.factor) p["factor"] = *e.params.factor;
    if (e.params.tol) p["tol"] = *e.params.tol;
    p["k_list"] = e.params.k_list;
    x["params"] = p;
    if (e.other) x["other"] = to_json(*e.other);
    entries.push_back(x);
  }
  j["entries"] = entries;
  return j;
}

struct ManifestRow {
  std::size_t entry = 0;
  std::string domain;
  std::string function;
  double h = 0.0;
  Report report;
};

struct EntryError {
  std::size_t entry = 0;
  std::string check;
  std::string kind;
  std::string message;
};

struct RunManifest {
  std::string tool = tool_version;
  std::string timestamp;
  std::string suite;
  std::string input_hash;
  std::vector<ManifestRow> reports;
  std::vector<EntryError> errors;
  std::vector<std::string> warnings;
  bool pass = true;
};

struct RunOptions {
  std::optional<double> h;    // overrides every domain spacing
  std::optional<double> tol;  // overrides every tolerance
};

namespace detail {

inline std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline std::vector<Report> run_check(const std::string& id, const SuiteEntry& e, const DomainPtr& domain,
                                     const GridFunction& u, double h, std::optional<double> tol) {
  if (id == "swap_test") {
    // Judged without slack so that a near-equality case still registers.
    const Report r = check_isoperimetric(domain, tol);
    Report swapped = make_report(InequalityId::isoperimetric, r.rhs, r.lhs, r.constant_mode, r.constant_value, 0.0);
    swapped.metadata["swap_test"] = true;
    return {swapped};
  }
  switch (*parse_inequality(id)) {
    case InequalityId::mazya: {
      std::vector<Report> out;
      for (ConstantMode m : e.modes) {
        std::optional<MazyaConstants> k;
        if (m == ConstantMode::supplied) {
          require(e.params.constant.has_value(), ErrorKind::validation, "supplied mode needs params.constant");
          k = MazyaConstants{*e.params.constant, e.params.factor.value_or(1.0)};
        }
        out.push_back(check_mazya(u, m, k, tol));
      }
      return out;
    }
    case InequalityId::mazya_l2: return {check_mazya_l2(u, e.params.c1, tol)};
    case InequalityId::isoperimetric: return {check_isoperimetric(domain, tol)};
    case InequalityId::sobolev: {
      Report r = check_sobolev(extend_to_box(u), tol);
      r.metadata["evaluated_on"] = "extension by zero to the grid box";
      return {r};
    }
    case InequalityId::sobolev_extended: return {check_extended_sobolev(u, e.params.k_list, tol)};
    case InequalityId::brunn_minkowski: {
      require(e.other.has_value(), ErrorKind::validation, "brunn_minkowski needs an \"other\" domain");
      return {check_brunn_minkowski(domain->grid, build_domain(*e.other, h), tol)};
    }
    case InequalityId::bv_bound: return {check_bv_bound(u, tol)};
    case InequalityId::perimeter_iso: return {check_perimeter_iso(domain, tol)};
  }
  return {};
}

}  // namespace detail

/// Runs every entry; errors are recorded per entry and check without
/// stopping the suite.
inline RunManifest run_suite(const SuiteSpec& spec, const RunOptions& opt = {}) {
  RunManifest m;
  m.timestamp = detail::utc_now();
  m.suite = spec.name;
  m.input_hash = "fnv1a:" + hex64(fnv1a(to_json(spec).dump()));
  if (spec.entries.empty()) m.warnings.push_back("suite has no entries");
  for (std::size_t i = 0; i < spec.entries.size(); ++i) {
    const SuiteEntry& e = spec.entries[i];
    const double h = opt.h.value_or(e.params.h.value_or(e.domain.h));
    const std::optional<double> tol = opt.tol ? opt.tol : e.params.tol;
    DomainPtr domain;
    GridFunction u;
    try {
      domain = share(build_domain(e.domain, h));
      u = build_function(domain, e.function);
    } catch (const Error& err) {
      m.errors.push_back({i, "*", to_string(err.kind()), err.what()});
      continue;
    }
    for (const auto& id : e.checks) {
      try {
        for (Report& r : detail::run_check(id, e, domain, u, h, tol)) {
          m.reports.push_back({i, e.domain.name(), e.function.name(), h, std::move(r)});
        }
      } catch (const Error& err) {
        m.errors.push_back({i, id, to_string(err.kind()), err.what()});
      }
    }
  }
  m.pass = m.errors.empty();
  for (const auto& row : m.reports) m.pass = m.pass && row.report.holds;
  return m;
}

inline Json to_json(const RunManifest& m) {
  Json j;
  j["generated"] = m.timestamp;
  j["tool_version"] = m.tool;
  j["suite"] = m.suite;
  j["input_hash"] = m.input_hash;
  j["pass"] = m.pass;
  Json reports = Json::array();
  for (const auto& row : m.reports) {
    Json r;
    r["entry"] = row.entry;
    r["domain"] = row.domain;
    r["function"] = row.function;
    r["h"] = row.h;
    const Json body = to_json(row.report);
    for (auto& [k, v] : body.items()) r[k] = v;
    reports.push_back(r);
  }
  j["reports"] = reports;
  Json errors = Json::array();
  for (const auto& e : m.errors) {
    errors.push_back(Json{{"entry", e.entry}, {"check", e.check}, {"kind", e.kind}, {"message", e.message}});
  }
  j["errors"] = errors;
  j["warnings"] = m.warnings;
  return j;
}

enum class EmitFormat { json, csv, tsv_plots };

namespace detail {

inline std::string fmt_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
  return out;
}

}  // namespace detail

inline constexpr const char* csv_header = "inequality_id,domain,function,h,lhs,rhs,ratio,holds";

inline void write_csv(std::ostream& os, const RunManifest& m) {
  os << csv_header << '\n';
  for (const auto& row : m.reports) {
    const Report& r = row.report;
    os << to_string(r.id) << ',' << detail::csv_field(row.domain) << ',' << detail::csv_field(row.function) << ','
       << detail::fmt_real(row.h) << ',' << detail::fmt_real(r.lhs) << ',' << detail::fmt_real(r.rhs) << ','
       << detail::fmt_real(r.ratio) << ',' << (r.holds ? "true" : "false") << '\n';
  }
}

/// Writes a tab-separated series file with a header row.
inline void write_series(const std::filesystem::path& path, const std::vector<std::string>& columns,
                         const std::vector<std::vector<std::string>>& rows) {
  auto out = detail::open_out(path);
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "\t" : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "\t" : "") << row[i];
    out << '\n';
  }
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
}

/// json: one document, the timestamp alone on its line; csv: the fixed
/// schema; tsv-plots: `path` is a directory receiving one series per
/// inequality id.
inline void emit(const RunManifest& m, EmitFormat format, const std::filesystem::path& path) {
  if (format == EmitFormat::tsv_plots) {
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) throw Error(ErrorKind::io, "cannot create " + path.string());
    for (InequalityId id : all_inequalities) {
      std::vector<std::vector<std::string>> rows;
      for (const auto& row : m.reports) {
        if (row.report.id != id) continue;
        rows.push_back({std::to_string(row.entry), row.domain, row.function, detail::fmt_real(row.h),
                        detail::fmt_real(row.report.lhs), detail::fmt_real(row.report.rhs),
                        detail::fmt_real(row.report.ratio)});
      }
      if (rows.empty()) continue;
      write_series(path / (std::string(to_string(id)) + ".tsv"),
                   {"entry", "domain", "function", "h", "lhs", "rhs", "ratio"}, rows);
    }
    return;
  }
  auto out = detail::open_out(path);
  if (format == EmitFormat::json) {
    out << to_json(m).dump(2) << '\n';
  } else {
    write_csv(out, m);
  }
  if (!out) throw Error(ErrorKind::io, "cannot write " + path.string());
}

/// One series file per labeled step of a proof trace.
inline void emit_trace_series(const TraceReport& tr, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + dir.string());
  for (const auto& st : tr.steps) {
    write_series(dir / (st.label + ".tsv"), {"eps", "s", "lhs", "rhs", "holds"},
                 {{detail::fmt_real(tr.eps), detail::fmt_real(tr.s), detail::fmt_real(st.lhs),
                   detail::fmt_real(st.rhs), st.holds ? "true" : "false"}});
  }
}

}  // namespace gmt
