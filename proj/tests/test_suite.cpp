#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "gmt/suite.hpp"

using namespace gmt;
namespace fs = std::filesystem;

namespace {

const char* smoke_text = R"({"name":"smoke","entries":[{"domain":{"kind":"ball","params":{"r":1},"h":0.01},"function":"indicator","checks":["isoperimetric"]}]})";

fs::path temp_file(const std::string& name, const std::string& body) {
  const fs::path p = fs::temp_directory_path() / ("gmt_test_" + name);
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(auto&& f, std::string* message = nullptr) {
  try {
    f();
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::io;
}

}  // namespace

TEST(ParseSuite, Smoke) {
  const SuiteSpec s = parse_suite(temp_file("smoke.json", smoke_text).string());
  EXPECT_EQ(s.name, "smoke");
  ASSERT_EQ(s.entries.size(), 1u);
  EXPECT_EQ(s.entries[0].checks, std::vector<std::string>{"isoperimetric"});
}

TEST(ParseSuite, UnknownCheckNamed) {
  std::string text = smoke_text;
  text.replace(text.find("isoperimetric"), 13, "bogus");
  std::string msg;
  EXPECT_EQ(kind_of([&] { parse_suite(temp_file("bogus.json", text).string()); }, &msg), ErrorKind::validation);
  EXPECT_NE(msg.find("bogus"), std::string::npos);
}

TEST(ParseSuite, MissingFile) {
  std::string msg;
  EXPECT_EQ(kind_of([] { parse_suite("/nonexistent/suite.json"); }, &msg), ErrorKind::parse);
  EXPECT_NE(msg.find("not found"), std::string::npos);
}

TEST(ParseSuite, MalformedReportsPosition) {
  std::string msg;
  EXPECT_EQ(kind_of([] { parse_suite(temp_file("bad.json", "{\n  \"name\": \"x\",\n  \"entries\": [,]\n}").string()); },
                    &msg),
            ErrorKind::parse);
  EXPECT_NE(msg.find("line 3"), std::string::npos) << msg;
  EXPECT_NE(msg.find("column"), std::string::npos) << msg;
}

TEST(ParseSuite, UnknownKeysRejected) {
  std::string text = smoke_text;
  text.replace(text.find("\"h\""), 3, "\"hh\"");
  EXPECT_EQ(kind_of([&] { parse_suite_json(Json::parse(text)); }), ErrorKind::validation);
  Json extra = Json::parse(smoke_text);
  extra["entries"][0]["params"] = Json{{"tolerance", 0.1}};
  EXPECT_EQ(kind_of([&] { parse_suite_json(extra); }), ErrorKind::validation);
}

TEST(ParseSuite, RoundTrip) {
  Json j = Json::parse(smoke_text);
  j["entries"].push_back(Json::parse(R"({
    "domain": {"kind": "polygon", "params": {"vertices": [[0,0],[1,0],[0,1]]}, "h": 0.02, "label": "triangle"},
    "function": {"expr": "x^2 + y^2", "lipschitz": 3},
    "checks": ["mazya", "mazya_l2", "swap_test"],
    "modes": ["optimal", "paper_factor"],
    "params": {"c1": 0.5, "k_list": [4], "tol": 0.05, "eps": 0.1},
    "other": {"kind": "annulus", "params": {"inner": 0.2, "outer": 0.5}, "h": 0.02}
  })"));
  const SuiteSpec s = parse_suite_json(j);
  const SuiteSpec back = parse_suite(temp_file("rt.json", to_json(s).dump(2)).string());
  EXPECT_EQ(back, s);
}

TEST(RunSuite, SmokePasses) {
  const RunManifest m = run_suite(parse_suite_json(Json::parse(smoke_text)));
  EXPECT_TRUE(m.pass);
  EXPECT_EQ(m.reports.size(), 1u);
  EXPECT_TRUE(m.errors.empty());
}

TEST(RunSuite, SwapTestFails) {
  Json j = Json::parse(smoke_text);
  j["entries"][0]["checks"] = Json::array({"swap_test"});
  const RunManifest m = run_suite(parse_suite_json(j));
  EXPECT_FALSE(m.pass);
}

TEST(RunSuite, EmptyWarns) {
  const RunManifest m = run_suite(parse_suite_json(Json::parse(R"({"name":"e","entries":[]})")));
  EXPECT_TRUE(m.pass);
  EXPECT_TRUE(m.reports.empty());
  EXPECT_EQ(m.warnings.size(), 1u);
}

TEST(RunSuite, EntryErrorRecorded) {
  Json j = Json::parse(smoke_text);
  j["entries"][0]["checks"] = Json::array({"brunn_minkowski", "isoperimetric"});
  const RunManifest m = run_suite(parse_suite_json(j));
  EXPECT_FALSE(m.pass);
  EXPECT_EQ(m.errors.size(), 1u);
  EXPECT_EQ(m.reports.size(), 1u);
}

TEST(Emit, JsonAndCsv) {
  const RunManifest m = run_suite(parse_suite_json(Json::parse(smoke_text)));
  const fs::path js = fs::temp_directory_path() / "gmt_test_out.json";
  emit(m, EmitFormat::json, js);
  EXPECT_NE(slurp(js).find("\"holds\": true"), std::string::npos);
  const fs::path cs = fs::temp_directory_path() / "gmt_test_out.csv";
  emit(m, EmitFormat::csv, cs);
  const std::string csv = slurp(cs);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "inequality_id,domain,function,h,lhs,rhs,ratio,holds");
  emit(run_suite(parse_suite_json(Json::parse(smoke_text))), EmitFormat::csv, cs);
  EXPECT_EQ(slurp(cs), csv);
}

TEST(Emit, CsvQuoting) {
  RunManifest m;
  m.reports.push_back({0, "a,b", "say \"hi\"", 0.5, make_report(InequalityId::mazya, 1, 2, ConstantMode::optimal, 1, 0)});
  std::ostringstream os;
  write_csv(os, m);
  EXPECT_NE(os.str().find("\"a,b\",\"say \"\"hi\"\"\""), std::string::npos);
}

TEST(Emit, UnwritablePath) {
  EXPECT_EQ(kind_of([] { emit(RunManifest{}, EmitFormat::json, "/nonexistent/dir/out.json"); }), ErrorKind::io);
}

TEST(Emit, TraceSeriesPerStep) {
  const auto d = share(make_ball(2, {0, 0, 0}, 1.0, 1.0 / 256));
  const TraceReport tr = proof_trace(constant(d, 1.0), 0.1);
  const fs::path dir = fs::temp_directory_path() / "gmt_test_trace";
  fs::remove_all(dir);
  emit_trace_series(tr, dir);
  for (const char* label : trace_labels) EXPECT_TRUE(fs::exists(dir / (std::string(label) + ".tsv"))) << label;
}
