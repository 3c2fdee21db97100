#include "doctest.h"
#include "json.hpp"
#include "prodcert/error.hpp"
#include "prodcert/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace prodcert;

namespace {

std::string fixture(const std::string& rel) { return std::string(PRODCERT_FIXTURES) + "/" + rel; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunResult run(const std::string& command, const std::string& rel, RunOptions options = {}) {
  try {
    return run_command(command, load_spec(fixture(rel)), options);
  } catch (const std::exception& e) {
    return error_result(command, "fixtures/" + rel, e);
  }
}

RunOptions with_prefix(long n, int d_max = 0) {
  RunOptions o;
  o.prefix = n;
  o.d_max = d_max;
  return o;
}

std::vector<std::string> spec_files() {
  std::vector<std::string> out;
  for (const auto& e : std::filesystem::directory_iterator(fixture("specs"))) {
    out.push_back("specs/" + e.path().filename().string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("golden reports") {
  RunOptions eval;
  eval.target_radius = mpq_class(1);
  eval.target_radius /= mpz_class("1000000000000000000000000000000");
  const struct {
    std::string golden;
    RunResult result;
    ReportFormat format;
  } cases[] = {
      {"certified_family.check.txt", run("check", "specs/certified_family.json", with_prefix(20, 3)), ReportFormat::text},
      {"array_certified_family.check.json", run("check", "specs/array_certified_family.json", with_prefix(10)),
       ReportFormat::structured},
      {"double_exponential.eval.json", run("eval", "specs/double_exponential.json", eval), ReportFormat::structured},
      {"suite.lemmas.txt", run("lemmas", "lemmas/suite.json"), ReportFormat::text},
      {"small.heights.txt", run("heights", "heights/small.json"), ReportFormat::text},
      {"array_mode_II.report.txt", run("report", "specs/array_mode_II.json", with_prefix(8)), ReportFormat::text},
      {"bad_expression.check.txt", run("check", "malformed/bad_expression.json"), ReportFormat::text},
  };
  for (const auto& c : cases) {
    CHECK_MESSAGE(render(c.result.report, c.format) == slurp(fixture("golden/" + c.golden)), c.golden);
  }
}

TEST_CASE("structured reports round-trip") {
  for (const std::string& rel : spec_files()) {
    const RunResult r = run("check", rel, with_prefix(8));
    const std::string text = render(r.report, ReportFormat::structured);
    const nlohmann::json back = nlohmann::json::parse(text);
    CHECK(back.at("schema") == kReportSchema);
    CHECK(back.at("exit_code") == r.exit_code);
    CHECK_MESSAGE(verdicts_of(back) == verdicts_of(nlohmann::json::parse(r.report.dump())), rel);
    CHECK(render(nlohmann::ordered_json::parse(text), ReportFormat::structured) == text);
  }
}

TEST_CASE("verdict names") {
  for (Verdict v : {Verdict::verified, Verdict::asserted, Verdict::failed, Verdict::inconclusive, Verdict::violated,
                    Verdict::counterexample_candidate, Verdict::skipped}) {
    CHECK(verdict_from_string(to_string(v)) == v);
  }
  CHECK_FALSE(verdict_from_string("maybe"));
}

TEST_CASE("exit status follows the conclusions") {
  for (const std::string& rel : spec_files()) {
    const RunResult r = run("check", rel, with_prefix(12));
    bool all_certified = !r.report["sections"].empty();
    for (const auto& s : r.report["sections"]) {
      all_certified = all_certified && s.value("conclusion", "") == "certified-conditional";
    }
    if (r.report.contains("error")) {
      CHECK(r.exit_code == 2);
    } else {
      CHECK_MESSAGE(r.exit_code == (all_certified ? 0 : 1), rel);
    }
  }
  CHECK(run("check", "specs/certified_family.json", with_prefix(20)).exit_code == 0);
  CHECK(run("check", "specs/array_certified_family.json", with_prefix(10)).exit_code == 1);
  CHECK(run("lemmas", "lemmas/suite.json").exit_code == 0);
}

TEST_CASE("malformed specs exit with status 2") {
  const std::pair<std::string, std::string> cases[] = {
      {"malformed/bad_expression.json", "ExpressionError"},
      {"malformed/bad_json.json", "ParseError"},
      {"malformed/unknown_field.json", "SchemaError"},
  };
  for (const auto& [rel, kind] : cases) {
    const RunResult r = run("check", rel);
    CHECK(r.exit_code == 2);
    REQUIRE(r.report.contains("error"));
    CHECK(r.report["error"]["kind"] == kind);
  }
  // a lemma spec handed to eval is an argument error, not a crash
  const RunResult wrong = run("eval", "lemmas/suite.json");
  CHECK(wrong.exit_code == 2);
  CHECK(wrong.report["error"]["kind"] == "InvalidArgument");
}

TEST_CASE("reports are deterministic") {
  for (const char* command : {"report", "check"}) {
    for (const char* rel : {"specs/weighted.json", "specs/array_mode_I.json"}) {
      const std::string a = render(run(command, rel, with_prefix(8)).report, ReportFormat::structured);
      const std::string b = render(run(command, rel, with_prefix(8)).report, ReportFormat::structured);
      CHECK(a == b);
    }
  }
}
