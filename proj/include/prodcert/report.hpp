#pragma once

// Command dispatch and report emission shared by the prodcert tool and the
// acceptance suite.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "prodcert/spec.hpp"
#include "prodcert/verdict.hpp"

namespace prodcert {

inline constexpr int kReportSchema = 1;

enum class ReportFormat { text, structured };

struct RunOptions {
  /// Prefix length for check; term cap for eval (default 400).
  std::optional<long> prefix;
  mpq_class target_radius = mpq_class(1, 1000000);
  Precision precision = kDefaultPrecision;
  /// Loop D = 1..d_max for check; 0 keeps the declared D.
  int d_max = 0;
};

inline constexpr long kDefaultCheckPrefix = 20;

struct RunResult {
  /// 0 verified or certified-conditional, 1 failed or undecided, 2 error.
  int exit_code = 0;
  nlohmann::ordered_json report;
};

/// command is one of check, eval, lemmas, heights, report. Errors from the
/// modules are captured in the report with exit code 2.
RunResult run_command(const std::string& command, const SpecDocument& doc, const RunOptions& options);

/// A report for a spec that could not be loaded.
RunResult error_result(const std::string& command, const std::string& path, const std::exception& e);

/// Text mode prints one `CHECK <id> <verdict> <lhs> <rhs>` record per check,
/// followed by the witness in quotes when there is one.
std::string render(const nlohmann::ordered_json& report, ReportFormat format);

std::optional<Verdict> verdict_from_string(std::string_view s);

/// (section/id, verdict) for every check in a structured report.
std::vector<std::pair<std::string, Verdict>> verdicts_of(const nlohmann::json& report);

}  // namespace prodcert
