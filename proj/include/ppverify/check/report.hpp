#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ppverify/check/checker.hpp"

namespace ppv::check {

// Version of the JSON report layout; bumped on incompatible changes.
inline constexpr int kReportSchemaVersion = 1;

// Everything one CLI command reports.
struct Report {
  std::string command;   // "check", "idempotence", "invariant"
  std::string manifest;  // input file name
  std::vector<std::string> labels;  // vertex labels, to name orderings
  // Verdicts in the order they were established (determinism first).
  std::vector<Verdict> verdicts;
  std::optional<CheckStats> stats;
  double seconds = 0.0;
};

std::string render_text(const Report& r);
std::string render_json(const Report& r);

// Report for a failure that prevented a verdict.
std::string render_error_json(const std::string& command, const std::string& kind, const std::string& message);

// Rendering of a single path state: "dir" or "file(<content>)"; an error
// result renders as "error".
std::string render_result(const fs::EvalResult& r);

}  // namespace ppv::check
