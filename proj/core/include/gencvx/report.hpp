#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gencvx/campaign.hpp"
#include "gencvx/function.hpp"

namespace gencvx {

inline constexpr std::string_view kToolName = "gencvx";
inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kReportSchema = "gencvx-report/v1";
inline constexpr std::string_view kCorpusReportSchema = "gencvx-corpus-report/v1";

/// Everything needed to reproduce a run. Serialised into every report.
struct RunConfig {
  std::optional<std::string> corpus;    // corpus entry name
  std::optional<std::string> function;  // DSL source
  std::size_t dimension = 0;
  std::optional<std::string> region;    // overrides the corpus region when set
  std::vector<Property> properties{kAllProperties.begin(), kAllProperties.end()};
  SamplingPlan plan;
  std::optional<std::string> out;
  bool timing = false;
  std::optional<Vector> x;  // bcurve endpoints
  std::optional<Vector> y;

  friend bool operator==(const RunConfig& a, const RunConfig& b);
};

struct Report {
  std::string schema{kReportSchema};
  std::string tool_name{kToolName};
  std::string tool_version{kToolVersion};
  RunConfig config;
  std::string function_name;
  std::string function_source;
  std::string region;
  std::vector<std::string> assumptions;
  std::vector<PropertyVerdict> verdicts;
  ClarkeAudit clarke_audit;
  std::optional<double> elapsed_seconds;

  friend bool operator==(const Report&, const Report&) = default;
};

struct LabelMismatch {
  std::string function;
  Property property;
  bool expected;
  Verdict verdict;
  friend bool operator==(const LabelMismatch&, const LabelMismatch&) = default;
};

struct CorpusReport {
  std::string schema{kCorpusReportSchema};
  std::vector<Report> entries;
  std::vector<LabelMismatch> mismatches;
  std::vector<LatticeViolation> lattice_violations;
  std::size_t inconclusive = 0;
  int exit_code = 0;

  friend bool operator==(const CorpusReport&, const CorpusReport&) = default;
};

std::vector<std::string> standard_assumptions();

// JSON text with two-space indentation and a trailing newline.
std::string to_json(const Report& report);
std::string to_json(const CorpusReport& report);
std::string to_json(const RunConfig& config);

// Throw ConfigError on malformed input.
Report report_from_json(std::string_view text);
CorpusReport corpus_report_from_json(std::string_view text);

// Accepts the keys written by to_json(RunConfig); any other key is rejected.
// Keys present in the text are appended to `present` when it is non-null.
RunConfig config_from_json(std::string_view text, std::vector<std::string>* present = nullptr);

}  // namespace gencvx
