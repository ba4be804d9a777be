#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "gencvx/corpus.hpp"
#include "gencvx/report.hpp"

namespace gencvx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitRefuted = 2;
inline constexpr int kExitInsufficient = 3;
inline constexpr int kExitMismatch = 4;

struct ResolvedTarget {
  FunctionHandle function;
  Region region;
  std::string source;
};

// Corpus entry or DSL function plus region, as selected by the config.
// Throws ConfigError, SyntaxError or DomainError.
ResolvedTarget resolve_target(const RunConfig& config);

// Runs classify and assembles the report. Throws on invalid configuration.
Report run_analyze(const RunConfig& config);

// Writes the report (to config.out via a temporary file, else to `out`) and
// one summary line per property to `log`. Returns 0, 2, or 1 on error.
int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& log);

struct BCurveRow {
  double lambda = 0.0;
  double b = 1.0;
  double lambda_b = 0.0;
  bool strict = false;
  bool weak = false;
  bool degenerate = false;
};

// λ_k = k / (N + 1), k = 1..N, with N = config.plan.lambda_grid.
std::vector<BCurveRow> run_bcurve(const RunConfig& config);
std::string bcurve_csv(std::span<const BCurveRow> rows);
int cmd_bcurve(const RunConfig& config, std::ostream& out, std::ostream& log);

// Every entry is classified on all properties and compared with its labels.
// Exit code: 4 on any label mismatch, else 3 when an entry is inconclusive,
// else 0.
CorpusReport run_corpus(const RunConfig& config, std::span<const CorpusEntry> entries);
CorpusReport run_corpus(const RunConfig& config);
int cmd_corpus(const RunConfig& config, std::ostream& out, std::ostream& log);

// "<property> <verdict> witnesses=<n> max_residual=<r>"
std::string summary_line(const PropertyVerdict& v);

}  // namespace gencvx
