#include "gencvx/commands.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include "gencvx/errors.hpp"

namespace gencvx {

namespace {

std::string format17(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

// Writes via a sibling temporary file so a failed run leaves no partial file.
void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open '" + tmp + "' for writing");
    f << text;
    if (!f.flush()) throw ConfigError("cannot write '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ConfigError("cannot move report into '" + path + "'");
  }
}

void emit(const RunConfig& config, const std::string& text, std::ostream& out) {
  if (config.out) {
    write_atomically(*config.out, text);
  } else {
    out << text;
  }
}

template <class Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const SyntaxError& e) {
    log << "error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace

ResolvedTarget resolve_target(const RunConfig& config) {
  if (config.corpus && config.function) throw ConfigError("give either a corpus entry or a function, not both");
  if (config.corpus) {
    auto entry = find_corpus_entry(*config.corpus);
    if (!entry) throw ConfigError("unknown corpus entry '" + *config.corpus + "'");
    if (config.region) {
      Region region = Region::parse(*config.region, entry->function.dimension());
      return {entry->function, std::move(region), entry->source};
    }
    return {entry->function, entry->region, entry->source};
  }
  if (!config.function) throw ConfigError("no function given (use a corpus entry or a DSL function)");
  // Syntax errors are reported before missing-argument errors.
  const Expr expr =
      parse(*config.function, config.dimension > 0 ? config.dimension : std::numeric_limits<std::size_t>::max());
  if (config.dimension == 0) throw ConfigError("a DSL function needs a positive dimension");
  if (!config.region) throw ConfigError("a DSL function needs a region");
  Region region = Region::parse(*config.region, config.dimension);
  return {FunctionHandle::from_expression(*config.function, expr, config.dimension), std::move(region),
          *config.function};
}

Report run_analyze(const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.plan.validate();
  if (config.properties.empty()) throw ConfigError("no properties requested");
  const ResolvedTarget target = resolve_target(config);
  Classification c = classify_with_diagnostics(target.function, target.region, config.properties, config.plan);
  Report r;
  r.config = config;
  r.function_name = target.function.name();
  r.function_source = target.source;
  r.region = target.region.text();
  r.assumptions = standard_assumptions();
  r.verdicts = std::move(c.verdicts);
  r.clarke_audit = c.clarke_audit;
  if (config.timing) {
    r.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

std::string summary_line(const PropertyVerdict& v) {
  return std::string(to_string(v.property)) + " " + std::string(to_string(v.verdict)) +
         " witnesses=" + std::to_string(v.witnesses.size()) + " max_residual=" + format17(v.max_residual);
}

int cmd_analyze(const RunConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const Report r = run_analyze(config);
    emit(config, to_json(r), out);
    bool refuted = false;
    for (const PropertyVerdict& v : r.verdicts) {
      log << summary_line(v) << '\n';
      refuted = refuted || v.verdict == Verdict::refuted;
    }
    return refuted ? kExitRefuted : kExitOk;
  });
}

std::vector<BCurveRow> run_bcurve(const RunConfig& config) {
  if (!config.x || !config.y) throw ConfigError("bcurve needs both endpoints x and y");
  if (config.plan.lambda_grid == 0) throw ConfigError("bcurve needs a positive grid size");
  const ResolvedTarget target = resolve_target(config);
  Point x(*config.x);
  Point y(*config.y);
  if (x.dimension() != target.region.dimension() || y.dimension() != target.region.dimension()) {
    throw ConfigError("bcurve endpoints do not match the region dimension");
  }
  // Segment endpoints may leave the sampling box but not the halfspaces that
  // delimit the domain; convexity then keeps the whole segment inside.
  if (!target.region.satisfies_constraints(x) || !target.region.satisfies_constraints(y)) {
    throw DomainError("bcurve endpoints must satisfy the region constraints");
  }
  const PairSample s = make_pair_sample(target.function, std::move(x), std::move(y));
  const std::size_t n = config.plan.lambda_grid;
  std::vector<BCurveRow> rows;
  for (std::size_t k = 1; k <= n; ++k) {
    const double l = static_cast<double>(k) / static_cast<double>(n + 1);
    const BRecord rec = compute_b(target.function, s, l);
    rows.push_back({l, rec.b, rec.lambda_b, rec.strict, rec.weak, rec.degenerate});
  }
  return rows;
}

std::string bcurve_csv(std::span<const BCurveRow> rows) {
  std::string out = "lambda,b,lambda_b,strict,weak,degenerate\n";
  for (const BCurveRow& r : rows) {
    out += format17(r.lambda) + ',' + format17(r.b) + ',' + format17(r.lambda_b) + ',' + (r.strict ? '1' : '0') +
           ',' + (r.weak ? '1' : '0') + ',' + (r.degenerate ? '1' : '0') + '\n';
  }
  return out;
}

int cmd_bcurve(const RunConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const std::vector<BCurveRow> rows = run_bcurve(config);
    emit(config, bcurve_csv(rows), out);
    if (!rows.empty() && rows.front().degenerate) log << "degenerate pair: f(y) = f(x) within the band, b = 1\n";
    return kExitOk;
  });
}

CorpusReport run_corpus(const RunConfig& config, std::span<const CorpusEntry> entries) {
  config.plan.validate();
  CorpusReport out;
  std::vector<NamedVerdicts> named;
  for (const CorpusEntry& e : entries) {
    Classification c = classify_with_diagnostics(e.function, e.region, kAllProperties, config.plan);
    Report r;
    r.config = config;
    r.config.corpus = e.function.name();
    r.config.function.reset();
    r.config.region.reset();
    r.config.properties.assign(kAllProperties.begin(), kAllProperties.end());
    r.function_name = e.function.name();
    r.function_source = e.source;
    r.region = e.region.text();
    r.assumptions = standard_assumptions();
    r.verdicts = c.verdicts;
    r.clarke_audit = c.clarke_audit;
    for (const PropertyVerdict& v : c.verdicts) {
      const auto label = e.labels.find(v.property);
      if (label == e.labels.end()) continue;
      if (v.verdict == Verdict::inconclusive) {
        ++out.inconclusive;
      } else if ((v.verdict == Verdict::holds_at_samples) != label->second) {
        out.mismatches.push_back({e.function.name(), v.property, label->second, v.verdict});
      }
    }
    named.emplace_back(e.function.name(), std::move(c.verdicts));
    out.entries.push_back(std::move(r));
  }
  out.lattice_violations = check_implication_lattice(named);
  out.exit_code = !out.mismatches.empty() ? kExitMismatch : out.inconclusive > 0 ? kExitInsufficient : kExitOk;
  return out;
}

CorpusReport run_corpus(const RunConfig& config) {
  const std::vector<CorpusEntry> entries = corpus();
  return run_corpus(config, entries);
}

int cmd_corpus(const RunConfig& config, std::ostream& out, std::ostream& log) {
  return guarded(log, [&] {
    const CorpusReport r = run_corpus(config);
    emit(config, to_json(r), out);
    for (const Report& e : r.entries) {
      for (const PropertyVerdict& v : e.verdicts) log << e.function_name << ' ' << summary_line(v) << '\n';
    }
    for (const LabelMismatch& m : r.mismatches) {
      log << "mismatch: " << m.function << ' ' << to_string(m.property) << " expected "
          << (m.expected ? "holds" : "refuted") << ", got " << to_string(m.verdict) << '\n';
    }
    for (const LatticeViolation& v : r.lattice_violations) {
      log << "lattice violation: " << v.function << ' ' << to_string(v.antecedent) << " holds but "
          << to_string(v.consequent) << " is refuted\n";
    }
    if (r.exit_code == kExitInsufficient) log << "insufficient sampling: " << r.inconclusive << " inconclusive verdicts\n";
    return r.exit_code;
  });
}

}  // namespace gencvx
