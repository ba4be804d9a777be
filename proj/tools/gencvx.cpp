// gencvx: classify generalized-convexity properties of a function.
//
//   gencvx analyze --corpus fractional --properties pseudolinear
//   gencvx analyze --function "x1^3" --dim 1 --region "box(-1..1)"
//   gencvx bcurve  --corpus fractional --x 1,0 --y 2,2 --lambda-grid 5
//   gencvx corpus  --seed 42
//
// Precedence for every field: explicit flag, then --config file, then
// GENCVX_SEED (seed only), then the built-in default.

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#ifdef GENCVX_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include "CLI11.hpp"
#endif
#include "gencvx/commands.hpp"
#include "gencvx/errors.hpp"
#include "gencvx/report.hpp"

namespace {

using gencvx::ConfigError;

struct Flags {
  std::string function;
  std::size_t dim = 0;
  std::string corpus;
  std::string region;
  std::string properties;
  std::size_t samples = 0;
  std::size_t lambda_grid = 0;
  std::uint64_t seed = 0;
  std::string out;
  std::string clarke_steps;
  std::size_t clarke_probes = 0;
  double subdiff_radius = 0.0;
  std::size_t subdiff_count = 0;
  std::string config;
  std::size_t workers = 0;
  std::string x;
  std::string y;
};

double parse_double(std::string_view text) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("'" + std::string(text) + "' is not a number");
  }
  return v;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t end = text.find(sep, start);
    parts.push_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
    if (end == std::string_view::npos) return parts;
    start = end + 1;
  }
}

gencvx::Vector parse_vector(std::string_view text) {
  gencvx::Vector v;
  for (std::string_view part : split(text, ',')) v.push_back(parse_double(part));
  return v;
}

// "a,b,c" or "first:last:count" (geometric).
gencvx::Vector parse_steps(std::string_view text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return parse_vector(text);
  if (parts.size() != 3) throw ConfigError("--clarke-steps expects a list or first:last:count");
  const double count = parse_double(parts[2]);
  if (count < 2 || count != static_cast<double>(static_cast<std::size_t>(count))) {
    throw ConfigError("--clarke-steps count must be an integer of at least 2");
  }
  return gencvx::ClarkeScheme::geometric_steps(parse_double(parts[0]), parse_double(parts[1]),
                                               static_cast<std::size_t>(count));
}

std::vector<gencvx::Property> parse_properties(std::string_view text) {
  if (text == "all") return {gencvx::kAllProperties.begin(), gencvx::kAllProperties.end()};
  std::vector<gencvx::Property> out;
  for (std::string_view name : split(text, ',')) {
    const auto p = gencvx::property_from_string(name);
    if (!p) throw ConfigError("unknown property '" + std::string(name) + "'");
    out.push_back(*p);
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

bool contains(const std::vector<std::string>& keys, std::string_view key) {
  for (const auto& k : keys) {
    if (k == key) return true;
  }
  return false;
}

gencvx::RunConfig build_config(const CLI::App& cmd, const Flags& flags) {
  gencvx::RunConfig config;
  std::vector<std::string> from_file;
  if (cmd.count("--config") > 0) config = gencvx::config_from_json(read_file(flags.config), &from_file);

  if (cmd.count("--seed") > 0) {
    config.plan.seed = flags.seed;
  } else if (!contains(from_file, "seed")) {
    if (const char* env = std::getenv("GENCVX_SEED"); env != nullptr && *env != '\0') {
      std::uint64_t seed = 0;
      const std::string_view text(env);
      const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
      if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ConfigError("GENCVX_SEED is not a nonnegative integer");
      }
      config.plan.seed = seed;
    }
  }

  const auto given = [&](const char* flag) {
    const CLI::Option* opt = cmd.get_option_no_throw(flag);
    return opt != nullptr && opt->count() > 0;
  };
  if (given("--function")) config.function = flags.function;
  if (given("--dim")) config.dimension = flags.dim;
  if (given("--corpus")) config.corpus = flags.corpus;
  if (given("--region")) config.region = flags.region;
  if (given("--properties")) config.properties = parse_properties(flags.properties);
  if (given("--samples")) config.plan.pair_count = flags.samples;
  if (given("--lambda-grid")) config.plan.lambda_grid = flags.lambda_grid;
  if (given("--out")) config.out = flags.out;
  if (given("--clarke-steps")) config.plan.clarke.steps = parse_steps(flags.clarke_steps);
  if (given("--clarke-probes")) config.plan.clarke.probes = flags.clarke_probes;
  if (given("--subdiff-radius")) config.plan.subdiff_radius = flags.subdiff_radius;
  if (given("--subdiff-count")) config.plan.subdiff_count = flags.subdiff_count;
  if (given("--workers")) config.plan.workers = flags.workers;
  if (given("--timing")) config.timing = true;
  if (given("--x")) config.x = parse_vector(flags.x);
  if (given("--y")) config.y = parse_vector(flags.y);
  // A function given on the command line replaces a corpus entry from the file
  // and vice versa.
  if (given("--function") && !given("--corpus")) config.corpus.reset();
  if (given("--corpus") && !given("--function")) config.function.reset();
  return config;
}

void add_common(CLI::App& cmd, Flags& flags) {
  cmd.add_option("--function", flags.function, "Function in the expression language, e.g. \"x2/x1\"");
  cmd.add_option("--dim", flags.dim, "Dimension of a --function");
  cmd.add_option("--corpus", flags.corpus, "Corpus entry name");
  cmd.add_option("--region", flags.region, "Region, e.g. \"x1 > 0.05, box(0..2, -1..1)\"");
  cmd.add_option("--properties", flags.properties, "Comma-separated property names or 'all'");
  cmd.add_option("--samples", flags.samples, "Number of sampled pairs");
  cmd.add_option("--lambda-grid", flags.lambda_grid, "Size of the lambda grid");
  cmd.add_option("--seed", flags.seed, "Random seed (fallback: GENCVX_SEED, then 42)");
  cmd.add_option("--out", flags.out, "Output file (default: stdout)");
  cmd.add_option("--clarke-steps", flags.clarke_steps, "Clarke step list \"a,b,...\" or \"first:last:count\"");
  cmd.add_option("--clarke-probes", flags.clarke_probes, "Probes per Clarke scale");
  cmd.add_option("--subdiff-radius", flags.subdiff_radius, "Gradient sampling radius");
  cmd.add_option("--subdiff-count", flags.subdiff_count, "Gradient samples per estimate");
  cmd.add_option("--config", flags.config, "JSON config file; explicit flags override its fields");
  cmd.add_option("--workers", flags.workers, "Worker threads (results do not depend on it)");
  cmd.add_flag("--timing", "Record elapsed time in the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sample-based classifier for generalized convexity properties"};
  app.set_version_flag("--version", std::string(gencvx::kToolVersion));
  app.require_subcommand(1);

  Flags flags;
  CLI::App* analyze = app.add_subcommand("analyze", "Classify one function and write a JSON report");
  CLI::App* bcurve = app.add_subcommand("bcurve", "Write b(lambda) along a segment as CSV");
  CLI::App* corpus = app.add_subcommand("corpus", "Classify every corpus entry against its labels");
  for (CLI::App* cmd : {analyze, bcurve, corpus}) add_common(*cmd, flags);
  bcurve->add_option("--x", flags.x, "Segment start, comma-separated");
  bcurve->add_option("--y", flags.y, "Segment end, comma-separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? gencvx::kExitOk : gencvx::kExitError;
  }

  try {
    if (analyze->parsed()) return gencvx::cmd_analyze(build_config(*analyze, flags), std::cout, std::cerr);
    if (bcurve->parsed()) return gencvx::cmd_bcurve(build_config(*bcurve, flags), std::cout, std::cerr);
    if (corpus->parsed()) return gencvx::cmd_corpus(build_config(*corpus, flags), std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return gencvx::kExitError;
}
