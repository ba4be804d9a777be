#include "gencvx/report.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>

#include "gencvx/errors.hpp"

namespace gencvx {

using json = nlohmann::ordered_json;

bool operator==(const RunConfig& a, const RunConfig& b) {
  const SamplingPlan& p = a.plan;
  const SamplingPlan& q = b.plan;
  return a.corpus == b.corpus && a.function == b.function && a.dimension == b.dimension && a.region == b.region &&
         a.properties == b.properties && a.out == b.out && a.timing == b.timing && a.x == b.x && a.y == b.y &&
         p.pair_count == q.pair_count && p.lambda_grid == q.lambda_grid &&
         p.refinement_rounds == q.refinement_rounds && p.seed == q.seed && p.clarke.steps == q.clarke.steps &&
         p.clarke.neighborhood == q.clarke.neighborhood && p.clarke.probes == q.clarke.probes &&
         p.clarke.seed == q.clarke.seed && p.subdiff_radius == q.subdiff_radius &&
         p.subdiff_count == q.subdiff_count && p.workers == q.workers && p.min_support == q.min_support &&
         p.refine_candidates == q.refine_candidates && p.refine_budget == q.refine_budget;
}

std::vector<std::string> standard_assumptions() {
  return {
      "Clarke-Rockafellar and upper subdifferentials are identified with the Clarke subdifferential; "
      "functions are assumed locally Lipschitz on the region.",
      "Subdifferentials are estimated by gradient sampling; conditions quantified over all subgradients are "
      "checked on the sampled generators, which suffices for conditions affine in the subgradient.",
      "holds-at-samples means no violation among the evaluated samples; it is not a proof over the continuum.",
      "Strict inequalities use the band 1e-7*(1+|f(x)|+|f(y)|); values between one and ten bands are "
      "reported as inconclusive.",
      "The open superset of the region is not modeled; samples keep at least the region margin from every face.",
  };
}

namespace {

[[noreturn]] void bad(const std::string& what) { throw ConfigError("report: " + what); }

template <class T>
T get(const json& j, const char* key) {
  if (!j.contains(key)) bad(std::string("missing key '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string("bad value for '") + key + "': " + e.what());
  }
}

template <class T>
std::optional<T> get_optional(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return get<T>(j, key);
}

json optional_json(const auto& v) {
  if (!v) return nullptr;
  return json(*v);
}

Property parse_property(const std::string& s) {
  if (auto p = property_from_string(s)) return *p;
  bad("unknown property '" + s + "'");
}

// --- config -----------------------------------------------------------------

constexpr std::string_view kConfigKeys[] = {
    "corpus",        "function",      "dim",         "region",          "properties",  "samples",
    "lambda_grid",   "refinement_rounds", "seed",    "clarke_steps",    "clarke_probes", "clarke_neighborhood",
    "subdiff_radius", "subdiff_count", "workers",    "out",             "timing",      "x",
    "y",
};

json config_json(const RunConfig& c) {
  json j;
  j["corpus"] = optional_json(c.corpus);
  j["function"] = optional_json(c.function);
  j["dim"] = c.dimension;
  j["region"] = optional_json(c.region);
  json props = json::array();
  for (Property p : c.properties) props.push_back(std::string(to_string(p)));
  j["properties"] = props;
  j["samples"] = c.plan.pair_count;
  j["lambda_grid"] = c.plan.lambda_grid;
  j["refinement_rounds"] = c.plan.refinement_rounds;
  j["seed"] = c.plan.seed;
  j["clarke_steps"] = c.plan.clarke.steps;
  j["clarke_probes"] = c.plan.clarke.probes;
  j["clarke_neighborhood"] = c.plan.clarke.neighborhood;
  j["subdiff_radius"] = c.plan.subdiff_radius;
  j["subdiff_count"] = c.plan.subdiff_count;
  j["workers"] = c.plan.workers;
  j["out"] = optional_json(c.out);
  j["timing"] = c.timing;
  j["x"] = optional_json(c.x);
  j["y"] = optional_json(c.y);
  return j;
}

RunConfig config_from(const json& j, std::vector<std::string>* present) {
  if (!j.is_object()) bad("configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(kConfigKeys), std::end(kConfigKeys), key) == std::end(kConfigKeys)) {
      bad("unknown configuration key '" + key + "'");
    }
    if (present) present->push_back(key);
  }
  RunConfig c;
  c.corpus = get_optional<std::string>(j, "corpus");
  c.function = get_optional<std::string>(j, "function");
  if (j.contains("dim")) c.dimension = get<std::size_t>(j, "dim");
  c.region = get_optional<std::string>(j, "region");
  if (j.contains("properties")) {
    c.properties.clear();
    const json& p = j.at("properties");
    if (p.is_string()) {
      const std::string s = p.get<std::string>();
      if (s == "all") {
        c.properties.assign(kAllProperties.begin(), kAllProperties.end());
      } else {
        c.properties.push_back(parse_property(s));
      }
    } else if (p.is_array()) {
      for (const json& e : p) {
        if (!e.is_string()) bad("properties must be names");
        c.properties.push_back(parse_property(e.get<std::string>()));
      }
    } else {
      bad("properties must be a list of names");
    }
  }
  if (j.contains("samples")) c.plan.pair_count = get<std::size_t>(j, "samples");
  if (j.contains("lambda_grid")) c.plan.lambda_grid = get<std::size_t>(j, "lambda_grid");
  if (j.contains("refinement_rounds")) c.plan.refinement_rounds = get<std::size_t>(j, "refinement_rounds");
  if (j.contains("seed")) c.plan.seed = get<std::uint64_t>(j, "seed");
  if (j.contains("clarke_steps")) c.plan.clarke.steps = get<Vector>(j, "clarke_steps");
  if (j.contains("clarke_probes")) c.plan.clarke.probes = get<std::size_t>(j, "clarke_probes");
  if (j.contains("clarke_neighborhood")) c.plan.clarke.neighborhood = get<double>(j, "clarke_neighborhood");
  if (j.contains("subdiff_radius")) c.plan.subdiff_radius = get<double>(j, "subdiff_radius");
  if (j.contains("subdiff_count")) c.plan.subdiff_count = get<std::size_t>(j, "subdiff_count");
  if (j.contains("workers")) c.plan.workers = get<std::size_t>(j, "workers");
  c.out = get_optional<std::string>(j, "out");
  if (j.contains("timing")) c.timing = get<bool>(j, "timing");
  c.x = get_optional<Vector>(j, "x");
  c.y = get_optional<Vector>(j, "y");
  return c;
}

// --- verdicts ---------------------------------------------------------------

json witness_json(const Witness& w) {
  json j;
  j["property"] = std::string(to_string(w.property));
  j["predicate"] = std::string(to_string(w.predicate));
  j["on_negation"] = w.on_negation;
  j["x"] = w.x.vector();
  j["y"] = w.y.vector();
  j["lambda"] = optional_json(w.lambda);
  j["generator"] = optional_json(w.generator);
  j["fx"] = w.fx;
  j["fy"] = w.fy;
  j["fz"] = optional_json(w.fz);
  j["relation"] = w.relation;
  j["residual"] = w.residual;
  j["seed_x"] = w.seed_x;
  j["seed_y"] = w.seed_y;
  return j;
}

Witness witness_from(const json& j) {
  Witness w;
  w.property = parse_property(get<std::string>(j, "property"));
  const auto pred = predicate_from_string(get<std::string>(j, "predicate"));
  if (!pred) bad("unknown predicate");
  w.predicate = *pred;
  w.on_negation = get<bool>(j, "on_negation");
  w.x = Point(get<Vector>(j, "x"));
  w.y = Point(get<Vector>(j, "y"));
  w.lambda = get_optional<double>(j, "lambda");
  w.generator = get_optional<Vector>(j, "generator");
  w.fx = get<double>(j, "fx");
  w.fy = get<double>(j, "fy");
  w.fz = get_optional<double>(j, "fz");
  w.relation = get<std::string>(j, "relation");
  w.residual = get<double>(j, "residual");
  w.seed_x = get<std::uint64_t>(j, "seed_x");
  w.seed_y = get<std::uint64_t>(j, "seed_y");
  return w;
}

json verdict_json(const PropertyVerdict& v) {
  json j;
  j["property"] = std::string(to_string(v.property));
  j["verdict"] = std::string(to_string(v.verdict));
  j["counts"] = {{"pass", v.counts.pass},
                 {"fail", v.counts.fail},
                 {"vacuous", v.counts.vacuous},
                 {"inconclusive", v.counts.inconclusive}};
  j["max_residual"] = v.max_residual;
  j["refined"] = v.refined;
  json ws = json::array();
  for (const Witness& w : v.witnesses) ws.push_back(witness_json(w));
  j["witnesses"] = ws;
  return j;
}

PropertyVerdict verdict_from(const json& j) {
  PropertyVerdict v;
  v.property = parse_property(get<std::string>(j, "property"));
  const auto verdict = verdict_from_string(get<std::string>(j, "verdict"));
  if (!verdict) bad("unknown verdict");
  v.verdict = *verdict;
  const json& c = j.at("counts");
  v.counts.pass = get<std::size_t>(c, "pass");
  v.counts.fail = get<std::size_t>(c, "fail");
  v.counts.vacuous = get<std::size_t>(c, "vacuous");
  v.counts.inconclusive = get<std::size_t>(c, "inconclusive");
  v.max_residual = get<double>(j, "max_residual");
  v.refined = get<std::size_t>(j, "refined");
  for (const json& w : j.at("witnesses")) v.witnesses.push_back(witness_from(w));
  return v;
}

json report_json(const Report& r) {
  json j;
  j["schema"] = r.schema;
  j["tool"] = {{"name", r.tool_name}, {"version", r.tool_version}};
  j["config"] = config_json(r.config);
  j["function"] = {{"name", r.function_name}, {"source", r.function_source}};
  j["region"] = r.region;
  j["assumptions"] = r.assumptions;
  json vs = json::array();
  for (const PropertyVerdict& v : r.verdicts) vs.push_back(verdict_json(v));
  j["verdicts"] = vs;
  j["clarke_audit"] = {{"points", r.clarke_audit.points},
                       {"checks", r.clarke_audit.checks},
                       {"violations", r.clarke_audit.violations}};
  if (r.elapsed_seconds) j["timing"] = {{"elapsed_seconds", *r.elapsed_seconds}};
  return j;
}

Report report_from(const json& j) {
  Report r;
  r.schema = get<std::string>(j, "schema");
  if (r.schema != kReportSchema) bad("unsupported schema '" + r.schema + "'");
  r.tool_name = get<std::string>(j.at("tool"), "name");
  r.tool_version = get<std::string>(j.at("tool"), "version");
  r.config = config_from(j.at("config"), nullptr);
  r.function_name = get<std::string>(j.at("function"), "name");
  r.function_source = get<std::string>(j.at("function"), "source");
  r.region = get<std::string>(j, "region");
  r.assumptions = get<std::vector<std::string>>(j, "assumptions");
  for (const json& v : j.at("verdicts")) r.verdicts.push_back(verdict_from(v));
  const json& a = j.at("clarke_audit");
  r.clarke_audit.points = get<std::size_t>(a, "points");
  r.clarke_audit.checks = get<std::size_t>(a, "checks");
  r.clarke_audit.violations = get<std::size_t>(a, "violations");
  if (j.contains("timing")) r.elapsed_seconds = get<double>(j.at("timing"), "elapsed_seconds");
  return r;
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string to_json(const Report& report) { return dump(report_json(report)); }

std::string to_json(const RunConfig& config) { return dump(config_json(config)); }

std::string to_json(const CorpusReport& report) {
  json j;
  j["schema"] = report.schema;
  j["exit_code"] = report.exit_code;
  j["inconclusive"] = report.inconclusive;
  json mm = json::array();
  for (const LabelMismatch& m : report.mismatches) {
    mm.push_back({{"function", m.function},
                  {"property", std::string(to_string(m.property))},
                  {"expected", m.expected},
                  {"verdict", std::string(to_string(m.verdict))}});
  }
  j["mismatches"] = mm;
  json lv = json::array();
  for (const LatticeViolation& v : report.lattice_violations) {
    lv.push_back({{"function", v.function},
                  {"antecedent", std::string(to_string(v.antecedent))},
                  {"consequent", std::string(to_string(v.consequent))}});
  }
  j["lattice_violations"] = lv;
  json es = json::array();
  for (const Report& r : report.entries) es.push_back(report_json(r));
  j["entries"] = es;
  return dump(j);
}

Report report_from_json(std::string_view text) {
  try {
    return report_from(parse_text(text));
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

CorpusReport corpus_report_from_json(std::string_view text) {
  try {
    const json j = parse_text(text);
    CorpusReport r;
    r.schema = get<std::string>(j, "schema");
    if (r.schema != kCorpusReportSchema) bad("unsupported schema '" + r.schema + "'");
    r.exit_code = get<int>(j, "exit_code");
    r.inconclusive = get<std::size_t>(j, "inconclusive");
    for (const json& m : j.at("mismatches")) {
      const auto verdict = verdict_from_string(get<std::string>(m, "verdict"));
      if (!verdict) bad("unknown verdict");
      r.mismatches.push_back({get<std::string>(m, "function"), parse_property(get<std::string>(m, "property")),
                              get<bool>(m, "expected"), *verdict});
    }
    for (const json& v : j.at("lattice_violations")) {
      r.lattice_violations.push_back({get<std::string>(v, "function"),
                                      parse_property(get<std::string>(v, "antecedent")),
                                      parse_property(get<std::string>(v, "consequent"))});
    }
    for (const json& e : j.at("entries")) r.entries.push_back(report_from(e));
    return r;
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

RunConfig config_from_json(std::string_view text, std::vector<std::string>* present) {
  try {
    return config_from(parse_text(text), present);
  } catch (const json::exception& e) {
    bad(e.what());
  }
}

}  // namespace gencvx
