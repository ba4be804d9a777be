#include "gencvx/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>
#include <tuple>

#include "campaign_internal.hpp"
#include "gencvx/errors.hpp"

namespace gencvx {

namespace {

constexpr std::array<std::pair<Predicate, std::string_view>, 9> kPredicateNames = {{
    {Predicate::pseudoconvex_pair, "pseudoconvex-pair"},
    {Predicate::quasiconvex_segment, "quasiconvex-segment"},
    {Predicate::semistrict_segment, "semistrict-segment"},
    {Predicate::interlacing, "interlacing"},
    {Predicate::p_identity, "p-identity"},
    {Predicate::symmetric_equality, "symmetric-equality"},
    {Predicate::weak_b, "weak-b"},
    {Predicate::strict_b, "strict-b"},
    {Predicate::kernel, "kernel"},
}};

constexpr std::size_t kMaxWitnesses = 5;
constexpr std::size_t kAuditPoints = 8;
constexpr double kAuditTolerance = 5e-2;
// Every tenth pair moves along a single coordinate axis.
constexpr std::size_t kAxisPairPeriod = 10;

}  // namespace

std::string_view to_string(Predicate p) {
  for (const auto& [pred, name] : kPredicateNames) {
    if (pred == p) return name;
  }
  return "unknown";
}

std::optional<Predicate> predicate_from_string(std::string_view name) {
  for (const auto& [pred, n] : kPredicateNames) {
    if (n == name) return pred;
  }
  return std::nullopt;
}

std::vector<PredicateUse> predicates_for(Property property) {
  using P = Predicate;
  switch (property) {
    case Property::pseudoconvex: return {{P::pseudoconvex_pair, false}};
    case Property::pseudoconcave: return {{P::pseudoconvex_pair, true}};
    case Property::pseudolinear:
      return {{P::pseudoconvex_pair, false}, {P::pseudoconvex_pair, true}, {P::p_identity, false},
              {P::symmetric_equality, false}, {P::weak_b, false},          {P::kernel, false}};
    case Property::quasiconvex: return {{P::quasiconvex_segment, false}};
    case Property::quasiconcave: return {{P::quasiconvex_segment, true}};
    case Property::quasilinear: return {{P::quasiconvex_segment, false}, {P::quasiconvex_segment, true}};
    case Property::semistrictly_quasiconvex: return {{P::semistrict_segment, false}};
    case Property::semistrictly_quasiconcave: return {{P::semistrict_segment, true}};
    case Property::semistrictly_quasilinear: return {{P::interlacing, false}, {P::strict_b, false}};
  }
  return {};
}

void SamplingPlan::validate() const {
  if (pair_count == 0) throw ConfigError("sampling plan: pair count must be positive");
  if (lambda_grid < 3) throw ConfigError("sampling plan: lambda grid needs at least 3 points");
  if (!(subdiff_radius > 0.0) || !std::isfinite(subdiff_radius)) {
    throw ConfigError("sampling plan: subdifferential radius must be positive");
  }
  if (subdiff_count == 0) throw ConfigError("sampling plan: subdifferential count must be positive");
  if (workers == 0) throw ConfigError("sampling plan: workers must be positive");
  if (min_support == 0) throw ConfigError("sampling plan: minimum support must be positive");
  if (refine_budget == 0) throw ConfigError("sampling plan: refinement budget must be positive");
  clarke.validate();
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::holds_at_samples: return "holds-at-samples";
    case Verdict::refuted: return "refuted";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "unknown";
}

std::optional<Verdict> verdict_from_string(std::string_view name) {
  for (Verdict v : {Verdict::holds_at_samples, Verdict::refuted, Verdict::inconclusive}) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

void OutcomeCounts::add(Outcome o) {
  switch (o) {
    case Outcome::pass: ++pass; break;
    case Outcome::fail: ++fail; break;
    case Outcome::vacuous: ++vacuous; break;
    case Outcome::inconclusive: ++inconclusive; break;
  }
}

// ---------------------------------------------------------------------------

namespace detail {

bool uses_subdifferential(Predicate p) {
  return p == Predicate::pseudoconvex_pair || p == Predicate::p_identity || p == Predicate::symmetric_equality ||
         p == Predicate::kernel;
}

bool uses_segment(Predicate p) {
  return p == Predicate::quasiconvex_segment || p == Predicate::semistrict_segment ||
         p == Predicate::interlacing || p == Predicate::weak_b || p == Predicate::strict_b;
}

namespace {

bool uses_y_estimate(Predicate p) { return p == Predicate::symmetric_equality; }

SubdifferentialEstimate estimate(const FunctionHandle& f, const Region& region, const SamplingPlan& plan,
                                 const Point& x, std::uint64_t seed, double radius) {
  const std::size_t count = std::max(plan.subdiff_count, 2 * x.dimension() + 1);
  return subdifferential(f, region, x, radius, count, seed);
}

Evaluated inconclusive(std::string why) {
  Evaluated e;
  e.result.outcome = Outcome::inconclusive;
  e.result.relation = std::move(why);
  return e;
}

// `s`, `sx`, `sy` describe f; negation is applied here.
Evaluated run(const FunctionHandle& f, const FunctionHandle& negated, PredicateUse use, const PairSample& s,
              const SubdifferentialEstimate* sx, const SubdifferentialEstimate* sy,
              std::span<const double> lambdas) {
  const FunctionHandle& g = use.on_negation ? negated : f;
  const PairSample t = use.on_negation ? PairSample{s.x, s.y, -s.fx, -s.fy} : s;
  std::optional<SubdifferentialEstimate> nx;
  std::optional<SubdifferentialEstimate> ny;
  if (use.on_negation) {
    if (sx) sx = &nx.emplace(sx->negated());
    if (sy) sy = &ny.emplace(sy->negated());
  }

  Evaluated e;
  e.fx = t.fx;
  e.fy = t.fy;
  switch (use.predicate) {
    case Predicate::pseudoconvex_pair: e.result = check_pseudoconvex_pair(t, *sx); break;
    case Predicate::p_identity: e.result = verify_p_identity(t, *sx); break;
    case Predicate::symmetric_equality: e.result = check_symmetric_equality(t, *sx, *sy); break;
    case Predicate::kernel:
      e.result = sx->at_kink ? check_subdiff_kernel_pair(t, *sx, sx->negated()).combined
                             : check_gradient_kernel(t, sx->generators.front());
      break;
    case Predicate::quasiconvex_segment: e.result = check_quasiconvex_segment(g, t, lambdas); break;
    case Predicate::semistrict_segment: e.result = check_semistrict_qcvx_segment(g, t, lambdas); break;
    case Predicate::interlacing: e.result = check_interlacing(g, t, lambdas); break;
    case Predicate::weak_b: e.result = check_b_bounds(g, t, lambdas, BBound::weak); break;
    case Predicate::strict_b: e.result = check_b_bounds(g, t, lambdas, BBound::strict); break;
  }
  if (e.result.outcome == Outcome::fail && e.result.generator && sx) {
    e.generator = sx->generators.at(*e.result.generator);
  }
  return e;
}

bool kink_involved(PredicateUse use, const SubdifferentialEstimate* sx, const SubdifferentialEstimate* sy) {
  if (!uses_subdifferential(use.predicate)) return false;
  return (sx && sx->at_kink) || (uses_y_estimate(use.predicate) && sy && sy->at_kink);
}

// A fail that relied on a kink-flagged estimate must persist at a hundredfold
// smaller sampling radius.
Evaluated confirm(const FunctionHandle& f, const FunctionHandle& negated, const Region& region,
                  const SamplingPlan& plan, PredicateUse use, const PairSample& s, std::uint64_t seed_x,
                  std::uint64_t seed_y, std::span<const double> lambdas, Evaluated first) {
  const double radius = plan.subdiff_radius / 100.0;
  try {
    const SubdifferentialEstimate cx = estimate(f, region, plan, s.x, seed_x, radius);
    std::optional<SubdifferentialEstimate> cy;
    if (uses_y_estimate(use.predicate)) cy = estimate(f, region, plan, s.y, seed_y, radius);
    const Evaluated again = run(f, negated, use, s, &cx, cy ? &*cy : nullptr, lambdas);
    if (again.result.outcome == Outcome::fail) return first;
  } catch (const std::runtime_error&) {
  } catch (const DomainError&) {
  }
  return inconclusive("fail at a kink not confirmed at a smaller radius");
}

}  // namespace

Evaluated run_checked(const FunctionHandle& f, const FunctionHandle& negated, const Region& region,
                      const SamplingPlan& plan, PredicateUse use, const PairSample& s,
                      const SubdifferentialEstimate* sx, const SubdifferentialEstimate* sy, std::uint64_t seed_x,
                      std::uint64_t seed_y, std::span<const double> lambdas) {
  if (uses_subdifferential(use.predicate) && (!sx || (uses_y_estimate(use.predicate) && !sy))) {
    return inconclusive("subdifferential estimate unavailable");
  }
  try {
    Evaluated e = run(f, negated, use, s, sx, sy, lambdas);
    if (e.result.outcome == Outcome::fail && kink_involved(use, sx, sy)) {
      return confirm(f, negated, region, plan, use, s, seed_x, seed_y, lambdas, std::move(e));
    }
    return e;
  } catch (const EvaluationError& err) {
    return inconclusive(err.what());
  }
}

std::optional<SubdifferentialEstimate> try_estimate(const FunctionHandle& f, const Region& region,
                                                    const SamplingPlan& plan, const Point& x,
                                                    std::uint64_t seed) {
  try {
    return estimate(f, region, plan, x, seed, plan.subdiff_radius);
  } catch (const EstimationError&) {
  } catch (const EvaluationError&) {
  } catch (const DomainError&) {
  }
  return std::nullopt;
}

Evaluated evaluate(const FunctionHandle& f, const FunctionHandle& negated, const Region& region,
                   const SamplingPlan& plan, PredicateUse use, const Point& x, const Point& y,
                   std::uint64_t seed_x, std::uint64_t seed_y, std::span<const double> lambdas) {
  PairSample s{x, y, 0.0, 0.0};
  try {
    s = make_pair_sample(f, x, y);
  } catch (const EvaluationError& err) {
    return inconclusive(err.what());
  }
  std::optional<SubdifferentialEstimate> sx;
  std::optional<SubdifferentialEstimate> sy;
  if (uses_subdifferential(use.predicate)) {
    sx = try_estimate(f, region, plan, x, seed_x);
    if (uses_y_estimate(use.predicate)) sy = try_estimate(f, region, plan, y, seed_y);
  }
  return run_checked(f, negated, region, plan, use, s, sx ? &*sx : nullptr, sy ? &*sy : nullptr, seed_x, seed_y,
                     lambdas);
}

Witness make_witness(Property property, PredicateUse use, const Point& x, const Point& y, std::uint64_t seed_x,
                     std::uint64_t seed_y, const Evaluated& e) {
  Witness w;
  w.property = property;
  w.predicate = use.predicate;
  w.on_negation = use.on_negation;
  w.x = x;
  w.y = y;
  w.lambda = e.result.lambda;
  w.generator = e.generator;
  w.fx = e.fx;
  w.fy = e.fy;
  if (!std::isnan(e.result.fz)) w.fz = e.result.fz;
  w.relation = e.result.relation;
  w.residual = e.result.residual;
  w.seed_x = seed_x;
  w.seed_y = seed_y;
  return w;
}

}  // namespace detail

// ---------------------------------------------------------------------------

CheckResult evaluate_predicate(const FunctionHandle& f, const Region& region, const SamplingPlan& plan,
                               PredicateUse use, const Point& x, const Point& y, std::uint64_t seed_x,
                               std::uint64_t seed_y, std::span<const double> lambdas) {
  return detail::evaluate(f, f.negated(), region, plan, use, x, y, seed_x, seed_y, lambdas).result;
}

CheckResult replay(const FunctionHandle& f, const Region& region, const SamplingPlan& plan, const Witness& w) {
  Vector lambdas;
  if (w.lambda) {
    lambdas.push_back(*w.lambda);
  } else if (detail::uses_segment(w.predicate)) {
    lambdas = lambda_grid(plan.lambda_grid);
  }
  return evaluate_predicate(f, region, plan, {w.predicate, w.on_negation}, w.x, w.y, w.seed_x, w.seed_y, lambdas);
}

namespace {

template <class Fn>
void parallel_for(std::size_t count, std::size_t workers, Fn&& fn) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

struct Evaluation {
  std::size_t use = 0;  // index into the campaign's use list
  Point x{0.0};
  Point y{0.0};
  std::uint64_t seed_x = 0;
  std::uint64_t seed_y = 0;
  detail::Evaluated value;
};

struct PairRecord {
  Point x{0.0};
  std::uint64_t seed_x = 0;
  std::optional<SubdifferentialEstimate> sx;
  std::vector<Evaluation> evaluations;
};

Point draw_partner(const Region& region, const Point& x, Rng& rng, std::size_t index) {
  if (index % kAxisPairPeriod == kAxisPairPeriod - 1) {
    const std::size_t j = rng.below(x.dimension());
    const Interval iv = region.box()[j];
    Vector c = x.vector();
    for (int attempt = 0; attempt < 1000; ++attempt) {
      c[j] = rng.uniform(iv.lo, iv.hi);
      Point y(c);
      if (!(y == x) && region.in_sampling_interior(y)) return y;
    }
  }
  for (;;) {
    Point y = region.draw(rng);
    if (!(y == x)) return y;
  }
}

class Campaign {
 public:
  Campaign(const FunctionHandle& f, const Region& region, std::span<const Property> properties,
           const SamplingPlan& plan)
      : f_(f), negated_(f.negated()), region_(region), plan_(plan), grid_(lambda_grid(plan.lambda_grid)) {
    plan_.validate();
    if (f.dimension() != region.dimension()) throw DomainError("function and region dimensions differ");
    for (Property p : properties) {
      if (std::find(properties_.begin(), properties_.end(), p) != properties_.end()) continue;
      properties_.push_back(p);
      for (PredicateUse u : predicates_for(p)) {
        if (std::find(uses_.begin(), uses_.end(), u) == uses_.end()) uses_.push_back(u);
      }
    }
    for (PredicateUse u : uses_) {
      need_estimates_ = need_estimates_ || detail::uses_subdifferential(u.predicate);
      need_kernel_ = need_kernel_ || u.predicate == Predicate::kernel;
    }
  }

  Classification run() {
    std::vector<PairRecord> records(plan_.pair_count);
    parallel_for(plan_.pair_count, plan_.workers, [&](std::size_t i) { records[i] = sample_pair(i); });

    Classification out;
    for (Property p : properties_) out.verdicts.push_back(aggregate(p, records));
    out.clarke_audit = audit(records);
    return out;
  }

 private:
  PairRecord sample_pair(std::size_t i) const {
    Rng rng = Rng::stream(plan_.seed, i);
    PairRecord rec;
    rec.x = region_.draw(rng);
    const Point y = draw_partner(region_, rec.x, rng, i);
    rec.seed_x = mix_seed(plan_.seed, 3 * i + 1);
    const std::uint64_t seed_y = mix_seed(plan_.seed, 3 * i + 2);
    const std::uint64_t seed_k = mix_seed(plan_.seed, 3 * i + 3);

    PairSample s{rec.x, y, 0.0, 0.0};
    try {
      s = make_pair_sample(f_, rec.x, y);
    } catch (const EvaluationError& err) {
      for (std::size_t u = 0; u < uses_.size(); ++u) {
        for (int orient = 0; orient < 2; ++orient) {
          Evaluation ev{u, orient ? y : rec.x, orient ? rec.x : y, 0, 0, {}};
          ev.value.result.outcome = Outcome::inconclusive;
          ev.value.result.relation = err.what();
          rec.evaluations.push_back(std::move(ev));
        }
      }
      return rec;
    }
    std::optional<SubdifferentialEstimate> sy;
    if (need_estimates_) {
      rec.sx = detail::try_estimate(f_, region_, plan_, rec.x, rec.seed_x);
      sy = detail::try_estimate(f_, region_, plan_, y, seed_y);
    }

    for (int orient = 0; orient < 2; ++orient) {
      const PairSample ps = orient ? reversed(s) : s;
      const SubdifferentialEstimate* ex = orient ? (sy ? &*sy : nullptr) : (rec.sx ? &*rec.sx : nullptr);
      const SubdifferentialEstimate* ey = orient ? (rec.sx ? &*rec.sx : nullptr) : (sy ? &*sy : nullptr);
      const std::uint64_t kx = orient ? seed_y : rec.seed_x;
      const std::uint64_t ky = orient ? rec.seed_x : seed_y;
      for (std::size_t u = 0; u < uses_.size(); ++u) {
        const Vector lambdas = detail::uses_segment(uses_[u].predicate) ? grid_ : Vector{};
        rec.evaluations.push_back(Evaluation{
            u, ps.x, ps.y, kx, ky,
            detail::run_checked(f_, negated_, region_, plan_, uses_[u], ps, ex, ey, kx, ky, lambdas)});
      }
      if (need_kernel_ && ex) kernel_probe(rec, ps, *ex, kx, seed_k, rng);
    }
    return rec;
  }

  // Moves y onto the kernel hyperplane of a generator at x so that the
  // premise of the kernel conditions is actually met.
  void kernel_probe(PairRecord& rec, const PairSample& ps, const SubdifferentialEstimate& ex, std::uint64_t kx,
                    std::uint64_t ky, Rng& rng) const {
    const Vector& g = ex.generators[ex.at_kink ? rng.below(ex.generators.size()) : 0];
    const std::optional<Point> yk = project_to_kernel(region_, ps.x, ps.y, g);
    if (!yk) return;
    const std::size_t u = static_cast<std::size_t>(
        std::find(uses_.begin(), uses_.end(), PredicateUse{Predicate::kernel, false}) - uses_.begin());
    PairSample pk{ps.x, *yk, ps.fx, 0.0};
    try {
      pk.fy = f_(*yk);
    } catch (const EvaluationError&) {
      return;
    }
    rec.evaluations.push_back(Evaluation{
        u, ps.x, *yk, kx, ky,
        detail::run_checked(f_, negated_, region_, plan_, uses_[u], pk, &ex, nullptr, kx, ky, {})});
  }

  PropertyVerdict aggregate(Property property, const std::vector<PairRecord>& records) const {
    PropertyVerdict v;
    v.property = property;
    std::vector<std::size_t> mine;
    for (PredicateUse u : predicates_for(property)) {
      mine.push_back(static_cast<std::size_t>(std::find(uses_.begin(), uses_.end(), u) - uses_.begin()));
    }
    auto belongs = [&](const Evaluation& e) { return std::find(mine.begin(), mine.end(), e.use) != mine.end(); };

    std::vector<Witness> witnesses;
    std::vector<const Evaluation*> candidates;
    for (const PairRecord& rec : records) {
      for (const Evaluation& e : rec.evaluations) {
        if (!belongs(e)) continue;
        v.counts.add(e.value.result.outcome);
        if (e.value.result.outcome == Outcome::fail) {
          witnesses.push_back(detail::make_witness(property, uses_[e.use], e.x, e.y, e.seed_x, e.seed_y, e.value));
        } else if (std::isfinite(e.value.result.score)) {
          candidates.push_back(&e);
        }
      }
    }

    if (witnesses.empty() && plan_.refinement_rounds > 0) {
      std::stable_sort(candidates.begin(), candidates.end(), [](const Evaluation* a, const Evaluation* b) {
        return a->value.result.score > b->value.result.score;
      });
      const std::size_t n = std::min(candidates.size(), plan_.refine_candidates);
      for (std::size_t k = 0; k < n; ++k) {
        const Evaluation& c = *candidates[k];
        const RefinementResult r = refine_counterexample(f_, region_, plan_, property, uses_[c.use], c.x, c.y,
                                                         c.value.result.lambda, c.seed_x, c.seed_y,
                                                         plan_.refinement_rounds);
        if (r.witness) {
          witnesses.push_back(*r.witness);
          ++v.counts.fail;
          ++v.refined;
        }
      }
    }

    for (const Witness& w : witnesses) v.max_residual = std::max(v.max_residual, w.residual);
    auto key = [](const Witness& w) {
      return std::make_tuple(to_string(w.predicate), w.on_negation, w.x.vector(), w.y.vector(),
                             w.lambda.value_or(-1.0));
    };
    std::stable_sort(witnesses.begin(), witnesses.end(), [&](const Witness& a, const Witness& b) {
      if (a.residual != b.residual) return a.residual > b.residual;
      return key(a) < key(b);
    });
    if (witnesses.size() > kMaxWitnesses) witnesses.resize(kMaxWitnesses);
    std::stable_sort(witnesses.begin(), witnesses.end(),
                     [&](const Witness& a, const Witness& b) { return key(a) < key(b); });
    v.witnesses = std::move(witnesses);

    if (v.counts.fail > 0) {
      v.verdict = Verdict::refuted;
    } else if (v.counts.pass >= plan_.min_support) {
      v.verdict = Verdict::holds_at_samples;
    } else {
      v.verdict = Verdict::inconclusive;
    }
    return v;
  }

  ClarkeAudit audit(std::vector<PairRecord>& records) const {
    ClarkeAudit a;
    const std::size_t n = f_.dimension();
    for (std::size_t i = 0; i < std::min(kAuditPoints, records.size()); ++i) {
      PairRecord& rec = records[i];
      if (!rec.sx) rec.sx = detail::try_estimate(f_, region_, plan_, rec.x, rec.seed_x);
      if (!rec.sx) continue;
      ++a.points;
      for (std::size_t k = 0; k < 2 * n; ++k) {
        Vector v(n, 0.0);
        v[k / 2] = k % 2 ? -1.0 : 1.0;
        ClarkeScheme scheme = plan_.clarke;
        scheme.seed = mix_seed(rec.seed_x, k);
        double upper = 0.0;
        try {
          upper = clarke_directional(f_, region_, rec.x, v, scheme);
        } catch (const std::runtime_error&) {
          continue;
        }
        for (const Vector& g : rec.sx->generators) {
          ++a.checks;
          if (dot(g, v) > upper + kAuditTolerance * (1.0 + norm(g))) ++a.violations;
        }
      }
    }
    return a;
  }

  const FunctionHandle& f_;
  FunctionHandle negated_;
  const Region& region_;
  SamplingPlan plan_;
  Vector grid_;
  std::vector<Property> properties_;
  std::vector<PredicateUse> uses_;
  bool need_estimates_ = false;
  bool need_kernel_ = false;
};

}  // namespace

Classification classify_with_diagnostics(const FunctionHandle& f, const Region& region,
                                         std::span<const Property> properties, const SamplingPlan& plan) {
  return Campaign(f, region, properties, plan).run();
}

std::vector<PropertyVerdict> classify(const FunctionHandle& f, const Region& region,
                                      std::span<const Property> properties, const SamplingPlan& plan) {
  return classify_with_diagnostics(f, region, properties, plan).verdicts;
}

}  // namespace gencvx
