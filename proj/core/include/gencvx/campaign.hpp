#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gencvx/characterizations.hpp"
#include "gencvx/function.hpp"
#include "gencvx/nonsmooth.hpp"
#include "gencvx/region.hpp"

namespace gencvx {

enum class Predicate {
  pseudoconvex_pair,
  quasiconvex_segment,
  semistrict_segment,
  interlacing,
  p_identity,
  symmetric_equality,
  weak_b,
  strict_b,
  kernel,  // gradient kernel at smooth x, subdifferential kernel pair at a kink
};

std::string_view to_string(Predicate p);
std::optional<Predicate> predicate_from_string(std::string_view name);

// A predicate applied to f, or to −f when `on_negation` is set.
struct PredicateUse {
  Predicate predicate;
  bool on_negation = false;
  friend bool operator==(const PredicateUse&, const PredicateUse&) = default;
};

std::vector<PredicateUse> predicates_for(Property property);

struct SamplingPlan {
  std::size_t pair_count = 200;
  std::size_t lambda_grid = 33;
  std::size_t refinement_rounds = 3;
  std::uint64_t seed = 42;
  ClarkeScheme clarke;
  double subdiff_radius = 1e-6;
  std::size_t subdiff_count = 16;
  std::size_t workers = 1;
  // Non-vacuous passes required for holds-at-samples.
  std::size_t min_support = 10;
  std::size_t refine_candidates = 3;
  std::size_t refine_budget = 600;  // predicate evaluations per round

  // Throws ConfigError on nonpositive counts or an invalid Clarke scheme.
  void validate() const;
};

/// A concrete violated implication. `fx`, `fy`, `fz` are values of the
/// function the predicate ran on (−f when `on_negation`). Replaying with the
/// same plan reproduces the fail and the residual.
struct Witness {
  Property property = Property::pseudoconvex;
  Predicate predicate = Predicate::pseudoconvex_pair;
  bool on_negation = false;
  Point x{0.0};
  Point y{0.0};
  std::optional<double> lambda;
  std::optional<Vector> generator;
  double fx = 0.0;
  double fy = 0.0;
  std::optional<double> fz;
  std::string relation;
  double residual = 0.0;
  std::uint64_t seed_x = 0;
  std::uint64_t seed_y = 0;

  friend bool operator==(const Witness&, const Witness&) = default;
};

enum class Verdict { holds_at_samples, refuted, inconclusive };
std::string_view to_string(Verdict v);
std::optional<Verdict> verdict_from_string(std::string_view name);

struct OutcomeCounts {
  std::size_t pass = 0;
  std::size_t fail = 0;
  std::size_t vacuous = 0;
  std::size_t inconclusive = 0;

  void add(Outcome o);
  friend bool operator==(const OutcomeCounts&, const OutcomeCounts&) = default;
};

struct PropertyVerdict {
  Property property = Property::pseudoconvex;
  Verdict verdict = Verdict::inconclusive;
  OutcomeCounts counts;
  double max_residual = 0.0;
  std::size_t refined = 0;  // candidates turned into witnesses by refinement
  std::vector<Witness> witnesses;

  friend bool operator==(const PropertyVerdict&, const PropertyVerdict&) = default;
};

struct ClarkeAudit {
  std::size_t points = 0;
  std::size_t checks = 0;
  std::size_t violations = 0;
  friend bool operator==(const ClarkeAudit&, const ClarkeAudit&) = default;
};

struct Classification {
  std::vector<PropertyVerdict> verdicts;
  // Sampled generators g against the Clarke estimate: ⟨g, ±e_i⟩ ≤ f⁰(x; ±e_i).
  ClarkeAudit clarke_audit;
};

std::vector<PropertyVerdict> classify(const FunctionHandle& f, const Region& region,
                                      std::span<const Property> properties, const SamplingPlan& plan);

Classification classify_with_diagnostics(const FunctionHandle& f, const Region& region,
                                         std::span<const Property> properties, const SamplingPlan& plan);

// One predicate at one sample. Subdifferentials of f are estimated at x and y
// with the given seeds and the plan's radius and count. Estimation failures
// yield an inconclusive result.
CheckResult evaluate_predicate(const FunctionHandle& f, const Region& region, const SamplingPlan& plan,
                               PredicateUse use, const Point& x, const Point& y, std::uint64_t seed_x,
                               std::uint64_t seed_y, std::span<const double> lambdas);

CheckResult replay(const FunctionHandle& f, const Region& region, const SamplingPlan& plan, const Witness& w);

struct RefinementResult {
  std::optional<Witness> witness;  // set when the refined sample fails
  Point x{0.0};
  Point y{0.0};
  std::optional<double> lambda;
  CheckResult result;
  // Best score after the initial evaluation and after every round.
  std::vector<double> score_history;
};

// Pattern search over (x, y, λ) maximising the predicate's score. Steps start
// at a dyadic fraction of the box width and halve after an unproductive cycle;
// only improvements are accepted, so the score history is nondecreasing.
RefinementResult refine_counterexample(const FunctionHandle& f, const Region& region, const SamplingPlan& plan,
                                       Property property, PredicateUse use, const Point& x, const Point& y,
                                       std::optional<double> lambda, std::uint64_t seed_x, std::uint64_t seed_y,
                                       std::size_t rounds);

struct LatticeEdge {
  Property antecedent;
  Property consequent;
};

const std::vector<LatticeEdge>& implication_lattice();

struct LatticeViolation {
  std::string function;
  Property antecedent;
  Property consequent;
  friend bool operator==(const LatticeViolation&, const LatticeViolation&) = default;
};

using NamedVerdicts = std::pair<std::string, std::vector<PropertyVerdict>>;

// Antecedent holds-at-samples while the consequent is refuted.
std::vector<LatticeViolation> check_implication_lattice(std::span<const NamedVerdicts> verdicts);

}  // namespace gencvx
