#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "gencvx/campaign.hpp"
#include "gencvx/corpus.hpp"
#include "gencvx/errors.hpp"
#include "gencvx/expression.hpp"

namespace gencvx {
namespace {

FunctionHandle make(std::string_view src, std::size_t dim) {
  return FunctionHandle::from_expression(std::string(src), parse(src, dim), dim);
}

const PropertyVerdict& verdict_of(const std::vector<PropertyVerdict>& vs, Property p) {
  return *std::find_if(vs.begin(), vs.end(), [&](const PropertyVerdict& v) { return v.property == p; });
}

TEST(Predicates, NamesRoundTrip) {
  for (Predicate p : {Predicate::pseudoconvex_pair, Predicate::quasiconvex_segment, Predicate::semistrict_segment,
                      Predicate::interlacing, Predicate::p_identity, Predicate::symmetric_equality,
                      Predicate::weak_b, Predicate::strict_b, Predicate::kernel}) {
    EXPECT_EQ(predicate_from_string(to_string(p)), p);
  }
}

TEST(Predicates, ConcaveVariantsRunOnNegation) {
  const auto pccv = predicates_for(Property::pseudoconcave);
  ASSERT_EQ(pccv.size(), 1u);
  EXPECT_EQ(pccv[0], (PredicateUse{Predicate::pseudoconvex_pair, true}));
  const auto ql = predicates_for(Property::quasilinear);
  EXPECT_EQ(ql.size(), 2u);
  for (Property p : kAllProperties) EXPECT_FALSE(predicates_for(p).empty());
}

TEST(SamplingPlan, RejectsZeroCounts) {
  SamplingPlan plan;
  EXPECT_NO_THROW(plan.validate());
  plan.pair_count = 0;
  EXPECT_THROW(plan.validate(), ConfigError);
  plan = SamplingPlan{};
  plan.lambda_grid = 1;
  EXPECT_THROW(plan.validate(), ConfigError);
  plan = SamplingPlan{};
  plan.subdiff_radius = -1.0;
  EXPECT_THROW(plan.validate(), ConfigError);
}

TEST(Classify, FractionalHoldsEverywhere) {
  const CorpusEntry e = *find_corpus_entry("fractional");
  for (const PropertyVerdict& v : classify(e.function, e.region, kAllProperties, SamplingPlan{})) {
    EXPECT_EQ(v.verdict, Verdict::holds_at_samples) << to_string(v.property);
    EXPECT_TRUE(v.witnesses.empty());
    EXPECT_GE(v.counts.pass, SamplingPlan{}.min_support);
  }
}

TEST(Classify, CubeRefutedNearOrigin) {
  const CorpusEntry e = *find_corpus_entry("cubic");
  const auto vs = classify(e.function, e.region, kAllProperties, SamplingPlan{});
  const PropertyVerdict& pc = verdict_of(vs, Property::pseudoconvex);
  ASSERT_EQ(pc.verdict, Verdict::refuted);
  ASSERT_FALSE(pc.witnesses.empty());
  for (const Witness& w : pc.witnesses) EXPECT_LT(std::abs(w.x[0]), 1e-2);
  EXPECT_EQ(verdict_of(vs, Property::semistrictly_quasilinear).verdict, Verdict::holds_at_samples);
}

TEST(Classify, RampRefutesSemistrictConcavity) {
  const CorpusEntry e = *find_corpus_entry("ramp");
  const Property props[] = {Property::semistrictly_quasiconcave};
  const auto vs = classify(e.function, e.region, props, SamplingPlan{});
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].verdict, Verdict::refuted);
  for (const Witness& w : vs[0].witnesses) {
    // Some point of the segment crosses the flat half on the left of the kink.
    EXPECT_TRUE(w.x[0] < 0.0 || w.y[0] < 0.0);
  }
}

TEST(Classify, WitnessesReplay) {
  const SamplingPlan plan;
  for (const CorpusEntry& e : corpus()) {
    for (const PropertyVerdict& v : classify(e.function, e.region, kAllProperties, plan)) {
      EXPECT_EQ(v.verdict == Verdict::refuted, !v.witnesses.empty());
      EXPECT_LE(v.witnesses.size(), 5u);
      for (const Witness& w : v.witnesses) {
        const CheckResult r = replay(e.function, e.region, plan, w);
        EXPECT_EQ(r.outcome, Outcome::fail) << e.function.name() << ' ' << to_string(w.predicate);
        EXPECT_NEAR(r.residual, w.residual, 1e-12);
        EXPECT_GE(v.max_residual, w.residual);
      }
    }
  }
}

TEST(Classify, IndependentOfWorkerCount) {
  const CorpusEntry e = *find_corpus_entry("paraboloid");
  SamplingPlan one;
  SamplingPlan many;
  many.workers = 3;
  EXPECT_EQ(classify(e.function, e.region, kAllProperties, one), classify(e.function, e.region, kAllProperties, many));
}

TEST(Classify, StarvedPlanIsInconclusive) {
  const CorpusEntry e = *find_corpus_entry("affine");
  SamplingPlan plan;
  plan.pair_count = 1;
  const auto vs = classify(e.function, e.region, kAllProperties, plan);
  EXPECT_TRUE(std::any_of(vs.begin(), vs.end(), [](const auto& v) { return v.verdict == Verdict::inconclusive; }));
}

TEST(Classify, ClarkeAuditIsClean) {
  for (const CorpusEntry& e : corpus()) {
    const Classification c = classify_with_diagnostics(e.function, e.region, kAllProperties, SamplingPlan{});
    EXPECT_GT(c.clarke_audit.checks, 0u);
    EXPECT_EQ(c.clarke_audit.violations, 0u) << e.function.name();
  }
}

TEST(Refinement, CubeCandidateMovesTowardOrigin) {
  const CorpusEntry e = *find_corpus_entry("cubic");
  const SamplingPlan plan;
  const auto r = refine_counterexample(e.function, e.region, plan, Property::pseudoconvex,
                                       {Predicate::pseudoconvex_pair, false}, Point{0.1}, Point{-0.9}, std::nullopt,
                                       1, 2, plan.refinement_rounds);
  ASSERT_TRUE(r.witness);
  EXPECT_LT(std::abs(r.x[0]), 1e-2);
  EXPECT_TRUE(std::is_sorted(r.score_history.begin(), r.score_history.end()));
  EXPECT_GT(r.score_history.back(), r.score_history.front());
}

TEST(Refinement, AffineCandidateIsDiscarded) {
  const CorpusEntry e = *find_corpus_entry("affine");
  const SamplingPlan plan;
  const auto r = refine_counterexample(e.function, e.region, plan, Property::pseudoconvex,
                                       {Predicate::pseudoconvex_pair, false}, Point{0.3, 0.1}, Point{-0.2, 0.4},
                                       std::nullopt, 1, 2, plan.refinement_rounds);
  EXPECT_FALSE(r.witness);
}

TEST(Refinement, RampInterlacingResidualGrows) {
  const CorpusEntry e = *find_corpus_entry("ramp");
  const SamplingPlan plan;
  const PredicateUse use{Predicate::interlacing, false};
  const Point x{0.6};
  const Point y{-0.8};
  const double grid[] = {0.4};
  const CheckResult initial = evaluate_predicate(e.function, e.region, plan, use, x, y, 1, 2, grid);
  const auto r = refine_counterexample(e.function, e.region, plan, Property::semistrictly_quasiconcave, use, x, y,
                                       0.4, 1, 2, plan.refinement_rounds);
  ASSERT_TRUE(r.witness);
  EXPECT_GE(r.witness->residual, initial.outcome == Outcome::fail ? initial.residual : 0.0);
  EXPECT_TRUE(std::is_sorted(r.score_history.begin(), r.score_history.end()));
}

TEST(Lattice, HasFourteenEdges) { EXPECT_EQ(implication_lattice().size(), 14u); }

std::vector<PropertyVerdict> verdicts(std::initializer_list<std::pair<Property, Verdict>> items) {
  std::vector<PropertyVerdict> out;
  for (const auto& [p, v] : items) {
    PropertyVerdict pv;
    pv.property = p;
    pv.verdict = v;
    out.push_back(pv);
  }
  return out;
}

TEST(Lattice, InjectedFaultIsReported) {
  const NamedVerdicts bad{"bad", verdicts({{Property::pseudoconvex, Verdict::holds_at_samples},
                                           {Property::quasiconvex, Verdict::refuted}})};
  const auto v = check_implication_lattice(std::span(&bad, 1));
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0], (LatticeViolation{"bad", Property::pseudoconvex, Property::quasiconvex}));
}

TEST(Lattice, UnrelatedPropertiesAreNotViolations) {
  const NamedVerdicts sq{"paraboloid", verdicts({{Property::pseudoconvex, Verdict::holds_at_samples},
                                                 {Property::quasiconcave, Verdict::refuted}})};
  EXPECT_TRUE(check_implication_lattice(std::span(&sq, 1)).empty());
}

TEST(Lattice, CorpusIsConsistent) {
  std::vector<NamedVerdicts> all;
  for (const CorpusEntry& e : corpus()) {
    all.emplace_back(e.function.name(), classify(e.function, e.region, kAllProperties, SamplingPlan{}));
  }
  EXPECT_TRUE(check_implication_lattice(all).empty());
}

TEST(Classify, DslFunctionOnCustomRegion) {
  const FunctionHandle f = make("exp(x1) + x2", 2);
  const Region r = Region::parse("box(-1..1, -1..1)");
  const Property props[] = {Property::pseudolinear, Property::quasiconvex};
  const auto vs = classify(f, r, props, SamplingPlan{});
  EXPECT_EQ(vs[0].verdict, Verdict::refuted);
  EXPECT_EQ(vs[1].verdict, Verdict::holds_at_samples);
}

}  // namespace
}  // namespace gencvx
