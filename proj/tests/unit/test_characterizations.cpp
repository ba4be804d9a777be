#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gencvx/characterizations.hpp"
#include "gencvx/corpus.hpp"
#include "gencvx/errors.hpp"
#include "gencvx/expression.hpp"

namespace gencvx {
namespace {

FunctionHandle make(std::string_view src, std::size_t dim) {
  return FunctionHandle::from_expression(std::string(src), parse(src, dim), dim);
}

SubdifferentialEstimate gens(std::vector<Vector> g) {
  SubdifferentialEstimate s;
  s.generators = std::move(g);
  s.radius = 1e-6;
  return s;
}

PairSample pair(const FunctionHandle& f, Point x, Point y) { return make_pair_sample(f, std::move(x), std::move(y)); }

const FunctionHandle& fractional() {
  static const FunctionHandle f = make("x2/x1", 2);
  return f;
}
const FunctionHandle& affine() {
  static const FunctionHandle f = make("2*x1 - 3*x2 + 1", 2);
  return f;
}
const FunctionHandle& cube() {
  static const FunctionHandle f = make("x1^3", 1);
  return f;
}
const FunctionHandle& ramp() {
  static const FunctionHandle f = make("x1 + abs(x1)", 1);
  return f;
}

const Vector kGrid = lambda_grid(33);

TEST(LambdaGrid, IncludesEndpointsAndMidpoint) {
  ASSERT_EQ(kGrid.size(), 33u);
  EXPECT_EQ(kGrid.front(), 0.0);
  EXPECT_EQ(kGrid[16], 0.5);
  EXPECT_EQ(kGrid.back(), 1.0);
}

TEST(PseudoconvexPair, CubeFailsAtFlatPoint) {
  const auto r = check_pseudoconvex_pair(pair(cube(), Point{0.0}, Point{-1.0}), gens({{0.0}}));
  EXPECT_EQ(r.outcome, Outcome::fail);
  EXPECT_NEAR(r.residual, 1.0, 1e-12);
}

TEST(PseudoconvexPair, AffineAndAbsPass) {
  const auto s = pair(affine(), Point{0.5, 0.0}, Point{0.0, 0.5});
  EXPECT_EQ(check_pseudoconvex_pair(s, gens({{2.0, -3.0}})).outcome, Outcome::pass);
  const auto a = pair(make("abs(x1)", 1), Point{1.0}, Point{0.0});
  EXPECT_EQ(check_pseudoconvex_pair(a, gens({{1.0}})).outcome, Outcome::pass);
  // Premise false: the reverse orientation is vacuous.
  EXPECT_EQ(check_pseudoconvex_pair(reversed(a), gens({{-1.0}, {1.0}})).outcome, Outcome::vacuous);
}

TEST(WeakMonotonePair, EqualValuesAndFlatCube) {
  EXPECT_EQ(check_weak_monotone_pair(pair(fractional(), Point{1.0, 0.0}, Point{2.0, 0.0}), gens({{0.0, 1.0}})).outcome,
            Outcome::pass);
  EXPECT_EQ(check_weak_monotone_pair(pair(affine(), Point{0.0, 0.0}, Point{1.5, 1.0}), gens({{2.0, -3.0}})).outcome,
            Outcome::pass);
  EXPECT_EQ(check_weak_monotone_pair(pair(cube(), Point{0.0}, Point{-1.0}), gens({{0.0}})).outcome, Outcome::pass);
}

TEST(QuasiconvexSegment, ConvexPassesConcaveFails) {
  const FunctionHandle sq = make("x1^2", 1);
  EXPECT_NE(check_quasiconvex_segment(sq, pair(sq, Point{-1.0}, Point{1.0}), kGrid).outcome, Outcome::fail);
  const FunctionHandle cap = make("-x1^2", 1);
  const auto r = check_quasiconvex_segment(cap, pair(cap, Point{-1.0}, Point{1.0}), kGrid);
  EXPECT_EQ(r.outcome, Outcome::fail);
  ASSERT_TRUE(r.lambda);
  EXPECT_EQ(*r.lambda, 0.5);
  EXPECT_NEAR(r.residual, 1.0, 1e-12);
  EXPECT_EQ(check_quasiconvex_segment(fractional(), pair(fractional(), Point{1.0, 0.0}, Point{2.0, 2.0}), kGrid)
                .outcome,
            Outcome::pass);
}

TEST(SemistrictSegment, Examples) {
  EXPECT_EQ(check_semistrict_qcvx_segment(cube(), pair(cube(), Point{1.0}, Point{-1.0}), kGrid).outcome,
            Outcome::pass);
  const auto up = pair(ramp(), Point{-1.0}, Point{1.0});
  EXPECT_NE(check_semistrict_qcvx_segment(ramp(), up, kGrid).outcome, Outcome::fail);
  EXPECT_NE(check_semistrict_qcvx_segment(ramp(), reversed(up), kGrid).outcome, Outcome::fail);
  const FunctionHandle c = make("3 + 0*x1", 1);
  EXPECT_EQ(check_semistrict_qcvx_segment(c, pair(c, Point{-1.0}, Point{1.0}), kGrid).outcome, Outcome::vacuous);
}

TEST(Interlacing, Examples) {
  const double mid[] = {0.5};
  EXPECT_EQ(check_interlacing(cube(), pair(cube(), Point{1.0}, Point{-1.0}), mid).outcome, Outcome::pass);
  const auto r = check_interlacing(ramp(), pair(ramp(), Point{1.0}, Point{-1.0}), mid);
  EXPECT_EQ(r.outcome, Outcome::fail);
  EXPECT_EQ(r.lambda, 0.5);
  EXPECT_EQ(check_interlacing(affine(), pair(affine(), Point{0.0, 0.0}, Point{1.0, 1.0}), kGrid).outcome,
            Outcome::pass);
}

TEST(ComputeP, Examples) {
  const auto a = pair(affine(), Point{0.0, 0.0}, Point{0.3, -0.2});
  EXPECT_DOUBLE_EQ(compute_p(a, Vector{2.0, -3.0}).p, 1.0);
  const PValue p = compute_p(pair(fractional(), Point{1.0, 0.0}, Point{2.0, 2.0}), Vector{0.0, 1.0});
  EXPECT_EQ(p.p, 0.5);
  EXPECT_EQ(p.positive, Truth::yes);
  const PValue band = compute_p(0.0, 1.0, 1e-12);
  EXPECT_TRUE(band.band);
  EXPECT_EQ(band.p, 1.0);
}

TEST(PIdentity, Examples) {
  EXPECT_EQ(verify_p_identity(pair(fractional(), Point{1.0, 0.0}, Point{2.0, 2.0}), gens({{0.0, 1.0}})).outcome,
            Outcome::pass);
  const auto r = verify_p_identity(pair(cube(), Point{0.0}, Point{1.0}), gens({{0.0}}));
  EXPECT_EQ(r.outcome, Outcome::fail);
  EXPECT_NEAR(r.residual, 1.0, 1e-12);
  EXPECT_EQ(verify_p_identity(pair(affine(), Point{0.0, 0.0}, Point{0.5, 0.5}), gens({{2.0, -3.0}})).outcome,
            Outcome::pass);
}

// With p taken from compute_p the identity holds by construction.
TEST(PIdentity, ConstructionIsExactOnDyadicInputs) {
  const FunctionHandle f = make("x1^2 + x2", 2);
  const auto s = pair(f, Point{0.5, 0.25}, Point{1.5, -0.75});
  // Pairings 0.5 and 2 give p = 2 and p = 0.5.
  const auto r = verify_p_identity(s, gens({{1.0, 0.5}, {2.0, 0.0}}));
  EXPECT_EQ(r.outcome, Outcome::pass);
  EXPECT_EQ(r.residual, 0.0);
}

TEST(SymmetricEquality, Examples) {
  const auto s = pair(fractional(), Point{1.0, 0.0}, Point{2.0, 2.0});
  EXPECT_EQ(check_symmetric_equality(s, gens({{0.0, 1.0}}), gens({{-0.5, 0.5}})).outcome, Outcome::pass);
  const auto a = pair(affine(), Point{0.1, 0.2}, Point{-0.4, 0.9});
  EXPECT_EQ(check_symmetric_equality(a, gens({{2.0, -3.0}}), gens({{2.0, -3.0}})).outcome, Outcome::pass);
  const FunctionHandle sq = make("x1^2", 1);
  EXPECT_EQ(check_symmetric_equality(pair(sq, Point{-1.0}, Point{1.0}), gens({{-2.0}}), gens({{2.0}})).outcome,
            Outcome::fail);
}

TEST(SymmetricInequality, ConsistencyOnly) {
  const FunctionHandle sq = make("x1^2", 1);
  EXPECT_NE(check_symmetric_inequality(pair(sq, Point{-1.0}, Point{1.0}), gens({{-2.0}}), gens({{2.0}})).outcome,
            Outcome::fail);
  const FunctionHandle cap = make("-x1^2", 1);
  // p falls back to 1 and S = <2, 2> + <-2, -2> = 8 > 0: the concave cap is
  // not pseudoconvex.
  const auto c = check_symmetric_inequality(pair(cap, Point{-1.0}, Point{1.0}), gens({{2.0}}), gens({{-2.0}}));
  EXPECT_EQ(c.outcome, Outcome::fail);
  EXPECT_NEAR(c.residual, 8.0, 1e-12);
  const auto a = pair(affine(), Point{0.1, 0.2}, Point{-0.4, 0.9});
  EXPECT_NE(check_symmetric_inequality(a, gens({{2.0, -3.0}}), gens({{2.0, -3.0}})).outcome, Outcome::fail);
}

TEST(SymmetricEquality, VanishesOnSmoothPseudolinearCorpus) {
  for (const char* name : {"affine", "fractional", "arctan"}) {
    const CorpusEntry e = *find_corpus_entry(name);
    const auto pts = e.region.sample(60, 13);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      const auto s = make_pair_sample(e.function, pts[i], pts[i + 1]);
      const auto r = check_symmetric_equality(s, gens({e.function.gradient(pts[i])->gradient}),
                                              gens({e.function.gradient(pts[i + 1])->gradient}));
      EXPECT_EQ(r.outcome, Outcome::pass) << name;
      EXPECT_LE(std::abs(r.residual), 1e-12) << name;
    }
  }
}

TEST(ComputeB, FractionalMatchesClosedForm) {
  const auto s = pair(fractional(), Point{1.0, 0.0}, Point{2.0, 2.0});
  const BRecord r = compute_b(fractional(), s, 0.5);
  EXPECT_NEAR(r.b, 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(r.lambda_b, 2.0 / 3.0, 1e-15);
  EXPECT_TRUE(r.strict);
  EXPECT_TRUE(r.weak);
}

TEST(ComputeB, AffineAndCube) {
  const auto a = pair(affine(), Point{0.0, 0.0}, Point{1.0, 0.5});
  for (double l : {0.125, 0.5, 0.875}) {
    const BRecord r = compute_b(affine(), a, l);
    EXPECT_NEAR(r.b, 1.0, 1e-12);
    EXPECT_TRUE(r.strict && r.weak);
  }
  const BRecord c = compute_b(cube(), pair(cube(), Point{1.0}, Point{-1.0}), 0.5);
  EXPECT_EQ(c.b, 1.0);
  EXPECT_EQ(c.lambda_b, 0.5);
  EXPECT_TRUE(c.strict);
}

TEST(ComputeB, DegeneratePairHasUnitB) {
  const BRecord r = compute_b(fractional(), pair(fractional(), Point{1.0, 0.5}, Point{2.0, 1.0}), 0.3);
  EXPECT_TRUE(r.degenerate);
  EXPECT_EQ(r.b, 1.0);
}

TEST(ComputeB, StrictImpliesWeak) {
  for (const CorpusEntry& e : corpus()) {
    const auto pts = e.region.sample(40, 21);
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      const auto s = make_pair_sample(e.function, pts[i], pts[i + 1]);
      for (double l : lambda_grid(17)) {
        if (l == 0.0 || l == 1.0) continue;
        const BRecord r = compute_b(e.function, s, l);
        if (r.strict) {
          EXPECT_TRUE(r.weak) << e.function.name();
        }
      }
    }
  }
}

TEST(BBounds, CheckedOnCorpusOrientations) {
  const auto s = pair(ramp(), Point{1.0}, Point{-1.0});
  EXPECT_EQ(check_b_bounds(ramp(), s, kGrid, BBound::strict).outcome, Outcome::fail);
  EXPECT_EQ(check_b_bounds(cube(), pair(cube(), Point{1.0}, Point{-1.0}), kGrid, BBound::strict).outcome,
            Outcome::pass);
}

TEST(BCrossCheck, FractionalThroughMidpointGradient) {
  const auto s = pair(fractional(), Point{1.0, 0.0}, Point{2.0, 2.0});
  const auto r = cross_check_b_via_subdifferential(fractional(), s, 0.5, gens({{-4.0 / 9.0, 2.0 / 3.0}}));
  EXPECT_EQ(r.outcome, Outcome::pass);
  ASSERT_EQ(r.b_generators.size(), 1u);
  EXPECT_NEAR(r.b_generators[0], 4.0 / 3.0, 1e-12);
}

TEST(BCrossCheck, AffineAndDegenerate) {
  const auto a = pair(affine(), Point{0.0, 0.0}, Point{1.0, 0.5});
  EXPECT_EQ(cross_check_b_via_subdifferential(affine(), a, 0.25, gens({{2.0, -3.0}})).outcome, Outcome::pass);
  const auto d = pair(fractional(), Point{1.0, 0.5}, Point{2.0, 1.0});
  EXPECT_EQ(cross_check_b_via_subdifferential(fractional(), d, 0.5, gens({{-0.5 / 2.25, 1.0 / 1.5}})).outcome,
            Outcome::inconclusive);
}

TEST(QLimit, FractionalAffineArctan) {
  const QLimit f = estimate_q_limit(fractional(), pair(fractional(), Point{1.0, 0.0}, Point{2.0, 2.0}));
  EXPECT_NEAR(f.limit, 2.0, 1e-6);
  EXPECT_TRUE(f.converged);
  ASSERT_TRUE(f.closed_form);
  EXPECT_NEAR(*f.closed_form, 2.0, 1e-15);

  const QLimit a = estimate_q_limit(affine(), pair(affine(), Point{0.0, 0.0}, Point{1.0, 0.5}));
  EXPECT_NEAR(a.limit, 1.0, 1e-9);

  const FunctionHandle at = make("atan(x1)", 1);
  const QLimit t = estimate_q_limit(at, pair(at, Point{0.0}, Point{1.0}));
  EXPECT_NEAR(t.limit, 4.0 / std::numbers::pi, 1e-4);
  EXPECT_THROW(estimate_q_limit(fractional(), pair(fractional(), Point{1.0, 0.5}, Point{2.0, 1.0})), DomainError);
}

TEST(GradientKernel, Examples) {
  const auto r = check_gradient_kernel(pair(cube(), Point{0.0}, Point{0.5}), Vector{0.0});
  EXPECT_EQ(r.outcome, Outcome::fail);
  EXPECT_NEAR(r.residual, 0.125, 1e-15);
  EXPECT_EQ(check_gradient_kernel(pair(fractional(), Point{1.0, 0.0}, Point{2.0, 0.0}), Vector{0.0, 1.0}).outcome,
            Outcome::pass);
  EXPECT_EQ(check_gradient_kernel(pair(affine(), Point{0.0, 0.0}, Point{0.3, 0.2}), Vector{2.0, -3.0}).outcome,
            Outcome::pass);
}

TEST(SubdiffKernelPair, Examples) {
  const FunctionHandle pw = make("max(x1, 2*x1)", 1);
  const auto sx = gens({{1.0}, {2.0}});
  const auto k = check_subdiff_kernel_pair(pair(pw, Point{0.0}, Point{0.5}), sx, sx.negated());
  EXPECT_NE(k.combined.outcome, Outcome::fail);

  const auto c = gens({{0.0}});
  const auto f = check_subdiff_kernel_pair(pair(cube(), Point{0.0}, Point{-0.5}), c, c.negated());
  EXPECT_EQ(f.combined.outcome, Outcome::fail);
  EXPECT_EQ(f.lower, Outcome::fail);

  const auto a = gens({{2.0, -3.0}});
  EXPECT_EQ(check_subdiff_kernel_pair(pair(affine(), Point{0.0, 0.0}, Point{0.3, 0.2}), a, a.negated())
                .combined.outcome,
            Outcome::pass);
}

TEST(ProjectToKernel, LandsOnHyperplaneInsideRegion) {
  const Region r = Region::parse("box(-1..1, -1..1)");
  const Point x{0.2, 0.1};
  const Vector g{2.0, -3.0};
  const auto p = project_to_kernel(r, x, Point{0.8, 0.7}, g);
  ASSERT_TRUE(p);
  EXPECT_NEAR(dot(g, difference(*p, x)), 0.0, 1e-12);
  EXPECT_TRUE(r.in_sampling_interior(*p));
}

}  // namespace
}  // namespace gencvx
