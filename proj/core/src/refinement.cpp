#include <algorithm>
#include <cmath>

#include "campaign_internal.hpp"
#include "gencvx/campaign.hpp"
#include "gencvx/errors.hpp"

namespace gencvx {

namespace {

constexpr double kLambdaStep = 0.125;

double dyadic_step(double width) { return std::exp2(std::floor(std::log2(width / 8.0))); }

}  // namespace

RefinementResult refine_counterexample(const FunctionHandle& f, const Region& region, const SamplingPlan& plan,
                                       Property property, PredicateUse use, const Point& x, const Point& y,
                                       std::optional<double> lambda, std::uint64_t seed_x, std::uint64_t seed_y,
                                       std::size_t rounds) {
  plan.validate();
  const std::size_t n = x.dimension();
  const FunctionHandle negated = f.negated();
  const bool segment = detail::uses_segment(use.predicate);
  const double lambda_lo = 1.0 / static_cast<double>(plan.lambda_grid - 1);
  const double lambda_hi = 1.0 - lambda_lo;
  if (segment) lambda = std::clamp(lambda.value_or(0.5), lambda_lo, lambda_hi);

  // Decision vector: x (n), y (n), then λ for segment predicates.
  Vector v(2 * n + (segment ? 1 : 0));
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = x[i];
    v[n + i] = y[i];
  }
  if (segment) v.back() = *lambda;

  // Sampling interior up to rounding, so starts placed exactly on the margin
  // are accepted.
  const double slack_floor = region.margin() * (1.0 - 1e-9);
  auto interior = [&](const Point& p) { return region.contains(p) && region.slack(p) >= slack_floor; };
  auto feasible = [&](const Vector& c) {
    const Point px(Vector(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n)));
    const Point py(Vector(c.begin() + static_cast<std::ptrdiff_t>(n), c.begin() + static_cast<std::ptrdiff_t>(2 * n)));
    if (px == py || !interior(px) || !interior(py)) return false;
    return !segment || (c.back() >= lambda_lo && c.back() <= lambda_hi);
  };
  auto evaluate = [&](const Vector& c) {
    const Point px(Vector(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(n)));
    const Point py(Vector(c.begin() + static_cast<std::ptrdiff_t>(n), c.begin() + static_cast<std::ptrdiff_t>(2 * n)));
    Vector lambdas;
    if (segment) lambdas.push_back(c.back());
    return detail::evaluate(f, negated, region, plan, use, px, py, seed_x, seed_y, lambdas);
  };

  if (!feasible(v)) throw DomainError("refinement: starting sample is outside the sampling interior");
  detail::Evaluated best = evaluate(v);
  RefinementResult out;
  out.score_history.push_back(best.result.score);

  Vector initial(v.size());
  for (std::size_t i = 0; i < n; ++i) {
    const double w = region.box()[i].hi - region.box()[i].lo;
    initial[i] = dyadic_step(w);
    initial[n + i] = dyadic_step(w);
  }
  if (segment) initial.back() = kLambdaStep;

  for (std::size_t round = 0; round < rounds; ++round) {
    Vector step = initial;
    std::size_t spent = 0;
    while (spent < plan.refine_budget) {
      bool improved = false;
      for (std::size_t k = 0; k < v.size() && spent < plan.refine_budget; ++k) {
        for (double sign : {1.0, -1.0}) {
          Vector c = v;
          c[k] += sign * step[k];
          if (c[k] == v[k] || !feasible(c)) continue;
          ++spent;
          detail::Evaluated e = evaluate(c);
          if (e.result.score > best.result.score) {
            best = std::move(e);
            v = std::move(c);
            improved = true;
            break;
          }
        }
      }
      if (improved) continue;
      bool alive = false;
      for (std::size_t k = 0; k < step.size(); ++k) {
        step[k] *= 0.5;
        alive = alive || step[k] > 1e-15 * (1.0 + std::fabs(v[k]));
      }
      if (!alive) break;
    }
    out.score_history.push_back(best.result.score);
  }

  out.x = Point(Vector(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)));
  out.y = Point(Vector(v.begin() + static_cast<std::ptrdiff_t>(n), v.begin() + static_cast<std::ptrdiff_t>(2 * n)));
  if (segment) out.lambda = v.back();
  out.result = best.result;
  if (best.result.outcome == Outcome::fail) {
    out.witness = detail::make_witness(property, use, out.x, out.y, seed_x, seed_y, best);
  }
  return out;
}

}  // namespace gencvx
