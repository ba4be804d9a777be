#pragma once

#include <optional>
#include <span>

#include "gencvx/campaign.hpp"

namespace gencvx::detail {

bool uses_subdifferential(Predicate p);
bool uses_segment(Predicate p);

// A predicate result together with what a witness needs to record.
struct Evaluated {
  CheckResult result;
  std::optional<Vector> generator;  // offending generator on fail
  double fx = 0.0;                  // values of the function the predicate ran on
  double fy = 0.0;
};

Evaluated evaluate(const FunctionHandle& f, const FunctionHandle& negated, const Region& region,
                   const SamplingPlan& plan, PredicateUse use, const Point& x, const Point& y,
                   std::uint64_t seed_x, std::uint64_t seed_y, std::span<const double> lambdas);

// Like evaluate() but with estimates of f at x and y supplied by the caller.
Evaluated run_checked(const FunctionHandle& f, const FunctionHandle& negated, const Region& region,
                      const SamplingPlan& plan, PredicateUse use, const PairSample& s,
                      const SubdifferentialEstimate* sx, const SubdifferentialEstimate* sy, std::uint64_t seed_x,
                      std::uint64_t seed_y, std::span<const double> lambdas);

// Estimate at the plan's radius; nullopt when estimation fails.
std::optional<SubdifferentialEstimate> try_estimate(const FunctionHandle& f, const Region& region,
                                                    const SamplingPlan& plan, const Point& x,
                                                    std::uint64_t seed);

Witness make_witness(Property property, PredicateUse use, const Point& x, const Point& y, std::uint64_t seed_x,
                     std::uint64_t seed_y, const Evaluated& e);

}  // namespace gencvx::detail
