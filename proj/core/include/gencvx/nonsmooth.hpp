#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "gencvx/function.hpp"
#include "gencvx/region.hpp"

namespace gencvx {

/// Discretisation of the Clarke limsup: at step t_k the difference quotient
/// [f(y + t_k v) − f(y)] / t_k is maximised over `probes` base points y drawn
/// from ball(x, neighborhood · t_k).
struct ClarkeScheme {
  Vector steps = geometric_steps(1e-2, 1e-6, 9);
  double neighborhood = 10.0;
  std::size_t probes = 64;
  std::uint64_t seed = 0;

  // Throws ConfigError unless steps are positive and strictly decreasing,
  // neighborhood > 0 and probes >= 8.
  void validate() const;

  // `count` values from `first` down to `last`, equally spaced in log scale.
  static Vector geometric_steps(double first, double last, std::size_t count);
};

struct SubdifferentialEstimate {
  std::vector<Vector> generators;  // nonempty
  double radius = 0.0;
  bool at_kink = false;
  // Largest pairwise distance among the raw sampled gradients.
  double spread = 0.0;

  SubdifferentialEstimate negated() const;
};

inline constexpr double kCoherenceThreshold = 1e-3;
inline constexpr double kDuplicateTolerance = 1e-12;

// Estimate of f⁰(x; v): the maximum of the per-scale maxima over the three
// finest steps. Probes leaving the region are redrawn up to 100 times, after
// which the scale is skipped. Throws EstimationError when every scale is
// skipped and DomainError for v = 0.
double clarke_directional(const FunctionHandle& f, const Region& region, const Point& x,
                          std::span<const double> v, const ClarkeScheme& scheme);

// Gradient sampling in ball(x, radius). Gradients come from the handle's
// exact/AD gradient where it is not at a kink, otherwise from central
// differences with step radius/100. A coherent set (spread ≤ 1e-3) collapses
// to the single gradient at x. Throws EstimationError when more than half of
// the gradient evaluations fail.
SubdifferentialEstimate subdifferential(const FunctionHandle& f, const Region& region, const Point& x,
                                        double radius, std::size_t count, std::uint64_t seed);

// One-sided derivative along v: quotients at t ∈ {1e-3, 1e-4, 1e-5}
// extrapolated to t = 0 by a least-squares line in t.
double directional_derivative(const FunctionHandle& f, const Region& region, const Point& x,
                              std::span<const double> v);

Vector central_difference_gradient(const FunctionHandle& f, const Point& x, double step);

}  // namespace gencvx
