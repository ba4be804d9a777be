#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gencvx/function.hpp"
#include "gencvx/nonsmooth.hpp"
#include "gencvx/region.hpp"
#include "gencvx/tolerance.hpp"

namespace gencvx {

enum class Outcome { pass, vacuous, fail, inconclusive };
std::string_view to_string(Outcome o);

/// Result of one predicate on one sample.
///
/// `residual` is set on fail and always exceeds ten bands: for implications it
/// is the premise gap, for plain relations the amount of violation.
/// `score` is the refinement objective: the residual on fail, otherwise a
/// nonpositive distance to the failure region.
struct CheckResult {
  Outcome outcome = Outcome::vacuous;
  double residual = 0.0;
  double score = -std::numeric_limits<double>::infinity();
  std::optional<std::size_t> generator;    // index into ∂f(x)
  std::optional<std::size_t> generator_y;  // index into ∂f(y)
  std::optional<double> lambda;
  double fz = std::numeric_limits<double>::quiet_NaN();
  std::string relation;
};

// Evaluated endpoints of a pair; x ≠ y.
struct PairSample {
  Point x;
  Point y;
  double fx;
  double fy;
};

PairSample make_pair_sample(const FunctionHandle& f, Point x, Point y);

// Swaps the roles of x and y.
PairSample reversed(const PairSample& s);

// `size` equally spaced values on [0, 1], endpoints included.
Vector lambda_grid(std::size_t size);

// --- pair predicates --------------------------------------------------------

// f(y) < f(x) ⇒ ⟨x*, y − x⟩ < 0 for every generator x*.
CheckResult check_pseudoconvex_pair(const PairSample& s, const SubdifferentialEstimate& sx);

// f(y) ≤ f(x) ⇒ ⟨x*, y − x⟩ ≤ 0 for every generator x*.
CheckResult check_weak_monotone_pair(const PairSample& s, const SubdifferentialEstimate& sx);

struct PValue {
  double p = 1.0;
  double pairing = 0.0;  // ⟨x*, y − x⟩
  bool band = false;     // |pairing| ≤ ε_strict, so p = 1 by convention
  Truth positive = Truth::yes;
};

// p = (f(y) − f(x)) / ⟨x*, y − x⟩, or 1 when the pairing is inside the band.
PValue compute_p(double fx, double fy, double pairing);
PValue compute_p(const PairSample& s, std::span<const double> generator);

// f(y) − f(x) = p·⟨x*, y − x⟩ with p > 0, per generator.
CheckResult verify_p_identity(const PairSample& s, const SubdifferentialEstimate& sx);

// S = p(x,y,x*)⟨x*, y − x⟩ + p(y,x,y*)⟨y*, x − y⟩ over all generator pairs.
CheckResult check_symmetric_equality(const PairSample& s, const SubdifferentialEstimate& sx,
                                     const SubdifferentialEstimate& sy);

// S ≤ 0 with p from compute_p where it is positive and p = 1 otherwise. A pass
// is consistent with pseudoconvexity; it is not a certificate.
CheckResult check_symmetric_inequality(const PairSample& s, const SubdifferentialEstimate& sx,
                                       const SubdifferentialEstimate& sy);

// --- segment predicates -----------------------------------------------------
// `lambdas` may include 0 and 1; only interior values are tested.

CheckResult check_quasiconvex_segment(const FunctionHandle& f, const PairSample& s,
                                      std::span<const double> lambdas);
CheckResult check_semistrict_qcvx_segment(const FunctionHandle& f, const PairSample& s,
                                          std::span<const double> lambdas);
// f(y) < f(x) ⇒ f(y) < f(z(λ)) < f(x).
CheckResult check_interlacing(const FunctionHandle& f, const PairSample& s, std::span<const double> lambdas);

// --- interpolation coefficient b --------------------------------------------

struct BRecord {
  Point x;
  Point y;
  double lambda = 0.0;
  double fx = 0.0;
  double fy = 0.0;
  double fz = 0.0;
  double b = 1.0;
  double lambda_b = 0.0;
  bool degenerate = false;  // |f(y) − f(x)| ≤ ε_strict, b = 1
  bool strict = false;      // 0 < λb < 1
  bool weak = false;        // 0 < b ≤ 1/λ
  bool boundary = false;    // λb = 1 within the band
  Truth strict_truth = Truth::no;
  Truth weak_truth = Truth::no;
};

// λ ∈ (0, 1).
BRecord compute_b(const FunctionHandle& f, const PairSample& s, double lambda);
BRecord compute_b(const PairSample& s, double lambda, double fz);

enum class BBound { weak, strict };

// On degenerate pairs the identity f(z) = λb f(y) + (1 − λb) f(x) with b = 1 is
// checked instead of the bounds.
CheckResult check_b_bounds(const FunctionHandle& f, const PairSample& s, std::span<const double> lambdas,
                           BBound bound);

struct BCrossCheck {
  Outcome outcome = Outcome::inconclusive;
  double b_direct = 0.0;
  std::vector<double> b_generators;
  double max_deviation = 0.0;  // max |b_ξ − b_direct|
  double spread = 0.0;         // max |b_ξ − b_ξ'|
  std::string note;
};

// b recomputed from generators ξ of ∂f(z(λ)) through q = 1/p.
BCrossCheck cross_check_b_via_subdifferential(const FunctionHandle& f, const PairSample& s, double lambda,
                                              const SubdifferentialEstimate& sz, double tolerance = 1e-6);

struct QLimit {
  double limit = 0.0;
  bool converged = false;
  std::optional<double> closed_form;  // ⟨∇f(x), y − x⟩ / (f(y) − f(x))
  Vector schedule;
  Vector b_values;
};

inline constexpr double kDefaultQSchedule[] = {1e-1, 1e-2, 1e-3, 1e-4};

// Polynomial (Richardson–Neville) extrapolation of b(x, y, λ) to λ = 0.
// Throws DomainError when f(y) is inside the equality band of f(x).
QLimit estimate_q_limit(const FunctionHandle& f, const PairSample& s,
                        std::span<const double> schedule = kDefaultQSchedule);

// --- kernel conditions ------------------------------------------------------

// ⟨∇f(x), y − x⟩ = 0 ⇒ f(y) = f(x).
CheckResult check_gradient_kernel(const PairSample& s, std::span<const double> gradient);

struct KernelPairCheck {
  CheckResult combined;
  Outcome lower = Outcome::vacuous;  // ⟨ξ, y − x⟩ = 0 ⇒ f(y) ≥ f(x), ξ ∈ ∂f(x)
  Outcome upper = Outcome::vacuous;  // ⟨η, y − x⟩ = 0 ⇒ f(y) ≤ f(x), η ∈ ∂(−f)(x)
};

KernelPairCheck check_subdiff_kernel_pair(const PairSample& s, const SubdifferentialEstimate& sx,
                                          const SubdifferentialEstimate& sx_negated);

// Orthogonal projection of y onto {p : ⟨g, p − x⟩ = 0}, pulled toward x until
// it lies in the sampling interior. nullopt when no usable point remains.
std::optional<Point> project_to_kernel(const Region& region, const Point& x, const Point& y,
                                       std::span<const double> g);

}  // namespace gencvx
