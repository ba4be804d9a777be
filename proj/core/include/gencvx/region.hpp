#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gencvx/point.hpp"
#include "gencvx/random.hpp"

namespace gencvx {

enum class Relation { less, less_equal };

// <normal, x> relation bound
struct AffineConstraint {
  Vector normal;
  Relation relation = Relation::less_equal;
  double bound = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

/// Convex sampling region: an intersection of halfspaces inside a finite box.
///
/// Membership honours strict constraints exactly. Sampling is restricted to
/// points whose Euclidean distance to every face (halfspaces and box faces)
/// is at least `margin()`, which keeps evaluations away from the boundary of
/// the open set a function is defined on.
class Region {
 public:
  static constexpr double kDefaultMarginFraction = 0.05;

  // Throws DomainError on malformed input and RegionTooThin when the margin
  // interior is (numerically) empty.
  Region(std::vector<AffineConstraint> constraints, std::vector<Interval> box,
         std::optional<double> margin = std::nullopt);

  // Textual form: comma-separated items, e.g. "x1 > 0.05, box(0..2, -1..1)".
  // Items are linear constraints (`<`, `<=`, `>`, `>=`), exactly one
  // `box(lo..hi, ...)`, and optionally `margin(value)`. When `dimension` is
  // nonzero it must agree with the box.
  static Region parse(std::string_view text, std::size_t dimension = 0);

  std::size_t dimension() const noexcept { return box_.size(); }
  const std::vector<AffineConstraint>& constraints() const noexcept { return constraints_; }
  const std::vector<Interval>& box() const noexcept { return box_; }
  double margin() const noexcept { return margin_; }
  double diagonal() const noexcept;
  const std::string& text() const noexcept { return text_; }

  bool contains(const Point& p) const;
  // Halfspace constraints only; the box is a sampling bound, not a domain.
  bool satisfies_constraints(const Point& p) const;
  // Smallest Euclidean distance from p to any face; negative outside.
  double slack(const Point& p) const;
  bool in_sampling_interior(const Point& p) const;

  // Rejection sampling over the box. Deterministic for a fixed seed.
  std::vector<Point> sample(std::size_t count, std::uint64_t seed) const;
  // One rejection-sampled interior point drawn from `rng`.
  Point draw(Rng& rng) const;

  std::string canonical_text() const;

 private:
  std::vector<AffineConstraint> constraints_;
  std::vector<Interval> box_;
  double margin_ = 0.0;
  std::string text_;
};

}  // namespace gencvx
