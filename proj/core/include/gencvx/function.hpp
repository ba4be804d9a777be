#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "gencvx/expression.hpp"
#include "gencvx/point.hpp"

namespace gencvx {

enum class Smoothness { smooth, locally_lipschitz };

enum class Property {
  pseudoconvex,
  pseudoconcave,
  pseudolinear,
  quasiconvex,
  quasiconcave,
  quasilinear,
  semistrictly_quasiconvex,
  semistrictly_quasiconcave,
  semistrictly_quasilinear,
};

inline constexpr std::array<Property, 9> kAllProperties = {
    Property::pseudoconvex,
    Property::pseudoconcave,
    Property::pseudolinear,
    Property::quasiconvex,
    Property::quasiconcave,
    Property::quasilinear,
    Property::semistrictly_quasiconvex,
    Property::semistrictly_quasiconcave,
    Property::semistrictly_quasilinear,
};

// Hyphenated names, e.g. "semistrictly-quasiconvex".
std::string_view to_string(Property p);
std::optional<Property> property_from_string(std::string_view name);

using PropertyLabels = std::map<Property, bool>;

struct GradientSample {
  Vector gradient;
  // The gradient is a one-sided convention at a kink, not a true gradient.
  bool nonsmooth_point = false;
};

/// Scalar function on R^n. Evaluation is pure and may be called concurrently.
class FunctionHandle {
 public:
  using Evaluator = std::function<double(std::span<const double>)>;
  using GradientFn = std::function<GradientSample(std::span<const double>)>;

  FunctionHandle(std::string name, std::size_t dimension, Evaluator evaluate,
                 std::optional<GradientFn> gradient, Smoothness smoothness);

  // Gradient by forward-mode AD; smoothness is inferred from the presence of
  // abs/min/max in the tree.
  static FunctionHandle from_expression(std::string name, const Expr& expr, std::size_t dimension);

  const std::string& name() const noexcept { return name_; }
  std::size_t dimension() const noexcept { return dimension_; }
  Smoothness smoothness() const noexcept { return smoothness_; }
  bool has_gradient() const noexcept { return gradient_.has_value(); }

  // Throws EvaluationError on a non-finite value, DomainError on a dimension
  // mismatch.
  double operator()(std::span<const double> x) const;
  double operator()(const Point& x) const { return (*this)(x.coords()); }

  std::optional<GradientSample> gradient(const Point& x) const;

  // x -> -f(x); values and gradients are exact negations.
  FunctionHandle negated() const;

 private:
  std::string name_;
  std::size_t dimension_;
  Evaluator evaluate_;
  std::optional<GradientFn> gradient_;
  Smoothness smoothness_;
};

/// z(λ) = x + λ(y − x) with x ≠ y.
class Segment {
 public:
  Segment(Point x, Point y);

  const Point& x() const noexcept { return x_; }
  const Point& y() const noexcept { return y_; }
  // Throws DomainError for λ outside [0, 1].
  Point at(double lambda) const;

 private:
  Point x_;
  Point y_;
};

Point segment_point(const Segment& seg, double lambda);

}  // namespace gencvx
