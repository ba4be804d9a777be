#include "gencvx/function.hpp"

#include <cmath>

#include "gencvx/errors.hpp"

namespace gencvx {

namespace {

constexpr std::array<std::pair<Property, std::string_view>, 9> kNames = {{
    {Property::pseudoconvex, "pseudoconvex"},
    {Property::pseudoconcave, "pseudoconcave"},
    {Property::pseudolinear, "pseudolinear"},
    {Property::quasiconvex, "quasiconvex"},
    {Property::quasiconcave, "quasiconcave"},
    {Property::quasilinear, "quasilinear"},
    {Property::semistrictly_quasiconvex, "semistrictly-quasiconvex"},
    {Property::semistrictly_quasiconcave, "semistrictly-quasiconcave"},
    {Property::semistrictly_quasilinear, "semistrictly-quasilinear"},
}};

}  // namespace

std::string_view to_string(Property p) {
  for (const auto& [prop, name] : kNames) {
    if (prop == p) return name;
  }
  return "unknown";
}

std::optional<Property> property_from_string(std::string_view name) {
  for (const auto& [prop, n] : kNames) {
    if (n == name) return prop;
  }
  return std::nullopt;
}

FunctionHandle::FunctionHandle(std::string name, std::size_t dimension, Evaluator evaluate,
                               std::optional<GradientFn> gradient, Smoothness smoothness)
    : name_(std::move(name)),
      dimension_(dimension),
      evaluate_(std::move(evaluate)),
      gradient_(std::move(gradient)),
      smoothness_(smoothness) {
  if (dimension_ == 0) throw DomainError("function dimension must be positive");
  if (!evaluate_) throw DomainError("function needs an evaluator");
}

FunctionHandle FunctionHandle::from_expression(std::string name, const Expr& expr, std::size_t dimension) {
  if (expr.max_variable() > dimension) throw DomainError("expression uses a variable beyond its dimension");
  return FunctionHandle(
      std::move(name), dimension, [expr](std::span<const double> x) { return evaluate(expr, x); },
      GradientFn([expr](std::span<const double> x) {
        DualValue d = eval_dual(expr, x);
        return GradientSample{std::move(d.derivative), d.nonsmooth_point};
      }),
      expr.has_kinks() ? Smoothness::locally_lipschitz : Smoothness::smooth);
}

double FunctionHandle::operator()(std::span<const double> x) const {
  if (x.size() != dimension_) throw DomainError("point dimension does not match function dimension");
  const double v = evaluate_(x);
  if (!std::isfinite(v)) throw EvaluationError(name_ + " is not finite at " + to_string(x));
  return v;
}

std::optional<GradientSample> FunctionHandle::gradient(const Point& x) const {
  if (!gradient_) return std::nullopt;
  if (x.dimension() != dimension_) throw DomainError("point dimension does not match function dimension");
  GradientSample g = (*gradient_)(x.coords());
  if (g.gradient.size() != dimension_) throw EvaluationError(name_ + ": gradient has wrong dimension");
  return g;
}

FunctionHandle FunctionHandle::negated() const {
  std::optional<GradientFn> grad;
  if (gradient_) {
    grad = [g = *gradient_](std::span<const double> x) {
      GradientSample s = g(x);
      for (double& c : s.gradient) c = -c;
      return s;
    };
  }
  return FunctionHandle(
      "-(" + name_ + ")", dimension_, [e = evaluate_](std::span<const double> x) { return -e(x); },
      std::move(grad), smoothness_);
}

Segment::Segment(Point x, Point y) : x_(std::move(x)), y_(std::move(y)) {
  if (x_.dimension() != y_.dimension()) throw DomainError("segment endpoints differ in dimension");
  if (x_ == y_) throw DomainError("degenerate segment: x == y");
}

Point Segment::at(double lambda) const {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("segment parameter outside [0, 1]");
  if (lambda == 1.0) return y_;
  Vector z(x_.dimension());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = x_[i] + lambda * (y_[i] - x_[i]);
  return Point(std::move(z));
}

Point segment_point(const Segment& seg, double lambda) { return seg.at(lambda); }

}  // namespace gencvx
