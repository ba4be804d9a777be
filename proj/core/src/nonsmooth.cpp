#include "gencvx/nonsmooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gencvx/errors.hpp"

namespace gencvx {

namespace {

constexpr std::size_t kRedraws = 100;
constexpr std::size_t kFinestScales = 3;

double euclidean_distance(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double max_abs_difference(const Vector& a, const Vector& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace

void ClarkeScheme::validate() const {
  if (steps.empty()) throw ConfigError("clarke scheme: step schedule is empty");
  for (std::size_t k = 0; k < steps.size(); ++k) {
    if (!(steps[k] > 0.0) || !std::isfinite(steps[k])) throw ConfigError("clarke scheme: steps must be positive");
    if (k > 0 && !(steps[k] < steps[k - 1])) throw ConfigError("clarke scheme: steps must strictly decrease");
  }
  if (!(neighborhood > 0.0) || !std::isfinite(neighborhood)) {
    throw ConfigError("clarke scheme: neighborhood factor must be positive");
  }
  if (probes < 8) throw ConfigError("clarke scheme: at least 8 probes per scale");
}

Vector ClarkeScheme::geometric_steps(double first, double last, std::size_t count) {
  if (count == 0 || !(first > 0.0) || !(last > 0.0)) throw ConfigError("geometric steps: invalid range");
  if (count == 1) return {first};
  Vector out(count);
  const double a = std::log10(first);
  const double b = std::log10(last);
  for (std::size_t k = 0; k < count; ++k) {
    out[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(count - 1));
  }
  out.front() = first;
  out.back() = last;
  return out;
}

SubdifferentialEstimate SubdifferentialEstimate::negated() const {
  SubdifferentialEstimate out = *this;
  for (Vector& g : out.generators) {
    for (double& c : g) c = -c;
  }
  return out;
}

double clarke_directional(const FunctionHandle& f, const Region& region, const Point& x,
                          std::span<const double> v, const ClarkeScheme& scheme) {
  scheme.validate();
  if (norm(v) == 0.0) throw DomainError("clarke_directional: direction must be nonzero");
  const std::size_t n = x.dimension();
  Rng rng(scheme.seed);
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  // Only the finest scales enter the result, so coarser ones are not probed.
  const std::size_t first = scheme.steps.size() > kFinestScales ? scheme.steps.size() - kFinestScales : 0;
  for (std::size_t k = first; k < scheme.steps.size(); ++k) {
    const double t = scheme.steps[k];
    const double delta = scheme.neighborhood * t;
    double scale_max = -std::numeric_limits<double>::infinity();
    bool skipped = false;
    for (std::size_t m = 0; m < scheme.probes && !skipped; ++m) {
      std::size_t tries = 0;
      for (;;) {
        const Point y = offset(x, rng.in_ball(n, delta), 1.0);
        const Point yt = offset(y, v, t);
        if (region.contains(y) && region.contains(yt)) {
          scale_max = std::max(scale_max, (f(yt) - f(y)) / t);
          break;
        }
        if (++tries >= kRedraws) {
          skipped = true;
          break;
        }
      }
    }
    if (skipped) continue;
    best = std::max(best, scale_max);
    any = true;
  }
  if (!any) throw EstimationError("clarke_directional: insufficient interior room at " + to_string(x.coords()));
  return best;
}

Vector central_difference_gradient(const FunctionHandle& f, const Point& x, double step) {
  Vector g(x.dimension());
  Vector e(x.dimension(), 0.0);
  for (std::size_t i = 0; i < g.size(); ++i) {
    e[i] = 1.0;
    g[i] = (f(offset(x, e, step)) - f(offset(x, e, -step))) / (2.0 * step);
    e[i] = 0.0;
  }
  return g;
}

SubdifferentialEstimate subdifferential(const FunctionHandle& f, const Region& region, const Point& x,
                                        double radius, std::size_t count, std::uint64_t seed) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("subdifferential: radius must be positive");
  if (count == 0) throw DomainError("subdifferential: count must be positive");
  if (region.slack(x) < radius * 1.01) throw DomainError("subdifferential: ball leaves the region");
  const std::size_t n = x.dimension();
  const double fd_step = radius / 100.0;

  // Returns nullopt when the evaluation fails.
  auto gradient_at = [&](const Point& p, bool& flagged) -> std::optional<Vector> {
    try {
      if (auto g = f.gradient(p)) {
        flagged = g->nonsmooth_point;
        if (!flagged) return std::move(g->gradient);
      } else {
        flagged = false;
      }
      return central_difference_gradient(f, p, fd_step);
    } catch (const EvaluationError&) {
      return std::nullopt;
    }
  };

  Rng rng(seed);
  std::vector<Vector> raw;
  std::size_t failures = 0;
  bool center_flagged = false;
  std::optional<Vector> center = gradient_at(x, center_flagged);
  if (!center) ++failures;
  for (std::size_t i = 0; i < count; ++i) {
    const Point p = offset(x, rng.in_ball(n, radius), 1.0);
    bool flagged = false;
    if (auto g = gradient_at(p, flagged)) {
      raw.push_back(std::move(*g));
    } else {
      ++failures;
    }
  }
  if (2 * failures > count + 1) throw EstimationError("subdifferential: gradient evaluation failed at most probes");

  SubdifferentialEstimate est;
  est.radius = radius;
  std::vector<Vector> all = raw;
  if (center) all.push_back(*center);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) est.spread = std::max(est.spread, euclidean_distance(all[i], all[j]));
  }
  est.at_kink = est.spread > kCoherenceThreshold || center_flagged;

  if (!est.at_kink && center) {
    est.generators.push_back(std::move(*center));
    return est;
  }
  // At a kink the conventional one-sided gradient at x is not itself sampled
  // information, so it only enters when no probe produced a gradient.
  if (center && (!center_flagged || raw.empty())) raw.insert(raw.begin(), std::move(*center));
  for (Vector& g : raw) {
    const bool duplicate = std::any_of(est.generators.begin(), est.generators.end(), [&](const Vector& h) {
      return max_abs_difference(g, h) <= kDuplicateTolerance;
    });
    if (!duplicate) est.generators.push_back(std::move(g));
  }
  if (est.generators.empty()) throw EstimationError("subdifferential: no usable gradients");
  return est;
}

double directional_derivative(const FunctionHandle& f, const Region& region, const Point& x,
                              std::span<const double> v) {
  if (norm(v) == 0.0) throw DomainError("directional_derivative: direction must be nonzero");
  static constexpr double kSteps[] = {1e-3, 1e-4, 1e-5};
  const double fx = f(x);
  double st = 0.0, sq = 0.0, stt = 0.0, stq = 0.0;
  for (double t : kSteps) {
    const Point p = offset(x, v, t);
    if (!region.contains(p)) throw EstimationError("directional_derivative: insufficient interior room");
    const double q = (f(p) - fx) / t;
    st += t;
    sq += q;
    stt += t * t;
    stq += t * q;
  }
  const double m = static_cast<double>(std::size(kSteps));
  const double slope = (m * stq - st * sq) / (m * stt - st * st);
  return (sq - slope * st) / m;
}

}  // namespace gencvx
