#include "gencvx/characterizations.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gencvx/errors.hpp"

namespace gencvx {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double rho = kRelativeBand;
constexpr double kTen = kHysteresis;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Folds per-item outcomes of a quantified predicate. Among fails the largest
// residual is kept (the first on ties).
class Fold {
 public:
  bool failed() const noexcept { return failed_; }
  // Tags subsequent items so the best-scoring λ is reported on non-fails.
  void set_lambda(double l) noexcept { lambda_ = l; }

  template <class MakeFail>
  void implication(Truth premise, Truth consequent, double score, MakeFail&& make_fail) {
    if (score > best_) {
      best_ = score;
      best_lambda_ = lambda_;
    }
    if (premise == Truth::no) return;  // vacuous
    if (consequent == Truth::yes) {
      any_pass_ = true;
    } else if (consequent == Truth::no && premise == Truth::yes) {
      CheckResult r = make_fail();
      if (failed_ && !(r.residual > result_.residual)) return;
      result_ = std::move(r);
      result_.outcome = Outcome::fail;
      result_.score = result_.residual;
      failed_ = true;
    } else {
      any_unsure_ = true;
    }
  }

  template <class MakeFail>
  void relation(Truth holds, double score, MakeFail&& make_fail) {
    implication(Truth::yes, holds, score, std::forward<MakeFail>(make_fail));
  }

  CheckResult finish() {
    if (failed_) return result_;
    CheckResult r;
    r.outcome = any_unsure_ ? Outcome::inconclusive : any_pass_ ? Outcome::pass : Outcome::vacuous;
    r.score = std::min(best_, 0.0);
    r.lambda = best_lambda_;
    return r;
  }

 private:
  CheckResult result_;
  bool failed_ = false;
  bool any_pass_ = false;
  bool any_unsure_ = false;
  double best_ = kNegInf;
  std::optional<double> lambda_;
  std::optional<double> best_lambda_;
};

Truth both(Truth a, Truth b) {
  if (a == Truth::no || b == Truth::no) return Truth::no;
  if (a == Truth::unsure || b == Truth::unsure) return Truth::unsure;
  return Truth::yes;
}

// f(y) ≤ f(x) as a premise: yes when f(y) − f(x) ≤ ε, no beyond 10ε.
Truth at_most(double a, double b, double eps) {
  const double e = a - b;
  if (e <= eps) return Truth::yes;
  if (e > kTen * eps) return Truth::no;
  return Truth::unsure;
}

std::vector<double> interior(std::span<const double> lambdas) {
  std::vector<double> out;
  for (double l : lambdas) {
    if (l > 0.0 && l < 1.0) out.push_back(l);
  }
  return out;
}

// Positivity of p with the pairing's definiteness folded in: a nonpositive p
// only counts as a violation when the pairing is more than ten bands from 0.
Truth p_positive(const PValue& pv, double eps) {
  if (pv.positive != Truth::no) return pv.positive;
  return std::fabs(pv.pairing) > kTen * eps ? Truth::no : Truth::unsure;
}

double p_score(const PValue& pv, double eps) { return std::min(std::fabs(pv.pairing) - kTen * eps, rho - pv.p); }

}  // namespace

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::vacuous: return "vacuous";
    case Outcome::fail: return "fail";
    case Outcome::inconclusive: return "inconclusive";
  }
  return "?";
}

PairSample make_pair_sample(const FunctionHandle& f, Point x, Point y) {
  if (x.dimension() != y.dimension()) throw DomainError("pair endpoints differ in dimension");
  if (x == y) throw DomainError("degenerate pair: x == y");
  const double fx = f(x);
  const double fy = f(y);
  return PairSample{std::move(x), std::move(y), fx, fy};
}

PairSample reversed(const PairSample& s) { return PairSample{s.y, s.x, s.fy, s.fx}; }

Vector lambda_grid(std::size_t size) {
  if (size < 2) throw DomainError("lambda grid needs at least 2 points");
  Vector out(size);
  for (std::size_t k = 0; k < size; ++k) out[k] = static_cast<double>(k) / static_cast<double>(size - 1);
  return out;
}

// ---------------------------------------------------------------------------

CheckResult check_pseudoconvex_pair(const PairSample& s, const SubdifferentialEstimate& sx) {
  const double eps = strict_band(s.fx, s.fy);
  const double gap = s.fx - s.fy;
  const double tau = rho * std::max(gap, 0.0);
  const Truth premise = exceeds(gap, eps);
  const Vector dir = difference(s.y, s.x);
  // The pairing term is taken per unit length so that shrinking y − x does
  // not raise the score by itself; the sign, and with it the outcome, is
  // unchanged.
  const double length = norm(dir);
  Fold fold;
  for (std::size_t i = 0; i < sx.generators.size(); ++i) {
    const double d = dot(sx.generators[i], dir);
    fold.implication(premise, exceeds(-d, tau), std::min(gap - kTen * eps, (d + tau) / length), [&] {
      CheckResult r;
      r.residual = gap;
      r.generator = i;
      r.relation = "f(y) < f(x) but <x*, y - x> = " + fmt(d) + " is not < 0";
      return r;
    });
  }
  return fold.finish();
}

CheckResult check_weak_monotone_pair(const PairSample& s, const SubdifferentialEstimate& sx) {
  const double eps = strict_band(s.fx, s.fy);
  const Truth premise = at_most(s.fy, s.fx, eps);
  const Vector dir = difference(s.y, s.x);
  Fold fold;
  for (std::size_t i = 0; i < sx.generators.size(); ++i) {
    const double d = dot(sx.generators[i], dir);
    fold.implication(premise, at_most(d, 0.0, eps), std::min(s.fx - s.fy + eps, d - kTen * eps), [&] {
      CheckResult r;
      r.residual = d;
      r.generator = i;
      r.relation = "f(y) <= f(x) but <x*, y - x> = " + fmt(d) + " > 0";
      return r;
    });
  }
  return fold.finish();
}

PValue compute_p(double fx, double fy, double pairing) {
  PValue pv;
  pv.pairing = pairing;
  const double eps = strict_band(fx, fy);
  if (std::fabs(pairing) <= eps) {
    pv.band = true;
    pv.p = 1.0;
  } else {
    pv.p = (fy - fx) / pairing;
  }
  pv.positive = exceeds(pv.p, rho);
  return pv;
}

PValue compute_p(const PairSample& s, std::span<const double> generator) {
  return compute_p(s.fx, s.fy, dot(generator, difference(s.y, s.x)));
}

CheckResult verify_p_identity(const PairSample& s, const SubdifferentialEstimate& sx) {
  const double eps = strict_band(s.fx, s.fy);
  const double df = s.fy - s.fx;
  Fold fold;
  for (std::size_t i = 0; i < sx.generators.size(); ++i) {
    const PValue pv = compute_p(s, sx.generators[i]);
    const double r = std::fabs(df - pv.p * pv.pairing);
    const double band_score = std::min(eps - std::fabs(pv.pairing), std::fabs(df - pv.pairing) - kTen * eps);
    const double score = std::max(band_score, p_score(pv, eps));
    const Truth identity = within(r, eps);
    const Truth positive = p_positive(pv, eps);
    fold.relation(both(identity, positive), score, [&] {
      CheckResult res;
      res.generator = i;
      if (identity == Truth::no) {
        res.residual = r;
        res.relation = "<x*, y - x> = " + fmt(pv.pairing) + " is in the band but f(y) - f(x) = " + fmt(df);
      } else {
        res.residual = std::fabs(pv.pairing);
        res.relation = "p(x, y, x*) = " + fmt(pv.p) + " is not > 0";
      }
      return res;
    });
  }
  return fold.finish();
}

namespace {

template <class Judge>
CheckResult symmetric_sum(const PairSample& s, const SubdifferentialEstimate& sx, const SubdifferentialEstimate& sy,
                          Judge&& judge) {
  const double eps = strict_band(s.fx, s.fy);
  const Vector dxy = difference(s.y, s.x);
  const Vector dyx = difference(s.x, s.y);
  Fold fold;
  for (std::size_t i = 0; i < sx.generators.size(); ++i) {
    const PValue p1 = compute_p(s.fx, s.fy, dot(sx.generators[i], dxy));
    for (std::size_t j = 0; j < sy.generators.size(); ++j) {
      const PValue p2 = compute_p(s.fy, s.fx, dot(sy.generators[j], dyx));
      judge(fold, p1, p2, eps, i, j);
    }
  }
  return fold.finish();
}

}  // namespace

CheckResult check_symmetric_equality(const PairSample& s, const SubdifferentialEstimate& sx,
                                     const SubdifferentialEstimate& sy) {
  return symmetric_sum(s, sx, sy, [](Fold& fold, const PValue& p1, const PValue& p2, double eps, std::size_t i,
                                     std::size_t j) {
    const double sum = p1.p * p1.pairing + p2.p * p2.pairing;
    const Truth zero = within(sum, eps);
    const Truth pos1 = p_positive(p1, eps);
    const Truth pos2 = p_positive(p2, eps);
    const double score = std::max({std::fabs(sum) - kTen * eps, p_score(p1, eps), p_score(p2, eps)});
    fold.relation(both(zero, both(pos1, pos2)), score, [&] {
      CheckResult r;
      r.generator = i;
      r.generator_y = j;
      if (zero == Truth::no) {
        r.residual = std::fabs(sum);
        r.relation = "p(x,y,x*)<x*, y - x> + p(y,x,y*)<y*, x - y> = " + fmt(sum) + " != 0";
      } else if (pos1 == Truth::no) {
        r.residual = std::fabs(p1.pairing);
        r.relation = "p(x, y, x*) = " + fmt(p1.p) + " is not > 0";
      } else {
        r.residual = std::fabs(p2.pairing);
        r.relation = "p(y, x, y*) = " + fmt(p2.p) + " is not > 0";
      }
      return r;
    });
  });
}

CheckResult check_symmetric_inequality(const PairSample& s, const SubdifferentialEstimate& sx,
                                       const SubdifferentialEstimate& sy) {
  return symmetric_sum(s, sx, sy, [](Fold& fold, const PValue& p1, const PValue& p2, double eps, std::size_t i,
                                     std::size_t j) {
    const double q1 = p1.positive == Truth::yes ? p1.p : 1.0;
    const double q2 = p2.positive == Truth::yes ? p2.p : 1.0;
    const double sum = q1 * p1.pairing + q2 * p2.pairing;
    fold.relation(at_most(sum, 0.0, eps), sum - kTen * eps, [&] {
      CheckResult r;
      r.generator = i;
      r.generator_y = j;
      r.residual = sum;
      r.relation = "p(x,y,x*)<x*, y - x> + p(y,x,y*)<y*, x - y> = " + fmt(sum) + " > 0";
      return r;
    });
  });
}

// ---------------------------------------------------------------------------

CheckResult check_quasiconvex_segment(const FunctionHandle& f, const PairSample& s,
                                      std::span<const double> lambdas) {
  const Segment seg(s.x, s.y);
  const double eps = strict_band(s.fx, s.fy);
  const double top = std::max(s.fx, s.fy);
  Fold fold;
  for (double l : interior(lambdas)) {
    fold.set_lambda(l);
    const double fz = f(seg.at(l));
    const double excess = fz - top;
    fold.relation(at_most(fz, top, eps), excess - kTen * eps, [&] {
      CheckResult r;
      r.residual = excess;
      r.lambda = l;
      r.fz = fz;
      r.relation = "f(z) = " + fmt(fz) + " > max(f(x), f(y)) = " + fmt(top);
      return r;
    });
  }
  return fold.finish();
}

namespace {

// Shared body of the strict segment predicates. `margin(fz)` is positive
// exactly when the consequent holds at z.
template <class Margin>
CheckResult strict_segment(const FunctionHandle& f, const PairSample& s, std::span<const double> lambdas,
                           Margin&& margin, const char* relation) {
  const double eps = strict_band(s.fx, s.fy);
  const double gap = s.fx - s.fy;
  const Truth premise = exceeds(gap, eps);
  Fold fold;
  if (premise == Truth::no) {
    fold.implication(premise, Truth::yes, gap - kTen * eps, [] { return CheckResult{}; });
    return fold.finish();
  }
  const Segment seg(s.x, s.y);
  const double tau = rho * gap;
  for (double l : interior(lambdas)) {
    fold.set_lambda(l);
    const double fz = f(seg.at(l));
    const double m = margin(fz);
    fold.implication(premise, exceeds(m, tau), std::min(gap - kTen * eps, tau - m), [&] {
      CheckResult r;
      r.residual = gap;
      r.lambda = l;
      r.fz = fz;
      r.relation = std::string(relation) + " fails: f(x) = " + fmt(s.fx) + ", f(z) = " + fmt(fz) +
                   ", f(y) = " + fmt(s.fy);
      return r;
    });
  }
  return fold.finish();
}

}  // namespace

CheckResult check_semistrict_qcvx_segment(const FunctionHandle& f, const PairSample& s,
                                          std::span<const double> lambdas) {
  return strict_segment(
      f, s, lambdas, [&](double fz) { return s.fx - fz; }, "f(y) < f(x) => f(z) < f(x)");
}

CheckResult check_interlacing(const FunctionHandle& f, const PairSample& s, std::span<const double> lambdas) {
  return strict_segment(
      f, s, lambdas, [&](double fz) { return std::min(s.fx - fz, fz - s.fy); }, "f(y) < f(z) < f(x)");
}

// ---------------------------------------------------------------------------

BRecord compute_b(const PairSample& s, double lambda, double fz) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("compute_b: lambda must lie in (0, 1)");
  BRecord rec{s.x, s.y, lambda, s.fx, s.fy, fz};
  const double df = s.fy - s.fx;
  rec.degenerate = std::fabs(df) <= strict_band(s.fx, s.fy);
  rec.b = rec.degenerate ? 1.0 : (fz - s.fx) / (lambda * df);
  rec.lambda_b = lambda * rec.b;
  const Truth positive = exceeds(rec.lambda_b, rho);
  rec.strict_truth = both(positive, exceeds(1.0 - rec.lambda_b, rho));
  rec.weak_truth = both(positive, at_most(rec.lambda_b, 1.0, rho));
  rec.strict = rec.strict_truth == Truth::yes;
  rec.weak = rec.weak_truth == Truth::yes;
  rec.boundary = within(rec.lambda_b - 1.0, rho) == Truth::yes;
  return rec;
}

BRecord compute_b(const FunctionHandle& f, const PairSample& s, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw DomainError("compute_b: lambda must lie in (0, 1)");
  return compute_b(s, lambda, f(Segment(s.x, s.y).at(lambda)));
}

CheckResult check_b_bounds(const FunctionHandle& f, const PairSample& s, std::span<const double> lambdas,
                           BBound bound) {
  const double eps = strict_band(s.fx, s.fy);
  const double df = s.fy - s.fx;
  const Truth degenerate = within(df, eps);
  const Segment seg(s.x, s.y);
  Fold fold;
  for (double l : interior(lambdas)) {
    fold.set_lambda(l);
    const BRecord rec = compute_b(s, l, f(seg.at(l)));
    if (degenerate == Truth::yes) {
      const double r = std::fabs(rec.fz - (l * s.fy + (1.0 - l) * s.fx));
      // A satisfied identity is vacuous evidence for the bounds.
      fold.implication(within(r, eps) == Truth::yes ? Truth::no : Truth::yes, within(r, eps), r - kTen * eps, [&] {
        CheckResult res;
        res.residual = r;
        res.lambda = l;
        res.fz = rec.fz;
        res.relation = "f(y) = f(x) but f(z) = " + fmt(rec.fz) + " breaks the b = 1 identity";
        return res;
      });
      continue;
    }
    const Truth holds = bound == BBound::strict ? rec.strict_truth : rec.weak_truth;
    const double lb = rec.lambda_b;
    const double score = bound == BBound::strict ? std::max(rho - lb, rho - (1.0 - lb))
                                                 : std::max(rho - lb, lb - 1.0 - kTen * rho);
    fold.implication(exceeds(std::fabs(df), eps), holds, score, [&] {
      CheckResult res;
      res.residual = std::fabs(df);
      res.lambda = l;
      res.fz = rec.fz;
      res.relation = std::string(bound == BBound::strict ? "0 < lambda*b < 1" : "0 < b <= 1/lambda") +
                     " fails: lambda*b = " + fmt(lb);
      return res;
    });
  }
  return fold.finish();
}

BCrossCheck cross_check_b_via_subdifferential(const FunctionHandle& f, const PairSample& s, double lambda,
                                              const SubdifferentialEstimate& sz, double tolerance) {
  BCrossCheck out;
  const BRecord rec = compute_b(f, s, lambda);
  out.b_direct = rec.b;
  const double eps = std::max({strict_band(s.fx, s.fy), strict_band(s.fx, rec.fz), strict_band(s.fy, rec.fz)});
  if (std::fabs(s.fy - s.fx) <= eps || std::fabs(rec.fz - s.fx) <= eps || std::fabs(rec.fz - s.fy) <= eps) {
    out.note = "function values inside the equality band";
    return out;
  }
  const Vector dxy = difference(s.y, s.x);
  for (const Vector& xi : sz.generators) {
    const double d = dot(xi, dxy);
    if (std::fabs((1.0 - lambda) * d) <= eps || std::fabs(lambda * d) <= eps) {
      out.note = "q undefined: pairing inside the band";
      out.outcome = Outcome::inconclusive;
      out.b_generators.clear();
      return out;
    }
    const double qy = (1.0 - lambda) * d / (s.fy - rec.fz);
    const double qx = lambda * (-d) / (s.fx - rec.fz);
    if (!(qy > 0.0 && qx > 0.0)) {
      out.note = "q nonpositive";
      out.outcome = Outcome::fail;
      out.b_generators.push_back(qy / (lambda * qy + (1.0 - lambda) * qx));
      continue;
    }
    out.b_generators.push_back(qy / (lambda * qy + (1.0 - lambda) * qx));
  }
  const double tol = tolerance * (1.0 + std::fabs(out.b_direct));
  for (double b : out.b_generators) {
    out.max_deviation = std::max(out.max_deviation, std::fabs(b - out.b_direct));
    for (double c : out.b_generators) out.spread = std::max(out.spread, std::fabs(b - c));
  }
  if (out.outcome != Outcome::fail) {
    out.outcome = out.max_deviation <= tol && out.spread <= tol ? Outcome::pass : Outcome::fail;
  }
  return out;
}

QLimit estimate_q_limit(const FunctionHandle& f, const PairSample& s, std::span<const double> schedule) {
  if (schedule.size() < 2) throw DomainError("q-limit schedule needs at least two values");
  if (std::fabs(s.fy - s.fx) <= strict_band(s.fx, s.fy)) {
    throw DomainError("q-limit: f(y) is inside the equality band of f(x)");
  }
  QLimit out;
  out.schedule.assign(schedule.begin(), schedule.end());
  for (double l : schedule) out.b_values.push_back(compute_b(f, s, l).b);

  // Neville's scheme evaluated at λ = 0.
  Vector t = out.b_values;
  const std::size_t m = t.size();
  for (std::size_t k = 1; k < m; ++k) {
    for (std::size_t i = 0; i + k < m; ++i) {
      const double li = out.schedule[i];
      const double lk = out.schedule[i + k];
      t[i] = (li * t[i + 1] - lk * t[i]) / (li - lk);
    }
  }
  out.limit = t[0];

  out.converged = true;
  for (std::size_t i = 2; i < m; ++i) {
    const double prev = std::fabs(out.b_values[i - 1] - out.b_values[i - 2]);
    const double cur = std::fabs(out.b_values[i] - out.b_values[i - 1]);
    if (!(cur <= 0.5 * prev || cur <= 1e-12 * (1.0 + std::fabs(out.b_values[i])))) out.converged = false;
  }

  if (auto g = f.gradient(s.x); g && !g->nonsmooth_point) {
    out.closed_form = dot(g->gradient, difference(s.y, s.x)) / (s.fy - s.fx);
  }
  return out;
}

// ---------------------------------------------------------------------------

CheckResult check_gradient_kernel(const PairSample& s, std::span<const double> gradient) {
  const double eps = strict_band(s.fx, s.fy);
  const double d = dot(gradient, difference(s.y, s.x));
  const double df = s.fy - s.fx;
  Fold fold;
  fold.implication(within(d, eps), within(df, eps), std::min(eps - std::fabs(d), std::fabs(df) - kTen * eps), [&] {
    CheckResult r;
    r.residual = std::fabs(df);
    r.relation = "<grad f(x), y - x> = " + fmt(d) + " but f(y) - f(x) = " + fmt(df);
    return r;
  });
  return fold.finish();
}

KernelPairCheck check_subdiff_kernel_pair(const PairSample& s, const SubdifferentialEstimate& sx,
                                          const SubdifferentialEstimate& sx_negated) {
  const double eps = strict_band(s.fx, s.fy);
  const Vector dir = difference(s.y, s.x);
  const double drop = s.fx - s.fy;  // > 0 violates the lower condition
  Fold lower;
  Fold upper;
  Fold combined;
  auto run = [&](Fold& fold, const SubdifferentialEstimate& est, double violation, const char* text) {
    for (std::size_t i = 0; i < est.generators.size(); ++i) {
      const double d = dot(est.generators[i], dir);
      const Truth premise = within(d, eps);
      const Truth consequent = at_most(violation, 0.0, eps);
      const double score = std::min(eps - std::fabs(d), violation - kTen * eps);
      auto make = [&] {
        CheckResult r;
        r.residual = violation;
        r.generator = i;
        r.relation = std::string(text) + ", pairing " + fmt(d) + ", f(y) - f(x) = " + fmt(-drop);
        return r;
      };
      fold.implication(premise, consequent, score, make);
      combined.implication(premise, consequent, score, make);
    }
  };
  run(lower, sx, drop, "<xi, y - x> = 0 but f(y) < f(x)");
  run(upper, sx_negated, -drop, "<eta, y - x> = 0 but f(y) > f(x)");
  KernelPairCheck out;
  out.lower = lower.finish().outcome;
  out.upper = upper.finish().outcome;
  out.combined = combined.finish();
  return out;
}

std::optional<Point> project_to_kernel(const Region& region, const Point& x, const Point& y,
                                       std::span<const double> g) {
  Vector dir = difference(y, x);
  const double gg = dot(g, g);
  if (gg > 0.0) {
    const double c = dot(g, dir) / gg;
    for (std::size_t i = 0; i < dir.size(); ++i) dir[i] -= c * g[i];
  }
  if (norm(dir) == 0.0) return std::nullopt;
  double t = 1.0;
  for (int k = 0; k < 30; ++k, t *= 0.5) {
    Point p = offset(x, dir, t);
    if (p == x) return std::nullopt;
    if (region.in_sampling_interior(p)) return p;
  }
  return std::nullopt;
}

}  // namespace gencvx
