#include "gencvx/region.hpp"

#include <charconv>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "gencvx/errors.hpp"

namespace gencvx {

namespace {

constexpr std::size_t kMaxAttempts = 1'000'000;
constexpr double kMinAcceptance = 1e-3;

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Split at commas that are not nested inside parentheses.
std::vector<std::string_view> split_top_level(std::string_view text) {
  std::vector<std::string_view> items;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (depth < 0) throw DomainError("region: unbalanced ')'");
    if (c == ',' && depth == 0) {
      items.push_back(trim(text.substr(start, i - start)));
      start = i + 1;
    }
  }
  if (depth != 0) throw DomainError("region: unbalanced '('");
  items.push_back(trim(text.substr(start)));
  return items;
}

double parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw DomainError("region: bad number '" + std::string(s) + "'");
  }
  return v;
}

struct LinearForm {
  std::vector<double> coeffs;  // indexed by variable (0-based), grown on demand
  double constant = 0.0;
};

// Parses sums of terms `c`, `xi`, `c*xi`, `c xi` with leading signs.
LinearForm parse_linear(std::string_view s) {
  LinearForm form;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  bool first = true;
  skip();
  if (i == s.size()) throw DomainError("region: empty side of constraint");
  while (i < s.size()) {
    double sign = 1.0;
    skip();
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      sign = s[i] == '-' ? -1.0 : 1.0;
      ++i;
      skip();
    } else if (!first) {
      throw DomainError("region: expected '+' or '-' in '" + std::string(s) + "'");
    }
    first = false;
    double coef = 1.0;
    bool have_coef = false;
    if (i < s.size() && (std::isdigit(static_cast<unsigned char>(s[i])) || s[i] == '.')) {
      std::size_t j = i;
      while (j < s.size() && (std::isdigit(static_cast<unsigned char>(s[j])) || s[j] == '.' ||
                              s[j] == 'e' || s[j] == 'E' ||
                              ((s[j] == '-' || s[j] == '+') && j > i && (s[j - 1] == 'e' || s[j - 1] == 'E')))) {
        ++j;
      }
      coef = parse_number(s.substr(i, j - i));
      have_coef = true;
      i = j;
      skip();
      if (i < s.size() && s[i] == '*') {
        ++i;
        skip();
      }
    }
    if (i < s.size() && s[i] == 'x') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i + 1) throw DomainError("region: variable needs an index");
      const std::size_t index = static_cast<std::size_t>(parse_number(s.substr(i + 1, j - i - 1)));
      if (index == 0) throw DomainError("region: variables are numbered from x1");
      if (form.coeffs.size() < index) form.coeffs.resize(index, 0.0);
      form.coeffs[index - 1] += sign * coef;
      i = j;
    } else if (have_coef) {
      form.constant += sign * coef;
    } else {
      throw DomainError("region: unexpected text in '" + std::string(s) + "'");
    }
    skip();
  }
  return form;
}

AffineConstraint parse_constraint(std::string_view item, std::size_t& max_var) {
  static constexpr std::string_view kOps[] = {"<=", ">=", "<", ">"};
  for (std::string_view op : kOps) {
    const std::size_t pos = item.find(op);
    if (pos == std::string_view::npos) continue;
    LinearForm lhs = parse_linear(item.substr(0, pos));
    LinearForm rhs = parse_linear(item.substr(pos + op.size()));
    const std::size_t n = std::max(lhs.coeffs.size(), rhs.coeffs.size());
    lhs.coeffs.resize(n, 0.0);
    rhs.coeffs.resize(n, 0.0);
    max_var = std::max(max_var, n);
    // lhs op rhs  ->  (lhs - rhs)·x op (rhs_c - lhs_c)
    AffineConstraint c;
    c.normal.resize(n);
    for (std::size_t k = 0; k < n; ++k) c.normal[k] = lhs.coeffs[k] - rhs.coeffs[k];
    c.bound = rhs.constant - lhs.constant;
    const bool flip = op[0] == '>';
    if (flip) {
      for (double& a : c.normal) a = -a;
      c.bound = -c.bound;
    }
    c.relation = op.size() == 2 ? Relation::less_equal : Relation::less;
    return c;
  }
  throw DomainError("region: item '" + std::string(item) + "' is not a constraint, box(...) or margin(...)");
}

std::vector<Interval> parse_box(std::string_view inner) {
  std::vector<Interval> box;
  for (std::string_view range : split_top_level(inner)) {
    const std::size_t dots = range.find("..");
    if (dots == std::string_view::npos) throw DomainError("region: box ranges are written lo..hi");
    box.push_back({parse_number(range.substr(0, dots)), parse_number(range.substr(dots + 2))});
  }
  return box;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Region::Region(std::vector<AffineConstraint> constraints, std::vector<Interval> box,
               std::optional<double> margin)
    : constraints_(std::move(constraints)), box_(std::move(box)) {
  if (box_.empty()) throw DomainError("region: a bounding box is required");
  for (const Interval& iv : box_) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || !(iv.lo < iv.hi)) {
      throw DomainError("region: box ranges must be finite with lo < hi");
    }
  }
  for (AffineConstraint& c : constraints_) {
    if (c.normal.size() > box_.size()) throw DomainError("region: constraint uses a variable beyond the box dimension");
    c.normal.resize(box_.size(), 0.0);
    if (norm(c.normal) == 0.0) throw DomainError("region: constraint has zero normal");
    if (!std::isfinite(c.bound)) throw DomainError("region: constraint bound must be finite");
  }
  margin_ = margin.value_or(kDefaultMarginFraction * diagonal());
  if (!(margin_ > 0.0) || !std::isfinite(margin_)) throw DomainError("region: margin must be positive");
  text_ = canonical_text();
  // Nonemptiness at the margin is established by actually sampling.
  (void)sample(1, 0x5eed);
}

Region Region::parse(std::string_view text, std::size_t dimension) {
  std::vector<AffineConstraint> constraints;
  std::vector<Interval> box;
  std::optional<double> margin;
  std::size_t max_var = 0;
  bool have_box = false;
  for (std::string_view item : split_top_level(trim(text))) {
    if (item.empty()) throw DomainError("region: empty item");
    if (item.starts_with("box(") && item.ends_with(")")) {
      if (have_box) throw DomainError("region: box(...) given twice");
      box = parse_box(item.substr(4, item.size() - 5));
      have_box = true;
    } else if (item.starts_with("margin(") && item.ends_with(")")) {
      margin = parse_number(item.substr(7, item.size() - 8));
    } else {
      constraints.push_back(parse_constraint(item, max_var));
    }
  }
  if (!have_box) throw DomainError("region: a box(lo..hi, ...) item is required");
  if (max_var > box.size()) throw DomainError("region: constraint uses a variable beyond the box dimension");
  if (dimension != 0 && dimension != box.size()) {
    throw DomainError("region: box has dimension " + std::to_string(box.size()) + ", expected " +
                      std::to_string(dimension));
  }
  Region region(std::move(constraints), std::move(box), margin);
  region.text_ = std::string(trim(text));
  return region;
}

double Region::diagonal() const noexcept {
  double s = 0.0;
  for (const Interval& iv : box_) s += (iv.hi - iv.lo) * (iv.hi - iv.lo);
  return std::sqrt(s);
}

bool Region::contains(const Point& p) const {
  if (p.dimension() != dimension()) return false;
  for (std::size_t i = 0; i < box_.size(); ++i) {
    if (p[i] < box_[i].lo || p[i] > box_[i].hi) return false;
  }
  return satisfies_constraints(p);
}

bool Region::satisfies_constraints(const Point& p) const {
  if (p.dimension() != dimension()) return false;
  for (const AffineConstraint& c : constraints_) {
    const double lhs = dot(c.normal, p.coords());
    if (c.relation == Relation::less ? !(lhs < c.bound) : !(lhs <= c.bound)) return false;
  }
  return true;
}

double Region::slack(const Point& p) const {
  if (p.dimension() != dimension()) throw DomainError("region: point dimension mismatch");
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < box_.size(); ++i) {
    s = std::min({s, p[i] - box_[i].lo, box_[i].hi - p[i]});
  }
  for (const AffineConstraint& c : constraints_) {
    s = std::min(s, (c.bound - dot(c.normal, p.coords())) / norm(c.normal));
  }
  return s;
}

bool Region::in_sampling_interior(const Point& p) const { return contains(p) && slack(p) >= margin_; }

std::vector<Point> Region::sample(std::size_t count, std::uint64_t seed) const {
  Rng rng(seed);
  std::vector<Point> points;
  points.reserve(count);
  std::size_t attempts = 0;
  Vector coords(dimension());
  while (points.size() < count) {
    ++attempts;
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = rng.uniform(box_[i].lo, box_[i].hi);
    Point p(coords);
    if (in_sampling_interior(p)) points.push_back(std::move(p));
    if (attempts >= kMaxAttempts &&
        static_cast<double>(points.size()) < kMinAcceptance * static_cast<double>(attempts)) {
      throw RegionTooThin("region too thin: acceptance rate below 1e-3 over 1e6 attempts (" + text_ + ")");
    }
  }
  return points;
}

Point Region::draw(Rng& rng) const {
  Vector coords(dimension());
  for (std::size_t attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = rng.uniform(box_[i].lo, box_[i].hi);
    Point p(coords);
    if (in_sampling_interior(p)) return p;
  }
  throw RegionTooThin("region too thin: no interior point in 1e6 attempts (" + text_ + ")");
}

std::string Region::canonical_text() const {
  std::string out;
  for (const AffineConstraint& c : constraints_) {
    std::string lhs;
    for (std::size_t k = 0; k < c.normal.size(); ++k) {
      if (c.normal[k] == 0.0) continue;
      if (!lhs.empty()) lhs += " + ";
      lhs += format_double(c.normal[k]) + "*x" + std::to_string(k + 1);
    }
    out += lhs + (c.relation == Relation::less ? " < " : " <= ") + format_double(c.bound) + ", ";
  }
  out += "box(";
  for (std::size_t i = 0; i < box_.size(); ++i) {
    if (i) out += ", ";
    out += format_double(box_[i].lo) + ".." + format_double(box_[i].hi);
  }
  out += "), margin(" + format_double(margin_) + ")";
  return out;
}

}  // namespace gencvx
