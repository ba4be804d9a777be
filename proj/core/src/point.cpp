#include "gencvx/point.hpp"

#include <cmath>
#include <sstream>

#include "gencvx/errors.hpp"

namespace gencvx {

namespace {

void validate(const Vector& coords) {
  if (coords.empty()) throw DomainError("point must have positive dimension");
  for (double c : coords) {
    if (!std::isfinite(c)) throw DomainError("point coordinates must be finite");
  }
}

}  // namespace

Point::Point(Vector coords) : coords_(std::move(coords)) { validate(coords_); }

Point::Point(std::initializer_list<double> coords) : coords_(coords) { validate(coords_); }

double dot(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DomainError("dot: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double distance(const Point& a, const Point& b) { return norm(difference(a, b)); }

Vector difference(const Point& y, const Point& x) {
  if (y.dimension() != x.dimension()) throw DomainError("difference: dimension mismatch");
  Vector d(x.dimension());
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = y[i] - x[i];
  return d;
}

Point offset(const Point& x, std::span<const double> v, double t) {
  if (v.size() != x.dimension()) throw DomainError("offset: dimension mismatch");
  Vector p(x.dimension());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = x[i] + t * v[i];
  return Point(std::move(p));
}

Vector negated(std::span<const double> v) {
  Vector out(v.begin(), v.end());
  for (double& c : out) c = -c;
  return out;
}

Vector scaled(std::span<const double> v, double s) {
  Vector out(v.begin(), v.end());
  for (double& c : out) c *= s;
  return out;
}

std::string to_string(std::span<const double> v) {
  std::ostringstream os;
  os.precision(17);
  os << '(';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << ')';
  return os.str();
}

}  // namespace gencvx
