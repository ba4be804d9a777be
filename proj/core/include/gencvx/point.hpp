#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace gencvx {

using Vector = std::vector<double>;

/// A point of R^n with finite coordinates and n > 0.
class Point {
 public:
  explicit Point(Vector coords);
  Point(std::initializer_list<double> coords);

  std::size_t dimension() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const Vector& vector() const noexcept { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  Vector coords_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double distance(const Point& a, const Point& b);

// y - x
Vector difference(const Point& y, const Point& x);
// x + t v
Point offset(const Point& x, std::span<const double> v, double t);
Vector negated(std::span<const double> v);
Vector scaled(std::span<const double> v, double s);

std::string to_string(std::span<const double> v);

}  // namespace gencvx
