#include "gencvx/tolerance.hpp"

#include <cmath>

namespace gencvx {

double strict_band(double fx, double fy) { return kStrictScale * (1.0 + std::fabs(fx) + std::fabs(fy)); }

Truth exceeds(double m, double band) {
  if (m > kHysteresis * band) return Truth::yes;
  if (m <= band) return Truth::no;
  return Truth::unsure;
}

Truth within(double deviation, double band) {
  const double d = std::fabs(deviation);
  if (d <= band) return Truth::yes;
  if (d > kHysteresis * band) return Truth::no;
  return Truth::unsure;
}

Truth implies(Truth premise, Truth consequent) {
  if (premise == Truth::no) return Truth::yes;
  if (premise == Truth::yes) return consequent;
  return consequent == Truth::yes ? Truth::yes : Truth::unsure;
}

std::string_view to_string(Truth t) {
  switch (t) {
    case Truth::no: return "no";
    case Truth::yes: return "yes";
    case Truth::unsure: return "unsure";
  }
  return "?";
}

}  // namespace gencvx
