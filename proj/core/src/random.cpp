#include "gencvx/random.hpp"

#include <cmath>
#include <numbers>

namespace gencvx {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  return splitmix64(splitmix64(seed) ^ splitmix64(salt + 0x632be59bd9b4e019ULL));
}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) { return Rng(mix_seed(seed, index)); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
  // Box-Muller; 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t Rng::below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }

Vector Rng::unit_vector(std::size_t n) {
  Vector v(n);
  double len = 0.0;
  do {
    for (double& c : v) c = normal();
    len = norm(v);
  } while (len == 0.0);
  for (double& c : v) c /= len;
  return v;
}

Vector Rng::in_ball(std::size_t n, double r) {
  Vector v = unit_vector(n);
  const double scale = r * std::pow(uniform(), 1.0 / static_cast<double>(n));
  for (double& c : v) c *= scale;
  return v;
}

}  // namespace gencvx
