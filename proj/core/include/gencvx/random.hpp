#pragma once

#include <cstdint>
#include <random>

#include "gencvx/point.hpp"

namespace gencvx {

// Deterministic random stream. Uniform and normal variates are produced by
// hand from the raw 64-bit engine output so sequences do not depend on the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Independent stream for sample `index` of a campaign seeded with `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next() { return engine_(); }
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();
  std::size_t below(std::size_t n);

  Vector unit_vector(std::size_t n);
  // Uniform in the Euclidean ball of radius r around the origin.
  Vector in_ball(std::size_t n, double r);

 private:
  std::mt19937_64 engine_;
};

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace gencvx
