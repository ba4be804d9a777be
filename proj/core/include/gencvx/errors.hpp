#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gencvx {

// Argument outside the mathematical domain of an operation (λ ∉ [0,1],
// degenerate segment, point outside its region, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Raised while evaluating a function: division by zero, log/sqrt of an
// invalid argument, non-finite result.
class EvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public std::runtime_error {
 public:
  // `offset` is the 1-based byte position at which parsing stopped.
  SyntaxError(std::size_t offset, const std::string& message)
      : std::runtime_error("syntax error at offset " + std::to_string(offset) + ": " + message),
        offset_(offset),
        detail_(message) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t offset_;
  std::string detail_;
};

class RegionTooThin : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A numerical estimator could not produce a result (no usable probes,
// too many failed gradient evaluations).
class EstimationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace gencvx
