#pragma once

#include <stdexcept>
#include <string>

namespace sgm {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Argument outside the documented working range (e.g. order too large).
struct RangeError : std::out_of_range {
  using std::out_of_range::out_of_range;
};

/// A magnitude would exceed the representable double range.
struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

/// Iterative method did not reach its tolerance.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Configuration or input-file problem.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sgm
