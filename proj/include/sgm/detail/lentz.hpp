#pragma once

#include <cmath>
#include <complex>
#include <optional>

namespace sgm::detail {

/// Modified Lentz evaluation of b0 + a1/(b1 + a2/(b2 + ...)). `coeff(k)`
/// returns the pair (a_k, b_k) for k >= 1. Returns nullopt when the
/// iteration cap is reached or the value stops being finite.
template <class T, class Coeff>
std::optional<T> lentz(T b0, Coeff coeff, int max_iterations, double tolerance) {
  using std::abs;
  constexpr double tiny = 1e-300;
  T f = b0;
  if (abs(f) == 0.0) f = T(tiny);
  T c = f;
  T d = T(0);
  for (int k = 1; k <= max_iterations; ++k) {
    const auto [a, b] = coeff(k);
    d = b + a * d;
    if (abs(d) == 0.0) d = T(tiny);
    c = b + a / c;
    if (abs(c) == 0.0) c = T(tiny);
    d = T(1) / d;
    const T delta = c * d;
    f *= delta;
    if (!std::isfinite(abs(f))) return std::nullopt;
    if (abs(delta - T(1)) < tolerance) return f;
  }
  return std::nullopt;
}

}  // namespace sgm::detail
