#pragma once

#include <cmath>
#include <utility>

namespace sgm::detail {

/// Golden-section search for a maximum of f on [a, b]; returns (x, f(x)).
template <class F>
std::pair<double, double> golden_maximize(F&& f, double a, double b, double tolerance,
                                          int max_iterations = 200) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a);
  double d = a + r * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < max_iterations && std::fabs(b - a) > tolerance; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? std::pair{c, fc} : std::pair{d, fd};
}

}  // namespace sgm::detail
