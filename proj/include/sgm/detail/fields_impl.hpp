#pragma once

#include <algorithm>
#include <cmath>

#include "sgm/detail/golden.hpp"

namespace sgm {

template <class F>
std::vector<MinimumLocation> find_minima(F&& f, const std::vector<double>& t,
                                         const std::vector<double>& v) {
  std::vector<MinimumLocation> out;
  if (t.size() < 3 || v.size() != t.size()) return out;
  const double vmax = *std::max_element(v.begin(), v.end());
  const double span = t.back() - t.front();
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (!(v[i] < v[i - 1] && v[i] < v[i + 1])) continue;
    const auto [x, negv] = detail::golden_maximize([&](double s) { return -f(s); }, t[i - 1],
                                                   t[i + 1], 1e-12 * span);
    MinimumLocation m;
    m.theta = -negv < v[i] ? x : t[i];
    m.value = std::min(-negv, v[i]);
    m.approximate_zero = m.value <= 1e-6 * vmax;
    out.push_back(m);
  }
  return out;
}

template <class F>
std::vector<MinimumLocation> find_minima(F&& f, double lo, double hi, int samples) {
  std::vector<double> t(samples), v(samples);
  const double h = (hi - lo) / (samples + 1);
  for (int i = 0; i < samples; ++i) {
    t[i] = lo + (i + 1) * h;
    v[i] = f(t[i]);
  }
  return find_minima(f, t, v);
}

}  // namespace sgm
