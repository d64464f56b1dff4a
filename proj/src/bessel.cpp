#include <cmath>
#include <optional>
#include <string>

#include "sgm/detail/lentz.hpp"
#include "sgm/errors.hpp"
#include "sgm/specfun.hpp"

namespace sgm::specfun {

namespace {

constexpr double kRescale = 1e200;
constexpr double kLnRescale = 460.51701859880913680;  // ln 1e200

void check_order(int ell) {
  if (ell < 0) throw DomainError("negative Bessel order " + std::to_string(ell));
  if (ell > kMaxOrder)
    throw RangeError("Bessel order " + std::to_string(ell) + " exceeds working range " +
                     std::to_string(kMaxOrder));
}

cdouble j0_closed(cdouble z) {
  if (std::abs(z) < 1e-3) {
    const cdouble z2 = z * z;
    return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0 * (1.0 - z2 / 42.0));
  }
  return std::sin(z) / z;
}

cdouble j1_closed(cdouble z) {
  if (std::abs(z) < 0.5) {
    // z/3 - z^3/30 + z^5/840 - z^7/45360 + z^9/3991680 - ...
    const cdouble z2 = z * z;
    cdouble term = z / 3.0;
    cdouble sum = term;
    for (int k = 1; k < 10; ++k) {
      term *= -z2 / (2.0 * k * (2.0 * k + 3.0));
      sum += term;
    }
    return sum;
  }
  return std::sin(z) / (z * z) - std::cos(z) / z;
}

// j_{l+1}(z) / j_l(z)
std::optional<cdouble> upper_ratio(int ell, cdouble z, const ContinuedFractionOptions& opt) {
  const cdouble inv_z = 1.0 / z;
  return detail::lentz<cdouble>(
      cdouble(0.0),
      [&](int k) {
        const double a = k == 1 ? 1.0 : -1.0;
        return std::pair<cdouble, cdouble>(a, double(2 * (ell + k) + 1) * inv_z);
      },
      opt.max_iterations, opt.tolerance);
}

}  // namespace

BesselPair sph_bessel_j(int ell, cdouble z, bool want_derivative,
                        const ContinuedFractionOptions& options) {
  check_order(ell);
  if (z == 0.0) {
    return {ell == 0 ? 1.0 : 0.0, ell == 1 ? 1.0 / 3.0 : 0.0};
  }
  if (ell == 0) return {j0_closed(z), want_derivative ? -j1_closed(z) : 0.0};

  // Seed the downward recurrence from the continued fraction; if z sits on a
  // zero of j_l the fraction can fail there, so start a few orders higher.
  int top = ell;
  std::optional<cdouble> seed;
  for (; top <= ell + 8; ++top) {
    seed = upper_ratio(top, z, options);
    if (seed) break;
  }
  if (!seed) throw ConvergenceError("sph_bessel_j: continued fraction did not converge");

  cdouble upper = *seed;  // j_{top+1}, up to a common factor
  cdouble cur = 1.0;      // j_top
  cdouble keep = top == ell ? cur : 0.0;
  cdouble keep_below = 0.0;
  for (int k = top; k >= 1; --k) {
    const cdouble lower = double(2 * k + 1) / z * cur - upper;
    upper = cur;
    cur = lower;
    if (k - 1 == ell) keep = cur;
    if (k - 1 == ell - 1) keep_below = cur;
    if (std::abs(cur) > kRescale) {
      cur /= kRescale;
      upper /= kRescale;
      keep /= kRescale;
      keep_below /= kRescale;
    }
  }

  const cdouble t0 = j0_closed(z);
  const cdouble t1 = j1_closed(z);
  const cdouble scale = std::abs(t0) >= std::abs(t1) ? t0 / cur : t1 / upper;
  const cdouble value = keep * scale;
  cdouble deriv = 0.0;
  if (want_derivative) deriv = keep_below * scale - double(ell + 1) / z * value;
  return {value, deriv};
}

cdouble ratio_j(int ell, cdouble z, const ContinuedFractionOptions& options) {
  check_order(ell);
  if (z == 0.0) {
    if (ell == 0) return 0.0;
    throw DomainError("ratio_j: j_l'(0)/j_l(0) is singular for l >= 1");
  }
  const auto r = upper_ratio(ell, z, options);
  if (!r) throw ConvergenceError("ratio_j: near-zero denominator");
  return double(ell) / z - *r;
}

namespace {

// y_l and y_{l+1} for real x, with a common factor exp(log_scale) removed.
struct ScaledY {
  double y = 0.0;
  double y_next = 0.0;
  double log_scale = 0.0;
};

ScaledY sph_y_scaled(int ell, double x) {
  const double s = std::sin(x);
  const double c = std::cos(x);
  double a = -c / x;                 // y_0
  double b = -c / (x * x) - s / x;   // y_1
  ScaledY out;
  for (int k = 1; k <= ell; ++k) {
    const double next = double(2 * k + 1) / x * b - a;
    a = b;
    b = next;
    if (std::fabs(b) > kRescale) {
      a /= kRescale;
      b /= kRescale;
      out.log_scale += kLnRescale;
    }
  }
  out.y = a;
  out.y_next = b;
  return out;
}

}  // namespace

BesselPair sph_hankel(HankelKind kind, int ell, double x, bool want_derivative) {
  check_order(ell);
  if (!(x > 0.0)) throw DomainError("sph_hankel: argument must be positive");
  const ScaledY ys = sph_y_scaled(ell, x);
  const double factor = std::exp(ys.log_scale);
  const double y = ys.y * factor;
  const double y_deriv = (double(ell) / x * ys.y - ys.y_next) * factor;
  if (!std::isfinite(y) || std::fabs(y) > 1e300 ||
      (want_derivative && (!std::isfinite(y_deriv) || std::fabs(y_deriv) > 1e300)))
    throw OverflowError("sph_hankel: |h_" + std::to_string(ell) + "(" + std::to_string(x) +
                        ")| exceeds the double range");
  const BesselPair j = sph_bessel_j(ell, x, want_derivative);
  const double sgn = kind == HankelKind::first ? 1.0 : -1.0;
  BesselPair out;
  out.value = cdouble(j.value.real(), sgn * y);
  if (want_derivative) out.derivative = cdouble(j.derivative.real(), sgn * y_deriv);
  return out;
}

HankelRatio hankel1_ratio(int ell, double x) {
  check_order(ell);
  if (!(x > 0.0)) throw DomainError("hankel1_ratio: argument must be positive");
  const ScaledY ys = sph_y_scaled(ell, x);
  const BesselPair j = sph_bessel_j(ell, x, true);
  const double unscale = std::exp(-ys.log_scale);
  // scaled y can reach ~1e202, so normalize once more before squaring
  const double m = std::max(std::fabs(j.value.real() * unscale), std::fabs(ys.y));
  const double js = j.value.real() * unscale / m;
  const double jds = j.derivative.real() * unscale / m;
  const double Y = ys.y / m;
  const double Yd = (double(ell) / x * ys.y - ys.y_next) / m;
  const double S = js * js + Y * Y;
  const double log_scale = ys.log_scale + std::log(m);
  HankelRatio out;
  const double re = (js * jds + Y * Yd) / S;
  // Wronskian: j y' - j' y = 1/x^2
  const double im = std::exp(-2.0 * log_scale - std::log(x * x * S));
  out.log_derivative = cdouble(re, im);
  out.phase = std::atan2(Y, js);
  out.log_abs = log_scale + 0.5 * std::log(S);
  return out;
}

}  // namespace sgm::specfun
