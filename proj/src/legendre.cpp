#include <cmath>
#include <numbers>
#include <string>

#include "sgm/errors.hpp"
#include "sgm/specfun.hpp"

namespace sgm::specfun {

namespace {

constexpr double kRescale = 1e200;
constexpr double kLnRescale = 460.51701859880913680;

double log_b(int ell, int m) {
  return 0.5 * (std::log(2.0 * ell + 1.0) - std::log(4.0 * std::numbers::pi) +
                std::lgamma(ell - m + 1.0) - std::lgamma(ell + m + 1.0));
}

double checked_exp(double log_value, double mantissa, const char* what) {
  if (mantissa == 0.0) return 0.0;
  const double v = mantissa * std::exp(log_value);
  if (!std::isfinite(v))
    throw RangeError(std::string("angular_kernels: raw ") + what + " overflows");
  return v;
}

}  // namespace

double AngularKernels::normalized_P() const { return P * std::exp(log_scale); }
double AngularKernels::normalized_T1() const { return T1 * std::exp(log_scale); }
double AngularKernels::normalized_T2() const { return T2 * std::exp(log_scale); }
double AngularKernels::raw_P() const { return checked_exp(log_scale - log_norm, P, "P"); }
double AngularKernels::raw_T1() const { return checked_exp(log_scale - log_norm, T1, "T1"); }
double AngularKernels::raw_T2() const { return checked_exp(log_scale - log_norm, T2, "T2"); }

AngularKernels angular_kernels(int ell, int m, double theta) {
  if (ell < 0) throw DomainError("angular_kernels: negative degree");
  const int am = std::abs(m);
  if (am > ell) throw DomainError("angular_kernels: |m| > l");
  if (!(theta >= 0.0 && theta <= std::numbers::pi))
    throw DomainError("angular_kernels: theta outside [0, pi]");
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  const bool pole = theta == 0.0 || theta == std::numbers::pi;
  if (pole && m != 0) throw DomainError("angular_kernels: T1 is singular at the poles for m != 0");

  AngularKernels k;
  k.ell = ell;
  k.m = m;
  k.theta = theta;
  k.log_norm = log_b(ell, m);

  if (pole) {
    // P_l^0(+-1) = (+-1)^l; derivatives in theta vanish
    k.P = (c < 0 && ell % 2 == 1) ? -1.0 : 1.0;
    k.log_scale = 0.5 * (std::log(2.0 * ell + 1.0) - std::log(4.0 * std::numbers::pi));
    return k;
  }

  // normalized P_mm = (-1)^m sqrt((2m+1)/(4pi) (2m-1)!!/(2m)!!) sin^m
  double log_pmm = -0.5 * std::log(4.0 * std::numbers::pi);
  for (int i = 1; i <= am; ++i) log_pmm += 0.5 * std::log((2.0 * i + 1.0) / (2.0 * i));
  log_pmm += am * std::log(s);
  double log_scale = log_pmm;
  double p_prev = 0.0;                  // P_{l-1,m}
  double p = (am % 2 == 1) ? -1.0 : 1.0;  // P_{m,m}
  auto a = [am](int l) {
    return std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(am) * am));
  };
  for (int l = am + 1; l <= ell; ++l) {
    double next;
    if (l == am + 1)
      next = std::sqrt(2.0 * am + 3.0) * c * p;
    else
      next = a(l) * (c * p - p_prev / a(l - 1));
    p_prev = p;
    p = next;
    if (std::fabs(p) > kRescale) {
      p /= kRescale;
      p_prev /= kRescale;
      log_scale += kLnRescale;
    }
  }
  const double lf = ell;
  const double cprev =
      ell > am ? std::sqrt((2.0 * lf + 1.0) / (2.0 * lf - 1.0) * (lf * lf - double(am) * am))
               : 0.0;
  double t2 = (lf * c * p - cprev * p_prev) / s;
  if (m < 0 && am % 2 == 1) {
    p = -p;
    t2 = -t2;
  }
  k.P = p;
  k.T1 = m * p / s;
  k.T2 = t2;
  k.log_scale = log_scale;
  return k;
}

}  // namespace sgm::specfun
