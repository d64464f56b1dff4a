#include "sgm/log_real.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include <fmt/format.h>

namespace sgm {

namespace {
constexpr double kLn2 = 0.69314718055994530942;
}

LogReal LogReal::make(int sign, double mantissa, std::int64_t exponent) {
  LogReal r;
  if (sign == 0 || mantissa == 0.0) return r;
  int e = 0;
  const double m = std::frexp(std::fabs(mantissa), &e);
  r.sign_ = sign > 0 ? 1 : -1;
  r.mantissa_ = m;
  r.exponent_ = exponent + e;
  return r;
}

LogReal LogReal::from_double(double value) {
  if (!std::isfinite(value)) throw std::domain_error("LogReal: non-finite value");
  if (value == 0.0) return {};
  return make(value > 0 ? 1 : -1, value, 0);
}

LogReal LogReal::from_log(int sign, double log_abs) {
  if (sign == 0) return {};
  if (!std::isfinite(log_abs)) throw std::domain_error("LogReal: non-finite logarithm");
  // split ln|v| = e ln2 + ln m with m in [0.5, 1)
  const double e = std::floor(log_abs / kLn2) + 1.0;
  const double m = std::exp(log_abs - e * kLn2);
  return make(sign, m, static_cast<std::int64_t>(e));
}

double LogReal::log_abs() const {
  if (sign_ == 0) return -std::numeric_limits<double>::infinity();
  return std::log(mantissa_) + static_cast<double>(exponent_) * kLn2;
}

double LogReal::log10_abs() const { return log_abs() / std::log(10.0); }

double LogReal::to_double() const {
  if (sign_ == 0) return 0.0;
  if (exponent_ > std::numeric_limits<double>::max_exponent)
    return sign_ * std::numeric_limits<double>::infinity();
  if (exponent_ < std::numeric_limits<double>::min_exponent - 60) return sign_ * 0.0;
  return sign_ * std::ldexp(mantissa_, static_cast<int>(exponent_));
}

bool LogReal::representable() const {
  if (sign_ == 0) return true;
  return exponent_ <= std::numeric_limits<double>::max_exponent &&
         exponent_ >= std::numeric_limits<double>::min_exponent;
}

LogReal LogReal::operator-() const {
  LogReal r = *this;
  r.sign_ = -r.sign_;
  return r;
}

LogReal LogReal::abs() const {
  LogReal r = *this;
  if (r.sign_ != 0) r.sign_ = 1;
  return r;
}

LogReal operator*(const LogReal& a, const LogReal& b) {
  if (a.sign_ == 0 || b.sign_ == 0) return {};
  return LogReal::make(a.sign_ * b.sign_, a.mantissa_ * b.mantissa_, a.exponent_ + b.exponent_);
}

LogReal operator/(const LogReal& a, const LogReal& b) {
  if (b.sign_ == 0) throw std::domain_error("LogReal: division by zero");
  if (a.sign_ == 0) return {};
  return LogReal::make(a.sign_ * b.sign_, a.mantissa_ / b.mantissa_, a.exponent_ - b.exponent_);
}

double relative_difference(const LogReal& a, const LogReal& b) {
  if (a.sign_ == 0 && b.sign_ == 0) return 0.0;
  if (a.sign_ == 0 || b.sign_ == 0) return 1.0;
  // align both on the larger exponent
  const std::int64_t e = std::max(a.exponent_, b.exponent_);
  const auto shift = [e](const LogReal& v) {
    const std::int64_t d = v.exponent_ - e;
    return d < -1100 ? 0.0 : v.sign_ * std::ldexp(v.mantissa_, static_cast<int>(d));
  };
  const double x = shift(a);
  const double y = shift(b);
  return std::fabs(x - y) / std::max(std::fabs(x), std::fabs(y));
}

std::string LogReal::to_string(int digits) const {
  if (sign_ == 0) return "0";
  const double l10 = log10_abs();
  double exp10 = std::floor(l10);
  double mant = std::pow(10.0, l10 - exp10);
  // rounding can push the mantissa to 10.000
  const double scale = std::pow(10.0, digits - 1);
  if (std::round(mant * scale) / scale >= 10.0) {
    mant /= 10.0;
    exp10 += 1.0;
  }
  return fmt::format("{}{:.{}f}e{}{:02d}", sign_ < 0 ? "-" : "", mant, digits - 1,
                     exp10 < 0 ? "-" : "+", static_cast<int>(std::fabs(exp10)));
}

}  // namespace sgm
