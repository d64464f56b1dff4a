#pragma once

#include <cstdint>
#include <string>

namespace sgm {

/// Signed real number stored as sign * mantissa * 2^exponent with the
/// mantissa in [0.5, 1). Values far outside the double range (gain
/// coefficients near 1e-222, Hankel factors near e^{±600}) keep full
/// relative precision; conversion from and back to a representable
/// double is exact.
class LogReal {
 public:
  constexpr LogReal() = default;

  static LogReal from_double(double value);
  /// sign in {-1, 0, +1}; log_abs is ln|value| (ignored when sign == 0).
  static LogReal from_log(int sign, double log_abs);
  static LogReal zero() { return {}; }

  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  double log_abs() const;
  double log10_abs() const;
  /// Returns ±0 or ±inf when the value is outside the double range.
  double to_double() const;
  bool representable() const;

  LogReal operator-() const;
  LogReal abs() const;
  friend LogReal operator*(const LogReal& a, const LogReal& b);
  friend LogReal operator/(const LogReal& a, const LogReal& b);
  LogReal& operator*=(const LogReal& other) { return *this = *this * other; }
  LogReal& operator/=(const LogReal& other) { return *this = *this / other; }

  /// Relative difference |a - b| / max(|a|, |b|), evaluated without
  /// leaving the log domain.
  friend double relative_difference(const LogReal& a, const LogReal& b);

  /// Scientific notation with `digits` significant digits, e.g. "-1.310e-195".
  std::string to_string(int digits = 4) const;

 private:
  int sign_ = 0;
  double mantissa_ = 0.0;  // in [0.5, 1)
  std::int64_t exponent_ = 0;

  static LogReal make(int sign, double mantissa, std::int64_t exponent);
};

}  // namespace sgm
