#pragma once

#include <complex>
#include <string>

#include "sgm/log_real.hpp"

namespace sgm {

/// n = eta + i kappa with kappa < 0 for gain. Restricted to the
/// weak-gain regime eta > 1, |kappa| < 0.1.
struct ComplexIndex {
  double eta = 1.0;
  LogReal kappa;

  /// Validating constructor; throws DomainError outside the regime.
  static ComplexIndex make(double eta, LogReal kappa);
  static ComplexIndex make(double eta, double kappa) {
    return make(eta, LogReal::from_double(kappa));
  }
  bool is_gain() const { return kappa.sign() < 0; }
  /// eta + i kappa as a plain complex number (kappa may underflow to 0).
  std::complex<double> value() const { return {eta, kappa.to_double()}; }
};

/// Two-level dispersive medium.
struct GainMaterial {
  double n0 = 1.0;
  double lambda0_nm = 0.0;
  double gamma_hat = 0.0;
  double g0_max_per_cm = 0.0;  // advisory bound, never enforced

  bool operator==(const GainMaterial&) const = default;
};

// Unit conversions. Lengths are nm at API boundaries, radii are um, gains
// are 1/cm.
inline constexpr double kNmPerCm = 1e7;
inline constexpr double kNmPerUm = 1e3;

/// x = k a = 2 pi a / lambda.
double size_parameter(double lambda_nm, double radius_um);
/// lambda such that k a = x.
double wavelength_from_size(double x, double radius_um);

/// kappa = -lambda g / (4 pi).
LogReal kappa_from_gain(double lambda_nm, const LogReal& gain_per_cm);
/// g = -4 pi kappa / lambda.
LogReal gain_from_kappa(double lambda_nm, const LogReal& kappa);

/// f1(w) = gh (1 - w^2) / d, f2(w) = gh^2 w / d with
/// d = (1 - w^2)^2 + gh^2 w^2 and w = omega / omega0 = lambda0 / lambda.
double dispersion_f1(double omega_hat, double gamma_hat);
double dispersion_f2(double omega_hat, double gamma_hat);

enum class DispersionModel {
  linearized,  // eta = n0 + kappa0 f1, kappa = kappa0 f2
  full,        // n^2 = n0^2 - wp^2 / (w^2 - 1 + i gh w), wp^2 = 2 n0 gh kappa0
};

/// Wavelength window, as multiples of lambda0, where the model is trusted.
struct DispersionBand {
  double lower = 0.4;
  double upper = 2.0;
};

/// kappa0 = -lambda0 g0 / (4 pi).
double resonance_kappa(const GainMaterial& material, double g0_per_cm);

/// Index of the doped medium at wavelength lambda and peak gain g0.
/// Throws DomainError outside the band or for g0 < 0.
ComplexIndex dispersive_index(const GainMaterial& material, double lambda_nm, double g0_per_cm,
                              DispersionModel model = DispersionModel::linearized,
                              DispersionBand band = {});

/// Same, without the weak-gain validation (returns the complex value).
std::complex<double> dispersive_index_value(const GainMaterial& material, double lambda_nm,
                                            double g0_per_cm,
                                            DispersionModel model = DispersionModel::linearized,
                                            DispersionBand band = {});

void validate(const GainMaterial& material);

/// Built-in material ("ndyag"), or else a path to a material file.
GainMaterial preset(const std::string& name_or_path);

/// Material file: one `key = value` per line, `#` starts a comment.
/// Keys: n0, lambda0_nm, gamma_hat, g0_max_per_cm. Unknown, duplicate or
/// missing keys are rejected with ConfigError.
GainMaterial parse_material(const std::string& text);
GainMaterial load_material(const std::string& path);
std::string format_material(const GainMaterial& material);

}  // namespace sgm
