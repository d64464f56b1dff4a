#pragma once

#include <array>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "sgm/medium.hpp"

namespace sgm {

using cdouble = std::complex<double>;

enum class Polarization { TE, TM };

std::string to_string(Polarization pol);
/// Accepts "te"/"tm" in any case; throws ConfigError otherwise.
Polarization parse_polarization(const std::string& text);

/// Dimensionless variables of one candidate mode.
struct SizeState {
  int ell = 0;
  double k_per_nm = 0.0;
  double lambda_nm = 0.0;
  double radius_um = 0.0;
  double x = 0.0;     // k a
  double zeta = 0.0;  // k a eta
  double nu = 0.0;    // ell + 1/2

  static SizeState from_wavelength(int ell, double lambda_nm, double radius_um, double eta);
  static SizeState from_zeta(int ell, double zeta, double eta, double radius_um);
};

struct ReflectionOptions {
  double near_singular_threshold = 1e8;  // on |R|
};

struct Reflection {
  cdouble R;               // a1/a2; infinite exactly on a pole
  double log10_R2 = 0.0;   // log10 |R|^2, finite even where |R|^2 overflows
  bool near_singular = false;
  double condition = 1.0;  // size of the terms in the denominator over its value
};

/// R = a1/a2 for the multipole (pol, ell) at size x and index n, in ratio
/// form: R = (h2/h1) (n J - conj H) / (H - n J) for TE and
/// (h2/h1) (J - n conj H) / (n H - J) for TM, with H = h~/h at x and
/// J = j~/j at n x, where f~(w) = f'(w) + f(w)/w.
Reflection reflection(Polarization pol, int ell, double x, cdouble n,
                      const ReflectionOptions& options = {});
inline Reflection reflection(Polarization pol, int ell, double x, const ComplexIndex& n,
                             const ReflectionOptions& options = {}) {
  return reflection(pol, ell, x, n.value(), options);
}

/// Function whose zeros are the spectral singularities.
///   TE: h'/h - n j'(nx)/j(nx)
///   TM: h'/h + (1 - 1/n^2)/x - j'(nx)/(n j(nx))
/// When j(nx) is close to a zero the value is returned multiplied by
/// j(nx)/j'(nx) (`inverted`), which has the same zeros.
struct Residual {
  cdouble value;
  bool inverted = false;
};
Residual residual(Polarization pol, int ell, double x, cdouble n);
inline Residual residual(Polarization pol, int ell, double x, const ComplexIndex& n) {
  return residual(pol, ell, x, n.value());
}

/// TE residual written with tilde derivatives, H - n J. Identical to the
/// plain form up to rounding.
cdouble residual_tilde_form(int ell, double x, cdouble n);

/// Amplitudes of the interior and exterior waves.
struct CoefficientTriple {
  cdouble a0;
  cdouble a1;
  cdouble a2;
};

/// Solves the two interface conditions for (a0, a1) with a2 = 1. Throws
/// DomainError when the system is singular (on a spectral singularity).
CoefficientTriple solve_coefficients(Polarization pol, int ell, double x, cdouble n);

/// Relative residuals of the two interface conditions.
std::array<double, 2> boundary_residuals(Polarization pol, int ell, double x, cdouble n,
                                         const CoefficientTriple& c);

// ---------------------------------------------------------------------------
// Wavelength scans

struct FixedIndex {
  cdouble n;
};
struct DispersiveIndex {
  GainMaterial material;
  double g0_per_cm = 0.0;
  DispersionModel model = DispersionModel::linearized;
  DispersionBand band = {};
};
using IndexSource = std::variant<FixedIndex, DispersiveIndex>;

cdouble index_at(const IndexSource& source, double lambda_nm);

struct ScanOptions {
  double peak_threshold_R2 = 1e4;
  double near_singular_threshold = 1e8;
  bool refine_peaks = true;
  int threads = 1;
};

struct ScanPoint {
  double lambda_nm = 0.0;
  double log10_R2 = 0.0;
  bool near_singular = false;
  bool failed = false;  // evaluation threw (reported, not fatal)
};

struct ScanPeak {
  double lambda_nm = 0.0;
  double log10_R2 = 0.0;
  bool near_singular = false;
};

struct ScanResult {
  std::vector<ScanPoint> points;
  std::vector<ScanPeak> peaks;
};

/// |R|^2 on an ascending wavelength grid. Every grid maximum is refined by
/// golden-section search between its neighbours; refined peaks above the
/// threshold are reported.
ScanResult reflection_scan(Polarization pol, int ell, double radius_um, const IndexSource& index,
                           const std::vector<double>& lambda_grid_nm,
                           const ScanOptions& options = {});

}  // namespace sgm
