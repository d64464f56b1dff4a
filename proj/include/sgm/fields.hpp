#pragma once

#include <limits>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "sgm/scattering.hpp"

namespace sgm {

// CODATA 2018
inline constexpr double kEpsilon0 = 8.8541878128e-12;  // F/m
inline constexpr double kMu0 = 1.25663706212e-6;       // H/m
inline constexpr double kZ0 = 376.730313668;           // ohm

/// Vector spherical harmonics in the (r, theta, phi) basis:
/// Y = Y_lm r, Psi = r grad Y_lm, Phi = r x grad Y_lm.
struct VshTriple {
  int ell = 0;
  Eigen::Vector3cd Y;
  Eigen::Vector3cd Psi;
  Eigen::Vector3cd Phi;
  /// X_lm = -i Phi / sqrt(l(l+1))
  Eigen::Vector3cd X() const;
};

VshTriple vsh(int ell, int m, double theta, double phi);

/// One multipole field. Interior (r <= a) uses a0 j_l(k n r); exterior uses
/// a1 h1(kr) + a2 h2(kr) with the amplitudes fixed by the interface
/// conditions. `radius_um` = infinity means "interior everywhere".
struct FieldMode {
  Polarization pol = Polarization::TE;
  int ell = 1;
  int m = 0;
  double k_per_nm = 0.0;
  cdouble n = 1.0;
  double a0_abs = 1.0;  // V/m for TE, A/m for TM
  double radius_um = std::numeric_limits<double>::infinity();
};

struct FieldSample {
  double r_um = 0.0;
  double theta = 0.0;
  double u_normalized = 0.0;  // u / (eps0 |a0|^2 / 4) for TE, u / (mu0 |a0|^2 / 4) for TM
  double S_r = 0.0;           // Re(E x H*) in the same normalization
  double S_theta = 0.0;
  double S_phi = 0.0;
  double Theta = 0.0;  // atan[-S_r / (S_theta + S_phi)]
  bool normal_incidence = false;
};

/// Normalized energy density, Poynting vector and angle at (r, theta).
/// Throws DomainError at the poles for m != 0.
FieldSample field_sample(const FieldMode& mode, double r_um, double theta);

/// Time-averaged energy density in J/m^3.
double energy_density(const FieldMode& mode, double r_um, double theta);

struct PoyntingTheta {
  double S_r = 0.0;  // W/m^2
  double S_theta = 0.0;
  double S_phi = 0.0;
  double Theta = 0.0;
  bool normal_incidence = false;
};
PoyntingTheta poynting_and_theta(const FieldMode& mode, double r_um, double theta);

/// Solid-angle average of the normalized energy density, closed form
/// (TE: |j|^2 {Re n^2 + (|D+1|^2 + L)/rho^2} / (4 pi), TM analogous), with
/// D = rho n j'(n rho)/j(n rho) and L = l(l+1).
double avg_energy_density_normalized(const FieldMode& mode, double r_um);
/// Same in J/m^3.
double avg_energy_density(const FieldMode& mode, double r_um);

/// F-bar_+(zeta) = (j' + j/zeta)^2 + (1 + L/zeta^2) j^2.
double f_bar_plus(int ell, double zeta);

/// F_+-(zeta) = (j' + u j/zeta)^2 + (1 + v/zeta^2) j^2 with u_+ = 1,
/// v_+ = v_plus (angle dependent), u_- = 1/2 (TE) or 3/2 (TM),
/// v_- = -(l + 1/2)^2.
double f_plus(int ell, double zeta, double v_plus);
double f_minus(Polarization pol, int ell, double zeta);

/// Leading order in kappa of the averaged normalized density:
/// eta^2 F-bar_+ / (4 pi) for TE, F-bar_+ / (4 pi) for TM, zeta = k r eta.
double avg_energy_density_leading(Polarization pol, int ell, double zeta, double eta);

/// Angular shape functions built from the normalized Legendre kernels:
/// T0^2 = T1^2 + T2^2, calT1 = P/T0, calT2 = T1 P/T0^2, calT3 = T2 P/T0^2.
struct AngularShape {
  double T0 = 0.0;
  double calT1 = 0.0;
  double calT2 = 0.0;
  double calT3 = 0.0;
};
AngularShape angular_shape(int ell, int m, double theta);

/// First-order-in-kappa angle, atan{kappa zeta^2 F_-(zeta) / (eta L calT2 j^2)}.
double theta_leading_order(Polarization pol, int ell, int m, double theta, double zeta,
                           double eta, double kappa);

/// TM angle with F_-/j^2 replaced by its Debye form,
/// atan{kappa [(zeta tan phi + 1)^2 + zeta^2 - nu^2] / (eta L calT2)}.
/// Requires zeta > nu.
double theta_tm_debye(int ell, int m, double theta, double zeta, double eta, double kappa);

// ---------------------------------------------------------------------------
// Zeros, peaks and classification

/// Positive zeros of j_l (derivative = false) or j_l' (true) in (0, zeta_max],
/// found by a sign-change scan of step `step` and bisection.
std::vector<double> bessel_zeros(int ell, double zeta_max, bool derivative, double step = 0.05);

/// Interior strict maxima of a sampled profile (values below 1e-12 of the
/// maximum are ignored), plus one if the profile is still rising at the end.
int count_radial_peaks(const std::vector<double>& values);

/// Peak count of F-bar_+ on (0, zeta_end].
int radial_peak_count(int ell, double zeta_end, double step = 0.02);

struct MinimumLocation {
  double theta = 0.0;
  double value = 0.0;
  bool approximate_zero = false;  // value <= 1e-6 of the profile maximum
};

/// Strict local minima of f on `samples` uniform interior points of (lo, hi),
/// refined by golden-section search.
template <class F>
std::vector<MinimumLocation> find_minima(F&& f, double lo, double hi, int samples);
/// Same on precomputed samples v[i] = f(t[i]), t ascending.
template <class F>
std::vector<MinimumLocation> find_minima(F&& f, const std::vector<double>& t,
                                         const std::vector<double>& v);

enum class ModeClass { WGM, WGMprime, SGM_candidate, none };
std::string to_string(ModeClass c);

struct ClassifyOptions {
  double tolerance = 1e-6;  // relative
  double eta = 1.8217;      // index used to enumerate SGM records
};

ModeClass classify_mode(int ell, double zeta, const ClassifyOptions& options = {});

}  // namespace sgm

#include "sgm/detail/fields_impl.hpp"
