#pragma once

// Spherical Bessel/Hankel functions of large order, their logarithmic
// derivatives, normalized associated Legendre kernels and the leading-order
// Debye expansions of J_nu and H^(1)_nu.

#include <complex>

#include "sgm/log_real.hpp"

namespace sgm::specfun {

using cdouble = std::complex<double>;

/// Largest order accepted by the Bessel routines.
inline constexpr int kMaxOrder = 2000;

struct BesselPair {
  cdouble value;
  cdouble derivative;
};

enum class HankelKind { first = 1, second = 2 };

/// Stopping rule for the continued fraction of j_{l+1}/j_l.
struct ContinuedFractionOptions {
  int max_iterations = 10000;
  double tolerance = 1e-15;
};

/// j_l(z) and j_l'(z) for complex z.
///
/// The ratio j_{l+1}/j_l is seeded from a continued fraction, the sequence
/// is carried down to l = 0 with rescaling, and the result is normalized
/// against the closed forms of j_0 or j_1 (whichever is larger at z). The
/// derivative comes from the neighbouring order, j_l' = j_{l-1} - (l+1) j_l / z,
/// so it is independent of `ratio_j`. Values below the double range
/// underflow to zero.
///
/// Working range: l <= 2000, |z| <= 2000, |Im z| well below 700.
BesselPair sph_bessel_j(int ell, cdouble z, bool want_derivative = true,
                        const ContinuedFractionOptions& options = {});

/// h_l^(1,2)(x) and derivative for real x > 0, built from j_l (above) and y_l
/// (upward recurrence). Throws OverflowError instead of returning infinity.
BesselPair sph_hankel(HankelKind kind, int ell, double x, bool want_derivative = true);

/// j_l'(z) / j_l(z) evaluated as l/z - j_{l+1}(z)/j_l(z) with the modified
/// Lentz algorithm; j_l itself is never formed. Throws ConvergenceError
/// ("near-zero denominator") when the fraction does not settle.
cdouble ratio_j(int ell, cdouble z, const ContinuedFractionOptions& options = {});

/// Logarithmic derivative and phase of h_l^(1)(x) for real x > 0.
///
/// Re(h'/h) = (j j' + y y') / (j^2 + y^2) and Im(h'/h) = 1 / (x^2 (j^2 + y^2))
/// (Wronskian), both evaluated with y carried in scaled form, so the tiny
/// imaginary part is exact to rounding even when |y| ~ 1e150.
struct HankelRatio {
  cdouble log_derivative;  // h'(x) / h(x)
  double phase;            // arg h(x)
  double log_abs;          // ln |h(x)|
};
HankelRatio hankel1_ratio(int ell, double x);

// ---------------------------------------------------------------------------
// Debye expansions

/// alpha = arccos(nu/zeta), phi = nu(tan alpha - alpha) - pi/4,
/// beta = arccosh(nu/x), psi = nu(tanh beta - beta).
struct DebyeAngles {
  double nu = 0.0;
  double alpha = 0.0;
  double phi = 0.0;
  double beta = 0.0;
  double psi = 0.0;
};

/// Requires zeta > nu > x.
DebyeAngles debye_angles(double nu, double x, double zeta);

/// A complex number written as scale * mantissa with the scale kept in
/// log form.
struct ScaledComplex {
  LogReal scale;
  cdouble mantissa;
  /// scale * mantissa; may overflow.
  cdouble value() const { return scale.to_double() * mantissa; }
};

struct DebyeValues {
  DebyeAngles angles;
  double J = 0.0;   // J_nu(zeta)
  double dJ = 0.0;  // J_nu'(zeta)
  ScaledComplex H1;   // H^(1)_nu(x)
  ScaledComplex dH1;  // H^(1)_nu'(x)
};

/// Leading-order Debye values. Relative error is O(1/nu) away from the
/// turning points zeta = nu and x = nu.
DebyeValues debye_eval(double nu, double x, double zeta);

// ---------------------------------------------------------------------------
// Associated Legendre kernels

/// P_l^m(cos theta), T1 = m P_l^m / sin theta and T2 = d/dtheta P_l^m with the
/// Condon-Shortley phase (P_1^1(cos theta) = -sin theta).
///
/// Values are stored orthonormalized (multiplied by
/// b_lm = sqrt((2l+1)/(4 pi) (l-m)!/(l+m)!)) and share a common factor
/// exp(log_scale), so P, T1 and T2 stay finite even where sin^m(theta)
/// underflows. Ratios of the stored fields are exact.
struct AngularKernels {
  int ell = 0;
  int m = 0;
  double theta = 0.0;
  double P = 0.0;
  double T1 = 0.0;
  double T2 = 0.0;
  double log_scale = 0.0;  // stored values * exp(log_scale) = normalized values
  double log_norm = 0.0;   // ln b_lm

  /// Orthonormalized values b_lm * (P, T1, T2); may underflow.
  double normalized_P() const;
  double normalized_T1() const;
  double normalized_T2() const;
  /// Conventional (unnormalized) values; throws RangeError on overflow.
  double raw_P() const;
  double raw_T1() const;
  double raw_T2() const;
};

AngularKernels angular_kernels(int ell, int m, double theta);

}  // namespace sgm::specfun
