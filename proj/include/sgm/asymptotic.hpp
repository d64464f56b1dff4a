#pragma once

#include <string>
#include <vector>

#include "sgm/log_real.hpp"
#include "sgm/scattering.hpp"

namespace sgm {

enum class Method { asymptotic, exact, dispersive };
std::string to_string(Method method);

/// One spectral singularity of mode (pol, ell, q).
struct SingularityRecord {
  Polarization pol = Polarization::TE;
  int ell = 0;
  int q = 0;
  double zeta = 0.0;
  double lambda_nm = 0.0;
  LogReal kappa;
  LogReal gain_per_cm;
  Method method = Method::asymptotic;
  std::vector<std::string> flags;  // near_edge, non_gain, refinement status...

  bool has_flag(const std::string& f) const;
};

struct AsymptoticOptions {
  double window_margin = 1e-6;     // relative margin at zeta = nu and zeta = nu eta
  double bisection_width = 1e-10;  // in zeta
  double newton_step = 1e-6;       // central-difference step in zeta
  int newton_steps = 2;
  // Sign of the (eta^2 - 1)/(2 eta zeta) term in the TM real-part equation.
  // -1 reproduces the published TM tables.
  double tm_offset_sign = -1.0;
};

/// Real part of the leading-order Debye singularity condition at x = zeta/eta.
///   TE: P sinh(beta) - eta tan(phi)
///   TM: P sinh(beta) - tan(phi)/eta + s (eta^2 - 1)/(2 eta zeta)
/// with P = (1 - 4e^{-4psi})/(1 + 4e^{-4psi}) = tanh(2 psi - ln 2).
/// Requires nu < zeta < nu eta.
double real_residual(Polarization pol, int ell, double eta, double zeta,
                     const AsymptoticOptions& options = {});

/// kappa solving the imaginary part at a root of real_residual, in log form:
///   TE: kappa = -Q sinh(beta) / [zeta (sec^2 phi - cos^2 alpha)]
///   TM: kappa = -Q sinh(beta) / [(zeta/eta^2)((tan phi + 1/zeta)^2 + 1 - (nu^2+2)/zeta^2)
///                                 + 2/(zeta eta^2)]
/// with Q = 4e^{-2psi}/(1 + 4e^{-4psi}). A positive result (absorption) is
/// returned as is; callers flag it.
LogReal kappa_of_root(Polarization pol, int ell, double eta, double zeta);

/// All roots in (nu(1+d), nu eta(1-d)), bracketed between consecutive branch
/// points phi = (n + 1/2) pi, numbered q = 1, 2, ... by increasing zeta.
/// Requires ell >= 50. Throws ConvergenceError if a full branch interval
/// holds no root.
std::vector<SingularityRecord> enumerate_sgm(Polarization pol, int ell, double radius_um,
                                             double eta, const AsymptoticOptions& options = {});

struct TableSummary {
  Polarization pol = Polarization::TE;
  int ell = 0;
  int q_max = 0;
  double lambda_min_nm = 0.0;
  double lambda_max_nm = 0.0;
  LogReal g_min_per_cm;
};

TableSummary summarize(const std::vector<SingularityRecord>& records);

}  // namespace sgm
