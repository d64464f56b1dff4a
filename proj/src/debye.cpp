#include <cmath>
#include <numbers>

#include "sgm/errors.hpp"
#include "sgm/specfun.hpp"

namespace sgm::specfun {

namespace {

// tan a - a, accurate for small a
double tan_minus(double a) {
  if (a < 1e-3) {
    const double a2 = a * a;
    return a * a2 * (1.0 / 3.0 + a2 * (2.0 / 15.0 + a2 * 17.0 / 315.0));
  }
  return std::tan(a) - a;
}

// tanh b - b, accurate for small b
double tanh_minus(double b) {
  if (b < 1e-3) {
    const double b2 = b * b;
    return -b * b2 * (1.0 / 3.0 - b2 * (2.0 / 15.0 - b2 * 17.0 / 315.0));
  }
  return std::tanh(b) - b;
}

}  // namespace

DebyeAngles debye_angles(double nu, double x, double zeta) {
  if (!(zeta > nu)) throw DomainError("debye_angles: requires zeta > nu");
  if (!(x < nu)) throw DomainError("debye_angles: requires x < nu");
  if (!(x > 0.0)) throw DomainError("debye_angles: requires x > 0");
  DebyeAngles d;
  d.nu = nu;
  d.alpha = std::atan(std::sqrt((zeta - nu) * (zeta + nu)) / nu);
  d.phi = nu * tan_minus(d.alpha) - std::numbers::pi / 4.0;
  const double t = (nu - x) / x;  // nu/x - 1
  d.beta = std::log1p(t + std::sqrt(t * (t + 2.0)));
  d.psi = nu * tanh_minus(d.beta);
  return d;
}

DebyeValues debye_eval(double nu, double x, double zeta) {
  DebyeValues v;
  v.angles = debye_angles(nu, x, zeta);
  const auto& a = v.angles;
  const double pi = std::numbers::pi;
  v.J = std::sqrt(2.0 / (pi * nu * std::tan(a.alpha))) * std::cos(a.phi);
  v.dJ = -std::sqrt(std::sin(2.0 * a.alpha) / (pi * nu)) * std::sin(a.phi);
  const double e2psi = std::exp(2.0 * a.psi);
  v.H1.scale = LogReal::from_log(1, -a.psi - 0.5 * std::log(2.0 * pi * nu * std::tanh(a.beta)));
  v.H1.mantissa = cdouble(e2psi, -2.0);
  v.dH1.scale = LogReal::from_log(1, -a.psi + 0.5 * std::log(std::sinh(2.0 * a.beta) / (4.0 * pi * nu)));
  v.dH1.mantissa = cdouble(e2psi, 2.0);
  return v;
}

}  // namespace sgm::specfun
