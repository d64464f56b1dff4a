#include "sgm/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Geometry>

#include "sgm/asymptotic.hpp"
#include "sgm/errors.hpp"
#include "sgm/specfun.hpp"

namespace sgm {

namespace {

constexpr double kPi = std::numbers::pi;
const cdouble kI(0.0, 1.0);

double ell_factor(int ell) { return double(ell) * (ell + 1.0); }

// Radial function (TE: E, TM: H) for a0 = 1, as ln|E| and D = r E'/E.
struct Radial {
  double log_abs = 0.0;  // ln |E|; -inf when it underflows
  cdouble D;             // r E'(r) / E(r)
  cdouble eps;           // permittivity at r
};

Radial radial(const FieldMode& mode, double rho, bool interior) {
  Radial out;
  if (interior) {
    const cdouble z = mode.n * rho;
    out.eps = mode.n * mode.n;
    const auto jp = specfun::sph_bessel_j(mode.ell, z, true);
    out.log_abs = std::log(std::abs(jp.value));
    cdouble ratio;
    try {
      ratio = specfun::ratio_j(mode.ell, z);
    } catch (const ConvergenceError&) {
      ratio = jp.derivative / jp.value;
    }
    out.D = z * ratio;
    return out;
  }
  // Outside, E = A j + B y, matched to E(a) = j(nx) and E~(a) = c j~(nx).
  // Writing it as a1 h1 + a2 h2 would cancel |y|-sized terms when the wave
  // is evanescent at the surface.
  const double x = mode.k_per_nm * mode.radius_um * kNmPerUm;
  const cdouble z = mode.n * x;
  const auto jin = specfun::sph_bessel_j(mode.ell, z, true);
  const cdouble c = mode.pol == Polarization::TE ? mode.n : 1.0 / mode.n;
  const cdouble F = jin.value;
  const cdouble dF = c * (jin.derivative + F / z) - F / x;
  const auto hx = specfun::sph_hankel(specfun::HankelKind::first, mode.ell, x, true);
  const cdouble A = x * x * (F * hx.derivative.imag() - dF * hx.value.imag());
  const cdouble B = x * x * (hx.value.real() * dF - hx.derivative.real() * F);
  const auto h = specfun::sph_hankel(specfun::HankelKind::first, mode.ell, rho, true);
  const cdouble E = A * h.value.real() + B * h.value.imag();
  const cdouble dE = A * h.derivative.real() + B * h.derivative.imag();
  out.eps = 1.0;
  out.log_abs = std::log(std::abs(E));
  out.D = rho * dE / E;
  return out;
}

struct Shape {
  Eigen::Vector3cd E;
  Eigen::Vector3cd H;
};

// Fields for unit radial amplitude and the stored (scaled) Legendre values.
Shape field_shape(Polarization pol, int ell, const specfun::AngularKernels& k, double rho,
                  const Radial& rad) {
  const double L = ell_factor(ell);
  const double sL = std::sqrt(L);
  const Eigen::Vector3cd Y(k.P, 0.0, 0.0);
  const Eigen::Vector3cd Psi(0.0, k.T2, kI * k.T1);
  const Eigen::Vector3cd Phi(0.0, -kI * k.T1, k.T2);
  const Eigen::Vector3cd curl = (L / rho) * Y + ((rad.D + 1.0) / rho) * Psi;
  Shape s;
  if (pol == Polarization::TE) {
    s.E = (-kI / sL) * Phi;
    s.H = curl / sL;
  } else {
    s.H = (-kI / sL) * Phi;
    s.E = -curl / (rad.eps * sL);
  }
  return s;
}

void check_point(const FieldMode& mode, double r_um) {
  if (!(r_um > 0.0)) throw DomainError("field: r must be positive");
  if (!(mode.k_per_nm > 0.0)) throw DomainError("field: k must be positive");
  if (mode.ell < 1) throw DomainError("field: ell must be at least 1");
}

}  // namespace

Eigen::Vector3cd VshTriple::X() const { return (-kI / std::sqrt(ell_factor(ell))) * Phi; }

VshTriple vsh(int ell, int m, double theta, double phi) {
  const auto k = specfun::angular_kernels(ell, m, theta);
  const double s = std::exp(k.log_scale);
  const cdouble e = std::polar(s, m * phi);
  VshTriple v;
  v.ell = ell;
  v.Y = Eigen::Vector3cd(e * k.P, 0.0, 0.0);
  v.Psi = Eigen::Vector3cd(0.0, e * k.T2, e * kI * k.T1);
  v.Phi = Eigen::Vector3cd(0.0, -e * kI * k.T1, e * k.T2);
  return v;
}

FieldSample field_sample(const FieldMode& mode, double r_um, double theta) {
  check_point(mode, r_um);
  const auto k = specfun::angular_kernels(mode.ell, mode.m, theta);
  const double rho = mode.k_per_nm * r_um * kNmPerUm;
  const bool interior = r_um <= mode.radius_um;
  const Radial rad = radial(mode, rho, interior);
  const Shape s = field_shape(mode.pol, mode.ell, k, rho, rad);
  const double u_shape = rad.eps.real() * s.E.squaredNorm() + s.H.squaredNorm();
  const Eigen::Vector3cd c = s.E.cross(s.H.conjugate());
  FieldSample out;
  out.r_um = r_um;
  out.theta = theta;
  const double fac = std::isfinite(rad.log_abs) ? std::exp(2.0 * (rad.log_abs + k.log_scale)) : 0.0;
  out.u_normalized = u_shape * fac;
  out.S_r = c(0).real() * fac;
  out.S_theta = c(1).real() * fac;
  out.S_phi = c(2).real() * fac;
  const double den = c(1).real() + c(2).real();
  if (den == 0.0) {
    out.Theta = kPi / 2.0;
    out.normal_incidence = true;
  } else {
    out.Theta = std::atan(-c(0).real() / den);
  }
  return out;
}

double energy_density(const FieldMode& mode, double r_um, double theta) {
  const double pre = (mode.pol == Polarization::TE ? kEpsilon0 : kMu0) * mode.a0_abs * mode.a0_abs / 4.0;
  if (pre == 0.0) return 0.0;
  return pre * field_sample(mode, r_um, theta).u_normalized;
}

PoyntingTheta poynting_and_theta(const FieldMode& mode, double r_um, double theta) {
  const FieldSample f = field_sample(mode, r_um, theta);
  const double a2 = mode.a0_abs * mode.a0_abs;
  const double pre = mode.pol == Polarization::TE ? a2 / (2.0 * kZ0) : kZ0 * a2 / 2.0;
  return {pre * f.S_r, pre * f.S_theta, pre * f.S_phi, f.Theta, f.normal_incidence};
}

double avg_energy_density_normalized(const FieldMode& mode, double r_um) {
  check_point(mode, r_um);
  const double rho = mode.k_per_nm * r_um * kNmPerUm;
  const Radial rad = radial(mode, rho, r_um <= mode.radius_um);
  if (!std::isfinite(rad.log_abs)) return 0.0;
  const double L = ell_factor(mode.ell);
  const double bracket = (std::norm(rad.D + 1.0) + L) / (rho * rho);
  const double inner = mode.pol == Polarization::TE
                           ? rad.eps.real() + bracket
                           : 1.0 + rad.eps.real() / std::norm(rad.eps) * bracket;
  return std::exp(2.0 * rad.log_abs) * inner / (4.0 * kPi);
}

double avg_energy_density(const FieldMode& mode, double r_um) {
  const double pre = (mode.pol == Polarization::TE ? kEpsilon0 : kMu0) * mode.a0_abs * mode.a0_abs / 4.0;
  if (pre == 0.0) return 0.0;
  return pre * avg_energy_density_normalized(mode, r_um);
}

namespace {
std::pair<double, double> jj(int ell, double zeta) {
  const auto p = specfun::sph_bessel_j(ell, zeta, true);
  return {p.value.real(), p.derivative.real()};
}
}  // namespace

double f_bar_plus(int ell, double zeta) {
  const auto [j, jd] = jj(ell, zeta);
  const double a = jd + j / zeta;
  return a * a + (1.0 + ell_factor(ell) / (zeta * zeta)) * j * j;
}

double f_plus(int ell, double zeta, double v_plus) {
  const auto [j, jd] = jj(ell, zeta);
  const double a = jd + j / zeta;
  return a * a + (1.0 + v_plus / (zeta * zeta)) * j * j;
}

double f_minus(Polarization pol, int ell, double zeta) {
  const auto [j, jd] = jj(ell, zeta);
  const double u = pol == Polarization::TE ? 0.5 : 1.5;
  const double nu = ell + 0.5;
  const double a = jd + u * j / zeta;
  return a * a + (1.0 - nu * nu / (zeta * zeta)) * j * j;
}

double avg_energy_density_leading(Polarization pol, int ell, double zeta, double eta) {
  const double fb = f_bar_plus(ell, zeta);
  return (pol == Polarization::TE ? eta * eta : 1.0) * fb / (4.0 * kPi);
}

AngularShape angular_shape(int ell, int m, double theta) {
  const auto k = specfun::angular_kernels(ell, m, theta);
  const double t0 = std::hypot(k.T1, k.T2);
  AngularShape a;
  a.T0 = t0 * std::exp(k.log_scale);
  if (t0 == 0.0) return a;
  a.calT1 = k.P / t0;
  a.calT2 = k.T1 * k.P / (t0 * t0);
  a.calT3 = k.T2 * k.P / (t0 * t0);
  return a;
}

double theta_leading_order(Polarization pol, int ell, int m, double theta, double zeta,
                           double eta, double kappa) {
  const double t2 = angular_shape(ell, m, theta).calT2;
  if (t2 == 0.0) return kPi / 2.0;
  const auto [j, jd] = jj(ell, zeta);
  return std::atan(kappa * zeta * zeta * f_minus(pol, ell, zeta) /
                   (eta * ell_factor(ell) * t2 * j * j));
}

double theta_tm_debye(int ell, int m, double theta, double zeta, double eta, double kappa) {
  const double nu = ell + 0.5;
  if (!(zeta > nu)) throw DomainError("theta_tm_debye: requires zeta > nu");
  const double t2 = angular_shape(ell, m, theta).calT2;
  if (t2 == 0.0) return kPi / 2.0;
  const double alpha = std::atan(std::sqrt((zeta - nu) * (zeta + nu)) / nu);
  const double phi = nu * (std::tan(alpha) - alpha) - kPi / 4.0;
  const double a = zeta * std::tan(phi) + 1.0;
  return std::atan(kappa * (a * a + zeta * zeta - nu * nu) / (eta * ell_factor(ell) * t2));
}

std::vector<double> bessel_zeros(int ell, double zeta_max, bool derivative, double step) {
  if (!(step > 0.0)) throw DomainError("bessel_zeros: step must be positive");
  auto f = [&](double z) {
    const auto [j, jd] = jj(ell, z);
    return derivative ? jd : j;
  };
  std::vector<double> out;
  // no zeros of j_l or j_l' below nu
  double a = std::max(step, 0.8 * (ell + 0.5));
  double fa = f(a);
  while (a < zeta_max) {
    const double b = std::min(zeta_max, a + step);
    const double fb = f(b);
    if (fa != 0.0 && fb != 0.0 && (fa > 0.0) != (fb > 0.0)) {
      double lo = a, hi = b, flo = fa;
      for (int i = 0; i < 200 && hi - lo > 4e-16 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm > 0.0) == (flo > 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      out.push_back(0.5 * (lo + hi));
    } else if (fb == 0.0) {
      out.push_back(b);
    }
    a = b;
    fa = fb;
  }
  return out;
}

int count_radial_peaks(const std::vector<double>& v) {
  if (v.size() < 2) return 0;
  const double vmax = *std::max_element(v.begin(), v.end());
  const double floor = 1e-12 * vmax;
  int peaks = 0;
  for (std::size_t i = 1; i + 1 < v.size(); ++i)
    if (v[i] > v[i - 1] && v[i] > v[i + 1] && v[i] >= floor) ++peaks;
  if (v.back() > v[v.size() - 2] && v.back() >= floor) ++peaks;
  return peaks;
}

int radial_peak_count(int ell, double zeta_end, double step) {
  if (!(zeta_end > 0.0) || !(step > 0.0)) throw DomainError("radial_peak_count: invalid range");
  std::vector<double> v;
  // F-bar_+ rises monotonically well below the turning point
  const double start = std::min(zeta_end, std::max(step, 0.5 * (ell + 0.5)));
  const int n = static_cast<int>(std::ceil((zeta_end - start) / step));
  v.reserve(n + 1);
  for (int i = 0; i < n; ++i) v.push_back(f_bar_plus(ell, start + i * step));
  v.push_back(f_bar_plus(ell, zeta_end));
  return count_radial_peaks(v);
}

std::string to_string(ModeClass c) {
  switch (c) {
    case ModeClass::WGM: return "WGM";
    case ModeClass::WGMprime: return "WGM'";
    case ModeClass::SGM_candidate: return "SGM-candidate";
    case ModeClass::none: return "none";
  }
  return "none";
}

ModeClass classify_mode(int ell, double zeta, const ClassifyOptions& opt) {
  if (!(zeta > 0.0)) throw DomainError("classify_mode: zeta must be positive");
  const auto [j, jd] = jj(ell, zeta);
  const double tol = opt.tolerance * zeta;
  // Newton distances to the nearest zero of j and of j'
  if (jd != 0.0 && std::fabs(j / jd) <= tol) return ModeClass::WGM;
  const double jdd = -2.0 * jd / zeta - (1.0 - ell_factor(ell) / (zeta * zeta)) * j;
  if (jdd != 0.0 && std::fabs(jd / jdd) <= tol) return ModeClass::WGMprime;
  const double nu = ell + 0.5;
  if (ell >= 50 && zeta > nu && zeta < nu * opt.eta) {
    for (auto pol : {Polarization::TE, Polarization::TM}) {
      for (const auto& r : enumerate_sgm(pol, ell, 1.0, opt.eta))
        if (std::fabs(r.zeta - zeta) <= tol) return ModeClass::SGM_candidate;
    }
  }
  return ModeClass::none;
}

}  // namespace sgm
