#include "sgm/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "sgm/errors.hpp"
#include "sgm/specfun.hpp"

namespace sgm {

std::string to_string(Method method) {
  switch (method) {
    case Method::asymptotic: return "asymptotic";
    case Method::exact: return "exact";
    case Method::dispersive: return "dispersive";
  }
  return "unknown";
}

bool SingularityRecord::has_flag(const std::string& f) const {
  return std::find(flags.begin(), flags.end(), f) != flags.end();
}

namespace {

constexpr double kLn2 = std::numbers::ln2;

specfun::DebyeAngles angles_at(int ell, double eta, double zeta) {
  const double nu = ell + 0.5;
  if (!(zeta > nu && zeta < nu * eta))
    throw DomainError(fmt::format("asymptotic equations need {} < zeta < {}, got zeta = {}", nu,
                                  nu * eta, zeta));
  return specfun::debye_angles(nu, zeta / eta, zeta);
}

// zeta at which phi = target (phi is increasing in zeta)
double zeta_at_phase(double nu, double target) {
  const double c = (target + std::numbers::pi / 4.0) / nu;
  double lo = 0.0, hi = std::numbers::pi / 2.0;
  for (int i = 0; i < 200 && hi - lo > 1e-17; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (std::tan(mid) - mid < c)
      lo = mid;
    else
      hi = mid;
  }
  return nu / std::cos(0.5 * (lo + hi));
}

}  // namespace

double real_residual(Polarization pol, int ell, double eta, double zeta,
                     const AsymptoticOptions& options) {
  const auto a = angles_at(ell, eta, zeta);
  const double P = std::tanh(2.0 * a.psi - kLn2);
  const double base = P * std::sinh(a.beta);
  if (pol == Polarization::TE) return base - eta * std::tan(a.phi);
  return base - std::tan(a.phi) / eta +
         options.tm_offset_sign * (eta * eta - 1.0) / (2.0 * eta * zeta);
}

LogReal kappa_of_root(Polarization pol, int ell, double eta, double zeta) {
  const auto a = angles_at(ell, eta, zeta);
  // ln Q with Q = sech(u), u = 2 psi - ln 2
  const double u = std::fabs(2.0 * a.psi - kLn2);
  const double log_q = -(u - kLn2 + std::log1p(std::exp(-2.0 * u)));
  double den;
  const double tp = std::tan(a.phi);
  if (pol == Polarization::TE) {
    const double c = std::cos(a.alpha);
    den = zeta * (1.0 + tp * tp - c * c);
  } else {
    const double nu = a.nu;
    const double e2 = eta * eta;
    const double t = tp + 1.0 / zeta;
    den = zeta / e2 * (t * t + 1.0 - (nu * nu + 2.0) / (zeta * zeta)) + 2.0 / (zeta * e2);
  }
  if (den == 0.0) throw DomainError("kappa_of_root: vanishing denominator");
  const int sign = den > 0.0 ? -1 : 1;
  return LogReal::from_log(sign, log_q + std::log(std::sinh(a.beta)) - std::log(std::fabs(den)));
}

std::vector<SingularityRecord> enumerate_sgm(Polarization pol, int ell, double radius_um,
                                             double eta, const AsymptoticOptions& opt) {
  if (ell < 50) throw DomainError("enumerate_sgm: the leading-order equations need ell >= 50");
  if (!(eta > 1.0)) throw DomainError("enumerate_sgm: eta must exceed 1");
  if (!(radius_um > 0.0)) throw DomainError("enumerate_sgm: radius must be positive");
  const double nu = ell + 0.5;
  const double lo = nu * (1.0 + opt.window_margin);
  const double hi = nu * eta * (1.0 - opt.window_margin);
  if (!(lo < hi)) return {};

  std::vector<double> cuts{lo};
  for (int n = 0;; ++n) {
    const double z = zeta_at_phase(nu, (n + 0.5) * std::numbers::pi);
    if (z >= hi) break;
    if (z > lo) cuts.push_back(z);
  }
  cuts.push_back(hi);

  auto f = [&](double z) { return real_residual(pol, ell, eta, z, opt); };
  std::vector<double> roots;
  const std::size_t intervals = cuts.size() - 1;
  for (std::size_t i = 0; i < intervals; ++i) {
    // stay clear of the tan(phi) poles at interior cuts
    double a = i == 0 ? cuts[i] : cuts[i] * (1.0 + 1e-13);
    double b = i + 1 == intervals ? cuts[i + 1] : cuts[i + 1] * (1.0 - 1e-13);
    double fa = f(a);
    const double fb = f(b);
    if (fa * fb > 0.0) {
      const bool full_branch = i > 0 && i + 1 < intervals;
      if (full_branch)
        throw ConvergenceError(fmt::format(
            "enumerate_sgm: no root between branch points zeta = {} and {} ({} l = {}); "
            "f = {} and {}",
            a, b, to_string(pol), ell, fa, fb));
      continue;
    }
    while (b - a > opt.bisection_width) {
      const double m = 0.5 * (a + b);
      const double fm = f(m);
      if ((fm > 0.0) == (fa > 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    double z = 0.5 * (a + b);
    const double lo_b = i == 0 ? cuts[i] : cuts[i] * (1.0 + 1e-13);
    const double hi_b = i + 1 == intervals ? cuts[i + 1] : cuts[i + 1] * (1.0 - 1e-13);
    for (int k = 0; k < opt.newton_steps; ++k) {
      const double h = opt.newton_step;
      if (z - h <= lo_b || z + h >= hi_b) break;
      const double d = (f(z + h) - f(z - h)) / (2.0 * h);
      if (d == 0.0 || !std::isfinite(d)) break;
      const double next = z - f(z) / d;
      if (!(next > lo_b && next < hi_b) || std::fabs(next - z) > 10.0 * opt.bisection_width + 1e-9)
        break;
      z = next;
    }
    roots.push_back(z);
  }

  std::vector<SingularityRecord> out;
  out.reserve(roots.size());
  const double edge = 2.0 * opt.window_margin;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    SingularityRecord r;
    r.pol = pol;
    r.ell = ell;
    r.q = static_cast<int>(i) + 1;
    r.zeta = roots[i];
    r.lambda_nm = 2.0 * std::numbers::pi * radius_um * kNmPerUm * eta / r.zeta;
    r.kappa = kappa_of_root(pol, ell, eta, r.zeta);
    r.gain_per_cm = gain_from_kappa(r.lambda_nm, r.kappa);
    r.method = Method::asymptotic;
    if (r.zeta < nu * (1.0 + edge) || r.zeta > nu * eta * (1.0 - edge)) r.flags.push_back("near_edge");
    if (r.kappa.sign() >= 0) r.flags.push_back("non_gain");
    out.push_back(std::move(r));
  }
  return out;
}

TableSummary summarize(const std::vector<SingularityRecord>& records) {
  TableSummary s;
  if (records.empty()) return s;
  s.pol = records.front().pol;
  s.ell = records.front().ell;
  s.q_max = static_cast<int>(records.size());
  s.lambda_min_nm = records.front().lambda_nm;
  s.lambda_max_nm = records.front().lambda_nm;
  bool have_gain = false;
  for (const auto& r : records) {
    s.lambda_min_nm = std::min(s.lambda_min_nm, r.lambda_nm);
    s.lambda_max_nm = std::max(s.lambda_max_nm, r.lambda_nm);
    if (r.gain_per_cm.sign() <= 0) continue;
    if (!have_gain || r.gain_per_cm.log_abs() < s.g_min_per_cm.log_abs()) s.g_min_per_cm = r.gain_per_cm;
    have_gain = true;
  }
  return s;
}

}  // namespace sgm
