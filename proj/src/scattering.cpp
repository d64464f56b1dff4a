#include "sgm/scattering.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "sgm/detail/golden.hpp"
#include "sgm/errors.hpp"
#include "sgm/parallel.hpp"
#include "sgm/specfun.hpp"

namespace sgm {

std::string to_string(Polarization pol) { return pol == Polarization::TE ? "te" : "tm"; }

Polarization parse_polarization(const std::string& text) {
  std::string s = text;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "te") return Polarization::TE;
  if (s == "tm") return Polarization::TM;
  throw ConfigError("unknown polarization '" + text + "' (expected te or tm)");
}

SizeState SizeState::from_wavelength(int ell, double lambda_nm, double radius_um, double eta) {
  SizeState s;
  s.ell = ell;
  s.lambda_nm = lambda_nm;
  s.radius_um = radius_um;
  s.k_per_nm = 2.0 * std::numbers::pi / lambda_nm;
  s.x = size_parameter(lambda_nm, radius_um);
  s.zeta = s.x * eta;
  s.nu = ell + 0.5;
  return s;
}

SizeState SizeState::from_zeta(int ell, double zeta, double eta, double radius_um) {
  return from_wavelength(ell, wavelength_from_size(zeta / eta, radius_um), radius_um, eta);
}

namespace {

// Interior factor written as a pair (v, t) with t/v = j~(z)/j(z). Normally
// v = 1; near a zero of j the pair is (j/j', 1 + (j/j')/z) instead.
struct Interior {
  cdouble v;
  cdouble t;
  cdouble log_ratio;  // j'/j, or j/j' when inverted
  bool inverted = false;
};

Interior interior(int ell, cdouble z) {
  Interior in;
  bool use_inverse = false;
  try {
    in.log_ratio = specfun::ratio_j(ell, z);
    use_inverse = std::abs(in.log_ratio) > 1e8 * (1.0 + std::abs(z));
  } catch (const ConvergenceError&) {
    use_inverse = true;
  }
  if (!use_inverse) {
    in.v = 1.0;
    in.t = in.log_ratio + 1.0 / z;
    return in;
  }
  const auto jp = specfun::sph_bessel_j(ell, z, true);
  if (jp.derivative == 0.0) throw DomainError("interior solution vanishes with its derivative");
  const cdouble q = jp.value / jp.derivative;
  in.inverted = true;
  in.log_ratio = q;
  in.v = q;
  in.t = 1.0 + q / z;
  return in;
}

void check_x(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("size parameter x must be positive");
}

}  // namespace

Reflection reflection(Polarization pol, int ell, double x, cdouble n,
                      const ReflectionOptions& options) {
  check_x(x);
  const auto h = specfun::hankel1_ratio(ell, x);
  const cdouble H = h.log_derivative + 1.0 / x;
  const Interior in = interior(ell, n * x);
  cdouble num, den;
  double diff;  // |num|^2 - |den|^2
  double terms;
  if (pol == Polarization::TE) {
    const cdouble A = n * in.t;
    num = A - std::conj(H) * in.v;
    den = H * in.v - A;
    diff = 4.0 * H.imag() * (A * std::conj(in.v)).imag();
    terms = std::abs(A) + std::abs(H * in.v);
  } else {
    const cdouble A = in.t;
    num = A - n * std::conj(H) * in.v;
    den = n * H * in.v - A;
    diff = -4.0 * H.imag() * (n * in.v * std::conj(A)).imag();
    terms = std::abs(A) + std::abs(n * H * in.v);
  }
  Reflection r;
  const double den2 = std::norm(den);
  const cdouble phase = std::polar(1.0, -2.0 * h.phase);
  if (den2 == 0.0) {
    r.R = cdouble(std::numeric_limits<double>::infinity(), 0.0);
    r.log10_R2 = std::numeric_limits<double>::infinity();
    r.near_singular = true;
    r.condition = std::numeric_limits<double>::infinity();
    return r;
  }
  r.R = phase * (num / den);
  const double q = diff / den2;
  if (q > -0.5 && std::isfinite(q))
    r.log10_R2 = std::log1p(q) / std::numbers::ln10;
  else if (std::isfinite(q))
    r.log10_R2 = 2.0 * (std::log10(std::abs(num)) - std::log10(std::abs(den)));
  else
    r.log10_R2 = 2.0 * (std::log10(std::abs(num)) - 0.5 * std::log10(den2));
  r.condition = terms / std::sqrt(den2);
  r.near_singular = r.log10_R2 > 2.0 * std::log10(options.near_singular_threshold);
  return r;
}

Residual residual(Polarization pol, int ell, double x, cdouble n) {
  check_x(x);
  const cdouble hr = specfun::hankel1_ratio(ell, x).log_derivative;
  const Interior in = interior(ell, n * x);
  Residual out;
  out.inverted = in.inverted;
  if (pol == Polarization::TE) {
    out.value = in.inverted ? hr * in.log_ratio - n : hr - n * in.log_ratio;
  } else {
    const cdouble outer = hr + (1.0 - 1.0 / (n * n)) / x;
    out.value = in.inverted ? outer * in.log_ratio - 1.0 / n : outer - in.log_ratio / n;
  }
  return out;
}

cdouble residual_tilde_form(int ell, double x, cdouble n) {
  check_x(x);
  const cdouble H = specfun::hankel1_ratio(ell, x).log_derivative + 1.0 / x;
  const cdouble z = n * x;
  const cdouble J = specfun::ratio_j(ell, z) + 1.0 / z;
  return H - n * J;
}

namespace {

struct Boundary {
  cdouble j, jt;             // j(nx), j~(nx)
  cdouble h1, h1t, h2, h2t;  // h(x), h~(x)
  cdouble c;                 // n (TE) or 1/n (TM)
};

Boundary boundary_values(Polarization pol, int ell, double x, cdouble n) {
  check_x(x);
  const cdouble z = n * x;
  const auto jp = specfun::sph_bessel_j(ell, z, true);
  const auto h1 = specfun::sph_hankel(specfun::HankelKind::first, ell, x, true);
  Boundary b;
  b.j = jp.value;
  b.jt = jp.derivative + jp.value / z;
  b.h1 = h1.value;
  b.h1t = h1.derivative + h1.value / x;
  b.h2 = std::conj(b.h1);
  b.h2t = std::conj(b.h1t);
  b.c = pol == Polarization::TE ? n : 1.0 / n;
  return b;
}

}  // namespace

CoefficientTriple solve_coefficients(Polarization pol, int ell, double x, cdouble n) {
  const Boundary b = boundary_values(pol, ell, x, n);
  // a0 j - a1 h1 = h2, a0 c j~ - a1 h1~ = h2~; columns are equilibrated
  // because |h| and |j| can differ by 200 orders of magnitude.
  Eigen::Matrix2cd M;
  M << b.j, -b.h1, b.c * b.jt, -b.h1t;
  Eigen::Vector2cd rhs(b.h2, b.h2t);
  Eigen::Vector2d scale;
  for (int col = 0; col < 2; ++col) {
    scale(col) = M.col(col).cwiseAbs().maxCoeff();
    if (scale(col) == 0.0) throw DomainError("boundary system has a vanishing column");
    M.col(col) /= scale(col);
  }
  const double rhs_scale = rhs.cwiseAbs().maxCoeff();
  rhs /= rhs_scale;
  Eigen::FullPivLU<Eigen::Matrix2cd> lu(M);
  if (!lu.isInvertible())
    throw DomainError("boundary system is singular (spectral singularity of the incoming-wave normalization)");
  Eigen::Vector2cd sol = lu.solve(rhs);
  CoefficientTriple out;
  out.a0 = sol(0) * (rhs_scale / scale(0));
  out.a1 = sol(1) * (rhs_scale / scale(1));
  out.a2 = 1.0;
  if (!std::isfinite(std::abs(out.a0)) || !std::isfinite(std::abs(out.a1)))
    throw DomainError("boundary system is singular (coefficients overflow)");
  return out;
}

std::array<double, 2> boundary_residuals(Polarization pol, int ell, double x, cdouble n,
                                         const CoefficientTriple& c) {
  const Boundary b = boundary_values(pol, ell, x, n);
  const cdouble t1 = c.a0 * b.j, t2 = c.a1 * b.h1, t3 = c.a2 * b.h2;
  const cdouble u1 = c.a0 * b.c * b.jt, u2 = c.a1 * b.h1t, u3 = c.a2 * b.h2t;
  return {std::abs(t1 - t2 - t3) / (std::abs(t1) + std::abs(t2) + std::abs(t3)),
          std::abs(u1 - u2 - u3) / (std::abs(u1) + std::abs(u2) + std::abs(u3))};
}

cdouble index_at(const IndexSource& source, double lambda_nm) {
  if (const auto* f = std::get_if<FixedIndex>(&source)) return f->n;
  const auto& d = std::get<DispersiveIndex>(source);
  return dispersive_index_value(d.material, lambda_nm, d.g0_per_cm, d.model, d.band);
}

ScanResult reflection_scan(Polarization pol, int ell, double radius_um, const IndexSource& index,
                           const std::vector<double>& grid, const ScanOptions& options) {
  if (!std::is_sorted(grid.begin(), grid.end()))
    throw DomainError("reflection_scan: wavelength grid must be ascending");
  const ReflectionOptions ropt{options.near_singular_threshold};
  auto eval = [&](double lambda) {
    return reflection(pol, ell, size_parameter(lambda, radius_um), index_at(index, lambda), ropt);
  };
  ScanResult out;
  out.points.resize(grid.size());
  parallel_for(grid.size(), options.threads, [&](std::size_t i) {
    ScanPoint& p = out.points[i];
    p.lambda_nm = grid[i];
    try {
      const Reflection r = eval(grid[i]);
      p.log10_R2 = r.log10_R2;
      p.near_singular = r.near_singular;
    } catch (const std::exception&) {
      p.failed = true;
      p.log10_R2 = std::numeric_limits<double>::quiet_NaN();
    }
  });

  // Peaks at a singularity are far narrower than any practical grid, so every
  // grid maximum is refined first and the threshold applied afterwards.
  const double level = std::log10(options.peak_threshold_R2);
  const std::size_t n = out.points.size();
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < n; ++i) {
    const ScanPoint& p = out.points[i];
    if (p.failed) continue;
    const bool left_ok = i == 0 || out.points[i - 1].failed || p.log10_R2 > out.points[i - 1].log10_R2;
    const bool right_ok = i + 1 == n || out.points[i + 1].failed || p.log10_R2 >= out.points[i + 1].log10_R2;
    if (left_ok && right_ok) candidates.push_back(i);
  }
  std::vector<ScanPeak> refined(candidates.size());
  parallel_for(candidates.size(), options.threads, [&](std::size_t c) {
    const std::size_t i = candidates[c];
    const ScanPoint& p = out.points[i];
    ScanPeak peak{p.lambda_nm, p.log10_R2, p.near_singular};
    if (options.refine_peaks && i > 0 && i + 1 < n) {
      auto f = [&](double lambda) {
        try {
          return eval(lambda).log10_R2;
        } catch (const std::exception&) {
          return -std::numeric_limits<double>::infinity();
        }
      };
      auto [lam, val] = detail::golden_maximize(f, grid[i - 1], grid[i + 1], 1e-12 * grid[i + 1]);
      // A pole of R is far narrower than the golden tolerance. The residual
      // (the denominator of R) is smooth across it, so minimize |residual|
      // along the real axis by Newton steps.
      auto F = [&](double lambda) {
        return residual(pol, ell, size_parameter(lambda, radius_um), index_at(index, lambda)).value;
      };
      try {
        for (int it = 0; it < 30; ++it) {
          const double h = 1e-9 * lam;
          const cdouble g = F(lam);
          const cdouble dg = (F(lam + h) - F(lam - h)) / (2.0 * h);
          if (g == 0.0 || std::norm(dg) == 0.0) break;
          const double next = lam - (g * std::conj(dg)).real() / std::norm(dg);
          if (!(next > grid[i - 1] && next < grid[i + 1])) break;
          const double v = f(next);
          const bool stalled = std::fabs(next - lam) <= 4e-16 * lam;
          if (v >= val) {
            lam = next;
            val = v;
          }
          if (stalled) break;
        }
      } catch (const std::exception&) {
      }
      if (val > peak.log10_R2) {
        peak.lambda_nm = lam;
        peak.log10_R2 = val;
        peak.near_singular = val > 2.0 * std::log10(options.near_singular_threshold);
      }
    }
    refined[c] = peak;
  });
  for (const auto& peak : refined)
    if (peak.log10_R2 > level) out.peaks.push_back(peak);
  return out;
}

}  // namespace sgm
