#include "sgm/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "sgm/errors.hpp"
#include "sgm/parallel.hpp"

namespace sgm {

std::string to_string(RefineStatus s) {
  switch (s) {
    case RefineStatus::converged: return "converged";
    case RefineStatus::kappa_below_float_resolution: return "kappa_below_float_resolution";
    case RefineStatus::not_converged: return "not_converged";
    case RefineStatus::singular_jacobian: return "singular_jacobian";
    case RefineStatus::failed: return "failed";
  }
  return "unknown";
}

namespace {

struct Newton2 {
  Eigen::Vector2d u;
  cdouble F;
  int iterations = 0;
  bool converged = false;
  bool singular = false;
};

// Newton on (Re f, Im f) over two real unknowns with central differences.
// `weights` rescale Re and Im in the merit used by the backtracking line
// search; Im f is often many decades below Re f.
template <class F, class Steps>
Newton2 newton2(F&& f, Eigen::Vector2d u, Steps&& steps, Eigen::Vector2d weights, double tol,
                int max_iterations) {
  auto safe = [&](const Eigen::Vector2d& v) -> std::optional<cdouble> {
    try {
      const cdouble r = f(v);
      if (!std::isfinite(r.real()) || !std::isfinite(r.imag())) return std::nullopt;
      return r;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  auto merit = [&](cdouble r) {
    return std::hypot(weights(0) * r.real(), weights(1) * r.imag());
  };
  Newton2 out;
  out.u = u;
  const auto f0 = safe(u);
  if (!f0) throw DomainError("newton: residual cannot be evaluated at the starting point");
  out.F = *f0;
  int polish = 0;
  for (int it = 1; it <= max_iterations; ++it) {
    out.iterations = it;
    Eigen::Matrix2d J;
    const Eigen::Vector2d h = steps(out.u);
    bool ok = true;
    for (int c = 0; c < 2 && ok; ++c) {
      Eigen::Vector2d up = out.u, dn = out.u;
      up(c) += h(c);
      dn(c) -= h(c);
      const auto fp = safe(up), fm = safe(dn);
      if (!fp || !fm) {
        ok = false;
        break;
      }
      const cdouble d = (*fp - *fm) / (2.0 * h(c));
      J(0, c) = d.real();
      J(1, c) = d.imag();
    }
    if (!ok || !J.allFinite() || J.determinant() == 0.0) {
      out.singular = true;
      return out;
    }
    const Eigen::Vector2d delta = J.fullPivLu().solve(Eigen::Vector2d(-out.F.real(), -out.F.imag()));
    if (!delta.allFinite()) {
      out.singular = true;
      return out;
    }
    const double rel = std::max(std::fabs(delta(0) / out.u(0)), std::fabs(delta(1) / out.u(1)));
    const double m0 = merit(out.F);
    double t = 1.0;
    std::optional<cdouble> accepted;
    Eigen::Vector2d next;
    for (int k = 0; k < 12; ++k, t *= 0.5) {
      next = out.u + t * delta;
      const auto fn = safe(next);
      if (fn && merit(*fn) < m0) {
        accepted = fn;
        break;
      }
    }
    if (!accepted) {
      // no decrease: at the noise floor if already within tolerance
      out.converged = std::abs(out.F) <= tol;
      return out;
    }
    out.u = next;
    out.F = *accepted;
    const double moved = t * rel;
    if (std::abs(out.F) <= tol) {
      if (moved < 1e-13) {
        out.converged = true;
        return out;
      }
      if (moved < 1e-10 && ++polish >= 4) {
        out.converged = true;
        return out;
      }
    }
  }
  out.converged = std::abs(out.F) <= tol && polish > 0;
  return out;
}

}  // namespace

RefineResult refine_exact(const SingularityRecord& seed, double radius_um, double eta,
                          const RefineOptions& opt) {
  RefineResult res;
  res.record = seed;
  const double kappa0 = seed.kappa.to_double();
  if (seed.kappa.is_zero() || !seed.kappa.representable() ||
      std::fabs(kappa0) * seed.zeta < opt.resolution_floor) {
    res.status = RefineStatus::kappa_below_float_resolution;
    res.message = fmt::format("|kappa| zeta = {} is below the residual resolution {}",
                              (seed.kappa.abs() * LogReal::from_double(seed.zeta)).to_string(),
                              opt.resolution_floor);
    res.record.flags.push_back(to_string(res.status));
    return res;
  }
  const Polarization pol = seed.pol;
  const int ell = seed.ell;
  auto f = [&](const Eigen::Vector2d& u) {
    return residual(pol, ell, u(0) / eta, cdouble(eta, u(1))).value;
  };
  auto steps = [](const Eigen::Vector2d& u) {
    return Eigen::Vector2d(1e-8 * std::fabs(u(0)), 1e-4 * std::fabs(u(1)));
  };
  const Eigen::Vector2d w(1.0, 1.0 / (std::fabs(kappa0) * seed.zeta));
  Newton2 n;
  try {
    n = newton2(f, Eigen::Vector2d(seed.zeta, kappa0), steps, w, opt.tolerance, opt.max_iterations);
  } catch (const std::exception& e) {
    res.status = RefineStatus::failed;
    res.message = e.what();
    res.record.flags.push_back(to_string(res.status));
    return res;
  }
  res.iterations = n.iterations;
  res.residual_norm = std::abs(n.F);
  res.record.zeta = n.u(0);
  res.record.kappa = LogReal::from_double(n.u(1));
  res.record.lambda_nm = 2.0 * std::numbers::pi * radius_um * kNmPerUm * eta / n.u(0);
  res.record.gain_per_cm = gain_from_kappa(res.record.lambda_nm, res.record.kappa);
  std::erase(res.record.flags, std::string("non_gain"));
  if (res.record.kappa.sign() >= 0) res.record.flags.push_back("non_gain");
  if (n.singular) {
    res.status = RefineStatus::singular_jacobian;
    res.message = "finite-difference Jacobian is singular";
  } else if (!n.converged) {
    res.status = RefineStatus::not_converged;
    res.message = fmt::format("|residual| = {:.3e} after {} iterations", res.residual_norm, n.iterations);
  } else {
    res.status = RefineStatus::converged;
    res.record.method = Method::exact;
    return res;
  }
  res.record.flags.push_back(to_string(res.status));
  return res;
}

DispersiveReport solve_dispersive(Polarization pol, int ell, double radius_um,
                                  const GainMaterial& material, const DispersiveOptions& opt) {
  validate(material);
  DispersiveReport report;
  const auto seeds = enumerate_sgm(pol, ell, radius_um, material.n0, opt.asymptotic);
  const double band_lo = opt.band.lower * material.lambda0_nm;
  const double band_hi = opt.band.upper * material.lambda0_nm;
  struct Job {
    const SingularityRecord* seed;
    double g0;
  };
  std::vector<Job> jobs;
  for (const auto& s : seeds) {
    if (s.lambda_nm < band_lo || s.lambda_nm > band_hi) continue;
    if (s.kappa.sign() >= 0) continue;
    const double kappa = s.kappa.to_double();
    if (!s.kappa.representable() || std::fabs(kappa) * s.zeta < opt.resolution_floor) {
      ++report.seeds_unresolvable;
      continue;
    }
    const double f2 = dispersion_f2(material.lambda0_nm / s.lambda_nm, material.gamma_hat);
    const double g0 = -4.0 * std::numbers::pi * kappa / (material.lambda0_nm / kNmPerCm * f2);
    jobs.push_back({&s, g0});
  }
  report.seeds_tried = static_cast<int>(jobs.size());

  std::vector<std::optional<DispersiveSingularity>> found(jobs.size());
  std::vector<std::optional<SeedFailure>> failed(jobs.size());
  parallel_for(jobs.size(), opt.threads, [&](std::size_t i) {
    const Job& job = jobs[i];
    auto index = [&](const Eigen::Vector2d& u) {
      if (!(u(1) >= 0.0)) throw DomainError("negative gain");
      return dispersive_index_value(material, u(0), u(1), opt.model, opt.band);
    };
    auto f = [&](const Eigen::Vector2d& u) {
      return residual(pol, ell, size_parameter(u(0), radius_um), index(u)).value;
    };
    auto steps = [](const Eigen::Vector2d& u) {
      return Eigen::Vector2d(1e-6 * u(0), 1e-4 * u(1));
    };
    const Eigen::Vector2d w(1.0, 1.0 / (std::fabs(job.seed->kappa.to_double()) * job.seed->zeta));
    try {
      const Newton2 n = newton2(f, Eigen::Vector2d(job.seed->lambda_nm, job.g0), steps, w,
                                opt.tolerance, opt.max_iterations);
      if (!n.converged) {
        failed[i] = SeedFailure{job.seed->q, job.seed->lambda_nm,
                                n.singular ? "singular_jacobian"
                                           : fmt::format("not_converged (|residual| = {:.3e})",
                                                         std::abs(n.F))};
        return;
      }
      const cdouble idx = index(n.u);
      DispersiveSingularity d;
      d.pol = pol;
      d.ell = ell;
      d.seed_q = job.seed->q;
      d.lambda_nm = n.u(0);
      d.g0_per_cm = n.u(1);
      d.eta = idx.real();
      d.kappa = LogReal::from_double(idx.imag());
      d.residual_norm = std::abs(n.F);
      d.status = "converged";
      found[i] = d;
    } catch (const std::exception& e) {
      failed[i] = SeedFailure{job.seed->q, job.seed->lambda_nm, e.what()};
    }
  });

  std::vector<DispersiveSingularity> all;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (found[i]) all.push_back(*found[i]);
    if (failed[i]) report.failures.push_back(*failed[i]);
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    return a.lambda_nm < b.lambda_nm || (a.lambda_nm == b.lambda_nm && a.seed_q < b.seed_q);
  });
  for (const auto& d : all) {
    if (!report.solutions.empty() &&
        std::fabs(d.lambda_nm - report.solutions.back().lambda_nm) < opt.dedup_nm) {
      if (d.residual_norm < report.solutions.back().residual_norm) report.solutions.back() = d;
      continue;
    }
    report.solutions.push_back(d);
  }
  return report;
}

std::vector<std::vector<DispersiveSingularity>> equal_gain_groups(
    std::vector<DispersiveSingularity> records, double rel_tol) {
  std::sort(records.begin(), records.end(),
            [](const auto& a, const auto& b) { return a.g0_per_cm < b.g0_per_cm; });
  std::vector<std::vector<DispersiveSingularity>> groups;
  auto fits = [rel_tol](const std::vector<DispersiveSingularity>& g) {
    double mean = 0.0;
    for (const auto& r : g) mean += r.g0_per_cm;
    mean /= static_cast<double>(g.size());
    for (const auto& r : g)
      if (std::fabs(r.g0_per_cm - mean) > rel_tol * mean) return false;
    return true;
  };
  for (auto& r : records) {
    if (!groups.empty()) {
      auto trial = groups.back();
      trial.push_back(r);
      if (fits(trial)) {
        groups.back() = std::move(trial);
        continue;
      }
    }
    groups.push_back({r});
  }
  return groups;
}

std::vector<ContourPoint> real_zero_contour(Polarization pol, int ell, double radius_um,
                                            const GainMaterial& material,
                                            const std::vector<double>& g0_values,
                                            double lambda_min_nm, double lambda_max_nm,
                                            double step_nm, DispersionModel model) {
  if (!(step_nm > 0.0) || !(lambda_max_nm > lambda_min_nm))
    throw DomainError("real_zero_contour: invalid wavelength grid");
  std::vector<ContourPoint> out;
  for (double g0 : g0_values) {
    auto re = [&](double lambda) {
      return residual(pol, ell, size_parameter(lambda, radius_um),
                      dispersive_index_value(material, lambda, g0, model))
          .value.real();
    };
    const int n = static_cast<int>(std::ceil((lambda_max_nm - lambda_min_nm) / step_nm));
    double a = lambda_min_nm;
    double fa = re(a);
    for (int i = 1; i <= n; ++i) {
      const double b = std::min(lambda_max_nm, lambda_min_nm + i * step_nm);
      const double fb = re(b);
      if ((fa > 0.0) != (fb > 0.0)) {
        double lo = a, hi = b, flo = fa;
        for (int k = 0; k < 80 && hi - lo > 1e-12 * hi; ++k) {
          const double mid = 0.5 * (lo + hi);
          const double fm = re(mid);
          if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
          } else {
            hi = mid;
          }
        }
        const double root = 0.5 * (lo + hi);
        // a sign change across a pole of j'/j leaves a large value behind
        if (std::fabs(re(root)) < std::min(std::fabs(fa), std::fabs(fb)))
          out.push_back({ell, g0, root});
      }
      a = b;
      fa = fb;
    }
  }
  return out;
}

}  // namespace sgm
