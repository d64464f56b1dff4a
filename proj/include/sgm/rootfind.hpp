#pragma once

#include <string>
#include <vector>

#include "sgm/asymptotic.hpp"
#include "sgm/medium.hpp"
#include "sgm/scattering.hpp"

namespace sgm {

enum class RefineStatus {
  converged,
  kappa_below_float_resolution,
  not_converged,
  singular_jacobian,
  failed,
};
std::string to_string(RefineStatus status);

struct RefineOptions {
  double tolerance = 1e-9;         // on |residual|
  int max_iterations = 50;
  double resolution_floor = 1e-13; // refuse seeds with |kappa| zeta below this
};

struct RefineResult {
  SingularityRecord record;  // method = exact when converged, else the seed (or best iterate)
  RefineStatus status = RefineStatus::failed;
  double residual_norm = 0.0;
  int iterations = 0;
  std::string message;
};

/// Newton iteration on (Re, Im) of the exact residual over (zeta, kappa)
/// at fixed eta, with a finite-difference Jacobian. Iterates past the
/// residual tolerance until the relative update stalls below 1e-13, so
/// refining a converged record again is a no-op to ~1e-12.
RefineResult refine_exact(const SingularityRecord& seed, double radius_um, double eta,
                          const RefineOptions& options = {});

/// A singularity of the dispersive medium: the exact residual vanishes at
/// wavelength lambda for peak gain g0.
struct DispersiveSingularity {
  Polarization pol = Polarization::TE;
  int ell = 0;
  int seed_q = 0;
  double lambda_nm = 0.0;
  double g0_per_cm = 0.0;
  double eta = 0.0;
  LogReal kappa;
  double residual_norm = 0.0;
  std::string status;
};

struct DispersiveOptions {
  DispersionModel model = DispersionModel::linearized;
  DispersionBand band = {};
  double tolerance = 1e-9;
  int max_iterations = 50;
  double resolution_floor = 1e-13;
  double dedup_nm = 1e-4;
  int threads = 1;
  AsymptoticOptions asymptotic = {};
};

struct SeedFailure {
  int seed_q = 0;
  double seed_lambda_nm = 0.0;
  std::string reason;
};

struct DispersiveReport {
  std::vector<DispersiveSingularity> solutions;  // sorted by lambda
  std::vector<SeedFailure> failures;
  int seeds_tried = 0;
  int seeds_unresolvable = 0;
};

/// Seeds from the asymptotic records at eta = n0 whose wavelength lies in
/// the band; each seed (lambda, kappa) is mapped to g0 = -4 pi kappa /
/// (lambda0 f2(lambda0/lambda)) and polished by Newton over (lambda, g0).
DispersiveReport solve_dispersive(Polarization pol, int ell, double radius_um,
                                  const GainMaterial& material,
                                  const DispersiveOptions& options = {});

/// Greedy clustering by g0: records sorted by g0 join the current group
/// while every member stays within rel_tol of the group mean.
std::vector<std::vector<DispersiveSingularity>> equal_gain_groups(
    std::vector<DispersiveSingularity> records, double rel_tol = 0.01);

/// A point on the locus Re(residual) = 0 in the (lambda, g0) plane.
struct ContourPoint {
  int ell = 0;
  double g0_per_cm = 0.0;
  double lambda_nm = 0.0;
};

/// Zeros of Re(residual) in lambda for each g0 of the list, found by sign
/// changes on a uniform grid of `step_nm` followed by bisection; sign
/// changes across poles are discarded.
std::vector<ContourPoint> real_zero_contour(Polarization pol, int ell, double radius_um,
                                            const GainMaterial& material,
                                            const std::vector<double>& g0_values,
                                            double lambda_min_nm, double lambda_max_nm,
                                            double step_nm,
                                            DispersionModel model = DispersionModel::linearized);

}  // namespace sgm
