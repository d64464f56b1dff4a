#include <doctest.h>

#include <cmath>
#include <complex>

#include "sgm/asymptotic.hpp"
#include "sgm/errors.hpp"
#include "sgm/rootfind.hpp"
#include "sgm/scattering.hpp"
#include "sgm/specfun.hpp"
#include "support.hpp"

using namespace sgm;
using sgm::test::rel_err;

namespace {
struct CoeffRef {
  Polarization pol;
  int ell;
  double x;
  cdouble a0, a1;
};
// a2 = 1, n = 1.5 + 1e-4 i (mpmath, 50 digits)
const CoeffRef kCoeffs[] = {
    {Polarization::TE, 7, 12.3, {1.4324242085093409, -1.389704309880028}, {0.030887802321970163, -0.99798726802568839}},
    {Polarization::TE, 30, 45.6, {1.7594865627103333, 0.48124893225833199}, {0.8566199854888423, 0.50708225049119035}},
    {Polarization::TE, 50, 58.1, {-0.19387029869978495, 3.6712534381527656}, {-0.97241518961994966, -0.10780836862844443}},
    {Polarization::TM, 7, 12.3, {1.9667200172548371, -3.4811649562358429}, {-0.51537575181866976, -0.85390732216917611}},
    {Polarization::TM, 30, 45.6, {3.9879261288722346, 0.85629257741780526}, {0.90284988054087605, 0.40590665001413752}},
    {Polarization::TM, 50, 58.1, {0.48327523692407982, 3.7999373567048223}, {-0.95805924944314207, 0.24810718887267739}},
};

SingularityRecord te600_record(int q) {
  for (const auto& r : enumerate_sgm(Polarization::TE, 600, 50.0, 1.8217))
    if (r.q == q) return r;
  FAIL("missing record");
  return {};
}
}  // namespace

TEST_SUITE("scattering") {
  TEST_CASE("polarization parsing") {
    CHECK(parse_polarization("TE") == Polarization::TE);
    CHECK(parse_polarization("tm") == Polarization::TM);
    CHECK_THROWS_AS(parse_polarization("xy"), ConfigError);
    CHECK(to_string(Polarization::TM) == "tm");
  }

  TEST_CASE("size state") {
    const auto s = SizeState::from_zeta(600, 602.280, 1.8217, 50.0);
    CHECK(s.nu - s.ell == 0.5);
    CHECK(s.zeta / s.x == doctest::Approx(1.8217).epsilon(1e-15));
    CHECK(s.lambda_nm == doctest::Approx(2 * M_PI * 50000.0 * 1.8217 / 602.280).epsilon(1e-14));
    const auto t = SizeState::from_wavelength(600, s.lambda_nm, 50.0, 1.8217);
    CHECK(t.zeta == doctest::Approx(602.280).epsilon(1e-14));
  }

  TEST_CASE("interface coefficients against the oracle") {
    const cdouble n(1.5, 1e-4);
    for (const auto& c : kCoeffs) {
      CAPTURE(c.ell);
      const auto t = solve_coefficients(c.pol, c.ell, c.x, n);
      CHECK(t.a2 == cdouble(1.0));
      CHECK(rel_err(t.a0, c.a0) < 1e-12);
      CHECK(rel_err(t.a1, c.a1) < 1e-12);
      const auto res = boundary_residuals(c.pol, c.ell, c.x, n, t);
      CHECK(res[0] <= 1e-10);
      CHECK(res[1] <= 1e-10);
      CHECK(rel_err(reflection(c.pol, c.ell, c.x, n).R, c.a1) < 1e-12);
    }
  }

  TEST_CASE("reflection amplitude in the vacuum and lossless limits") {
    for (auto pol : {Polarization::TE, Polarization::TM}) {
      const auto r = reflection(pol, 600, 700.0, cdouble(1.0));
      CHECK(std::abs(r.R - 1.0) <= 1e-10);
      const auto l = reflection(pol, 600, 400.0, cdouble(1.8217));
      CHECK(std::fabs(std::abs(l.R) - 1.0) <= 1e-8);
      CHECK(std::fabs(l.log10_R2) <= 1e-8);
    }
  }

  TEST_CASE("TE residual in tilde form agrees with the plain form") {
    sgm::test::Gen gen(301);
    for (int i = 0; i < 100; ++i) {
      const int ell = gen.integer(50, 700);
      const double nu = ell + 0.5;
      const double eta = gen.uniform(1.2, 2.0);
      const double x = gen.uniform(nu / eta + 0.1, nu - 0.1);
      const cdouble n(eta, -gen.log_uniform(1e-12, 1e-3));
      const auto plain = residual(Polarization::TE, ell, x, n);
      if (plain.inverted) continue;
      CHECK(rel_err(residual_tilde_form(ell, x, n), plain.value) <= 1e-12);
    }
  }

  TEST_CASE("residual is conjugation symmetric") {
    // The interior term is conjugation symmetric for every real x. The
    // exterior h1'/h1 carries Im = 1/(x^2 |h1|^2), which is below rounding
    // only in the evanescent region x < nu, where the singularities live.
    sgm::test::Gen gen(302);
    for (int i = 0; i < 100; ++i) {
      const auto pol = gen.coin() ? Polarization::TE : Polarization::TM;
      const int ell = gen.integer(300, 700);
      const double nu = ell + 0.5;
      const double x = gen.uniform(0.5 * nu, 0.8 * nu);
      const cdouble n(gen.uniform(1.05, 2.0), gen.uniform(-1e-2, 1e-2));
      const auto a = residual(pol, ell, x, n);
      const auto b = residual(pol, ell, x, std::conj(n));
      CHECK(a.inverted == b.inverted);
      CHECK(rel_err(b.value, std::conj(a.value)) <= 1e-12);
    }
    for (int i = 0; i < 100; ++i) {
      const auto pol = gen.coin() ? Polarization::TE : Polarization::TM;
      const int ell = gen.integer(1, 700);
      const double x = gen.uniform(std::max(1.0, 0.6 * ell), 1.2 * ell + 10.0);
      const cdouble n(gen.uniform(1.05, 2.0), gen.uniform(-1e-2, 1e-2));
      const auto a = residual(pol, ell, x, n);
      const auto b = residual(pol, ell, x, std::conj(n));
      if (a.inverted || b.inverted) continue;
      const cdouble h = specfun::hankel1_ratio(ell, x).log_derivative;
      const cdouble exterior_shift(0.0, 2.0 * h.imag());
      CHECK(std::abs(b.value - (std::conj(a.value) + exterior_shift)) <= 1e-12 * (std::abs(a.value) + std::abs(h)));
    }
  }

  TEST_CASE("near a zero of j the residual switches to the inverted form") {
    // first positive zero of j_7
    const double z0 = 11.657032192516372;
    const auto r = residual(Polarization::TE, 7, z0 / 1.5, cdouble(1.5, 0.0));
    CHECK(r.inverted);
    CHECK(std::isfinite(std::abs(r.value)));
  }

  TEST_CASE("exact singularity is a pole of R") {
    const auto seed = te600_record(100);
    const auto ref = refine_exact(seed, 50.0, 1.8217);
    REQUIRE(ref.status == RefineStatus::converged);
    const double x = ref.record.zeta / 1.8217;
    const cdouble n(1.8217, ref.record.kappa.to_double());
    const auto r = reflection(Polarization::TE, 600, x, n);
    // off resonance |R| = O(1); at the root 1/|R| <= 1e-6
    CHECK(r.log10_R2 >= 12.0);
    CHECK(r.near_singular);
    // the boundary system is singular up to the root tolerance
    try {
      const auto c = solve_coefficients(Polarization::TE, 600, x, n);
      CHECK(std::abs(c.a1) >= 1e6);
    } catch (const DomainError&) {
    }

    SUBCASE("a single-point scan at the root flags one peak") {
      const auto scan = reflection_scan(Polarization::TE, 600, 50.0, FixedIndex{n},
                                        {ref.record.lambda_nm});
      REQUIRE(scan.points.size() == 1);
      CHECK(scan.peaks.size() == 1);
      CHECK(scan.points[0].near_singular);
    }
  }

  TEST_CASE("lossless scan has no peaks and |R| = 1 everywhere") {
    std::vector<double> grid;
    for (int i = 0; i < 400; ++i) grid.push_back(600.0 + 0.5 * i);
    for (auto pol : {Polarization::TE, Polarization::TM}) {
      const auto scan = reflection_scan(pol, 540, 50.0, FixedIndex{cdouble(1.8217)}, grid);
      CHECK(scan.peaks.empty());
      for (const auto& p : scan.points) CHECK(std::fabs(p.log10_R2) <= 1e-8);
    }
    const auto m = preset("ndyag");
    const auto scan = reflection_scan(Polarization::TE, 540, 50.0, DispersiveIndex{m, 0.0}, grid);
    CHECK(scan.peaks.empty());
  }

  TEST_CASE("scan order does not depend on threads") {
    std::vector<double> grid;
    for (int i = 0; i < 300; ++i) grid.push_back(620.0 + 0.03 * i);
    const DispersiveIndex idx{preset("ndyag"), 6.682e-3};
    ScanOptions one;
    ScanOptions many;
    many.threads = 4;
    const auto a = reflection_scan(Polarization::TE, 540, 50.0, idx, grid, one);
    const auto b = reflection_scan(Polarization::TE, 540, 50.0, idx, grid, many);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i].log10_R2 == b.points[i].log10_R2);
    REQUIRE(a.peaks.size() == b.peaks.size());
    for (std::size_t i = 0; i < a.peaks.size(); ++i) CHECK(a.peaks[i].lambda_nm == b.peaks[i].lambda_nm);
  }

  TEST_CASE("descending grid is rejected") {
    CHECK_THROWS_AS(reflection_scan(Polarization::TE, 50, 5.0, FixedIndex{cdouble(1.5)}, {700.0, 600.0}),
                    DomainError);
  }
}
