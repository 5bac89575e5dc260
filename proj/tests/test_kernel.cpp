#include <doctest.h>

#include <cmath>

#include "bosegas/heat.hpp"
#include "bosegas/io.hpp"
#include "bosegas/kernel.hpp"
#include "bosegas/quadrature.hpp"
#include "bosegas/rng.hpp"
#include "bosegas/special.hpp"
#include "bosegas/thermo.hpp"

#include <nlohmann/json.hpp>

using namespace bosegas;

namespace {

// Continuum density by adaptive quadrature of the radial momentum integral,
// independent of the polylog route.
double density_quadrature(double beta, double delta) {
  return adaptive_simpson(
             [&](double k) {
               double arg = beta * (0.5 * k * k + delta);
               return k * k / std::expm1(arg);
             },
             1e-8, 60.0 / std::sqrt(beta), 1e-14) /
         (2.0 * pi * pi);
}

}  // namespace

TEST_CASE("rank-1 kernel carries the ground occupation") {
  BoxGeometry box(1.0, 1.0, 1.0);
  ThermoParams thermo;
  double delta = 0.7;
  TruncatedKernel k = build_kernel(box, thermo, delta, EnergyCutoff{0.0});
  REQUIRE(k.rank() == 1);
  CHECK(k.modes[0] == Mode{1, 1, 1});
  CHECK(k.occupations[0] ==
        doctest::Approx(1.0 / std::expm1(thermo.beta * delta)).epsilon(1e-14));
}

TEST_CASE("three-mode enumeration breaks energy ties lexicographically") {
  BoxGeometry box(1.0, 1.0, 1.0);
  ThermoParams thermo;
  TruncatedKernel k = build_kernel(box, thermo, 0.3, ModeCount{3});
  REQUIRE(k.rank() == 3);
  CHECK(k.modes[0] == Mode{1, 1, 1});
  CHECK(k.modes[1] == Mode{1, 1, 2});
  CHECK(k.modes[2] == Mode{1, 2, 1});
  CHECK(k.occupations[0] >= k.occupations[1]);
  CHECK(k.occupations[1] == doctest::Approx(k.occupations[2]).epsilon(1e-14));
}

TEST_CASE("cutoff below the ground state is an error") {
  BoxGeometry box(1.0, 1.0, 1.0);
  ThermoParams thermo;
  CHECK_THROWS_AS(build_kernel(box, thermo, 0.3, EnergyCutoff{-1.0}),
                  domain_error);
  CHECK_THROWS_AS(build_kernel(box, thermo, 0.3, ModeCount{0}), domain_error);
}

TEST_CASE("retained mass plus tail bound brackets the full sum") {
  BoxGeometry box(10.0, 10.0, 10.0);
  ThermoParams thermo;
  double delta = 0.1;
  TruncatedKernel k = build_kernel(box, thermo, delta, EnergyCutoff{6.0});
  double retained = k.trace() / box.volume();
  double full = mean_density_exact(box, thermo, delta);
  CHECK(retained <= full + 1e-12);
  CHECK(full <= retained + k.tail_bound / box.volume() + 1e-12);
  // The finite box sits near the continuum value at this size.
  double continuum = density_quadrature(thermo.beta, delta);
  CHECK(std::fabs(full - continuum) / continuum < 0.25);
}

TEST_CASE("continuum density quadrature matches the series route") {
  ThermoParams thermo;
  for (double delta : {0.05, 0.3, 1.0}) {
    double series = rho_of_delta(thermo, delta);
    double quad = density_quadrature(thermo.beta, delta);
    CHECK(series == doctest::Approx(quad).epsilon(1e-8));
  }
}

TEST_CASE("kernel diagonal of a rank-1 kernel") {
  BoxGeometry box(1.0, 1.0, 1.0);
  ThermoParams thermo;
  TruncatedKernel k = build_kernel(box, thermo, 0.5, EnergyCutoff{0.0});
  double expected = k.occupations[0] * 8.0 / box.volume();
  CHECK(kernel_eval(k, Vec3(0, 0, 0), Vec3(0, 0, 0)) ==
        doctest::Approx(expected).epsilon(1e-13));
}

TEST_CASE("periodic rank-1 kernel is uniform") {
  BoxGeometry box(2.0, 2.0, 2.0);
  ThermoParams thermo;
  TruncatedKernel k = build_kernel(box, thermo, 0.5, ModeCount{1},
                                   BoundaryCondition::Periodic);
  REQUIRE(k.rank() == 1);
  CHECK(k.modes[0] == Mode{0, 0, 0});
  auto v1 = kernel_eval_complex(k, Vec3(0.1, -0.4, 0.9), Vec3(0.1, -0.4, 0.9));
  auto v2 = kernel_eval_complex(k, Vec3(0, 0, 0), Vec3(0.3, 0.3, -0.3));
  CHECK(v1.real() == doctest::Approx(k.occupations[0] / box.volume()));
  CHECK(std::abs(v2) ==
        doctest::Approx(k.occupations[0] / box.volume()).epsilon(1e-12));
}

TEST_CASE("kernel symmetry on random pairs") {
  BoxGeometry box(2.0, 1.5, 1.0);
  ThermoParams thermo;
  TruncatedKernel k = build_kernel(box, thermo, 0.2, ModeCount{12});
  Rng rng(7);
  for (int i = 0; i < 10; ++i) {
    Vec3 x(rng.uniform(-1.0, 1.0), rng.uniform(-0.7, 0.7), rng.uniform(-0.5, 0.5));
    Vec3 y(rng.uniform(-1.0, 1.0), rng.uniform(-0.7, 0.7), rng.uniform(-0.5, 0.5));
    CHECK(kernel_eval(k, x, y) == kernel_eval(k, y, x));
  }
}

TEST_CASE("kernel gram matrices are positive semidefinite") {
  BoxGeometry box(2.0, 1.0, 1.0);
  ThermoParams thermo;
  TruncatedKernel k = build_kernel(box, thermo, 0.4, ModeCount{10});
  Rng rng(99);
  for (int trial = 0; trial < 5; ++trial) {
    int n = 6;
    std::vector<Vec3> pts;
    for (int i = 0; i < n; ++i)
      pts.emplace_back(rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 0.5),
                       rng.uniform(-0.5, 0.5));
    MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = kernel_eval(k, pts[i], pts[j]);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * g.trace());
  }
}

TEST_CASE("trace identity against quadrature") {
  BoxGeometry box(2.0, 1.0, 1.0);
  ThermoParams thermo;
  TruncatedKernel k = build_kernel(box, thermo, 0.4, ModeCount{10});
  double quad = integrate_box(
      [&](const Vec3& x) { return kernel_eval(k, x, x); },
      Vec3(-1.0, -0.5, -0.5), Vec3(1.0, 0.5, 0.5), 48);
  CHECK(quad == doctest::Approx(k.trace()).epsilon(1e-8));
}

TEST_CASE("limit kernel diagonal at zero gap is the critical density") {
  ThermoParams thermo;
  KahanSum acc;
  for (long n = 1; n <= 1000000; ++n)
    acc.add(1.0 / (std::sqrt(static_cast<double>(n)) * n));
  double zeta_oracle = acc.value() + 2.0 / std::sqrt(1000000.5);
  double lam = thermo.thermal_wavelength();
  double expected = zeta_oracle / (lam * lam * lam);
  CHECK(limit_kernel_diag(thermo, 0.0) ==
        doctest::Approx(expected).epsilon(1e-9));
  CHECK(limit_kernel(thermo, 0.0, Vec3(0, 0, 0), Vec3(0, 0, 0)) ==
        doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("limit kernel vanishes at huge gap and decays in distance") {
  ThermoParams thermo;
  CHECK(limit_kernel_diag(thermo, 1e6) == doctest::Approx(0.0).epsilon(1e-30));
  double prev = limit_kernel(thermo, 0.0, Vec3(0, 0, 0), Vec3(0, 0, 0));
  for (double r : {0.5, 1.0, 2.0, 3.0, 5.0}) {
    double v = limit_kernel(thermo, 0.0, Vec3(0, 0, 0), Vec3(r, 0, 0));
    CHECK(v < prev);
    CHECK(v > 0.0);
    prev = v;
  }
  // At zero gap the decay is the slow 1/r law: m/(2 pi beta hbar^2 r).
  double at5 = limit_kernel(thermo, 0.0, Vec3(0, 0, 0), Vec3(5, 0, 0));
  CHECK(at5 == doctest::Approx(1.0 / (2.0 * pi * 5.0)).epsilon(1e-3));
  // A positive gap restores exponential decay: e^{-r sqrt(2 m delta)/hbar}.
  double gapped = limit_kernel(thermo, 0.5, Vec3(0, 0, 0), Vec3(5, 0, 0));
  CHECK(gapped < 1e-3);
}

TEST_CASE("limit kernel off-diagonal matches a brute Gaussian series") {
  ThermoParams thermo;
  for (double delta : {0.0, 0.02, 0.6}) {
    for (double r : {0.3, 1.7}) {
      double lam = thermo.thermal_wavelength();
      double a = pi * r * r / (lam * lam);
      KahanSum acc;
      for (long n = 1; n <= 3000000; ++n) {
        double term = std::exp(-thermo.beta * delta * n - a / n) /
                      (std::sqrt(static_cast<double>(n)) * n);
        acc.add(term);
        if (term < 1e-19 && n > 10) break;
      }
      double tail = (delta == 0.0) ? 2.0 / std::sqrt(3000000.5) : 0.0;
      double brute = (acc.value() + tail) / (lam * lam * lam);
      double got = limit_kernel(thermo, delta, Vec3(0, 0, 0), Vec3(r, 0, 0));
      CHECK(got == doctest::Approx(brute).epsilon(1e-7));
    }
  }
}

TEST_CASE("finite-box diagonal approaches the limit kernel") {
  ThermoParams thermo;
  double delta = 0.5;
  BoxGeometry box(40.0, 40.0, 40.0);
  TruncatedKernel k = build_kernel(box, thermo, delta, EnergyCutoff{16.0});
  double finite = kernel_eval(k, Vec3(0, 0, 0), Vec3(0, 0, 0));
  double limit = limit_kernel_diag(thermo, delta);
  CHECK(std::fabs(finite - limit) / limit < 0.02);
}

TEST_CASE("kernel json round trip") {
  BoxGeometry box(2.0, 1.0, 1.0);
  ThermoParams thermo;
  TruncatedKernel k = build_kernel(box, thermo, 0.4, ModeCount{5});
  auto j = kernel_to_json(k);
  TruncatedKernel back = kernel_from_json(j);
  REQUIRE(back.rank() == k.rank());
  for (int i = 0; i < k.rank(); ++i) {
    CHECK(back.modes[i] == k.modes[i]);
    CHECK(back.occupations[i] == k.occupations[i]);
  }
  CHECK(back.box.l1 == k.box.l1);
  CHECK(back.delta == k.delta);
  CHECK(back.tail_bound == k.tail_bound);
}
