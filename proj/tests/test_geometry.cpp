#include <doctest.h>

#include <cmath>
#include <string>

#include "bosegas/geometry.hpp"
#include "bosegas/quadrature.hpp"
#include "bosegas/rng.hpp"

using namespace bosegas;

TEST_CASE("box from slab profile") {
  BoxGeometry box = box_from_profile(SlabExp{0.5}, 2.0);
  CHECK(box.l1 == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-15));
  CHECK(box.l2 == doctest::Approx(2.0 * std::exp(1.0)).epsilon(1e-15));
  CHECK(box.l3 == 2.0);
  CHECK(box.volume() == doctest::Approx(box.l1 * box.l2 * box.l3));
}

TEST_CASE("box from beam profile") {
  BoxGeometry box = box_from_profile(BeamPoly{2.0}, 3.0);
  CHECK(box.l1 == doctest::Approx(9.0));
  CHECK(box.l2 == 3.0);
  CHECK(box.l3 == 3.0);
}

TEST_CASE("explicit box passes through") {
  BoxGeometry box = box_from_profile(ExplicitBox{1.0, 1.0, 1.0}, 123.0);
  CHECK(box.l1 == 1.0);
  CHECK(box.l2 == 1.0);
  CHECK(box.l3 == 1.0);
}

TEST_CASE("slab overflow names the admissible limit") {
  try {
    box_from_profile(SlabExp{1.0}, 800.0);
    FAIL("expected range_error");
  } catch (const range_error& e) {
    std::string msg = e.what();
    CHECK(msg.find("maximal admissible L") != std::string::npos);
    // The admissible limit for alpha = 1 sits just above 700.
    CHECK(msg.find("70") != std::string::npos);
  }
}

TEST_CASE("dirichlet ground state energy of the unit cube") {
  BoxGeometry box(1.0, 1.0, 1.0);
  ThermoParams thermo;
  double e = eigenvalue(box, Mode{1, 1, 1}, BoundaryCondition::Dirichlet, thermo);
  CHECK(e == doctest::Approx(1.5 * pi * pi).epsilon(1e-15));
}

TEST_CASE("periodic ground state has zero energy") {
  BoxGeometry box(1.0, 1.0, 1.0);
  ThermoParams thermo;
  CHECK(eigenvalue(box, Mode{0, 0, 0}, BoundaryCondition::Periodic, thermo) ==
        0.0);
}

TEST_CASE("doubling a side with the mode keeps the energy") {
  BoxGeometry box(2.0, 1.0, 1.0);
  ThermoParams thermo;
  double e = eigenvalue(box, Mode{2, 1, 1}, BoundaryCondition::Dirichlet, thermo);
  CHECK(e == doctest::Approx(1.5 * pi * pi).epsilon(1e-15));
}

TEST_CASE("eigenfunction center value and boundary vanishing") {
  BoxGeometry box(1.0, 1.0, 1.0);
  CHECK(eigenfunction(box, Mode{1, 1, 1}, Vec3(0, 0, 0)) ==
        doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
  CHECK(eigenfunction(box, Mode{1, 1, 1}, Vec3(0.5, 0, 0)) ==
        doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(eigenfunction(box, Mode{1, 1, 1}, Vec3(0.6, 0, 0)),
                  domain_error);
}

TEST_CASE("eigenfunctions are normalized") {
  BoxGeometry box(2.0, 1.0, 1.0);
  Mode m{2, 3, 1};
  double norm = integrate_box(
      [&](const Vec3& x) {
        double v = eigenfunction(box, m, x);
        return v * v;
      },
      Vec3(-1.0, -0.5, -0.5), Vec3(1.0, 0.5, 0.5), 32);
  CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("normalization holds for random modes") {
  Rng rng(20240817);
  for (int trial = 0; trial < 20; ++trial) {
    BoxGeometry box(1.0 + 2.0 * rng.uniform(), 1.0 + rng.uniform(),
                    0.5 + rng.uniform());
    Mode m{1 + static_cast<int>(rng.uniform() * 6),
           1 + static_cast<int>(rng.uniform() * 6),
           1 + static_cast<int>(rng.uniform() * 6)};
    double norm = integrate_box(
        [&](const Vec3& x) {
          double v = eigenfunction(box, m, x);
          return v * v;
        },
        Vec3(-0.5 * box.l1, -0.5 * box.l2, -0.5 * box.l3),
        Vec3(0.5 * box.l1, 0.5 * box.l2, 0.5 * box.l3), 48);
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("periodic eigenfunctions have uniform modulus") {
  BoxGeometry box(2.0, 3.0, 1.0);
  Mode m{1, -2, 0};
  auto v = eigenfunction_periodic(box, m, Vec3(0.3, -1.2, 0.1));
  CHECK(std::norm(v) == doctest::Approx(1.0 / box.volume()).epsilon(1e-13));
}

TEST_CASE("occupation closed-form values") {
  BoxGeometry box(1.0, 1.0, 1.0);
  ThermoParams thermo;
  SUBCASE("ground mode at beta*delta = ln 2") {
    CHECK(occupation(box, Mode{1, 1, 1}, thermo, std::log(2.0)) ==
          doctest::Approx(1.0).epsilon(1e-14));
  }
  SUBCASE("huge gap empties the state") {
    CHECK(occupation(box, Mode{1, 1, 1}, thermo, 1e4) == 0.0);
  }
  SUBCASE("first excited occupation") {
    double expected = 1.0 / std::expm1(1.5 * pi * pi + 0.1);
    double got = occupation(box, Mode{2, 1, 1}, thermo, 0.1);
    CHECK(got == doctest::Approx(expected).epsilon(1e-14));
    CHECK(got == doctest::Approx(3.1e-7).epsilon(0.05));
  }
  SUBCASE("stability requires a positive gap at the ground mode") {
    CHECK_THROWS_AS(occupation(box, Mode{1, 1, 1}, thermo, 0.0), domain_error);
    CHECK_THROWS_AS(occupation(box, Mode{1, 1, 1}, thermo, -0.5), domain_error);
    CHECK_NOTHROW(occupation(box, Mode{2, 1, 1}, thermo, 0.0));
  }
}
