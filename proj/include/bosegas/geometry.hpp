#pragma once

#include <cmath>
#include <complex>
#include <variant>

#include "bosegas/common.hpp"

namespace bosegas {

struct ThermoParams {
  double beta = 1.0;
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    if (!(beta > 0.0) || !(hbar > 0.0) || !(mass > 0.0))
      throw domain_error("ThermoParams: beta, hbar, mass must be > 0");
  }

  double thermal_wavelength() const {
    return hbar * std::sqrt(2.0 * pi * beta / mass);
  }
};

// Quasi-2d geometry: two sides grow exponentially with the third.
struct SlabExp {
  double alpha;  // anisotropy rate, > 0
};

// Prism with one polynomially long side (L^gamma, L, L).
struct BeamPoly {
  double gamma;  // exponent, > 0
};

struct ExplicitBox {
  double l1, l2, l3;
};

using AnisotropyProfile = std::variant<SlabExp, BeamPoly, ExplicitBox>;

struct BoxGeometry {
  double l1, l2, l3;

  BoxGeometry(double a, double b, double c) : l1(a), l2(b), l3(c) {
    if (!(l1 > 0.0) || !(l2 > 0.0) || !(l3 > 0.0) || !std::isfinite(l1) ||
        !std::isfinite(l2) || !std::isfinite(l3))
      throw domain_error("BoxGeometry: sides must be positive and finite");
  }

  double volume() const { return l1 * l2 * l3; }
  double side(int j) const { return j == 0 ? l1 : (j == 1 ? l2 : l3); }

  bool contains(const Vec3& x) const {
    return std::fabs(x[0]) <= 0.5 * l1 && std::fabs(x[1]) <= 0.5 * l2 &&
           std::fabs(x[2]) <= 0.5 * l3;
  }
};

enum class BoundaryCondition { Dirichlet, Periodic };

struct Mode {
  int k1, k2, k3;

  int component(int j) const { return j == 0 ? k1 : (j == 1 ? k2 : k3); }
  bool operator==(const Mode&) const = default;
  auto operator<=>(const Mode&) const = default;
};

inline Mode ground_mode(BoundaryCondition bc) {
  return bc == BoundaryCondition::Dirichlet ? Mode{1, 1, 1} : Mode{0, 0, 0};
}

inline void validate_mode(const Mode& m, BoundaryCondition bc) {
  if (bc == BoundaryCondition::Dirichlet &&
      (m.k1 < 1 || m.k2 < 1 || m.k3 < 1))
    throw domain_error("Mode: Dirichlet quantum numbers must be >= 1");
}

BoxGeometry box_from_profile(const AnisotropyProfile& profile, double L);

// Single-particle energy of a mode.
double eigenvalue(const BoxGeometry& box, const Mode& mode,
                  BoundaryCondition bc, const ThermoParams& thermo);

// Energy above the ground state; the quantity the occupation depends on.
double relative_energy(const BoxGeometry& box, const Mode& mode,
                       BoundaryCondition bc, const ThermoParams& thermo);

// L^2-normalized eigenfunctions. Dirichlet modes are real.
double eigenfunction(const BoxGeometry& box, const Mode& mode, const Vec3& x);
std::complex<double> eigenfunction_periodic(const BoxGeometry& box,
                                            const Mode& mode, const Vec3& x);

// Mean occupation at chemical potential (ground energy - delta).
double occupation(const BoxGeometry& box, const Mode& mode,
                  const ThermoParams& thermo, double delta,
                  BoundaryCondition bc = BoundaryCondition::Dirichlet);

}  // namespace bosegas
