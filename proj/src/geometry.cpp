#include "bosegas/geometry.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace bosegas {

BoxGeometry box_from_profile(const AnisotropyProfile& profile, double L) {
  if (!(L > 0.0)) throw domain_error("box_from_profile: L must be > 0");
  if (const auto* slab = std::get_if<SlabExp>(&profile)) {
    if (!(slab->alpha > 0.0)) throw domain_error("SlabExp: alpha must be > 0");
    double log_side = std::log(L) + slab->alpha * L;
    double log_max = std::log(std::numeric_limits<double>::max());
    if (log_side >= log_max) {
      // Solve log(L) + alpha L = log_max for the admissible limit.
      double l_max = log_max / slab->alpha;
      for (int i = 0; i < 60; ++i)
        l_max = (log_max - std::log(l_max)) / slab->alpha;
      throw range_error("box_from_profile: exp(alpha*L) overflows; maximal "
                        "admissible L is " + std::to_string(l_max));
    }
    double side = L * std::exp(slab->alpha * L);
    return {side, side, L};
  }
  if (const auto* beam = std::get_if<BeamPoly>(&profile)) {
    if (!(beam->gamma > 0.0)) throw domain_error("BeamPoly: gamma must be > 0");
    return {std::pow(L, beam->gamma), L, L};
  }
  const auto& ex = std::get<ExplicitBox>(profile);
  return {ex.l1, ex.l2, ex.l3};
}

double eigenvalue(const BoxGeometry& box, const Mode& mode,
                  BoundaryCondition bc, const ThermoParams& thermo) {
  validate_mode(mode, bc);
  double factor = (bc == BoundaryCondition::Dirichlet) ? pi : 2.0 * pi;
  double sum = 0.0;
  for (int j = 0; j < 3; ++j) {
    double kj = factor * mode.component(j) / box.side(j);
    sum += kj * kj;
  }
  return 0.5 * thermo.hbar * thermo.hbar / thermo.mass * sum;
}

double relative_energy(const BoxGeometry& box, const Mode& mode,
                       BoundaryCondition bc, const ThermoParams& thermo) {
  validate_mode(mode, bc);
  double factor = (bc == BoundaryCondition::Dirichlet) ? pi : 2.0 * pi;
  double coef = 0.5 * thermo.hbar * thermo.hbar / thermo.mass;
  double sum = 0.0;
  for (int j = 0; j < 3; ++j) {
    double k = mode.component(j);
    double g = (bc == BoundaryCondition::Dirichlet) ? 1.0 : 0.0;
    sum += (k * k - g) / (box.side(j) * box.side(j));
  }
  return coef * factor * factor * sum;
}

double eigenfunction(const BoxGeometry& box, const Mode& mode, const Vec3& x) {
  validate_mode(mode, BoundaryCondition::Dirichlet);
  if (!box.contains(x)) throw domain_error("eigenfunction: x outside the box");
  double value = 1.0;
  for (int j = 0; j < 3; ++j) {
    double lj = box.side(j);
    int kj = mode.component(j);
    value *= std::sqrt(2.0 / lj) * std::sin(0.5 * pi * kj + pi * kj * x[j] / lj);
  }
  return value;
}

std::complex<double> eigenfunction_periodic(const BoxGeometry& box,
                                            const Mode& mode, const Vec3& x) {
  if (!box.contains(x))
    throw domain_error("eigenfunction_periodic: x outside the box");
  double norm = 1.0, phase = 0.0;
  for (int j = 0; j < 3; ++j) {
    double lj = box.side(j);
    norm /= std::sqrt(lj);
    phase += 2.0 * pi * mode.component(j) * (x[j] + 0.5 * lj) / lj;
  }
  return std::polar(norm, phase);
}

double occupation(const BoxGeometry& box, const Mode& mode,
                  const ThermoParams& thermo, double delta,
                  BoundaryCondition bc) {
  thermo.validate();
  double rel = relative_energy(box, mode, bc, thermo);
  if (delta <= 0.0 && rel <= 0.0)
    throw domain_error(
        "occupation: stability requires delta > 0 at the ground mode");
  double arg = thermo.beta * (rel + delta);
  if (arg <= 0.0)
    throw domain_error("occupation: nonpositive exponent; delta too negative");
  if (arg > 700.0) return 0.0;
  return 1.0 / std::expm1(arg);
}

}  // namespace bosegas
