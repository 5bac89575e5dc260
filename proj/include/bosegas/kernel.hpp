#pragma once

#include <complex>
#include <variant>
#include <vector>

#include "bosegas/geometry.hpp"

namespace bosegas {

// Truncation policy for the spectral expansion: either keep every mode with
// energy above the ground state at most `energy`, or the lowest `count` modes.
struct EnergyCutoff {
  double energy;
};
struct ModeCount {
  int count;
};
using Truncation = std::variant<EnergyCutoff, ModeCount>;

// Finite-rank spectral representation of the one-body correlation operator.
// Modes are ordered by increasing energy (ties broken lexicographically), so
// occupations are nonincreasing. tail_bound bounds the summed occupations of
// every discarded mode.
struct TruncatedKernel {
  std::vector<Mode> modes;
  VectorXd occupations;
  BoxGeometry box;
  ThermoParams thermo;
  double delta;
  BoundaryCondition bc;
  double tail_bound;

  int rank() const { return static_cast<int>(modes.size()); }
  double trace() const { return occupations.sum(); }
};

TruncatedKernel build_kernel(const BoxGeometry& box, const ThermoParams& thermo,
                             double delta, const Truncation& truncation,
                             BoundaryCondition bc = BoundaryCondition::Dirichlet);

// K(x, y) = sum_k lambda_k phi_k(x) conj(phi_k(y)). Real for Dirichlet.
double kernel_eval(const TruncatedKernel& kernel, const Vec3& x, const Vec3& y);
std::complex<double> kernel_eval_complex(const TruncatedKernel& kernel,
                                         const Vec3& x, const Vec3& y);

// Translation-invariant infinite-volume kernel at gap delta_inf >= 0,
// evaluated through its Gaussian-series expansion. Coincides with the bulk
// density on the diagonal.
double limit_kernel(const ThermoParams& thermo, double delta_inf,
                    const Vec3& x, const Vec3& y);
double limit_kernel_diag(const ThermoParams& thermo, double delta_inf);

}  // namespace bosegas
