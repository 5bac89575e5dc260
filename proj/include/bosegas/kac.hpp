#pragma once

#include <span>
#include <variant>
#include <vector>

#include "bosegas/geometry.hpp"
#include "bosegas/rng.hpp"

namespace bosegas {

// Mixing distribution of the particle density across ensembles: a point mass
// below the critical density, a shifted exponential above it.
struct KacAtom {
  double rho;
};
struct KacShiftedExponential {
  double shift;  // = rho_c
  double scale;  // = rho - rho_c
};

struct KacDistribution {
  std::variant<KacAtom, KacShiftedExponential> law;

  bool is_atom() const { return std::holds_alternative<KacAtom>(law); }
};

KacDistribution kac_kernel(const ThermoParams& thermo, double rho);

// Laplace transform E[e^{-t X}] of the Kac distribution at density rho.
double kac_laplace(const ThermoParams& thermo, double rho, double t);

// Numerically convolves the unshifted exponential factor with the atom at
// rho_c on a uniform grid and returns the sup gap to the direct density.
double kac_convolve_check(const ThermoParams& thermo, double rho,
                          double grid_hi, int grid_points);

double kac_sample(const KacDistribution& dist, Rng& rng);

struct MonotonicityProbe {
  std::vector<double> t;
  std::vector<bool> pass;  // per grid point, all orders correctly signed
  bool all_pass = true;
};

// Spot check of complete monotonicity of kac_laplace(.)^{1/n} by
// alternating-sign forward differences up to order 4.
MonotonicityProbe infinite_divisibility_probe(const ThermoParams& thermo,
                                              double rho, int n,
                                              std::span<const double> t_grid);

}  // namespace bosegas
