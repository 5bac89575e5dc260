#pragma once

#include <functional>

#include "bosegas/geometry.hpp"

namespace bosegas {

// One-dimensional Dirichlet mode sums at inverse-temperature-like parameter q.
// Small q switches to the Poisson-resummed (image) representation, so every
// evaluation is O(1) across twenty orders of magnitude in q.

// theta(q) = sum_{k>=1} e^{-q(k^2-1)}.
double theta_sum(double q);

// sum_{k in Z} e^{-q k^2}.
double theta_lattice(double q);

// sum_{k>=1} (-1)^k e^{-q(k^2-1)} cos(k*phi).
double theta_alt_cos(double q, double phi);

// F(q, w) = sum_{k>=1} e^{-q(k^2-1)} * 2 sin^2(pi k (1/2 + w)),
// the diagonal heat factor at fractional coordinate w in [-1/2, 1/2].
double diag_factor(double q, double w);

// Per-axis exponent scale q_j = beta * hbar^2 * pi^2 / (2 m L_j^2).
double axis_scale(const ThermoParams& thermo, double side);

// Sum over n >= 1 of e^{-n beta delta} * factor(n), where factor is smooth
// and tends to ground_value as n -> infinity. The ground part is summed in
// closed form; the rest is summed directly up to n_direct and completed by
// a log-spaced quadrature over the smooth remainder.
double geometric_series_sum(double beta_delta,
                            const std::function<double(double)>& factor,
                            double ground_value, long n_direct = 200000);

// Mean particle density (1/V) sum_k W(k, L, delta) over all Dirichlet modes,
// evaluated to near machine precision for any box and any delta > 0.
double mean_density_exact(const BoxGeometry& box, const ThermoParams& thermo,
                          double delta);

// Diagonal of the finite-box kernel, sum_k W(k) |phi_k(x)|^2, same method.
double diagonal_density_exact(const BoxGeometry& box,
                              const ThermoParams& thermo, double delta,
                              const Vec3& x);

}  // namespace bosegas
