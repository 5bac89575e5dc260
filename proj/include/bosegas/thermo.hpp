#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>

#include "bosegas/geometry.hpp"
#include "bosegas/kernel.hpp"
#include "bosegas/stats.hpp"

namespace bosegas {

// Bulk grand-canonical density at gap delta_inf >= 0; strictly decreasing.
double rho_of_delta(const ThermoParams& thermo, double delta_inf);

// Critical density, the delta_inf = 0 value: zeta(3/2) / lambda_beta^3.
double rho_critical(const ThermoParams& thermo);

// Second critical density of the exponential slab: rho_c + 2 alpha/lambda^2.
// This is the volume-averaged threshold and is what classification uses.
double rho_second_critical(const ThermoParams& thermo, double slab_alpha);

// Near-origin variant rho_c + 4 alpha/lambda^2: the local density at which
// the quasi-condensate band saturates at the box center. Carried for
// reference; not used to classify.
double rho_second_critical_local(const ThermoParams& thermo, double slab_alpha);

// Unique delta_inf >= 0 with rho_of_delta(delta_inf) = rho, for rho <= rho_c.
double invert_density(const ThermoParams& thermo, double rho);

// Unique delta > 0 solving rho = (1/V) sum_k W(k, L, delta). With no
// truncation the full mode sum is used (machine-precision tail); a
// truncation restricts the sum to the retained modes.
double solve_delta_finite(const BoxGeometry& box, const ThermoParams& thermo,
                          double rho,
                          const std::optional<Truncation>& truncation = {});

// Gap schedule delta(L) realizing a prescribed density, per phase regime.
double delta_schedule(const AnisotropyProfile& profile,
                      const ThermoParams& thermo, double rho, double L);

struct LimitReport {
  double value = 0.0;
  double trend = 0.0;
  bool converged = false;
};

struct SlabKappas {
  LimitReport kappa1, kappa2;
};

// Condensate parameters evaluated on a finite L sequence and Richardson
// extrapolated; `converged` false is a divergence report, not an error.
SlabKappas kappas_slab(const ThermoParams& thermo, double slab_alpha,
                       const std::function<double(double)>& delta_of_L,
                       std::span<const double> L_sequence);

LimitReport kappa_tilde_beam(const ThermoParams& thermo,
                             const std::function<double(double)>& delta_of_L,
                             std::span<const double> L_sequence);

enum class Phase { Normal, TypeIII, TypeI_plus_III, TypeII, TypeI };

std::string to_string(Phase phase);

struct PhaseReport {
  Phase phase = Phase::Normal;
  double rho = 0.0;
  double rho_c = 0.0;
  std::optional<double> rho_m;        // slab only
  double kappa1 = 0.0, kappa2 = 0.0;  // slab condensate parameters
  std::optional<double> kappa_tilde;  // beam (gamma = 2) only
  double delta_inf = 0.0;             // limit of the gap schedule
  std::string schedule;               // human-readable delta(L) description
};

PhaseReport classify_phase(const AnisotropyProfile& profile,
                           const ThermoParams& thermo, double rho);

}  // namespace bosegas
