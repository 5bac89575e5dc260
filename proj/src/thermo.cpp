#include "bosegas/thermo.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "bosegas/heat.hpp"
#include "bosegas/roots.hpp"
#include "bosegas/special.hpp"

namespace bosegas {

double rho_of_delta(const ThermoParams& thermo, double delta_inf) {
  thermo.validate();
  if (delta_inf < 0.0) throw domain_error("rho_of_delta: delta_inf must be >= 0");
  double lam = thermo.thermal_wavelength();
  return polylog_exp_3_2(thermo.beta * delta_inf) / (lam * lam * lam);
}

double rho_critical(const ThermoParams& thermo) {
  return rho_of_delta(thermo, 0.0);
}

double rho_second_critical(const ThermoParams& thermo, double slab_alpha) {
  if (!(slab_alpha > 0.0))
    throw domain_error("rho_second_critical: alpha must be > 0");
  double lam2 = thermo.thermal_wavelength() * thermo.thermal_wavelength();
  return rho_critical(thermo) + 2.0 * slab_alpha / lam2;
}

double rho_second_critical_local(const ThermoParams& thermo,
                                 double slab_alpha) {
  if (!(slab_alpha > 0.0))
    throw domain_error("rho_second_critical_local: alpha must be > 0");
  double lam2 = thermo.thermal_wavelength() * thermo.thermal_wavelength();
  return rho_critical(thermo) + 4.0 * slab_alpha / lam2;
}

double invert_density(const ThermoParams& thermo, double rho) {
  double rc = rho_critical(thermo);
  if (!(rho > 0.0)) throw domain_error("invert_density: rho must be > 0");
  if (rho > rc)
    throw domain_error(
        "invert_density: rho exceeds the critical density; above rho_c the "
        "gap is a finite-size schedule, use delta_schedule instead");
  if (rho == rc) return 0.0;
  double hi = 1.0 / thermo.beta;
  while (rho_of_delta(thermo, hi) >= rho) hi *= 4.0;
  return bracketed_root(
      [&](double d) { return rho_of_delta(thermo, d) - rho; }, 0.0, hi, 1e-11);
}

double solve_delta_finite(const BoxGeometry& box, const ThermoParams& thermo,
                          double rho,
                          const std::optional<Truncation>& truncation) {
  thermo.validate();
  if (!(rho > 0.0)) throw domain_error("solve_delta_finite: rho must be > 0");
  std::function<double(double)> density;
  std::vector<double> energies;
  if (truncation) {
    // Mode set is delta-independent; enumerate once.
    TruncatedKernel probe = build_kernel(box, thermo, 1.0, *truncation);
    for (const Mode& m : probe.modes)
      energies.push_back(
          relative_energy(box, m, BoundaryCondition::Dirichlet, thermo));
    density = [&, energies](double delta) {
      KahanSum acc;
      for (double e : energies)
        acc.add(1.0 / std::expm1(thermo.beta * (e + delta)));
      return acc.value() / box.volume();
    };
  } else {
    density = [&](double delta) {
      return mean_density_exact(box, thermo, delta);
    };
  }
  double lo = 1.0 / thermo.beta;
  while (density(lo) <= rho) {
    lo /= 8.0;
    if (lo < 1e-300)
      throw numeric_error("solve_delta_finite: bracket underflow, lo < 1e-300");
  }
  double hi = lo;
  while (density(hi) >= rho) {
    hi *= 8.0;
    if (hi > 1e300)
      throw numeric_error("solve_delta_finite: bracket overflow, hi > 1e300");
  }
  try {
    return bracketed_root([&](double d) { return density(d) - rho; }, lo, hi,
                          1e-11);
  } catch (const numeric_error&) {
    std::ostringstream msg;
    msg << "solve_delta_finite: no convergence in [" << lo << ", " << hi
        << "] for rho = " << rho;
    throw numeric_error(msg.str());
  }
}

namespace {

double slab_log_volume(double alpha, double L) {
  return 3.0 * std::log(L) + 2.0 * alpha * L;
}

}  // namespace

double delta_schedule(const AnisotropyProfile& profile,
                      const ThermoParams& thermo, double rho, double L) {
  thermo.validate();
  if (!(rho > 0.0) || !(L > 0.0))
    throw domain_error("delta_schedule: rho and L must be > 0");
  double rc = rho_critical(thermo);
  if (const auto* slab = std::get_if<SlabExp>(&profile)) {
    if (rho <= rc) return invert_density(thermo, rho);
    double rm = rho_second_critical(thermo, slab->alpha);
    double lam2 = thermo.thermal_wavelength() * thermo.thermal_wavelength();
    double log_beta_delta;
    if (rho <= rm) {
      log_beta_delta = -lam2 * (rho - rc) * L;
    } else {
      log_beta_delta = -std::log(rho - rm) - slab_log_volume(slab->alpha, L);
    }
    if (log_beta_delta < -700.0)
      throw range_error("delta_schedule: gap underflows at this L");
    return std::exp(log_beta_delta) / thermo.beta;
  }
  if (const auto* beam = std::get_if<BeamPoly>(&profile)) {
    if (beam->gamma != 2.0)
      throw unsupported_regime_error(
          "delta_schedule: beam schedules are defined for gamma = 2 only");
    if (rho <= rc) return invert_density(thermo, rho);
    double h2 = thermo.hbar * thermo.hbar;
    double y = (rho - rc) * thermo.beta * pi * pi * h2 / (16.0 * thermo.mass);
    double x = phi_inverse(y);
    return pi * pi * h2 / (2.0 * thermo.mass * L * L * L * L) * x;
  }
  throw unsupported_regime_error(
      "delta_schedule: explicit boxes carry no anisotropy schedule");
}

namespace {

LimitReport extrapolate(std::span<const double> L,
                        std::span<const double> values) {
  LimitReport out;
  for (double v : values)
    if (!std::isfinite(v)) {
      out.converged = false;
      out.trend = std::numeric_limits<double>::infinity();
      out.value = v;
      return out;
    }
  Extrapolation e = richardson_in_inverse(L, values);
  out.value = e.value;
  out.trend = e.trend;
  out.converged = e.converged;
  return out;
}

}  // namespace

SlabKappas kappas_slab(const ThermoParams& thermo, double slab_alpha,
                       const std::function<double(double)>& delta_of_L,
                       std::span<const double> L_sequence) {
  thermo.validate();
  if (L_sequence.size() < 2)
    throw domain_error("kappas_slab: need at least 2 sequence points");
  std::vector<double> k1, k2;
  double h2 = thermo.hbar * thermo.hbar;
  for (double L : L_sequence) {
    double log_bd = std::log(thermo.beta * delta_of_L(L));
    k1.push_back(8.0 * std::exp(-log_bd - slab_log_volume(slab_alpha, L)));
    double log_min = std::fmin(2.0 * std::log(L) + 2.0 * slab_alpha * L, -log_bd);
    k2.push_back(thermo.mass / (thermo.beta * pi * h2 * L) * log_min);
  }
  return {extrapolate(L_sequence, k1), extrapolate(L_sequence, k2)};
}

LimitReport kappa_tilde_beam(const ThermoParams& thermo,
                             const std::function<double(double)>& delta_of_L,
                             std::span<const double> L_sequence) {
  thermo.validate();
  if (L_sequence.size() < 2)
    throw domain_error("kappa_tilde_beam: need at least 2 sequence points");
  double h2 = thermo.hbar * thermo.hbar;
  std::vector<double> vals;
  for (double L : L_sequence) {
    double arg = 2.0 * thermo.mass * L * L * L * L * delta_of_L(L) / (pi * pi * h2);
    vals.push_back(16.0 * thermo.mass / (thermo.beta * pi * pi * h2) * phi(arg));
  }
  return extrapolate(L_sequence, vals);
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::Normal: return "Normal";
    case Phase::TypeIII: return "TypeIII";
    case Phase::TypeI_plus_III: return "TypeI_plus_III";
    case Phase::TypeII: return "TypeII";
    case Phase::TypeI: return "TypeI";
  }
  return "?";
}

PhaseReport classify_phase(const AnisotropyProfile& profile,
                           const ThermoParams& thermo, double rho) {
  thermo.validate();
  if (!(rho > 0.0)) throw domain_error("classify_phase: rho must be > 0");
  PhaseReport rep;
  rep.rho = rho;
  rep.rho_c = rho_critical(thermo);
  double lam2 = thermo.thermal_wavelength() * thermo.thermal_wavelength();
  std::ostringstream sched;
  if (const auto* slab = std::get_if<SlabExp>(&profile)) {
    rep.rho_m = rho_second_critical(thermo, slab->alpha);
    if (rho <= rep.rho_c) {
      rep.phase = Phase::Normal;
      rep.delta_inf = invert_density(thermo, rho);
      sched << "constant gap delta_inf = " << rep.delta_inf;
    } else if (rho <= *rep.rho_m) {
      rep.phase = Phase::TypeIII;
      rep.kappa1 = 0.0;
      rep.kappa2 = 2.0 * (rho - rep.rho_c);
      sched << "delta(L) = exp(-" << lam2 * (rho - rep.rho_c)
            << " * L) / beta";
    } else {
      rep.phase = Phase::TypeI_plus_III;
      rep.kappa1 = 8.0 * (rho - *rep.rho_m);
      rep.kappa2 = 2.0 * thermo.mass * slab->alpha /
                   (thermo.beta * pi * thermo.hbar * thermo.hbar);
      sched << "delta(L) = 1 / (beta * " << (rho - *rep.rho_m)
            << " * L^3 exp(2 alpha L))";
    }
    rep.schedule = sched.str();
    return rep;
  }
  if (const auto* beam = std::get_if<BeamPoly>(&profile)) {
    if (rho <= rep.rho_c) {
      rep.phase = Phase::Normal;
      rep.delta_inf = invert_density(thermo, rho);
      if (beam->gamma == 2.0) rep.kappa_tilde = 0.0;
      sched << "constant gap delta_inf = " << rep.delta_inf;
      rep.schedule = sched.str();
      return rep;
    }
    if (beam->gamma < 2.0) {
      rep.phase = Phase::TypeI;
      sched << "delta(L) = 1 / (beta * (rho - rho_c) * L^(2+gamma))";
    } else if (beam->gamma > 2.0) {
      rep.phase = Phase::TypeIII;
      sched << "delta(L) = O(L^-4)";
    } else {
      rep.phase = Phase::TypeII;
      rep.kappa_tilde = rho - rep.rho_c;
      double y = (rho - rep.rho_c) * thermo.beta * pi * pi * thermo.hbar *
                 thermo.hbar / (16.0 * thermo.mass);
      sched << "delta(L) = pi^2 hbar^2 phi_inverse(" << y << ") / (2 m L^4)";
    }
    rep.schedule = sched.str();
    return rep;
  }
  throw unsupported_regime_error(
      "classify_phase: explicit boxes have no thermodynamic-limit phase");
}

}  // namespace bosegas
