#include "bosegas/kac.hpp"

#include <cmath>

#include "bosegas/common.hpp"
#include "bosegas/thermo.hpp"

namespace bosegas {

KacDistribution kac_kernel(const ThermoParams& thermo, double rho) {
  if (!(rho > 0.0)) throw domain_error("kac_kernel: rho must be > 0");
  double rc = rho_critical(thermo);
  // Atom wins at rho = rho_c: theta_+(0) = 1, theta_-(0) = 0.
  if (rho <= rc) return {KacAtom{rho}};
  return {KacShiftedExponential{rc, rho - rc}};
}

double kac_laplace(const ThermoParams& thermo, double rho, double t) {
  if (t < 0.0) throw domain_error("kac_laplace: t must be >= 0");
  KacDistribution d = kac_kernel(thermo, rho);
  if (const auto* atom = std::get_if<KacAtom>(&d.law))
    return std::exp(-t * atom->rho);
  const auto& se = std::get<KacShiftedExponential>(d.law);
  return std::exp(-t * se.shift) / (1.0 + t * se.scale);
}

double kac_convolve_check(const ThermoParams& thermo, double rho,
                          double grid_hi, int grid_points) {
  double rc = rho_critical(thermo);
  if (!(rho > rc)) throw domain_error("kac_convolve_check: need rho > rho_c");
  if (grid_points < 16 || !(grid_hi > rc))
    throw domain_error("kac_convolve_check: bad grid");
  double scale = rho - rc;
  double h = grid_hi / (grid_points - 1);
  // The atom is realized as a normalized hat of one grid cell at rho_c;
  // trapezoid convolution against the unshifted exponential factor. Cells
  // overlapping the density jump are skipped: a grid cannot resolve it.
  int j_lo = std::max(0, static_cast<int>(std::floor((rc - h) / h)));
  int j_hi = std::min(grid_points - 1, static_cast<int>(std::ceil((rc + h) / h)));
  double max_dev = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    double x = i * h;
    if (std::fabs(x - rc) <= 2.0 * h) continue;
    KahanSum acc;
    for (int j = j_lo; j <= j_hi; ++j) {
      double y = j * h;
      double hat = std::fmax(0.0, 1.0 - std::fabs(y - rc) / h) / h;
      if (hat == 0.0) continue;
      double arg = x - y;
      double f = (arg >= 0.0) ? std::exp(-arg / scale) / scale : 0.0;
      acc.add(hat * f * h);
    }
    double direct = (x >= rc) ? std::exp(-(x - rc) / scale) / scale : 0.0;
    max_dev = std::fmax(max_dev, std::fabs(acc.value() - direct));
  }
  return max_dev;
}

double kac_sample(const KacDistribution& dist, Rng& rng) {
  if (const auto* atom = std::get_if<KacAtom>(&dist.law)) return atom->rho;
  const auto& se = std::get<KacShiftedExponential>(dist.law);
  return se.shift - se.scale * std::log(rng.uniform());
}

MonotonicityProbe infinite_divisibility_probe(const ThermoParams& thermo,
                                              double rho, int n,
                                              std::span<const double> t_grid) {
  if (n < 2) throw domain_error("infinite_divisibility_probe: n must be >= 2");
  if (t_grid.size() < 5)
    throw domain_error("infinite_divisibility_probe: grid too short");
  MonotonicityProbe probe;
  auto g = [&](double t) {
    return std::pow(kac_laplace(thermo, rho, t), 1.0 / n);
  };
  double h = t_grid[1] - t_grid[0];
  for (size_t i = 0; i + 4 < t_grid.size(); ++i) {
    double f[5];
    for (int k = 0; k < 5; ++k) f[k] = g(t_grid[i] + k * h);
    bool ok = true;
    // (-1)^k Delta^k f >= 0 for complete monotonicity.
    for (int order = 1; order <= 4; ++order) {
      for (int k = 0; k + 1 <= 4 - (order - 1); ++k) f[k] = f[k + 1] - f[k];
      double signed_diff = (order % 2 == 0) ? f[0] : -f[0];
      if (signed_diff < -1e-12) ok = false;
    }
    probe.t.push_back(t_grid[i]);
    probe.pass.push_back(ok);
    if (!ok) probe.all_pass = false;
  }
  return probe;
}

}  // namespace bosegas
