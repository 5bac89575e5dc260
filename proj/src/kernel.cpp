#include "bosegas/kernel.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <unordered_set>

#include "bosegas/heat.hpp"
#include "bosegas/special.hpp"

namespace bosegas {

namespace {

std::uint64_t pack_mode(const Mode& m) {
  auto enc = [](int k) {
    return static_cast<std::uint64_t>(static_cast<std::uint32_t>(k + (1 << 20)));
  };
  return (enc(m.k1) << 42) | (enc(m.k2) << 21) | enc(m.k3);
}

struct HeapEntry {
  double energy;
  Mode mode;
  bool operator>(const HeapEntry& o) const {
    if (energy != o.energy) return energy > o.energy;
    return mode > o.mode;
  }
};

// Dijkstra-style enumeration of modes in increasing relative energy.
// Energy is monotone in each |k_j|, so pushing axis neighbors suffices.
template <typename Stop>
std::vector<HeapEntry> enumerate_modes(const BoxGeometry& box,
                                       const ThermoParams& thermo,
                                       BoundaryCondition bc, Stop stop,
                                       double* next_energy) {
  std::priority_queue<HeapEntry, std::vector<HeapEntry>, std::greater<>> heap;
  std::unordered_set<std::uint64_t> seen;
  Mode g = ground_mode(bc);
  heap.push({relative_energy(box, g, bc, thermo), g});
  seen.insert(pack_mode(g));
  std::vector<HeapEntry> out;
  constexpr std::size_t kMaxModes = 1u << 22;
  while (!heap.empty()) {
    HeapEntry top = heap.top();
    heap.pop();
    if (stop(top, out.size())) {
      *next_energy = top.energy;
      return out;
    }
    out.push_back(top);
    if (out.size() > kMaxModes)
      throw numeric_error("build_kernel: truncation retains too many modes");
    for (int j = 0; j < 3; ++j) {
      for (int dir : {+1, -1}) {
        if (bc == BoundaryCondition::Dirichlet && dir < 0) continue;
        Mode next = top.mode;
        int& kj = (j == 0) ? next.k1 : (j == 1) ? next.k2 : next.k3;
        kj += dir;
        if (bc == BoundaryCondition::Dirichlet && kj < 1) continue;
        if (seen.insert(pack_mode(next)).second)
          heap.push({relative_energy(box, next, bc, thermo), next});
      }
    }
  }
  *next_energy = std::numeric_limits<double>::infinity();
  return out;
}

double partition_sum_all_modes(const BoxGeometry& box,
                               const ThermoParams& thermo,
                               BoundaryCondition bc) {
  // sum over all modes of e^{-beta * relative_energy}.
  double z = 1.0;
  for (int j = 0; j < 3; ++j) {
    double q = axis_scale(thermo, box.side(j));
    if (bc == BoundaryCondition::Dirichlet)
      z *= theta_sum(q);
    else
      z *= theta_lattice(4.0 * q);  // (2 pi / L)^2 mode lattice
  }
  return z;
}

}  // namespace

TruncatedKernel build_kernel(const BoxGeometry& box, const ThermoParams& thermo,
                             double delta, const Truncation& truncation,
                             BoundaryCondition bc) {
  thermo.validate();
  if (!(delta > 0.0)) throw domain_error("build_kernel: delta must be > 0");
  double next_energy = 0.0;
  std::vector<HeapEntry> entries;
  if (const auto* ec = std::get_if<EnergyCutoff>(&truncation)) {
    if (ec->energy < 0.0)
      throw domain_error("build_kernel: cutoff below the ground state keeps "
                         "no mode");
    entries = enumerate_modes(
        box, thermo, bc,
        [&](const HeapEntry& e, std::size_t) { return e.energy > ec->energy; },
        &next_energy);
  } else {
    int count = std::get<ModeCount>(truncation).count;
    if (count < 1) throw domain_error("build_kernel: mode count must be >= 1");
    entries = enumerate_modes(
        box, thermo, bc,
        [&](const HeapEntry&, std::size_t n) {
          return n >= static_cast<std::size_t>(count);
        },
        &next_energy);
  }
  if (entries.empty()) throw domain_error("build_kernel: empty kernel");

  TruncatedKernel k{.modes = {},
                    .occupations = VectorXd(entries.size()),
                    .box = box,
                    .thermo = thermo,
                    .delta = delta,
                    .bc = bc,
                    .tail_bound = 0.0};
  double retained_z = 0.0;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    k.modes.push_back(entries[i].mode);
    k.occupations[i] =
        1.0 / std::expm1(thermo.beta * (entries[i].energy + delta));
    retained_z += std::exp(-thermo.beta * entries[i].energy);
  }
  // Integral-comparison bound on the discarded occupation mass:
  // W(e) <= e^{-beta(e+delta)} / (1 - e^{-beta(E'+delta)}) for e >= E'.
  double total_z = partition_sum_all_modes(box, thermo, bc);
  double denom = -std::expm1(-thermo.beta * (next_energy + delta));
  double excess = std::max(total_z - retained_z, 0.0);
  k.tail_bound = std::exp(-thermo.beta * delta) * excess / denom;
  return k;
}

double kernel_eval(const TruncatedKernel& kernel, const Vec3& x, const Vec3& y) {
  if (kernel.bc != BoundaryCondition::Dirichlet)
    throw domain_error("kernel_eval: periodic kernels are complex-valued; "
                       "use kernel_eval_complex");
  if (!kernel.box.contains(x) || !kernel.box.contains(y))
    throw domain_error("kernel_eval: position outside the box");
  KahanSum acc;
  for (int i = 0; i < kernel.rank(); ++i) {
    // Product of the eigenfunctions first: the sum is then bitwise
    // symmetric under swapping x and y.
    double pair = eigenfunction(kernel.box, kernel.modes[i], x) *
                  eigenfunction(kernel.box, kernel.modes[i], y);
    acc.add(kernel.occupations[i] * pair);
  }
  return acc.value();
}

std::complex<double> kernel_eval_complex(const TruncatedKernel& kernel,
                                         const Vec3& x, const Vec3& y) {
  if (kernel.bc == BoundaryCondition::Dirichlet)
    return {kernel_eval(kernel, x, y), 0.0};
  if (!kernel.box.contains(x) || !kernel.box.contains(y))
    throw domain_error("kernel_eval_complex: position outside the box");
  std::complex<double> acc = 0.0;
  for (int i = 0; i < kernel.rank(); ++i) {
    acc += kernel.occupations[i] *
           eigenfunction_periodic(kernel.box, kernel.modes[i], x) *
           std::conj(eigenfunction_periodic(kernel.box, kernel.modes[i], y));
  }
  return acc;
}

double limit_kernel_diag(const ThermoParams& thermo, double delta_inf) {
  thermo.validate();
  if (delta_inf < 0.0) throw domain_error("limit_kernel: delta_inf must be >= 0");
  double lam = thermo.thermal_wavelength();
  return polylog_exp_3_2(thermo.beta * delta_inf) / (lam * lam * lam);
}

double limit_kernel(const ThermoParams& thermo, double delta_inf,
                    const Vec3& x, const Vec3& y) {
  thermo.validate();
  if (delta_inf < 0.0) throw domain_error("limit_kernel: delta_inf must be >= 0");
  double lam = thermo.thermal_wavelength();
  double r2 = (x - y).squaredNorm();
  if (r2 == 0.0) return limit_kernel_diag(thermo, delta_inf);
  double a = pi * r2 / (lam * lam);
  double t = thermo.beta * delta_inf;
  KahanSum acc;
  long cap = static_cast<long>(std::fmax(200000.0, 20.0 * a));
  long n = 1;
  bool exhausted = false;
  for (; n <= cap; ++n) {
    double expo = -t * n - a / n;
    double term = (expo < -745.0) ? 0.0 : std::exp(expo) / (std::sqrt(static_cast<double>(n)) * n);
    acc.add(term);
    if (t * n > 45.0) {
      exhausted = true;
      break;
    }
  }
  if (!exhausted) {
    // Taylor-expand e^{-a/n} in the tail where a/n is small.
    double N = static_cast<double>(cap);
    double coef = 1.0;
    for (int j = 0; j <= 14; ++j) {
      if (j > 0) coef *= -a / j;
      acc.add(coef * exp_power_tail(1.5 + j, t, N));
    }
  }
  return acc.value() / (lam * lam * lam);
}

}  // namespace bosegas
