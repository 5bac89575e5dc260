#include "bosegas/sampler.hpp"

#include <algorithm>
#include <cmath>

#include "bosegas/heat.hpp"
#include "bosegas/quadrature.hpp"

namespace bosegas {

TestFunction cosine_bump(const Vec3& center, const Vec3& halfwidth,
                         double amp) {
  if (!(amp >= 0.0) || !(halfwidth.minCoeff() > 0.0))
    throw domain_error("cosine_bump: need amp >= 0 and positive widths");
  TestFunction f;
  f.support_lo = center - halfwidth;
  f.support_hi = center + halfwidth;
  f.fn = [center, halfwidth, amp](const Vec3& x) {
    double v = amp;
    for (int j = 0; j < 3; ++j) {
      double c = std::cos(0.5 * pi * (x[j] - center[j]) / halfwidth[j]);
      v *= c * c;
    }
    return v;
  };
  return f;
}

TestFunction box_indicator(double value, const Vec3& lo, const Vec3& hi) {
  if (!(value >= 0.0)) throw domain_error("box_indicator: value must be >= 0");
  TestFunction f;
  f.support_lo = lo;
  f.support_hi = hi;
  f.fn = [value](const Vec3&) { return value; };
  return f;
}

double pair_with(const TestFunction& f, const PointConfiguration& config) {
  KahanSum acc;
  for (const Vec3& x : config.points) acc.add(f(x));
  return acc.value();
}

namespace {

std::complex<double> mode_value(const TruncatedKernel& k, int i, const Vec3& x) {
  if (k.bc == BoundaryCondition::Dirichlet)
    return {eigenfunction(k.box, k.modes[i], x), 0.0};
  return eigenfunction_periodic(k.box, k.modes[i], x);
}

// Condensate profile value at x.
std::complex<double> profile_value(const TruncatedKernel& k,
                                   CondensateProfile profile, const Vec3& x) {
  if (profile == CondensateProfile::Flat) return {1.0, 0.0};
  Mode g = ground_mode(k.bc);
  if (k.bc == BoundaryCondition::Dirichlet)
    return {eigenfunction(k.box, g, x), 0.0};
  return eigenfunction_periodic(k.box, g, x);
}

// sup over [lo, hi] of |sin(pi k (1/2 + x / L))|.
double axis_sin_sup(int k, double L, double lo, double hi) {
  double a = pi * k * (0.5 + lo / L);
  double b = pi * k * (0.5 + hi / L);
  if (a > b) std::swap(a, b);
  // A peak lies inside if some pi/2 + m*pi is in [a, b].
  double m = std::ceil((a - 0.5 * pi) / pi);
  if (0.5 * pi + m * pi <= b) return 1.0;
  return std::fmax(std::fabs(std::sin(a)), std::fabs(std::sin(b)));
}

double mode_sup(const TruncatedKernel& k, int i, const Window& w) {
  if (k.bc == BoundaryCondition::Periodic)
    return 1.0 / std::sqrt(k.box.volume());
  double v = 1.0;
  for (int j = 0; j < 3; ++j) {
    double L = k.box.side(j);
    v *= std::sqrt(2.0 / L) *
         axis_sin_sup(k.modes[i].component(j), L, w.lo[j], w.hi[j]);
  }
  return v;
}

double profile_sup(const TruncatedKernel& k, CondensateProfile profile,
                   const Window& w) {
  if (profile == CondensateProfile::Flat) return 1.0;
  if (k.bc == BoundaryCondition::Periodic)
    return 1.0 / std::sqrt(k.box.volume());
  double v = 1.0;
  Mode g = ground_mode(k.bc);
  for (int j = 0; j < 3; ++j) {
    double L = k.box.side(j);
    v *= std::sqrt(2.0 / L) * axis_sin_sup(g.component(j), L, w.lo[j], w.hi[j]);
  }
  return v;
}

}  // namespace

double laplace_closed(const TruncatedKernel& kernel, const TestFunction& f,
                      const CondensateSpec& condensate, double rel_tol) {
  if (condensate.kappa < 0.0)
    throw domain_error("laplace_closed: kappa must be >= 0");
  // Quadrature domain: support of f clipped to the box.
  Vec3 lo, hi;
  for (int j = 0; j < 3; ++j) {
    lo[j] = std::fmax(f.support_lo[j], -0.5 * kernel.box.side(j));
    hi[j] = std::fmin(f.support_hi[j], 0.5 * kernel.box.side(j));
    if (!(lo[j] < hi[j])) return 1.0;  // empty overlap: f == 0 on the box
  }
  int rank = kernel.rank();
  double prev = -1.0;
  for (int order : {8, 12, 16, 24, 32, 48}) {
    const QuadRule& rule = gauss_legendre(order);
    long nn = static_cast<long>(order) * order * order;
    MatrixXcd phi(nn, rank);
    VectorXcd u0(nn);
    VectorXd aw(nn);
    Vec3 mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    long idx = 0;
    for (int i = 0; i < order; ++i)
      for (int j = 0; j < order; ++j)
        for (int l = 0; l < order; ++l, ++idx) {
          Vec3 x(mid[0] + half[0] * rule.nodes[i],
                 mid[1] + half[1] * rule.nodes[j],
                 mid[2] + half[2] * rule.nodes[l]);
          double wgt = rule.weights[i] * rule.weights[j] * rule.weights[l] *
                       half[0] * half[1] * half[2];
          double a = -std::expm1(-f(x));
          aw[idx] = wgt * a;
          for (int m = 0; m < rank; ++m) phi(idx, m) = mode_value(kernel, m, x);
          u0[idx] = profile_value(kernel, condensate.profile, x);
        }
    VectorXd sql = kernel.occupations.array().sqrt();
    MatrixXcd M = phi.adjoint() * aw.asDiagonal() * phi;
    M = sql.asDiagonal() * M * sql.asDiagonal();
    MatrixXcd one_plus = MatrixXcd::Identity(rank, rank) + M;
    double det = std::abs(one_plus.determinant());
    double value = 1.0 / det;
    if (condensate.kappa > 0.0) {
      VectorXcd v = phi.adjoint() * (aw.asDiagonal() * u0);
      v = sql.asDiagonal() * v;
      double au0 = (u0.array().abs2() * aw.array()).sum();
      std::complex<double> quad = v.adjoint() * one_plus.lu().solve(v);
      double s = au0 - quad.real();
      value /= 1.0 + condensate.kappa * s;
    }
    if (prev >= 0.0 && std::fabs(value - prev) <= rel_tol * std::fabs(value))
      return value;
    prev = value;
  }
  throw numeric_error(
      "laplace_closed: quadrature did not stabilize; refine the test "
      "function or loosen rel_tol");
}

IntensityField::IntensityField(const TruncatedKernel* kernel,
                               std::vector<std::complex<double>> amplitudes,
                               std::complex<double> condensate_amp,
                               CondensateProfile profile)
    : kernel_(kernel),
      amps_(std::move(amplitudes)),
      condensate_amp_(condensate_amp),
      profile_(profile) {}

double IntensityField::operator()(const Vec3& x) const {
  std::complex<double> g = 0.0;
  for (int i = 0; i < kernel_->rank(); ++i)
    g += amps_[i] * mode_value(*kernel_, i, x);
  if (condensate_amp_ != std::complex<double>(0.0))
    g += condensate_amp_ * profile_value(*kernel_, profile_, x);
  return std::norm(g);
}

double IntensityField::bound_on(const Window& w) const {
  double b = 0.0;
  for (int i = 0; i < kernel_->rank(); ++i)
    b += std::abs(amps_[i]) * mode_sup(*kernel_, i, w);
  b += std::abs(condensate_amp_) * profile_sup(*kernel_, profile_, w);
  return b * b;
}

IntensityField sample_intensity(const TruncatedKernel& kernel,
                                const CondensateSpec& condensate, Rng& rng) {
  if (condensate.kappa < 0.0)
    throw domain_error("sample_intensity: kappa must be >= 0");
  std::vector<std::complex<double>> amps(kernel.rank());
  for (int i = 0; i < kernel.rank(); ++i)
    amps[i] = std::sqrt(kernel.occupations[i]) * rng.complex_normal();
  std::complex<double> c0 = 0.0;
  if (condensate.kappa > 0.0) {
    double t = rng.exponential();
    double phase =
        condensate.random_phase ? 2.0 * pi * rng.uniform() : 0.0;
    c0 = std::polar(std::sqrt(condensate.kappa * t), phase);
  }
  return IntensityField(&kernel, std::move(amps), c0, condensate.profile);
}

PointConfiguration sample_configuration(const TruncatedKernel& kernel,
                                        const CondensateSpec& condensate,
                                        const Window& window, Rng& rng) {
  for (int j = 0; j < 3; ++j)
    if (window.lo[j] < -0.5 * kernel.box.side(j) ||
        window.hi[j] > 0.5 * kernel.box.side(j))
      throw domain_error("sample_configuration: window outside the box");
  IntensityField intensity = sample_intensity(kernel, condensate, rng);
  double bound = intensity.bound_on(window);
  double mean_dominating = bound * window.volume();
  if (!(mean_dominating < 5e7))
    throw range_error(
        "sample_configuration: dominating intensity too large; shrink the "
        "window or the mode cutoff");
  PointConfiguration config{{}, window};
  long n = rng.poisson(mean_dominating);
  config.points.reserve(16);
  for (long i = 0; i < n; ++i) {
    Vec3 x(rng.uniform(window.lo[0], window.hi[0]),
           rng.uniform(window.lo[1], window.hi[1]),
           rng.uniform(window.lo[2], window.hi[2]));
    if (rng.uniform() * bound <= intensity(x)) config.points.push_back(x);
  }
  return config;
}

MeanErr laplace_empirical(const TruncatedKernel& kernel,
                          const CondensateSpec& condensate,
                          const TestFunction& f, const Window& window,
                          long n_samples, Rng& rng) {
  if (n_samples < 100)
    throw domain_error("laplace_empirical: need at least 100 samples");
  std::vector<double> vals;
  vals.reserve(n_samples);
  for (long i = 0; i < n_samples; ++i) {
    PointConfiguration c = sample_configuration(kernel, condensate, window, rng);
    vals.push_back(std::exp(-pair_with(f, c)));
  }
  return mean_with_stderr(vals);
}

TruncatedKernel embedded_limit_kernel(const ThermoParams& thermo,
                                      double delta_inf, const Window& window,
                                      const LimitProcessOptions& opts) {
  thermo.validate();
  if (delta_inf < 0.0)
    throw domain_error("embedded_limit_kernel: delta_inf must be >= 0");
  double side = std::fmax(opts.embedding_factor * window.diameter(), 1e-6);
  BoxGeometry torus(side, side, side);
  // Escalate the cutoff until the discarded occupation mass is small.
  double cutoff = 4.0 / thermo.beta;
  for (int it = 0; it < 30; ++it) {
    TruncatedKernel k = build_kernel(torus, thermo, std::fmax(delta_inf, 1.0),
                                     EnergyCutoff{cutoff},
                                     BoundaryCondition::Periodic);
    // Recompute occupations at the requested gap, excluding the zero mode
    // when delta_inf = 0 (its weight lives in the condensate term).
    std::vector<Mode> modes;
    std::vector<double> occ;
    for (std::size_t i = 0; i < k.modes.size(); ++i) {
      bool zero = k.modes[i] == Mode{0, 0, 0};
      if (zero && delta_inf == 0.0) continue;
      double e = relative_energy(torus, k.modes[i],
                                 BoundaryCondition::Periodic, thermo);
      modes.push_back(k.modes[i]);
      occ.push_back(1.0 / std::expm1(thermo.beta * (e + delta_inf)));
    }
    TruncatedKernel out{.modes = modes,
                        .occupations = VectorXd::Map(occ.data(), occ.size()),
                        .box = torus,
                        .thermo = thermo,
                        .delta = delta_inf,
                        .bc = BoundaryCondition::Periodic,
                        .tail_bound = 0.0};
    // Tail at the true gap, bounded by the geometric estimate at the cutoff.
    double z_tot = 1.0, z_ret = 0.0;
    for (int j = 0; j < 3; ++j)
      z_tot *= theta_lattice(4.0 * axis_scale(thermo, side));
    for (const Mode& m : modes)
      z_ret += std::exp(-thermo.beta * relative_energy(
                            torus, m, BoundaryCondition::Periodic, thermo));
    if (delta_inf == 0.0) z_ret += 1.0;  // excluded zero mode
    double denom = -std::expm1(-thermo.beta * (cutoff + delta_inf));
    out.tail_bound = std::exp(-thermo.beta * delta_inf) *
                     std::fmax(z_tot - z_ret, 0.0) / denom;
    if (out.tail_bound <= opts.tail_rel * out.trace()) return out;
    if (cutoff > 1e4)
      throw numeric_error(
          "embedded_limit_kernel: tail tolerance unreachable at sane cutoffs");
    cutoff *= 1.8;
  }
  throw numeric_error("embedded_limit_kernel: cutoff escalation failed");
}

PointConfiguration sample_limit_process(const ThermoParams& thermo,
                                        double kappa, double delta_inf,
                                        const Window& window, Rng& rng,
                                        const LimitProcessOptions& opts) {
  TruncatedKernel k = embedded_limit_kernel(thermo, delta_inf, window, opts);
  // Recenter the window inside the torus.
  Vec3 mid = 0.5 * (window.lo + window.hi);
  Window centered{window.lo - mid, window.hi - mid};
  CondensateSpec cond{kappa, CondensateProfile::Flat, true};
  PointConfiguration c = sample_configuration(k, cond, centered, rng);
  for (Vec3& x : c.points) x += mid;
  c.window = window;
  return c;
}

std::vector<double> count_law(const TruncatedKernel& kernel, double tail_mass) {
  std::vector<double> pmf{1.0};
  double per_mode_tail = tail_mass / std::max(kernel.rank(), 1);
  for (int i = 0; i < kernel.rank(); ++i) {
    double lam = kernel.occupations[i];
    double q = lam / (1.0 + lam);
    std::vector<double> g;
    double p = 1.0 - q;
    double cum = 0.0;
    while (cum < 1.0 - per_mode_tail && g.size() < 100000) {
      g.push_back(p);
      cum += p;
      p *= q;
      if (q == 0.0) break;
    }
    std::vector<double> next(pmf.size() + g.size() - 1, 0.0);
    for (std::size_t a = 0; a < pmf.size(); ++a)
      for (std::size_t b = 0; b < g.size(); ++b) next[a + b] += pmf[a] * g[b];
    pmf = std::move(next);
  }
  return pmf;
}

}  // namespace bosegas
