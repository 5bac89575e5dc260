#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "bosegas/kernel.hpp"
#include "bosegas/rng.hpp"
#include "bosegas/stats.hpp"

namespace bosegas {

struct Window {
  Vec3 lo, hi;

  double volume() const {
    return (hi[0] - lo[0]) * (hi[1] - lo[1]) * (hi[2] - lo[2]);
  }
  double diameter() const { return (hi - lo).norm(); }
  bool contains(const Vec3& x) const {
    return x[0] >= lo[0] && x[0] <= hi[0] && x[1] >= lo[1] && x[1] <= hi[1] &&
           x[2] >= lo[2] && x[2] <= hi[2];
  }
};

struct PointConfiguration {
  std::vector<Vec3> points;
  Window window;

  long count() const { return static_cast<long>(points.size()); }
};

// Nonnegative continuous function with compact support (a box).
struct TestFunction {
  std::function<double(const Vec3&)> fn;
  Vec3 support_lo, support_hi;

  double operator()(const Vec3& x) const {
    for (int j = 0; j < 3; ++j)
      if (x[j] < support_lo[j] || x[j] > support_hi[j]) return 0.0;
    return fn(x);
  }
};

// Smooth compactly supported bump: amp * prod_j cos^2(pi (x_j-c_j)/(2 w_j)).
TestFunction cosine_bump(const Vec3& center, const Vec3& halfwidth, double amp);

// Constant value on a box, zero outside.
TestFunction box_indicator(double value, const Vec3& lo, const Vec3& hi);

double pair_with(const TestFunction& f, const PointConfiguration& config);

enum class CondensateProfile { GroundState, Flat };

// GroundState: kappa is the mean condensate count, spread over the box's
// ground eigenfunction. Flat: kappa is a uniform mean condensate density
// (the translation-invariant limit convention).
struct CondensateSpec {
  double kappa = 0.0;
  CondensateProfile profile = CondensateProfile::GroundState;
  bool random_phase = true;
};

// Closed-form Laplace functional of the point process: Det(1+M)^{-1} over the
// retained modes, divided by 1 + kappa * (sqrt(a) u0, (1+K_f)^{-1} sqrt(a) u0)
// when a condensate is present (a = 1 - e^{-f}). Tensor Gauss-Legendre on the
// support of f, order escalated until the value is stable to rel_tol.
double laplace_closed(const TruncatedKernel& kernel, const TestFunction& f,
                      const CondensateSpec& condensate = {},
                      double rel_tol = 1e-8);

// One realization of the random intensity |G|^2 driving the Cox process.
class IntensityField {
 public:
  IntensityField(const TruncatedKernel* kernel,
                 std::vector<std::complex<double>> amplitudes,
                 std::complex<double> condensate_amp,
                 CondensateProfile profile);

  double operator()(const Vec3& x) const;
  // Upper bound for |G|^2 over a window, from per-mode sup bounds.
  double bound_on(const Window& w) const;
  std::complex<double> condensate_amplitude() const { return condensate_amp_; }

 private:
  const TruncatedKernel* kernel_;
  std::vector<std::complex<double>> amps_;
  std::complex<double> condensate_amp_;
  CondensateProfile profile_;
};

IntensityField sample_intensity(const TruncatedKernel& kernel,
                                const CondensateSpec& condensate, Rng& rng);

// Poisson process with the drawn intensity, by thinning under a dominating
// homogeneous process at the intensity bound.
PointConfiguration sample_configuration(const TruncatedKernel& kernel,
                                        const CondensateSpec& condensate,
                                        const Window& window, Rng& rng);

// Monte Carlo estimate of E[e^{-<f, xi>}] with jackknife standard error.
MeanErr laplace_empirical(const TruncatedKernel& kernel,
                          const CondensateSpec& condensate,
                          const TestFunction& f, const Window& window,
                          long n_samples, Rng& rng);

struct LimitProcessOptions {
  double embedding_factor = 3.0;  // embedding side over window diameter
  double tail_rel = 1e-3;         // discarded occupation mass, relative
};

// Periodic spectral stand-in for the translation-invariant kernel on a torus
// embedding the window. At delta_inf = 0 the zero mode is excluded (its
// occupation diverges; the condensate term carries that weight instead).
TruncatedKernel embedded_limit_kernel(const ThermoParams& thermo,
                                      double delta_inf, const Window& window,
                                      const LimitProcessOptions& opts = {});

// Sampler for the infinite-volume process: Cox draw on the embedded kernel
// plus a flat condensate of density kappa.
PointConfiguration sample_limit_process(const ThermoParams& thermo,
                                        double kappa, double delta_inf,
                                        const Window& window, Rng& rng,
                                        const LimitProcessOptions& opts = {});

// Exact law of the total count: convolution of per-mode geometrics with
// success parameter 1/(1 + lambda_k), truncated at total tail <= tail_mass.
std::vector<double> count_law(const TruncatedKernel& kernel,
                              double tail_mass = 1e-12);

}  // namespace bosegas
