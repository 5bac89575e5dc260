#pragma once

#include <limits>
#include <vector>

#include "bosegas/sampler.hpp"
#include "bosegas/thermo.hpp"

namespace bosegas {

// Target regions of the four contractions:
//   S: unit square (slab seen from above), atoms carry (u1, u2, 0)
//   D: infinite plate of unit thickness, atoms carry u = x/L
//   R: infinite rod of unit cross-section, atoms carry u = x/L
//   I: unit interval (prism long axis), atoms carry (u, 0, 0)
enum class Scale { S, D, R, I };

std::string to_string(Scale scale);

struct ScalingTransform {
  Scale scale;
  double L;
  AnisotropyProfile profile;
  BoxGeometry box;     // source box the configurations must come from
  double weight;       // mass carried by each mapped atom

  Vec3 map(const Vec3& x) const;
};

ScalingTransform make_transform(Scale scale, const AnisotropyProfile& profile,
                                double L);

struct ScaledMeasure {
  std::vector<Vec3> atoms;
  double weight = 0.0;
  Scale scale = Scale::D;

  double pair_with(const TestFunction& f) const;
};

ScaledMeasure apply_scaling(const PointConfiguration& config,
                            const ScalingTransform& transform);

// Parameters of a limit random field. For S/D/R the field is
// a + b * t * profile(x) with t ~ Exp(1); for I it is a squared Gaussian
// with interval covariance of spectral parameter alpha^2 (> -1; +inf means
// the covariance vanishes).
struct LimitRFSpec {
  Scale scale = Scale::D;
  double a = 0.0;
  double b = 0.0;
  ThermoParams thermo;
  double alpha2 = std::numeric_limits<double>::infinity();
};

LimitRFSpec limit_field_spec(const AnisotropyProfile& profile,
                             const ThermoParams& thermo, double rho,
                             Scale scale);

double scale_profile(Scale scale, const Vec3& x);

// Interval covariance kernel: closed (cosh/trig) form. alpha2 in (-1, inf].
double r_kernel(double u, double v, double alpha2, const ThermoParams& thermo);

// Independent partial-sum route with analytic tail of the non-oscillatory
// part; agreement with r_kernel is a two-route check.
double r_kernel_series(double u, double v, double alpha2,
                       const ThermoParams& thermo, long n_terms = 100000);

// Eigenvalues r_n of the interval kernel in the sine basis.
double r_eigenvalue(int n, double alpha2, const ThermoParams& thermo);

// Generating functional E[e^{-<f, eta>}] of the limit field.
double limit_gf(const LimitRFSpec& spec, const TestFunction& f);

// One draw of the limit density field; evaluate anywhere in the region.
class LimitDensityField {
 public:
  LimitDensityField(const LimitRFSpec& spec, double t);                 // S/D/R
  LimitDensityField(const LimitRFSpec& spec,
                    std::vector<std::complex<double>> coeffs);          // I
  double operator()(const Vec3& x) const;

 private:
  LimitRFSpec spec_;
  double t_ = 0.0;
  std::vector<std::complex<double>> coeffs_;
};

LimitDensityField sample_limit_density(const LimitRFSpec& spec, Rng& rng,
                                       int n_modes = 2000);

// Expected density of the limit field at a point of the region.
double limit_density_profile(const LimitRFSpec& spec, const Vec3& x);

struct ScaledDensityTable {
  std::vector<Vec3> grid;
  std::vector<double> finite;  // exact Darboux mode sums at this L
  std::vector<double> limit;   // limit the finite values converge to
  double sup_gap = 0.0;        // max |finite - limit| / max |limit|
  double delta = 0.0;          // gap used at this L
};

// Deterministic first-moment check: the exact expected scaled density at
// finite L against its limit profile. No sampling. For the I contraction the
// transverse average quarters the condensate term relative to the printed
// field profile; the limit column accounts for that.
ScaledDensityTable finite_L_scaled_density(const AnisotropyProfile& profile,
                                           const ThermoParams& thermo,
                                           double rho, double L, Scale scale,
                                           std::span<const Vec3> grid);

}  // namespace bosegas
