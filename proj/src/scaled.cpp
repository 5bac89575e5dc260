#include "bosegas/scaled.hpp"

#include <cmath>

#include "bosegas/heat.hpp"
#include "bosegas/quadrature.hpp"
#include "bosegas/special.hpp"

namespace bosegas {

std::string to_string(Scale scale) {
  switch (scale) {
    case Scale::S: return "S";
    case Scale::D: return "D";
    case Scale::R: return "R";
    case Scale::I: return "I";
  }
  return "?";
}

Vec3 ScalingTransform::map(const Vec3& x) const {
  switch (scale) {
    case Scale::S:
      return {x[0] / box.l1, x[1] / box.l2, 0.0};
    case Scale::D:
    case Scale::R:
      return x / L;
    case Scale::I:
      return {x[0] / (L * L), 0.0, 0.0};
  }
  return x;
}

ScalingTransform make_transform(Scale scale, const AnisotropyProfile& profile,
                                double L) {
  BoxGeometry box = box_from_profile(profile, L);
  bool slab = std::holds_alternative<SlabExp>(profile);
  bool beam = std::holds_alternative<BeamPoly>(profile);
  if ((scale == Scale::S || scale == Scale::D) && !slab)
    throw domain_error("make_transform: S/D contractions require a slab profile");
  if ((scale == Scale::R || scale == Scale::I) && !beam)
    throw domain_error("make_transform: R/I contractions require a beam profile");
  if (scale == Scale::I && std::get<BeamPoly>(profile).gamma != 2.0)
    throw unsupported_regime_error(
        "make_transform: the interval contraction is defined at gamma = 2");
  double weight = 0.0;
  switch (scale) {
    case Scale::S: weight = 1.0 / (box.l1 * box.l2 * L); break;
    case Scale::D:
    case Scale::R: weight = 1.0 / (L * L * L); break;
    case Scale::I: weight = 1.0 / (L * L * L * L); break;
  }
  return {scale, L, profile, box, weight};
}

double ScaledMeasure::pair_with(const TestFunction& f) const {
  KahanSum acc;
  for (const Vec3& u : atoms) acc.add(f(u));
  return weight * acc.value();
}

ScaledMeasure apply_scaling(const PointConfiguration& config,
                            const ScalingTransform& transform) {
  for (int j = 0; j < 3; ++j)
    if (config.window.lo[j] < -0.5 * transform.box.side(j) ||
        config.window.hi[j] > 0.5 * transform.box.side(j))
      throw domain_error(
          "apply_scaling: configuration window does not fit the transform box");
  ScaledMeasure m;
  m.scale = transform.scale;
  m.weight = transform.weight;
  m.atoms.reserve(config.points.size());
  for (const Vec3& x : config.points) m.atoms.push_back(transform.map(x));
  return m;
}

double scale_profile(Scale scale, const Vec3& x) {
  auto c2 = [](double v) {
    double c = std::cos(pi * v);
    return c * c;
  };
  switch (scale) {
    case Scale::S: return c2(x[0]) * c2(x[1]);
    case Scale::D: return c2(x[2]);
    case Scale::R: return c2(x[1]) * c2(x[2]);
    case Scale::I: return 0.0;  // the interval field has no mixture profile
  }
  return 0.0;
}

LimitRFSpec limit_field_spec(const AnisotropyProfile& profile,
                             const ThermoParams& thermo, double rho,
                             Scale scale) {
  PhaseReport rep = classify_phase(profile, thermo, rho);
  LimitRFSpec spec;
  spec.scale = scale;
  spec.thermo = thermo;
  double bulk = limit_kernel_diag(thermo, rep.delta_inf);
  switch (scale) {
    case Scale::S:
      spec.a = bulk + 0.5 * rep.kappa2;
      spec.b = 0.5 * rep.kappa1;
      break;
    case Scale::D:
      spec.a = bulk;
      spec.b = rep.kappa1 + rep.kappa2;
      break;
    case Scale::R:
      spec.a = bulk;
      spec.b = rep.kappa_tilde.value_or(0.0);
      break;
    case Scale::I: {
      spec.a = bulk;
      if (rep.phase == Phase::Normal) {
        spec.alpha2 = std::numeric_limits<double>::infinity();
      } else {
        double h2 = thermo.hbar * thermo.hbar;
        double y = (rho - rep.rho_c) * thermo.beta * pi * pi * h2 /
                   (16.0 * thermo.mass);
        spec.alpha2 = phi_inverse(y) - 1.0;
      }
      break;
    }
  }
  return spec;
}

double r_eigenvalue(int n, double alpha2, const ThermoParams& thermo) {
  if (n < 1) throw domain_error("r_eigenvalue: n >= 1");
  if (std::isinf(alpha2)) return 0.0;
  double den = static_cast<double>(n) * n + alpha2;
  if (den <= 0.0)
    throw domain_error("r_eigenvalue: spectral positivity needs alpha^2 > -1");
  double h2 = thermo.hbar * thermo.hbar;
  return 8.0 * thermo.mass / (thermo.beta * h2 * pi * pi) / den;
}

double r_kernel(double u, double v, double alpha2, const ThermoParams& thermo) {
  if (std::fabs(u) > 0.5 || std::fabs(v) > 0.5)
    throw domain_error("r_kernel: u, v must lie in [-1/2, 1/2]");
  if (std::isinf(alpha2)) return 0.0;
  if (alpha2 <= -1.0)
    throw domain_error("r_kernel: spectral positivity needs alpha^2 > -1");
  double h2 = thermo.hbar * thermo.hbar;
  double coef = 8.0 * thermo.mass / (thermo.beta * h2 * pi * pi);
  double a1 = 1.0 - std::fabs(u - v);
  double a2 = u + v;
  if (std::fabs(alpha2) < 1e-12) {
    return coef * pi * pi / 4.0 * (a1 * a1 - a2 * a2);
  }
  if (alpha2 > 0.0) {
    double al = std::sqrt(alpha2);
    return coef * 0.5 * pi / al *
           (std::cosh(pi * al * a1) - std::cosh(pi * al * a2)) /
           std::sinh(pi * al);
  }
  double al = std::sqrt(-alpha2);  // trigonometric continuation
  return coef * 0.5 * pi / al *
         (std::cos(pi * al * a2) - std::cos(pi * al * a1)) / std::sin(pi * al);
}

namespace {

// Tail over n > N of cos(n theta) / n^2 from the closed form of the full sum
// on [0, 2 pi): sum_{n>=1} cos(n theta)/n^2 = pi^2/6 - pi theta/2 + theta^2/4.
double cos_over_n2_tail(double theta, long N) {
  double th = std::fmod(theta, 2.0 * pi);
  if (th < 0.0) th += 2.0 * pi;
  double full = pi * pi / 6.0 - 0.5 * pi * th + 0.25 * th * th;
  // Rotation recurrence avoids N trig calls.
  double c = std::cos(th), s = std::sin(th);
  double cn = 1.0, sn = 0.0;
  KahanSum partial;
  for (long n = 1; n <= N; ++n) {
    double cn1 = cn * c - sn * s;
    sn = sn * c + cn * s;
    cn = cn1;
    partial.add(cn / (static_cast<double>(n) * n));
  }
  return full - partial.value();
}

}  // namespace

double r_kernel_series(double u, double v, double alpha2,
                       const ThermoParams& thermo, long n_terms) {
  if (std::fabs(u) > 0.5 || std::fabs(v) > 0.5)
    throw domain_error("r_kernel_series: u, v must lie in [-1/2, 1/2]");
  if (std::isinf(alpha2)) return 0.0;
  if (alpha2 <= -1.0)
    throw domain_error("r_kernel_series: spectral positivity needs alpha^2 > -1");
  double h2 = thermo.hbar * thermo.hbar;
  double coef = 8.0 * thermo.mass / (thermo.beta * h2 * pi * pi);
  double th1 = pi * (u - v);
  double th2 = pi * (1.0 + u + v);
  double c1 = std::cos(th1), s1 = std::sin(th1);
  double c2 = std::cos(th2), s2 = std::sin(th2);
  double cn1 = 1.0, sn1 = 0.0, cn2 = 1.0, sn2 = 0.0;
  KahanSum acc;
  for (long n = 1; n <= n_terms; ++n) {
    double t = cn1 * c1 - sn1 * s1;
    sn1 = sn1 * c1 + cn1 * s1;
    cn1 = t;
    t = cn2 * c2 - sn2 * s2;
    sn2 = sn2 * c2 + cn2 * s2;
    cn2 = t;
    acc.add((cn1 - cn2) / (static_cast<double>(n) * n + alpha2));
  }
  // Analytic tail of the 1/n^2 part; the alpha^2 correction to the tail is
  // O(alpha^2 / N^3) and ignored.
  double tail = cos_over_n2_tail(th1, n_terms) - cos_over_n2_tail(th2, n_terms);
  return coef * (acc.value() + tail);
}

namespace {

// Fourier coefficients c_k = int f(u) cos(k pi (u + 1/2)) du over the overlap
// of supp f with the interval.
std::vector<double> interval_cosine_coeffs(const TestFunction& f, int k_max) {
  double lo = std::fmax(f.support_lo[0], -0.5);
  double hi = std::fmin(f.support_hi[0], 0.5);
  std::vector<double> c(k_max + 1, 0.0);
  if (!(lo < hi)) return c;
  for (int k = 0; k <= k_max; ++k) {
    int order = std::min(8 + 4 * k, 512);
    c[k] = integrate_1d(
        [&](double u) {
          return f(Vec3(u, 0.0, 0.0)) * std::cos(k * pi * (u + 0.5));
        },
        lo, hi, order);
  }
  return c;
}

double interval_determinant(const LimitRFSpec& spec, const TestFunction& f,
                            int basis) {
  // Matrix of sqrt(f) R sqrt(f) in the sine eigenbasis; the neglected
  // off-diagonal coupling beyond `basis` enters as a diagonal tail product.
  std::vector<double> c = interval_cosine_coeffs(f, 2 * basis);
  MatrixXd m = MatrixXd::Identity(basis, basis);
  for (int n = 1; n <= basis; ++n)
    for (int mm = 1; mm <= basis; ++mm) {
      double rn = r_eigenvalue(n, spec.alpha2, spec.thermo);
      double rm = r_eigenvalue(mm, spec.alpha2, spec.thermo);
      m(n - 1, mm - 1) +=
          std::sqrt(rn * rm) * (c[std::abs(n - mm)] - c[n + mm]);
    }
  double det = m.determinant();
  // Diagonal tail: modes above the basis feel only the mean of f.
  double fbar = c[0];
  double log_tail = 0.0;
  int n_direct = basis + 2000;
  for (int n = basis + 1; n <= n_direct; ++n)
    log_tail += std::log1p(r_eigenvalue(n, spec.alpha2, spec.thermo) * fbar);
  // Midpoint integral of the remaining r_n fbar; the log1p curvature beyond
  // here is O((coef fbar)^2 / n^3), below the working tolerance.
  double h2 = spec.thermo.hbar * spec.thermo.hbar;
  double coef = 8.0 * spec.thermo.mass / (spec.thermo.beta * h2 * pi * pi);
  double n0 = n_direct + 0.5;
  double integral;
  if (spec.alpha2 > 0.0) {
    double al = std::sqrt(spec.alpha2);
    integral = (0.5 * pi - std::atan(n0 / al)) / al;
  } else if (spec.alpha2 < 0.0) {
    double al = std::sqrt(-spec.alpha2);
    integral = 0.5 / al * std::log((n0 + al) / (n0 - al));
  } else {
    integral = 1.0 / n0;
  }
  log_tail += coef * fbar * integral;
  return det * std::exp(log_tail);
}

}  // namespace

double limit_gf(const LimitRFSpec& spec, const TestFunction& f) {
  if (spec.scale == Scale::I) {
    double lo = std::fmax(f.support_lo[0], -0.5);
    double hi = std::fmin(f.support_hi[0], 0.5);
    double int_f =
        (lo < hi)
            ? integrate_1d([&](double u) { return f(Vec3(u, 0.0, 0.0)); }, lo,
                           hi, 128)
            : 0.0;
    if (std::isinf(spec.alpha2)) return std::exp(-spec.a * int_f);
    double prev = 0.0;
    for (int basis : {96, 144, 216}) {
      double det = interval_determinant(spec, f, basis);
      double value = std::exp(-spec.a * int_f) / det;
      if (prev != 0.0 && std::fabs(value - prev) <= 1e-8 * std::fabs(value))
        return value;
      prev = value;
    }
    return prev;
  }
  // Product-profile scales: exp(-a int f) / (1 + b int f*profile).
  Vec3 lo, hi;
  Vec3 region_lo, region_hi;
  switch (spec.scale) {
    case Scale::S:
      region_lo = {-0.5, -0.5, 0.0};
      region_hi = {0.5, 0.5, 0.0};
      break;
    case Scale::D:
      region_lo = {-1e30, -1e30, -0.5};
      region_hi = {1e30, 1e30, 0.5};
      break;
    default:  // R
      region_lo = {-1e30, -0.5, -0.5};
      region_hi = {1e30, 0.5, 0.5};
      break;
  }
  for (int j = 0; j < 3; ++j) {
    lo[j] = std::fmax(f.support_lo[j], region_lo[j]);
    hi[j] = std::fmin(f.support_hi[j], region_hi[j]);
    if (spec.scale == Scale::S && j == 2) { lo[2] = 0.0; hi[2] = 0.0; }
    if (j < 2 || spec.scale != Scale::S)
      if (!(lo[j] <= hi[j])) return 1.0;
  }
  double int_f = 0.0, int_fp = 0.0;
  if (spec.scale == Scale::S) {
    const QuadRule& rule = gauss_legendre(64);
    Vec3 mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    KahanSum sf, sfp;
    for (size_t i = 0; i < rule.nodes.size(); ++i)
      for (size_t j = 0; j < rule.nodes.size(); ++j) {
        Vec3 u(mid[0] + half[0] * rule.nodes[i],
               mid[1] + half[1] * rule.nodes[j], 0.0);
        double w = rule.weights[i] * rule.weights[j] * half[0] * half[1];
        double fv = f(u);
        sf.add(w * fv);
        sfp.add(w * fv * scale_profile(Scale::S, u));
      }
    int_f = sf.value();
    int_fp = sfp.value();
  } else {
    int_f = integrate_box([&](const Vec3& u) { return f(u); }, lo, hi, 48);
    int_fp = integrate_box(
        [&](const Vec3& u) { return f(u) * scale_profile(spec.scale, u); }, lo,
        hi, 48);
  }
  return std::exp(-spec.a * int_f) / (1.0 + spec.b * int_fp);
}

LimitDensityField::LimitDensityField(const LimitRFSpec& spec, double t)
    : spec_(spec), t_(t) {}

LimitDensityField::LimitDensityField(const LimitRFSpec& spec,
                                     std::vector<std::complex<double>> coeffs)
    : spec_(spec), coeffs_(std::move(coeffs)) {}

double LimitDensityField::operator()(const Vec3& x) const {
  if (spec_.scale != Scale::I)
    return spec_.a + spec_.b * t_ * scale_profile(spec_.scale, x);
  std::complex<double> g = 0.0;
  double v = pi * (x[0] + 0.5);
  for (std::size_t n = 1; n <= coeffs_.size(); ++n)
    g += coeffs_[n - 1] * std::sqrt(2.0) * std::sin(n * v);
  return spec_.a + std::norm(g);
}

LimitDensityField sample_limit_density(const LimitRFSpec& spec, Rng& rng,
                                       int n_modes) {
  if (spec.scale != Scale::I) return {spec, rng.exponential()};
  std::vector<std::complex<double>> coeffs;
  if (!std::isinf(spec.alpha2)) {
    coeffs.reserve(n_modes);
    for (int n = 1; n <= n_modes; ++n)
      coeffs.push_back(std::sqrt(r_eigenvalue(n, spec.alpha2, spec.thermo)) *
                       rng.complex_normal());
  }
  return {spec, std::move(coeffs)};
}

double limit_density_profile(const LimitRFSpec& spec, const Vec3& x) {
  if (spec.scale != Scale::I)
    return spec.a + spec.b * scale_profile(spec.scale, x);
  if (std::isinf(spec.alpha2)) return spec.a;
  return spec.a + r_kernel(x[0], x[0], spec.alpha2, spec.thermo);
}

ScaledDensityTable finite_L_scaled_density(const AnisotropyProfile& profile,
                                           const ThermoParams& thermo,
                                           double rho, double L, Scale scale,
                                           std::span<const Vec3> grid) {
  ScaledDensityTable table;
  table.delta = delta_schedule(profile, thermo, rho, L);
  BoxGeometry box = box_from_profile(profile, L);
  LimitRFSpec spec = limit_field_spec(profile, thermo, rho, scale);
  double beta_delta = thermo.beta * table.delta;
  double q1 = axis_scale(thermo, box.l1);
  double q2 = axis_scale(thermo, box.l2);
  double q3 = axis_scale(thermo, box.l3);

  for (const Vec3& u : grid) {
    double finite = 0.0;
    switch (scale) {
      case Scale::S: {
        // x3 integrated out; u1, u2 are fractions of the long sides.
        auto factor = [&](double n) {
          return diag_factor(n * q1, u[0]) * diag_factor(n * q2, u[1]) *
                 theta_sum(n * q3);
        };
        double ground = 4.0 * scale_profile(Scale::S, u);
        finite = geometric_series_sum(beta_delta, factor, ground) /
                 (box.l1 * box.l2 * L);
        break;
      }
      case Scale::D: {
        Vec3 x = u * L;
        finite = diagonal_density_exact(box, thermo, table.delta, x);
        break;
      }
      case Scale::R: {
        Vec3 x = u * L;
        finite = diagonal_density_exact(box, thermo, table.delta, x);
        break;
      }
      case Scale::I: {
        // x2, x3 integrated out; u is a fraction of the long side.
        auto factor = [&](double n) {
          return diag_factor(n * q1, u[0]) * theta_sum(n * q2) *
                 theta_sum(n * q3);
        };
        double c = std::cos(pi * u[0]);
        double ground = 2.0 * c * c;
        finite = geometric_series_sum(beta_delta, factor, ground) /
                 (L * L * L * L);
        break;
      }
    }
    double limit;
    if (scale == Scale::I) {
      // The transverse ground profile averages to 1/4 under the contraction.
      limit = std::isinf(spec.alpha2)
                  ? spec.a
                  : spec.a + 0.25 * r_kernel(u[0], u[0], spec.alpha2, thermo);
    } else {
      limit = limit_density_profile(spec, u);
    }
    table.grid.push_back(u);
    table.finite.push_back(finite);
    table.limit.push_back(limit);
  }
  double max_limit = 1e-300;
  for (double v : table.limit) max_limit = std::fmax(max_limit, std::fabs(v));
  for (std::size_t i = 0; i < table.grid.size(); ++i)
    table.sup_gap = std::fmax(
        table.sup_gap, std::fabs(table.finite[i] - table.limit[i]) / max_limit);
  return table;
}

}  // namespace bosegas
