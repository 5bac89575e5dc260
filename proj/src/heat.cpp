#include "bosegas/heat.hpp"

#include <cmath>

#include "bosegas/common.hpp"
#include "bosegas/quadrature.hpp"

namespace bosegas {

namespace {

constexpr double kImageSwitch = 0.25;

double theta_full_line(double q) {
  // sum_{k in Z} e^{-q k^2} via Poisson resummation for small q.
  if (q >= kImageSwitch) {
    double s = 1.0;
    for (int k = 1;; ++k) {
      double t = std::exp(-q * k * k);
      s += 2.0 * t;
      if (t < 1e-18) break;
    }
    return s;
  }
  double s = 1.0;
  for (int m = 1;; ++m) {
    double t = std::exp(-pi * pi * m * m / q);
    s += 2.0 * t;
    if (t < 1e-18) break;
  }
  return std::sqrt(pi / q) * s;
}

double theta_shifted_line(double q, double phi) {
  // sum_{k in Z} e^{-q k^2} cos(k phi) = sqrt(pi/q) sum_m e^{-(phi-2pi m)^2/4q}.
  if (q >= kImageSwitch) {
    double s = 1.0;
    for (int k = 1;; ++k) {
      double t = std::exp(-q * k * k);
      s += 2.0 * t * std::cos(k * phi);
      if (t < 1e-18) break;
    }
    return s;
  }
  phi = std::remainder(phi, 2.0 * pi);
  double s = 0.0;
  for (int m = -3; m <= 3; ++m) {
    double d = phi - 2.0 * pi * m;
    double e = d * d / (4.0 * q);
    if (e < 45.0) s += std::exp(-e);
  }
  return std::sqrt(pi / q) * s;
}

}  // namespace

double theta_sum(double q) {
  if (!(q > 0.0)) throw domain_error("theta_sum: q must be > 0");
  if (q >= kImageSwitch) {
    // Direct sum; the resummed form cancels catastrophically once
    // e^{-q} drops below one ulp of the k = 1 term.
    KahanSum acc;
    for (int k = 1;; ++k) {
      double t = std::exp(-q * (static_cast<double>(k) * k - 1.0));
      acc.add(t);
      if (t < 1e-18) break;
    }
    return acc.value();
  }
  return std::exp(q) * 0.5 * (theta_full_line(q) - 1.0);
}

double theta_lattice(double q) {
  if (!(q > 0.0)) throw domain_error("theta_lattice: q must be > 0");
  return theta_full_line(q);
}

double theta_alt_cos(double q, double phi) {
  if (!(q > 0.0)) throw domain_error("theta_alt_cos: q must be > 0");
  if (q >= kImageSwitch) {
    KahanSum acc;
    double sign = -1.0;
    for (int k = 1;; ++k, sign = -sign) {
      double t = std::exp(-q * (static_cast<double>(k) * k - 1.0));
      acc.add(sign * t * std::cos(k * phi));
      if (t < 1e-18) break;
    }
    return acc.value();
  }
  // (-1)^k cos(k phi) folds into a phase shift by pi.
  return std::exp(q) * 0.5 * (theta_shifted_line(q, phi + pi) - 1.0);
}

double diag_factor(double q, double w) {
  // 2 sin^2(pi k (1/2 + w)) = 1 - (-1)^k cos(2 pi k w); the two "-1" halves
  // cancel, leaving pure image sums.
  if (q >= kImageSwitch) {
    KahanSum acc;
    for (int k = 1;; ++k) {
      double t = std::exp(-q * (static_cast<double>(k) * k - 1.0));
      double s = std::sin(pi * k * (0.5 + w));
      acc.add(t * 2.0 * s * s);
      if (t < 1e-18 && k > 1) break;
    }
    return acc.value();
  }
  return std::exp(q) * 0.5 *
         (theta_full_line(q) - theta_shifted_line(q, 2.0 * pi * w + pi));
}

double axis_scale(const ThermoParams& thermo, double side) {
  return thermo.beta * thermo.hbar * thermo.hbar * pi * pi /
         (2.0 * thermo.mass * side * side);
}

double geometric_series_sum(double beta_delta,
                            const std::function<double(double)>& factor,
                            double ground_value, long n_direct) {
  if (!(beta_delta > 0.0))
    throw domain_error("geometric_series_sum: beta*delta must be > 0");
  KahanSum acc;
  // Closed-form ground part.
  acc.add(ground_value / std::expm1(beta_delta));
  bool exhausted = false;
  long n = 1;
  for (; n <= n_direct; ++n) {
    double damp = n * beta_delta;
    if (damp > 700.0) {
      exhausted = true;
      break;
    }
    double excess = factor(static_cast<double>(n)) - ground_value;
    double term = std::exp(-damp) * excess;
    acc.add(term);
    if (std::fabs(term) < 1e-17 * (std::fabs(acc.value()) + 1e-300) &&
        damp > 40.0) {
      exhausted = true;
      break;
    }
  }
  if (!exhausted) {
    // Remainder: smooth in n on scales >> 1, so the midpoint integral
    // approximates the tail sum to high order.
    double lo = static_cast<double>(n_direct) + 0.5;
    double hi = lo + 745.0 / beta_delta;
    auto h = [&](double x) {
      return std::exp(-x * beta_delta) * (factor(x) - ground_value);
    };
    double l_lo = std::log(lo), l_hi = std::log(hi);
    int panels = std::max(4, static_cast<int>((l_hi - l_lo) * 3.0));
    for (int p = 0; p < panels; ++p) {
      double a = l_lo + (l_hi - l_lo) * p / panels;
      double b = l_lo + (l_hi - l_lo) * (p + 1) / panels;
      acc.add(integrate_1d([&](double s) { double x = std::exp(s); return h(x) * x; },
                           a, b, 24));
    }
  }
  return acc.value();
}

double mean_density_exact(const BoxGeometry& box, const ThermoParams& thermo,
                          double delta) {
  thermo.validate();
  if (!(delta > 0.0))
    throw domain_error("mean_density_exact: delta must be > 0");
  double q1 = axis_scale(thermo, box.l1);
  double q2 = axis_scale(thermo, box.l2);
  double q3 = axis_scale(thermo, box.l3);
  auto factor = [&](double n) {
    return theta_sum(n * q1) * theta_sum(n * q2) * theta_sum(n * q3);
  };
  double total = geometric_series_sum(thermo.beta * delta, factor, 1.0);
  return total / box.volume();
}

double diagonal_density_exact(const BoxGeometry& box,
                              const ThermoParams& thermo, double delta,
                              const Vec3& x) {
  thermo.validate();
  if (!(delta > 0.0))
    throw domain_error("diagonal_density_exact: delta must be > 0");
  if (!box.contains(x))
    throw domain_error("diagonal_density_exact: x outside the box");
  double q[3], w[3];
  for (int j = 0; j < 3; ++j) {
    q[j] = axis_scale(thermo, box.side(j));
    w[j] = x[j] / box.side(j);
  }
  auto factor = [&](double n) {
    return diag_factor(n * q[0], w[0]) * diag_factor(n * q[1], w[1]) *
           diag_factor(n * q[2], w[2]);
  };
  // k = (1,1,1) limit of the factor product: 2 cos^2(pi w) per axis.
  double ground = 1.0;
  for (int j = 0; j < 3; ++j) {
    double c = std::cos(pi * w[j]);
    ground *= 2.0 * c * c;
  }
  double total = geometric_series_sum(thermo.beta * delta, factor, ground);
  return total / box.volume();
}

}  // namespace bosegas
