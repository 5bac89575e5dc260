#include "bosegas/special.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "bosegas/common.hpp"
#include "bosegas/roots.hpp"

namespace bosegas {

namespace {

double polylog_direct(double s, double t) {
  KahanSum acc;
  double log_t = -t;
  for (long n = 1; n < 2000000; ++n) {
    double term = std::exp(n * log_t - s * std::log(static_cast<double>(n)));
    acc.add(term);
    if (term < 1e-18 * std::fabs(acc.value()) && n > 4) break;
  }
  return acc.value();
}

// Li_s(e^{-t}) = Gamma(1-s) t^{s-1} + sum_j zeta(s-j) (-t)^j / j!
// for non-integer s, |t| < 2*pi. Used below the direct-sum crossover.
double polylog_hurwitz(double s, double t) {
  double value = std::tgamma(1.0 - s) * std::pow(t, s - 1.0);
  double term = 1.0;  // (-t)^j / j!
  for (int j = 0; j < 60; ++j) {
    if (j > 0) term *= -t / j;
    double add = std::riemann_zeta(s - j) * term;
    value += add;
    if (std::fabs(add) < 1e-18 * std::fabs(value) && j > 4) break;
  }
  return value;
}

double polylog_exp(double s, double t) {
  if (t < 0.0) throw domain_error("polylog_exp: t must be >= 0");
  if (t == 0.0) {
    if (s <= 1.0) throw domain_error("polylog_exp: divergent at t = 0");
    return std::riemann_zeta(s);
  }
  return (t >= 0.5) ? polylog_direct(s, t) : polylog_hurwitz(s, t);
}

}  // namespace

double polylog_exp_3_2(double t) { return polylog_exp(1.5, t); }

double polylog_exp_1_2(double t) { return polylog_exp(0.5, t); }

double polylog_exp_1(double t) {
  if (t <= 0.0) throw domain_error("polylog_exp_1: t must be > 0");
  return -std::log(-std::expm1(-t));
}

double power_tail(double s, double N) {
  if (s <= 1.0) throw domain_error("power_tail: requires s > 1");
  // sum_{n>N} n^{-s} = N^{1-s}/(s-1) - N^{-s}/2 + s N^{-s-1}/12 - ...
  double f = std::pow(N, -s);
  return std::pow(N, 1.0 - s) / (s - 1.0) - 0.5 * f + s * f / (12.0 * N) -
         s * (s + 1.0) * (s + 2.0) * f / (720.0 * N * N * N);
}

namespace {

// Upper incomplete Gamma(1/2 - j, x) by downward recurrence from
// Gamma(1/2, x) = sqrt(pi) erfc(sqrt(x)).
double upper_gamma_half_minus(int j, double x) {
  double a = 0.5;
  double g = std::sqrt(pi) * std::erfc(std::sqrt(x));
  for (int i = 0; i < j; ++i) {
    g = (g - std::pow(x, a - 1.0) * std::exp(-x)) / (a - 1.0);
    a -= 1.0;
  }
  return g;
}

}  // namespace

double exp_power_tail(double s, double t, double N) {
  if (t == 0.0) return power_tail(s, N);
  if (t * N > 45.0) return 0.0;
  // Euler-Maclaurin on f(x) = e^{-tx} x^{-s} from N:
  // sum_{n>N} f(n) = int_N^inf f - f(N)/2 - f'(N)/12 + ...
  int j = static_cast<int>(std::lround(s - 1.5));
  double integral =
      std::pow(t, s - 1.0) * upper_gamma_half_minus(j + 1, N * t);
  double fN = std::exp(-t * N) * std::pow(N, -s);
  double fpN = -(t + s / N) * fN;
  return integral - 0.5 * fN - fpN / 12.0;
}

double phi(double x) {
  if (x < 0.0) throw domain_error("phi: x must be >= 0");
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  double d = x - 1.0;
  if (std::fabs(d) < 1e-14) return pi * pi / 8.0;
  if (d > 0.0) {
    double s = std::sqrt(d);
    return pi / (4.0 * s) * std::tanh(0.5 * pi * s);
  }
  double s = std::sqrt(-d);
  return pi / (4.0 * s) * std::tan(0.5 * pi * s);
}

double phi_series(double x, std::int64_t n_terms) {
  if (x < 0.0) throw domain_error("phi_series: x must be >= 0");
  if (x == 0.0) return std::numeric_limits<double>::infinity();
  KahanSum acc;
  for (std::int64_t n = 1; n <= n_terms; ++n) {
    double k = 2.0 * static_cast<double>(n) - 1.0;
    acc.add(1.0 / (k * k - 1.0 + x));
  }
  // Midpoint tail: int_{N+1/2}^inf dn / (4(n - 1/2)^2 - (1 - x)).
  double v0 = 2.0 * static_cast<double>(n_terms);
  double c = 1.0 - x;
  double tail;
  if (c < 0.0) {
    double r = std::sqrt(-c);
    tail = (0.5 / r) * (0.5 * pi - std::atan(v0 / r));
  } else if (c > 0.0) {
    double r = std::sqrt(c);
    tail = (0.25 / r) * std::log((v0 + r) / (v0 - r));
  } else {
    tail = 0.5 / v0;
  }
  return acc.value() + tail;
}

double phi_inverse(double y) {
  if (!(y > 0.0)) throw domain_error("phi_inverse: y must be in (0, phi(0))");
  double lo = std::fmin(1.0, 0.5 / y);
  while (phi(lo) <= y) {
    lo /= 8.0;
    if (lo < 1e-300) throw numeric_error("phi_inverse: bracket underflow");
  }
  double hi = std::fmax(1.0, 2.0 * (pi * pi) / (16.0 * y * y));
  while (phi(hi) >= y) {
    hi *= 8.0;
    if (hi > 1e300) throw numeric_error("phi_inverse: bracket overflow");
  }
  return bracketed_root([y](double x) { return phi(x) - y; }, lo, hi, 1e-13);
}

double gamma_p(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw domain_error("gamma_p: invalid arguments");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) {
    // Series representation.
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  // Continued fraction for Q(a, x).
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  double q = std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
  return 1.0 - q;
}

}  // namespace bosegas
