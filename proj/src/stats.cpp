#include "bosegas/stats.hpp"

#include <algorithm>
#include <cmath>

#include "bosegas/common.hpp"
#include "bosegas/roots.hpp"
#include "bosegas/special.hpp"

namespace bosegas {

MeanErr mean_with_stderr(std::span<const double> xs) {
  MeanErr out;
  out.n = static_cast<long>(xs.size());
  if (out.n == 0) return out;
  KahanSum s;
  for (double x : xs) s.add(x);
  out.mean = s.value() / out.n;
  if (out.n < 2) return out;
  // Jackknife over leave-one-out means; for the mean this reduces to the
  // usual standard error but keeps the estimator stated in one place.
  KahanSum ss;
  for (double x : xs) {
    double loo = (s.value() - x) / (out.n - 1);
    double d = loo - out.mean;
    ss.add(d * d);
  }
  out.stderr_ = std::sqrt((out.n - 1.0) / out.n * ss.value());
  return out;
}

ChiSquare chi_square_binned(std::span<const double> observed,
                            std::span<const double> expected,
                            double min_expected) {
  if (observed.size() != expected.size())
    throw domain_error("chi_square_binned: size mismatch");
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  for (size_t i = 0; i < observed.size(); ++i) {
    o_acc += observed[i];
    e_acc += expected[i];
    if (e_acc >= min_expected) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  if (e_acc > 0.0 && !exp.empty()) {
    obs.back() += o_acc;
    exp.back() += e_acc;
  }
  ChiSquare out;
  out.dof = static_cast<int>(exp.size()) - 1;
  for (size_t i = 0; i < exp.size(); ++i) {
    double d = obs[i] - exp[i];
    out.statistic += d * d / exp[i];
  }
  return out;
}

double chi_square_cdf(double x, int dof) {
  if (x <= 0.0) return 0.0;
  return gamma_p(0.5 * dof, 0.5 * x);
}

double chi_square_quantile(double p, int dof) {
  if (p <= 0.0 || p >= 1.0) throw domain_error("chi_square_quantile: p in (0,1)");
  double hi = dof + 10.0 * std::sqrt(2.0 * dof) + 20.0;
  while (chi_square_cdf(hi, dof) < p) hi *= 2.0;
  return bracketed_root(
      [p, dof](double x) { return chi_square_cdf(x, dof) - p; }, 0.0, hi,
      1e-10);
}

double ks_statistic(std::span<const double> sorted_cdf_values) {
  double n = static_cast<double>(sorted_cdf_values.size());
  double d = 0.0;
  for (size_t i = 0; i < sorted_cdf_values.size(); ++i) {
    double f = sorted_cdf_values[i];
    d = std::max(d, std::fabs(f - (i + 1) / n));
    d = std::max(d, std::fabs(f - i / n));
  }
  return d;
}

double ks_pvalue(double statistic, long n) {
  double lambda = (std::sqrt(static_cast<double>(n)) + 0.12 +
                   0.11 / std::sqrt(static_cast<double>(n))) *
                  statistic;
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    double term = 2.0 * std::pow(-1.0, j - 1) * std::exp(-2.0 * j * j * lambda * lambda);
    sum += term;
    if (std::fabs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw domain_error("fit_line: need matched samples, n >= 2");
  double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  LineFit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  return f;
}

Extrapolation richardson_in_inverse(std::span<const double> x,
                                    std::span<const double> v,
                                    double rel_tol) {
  if (x.size() != v.size() || x.size() < 2)
    throw domain_error("richardson_in_inverse: need >= 2 points");
  // A sequence that has already collapsed to zero needs no extrapolation;
  // the 1/x elimination would amplify the dead transient instead.
  double v_max = 0.0;
  for (double vi : v) v_max = std::max(v_max, std::fabs(vi));
  if (std::fabs(v.back()) <= 1e-6 * v_max || v_max == 0.0) {
    Extrapolation out;
    out.value = v.back();
    out.trend = std::fabs(v.back() - v[v.size() - 2]);
    out.converged = true;
    return out;
  }
  std::vector<double> extr;
  for (size_t i = 0; i + 1 < x.size(); ++i) {
    // Eliminate the c/x term between consecutive points.
    extr.push_back((x[i + 1] * v[i + 1] - x[i] * v[i]) / (x[i + 1] - x[i]));
  }
  Extrapolation out;
  out.value = extr.back();
  if (extr.size() >= 2) {
    out.trend = std::fabs(extr.back() - extr[extr.size() - 2]);
  } else {
    out.trend = std::fabs(v.back() - extr.back());
  }
  double scale = std::max(std::fabs(out.value), 1e-12);
  // Sequences heading to zero converge in the absolute sense.
  out.converged = out.trend <= rel_tol * scale || out.trend < 1e-7;
  return out;
}

}  // namespace bosegas
