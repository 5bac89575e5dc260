#pragma once

#include <span>
#include <vector>

namespace bosegas {

struct MeanErr {
  double mean = 0.0;
  double stderr_ = 0.0;  // jackknife standard error of the mean
  long n = 0;
};

MeanErr mean_with_stderr(std::span<const double> xs);

// Pearson chi-square against expected counts; bins with expected mass below
// min_expected are pooled from the right. Returns (statistic, dof).
struct ChiSquare {
  double statistic = 0.0;
  int dof = 0;
};
ChiSquare chi_square_binned(std::span<const double> observed,
                            std::span<const double> expected,
                            double min_expected = 5.0);

double chi_square_cdf(double x, int dof);
double chi_square_quantile(double p, int dof);

// One-sample Kolmogorov-Smirnov against a CDF sampled at the data points.
// cdf_values must correspond to the sorted sample.
double ks_statistic(std::span<const double> sorted_cdf_values);
double ks_pvalue(double statistic, long n);

// Least-squares slope/intercept of y against x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Richardson extrapolation in 1/x of a sequence sampled at increasing x.
// `trend` is the spread of successive extrapolants, a convergence diagnostic.
struct Extrapolation {
  double value = 0.0;
  double trend = 0.0;
  bool converged = false;
};
Extrapolation richardson_in_inverse(std::span<const double> x,
                                    std::span<const double> v,
                                    double rel_tol = 0.05);

}  // namespace bosegas
