#include "bosegas/rng.hpp"

#include <cmath>

#include "bosegas/common.hpp"

namespace bosegas {

namespace {

// Hormann's PTRS transformed rejection, valid for mean >= 10.
long poisson_ptrs(Rng& rng, double mean) {
  double b = 0.931 + 2.53 * std::sqrt(mean);
  double a = -0.059 + 0.02483 * b;
  double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  double v_r = 0.9277 - 3.6224 / (b - 2.0);
  while (true) {
    double u = rng.uniform() - 0.5;
    double v = rng.uniform();
    double us = 0.5 - std::fabs(u);
    double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<long>(k);
    if (k < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        k * std::log(mean) - mean - std::lgamma(k + 1.0)) {
      return static_cast<long>(k);
    }
  }
}

}  // namespace

long Rng::poisson(double mean) {
  if (mean < 0.0) throw domain_error("poisson: negative mean");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // Inversion by sequential search.
    double p = std::exp(-mean);
    double cum = p;
    double u = uniform();
    long k = 0;
    while (u > cum && k < 1000) {
      ++k;
      p *= mean / static_cast<double>(k);
      cum += p;
    }
    return k;
  }
  return poisson_ptrs(*this, mean);
}

}  // namespace bosegas
