#pragma once

#include <functional>
#include <vector>

#include "bosegas/common.hpp"

namespace bosegas {

struct QuadRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule of given order; cached per order.
const QuadRule& gauss_legendre(int order);

double integrate_1d(const std::function<double(double)>& f, double lo,
                    double hi, int order = 32);

// Tensor-product rule over an axis-aligned box.
double integrate_box(const std::function<double(const Vec3&)>& f,
                     const Vec3& lo, const Vec3& hi, int order = 16);

// Adaptive Simpson on [lo, hi]; used as an independent oracle in tests and
// for one-off integrals where a fixed rule is awkward.
double adaptive_simpson(const std::function<double(double)>& f, double lo,
                        double hi, double tol = 1e-12, int max_depth = 40);

}  // namespace bosegas
