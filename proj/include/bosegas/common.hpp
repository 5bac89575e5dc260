#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace bosegas {

using Vec3 = Eigen::Vector3d;
using Eigen::MatrixXd;
using Eigen::MatrixXcd;
using Eigen::VectorXd;
using Eigen::VectorXcd;

// Thrown when an input violates a documented precondition.
struct domain_error : std::domain_error {
  using std::domain_error::domain_error;
};

// Thrown when a value leaves the representable floating-point range.
struct range_error : std::range_error {
  using std::range_error::range_error;
};

// Thrown when an iteration fails to converge within its budget.
struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Thrown for parameter regimes the implementation does not cover.
struct unsupported_regime_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double pi = 3.14159265358979323846;

// Compensated accumulator; keeps long sums accurate to ~1 ulp.
class KahanSum {
 public:
  void add(double x) {
    double y = x - comp_;
    double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

}  // namespace bosegas
