#pragma once

#include <cstdint>

namespace bosegas {

inline constexpr double zeta_3_2 = 2.6123753486854883;

// Li_s(e^{-t}) for t >= 0, the Bose-Einstein integrals of half-integer order.
// Direct summation for moderate t, Hurwitz-style expansion near t = 0.
double polylog_exp_3_2(double t);
double polylog_exp_1_2(double t);

// Li_1(e^{-t}) = -log(1 - e^{-t}), t > 0.
double polylog_exp_1(double t);

// Tail sum over n > N of n^{-s} (s > 1), Euler-Maclaurin.
double power_tail(double s, double N);

// Tail sum over n > N of e^{-t n} n^{-s} for half-integer s in {3/2, 5/2, ...}
// (pass s = 1.5 + j). Exact for t = 0; incomplete-gamma based otherwise.
double exp_power_tail(double s, double t, double N);

// phi(x) = sum_{n>=1} 1/((2n-1)^2 - 1 + x) on [0, inf).
// phi(0) = +inf. Closed form; strictly decreasing, phi(1) = pi^2/8.
double phi(double x);

// Independent series route: N-term partial sum plus midpoint integral tail.
double phi_series(double x, std::int64_t n_terms = 1000000);

// Inverse of phi on (0, inf); y must be positive.
double phi_inverse(double y);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

}  // namespace bosegas
