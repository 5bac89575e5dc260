#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bosegas {

// The verifiable summation formulas: each states a leading behaviour with a
// bounded (or envelope-bounded) remainder. A4-A6 are kernel-convergence
// statements exercised through the spectral tests, not duplicated here.
enum class FormulaId { A1, A2, A3, A7, A8, A9, A10, A11, A12 };

std::string to_string(FormulaId id);
FormulaId formula_from_string(const std::string& name);

struct AsymptoticCase {
  FormulaId id = FormulaId::A1;
  double A = 1.0;                        // fixed positive constant
  std::function<double(double)> B_of_L;  // smooth positive schedule
  std::vector<double> L_grid;            // increasing
  std::function<double(double)> L1_of_L; // long side for the two-length sums
  std::string label;                     // schedule description for reports
};

// Direct evaluation of the formula's sum at one grid point. `transposed`
// swaps the 2d summation order (an accumulation-order independence check).
double asymptotic_lhs(const AsymptoticCase& c, double L,
                      bool transposed = false);

// The leading term (A1-A3) or growth envelope (A7-A11).
double asymptotic_leading(const AsymptoticCase& c, double L);

struct ResidualReport {
  FormulaId id;
  std::string label;
  std::vector<double> L, lhs, leading, residual;
  bool envelope_type = false;
  double slope = 0.0;      // d(residual)/d(log L), or d(log ratio)/d(log L)
  double threshold = 0.0;  // pass bound on |slope| (or slope, for envelopes)
  bool pass = false;
};

ResidualReport residual_report(const AsymptoticCase& c);

// Pointwise inequality 0 <= 1/X - 1/(e^X - 1) <= min(1/2, 1/X).
// (The defect tends to 1/2 from below as X -> 0.)
double bose_defect(double X);
bool bose_defect_sweep(double x_lo, double x_hi, int points);

}  // namespace bosegas
