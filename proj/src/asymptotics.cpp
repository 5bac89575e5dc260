#include "bosegas/asymptotics.hpp"

#include <cmath>

#include "bosegas/common.hpp"
#include "bosegas/special.hpp"
#include "bosegas/stats.hpp"

namespace bosegas {

std::string to_string(FormulaId id) {
  switch (id) {
    case FormulaId::A1: return "A1";
    case FormulaId::A2: return "A2";
    case FormulaId::A3: return "A3";
    case FormulaId::A7: return "A7";
    case FormulaId::A8: return "A8";
    case FormulaId::A9: return "A9";
    case FormulaId::A10: return "A10";
    case FormulaId::A11: return "A11";
    case FormulaId::A12: return "A12";
  }
  return "?";
}

FormulaId formula_from_string(const std::string& name) {
  for (FormulaId id : {FormulaId::A1, FormulaId::A2, FormulaId::A3,
                       FormulaId::A7, FormulaId::A8, FormulaId::A9,
                       FormulaId::A10, FormulaId::A11, FormulaId::A12})
    if (to_string(id) == name) return id;
  throw domain_error("unknown formula id: " + name);
}

namespace {

constexpr double kArgCutoff = 46.0;  // e^{-46} ~ 1e-20, far below 1e-10 rel

double bose_weight(double arg) { return 1.0 / std::expm1(arg); }

// Generic 2d sum over s in N^2 with per-term weight and parity/ground
// filters. The exponent is A*((s1^2-1)/L1^2 + (s2^2-1)/L2^2) + B.
template <typename Weight>
double sum_2d(double A, double B, double L1, double L2, bool skip_ground,
              bool odd_only, bool transposed, Weight weight) {
  if (transposed) std::swap(L1, L2);
  KahanSum acc;
  int step = odd_only ? 2 : 1;
  for (long s1 = 1;; s1 += step) {
    double e1 = A * (static_cast<double>(s1) * s1 - 1.0) / (L1 * L1);
    if (e1 + B > kArgCutoff) break;
    bool row_nonzero = false;
    for (long s2 = 1;; s2 += step) {
      if (skip_ground && s1 == 1 && s2 == 1) continue;
      double arg = e1 + A * (static_cast<double>(s2) * s2 - 1.0) / (L2 * L2) + B;
      if (arg > kArgCutoff) break;
      double w = transposed ? weight(s2, s1) : weight(s1, s2);
      acc.add(w * bose_weight(arg));
      row_nonzero = true;
    }
    if (!row_nonzero && s1 > 1) break;
  }
  return acc.value();
}

template <typename Weight>
double sum_1d(double A, double B, double L, long s_min, int step,
              Weight weight) {
  KahanSum acc;
  for (long s = s_min;; s += step) {
    double arg = A * (static_cast<double>(s) * s - 1.0) / (L * L) + B;
    if (arg > kArgCutoff) break;
    acc.add(weight(s) * bose_weight(arg));
  }
  return acc.value();
}

}  // namespace

double asymptotic_lhs(const AsymptoticCase& c, double L, bool transposed) {
  if (!(c.A > 0.0)) throw domain_error("asymptotic_lhs: A must be > 0");
  double B = c.B_of_L ? c.B_of_L(L) : 0.0;
  if (!(B > 0.0)) throw domain_error("asymptotic_lhs: B(L) must be > 0");
  double L1 = c.L1_of_L ? c.L1_of_L(L) : L;
  switch (c.id) {
    case FormulaId::A1:
      return sum_2d(c.A, B, L, L, true, false, transposed,
                    [](long, long) { return 1.0; }) /
             (L * L);
    case FormulaId::A2:
      return sum_2d(c.A, B, L, L, true, true, transposed,
                    [](long, long) { return 1.0; }) /
             (L * L);
    case FormulaId::A3:
      return sum_1d(c.A, B, L, 1, 2, [](long) { return 1.0; }) / L;
    case FormulaId::A7:
      return sum_2d(c.A, B, L1, L, true, false, transposed,
                    [](long, long) { return 1.0; }) /
             (L1 * L);
    case FormulaId::A8:
      return sum_2d(c.A, B, L, L, false, false, transposed,
                    [L](long s1, long s2) {
                      return (static_cast<double>(s1) * s1 +
                              static_cast<double>(s2) * s2) /
                             (L * L);
                    }) /
             (L * L);
    case FormulaId::A9:
      return sum_2d(c.A, B, L, L, false, false, transposed,
                    [L](long s1, long s2) {
                      return std::pow((static_cast<double>(s1) * s1 +
                                       static_cast<double>(s2) * s2) /
                                          (L * L),
                                      0.25);
                    }) /
             (L * L);
    case FormulaId::A10:
      return sum_1d(c.A, B, L, 1, 1,
                    [L](long s) {
                      return static_cast<double>(s) * s / (L * L);
                    }) /
             L;
    case FormulaId::A11:
      return sum_1d(c.A, B, L, 2, 1, [](long) { return 1.0; }) / L;
    case FormulaId::A12:
      throw domain_error("asymptotic_lhs: A12 is a pointwise sweep, "
                         "use bose_defect");
  }
  throw domain_error("asymptotic_lhs: unhandled formula");
}

double asymptotic_leading(const AsymptoticCase& c, double L) {
  double B = c.B_of_L ? c.B_of_L(L) : 0.0;
  double L1 = c.L1_of_L ? c.L1_of_L(L) : L;
  switch (c.id) {
    case FormulaId::A1:
      return pi / (4.0 * c.A) * std::log(std::fmin(L * L, 1.0 / B));
    case FormulaId::A2:
      return pi / (16.0 * c.A) * std::log(std::fmin(L * L, 1.0 / B));
    case FormulaId::A3:
      return L / c.A * phi(L * L * B / c.A);
    case FormulaId::A7:
      return std::fmin(L1 / L, 1.0 / (L * std::sqrt(B))) +
             std::log(std::fmin(L, 1.0 / std::sqrt(B)));
    case FormulaId::A8:
    case FormulaId::A9:
      return 1.0 + 1.0 / (L * L * L * L * B);
    case FormulaId::A10:
      return 1.0 + 1.0 / (std::pow(L, 2.5) * B);
    case FormulaId::A11:
      return std::fmin(L, 1.0 / std::sqrt(B));
    case FormulaId::A12:
      break;
  }
  throw domain_error("asymptotic_leading: unhandled formula");
}

ResidualReport residual_report(const AsymptoticCase& c) {
  if (c.L_grid.size() < 4)
    throw domain_error("residual_report: grid needs >= 4 points");
  ResidualReport rep;
  rep.id = c.id;
  rep.label = c.label;
  rep.envelope_type =
      c.id == FormulaId::A7 || c.id == FormulaId::A8 || c.id == FormulaId::A9 ||
      c.id == FormulaId::A10 || c.id == FormulaId::A11;
  std::vector<double> log_L, y;
  for (double L : c.L_grid) {
    double lhs = asymptotic_lhs(c, L);
    double lead = asymptotic_leading(c, L);
    rep.L.push_back(L);
    rep.lhs.push_back(lhs);
    rep.leading.push_back(lead);
    rep.residual.push_back(lhs - lead);
    log_L.push_back(std::log(L));
    y.push_back(rep.envelope_type ? std::log(std::fmax(lhs, 1e-300) / lead)
                                  : lhs - lead);
  }
  LineFit fit = fit_line(log_L, y);
  rep.slope = fit.slope;
  if (rep.envelope_type) {
    // The bound is an upper envelope: the ratio must not grow.
    rep.threshold = 0.05;
    rep.pass = rep.slope <= rep.threshold;
  } else {
    double scale;
    if (c.id == FormulaId::A1) {
      scale = pi / (4.0 * c.A);
    } else if (c.id == FormulaId::A2) {
      scale = pi / (16.0 * c.A);
    } else {
      // A3: compare against the typical magnitude of the leading term.
      double m = 0.0;
      for (double v : rep.leading) m += std::fabs(v);
      scale = m / rep.leading.size();
    }
    rep.threshold = 0.05 * scale;
    // Boundedness is one-sided: a residual still decaying toward its
    // constant has a visible transient slope but is certainly bounded.
    std::vector<double> abs_r;
    for (double r : rep.residual) abs_r.push_back(std::fabs(r));
    double growth = fit_line(log_L, abs_r).slope;
    rep.pass = std::fabs(rep.slope) <= rep.threshold || growth <= rep.threshold;
  }
  return rep;
}

double bose_defect(double X) {
  if (!(X > 0.0)) throw domain_error("bose_defect: X must be > 0");
  if (X < 1e-4) return 0.5 - X / 12.0 + X * X * X / 720.0;
  return 1.0 / X - 1.0 / std::expm1(X);
}

bool bose_defect_sweep(double x_lo, double x_hi, int points) {
  if (!(x_lo > 0.0) || !(x_hi > x_lo) || points < 2)
    throw domain_error("bose_defect_sweep: bad range");
  for (int i = 0; i < points; ++i) {
    double t = static_cast<double>(i) / (points - 1);
    double x = x_lo * std::pow(x_hi / x_lo, t);
    double d = bose_defect(x);
    // Correct elementary envelope: the defect rises to 1/2 as X -> 0,
    // so the small-X branch of the bound is 1/2, not X.
    double envelope = std::fmin(0.5, 1.0 / x);
    if (d < -1e-12 || d > envelope * (1.0 + 1e-12) + 1e-15) return false;
  }
  return true;
}

}  // namespace bosegas
