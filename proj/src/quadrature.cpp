#include "bosegas/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace bosegas {

namespace {

QuadRule make_gauss_legendre(int n) {
  QuadRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

}  // namespace

const QuadRule& gauss_legendre(int order) {
  static std::map<int, QuadRule> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_gauss_legendre(order)).first;
  return it->second;
}

double integrate_1d(const std::function<double(double)>& f, double lo,
                    double hi, int order) {
  const QuadRule& rule = gauss_legendre(order);
  double mid = 0.5 * (lo + hi);
  double half = 0.5 * (hi - lo);
  KahanSum acc;
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    acc.add(rule.weights[i] * f(mid + half * rule.nodes[i]));
  return acc.value() * half;
}

double integrate_box(const std::function<double(const Vec3&)>& f,
                     const Vec3& lo, const Vec3& hi, int order) {
  const QuadRule& rule = gauss_legendre(order);
  Vec3 mid = 0.5 * (lo + hi);
  Vec3 half = 0.5 * (hi - lo);
  KahanSum acc;
  for (size_t i = 0; i < rule.nodes.size(); ++i)
    for (size_t j = 0; j < rule.nodes.size(); ++j)
      for (size_t k = 0; k < rule.nodes.size(); ++k) {
        Vec3 x(mid[0] + half[0] * rule.nodes[i],
               mid[1] + half[1] * rule.nodes[j],
               mid[2] + half[2] * rule.nodes[k]);
        acc.add(rule.weights[i] * rule.weights[j] * rule.weights[k] * f(x));
      }
  return acc.value() * half[0] * half[1] * half[2];
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double b,
               double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a,
                     double b, double fa, double fm, double fb, double whole,
                     double tol, int depth, int force_depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = simpson(f, a, m, fa, flm, fm);
  double right = simpson(f, m, b, fm, frm, fb);
  if (force_depth <= 0 &&
      (depth <= 0 || std::fabs(left + right - whole) < 15.0 * tol))
    return left + right + (left + right - whole) / 15.0;
  return adaptive_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1,
                       force_depth - 1) +
         adaptive_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1,
                       force_depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double lo,
                        double hi, double tol, int max_depth) {
  double fa = f(lo), fb = f(hi), fm = f(0.5 * (lo + hi));
  double whole = simpson(f, lo, hi, fa, fm, fb);
  // A few forced subdivisions stop a deceptively flat coarse estimate from
  // terminating before localized structure is seen.
  return adaptive_step(f, lo, hi, fa, fm, fb, whole, tol, max_depth, 6);
}

}  // namespace bosegas
