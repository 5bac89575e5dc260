// Acceptance suite: one line per criterion, exit 0 only if all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "bosegas/asymptotics.hpp"
#include "bosegas/kac.hpp"
#include "bosegas/quadrature.hpp"
#include "bosegas/run.hpp"
#include "bosegas/sampler.hpp"
#include "bosegas/scaled.hpp"
#include "bosegas/special.hpp"
#include "bosegas/thermo.hpp"

using namespace bosegas;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, double seconds,
            double budget) {
  bool in_budget = seconds <= budget;
  bool ok = pass && in_budget;
  if (!ok) ++g_failures;
  std::printf("%s criterion %2d: %s (%.2fs of %.0fs budget)%s\n",
              ok ? "PASS" : "FAIL", id, what.c_str(), seconds, budget,
              pass ? "" : " [check failed]");
  std::fflush(stdout);
}

template <typename Fn>
void timed(int id, const std::string& what, double budget, Fn fn) {
  auto start = std::chrono::steady_clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    pass = false;
    detail = std::string("exception: ") + e.what();
  }
  double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  report(id, pass, what + (detail.empty() ? "" : " - " + detail), seconds,
         budget);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool criterion_phi(std::string& detail) {
  bool ok = true;
  for (double x : {1.01, 1.5, 2.0, 5.0, 10.0, 100.0}) {
    double closed = phi(x);
    double series = phi_series(x);
    ok = ok && std::fabs(series - closed) <= 1e-10 * std::fabs(closed);
  }
  ok = ok && std::fabs(phi(1.0) - pi * pi / 8.0) <= 1e-8;
  detail = "series vs closed <= 1e-10 on 6 points, phi(1) = pi^2/8";
  return ok;
}

bool criterion_r_kernel(std::string& detail) {
  ThermoParams thermo;
  double worst = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    double a2 = alpha * alpha;
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j <= 20; ++j) {
        double u = -0.5 + 0.05 * i;
        double v = -0.5 + 0.05 * j;
        worst = std::fmax(worst, std::fabs(r_kernel_series(u, v, a2, thermo) -
                                           r_kernel(u, v, a2, thermo)));
      }
  }
  bool ok = worst <= 1e-8;
  double worst_id = 0.0;
  for (double alpha : {0.5, 1.0, 2.0}) {
    double lhs = phi(alpha * alpha + 1.0);
    double rhs = thermo.beta * thermo.hbar * thermo.hbar * pi * pi /
                 (16.0 * thermo.mass) *
                 r_kernel(0.0, 0.0, alpha * alpha, thermo);
    worst_id = std::fmax(worst_id, std::fabs(lhs - rhs));
  }
  ok = ok && worst_id <= 1e-8;
  std::ostringstream ss;
  ss << "series gap " << worst << ", phi identity gap " << worst_id;
  detail = ss.str();
  return ok;
}

bool criterion_rho_c(std::string& detail) {
  ThermoParams thermo;
  double quad = adaptive_simpson(
                    [&](double k) {
                      return k * k / std::expm1(0.5 * thermo.beta * k * k);
                    },
                    1e-9, 60.0, 1e-15) /
                (2.0 * pi * pi);
  double got = rho_critical(thermo);
  std::ostringstream ss;
  ss << "rho_c = " << got << " vs quadrature " << quad;
  detail = ss.str();
  return std::fabs(got - quad) <= 1e-8 && std::fabs(got - 0.165869) < 1e-5;
}

bool criterion_cox(std::string& detail) {
  ThermoParams thermo;
  BoxGeometry box = box_from_profile(SlabExp{0.5}, 2.0);
  TruncatedKernel kernel = build_kernel(box, thermo, 0.45, ModeCount{10});
  Window w{Vec3(-0.5 * box.l1, -0.5 * box.l2, -0.5 * box.l3),
           Vec3(0.5 * box.l1, 0.5 * box.l2, 0.5 * box.l3)};
  std::vector<TestFunction> fixtures = {
      cosine_bump(Vec3(0, 0, 0), Vec3(1.5, 1.5, 0.7), 1.0),
      cosine_bump(Vec3(1.0, -0.8, 0.3), Vec3(0.9, 1.1, 0.5), 2.0),
      box_indicator(0.6, Vec3(-1.0, -1.0, -0.6), Vec3(1.0, 0.5, 0.6)),
  };
  Rng rng = Rng::substream(20240810, "acceptance-cox");
  bool ok = true;
  std::ostringstream ss;
  for (std::size_t i = 0; i < fixtures.size(); ++i) {
    double closed = laplace_closed(kernel, fixtures[i]);
    MeanErr est = laplace_empirical(kernel, {}, fixtures[i], w, 100000, rng);
    double dev = std::fabs(est.mean - closed) / est.stderr_;
    ok = ok && dev <= 3.0;
    ss << "f" << i << ":" << dev << "sigma ";
  }
  // Rank-one fixture: occupation 2, constant log 2 on the unit box.
  BoxGeometry unit(1.0, 1.0, 1.0);
  TruncatedKernel r1 =
      build_kernel(unit, thermo, std::log1p(0.5), EnergyCutoff{0.0});
  Window uw{Vec3(-0.5, -0.5, -0.5), Vec3(0.5, 0.5, 0.5)};
  TestFunction f = box_indicator(std::log(2.0), uw.lo, uw.hi);
  MeanErr est = laplace_empirical(r1, {}, f, uw, 100000, rng);
  double dev = std::fabs(est.mean - 0.5) / est.stderr_;
  ok = ok && dev <= 3.0;
  ss << "rank1:" << dev << "sigma";
  detail = ss.str();
  return ok;
}

bool criterion_count_law(std::string& detail) {
  ThermoParams thermo;
  BoxGeometry box(1.5, 1.2, 1.0);
  TruncatedKernel kernel = build_kernel(box, thermo, 0.35, ModeCount{3});
  Window w{Vec3(-0.75, -0.6, -0.5), Vec3(0.75, 0.6, 0.5)};
  std::vector<double> pmf = count_law(kernel);
  for (int attempt = 0; attempt < 3; ++attempt) {
    Rng rng = Rng::substream(555000 + attempt, "acceptance-counts");
    const long n = 100000;
    long max_n = static_cast<long>(pmf.size()) - 1;
    std::vector<double> observed(max_n + 1, 0.0);
    for (long i = 0; i < n; ++i) {
      long c = sample_configuration(kernel, {}, w, rng).count();
      if (c <= max_n) observed[c] += 1.0;
    }
    std::vector<double> expected(pmf.size());
    for (std::size_t i = 0; i < pmf.size(); ++i) expected[i] = pmf[i] * n;
    ChiSquare cs = chi_square_binned(observed, expected);
    double threshold = chi_square_quantile(0.99, cs.dof);
    std::ostringstream ss;
    ss << "chi2 " << cs.statistic << " vs q99 " << threshold << " (attempt "
       << attempt + 1 << ")";
    detail = ss.str();
    if (cs.statistic <= threshold) return true;
  }
  return false;
}

bool criterion_product_formula(std::string& detail) {
  ThermoParams thermo;
  BoxGeometry box = box_from_profile(SlabExp{0.5}, 2.0);
  TruncatedKernel kernel = build_kernel(box, thermo, 0.45, ModeCount{10});
  double volume = box.volume();
  double worst = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    TestFunction f =
        box_indicator(t / volume, Vec3(-0.5 * box.l1, -0.5 * box.l2, -0.5 * box.l3),
                      Vec3(0.5 * box.l1, 0.5 * box.l2, 0.5 * box.l3));
    double closed = laplace_closed(kernel, f);
    double product = 1.0;
    for (int i = 0; i < kernel.rank(); ++i) {
      double q = kernel.occupations[i] / (1.0 + kernel.occupations[i]);
      product *= (1.0 - q) / (1.0 - q * std::exp(-t / volume));
    }
    worst = std::fmax(worst, std::fabs(closed - product) / product);
  }
  std::ostringstream ss;
  ss << "worst relative gap " << worst;
  detail = ss.str();
  return worst <= 1e-8;
}

bool criterion_kac(std::string& detail) {
  ThermoParams thermo;
  double rc = rho_critical(thermo);
  double rho = 0.4;
  KacDistribution dist = kac_kernel(thermo, rho);
  Rng rng = Rng::substream(909090, "acceptance-kac");
  std::vector<double> draws(100000);
  for (double& d : draws) d = kac_sample(dist, rng);
  bool ok = true;
  double worst_dev = 0.0;
  for (double t : {0.5, 1.0, 2.0}) {
    std::vector<double> vals(draws.size());
    for (std::size_t i = 0; i < draws.size(); ++i)
      vals[i] = std::exp(-t * draws[i]);
    MeanErr est = mean_with_stderr(vals);
    double dev = std::fabs(est.mean - kac_laplace(thermo, rho, t)) / est.stderr_;
    worst_dev = std::fmax(worst_dev, dev);
    ok = ok && dev <= 3.0;
  }
  double conv = kac_convolve_check(thermo, rc + 1.0, 20.0, 10000);
  ok = ok && conv <= 1e-6;
  std::ostringstream ss;
  ss << "worst transform dev " << worst_dev << " sigma, convolution gap "
     << conv;
  detail = ss.str();
  return ok;
}

bool criterion_scaled_convergence(std::string& detail) {
  ThermoParams thermo;
  double rho = rho_critical(thermo) + 0.08;
  std::vector<Vec3> grid;
  for (int i = 0; i <= 18; ++i) grid.emplace_back(0, 0, -0.45 + 0.05 * i);
  double prev = 1e9;
  bool monotone = true;
  double final_gap = 0.0;
  std::ostringstream ss;
  ss << "sup gaps:";
  for (double L : {80.0, 160.0, 320.0}) {
    ScaledDensityTable t =
        finite_L_scaled_density(SlabExp{0.3}, thermo, rho, L, Scale::D, grid);
    monotone = monotone && t.sup_gap < prev;
    prev = t.sup_gap;
    final_gap = t.sup_gap;
    ss << " " << t.sup_gap;
  }
  detail = ss.str();
  return monotone && final_gap <= 0.05;
}

bool criterion_beam_field(std::string& detail) {
  ThermoParams thermo;
  double rc = rho_critical(thermo);
  double rho = rc + 16.0 * phi(2.0) / (pi * pi);  // alpha^2 = 1
  LimitRFSpec spec = limit_field_spec(BeamPoly{2.0}, thermo, rho, Scale::I);
  std::vector<double> us{-0.5, -0.25, 0.0, 0.25, 0.5};
  std::vector<std::vector<double>> vals(us.size());
  Rng rng = Rng::substream(777000, "acceptance-beam-field");
  for (int d = 0; d < 100000; ++d) {
    LimitDensityField field = sample_limit_density(spec, rng, 1024);
    for (std::size_t g = 0; g < us.size(); ++g)
      vals[g].push_back(field(Vec3(us[g], 0, 0)));
  }
  bool ok = true;
  double worst = 0.0;
  for (std::size_t g = 0; g < us.size(); ++g) {
    MeanErr est = mean_with_stderr(vals[g]);
    double expected = limit_density_profile(spec, Vec3(us[g], 0, 0));
    double tol = 4.0 * est.stderr_ + 1e-12;
    double dev = std::fabs(est.mean - expected);
    worst = std::fmax(worst, (est.stderr_ > 0.0) ? dev / est.stderr_ : 0.0);
    ok = ok && dev <= tol;
    if (g == 0 || g + 1 == us.size()) {
      // Endpoints carry the bulk density alone.
      ok = ok && std::fabs(est.mean - spec.a) <= tol;
    }
  }
  std::ostringstream ss;
  ss << "worst deviation " << worst << " sigma, bulk a = " << spec.a;
  detail = ss.str();
  return ok;
}

bool criterion_appendix(std::string& detail) {
  std::vector<AsymptoticCase> cases;
  auto add = [&](FormulaId id, double A, ScheduleSpec::Kind kind, double value,
                 std::vector<double> grid, double l1_power = 1.0) {
    AsymptoticCase c;
    c.id = id;
    c.A = A;
    ScheduleSpec sched{kind, value};
    c.B_of_L = [sched](double L) { return sched(L); };
    c.L_grid = std::move(grid);
    c.L1_of_L = [l1_power](double L) { return std::pow(L, l1_power); };
    c.label = to_string(id) + " " + sched.label();
    cases.push_back(std::move(c));
  };
  std::vector<double> g{50, 100, 200, 400};
  std::vector<double> g7{30, 60, 120, 240};
  // Both branches of every min: constant schedules pick the B side,
  // fast-decaying schedules pick the geometric side.
  add(FormulaId::A1, 1.0, ScheduleSpec::Kind::Power, 2.0, g);
  add(FormulaId::A1, 1.0, ScheduleSpec::Kind::Const, 1e-2, g);
  add(FormulaId::A1, 1.0, ScheduleSpec::Kind::Power, 4.0, g);
  add(FormulaId::A2, 1.0, ScheduleSpec::Kind::Const, 1e-2, g);
  add(FormulaId::A2, 1.0, ScheduleSpec::Kind::Power, 4.0, g);
  add(FormulaId::A3, 1.0, ScheduleSpec::Kind::Power, 2.0, g);
  add(FormulaId::A3, 1.0, ScheduleSpec::Kind::Const, 1e-3, g);
  add(FormulaId::A7, 1.0, ScheduleSpec::Kind::Power, 4.0, g7, 1.3);
  add(FormulaId::A7, 1.0, ScheduleSpec::Kind::Power, 2.0, g7, 1.3);
  add(FormulaId::A7, 1.0, ScheduleSpec::Kind::Const, 1e-2, g7);
  add(FormulaId::A8, 1.0, ScheduleSpec::Kind::Const, 1e-2, g);
  add(FormulaId::A8, 1.0, ScheduleSpec::Kind::Exp, 0.05, g);
  add(FormulaId::A9, 1.0, ScheduleSpec::Kind::Const, 1e-2, g);
  add(FormulaId::A9, 1.0, ScheduleSpec::Kind::Exp, 0.05, g);
  add(FormulaId::A10, 1.0, ScheduleSpec::Kind::Const, 1e-2, g);
  add(FormulaId::A10, 1.0, ScheduleSpec::Kind::Exp, 0.05, g);
  add(FormulaId::A11, 1.0, ScheduleSpec::Kind::Power, 4.0, g);
  add(FormulaId::A11, 1.0, ScheduleSpec::Kind::Const, 1e-2, g);
  bool ok = true;
  std::ostringstream ss;
  for (const AsymptoticCase& c : cases) {
    ResidualReport rep = residual_report(c);
    if (!rep.pass) {
      ok = false;
      ss << " [" << c.label << " slope " << rep.slope << "]";
    }
  }
  // The pinned A1 slope criterion on the inverse-square schedule.
  {
    AsymptoticCase c;
    c.id = FormulaId::A1;
    c.A = 1.0;
    c.B_of_L = [](double L) { return 1.0 / (L * L); };
    c.L_grid = g;
    ResidualReport rep = residual_report(c);
    ok = ok && std::fabs(rep.slope) <= 0.05 * pi / 4.0;
    ss << " A1 slope " << rep.slope << " vs " << 0.05 * pi / 4.0;
  }
  ok = ok && bose_defect_sweep(1e-6, 1e3, 500);
  detail = "18 schedule cases + A12 sweep;" + ss.str();
  return ok;
}

bool criterion_determinism(std::string& detail) {
  const char* config_text = R"({
    "profile": {"type": "explicit", "L1": 1.5, "L2": 1.2, "L3": 1.0},
    "delta": 0.35,
    "seed": 424242,
    "sampler": {"n_samples": 4000, "truncation": {"max_modes": 3}}
  })";
  auto dir = std::filesystem::temp_directory_path() / "bosegas_acceptance_det";
  std::filesystem::remove_all(dir);
  ExperimentConfig c = parse_config(config_text);
  std::vector<std::string> outputs;
  for (int run = 0; run < 3; ++run) {
    c.out_dir = (dir / ("run" + std::to_string(run))).string();
    c.threads = (run == 2) ? 4 : 1;
    run_sample(c);
    outputs.push_back(slurp(c.out_dir + "/configurations.jsonl") + "\x1e" +
                      slurp(c.out_dir + "/counts.csv"));
  }
  bool ok = outputs[0] == outputs[1] && outputs[0] == outputs[2] &&
            !outputs[0].empty();
  detail = ok ? "identical across reruns and thread counts {1,4}"
              : "outputs differ";
  return ok;
}

}  // namespace

int main() {
  timed(1, "phi series vs closed form", 1.0, criterion_phi);
  timed(2, "interval kernel two-route identity", 10.0, criterion_r_kernel);
  timed(3, "critical density vs quadrature", 1.0, criterion_rho_c);
  timed(4, "Cox sampling vs Fredholm determinant", 120.0, criterion_cox);
  timed(5, "total-count law chi-square", 60.0, criterion_count_law);
  timed(6, "constant-f per-mode product formula", 10.0,
        criterion_product_formula);
  timed(7, "density mixing transform and convolution", 30.0, criterion_kac);
  timed(8, "plate-scale density convergence", 300.0,
        criterion_scaled_convergence);
  timed(9, "interval-scale squared-gaussian field", 60.0, criterion_beam_field);
  timed(10, "summation formula residuals", 600.0, criterion_appendix);
  timed(11, "bytewise determinism of sampling runs", 60.0,
        criterion_determinism);
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
    return 0;
  }
  std::printf("%d acceptance criteria failed\n", g_failures);
  return 1;
}
