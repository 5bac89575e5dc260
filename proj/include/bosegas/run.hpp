#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bosegas/asymptotics.hpp"
#include "bosegas/kac.hpp"
#include "bosegas/sampler.hpp"
#include "bosegas/scaled.hpp"
#include "bosegas/thermo.hpp"

namespace bosegas {

// Schedule spec for the asymptotics runner: B(L) = value, L^-p, or e^{-cL}.
struct ScheduleSpec {
  enum class Kind { Const, Power, Exp } kind = Kind::Const;
  double value = 1e-4;

  double operator()(double L) const;
  std::string label() const;
};

struct AsymptoticsCaseConfig {
  std::string formula = "A1";
  double A = 1.0;
  ScheduleSpec schedule;
  std::vector<double> L_grid{50, 100, 200, 400};
  double L1_power = 1.0;  // two-length sums use L1 = L^power
};

struct ExperimentConfig {
  AnisotropyProfile profile = SlabExp{0.5};
  ThermoParams thermo;
  std::optional<double> rho;
  std::optional<double> delta;
  double L = 8.0;
  Scale scale = Scale::D;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = 1;
  std::string out_dir = "out";

  // sampler section
  long n_samples = 1000;
  std::optional<Window> window;
  std::optional<Truncation> truncation;
  double kappa = 0.0;

  // grid section
  int grid_points = 21;
  double grid_lo = -0.45, grid_hi = 0.45;

  // kac section
  std::vector<double> kac_t{0.5, 1.0, 2.0};
  long kac_samples = 100000;

  // scaled section
  std::string scaled_mode = "table";  // "table" or "field"
  long field_samples = 10000;
  std::optional<double> alpha2_override;

  // asymptotics section
  std::vector<AsymptoticsCaseConfig> asym_cases;
};

ExperimentConfig parse_config(const std::string& json_text);
std::string effective_config_json(const ExperimentConfig& config);

struct RunResult {
  bool verdict_pass = true;
  std::string summary;
};

RunResult run_phase(const ExperimentConfig& config);
RunResult run_sample(const ExperimentConfig& config);
RunResult run_kac(const ExperimentConfig& config);
RunResult run_scaled(const ExperimentConfig& config);
RunResult run_verify_asymptotics(const ExperimentConfig& config);

// The gap actually used by the runners for a finite box:
// an explicit delta wins; otherwise the profile schedule at (rho, L);
// explicit boxes solve the finite-box density equation.
double resolve_delta(const ExperimentConfig& config);

}  // namespace bosegas
