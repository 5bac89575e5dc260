#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bosegas/run.hpp"

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw bosegas::domain_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct CommonArgs {
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::string out_dir;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON experiment config")
      ->required();
  cmd->add_option("--seed", args.seed, "root seed (overrides config)")
      ->each([&args](const std::string&) { args.seed_given = true; });
  cmd->add_option("--out", args.out_dir, "output directory (overrides config)");
  cmd->add_option("--threads", args.threads, "worker threads (overrides config)");
}

bosegas::ExperimentConfig load(const CommonArgs& args) {
  bosegas::ExperimentConfig config =
      bosegas::parse_config(read_file(args.config_path));
  if (args.seed_given) {
    config.seed = args.seed;
    config.seed_set = true;
  }
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  if (args.threads > 0) config.threads = args.threads;
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ideal Bose gas point fields in anisotropic boxes"};
  app.require_subcommand(1);

  CommonArgs phase_args, sample_args, scaled_args, kac_args, asym_args;
  CLI::App* phase = app.add_subcommand("phase", "critical densities and phase label");
  add_common(phase, phase_args);
  CLI::App* sample = app.add_subcommand("sample", "draw point configurations");
  add_common(sample, sample_args);
  CLI::App* scaled = app.add_subcommand("scaled", "scaled density tables or field draws");
  add_common(scaled, scaled_args);
  CLI::App* kac = app.add_subcommand("kac", "density mixing distribution tables");
  add_common(kac, kac_args);
  CLI::App* asym = app.add_subcommand("verify-asymptotics",
                                      "residual checks of the summation formulas");
  add_common(asym, asym_args);

  CLI11_PARSE(app, argc, argv);

  try {
    bosegas::RunResult result;
    if (phase->parsed()) result = bosegas::run_phase(load(phase_args));
    else if (sample->parsed()) result = bosegas::run_sample(load(sample_args));
    else if (scaled->parsed()) result = bosegas::run_scaled(load(scaled_args));
    else if (kac->parsed()) result = bosegas::run_kac(load(kac_args));
    else result = bosegas::run_verify_asymptotics(load(asym_args));
    std::cout << result.summary << "\n";
    return result.verdict_pass ? 0 : 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
