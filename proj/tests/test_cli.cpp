#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "bosegas/run.hpp"

using namespace bosegas;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string temp_dir(const std::string& tag) {
  auto dir = std::filesystem::temp_directory_path() / ("bosegas_test_" + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir.string();
}

const char* kSampleConfig = R"({
  "profile": {"type": "explicit", "L1": 1.5, "L2": 1.2, "L3": 1.0},
  "thermo": {"beta": 1.0},
  "delta": 0.35,
  "seed": 20240601,
  "sampler": {"n_samples": 3000, "truncation": {"max_modes": 3}}
})";

}  // namespace

TEST_CASE("config parsing validates fields with paths") {
  CHECK_THROWS_WITH_AS(parse_config("{\"profile\": {\"type\": \"slab\"}}"),
                       "config.profile.alpha: missing required field",
                       domain_error);
  CHECK_THROWS_AS(parse_config("{\"rho\": 0.1, \"delta\": 0.2}"), domain_error);
  CHECK_THROWS_AS(parse_config("not json"), domain_error);
  CHECK_THROWS_AS(parse_config("{\"scale\": \"X\"}"), domain_error);
  ExperimentConfig c = parse_config(kSampleConfig);
  CHECK(c.seed == 20240601);
  CHECK(c.n_samples == 3000);
}

TEST_CASE("phase runner writes report files") {
  ExperimentConfig c = parse_config(R"({
    "profile": {"type": "slab", "alpha": 0.5},
    "rho": 0.3
  })");
  c.out_dir = temp_dir("phase");
  RunResult r = run_phase(c);
  CHECK(r.verdict_pass);
  std::string json = slurp(c.out_dir + "/phase.json");
  CHECK(json.find("TypeIII") != std::string::npos);
  std::string txt = slurp(c.out_dir + "/phase.txt");
  CHECK(txt.find("phase: TypeIII") != std::string::npos);
  ExperimentConfig beam = parse_config(R"({
    "profile": {"type": "beam", "gamma": 2.0},
    "rho": 0.33
  })");
  beam.out_dir = temp_dir("phase_beam");
  run_phase(beam);
  CHECK(slurp(beam.out_dir + "/phase.json").find("TypeII") != std::string::npos);
}

TEST_CASE("sampling runs are byte-identical across repeats and threads") {
  ExperimentConfig c = parse_config(kSampleConfig);
  c.out_dir = temp_dir("det1");
  run_sample(c);
  std::string jsonl1 = slurp(c.out_dir + "/configurations.jsonl");
  std::string counts1 = slurp(c.out_dir + "/counts.csv");

  c.out_dir = temp_dir("det2");
  run_sample(c);
  CHECK(slurp(c.out_dir + "/configurations.jsonl") == jsonl1);
  CHECK(slurp(c.out_dir + "/counts.csv") == counts1);

  c.out_dir = temp_dir("det4");
  c.threads = 4;
  run_sample(c);
  CHECK(slurp(c.out_dir + "/configurations.jsonl") == jsonl1);
  CHECK(slurp(c.out_dir + "/counts.csv") == counts1);
}

TEST_CASE("effective config reruns to identical results") {
  ExperimentConfig c = parse_config(kSampleConfig);
  c.out_dir = temp_dir("rt1");
  run_sample(c);
  std::string jsonl1 = slurp(c.out_dir + "/configurations.jsonl");
  std::string effective = slurp(c.out_dir + "/effective_config.json");
  ExperimentConfig c2 = parse_config(effective);
  c2.out_dir = temp_dir("rt2");
  run_sample(c2);
  CHECK(slurp(c2.out_dir + "/configurations.jsonl") == jsonl1);
}

TEST_CASE("empty sampling budget still writes valid outputs") {
  ExperimentConfig c = parse_config(kSampleConfig);
  c.n_samples = 0;
  c.out_dir = temp_dir("empty");
  RunResult r = run_sample(c);
  CHECK(r.verdict_pass);
  CHECK(slurp(c.out_dir + "/configurations.jsonl").empty());
  std::string counts = slurp(c.out_dir + "/counts.csv");
  CHECK(counts.rfind("n,observed,expected", 0) == 0);
}

TEST_CASE("count-law verdict line present for large runs") {
  ExperimentConfig c = parse_config(kSampleConfig);
  c.n_samples = 20000;
  c.out_dir = temp_dir("verdict");
  RunResult r = run_sample(c);
  CHECK(r.verdict_pass);
  std::string summary = slurp(c.out_dir + "/summary.json");
  CHECK(summary.find("count_law_verdict") != std::string::npos);
  CHECK(summary.find("chi_square") != std::string::npos);
}

TEST_CASE("seed is mandatory for stochastic runs") {
  ExperimentConfig c = parse_config(R"({
    "profile": {"type": "explicit", "L1": 1, "L2": 1, "L3": 1},
    "delta": 0.5
  })");
  c.out_dir = temp_dir("noseed");
  CHECK_THROWS_AS(run_sample(c), domain_error);
}

TEST_CASE("kac runner writes tables and passes its checks") {
  ExperimentConfig c = parse_config(R"({
    "profile": {"type": "slab", "alpha": 0.5},
    "rho": 0.08,
    "seed": 99,
    "kac": {"t_values": [0.5, 1.0, 2.0], "n_samples": 20000}
  })");
  c.out_dir = temp_dir("kac");
  RunResult r = run_kac(c);
  CHECK(r.verdict_pass);
  std::string laplace = slurp(c.out_dir + "/laplace.csv");
  CHECK(laplace.rfind("t,laplace_value", 0) == 0);
  //

  std::string summary = slurp(c.out_dir + "/summary.json");
  CHECK(summary.find("\"distribution\": \"atom\"") != std::string::npos);
}

TEST_CASE("scaled runner: table and field modes") {
  ExperimentConfig table = parse_config(R"({
    "profile": {"type": "slab", "alpha": 0.3},
    "rho": 0.1,
    "L": 8.0,
    "scale": "D",
    "grid": {"points": 9, "lo": -0.4, "hi": 0.4}
  })");
  table.out_dir = temp_dir("scaled_table");
  RunResult r1 = run_scaled(table);
  CHECK(r1.verdict_pass);
  CHECK(slurp(table.out_dir + "/density.csv").rfind("u,finite_L,limit,gap", 0) ==
        0);

  ExperimentConfig field = parse_config(R"({
    "profile": {"type": "beam", "gamma": 2.0},
    "scale": "I",
    "seed": 7,
    "grid": {"points": 5, "lo": -0.5, "hi": 0.5},
    "scaled": {"mode": "field", "n_samples": 4000, "alpha2": 1.0}
  })");
  field.out_dir = temp_dir("scaled_field");
  RunResult r2 = run_scaled(field);
  CHECK(r2.verdict_pass);
  std::string mean_csv = slurp(field.out_dir + "/mean_density.csv");
  CHECK(mean_csv.rfind("u,mean,stderr,limit", 0) == 0);
  // Center row mean should exceed the endpoint mean (peaked profile).
  std::istringstream ss(mean_csv);
  std::string line;
  std::getline(ss, line);  // header
  std::vector<double> means;
  while (std::getline(ss, line)) {
    auto c1 = line.find(',');
    auto c2 = line.find(',', c1 + 1);
    means.push_back(std::stod(line.substr(c1 + 1, c2 - c1 - 1)));
  }
  REQUIRE(means.size() == 5);
  CHECK(means[2] > means[0]);
  CHECK(means[2] > means[4]);
}

TEST_CASE("asymptotics runner verdicts") {
  ExperimentConfig c = parse_config(R"({
    "asymptotics": {"cases": [
      {"formula": "A1", "A": 1.0,
       "schedule": {"kind": "const", "value": 1e-2},
       "L_grid": [50, 100, 200, 400]},
      {"formula": "A12"}
    ]}
  })");
  c.out_dir = temp_dir("asym");
  RunResult r = run_verify_asymptotics(c);
  CHECK(r.verdict_pass);
  std::string verdicts = slurp(c.out_dir + "/verdicts.json");
  CHECK(verdicts.find("\"verdict\": \"bounded\"") != std::string::npos);
  CHECK(verdicts.find("\"all_pass\": true") != std::string::npos);
}
