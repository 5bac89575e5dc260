#include "bosegas/io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace bosegas {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::ordered_json kernel_to_json(const TruncatedKernel& kernel) {
  nlohmann::ordered_json j;
  auto& modes = j["modes"] = nlohmann::ordered_json::array();
  for (const Mode& m : kernel.modes) modes.push_back({m.k1, m.k2, m.k3});
  auto& occ = j["occupations"] = nlohmann::ordered_json::array();
  for (int i = 0; i < kernel.rank(); ++i) occ.push_back(kernel.occupations[i]);
  j["box"] = {{"L1", kernel.box.l1}, {"L2", kernel.box.l2}, {"L3", kernel.box.l3}};
  j["beta"] = kernel.thermo.beta;
  j["delta"] = kernel.delta;
  j["tail_bound"] = kernel.tail_bound;
  j["bc"] = kernel.bc == BoundaryCondition::Dirichlet ? "dirichlet" : "periodic";
  return j;
}

TruncatedKernel kernel_from_json(const nlohmann::ordered_json& j) {
  BoxGeometry box(j.at("box").at("L1").get<double>(),
                  j.at("box").at("L2").get<double>(),
                  j.at("box").at("L3").get<double>());
  ThermoParams thermo;
  thermo.beta = j.at("beta").get<double>();
  std::vector<Mode> modes;
  for (const auto& m : j.at("modes"))
    modes.push_back({m.at(0).get<int>(), m.at(1).get<int>(), m.at(2).get<int>()});
  std::vector<double> occ = j.at("occupations").get<std::vector<double>>();
  if (occ.size() != modes.size())
    throw domain_error("kernel_from_json: modes/occupations size mismatch");
  BoundaryCondition bc = BoundaryCondition::Dirichlet;
  if (j.contains("bc") && j.at("bc") == "periodic")
    bc = BoundaryCondition::Periodic;
  return TruncatedKernel{
      .modes = std::move(modes),
      .occupations = VectorXd::Map(occ.data(), static_cast<long>(occ.size())),
      .box = box,
      .thermo = thermo,
      .delta = j.at("delta").get<double>(),
      .bc = bc,
      .tail_bound = j.at("tail_bound").get<double>()};
}

nlohmann::ordered_json phase_report_to_json(const PhaseReport& report) {
  nlohmann::ordered_json j;
  j["phase"] = to_string(report.phase);
  j["rho"] = report.rho;
  j["rho_c"] = report.rho_c;
  if (report.rho_m) j["rho_m"] = *report.rho_m;
  j["kappa1"] = report.kappa1;
  j["kappa2"] = report.kappa2;
  if (report.kappa_tilde) j["kappa_tilde"] = *report.kappa_tilde;
  j["delta_inf"] = report.delta_inf;
  j["schedule"] = report.schedule;
  return j;
}

std::string configuration_to_jsonl(const PointConfiguration& config) {
  std::string line = "{\"window\":[[";
  auto append_vec = [&line](const Vec3& v) {
    line += format_double(v[0]);
    line += ",";
    line += format_double(v[1]);
    line += ",";
    line += format_double(v[2]);
  };
  append_vec(config.window.lo);
  line += "],[";
  append_vec(config.window.hi);
  line += "]],\"points\":[";
  for (std::size_t i = 0; i < config.points.size(); ++i) {
    if (i) line += ",";
    line += "[";
    append_vec(config.points[i]);
    line += "]";
  }
  line += "]}";
  return line;
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw numeric_error("write_csv: cannot open " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out << ",";
    out << header[i];
  }
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ",";
      out << row[i];
    }
    out << "\n";
  }
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw numeric_error("write_text: cannot open " + path);
  out << content;
}

}  // namespace bosegas
