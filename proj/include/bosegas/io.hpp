#pragma once

#include <string>
#include <vector>

#include "bosegas/kernel.hpp"
#include "bosegas/sampler.hpp"
#include "bosegas/thermo.hpp"

#include <nlohmann/json_fwd.hpp>

namespace bosegas {

// Shortest round-trip decimal form; identical across runs and platforms.
std::string format_double(double v);

nlohmann::ordered_json kernel_to_json(const TruncatedKernel& kernel);
TruncatedKernel kernel_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json phase_report_to_json(const PhaseReport& report);

// One configuration per line: {"window": [[lo],[hi]], "points": [[x,y,z],...]}.
std::string configuration_to_jsonl(const PointConfiguration& config);

// Minimal CSV writer; rows are preformatted cells.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows);

void write_text(const std::string& path, const std::string& content);

}  // namespace bosegas
