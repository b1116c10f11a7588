#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskmdp/certificates.hpp"
#include "riskmdp/mcp.hpp"
#include "riskmdp/models.hpp"
#include "riskmdp/oracles.hpp"
#include "riskmdp/risk_map.hpp"
#include "riskmdp/solver.hpp"

namespace riskmdp::io {

using nlohmann::json;

json to_json(const FiniteMCP& mcp);
FiniteMCP mcp_from_json(const json& j);

json to_json(const RiskMapSpec& spec);
RiskMapSpec risk_from_json(const json& j);

DiffusionSpec diffusion_from_json(const json& j);
GridSpec grid_from_json(const json& j);

json to_json(const LyapunovCertificate& c);
json to_json(const DoeblinCertificate& c);
json to_json(const LocalDoeblinCertificate& c);
json to_json(const ContractionCertificate& c);

json read_json_file(const std::filesystem::path& path);
void write_json_file(const std::filesystem::path& path, const json& j);

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace);
void write_policy_table_csv(const std::filesystem::path& path, const std::vector<PolicyRow>& table);

}  // namespace riskmdp::io
