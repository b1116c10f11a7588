#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskmdp/mcp.hpp"
#include "riskmdp/models.hpp"
#include "riskmdp/risk_map.hpp"
#include "riskmdp/solver.hpp"

namespace riskmdp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNotConverged = 3;
inline constexpr int kExitUnsatisfied = 4;

/// Thrown for anything wrong with the configuration; maps to exit code 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SweepAxis {
    std::string param;  // lambda, g1, g2 or r
    std::vector<double> values;
};

struct RunConfig {
    nlohmann::json model;  // exactly one of "builtin", "diffusion", "file"
    RiskMapSpec risk;
    SolveConfig solve;
    nlohmann::json solve_weight;  // {"w0": ..., "K": ...} or null; resolved against the model
    std::vector<nlohmann::json> certificates;
    std::optional<SweepAxis> sweep;
    std::filesystem::path output_dir = ".";
    std::filesystem::path base_dir = ".";  // relative model paths resolve here
};

RunConfig parse_run_config(const nlohmann::json& j, const std::filesystem::path& base_dir = ".");
RunConfig load_run_config(const std::filesystem::path& path);

struct LoadedModel {
    FiniteMCP mcp;
    std::optional<DiffusionModel> diffusion;  // present for diffusion sources
};

LoadedModel load_model(const RunConfig& cfg, std::optional<std::uint64_t> seed = std::nullopt);

/// Weight vectors from {"type": "zero" | "vector" | "index" | "squared_norm" | "entropic", ...}.
/// "entropic" needs a diffusion model and takes "gamma" and an optional "offset".
/// Any type accepts "power" (entrywise exponent) and "scale".
std::vector<double> resolve_weight(const nlohmann::json& spec, const LoadedModel& model);

struct CliOptions {
    std::filesystem::path config;
    std::optional<std::filesystem::path> output;
    std::size_t jobs = 1;
    std::optional<std::uint64_t> seed;
};

int cmd_solve(const CliOptions& opts);
int cmd_verify(const CliOptions& opts);
int cmd_sweep(const CliOptions& opts);
/// Enumerates deterministic policies: writes policy_table.csv and oracle.json.
int cmd_oracle(const CliOptions& opts);

}  // namespace riskmdp::cli
