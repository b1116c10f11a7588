#pragma once

#include <span>
#include <vector>

#include "riskmdp/mcp.hpp"
#include "riskmdp/risk_map.hpp"

namespace riskmdp {

enum class Exec { serial, parallel };

/// Hot loops in two flavours. The serial versions are the reference the
/// OpenMP versions are tested against; both produce bit-identical output
/// because every reduction here is a max/min or a per-state write.
namespace kernels {

double seminorm_serial(std::span<const double> v, std::span<const double> w);
double seminorm_parallel(std::span<const double> v, std::span<const double> w);

/// out[x] = sum_a pi(a|x) [c(x,a) + R(v | x,a)].
void policy_sweep_serial(const FiniteMCP& mcp, const RiskMapSpec& spec, const PolicyVector& policy,
                         std::span<const double> v, std::span<double> out);
void policy_sweep_parallel(const FiniteMCP& mcp, const RiskMapSpec& spec, const PolicyVector& policy,
                           std::span<const double> v, std::span<double> out);

/// out[x] = min_a [c(x,a) + R(v | x,a)], argmin into `choice` (lowest index on ties).
void greedy_sweep_serial(const FiniteMCP& mcp, const RiskMapSpec& spec, std::span<const double> v,
                         std::span<double> out, std::span<std::size_t> choice);
void greedy_sweep_parallel(const FiniteMCP& mcp, const RiskMapSpec& spec, std::span<const double> v,
                           std::span<double> out, std::span<std::size_t> choice);

}  // namespace kernels
}  // namespace riskmdp
