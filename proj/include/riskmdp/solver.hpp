#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "riskmdp/kernels.hpp"
#include "riskmdp/mcp.hpp"
#include "riskmdp/risk_map.hpp"

namespace riskmdp {

struct SolveConfig {
    double tol = 1e-10;
    std::size_t max_iter = 100000;
    std::size_t reference_state = 0;
    std::optional<WeightSpec> weight;         // unit weights when absent
    std::optional<std::vector<double>> initial;  // starting vector, zero when absent
    Exec exec = Exec::parallel;

    void validate(std::size_t n_states) const;
};

struct TraceRow {
    std::size_t iter = 0;
    double span = 0.0;  // M - m
    double m = 0.0;
    double M = 0.0;
    double rho_est = 0.0;
    std::int64_t wall_ns = 0;
};

struct SolveResult {
    double rho = 0.0;
    double error_bound = 0.0;  // (M - m)/2 at termination
    std::vector<double> h;
    DeterministicPolicy policy;
    std::vector<TraceRow> trace;
    bool converged = false;
    std::size_t iterations = 0;
    double weighted_span = 0.0;  // weighted seminorm of the last increment
};

struct GreedyResult {
    std::vector<double> values;
    DeterministicPolicy policy;
};

std::vector<double> bellman_T(const FiniteMCP& mcp, const RiskMapSpec& spec, const PolicyVector& policy,
                              std::span<const double> v, Exec exec = Exec::parallel);

GreedyResult bellman_F(const FiniteMCP& mcp, const RiskMapSpec& spec, std::span<const double> v,
                       Exec exec = Exec::parallel);

/// R^pi(v)(x) = sum_a pi(a|x) R(v | x,a), i.e. T^pi without the stage cost.
std::vector<double> risk_policy(const FiniteMCP& mcp, const RiskMapSpec& spec, const PolicyVector& policy,
                                std::span<const double> v, Exec exec = Exec::parallel);

/// Relative value iteration for rho + h = F(h).
///
/// Stops when the bracket span M - m drops below tol. The weighted seminorm
/// of the increment is recorded but not used to stop: with w >= 1 it is at
/// most half the span, so stopping on it alone would leave the residual
/// above the 10 tol contract.
SolveResult relative_value_iteration(const FiniteMCP& mcp, const RiskMapSpec& spec, const SolveConfig& cfg = {});

/// Same iteration with a fixed policy (T^pi in place of F).
SolveResult relative_value_iteration_policy(const FiniteMCP& mcp, const RiskMapSpec& spec,
                                            const PolicyVector& policy, const SolveConfig& cfg = {});

/// max( ||F(h) - h - rho||_{s,w}, |mean(F(h) - h) - rho| ).
double poisson_residual(const FiniteMCP& mcp, const RiskMapSpec& spec, double rho, std::span<const double> h,
                        std::span<const double> w = {});

/// Backward recursion v <- T^{pi_t}(v) for t = T .. 0 from v_terminal.
/// policy_seq holds T + 1 policies; a single entry is reused at every stage.
std::vector<double> finite_horizon_risk(const FiniteMCP& mcp, const RiskMapSpec& spec,
                                        const std::vector<PolicyVector>& policy_seq, std::size_t T,
                                        std::span<const double> v_terminal = {});

struct ContractionStats {
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    double min_ratio = 0.0;
    std::size_t pairs = 0;    // pairs that entered the statistics
    std::size_t skipped = 0;  // degenerate pairs (v - u constant)
};

struct ContractionSampling {
    std::vector<double> ball_weight;  // w of the ball ||v||_{s,w} <= K; unit weights when empty
    double K = 1.0;
    std::size_t n_trials = 1000;
    std::uint64_t seed = 2024;
};

/// Ratios ||R^pi v - R^pi u||_{s,w_hat} / ||v - u||_{s,w_hat} for random pairs
/// inside the ball and random randomized single-step policies.
ContractionStats measure_contraction(const FiniteMCP& mcp, const RiskMapSpec& spec, std::span<const double> w_hat,
                                     const ContractionSampling& sampling);

}  // namespace riskmdp
