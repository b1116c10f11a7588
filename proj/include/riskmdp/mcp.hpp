#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace riskmdp {

/// Finite Markov control process.
///
/// `transition[x][a]` is the probability row Q(.|x,a) over all states and
/// `cost[x][a]` the stage cost c(x,a). The feasible state-action set is
/// implied by the per-state action lists. `coords` is optional and only
/// filled for models built on a spatial grid (one coordinate vector per state).
struct FiniteMCP {
    std::size_t n_states = 0;
    std::vector<std::vector<std::string>> actions;
    std::vector<std::vector<std::vector<double>>> transition;
    std::vector<std::vector<double>> cost;
    std::vector<std::vector<double>> coords;

    std::size_t n_actions(std::size_t x) const { return actions[x].size(); }
    std::span<const double> row(std::size_t x, std::size_t a) const { return transition[x][a]; }
    double stage_cost(std::size_t x, std::size_t a) const { return cost[x][a]; }
    std::size_t n_pairs() const;
};

inline constexpr double kRowSumTolerance = 1e-12;

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

/// Lists every structural violation (shape, nonnegativity, row sums, finite
/// costs, empty action sets). Kernels with bad rows are rejected, never repaired.
ValidationReport validate_mcp(const FiniteMCP& mcp);

/// Throws std::invalid_argument carrying the first few violations.
void require_valid(const FiniteMCP& mcp);

// Policies ----------------------------------------------------------------

using DeterministicPolicy = std::vector<std::size_t>;

struct RandomizedPolicy {
    std::vector<std::vector<double>> probs;  // probs[x][a]
};

using PolicyVector = std::variant<DeterministicPolicy, RandomizedPolicy>;

ValidationReport validate_policy(const FiniteMCP& mcp, const PolicyVector& policy);

/// Stage cost c^pi(x) of a single-step policy.
std::vector<double> policy_cost(const FiniteMCP& mcp, const PolicyVector& policy);

/// Transition matrix P^pi as dense rows.
std::vector<std::vector<double>> policy_matrix(const FiniteMCP& mcp, const PolicyVector& policy);

/// Single-action model that keeps only the chosen action in every state.
FiniteMCP restrict_to_policy(const FiniteMCP& mcp, const DeterministicPolicy& policy);

// Weights -----------------------------------------------------------------

/// Lyapunov candidate w0 >= 0 with scale K > 0; the weight is w = 1 + w0/K.
struct WeightSpec {
    std::vector<double> w0;
    double K = 1.0;

    void validate() const;
    std::vector<double> weights() const;
};

/// Unit weight vector of length n.
std::vector<double> unit_weights(std::size_t n);

}  // namespace riskmdp
