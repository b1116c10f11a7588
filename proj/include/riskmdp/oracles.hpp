#pragma once

#include <string>
#include <vector>

#include "riskmdp/linalg.hpp"
#include "riskmdp/mcp.hpp"
#include "riskmdp/risk_map.hpp"
#include "riskmdp/solver.hpp"

namespace riskmdp {

struct OracleResult {
    double rho = 0.0;
    std::vector<double> h;
    std::string method;
    double error_bound = 0.0;
};

/// Fixed-policy entropic average risk as (1/lambda) ln of the Perron root of
/// diag(e^{lambda c}) P, by power iteration with Collatz-Wielandt bounds.
/// h = (1/lambda) ln(phi), zero at the reference state. Throws on a
/// non-primitive P.
OracleResult entropic_spectral_rho(const linalg::Dense& P, const std::vector<double>& c, double lambda,
                                   std::size_t reference_state = 0);

/// Stationary law from pi P = pi, sum pi = 1; rho = pi . c; h from
/// rho + h = c + P h with h[reference_state] = 0.
OracleResult neutral_average_cost(const linalg::Dense& P, const std::vector<double>& c,
                                  std::size_t reference_state = 0);

struct PolicyRow {
    std::size_t id = 0;
    DeterministicPolicy policy;
    double rho = 0.0;
    std::string method;
};

struct EnumerationResult {
    double best_rho = 0.0;
    DeterministicPolicy best_policy;
    std::vector<PolicyRow> table;
};

inline constexpr std::size_t kEnumerationBudget = 10000;

/// Every deterministic stationary policy, ranked by its fixed-policy rho.
/// Entropic uses the spectral oracle, neutral the stationary oracle, the rest
/// fixed-policy relative value iteration with `cfg`.
EnumerationResult enumerate_policies(const FiniteMCP& mcp, const RiskMapSpec& spec, const SolveConfig& cfg = {});

/// Distribution of the total cost sum_{t<=T} c(X_t) from each start state.
struct CostLaw {
    std::vector<double> cost;
    std::vector<double> prob;
};

inline constexpr std::size_t kPathBudget = 10000000;

CostLaw path_total_cost_law(const FiniteMCP& mcp, const DeterministicPolicy& policy, std::size_t T, std::size_t start);

/// (1/lambda) ln E[e^{lambda sum_{t<=T} c}] per start state by exact path sums.
std::vector<double> path_enumeration_entropic(const FiniteMCP& mcp, const DeterministicPolicy& policy, double lambda,
                                              std::size_t T);

/// The one-shot risk map applied to the law of the total cost, per start state.
std::vector<double> path_enumeration_risk(const FiniteMCP& mcp, const RiskMapSpec& spec,
                                          const DeterministicPolicy& policy, std::size_t T);

}  // namespace riskmdp
