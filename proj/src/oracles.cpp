#include "riskmdp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace riskmdp {

namespace {

void require_square(const linalg::Dense& P, std::size_t n_cost, const char* who) {
    if (P.empty() || P.size() != n_cost) throw std::invalid_argument(std::string(who) + ": size mismatch");
    for (const auto& row : P)
        if (row.size() != P.size()) throw std::invalid_argument(std::string(who) + ": P must be square");
}

}  // namespace

OracleResult entropic_spectral_rho(const linalg::Dense& P, const std::vector<double>& c, double lambda,
                                   std::size_t reference_state) {
    require_square(P, c.size(), "entropic_spectral_rho");
    if (lambda == 0.0) throw std::invalid_argument("entropic_spectral_rho: lambda = 0");
    if (reference_state >= c.size()) throw std::invalid_argument("entropic_spectral_rho: bad reference state");
    if (!linalg::is_primitive(P)) throw std::invalid_argument("entropic_spectral_rho: P is not irreducible and aperiodic");

    const std::size_t n = c.size();
    double shift = -std::numeric_limits<double>::infinity();
    for (double v : c) shift = std::max(shift, lambda * v);
    std::vector<double> scale(n);
    for (std::size_t x = 0; x < n; ++x) scale[x] = std::exp(lambda * c[x] - shift);

    std::vector<double> phi(n, 1.0), next(n);
    double lo = 0.0, hi = 0.0;
    for (std::size_t it = 0; it < 1000000; ++it) {
        lo = std::numeric_limits<double>::infinity();
        hi = 0.0;
        double top = 0.0;
        for (std::size_t x = 0; x < n; ++x) {
            double s = 0.0;
            for (std::size_t y = 0; y < n; ++y) s += P[x][y] * phi[y];
            next[x] = scale[x] * s;
            const double r = next[x] / phi[x];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            top = std::max(top, next[x]);
        }
        for (std::size_t x = 0; x < n; ++x) phi[x] = next[x] / top;
        if (hi - lo < 1e-13 * hi) break;
    }
    const double root = 0.5 * (lo + hi);
    OracleResult out;
    out.method = "spectral";
    out.rho = (shift + std::log(root)) / lambda;
    out.error_bound = std::abs(std::log(hi / lo) / lambda);
    out.h.resize(n);
    const double ref = std::log(phi[reference_state]);
    for (std::size_t x = 0; x < n; ++x) out.h[x] = (std::log(phi[x]) - ref) / lambda;
    return out;
}

OracleResult neutral_average_cost(const linalg::Dense& P, const std::vector<double>& c, std::size_t reference_state) {
    require_square(P, c.size(), "neutral_average_cost");
    const std::size_t n = c.size();
    if (reference_state >= n) throw std::invalid_argument("neutral_average_cost: bad reference state");

    // (P^T - I) pi = 0 with the last equation replaced by sum pi = 1
    linalg::Dense A(n, std::vector<double>(n, 0.0));
    std::vector<double> b(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t x = 0; x < n; ++x) A[j][x] = P[x][j] - (x == j ? 1.0 : 0.0);
    std::fill(A[n - 1].begin(), A[n - 1].end(), 1.0);
    b[n - 1] = 1.0;
    const auto pi = linalg::solve(A, b);

    OracleResult out;
    out.method = "stationary";
    for (std::size_t x = 0; x < n; ++x) out.rho += pi[x] * c[x];

    // unknowns: g, then h(y) for y != reference_state
    linalg::Dense M(n, std::vector<double>(n, 0.0));
    for (std::size_t x = 0; x < n; ++x) {
        M[x][0] = 1.0;
        std::size_t col = 1;
        for (std::size_t y = 0; y < n; ++y) {
            if (y == reference_state) continue;
            M[x][col++] = (x == y ? 1.0 : 0.0) - P[x][y];
        }
    }
    const auto sol = linalg::solve(M, c);
    out.h.assign(n, 0.0);
    std::size_t col = 1;
    for (std::size_t y = 0; y < n; ++y) {
        if (y == reference_state) continue;
        out.h[y] = sol[col++];
    }
    out.error_bound = std::abs(sol[0] - out.rho);
    return out;
}

EnumerationResult enumerate_policies(const FiniteMCP& mcp, const RiskMapSpec& spec, const SolveConfig& cfg) {
    require_valid(mcp);
    spec.validate();
    std::size_t total = 1;
    for (std::size_t x = 0; x < mcp.n_states; ++x) {
        total *= mcp.n_actions(x);
        if (total > kEnumerationBudget) throw std::invalid_argument("enumerate_policies: enumeration budget exceeded");
    }

    EnumerationResult res;
    res.table.resize(total);
    std::vector<std::string> errors(total);
    const auto nt = static_cast<std::ptrdiff_t>(total);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t id = 0; id < nt; ++id) {
        auto& row = res.table[static_cast<std::size_t>(id)];
        row.id = static_cast<std::size_t>(id);
        row.policy.resize(mcp.n_states);
        std::size_t r = row.id;
        for (std::size_t x = 0; x < mcp.n_states; ++x) {
            row.policy[x] = r % mcp.n_actions(x);
            r /= mcp.n_actions(x);
        }
        try {
            const auto P = policy_matrix(mcp, row.policy);
            const auto c = policy_cost(mcp, row.policy);
            if (spec.kind == RiskKind::entropic && linalg::is_primitive(P)) {
                row.rho = entropic_spectral_rho(P, c, spec.lambda).rho;
                row.method = "spectral";
            } else if (spec.kind == RiskKind::neutral && linalg::is_primitive(P)) {
                row.rho = neutral_average_cost(P, c).rho;
                row.method = "stationary";
            } else {
                SolveConfig local = cfg;
                local.exec = Exec::serial;
                const auto sol = relative_value_iteration_policy(mcp, spec, row.policy, local);
                if (!sol.converged) throw std::runtime_error("fixed-policy iteration did not converge");
                row.rho = sol.rho;
                row.method = "fixed-policy iteration";
            }
        } catch (const std::exception& e) {
            errors[static_cast<std::size_t>(id)] = e.what();
        }
    }
    for (std::size_t id = 0; id < total; ++id)
        if (!errors[id].empty())
            throw std::runtime_error("enumerate_policies: policy " + std::to_string(id) + ": " + errors[id]);

    std::size_t best = 0;
    for (std::size_t id = 1; id < total; ++id)
        if (res.table[id].rho < res.table[best].rho) best = id;
    res.best_rho = res.table[best].rho;
    res.best_policy = res.table[best].policy;
    return res;
}

namespace {

std::size_t path_count(std::size_t n, std::size_t T) {
    std::size_t count = 1;
    for (std::size_t t = 0; t <= T; ++t) {
        if (count > kPathBudget / n) return kPathBudget + 1;
        count *= n;
    }
    return count;
}

template <class Visit>
void walk_paths(const FiniteMCP& mcp, const DeterministicPolicy& policy, std::size_t T, std::size_t start,
                Visit&& visit) {
    struct Frame {
        std::size_t x;
        std::size_t depth;
        double prob;
        double cost;
    };
    std::vector<Frame> stack{{start, 0, 1.0, mcp.cost[start][policy[start]]}};
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.depth == T) {
            visit(f.cost, f.prob);
            continue;
        }
        const auto row = mcp.row(f.x, policy[f.x]);
        for (std::size_t y = 0; y < mcp.n_states; ++y)
            if (row[y] > 0.0) stack.push_back({y, f.depth + 1, f.prob * row[y], f.cost + mcp.cost[y][policy[y]]});
    }
}

void check_path_inputs(const FiniteMCP& mcp, const DeterministicPolicy& policy, std::size_t T) {
    require_valid(mcp);
    if (!validate_policy(mcp, policy).ok()) throw std::invalid_argument("path enumeration: invalid policy");
    if (path_count(mcp.n_states, T) > kPathBudget) throw std::invalid_argument("path enumeration: budget exceeded");
}

}  // namespace

CostLaw path_total_cost_law(const FiniteMCP& mcp, const DeterministicPolicy& policy, std::size_t T, std::size_t start) {
    check_path_inputs(mcp, policy, T);
    if (start >= mcp.n_states) throw std::invalid_argument("path enumeration: bad start state");
    CostLaw law;
    walk_paths(mcp, policy, T, start, [&](double cost, double prob) {
        law.cost.push_back(cost);
        law.prob.push_back(prob);
    });
    return law;
}

std::vector<double> path_enumeration_entropic(const FiniteMCP& mcp, const DeterministicPolicy& policy, double lambda,
                                              std::size_t T) {
    if (lambda == 0.0) throw std::invalid_argument("path_enumeration_entropic: lambda = 0");
    check_path_inputs(mcp, policy, T);
    double cmax = -std::numeric_limits<double>::infinity();
    for (std::size_t x = 0; x < mcp.n_states; ++x) cmax = std::max(cmax, lambda * mcp.cost[x][policy[x]]);
    const double shift = cmax * static_cast<double>(T + 1);

    std::vector<double> out(mcp.n_states);
    for (std::size_t x0 = 0; x0 < mcp.n_states; ++x0) {
        double s = 0.0;
        walk_paths(mcp, policy, T, x0, [&](double cost, double prob) { s += prob * std::exp(lambda * cost - shift); });
        out[x0] = (shift + std::log(s)) / lambda;
    }
    return out;
}

std::vector<double> path_enumeration_risk(const FiniteMCP& mcp, const RiskMapSpec& spec,
                                          const DeterministicPolicy& policy, std::size_t T) {
    spec.validate();
    std::vector<double> out(mcp.n_states);
    for (std::size_t x0 = 0; x0 < mcp.n_states; ++x0) {
        const auto law = path_total_cost_law(mcp, policy, T, x0);
        out[x0] = eval_risk(spec, law.cost, law.prob);
    }
    return out;
}

}  // namespace riskmdp
