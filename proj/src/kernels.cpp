#include "riskmdp/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace riskmdp::kernels {

namespace {

inline double pair_scan_row(std::span<const double> v, std::span<const double> w, std::size_t i) {
    double best = 0.0;
    const double vi = v[i];
    const double wi = w[i];
    for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, std::abs(vi - v[j]) / (wi + w[j]));
    return best;
}

inline double policy_value(const FiniteMCP& mcp, const RiskMapSpec& spec, const PolicyVector& policy,
                           std::span<const double> v, std::size_t x) {
    if (const auto* det = std::get_if<DeterministicPolicy>(&policy)) {
        const std::size_t a = (*det)[x];
        return mcp.cost[x][a] + eval_risk(spec, v, mcp.row(x, a));
    }
    const auto& probs = std::get<RandomizedPolicy>(policy).probs[x];
    double acc = 0.0;
    for (std::size_t a = 0; a < mcp.n_actions(x); ++a)
        if (probs[a] > 0.0) acc += probs[a] * (mcp.cost[x][a] + eval_risk(spec, v, mcp.row(x, a)));
    return acc;
}

inline void greedy_state(const FiniteMCP& mcp, const RiskMapSpec& spec, std::span<const double> v, std::size_t x,
                         double& best, std::size_t& arg) {
    best = std::numeric_limits<double>::infinity();
    arg = 0;
    for (std::size_t a = 0; a < mcp.n_actions(x); ++a) {
        const double q = mcp.cost[x][a] + eval_risk(spec, v, mcp.row(x, a));
        if (q < best) {
            best = q;
            arg = a;
        }
    }
}

}  // namespace

double seminorm_serial(std::span<const double> v, std::span<const double> w) {
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) best = std::max(best, pair_scan_row(v, w, i));
    return best;
}

double seminorm_parallel(std::span<const double> v, std::span<const double> w) {
    double best = 0.0;
    const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(dynamic, 32) reduction(max : best)
    for (std::ptrdiff_t i = 0; i < n; ++i) best = std::max(best, pair_scan_row(v, w, static_cast<std::size_t>(i)));
    return best;
}

void policy_sweep_serial(const FiniteMCP& mcp, const RiskMapSpec& spec, const PolicyVector& policy,
                         std::span<const double> v, std::span<double> out) {
    for (std::size_t x = 0; x < mcp.n_states; ++x) out[x] = policy_value(mcp, spec, policy, v, x);
}

void policy_sweep_parallel(const FiniteMCP& mcp, const RiskMapSpec& spec, const PolicyVector& policy,
                           std::span<const double> v, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(mcp.n_states);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t x = 0; x < n; ++x)
        out[static_cast<std::size_t>(x)] = policy_value(mcp, spec, policy, v, static_cast<std::size_t>(x));
}

void greedy_sweep_serial(const FiniteMCP& mcp, const RiskMapSpec& spec, std::span<const double> v,
                         std::span<double> out, std::span<std::size_t> choice) {
    for (std::size_t x = 0; x < mcp.n_states; ++x) greedy_state(mcp, spec, v, x, out[x], choice[x]);
}

void greedy_sweep_parallel(const FiniteMCP& mcp, const RiskMapSpec& spec, std::span<const double> v,
                           std::span<double> out, std::span<std::size_t> choice) {
    const auto n = static_cast<std::ptrdiff_t>(mcp.n_states);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t x = 0; x < n; ++x) {
        const auto s = static_cast<std::size_t>(x);
        greedy_state(mcp, spec, v, s, out[s], choice[s]);
    }
}

}  // namespace riskmdp::kernels
