#include "riskmdp/mcp.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace riskmdp {

std::size_t FiniteMCP::n_pairs() const {
    std::size_t total = 0;
    for (const auto& a : actions) total += a.size();
    return total;
}

ValidationReport validate_mcp(const FiniteMCP& mcp) {
    ValidationReport report;
    auto add = [&](const std::string& msg) { report.violations.push_back(msg); };

    if (mcp.n_states == 0) add("n_states must be positive");
    if (mcp.actions.size() != mcp.n_states) {
        add("actions has " + std::to_string(mcp.actions.size()) + " entries, expected " +
            std::to_string(mcp.n_states));
        return report;
    }
    if (mcp.transition.size() != mcp.n_states) {
        add("transition has wrong state count");
        return report;
    }
    if (mcp.cost.size() != mcp.n_states) {
        add("cost has wrong state count");
        return report;
    }
    if (!mcp.coords.empty() && mcp.coords.size() != mcp.n_states) add("coords has wrong state count");

    for (std::size_t x = 0; x < mcp.n_states; ++x) {
        const std::size_t na = mcp.actions[x].size();
        if (na == 0) add("empty action set at x=" + std::to_string(x));
        if (mcp.transition[x].size() != na) {
            add("transition action count mismatch at x=" + std::to_string(x));
            continue;
        }
        if (mcp.cost[x].size() != na) add("cost action count mismatch at x=" + std::to_string(x));
        for (std::size_t a = 0; a < na; ++a) {
            const std::string where = "(x=" + std::to_string(x) + ",a=" + std::to_string(a) + ")";
            if (a < mcp.cost[x].size() && !std::isfinite(mcp.cost[x][a])) add("non-finite cost at " + where);
            const auto& row = mcp.transition[x][a];
            if (row.size() != mcp.n_states) {
                add("row length " + std::to_string(row.size()) + " at " + where);
                continue;
            }
            double sum = 0.0;
            bool negative = false;
            bool finite = true;
            for (double p : row) {
                if (!std::isfinite(p)) finite = false;
                if (p < 0.0) negative = true;
                sum += p;
            }
            if (!finite) add("non-finite entry at " + where);
            if (negative) add("negative entry at " + where);
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                std::ostringstream os;
                os << "row sum " << sum << " at " << where;
                add(os.str());
            }
        }
    }
    return report;
}

void require_valid(const FiniteMCP& mcp) {
    auto report = validate_mcp(mcp);
    if (report.ok()) return;
    std::string msg = "invalid MCP:";
    for (std::size_t i = 0; i < report.violations.size() && i < 5; ++i) msg += " " + report.violations[i] + ";";
    throw std::invalid_argument(msg);
}

ValidationReport validate_policy(const FiniteMCP& mcp, const PolicyVector& policy) {
    ValidationReport report;
    if (const auto* det = std::get_if<DeterministicPolicy>(&policy)) {
        if (det->size() != mcp.n_states) {
            report.violations.push_back("policy length mismatch");
            return report;
        }
        for (std::size_t x = 0; x < mcp.n_states; ++x)
            if ((*det)[x] >= mcp.n_actions(x))
                report.violations.push_back("action index out of range at x=" + std::to_string(x));
        return report;
    }
    const auto& rnd = std::get<RandomizedPolicy>(policy);
    if (rnd.probs.size() != mcp.n_states) {
        report.violations.push_back("policy length mismatch");
        return report;
    }
    for (std::size_t x = 0; x < mcp.n_states; ++x) {
        if (rnd.probs[x].size() != mcp.n_actions(x)) {
            report.violations.push_back("policy row length mismatch at x=" + std::to_string(x));
            continue;
        }
        double sum = 0.0;
        for (double p : rnd.probs[x]) {
            if (p < 0.0) report.violations.push_back("negative policy weight at x=" + std::to_string(x));
            sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance)
            report.violations.push_back("policy row sum at x=" + std::to_string(x));
    }
    return report;
}

namespace {

template <class Fn>
void for_each_weighted_action(const FiniteMCP& mcp, const PolicyVector& policy, std::size_t x, Fn&& fn) {
    if (const auto* det = std::get_if<DeterministicPolicy>(&policy)) {
        fn((*det)[x], 1.0);
        return;
    }
    const auto& probs = std::get<RandomizedPolicy>(policy).probs[x];
    for (std::size_t a = 0; a < mcp.n_actions(x); ++a)
        if (probs[a] > 0.0) fn(a, probs[a]);
}

}  // namespace

std::vector<double> policy_cost(const FiniteMCP& mcp, const PolicyVector& policy) {
    std::vector<double> c(mcp.n_states, 0.0);
    for (std::size_t x = 0; x < mcp.n_states; ++x)
        for_each_weighted_action(mcp, policy, x, [&](std::size_t a, double p) { c[x] += p * mcp.cost[x][a]; });
    return c;
}

std::vector<std::vector<double>> policy_matrix(const FiniteMCP& mcp, const PolicyVector& policy) {
    std::vector<std::vector<double>> P(mcp.n_states, std::vector<double>(mcp.n_states, 0.0));
    for (std::size_t x = 0; x < mcp.n_states; ++x)
        for_each_weighted_action(mcp, policy, x, [&](std::size_t a, double p) {
            const auto& row = mcp.transition[x][a];
            for (std::size_t y = 0; y < mcp.n_states; ++y) P[x][y] += p * row[y];
        });
    return P;
}

FiniteMCP restrict_to_policy(const FiniteMCP& mcp, const DeterministicPolicy& policy) {
    if (!validate_policy(mcp, policy).ok()) throw std::invalid_argument("restrict_to_policy: invalid policy");
    FiniteMCP out;
    out.n_states = mcp.n_states;
    out.coords = mcp.coords;
    out.actions.resize(mcp.n_states);
    out.transition.resize(mcp.n_states);
    out.cost.resize(mcp.n_states);
    for (std::size_t x = 0; x < mcp.n_states; ++x) {
        const std::size_t a = policy[x];
        out.actions[x] = {mcp.actions[x][a]};
        out.transition[x] = {mcp.transition[x][a]};
        out.cost[x] = {mcp.cost[x][a]};
    }
    return out;
}

void WeightSpec::validate() const {
    if (!(K > 0.0) || !std::isfinite(K)) throw std::invalid_argument("WeightSpec: K must be positive");
    for (double v : w0)
        if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument("WeightSpec: w0 must be finite and >= 0");
}

std::vector<double> WeightSpec::weights() const {
    validate();
    std::vector<double> w(w0.size());
    for (std::size_t i = 0; i < w0.size(); ++i) w[i] = 1.0 + w0[i] / K;
    return w;
}

std::vector<double> unit_weights(std::size_t n) { return std::vector<double>(n, 1.0); }

}  // namespace riskmdp
