#include "riskmdp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "riskmdp/norms.hpp"

namespace riskmdp {

void SolveConfig::validate(std::size_t n_states) const {
    if (!(tol > 0.0)) throw std::invalid_argument("solve: tol must be positive");
    if (reference_state >= n_states) throw std::invalid_argument("solve: reference_state out of range");
    if (weight) {
        weight->validate();
        if (weight->w0.size() != n_states) throw std::invalid_argument("solve: weight length mismatch");
    }
    if (initial && initial->size() != n_states) throw std::invalid_argument("solve: initial vector length mismatch");
}

std::vector<double> bellman_T(const FiniteMCP& mcp, const RiskMapSpec& spec, const PolicyVector& policy,
                              std::span<const double> v, Exec exec) {
    std::vector<double> out(mcp.n_states);
    if (exec == Exec::serial)
        kernels::policy_sweep_serial(mcp, spec, policy, v, out);
    else
        kernels::policy_sweep_parallel(mcp, spec, policy, v, out);
    return out;
}

GreedyResult bellman_F(const FiniteMCP& mcp, const RiskMapSpec& spec, std::span<const double> v, Exec exec) {
    GreedyResult r;
    r.values.resize(mcp.n_states);
    r.policy.resize(mcp.n_states);
    if (exec == Exec::serial)
        kernels::greedy_sweep_serial(mcp, spec, v, r.values, r.policy);
    else
        kernels::greedy_sweep_parallel(mcp, spec, v, r.values, r.policy);
    return r;
}

std::vector<double> risk_policy(const FiniteMCP& mcp, const RiskMapSpec& spec, const PolicyVector& policy,
                                std::span<const double> v, Exec exec) {
    auto out = bellman_T(mcp, spec, policy, v, exec);
    const auto c = policy_cost(mcp, policy);
    for (std::size_t x = 0; x < out.size(); ++x) out[x] -= c[x];
    return out;
}

namespace {

template <class Step>
SolveResult run_rvi(const FiniteMCP& mcp, const SolveConfig& cfg, Step&& step) {
    require_valid(mcp);
    cfg.validate(mcp.n_states);
    const std::size_t n = mcp.n_states;
    const auto w = cfg.weight ? cfg.weight->weights() : unit_weights(n);

    std::vector<double> v = cfg.initial ? *cfg.initial : std::vector<double>(n, 0.0);
    std::vector<double> delta(n);
    SolveResult res;
    const auto t0 = std::chrono::steady_clock::now();

    for (std::size_t k = 1; k <= cfg.max_iter; ++k) {
        auto [u, policy] = step(v);
        double m = std::numeric_limits<double>::infinity();
        double M = -std::numeric_limits<double>::infinity();
        for (std::size_t x = 0; x < n; ++x) {
            delta[x] = u[x] - v[x];
            m = std::min(m, delta[x]);
            M = std::max(M, delta[x]);
        }
        TraceRow row;
        row.iter = k;
        row.span = M - m;
        row.m = m;
        row.M = M;
        row.rho_est = 0.5 * (m + M);
        row.wall_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(std::chrono::steady_clock::now() - t0).count();
        res.trace.push_back(row);

        res.weighted_span = weighted_seminorm(delta, w, cfg.exec);
        const double ref = u[cfg.reference_state];
        for (std::size_t x = 0; x < n; ++x) v[x] = u[x] - ref;
        res.iterations = k;
        res.rho = row.rho_est;
        res.error_bound = 0.5 * row.span;
        res.policy = std::move(policy);
        if (row.span < cfg.tol) {
            res.converged = true;
            break;
        }
    }
    res.h = std::move(v);
    return res;
}

}  // namespace

SolveResult relative_value_iteration(const FiniteMCP& mcp, const RiskMapSpec& spec, const SolveConfig& cfg) {
    spec.validate();
    return run_rvi(mcp, cfg, [&](const std::vector<double>& v) {
        auto g = bellman_F(mcp, spec, v, cfg.exec);
        return std::pair{std::move(g.values), std::move(g.policy)};
    });
}

SolveResult relative_value_iteration_policy(const FiniteMCP& mcp, const RiskMapSpec& spec, const PolicyVector& policy,
                                            const SolveConfig& cfg) {
    spec.validate();
    if (!validate_policy(mcp, policy).ok()) throw std::invalid_argument("solve: invalid policy");
    DeterministicPolicy reported(mcp.n_states, 0);
    if (const auto* det = std::get_if<DeterministicPolicy>(&policy)) reported = *det;
    return run_rvi(mcp, cfg, [&](const std::vector<double>& v) {
        return std::pair{bellman_T(mcp, spec, policy, v, cfg.exec), reported};
    });
}

double poisson_residual(const FiniteMCP& mcp, const RiskMapSpec& spec, double rho, std::span<const double> h,
                        std::span<const double> w) {
    if (h.size() != mcp.n_states) throw std::invalid_argument("poisson_residual: length mismatch");
    const auto Fh = bellman_F(mcp, spec, h).values;
    std::vector<double> r(h.size());
    double mean = 0.0;
    for (std::size_t x = 0; x < h.size(); ++x) {
        r[x] = Fh[x] - h[x] - rho;
        mean += Fh[x] - h[x];
    }
    mean /= static_cast<double>(h.size());
    const auto weights = w.empty() ? unit_weights(h.size()) : std::vector<double>(w.begin(), w.end());
    return std::max(weighted_seminorm(r, weights), std::abs(mean - rho));
}

std::vector<double> finite_horizon_risk(const FiniteMCP& mcp, const RiskMapSpec& spec,
                                        const std::vector<PolicyVector>& policy_seq, std::size_t T,
                                        std::span<const double> v_terminal) {
    if (policy_seq.size() != T + 1 && policy_seq.size() != 1)
        throw std::invalid_argument("finite_horizon_risk: need T+1 policies (or one stationary policy)");
    std::vector<double> v = v_terminal.empty() ? std::vector<double>(mcp.n_states, 0.0)
                                               : std::vector<double>(v_terminal.begin(), v_terminal.end());
    if (v.size() != mcp.n_states) throw std::invalid_argument("finite_horizon_risk: terminal length mismatch");
    for (std::size_t t = T + 1; t-- > 0;) {
        const auto& pi = policy_seq.size() == 1 ? policy_seq[0] : policy_seq[t];
        v = bellman_T(mcp, spec, pi, v);
    }
    return v;
}

ContractionStats measure_contraction(const FiniteMCP& mcp, const RiskMapSpec& spec, std::span<const double> w_hat,
                                     const ContractionSampling& sampling) {
    if (sampling.n_trials == 0) throw std::invalid_argument("measure_contraction: n_trials must be >= 1");
    const std::size_t n = mcp.n_states;
    if (w_hat.size() != n) throw std::invalid_argument("measure_contraction: weight length mismatch");
    const auto bw = sampling.ball_weight.empty() ? unit_weights(n) : sampling.ball_weight;

    std::mt19937_64 rng(sampling.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto draw = [&](std::vector<double>& v) {
        // |v| <= K w puts v in the ball ||v||_{s,w} <= K; a third of draws sit on vertices
        const bool vertex = unit(rng) < 1.0 / 3.0;
        for (std::size_t x = 0; x < n; ++x) {
            const double s = vertex ? (unit(rng) < 0.5 ? -1.0 : 1.0) : 2.0 * unit(rng) - 1.0;
            v[x] = s * sampling.K * bw[x];
        }
    };

    ContractionStats st;
    st.min_ratio = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    std::vector<double> v(n), u(n), diff(n), out(n);
    for (std::size_t t = 0; t < sampling.n_trials; ++t) {
        draw(v);
        draw(u);
        PolicyVector pi;
        if (unit(rng) < 1.0 / 3.0) {
            DeterministicPolicy d(n);
            for (std::size_t x = 0; x < n; ++x)
                d[x] = std::min(mcp.n_actions(x) - 1, static_cast<std::size_t>(unit(rng) * mcp.n_actions(x)));
            pi = d;
        } else {
            RandomizedPolicy r;
            r.probs.resize(n);
            for (std::size_t x = 0; x < n; ++x) {
                r.probs[x].resize(mcp.n_actions(x));
                double s = 0.0;
                for (auto& p : r.probs[x]) s += (p = unit(rng) + 1e-3);
                for (auto& p : r.probs[x]) p /= s;
            }
            pi = r;
        }
        for (std::size_t x = 0; x < n; ++x) diff[x] = v[x] - u[x];
        const double den = weighted_seminorm(diff, w_hat);
        if (den <= 0.0) {
            ++st.skipped;
            continue;
        }
        const auto rv = risk_policy(mcp, spec, pi, v);
        const auto ru = risk_policy(mcp, spec, pi, u);
        for (std::size_t x = 0; x < n; ++x) out[x] = rv[x] - ru[x];
        const double ratio = weighted_seminorm(out, w_hat) / den;
        st.max_ratio = std::max(st.max_ratio, ratio);
        st.min_ratio = std::min(st.min_ratio, ratio);
        sum += ratio;
        ++st.pairs;
    }
    if (st.pairs == 0) st.min_ratio = 0.0;
    st.mean_ratio = st.pairs ? sum / static_cast<double>(st.pairs) : 0.0;
    return st;
}

}  // namespace riskmdp
