#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "riskmdp/mcp.hpp"

namespace testsupport {

using riskmdp::FiniteMCP;

inline std::vector<double> random_row(std::mt19937_64& rng, std::size_t n, double zero_prob = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> row(n);
    double s = 0.0;
    for (auto& p : row) {
        p = u(rng) < zero_prob ? 0.0 : 0.05 + u(rng);
        s += p;
    }
    if (s == 0.0) {
        row[0] = 1.0;
        return row;
    }
    for (auto& p : row) p /= s;
    return row;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -3.0, double hi = 3.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

/// Random model with every row strictly positive unless zero_prob > 0.
inline FiniteMCP random_mcp(std::size_t n, std::size_t m, std::uint64_t seed, double zero_prob = 0.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    FiniteMCP mcp;
    mcp.n_states = n;
    mcp.actions.resize(n);
    mcp.transition.resize(n);
    mcp.cost.resize(n);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t a = 0; a < m; ++a) {
            mcp.actions[x].push_back("a" + std::to_string(a));
            mcp.transition[x].push_back(random_row(rng, n, zero_prob));
            mcp.cost[x].push_back(u(rng));
        }
    return mcp;
}

/// Single-action chain from a transition matrix and cost vector.
inline FiniteMCP chain(const std::vector<std::vector<double>>& P, const std::vector<double>& c) {
    FiniteMCP mcp;
    mcp.n_states = P.size();
    for (std::size_t x = 0; x < P.size(); ++x) {
        mcp.actions.push_back({"stay"});
        mcp.transition.push_back({P[x]});
        mcp.cost.push_back({c[x]});
    }
    return mcp;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

// Independent oracles -------------------------------------------------------

/// Worst-case expectation over g1 <= xi <= g2, sum q xi = 1 by enumerating
/// LP vertices: every coordinate but one at a bound, the free one solved
/// from the budget.
inline double density_band_vertices(const std::vector<double>& v, const std::vector<double>& q, double g1,
                                    double g2) {
    const std::size_t n = v.size();
    double best = -INFINITY;
    for (std::size_t free = 0; free < n; ++free) {
        for (std::size_t mask = 0; mask < (1u << n); ++mask) {
            if (mask & (1u << free)) continue;
            std::vector<double> xi(n);
            double mass = 0.0;
            for (std::size_t y = 0; y < n; ++y) {
                if (y == free) continue;
                xi[y] = (mask & (1u << y)) ? g2 : g1;
                mass += q[y] * xi[y];
            }
            if (q[free] > 0.0) {
                xi[free] = (1.0 - mass) / q[free];
                if (xi[free] < g1 - 1e-12 || xi[free] > g2 + 1e-12) continue;
            } else {
                xi[free] = g1;
                if (std::abs(mass - 1.0) > 1e-12) continue;
            }
            double val = 0.0;
            for (std::size_t y = 0; y < n; ++y) val += q[y] * xi[y] * v[y];
            best = std::max(best, val);
        }
    }
    return best;
}

/// Average value at risk at tail mass beta: mean of the worst beta of the law.
inline double avar_sorted_tail(const std::vector<double>& v, const std::vector<double>& q, double beta) {
    std::vector<std::size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
    double remaining = beta;
    double acc = 0.0;
    for (std::size_t i : idx) {
        const double take = std::min(q[i], remaining);
        acc += take * v[i];
        remaining -= take;
        if (remaining <= 0.0) break;
    }
    return acc / beta;
}

/// min_t t + E[(v - t)_+]/beta; the minimum sits at an atom of the law.
inline double avar_rockafellar_uryasev(const std::vector<double>& v, const std::vector<double>& q, double beta) {
    double best = INFINITY;
    for (double t : v) {
        double s = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) s += q[i] * std::max(v[i] - t, 0.0);
        best = std::min(best, t + s / beta);
    }
    return best;
}

/// max over all 2^n vertices of sum p d u / sum p d.
inline double ratio_vertex_max(const std::vector<double>& u, const std::vector<double>& p,
                               const std::vector<double>& lo, const std::vector<double>& hi) {
    const std::size_t n = u.size();
    double best = -INFINITY;
    for (std::size_t mask = 0; mask < (1u << n); ++mask) {
        double num = 0.0, den = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            const double d = (mask & (1u << y)) ? hi[y] : lo[y];
            num += p[y] * d * u[y];
            den += p[y] * d;
        }
        best = std::max(best, num / den);
    }
    return best;
}

inline std::vector<double> mat_vec(const std::vector<std::vector<double>>& P, const std::vector<double>& v) {
    std::vector<double> out(P.size(), 0.0);
    for (std::size_t i = 0; i < P.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += P[i][j] * v[j];
    return out;
}

}  // namespace testsupport
