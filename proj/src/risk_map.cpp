#include "riskmdp/risk_map.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace riskmdp {

std::string_view to_string(RiskKind kind) {
    switch (kind) {
        case RiskKind::neutral: return "neutral";
        case RiskKind::entropic: return "entropic";
        case RiskKind::density_band: return "density_band";
        case RiskKind::mean_semideviation: return "mean_semideviation";
        case RiskKind::shortfall: return "shortfall";
    }
    return "unknown";
}

RiskKind risk_kind_from_string(std::string_view name) {
    for (auto k : {RiskKind::neutral, RiskKind::entropic, RiskKind::density_band, RiskKind::mean_semideviation,
                   RiskKind::shortfall})
        if (to_string(k) == name) return k;
    throw std::invalid_argument("unknown risk kind: " + std::string(name));
}

// Utility ---------------------------------------------------------------------

PiecewiseLinearUtility::PiecewiseLinearUtility() : slopes_{1.0} {}

PiecewiseLinearUtility::PiecewiseLinearUtility(std::vector<double> breakpoints, std::vector<double> slopes)
    : breakpoints_(std::move(breakpoints)), slopes_(std::move(slopes)) {
    if (slopes_.size() != breakpoints_.size() + 1)
        throw std::invalid_argument("utility: need exactly one more slope than breakpoints");
    for (std::size_t i = 1; i < breakpoints_.size(); ++i)
        if (!(breakpoints_[i] > breakpoints_[i - 1]))
            throw std::invalid_argument("utility: breakpoints must be strictly increasing");
    for (double s : slopes_)
        if (!(s > 0.0) || !std::isfinite(s)) throw std::invalid_argument("utility: non-monotone utility (slopes must be positive)");
    slope_lower_ = *std::min_element(slopes_.begin(), slopes_.end());
    slope_upper_ = *std::max_element(slopes_.begin(), slopes_.end());

    // signed integral of the slope from 0 to each breakpoint
    auto integral_to = [&](double x) {
        double total = 0.0;
        const double a = std::min(0.0, x);
        const double b = std::max(0.0, x);
        double left = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < slopes_.size(); ++i) {
            const double right = i < breakpoints_.size() ? breakpoints_[i] : std::numeric_limits<double>::infinity();
            const double lo = std::max(left, a);
            const double hi = std::min(right, b);
            if (hi > lo) total += slopes_[i] * (hi - lo);
            left = right;
        }
        return x >= 0.0 ? total : -total;
    };
    values_.reserve(breakpoints_.size());
    for (double b : breakpoints_) values_.push_back(integral_to(b));
}

double PiecewiseLinearUtility::operator()(double x) const {
    if (breakpoints_.empty()) return slopes_[0] * x;
    const auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), x);
    const auto i = static_cast<std::size_t>(it - breakpoints_.begin());
    if (i == 0) return values_[0] + slopes_[0] * (x - breakpoints_[0]);
    return values_[i - 1] + slopes_[i] * (x - breakpoints_[i - 1]);
}

// Spec ------------------------------------------------------------------------

void RiskMapSpec::validate() const {
    switch (kind) {
        case RiskKind::neutral: return;
        case RiskKind::entropic:
            if (lambda == 0.0 || !std::isfinite(lambda))
                throw std::invalid_argument("entropic: lambda must be finite and nonzero (use neutral)");
            return;
        case RiskKind::density_band:
            if (!(g1 >= 0.0 && g1 <= 1.0 && g2 >= 1.0 && std::isfinite(g2)))
                throw std::invalid_argument("density_band: need 0 <= g1 <= 1 <= g2 < inf");
            return;
        case RiskKind::mean_semideviation:
            if (!(lambda >= -1.0 && lambda <= 1.0)) throw std::invalid_argument("mean_semideviation: lambda in [-1,1]");
            if (!(r >= 1.0) || !std::isfinite(r)) throw std::invalid_argument("mean_semideviation: r >= 1");
            return;
        case RiskKind::shortfall:
            if (!(shortfall_tol > 0.0)) throw std::invalid_argument("shortfall: tol must be positive");
            return;
    }
}

RiskMapSpec RiskMapSpec::neutral() { return RiskMapSpec{}; }

RiskMapSpec RiskMapSpec::entropic(double lambda) {
    RiskMapSpec s;
    s.kind = RiskKind::entropic;
    s.lambda = lambda;
    return s;
}

RiskMapSpec RiskMapSpec::density_band(double g1, double g2) {
    RiskMapSpec s;
    s.kind = RiskKind::density_band;
    s.g1 = g1;
    s.g2 = g2;
    return s;
}

RiskMapSpec RiskMapSpec::mean_semideviation(double lambda, double r) {
    RiskMapSpec s;
    s.kind = RiskKind::mean_semideviation;
    s.lambda = lambda;
    s.r = r;
    return s;
}

RiskMapSpec RiskMapSpec::shortfall(PiecewiseLinearUtility u) {
    RiskMapSpec s;
    s.kind = RiskKind::shortfall;
    s.utility = std::move(u);
    return s;
}

// Evaluators ------------------------------------------------------------------

double expectation(std::span<const double> v, std::span<const double> q) {
    double s = 0.0;
    for (std::size_t y = 0; y < q.size(); ++y)
        if (q[y] != 0.0) s += q[y] * v[y];
    return s;
}

double entropic(std::span<const double> v, std::span<const double> q, double lambda) {
    if (lambda == 0.0) throw std::invalid_argument("entropic: lambda = 0");
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < q.size(); ++y)
        if (q[y] > 0.0) shift = std::max(shift, lambda * v[y]);
    double s = 0.0;
    for (std::size_t y = 0; y < q.size(); ++y)
        if (q[y] > 0.0) s += q[y] * std::exp(lambda * v[y] - shift);
    return (shift + std::log(s)) / lambda;
}

double density_band(std::span<const double> v, std::span<const double> q, double g1, double g2) {
    if (!(g1 >= 0.0 && g1 <= 1.0 && g2 >= 1.0 && std::isfinite(g2)))
        throw std::invalid_argument("density_band: need 0 <= g1 <= 1 <= g2 < inf");
    std::vector<std::size_t> order;
    order.reserve(q.size());
    double total = 0.0;
    double base = 0.0;
    for (std::size_t y = 0; y < q.size(); ++y) {
        if (q[y] <= 0.0) continue;
        order.push_back(y);
        total += q[y];
        base += q[y] * v[y];
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return v[a] != v[b] ? v[a] > v[b] : a < b;
    });
    double value = g1 * base;
    double budget = std::max(0.0, 1.0 - g1 * total);
    for (std::size_t y : order) {
        if (budget <= 0.0) break;
        const double take = std::min((g2 - g1) * q[y], budget);
        value += take * v[y];
        budget -= take;
    }
    return value;
}

double mean_semideviation(std::span<const double> v, std::span<const double> q, double lambda, double r) {
    if (!(lambda >= -1.0 && lambda <= 1.0) || !(r >= 1.0))
        throw std::invalid_argument("mean_semideviation: parameter out of range");
    const double m = expectation(v, q);
    if (lambda == 0.0) return m;
    double acc = 0.0;
    for (std::size_t y = 0; y < q.size(); ++y) {
        if (q[y] <= 0.0) continue;
        const double excess = v[y] - m;
        if (excess > 0.0) acc += q[y] * (r == 1.0 ? excess : std::pow(excess, r));
    }
    const double dev = r == 1.0 ? acc : std::pow(acc, 1.0 / r);
    return m + lambda * dev;
}

double shortfall(std::span<const double> v, std::span<const double> q, const PiecewiseLinearUtility& u, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("shortfall: tol must be positive");
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t y = 0; y < q.size(); ++y) {
        if (q[y] <= 0.0) continue;
        lo = std::min(lo, v[y]);
        hi = std::max(hi, v[y]);
    }
    if (lo == hi) return lo;
    auto g = [&](double m) {
        double s = 0.0;
        for (std::size_t y = 0; y < q.size(); ++y)
            if (q[y] > 0.0) s += q[y] * u(v[y] - m);
        return s;
    };
    // g is strictly decreasing with g(lo) >= 0 >= g(hi)
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double gm = g(mid);
        if (gm == 0.0) return mid;
        if (gm > 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double eval_risk(const RiskMapSpec& spec, std::span<const double> v, std::span<const double> q) {
    switch (spec.kind) {
        case RiskKind::neutral: return expectation(v, q);
        case RiskKind::entropic: return entropic(v, q, spec.lambda);
        case RiskKind::density_band: return density_band(v, q, spec.g1, spec.g2);
        case RiskKind::mean_semideviation: return mean_semideviation(v, q, spec.lambda, spec.r);
        case RiskKind::shortfall: return shortfall(v, q, spec.utility, spec.shortfall_tol);
    }
    throw std::logic_error("eval_risk: unhandled kind");
}

// Envelopes -------------------------------------------------------------------

RatioMaximum maximize_ratio_over_box(std::span<const double> u, std::span<const double> p,
                                     std::span<const double> lo, std::span<const double> hi) {
    const std::size_t n = u.size();
    if (p.size() != n || lo.size() != n || hi.size() != n)
        throw std::invalid_argument("maximize_ratio_over_box: length mismatch");
    for (std::size_t y = 0; y < n; ++y) {
        if (!(lo[y] > 0.0)) throw std::invalid_argument("maximize_ratio_over_box: lower bound must be positive");
        if (!(hi[y] >= lo[y])) throw std::invalid_argument("maximize_ratio_over_box: hi < lo");
    }

    RatioMaximum out;
    out.d_star.assign(lo.begin(), lo.end());
    auto ratio = [&](const std::vector<double>& d) {
        double num = 0.0, den = 0.0;
        for (std::size_t y = 0; y < n; ++y) {
            if (p[y] <= 0.0) continue;
            num += p[y] * d[y] * u[y];
            den += p[y] * d[y];
        }
        return num / den;
    };
    double theta = ratio(out.d_star);
    std::vector<double> d(n);
    for (int it = 1; it <= 10000; ++it) {
        for (std::size_t y = 0; y < n; ++y) d[y] = u[y] > theta ? hi[y] : lo[y];
        const double next = ratio(d);
        out.iterations = it;
        const bool same_vertex = d == out.d_star;
        out.d_star = d;
        const double delta = next - theta;
        theta = next;
        if (same_vertex || std::abs(delta) < 1e-12) break;
    }
    out.value = theta;
    return out;
}

double entropic_upper_envelope(std::span<const double> u, std::span<const double> q, std::span<const double> b) {
    if (b.size() != u.size()) throw std::invalid_argument("entropic_upper_envelope: length mismatch");
    std::vector<double> lo(b.size()), hi(b.size());
    for (std::size_t y = 0; y < b.size(); ++y) {
        if (!(b[y] >= 0.0)) throw std::invalid_argument("entropic_upper_envelope: bound must be >= 0");
        if (b[y] > 700.0) throw std::overflow_error("entropic_upper_envelope: exponent bound above 700");
        lo[y] = std::exp(-b[y]);
        hi[y] = std::exp(b[y]);
    }
    return maximize_ratio_over_box(u, q, lo, hi).value;
}

double shortfall_upper_envelope(std::span<const double> u, std::span<const double> q, double l, double L) {
    if (!(l > 0.0 && L >= l && std::isfinite(L)))
        throw std::invalid_argument("shortfall_upper_envelope: need 0 < l <= L");
    std::vector<double> lo(u.size(), l), hi(u.size(), L);
    return maximize_ratio_over_box(u, q, lo, hi).value;
}

// Axioms ----------------------------------------------------------------------

bool AxiomReport::ok() const {
    return std::all_of(axioms.begin(), axioms.end(), [](const AxiomResult& a) { return !a.claimed || a.passed; });
}

const AxiomResult& AxiomReport::get(std::string_view name) const {
    for (const auto& a : axioms)
        if (a.name == name) return a;
    throw std::out_of_range("no axiom named " + std::string(name));
}

AxiomClaims claims_for(const RiskMapSpec& spec) {
    switch (spec.kind) {
        case RiskKind::neutral:
        case RiskKind::density_band: return {true, true, true};
        case RiskKind::entropic: return {spec.lambda > 0.0, false, false};
        case RiskKind::mean_semideviation: {
            const bool averse = spec.lambda >= 0.0;
            return {averse, true, averse};
        }
        case RiskKind::shortfall: return {};
    }
    return {};
}

namespace {

std::string describe(const char* label, std::span<const double> v) {
    std::ostringstream os;
    os.precision(6);
    os << label << "=(";
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
    os << ")";
    return os.str();
}

struct AxiomTally {
    AxiomResult result;

    void record(double violation, double tol, const std::function<std::string()>& witness) {
        ++result.trials;
        if (violation > result.worst_violation) result.worst_violation = violation;
        if (violation > tol && result.passed) {
            result.passed = false;
            result.witness = witness();
        }
    }
};

}  // namespace

AxiomReport check_risk_axioms(const RiskFunctional& risk, AxiomClaims claims, const FiniteMCP& mcp,
                              std::size_t n_samples, std::uint64_t seed) {
    if (n_samples == 0) throw std::invalid_argument("check_risk_axioms: n_samples must be >= 1");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t x = 0; x < mcp.n_states; ++x)
        for (std::size_t a = 0; a < mcp.n_actions(x); ++a) pairs.emplace_back(x, a);
    if (pairs.empty()) throw std::invalid_argument("check_risk_axioms: model has no state-action pairs");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, pairs.size() - 1);
    std::uniform_real_distribution<double> value(-3.0, 3.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    auto tally = [](const char* name, bool claimed) {
        AxiomTally t;
        t.result.name = name;
        t.result.claimed = claimed;
        return t;
    };
    AxiomTally mono = tally("monotonicity", true), trans = tally("translation_invariance", true),
               central = tally("centralization", true), convex = tally("convexity", claims.convex),
               homog = tally("homogeneity", claims.homogeneous), subadd = tally("subadditivity", claims.subadditive);

    const std::size_t n = mcp.n_states;
    std::vector<double> v(n), u(n), tmp(n), zero(n, 0.0);
    for (std::size_t s = 0; s < n_samples; ++s) {
        const auto [x, a] = pairs[pick(rng)];
        const auto q = mcp.row(x, a);
        for (std::size_t y = 0; y < n; ++y) {
            v[y] = value(rng);
            u[y] = value(rng);
        }
        const double rv = risk(v, q);
        const double ru = risk(u, q);
        auto where = [&, x = x, a = a](const std::string& extra) {
            std::ostringstream os;
            os << "(x=" << x << ",a=" << a << ") " << describe("v", v) << " " << extra;
            return os.str();
        };

        // v <= v + nonnegative bump
        for (std::size_t y = 0; y < n; ++y) tmp[y] = v[y] + (unit(rng) < 0.3 ? 0.0 : 2.0 * unit(rng));
        const double rbig = risk(tmp, q);
        mono.record(rv - rbig, kAxiomTolerance, [&] { return where(describe("u", tmp)); });

        const double c = value(rng) * 2.0;
        for (std::size_t y = 0; y < n; ++y) tmp[y] = v[y] + c;
        const double rshift = risk(tmp, q);
        trans.record(std::abs(rshift - rv - c), kAxiomTolerance * (1.0 + std::abs(rv) + std::abs(c)),
                     [&] { return where("c=" + std::to_string(c)); });

        const double r0 = risk(zero, q);
        central.record(std::abs(r0), kAxiomTolerance, [&] { return where("R(0)=" + std::to_string(r0)); });

        const double alpha = unit(rng);
        for (std::size_t y = 0; y < n; ++y) tmp[y] = alpha * v[y] + (1.0 - alpha) * u[y];
        const double rmix = risk(tmp, q);
        convex.record(rmix - alpha * rv - (1.0 - alpha) * ru, kAxiomTolerance * (1.0 + std::abs(rmix)), [&] {
            return where(describe("u", u) + " alpha=" + std::to_string(alpha));
        });

        const double t = 0.1 + 2.9 * unit(rng);
        for (std::size_t y = 0; y < n; ++y) tmp[y] = t * v[y];
        const double rscaled = risk(tmp, q);
        homog.record(std::abs(rscaled - t * rv), kAxiomTolerance * (1.0 + std::abs(t * rv)), [&] {
            std::ostringstream os;
            os << "t=" << t << " R(tv)=" << rscaled << " tR(v)=" << t * rv;
            return where(os.str());
        });

        for (std::size_t y = 0; y < n; ++y) tmp[y] = v[y] + u[y];
        const double rsum = risk(tmp, q);
        subadd.record(rsum - rv - ru, kAxiomTolerance * (1.0 + std::abs(rsum)),
                      [&] { return where(describe("u", u)); });
    }

    AxiomReport report;
    for (auto* t : {&mono, &trans, &central, &convex, &homog, &subadd}) report.axioms.push_back(t->result);
    return report;
}

AxiomReport check_risk_axioms(const RiskMapSpec& spec, const FiniteMCP& mcp, std::size_t n_samples,
                              std::uint64_t seed) {
    spec.validate();
    RiskFunctional fn = [spec](std::span<const double> v, std::span<const double> q) { return eval_risk(spec, v, q); };
    return check_risk_axioms(fn, claims_for(spec), mcp, n_samples, seed);
}

}  // namespace riskmdp
