#include "riskmdp/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "riskmdp/norms.hpp"

namespace riskmdp {

namespace {

constexpr double kTinyPositive = 1e-12;

std::vector<std::size_t> all_states(std::size_t n) {
    std::vector<std::size_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = i;
    return s;
}

void require_subset(const FiniteMCP& mcp, const std::vector<std::size_t>& subset, const char* who) {
    if (subset.empty()) throw std::invalid_argument(std::string(who) + ": subset must be nonempty");
    for (auto x : subset)
        if (x >= mcp.n_states) throw std::invalid_argument(std::string(who) + ": state out of range");
}

double log_sum_exp(const std::vector<double>& terms) {
    double m = -std::numeric_limits<double>::infinity();
    for (double t : terms) m = std::max(m, t);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double t : terms) s += std::exp(t - m);
    return m + std::log(s);
}

}  // namespace

std::vector<double> default_gamma_grid() {
    std::vector<double> g;
    for (int k = 1; k <= 19; ++k) g.push_back(k / 20.0);
    return g;
}

// Lyapunov ----------------------------------------------------------------------

LyapunovCertificate fit_drift(const FiniteMCP& mcp, const std::vector<double>& w0,
                              const std::vector<std::vector<double>>& drift, const LyapunovOptions& options) {
    if (w0.size() != mcp.n_states) throw std::invalid_argument("fit_drift: w0 length mismatch");
    for (double v : w0)
        if (!(v >= 0.0)) throw std::invalid_argument("fit_drift: w0 must be >= 0");
    const auto states = options.states.empty() ? all_states(mcp.n_states) : options.states;

    LyapunovCertificate cert;
    cert.w0 = w0;
    double best = std::numeric_limits<double>::infinity();
    for (double g : options.gamma_grid) {
        if (!(g > 0.0 && g < 1.0)) throw std::invalid_argument("fit_drift: grid values must lie in (0,1)");
        double K0 = -std::numeric_limits<double>::infinity();
        StateAction arg;
        for (auto x : states)
            for (std::size_t a = 0; a < mcp.n_actions(x); ++a) {
                const double k = drift[x][a] - g * w0[x];
                if (k > K0 || std::isnan(k)) {
                    K0 = k;
                    arg = {x, a};
                }
            }
        if (!std::isfinite(K0)) continue;
        if (!std::isfinite(best) || K0 < best - 1e-12 * (1.0 + std::abs(best))) {
            best = K0;
            cert.gamma0 = g;
            cert.worst_pair = arg;
        }
    }
    if (!std::isfinite(best)) {
        cert.note = "no grid point gives a finite K0";
        return cert;
    }
    if (best <= 0.0) {
        cert.note = "drift bound holds with K0 = 0; lifted to a tiny positive constant";
        best = kTinyPositive;
    }
    cert.K0 = best;
    cert.satisfied = best <= options.max_K0;
    if (!cert.satisfied) {
        std::ostringstream os;
        os << "K0 = " << best << " exceeds the budget " << options.max_K0;
        cert.note = os.str();
    }
    return cert;
}

LyapunovCertificate fit_lyapunov(const FiniteMCP& mcp, const RiskMapSpec& spec, const std::vector<double>& w0,
                                 const LyapunovOptions& options) {
    spec.validate();
    if (w0.size() != mcp.n_states) throw std::invalid_argument("fit_lyapunov: w0 length mismatch");
    std::vector<double> neg(w0.size());
    for (std::size_t i = 0; i < w0.size(); ++i) neg[i] = -w0[i];

    std::vector<std::vector<double>> drift(mcp.n_states);
    for (std::size_t x = 0; x < mcp.n_states; ++x) {
        drift[x].resize(mcp.n_actions(x));
        for (std::size_t a = 0; a < mcp.n_actions(x); ++a) {
            const double c = options.include_cost ? mcp.cost[x][a] : 0.0;
            double d = c + eval_risk(spec, w0, mcp.row(x, a));
            if (options.two_sided) d = std::max(d, -c - eval_risk(spec, neg, mcp.row(x, a)));
            drift[x][a] = d;
        }
    }
    return fit_drift(mcp, w0, drift, options);
}

// Minorization -------------------------------------------------------------------

DoeblinCertificate doeblin_minorization(const FiniteMCP& mcp, const std::vector<std::size_t>& subset) {
    require_subset(mcp, subset, "doeblin_minorization");
    DoeblinCertificate cert;
    cert.subset = subset;
    std::vector<double> low(mcp.n_states, std::numeric_limits<double>::infinity());
    for (auto x : subset)
        for (std::size_t a = 0; a < mcp.n_actions(x); ++a) {
            const auto row = mcp.row(x, a);
            for (std::size_t y = 0; y < mcp.n_states; ++y) low[y] = std::min(low[y], row[y]);
        }
    double alpha = 0.0;
    for (double v : low) alpha += v;
    cert.alpha = std::min(alpha, 1.0);
    if (alpha > 0.0) {
        cert.mu = low;
        for (auto& m : cert.mu) m /= alpha;
    }
    return cert;
}

LocalDoeblinCertificate local_doeblin(const FiniteMCP& mcp, const std::vector<std::size_t>& subset,
                                      const std::vector<double>& mu_C) {
    require_subset(mcp, subset, "local_doeblin");
    if (mu_C.size() != mcp.n_states) throw std::invalid_argument("local_doeblin: mu_C length mismatch");
    LocalDoeblinCertificate cert;
    cert.subset = subset;
    cert.mu_C = mu_C;
    std::vector<bool> inC(mcp.n_states, false);
    for (auto x : subset) inC[x] = true;

    double mass = 0.0;
    for (auto y : subset) mass += mu_C[y];
    if (!(mass > 0.0)) {
        cert.failure = "reference measure gives C zero mass";
        return cert;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (auto x : subset)
        for (std::size_t a = 0; a < mcp.n_actions(x); ++a) {
            const auto row = mcp.row(x, a);
            for (auto y : subset) {
                if (mu_C[y] <= 0.0) {
                    if (row[y] > 0.0 && cert.failure.empty()) {
                        std::ostringstream os;
                        os << "row (x=" << x << ",a=" << a << ") charges y=" << y
                           << " where the reference measure vanishes";
                        cert.failure = os.str();
                    }
                    continue;
                }
                const double r = row[y] / mu_C[y];
                lo = std::min(lo, r);
                hi = std::max(hi, r);
            }
        }
    cert.lambda_minus = std::isfinite(lo) ? lo : 0.0;
    cert.lambda_plus = hi;
    if (cert.failure.empty() && !(cert.lambda_minus > 0.0)) cert.failure = "lambda_minus = 0";
    cert.ok = cert.failure.empty();
    return cert;
}

LocalDoeblinCertificate local_doeblin(const FiniteMCP& mcp, const std::vector<std::size_t>& subset) {
    require_subset(mcp, subset, "local_doeblin");
    std::vector<double> mu(mcp.n_states, 0.0);
    std::size_t rows = 0;
    for (auto x : subset)
        for (std::size_t a = 0; a < mcp.n_actions(x); ++a) {
            const auto row = mcp.row(x, a);
            for (auto y : subset) mu[y] += row[y];
            ++rows;
        }
    double mass = 0.0;
    for (auto y : subset) mass += mu[y];
    if (mass > 0.0)
        for (auto y : subset) mu[y] /= mass;
    (void)rows;
    return local_doeblin(mcp, subset, mu);
}

EnvelopeMinorization entropic_envelope_minorization(const FiniteMCP& mcp, const std::vector<std::size_t>& subset,
                                                    double K, const std::vector<double>& w) {
    if (w.size() != mcp.n_states) throw std::invalid_argument("envelope_minorization: w length mismatch");
    const auto base = doeblin_minorization(mcp, subset);
    if (!base.ok()) throw std::invalid_argument("envelope_minorization: alpha_B = 0 on the subset");

    const std::size_t n = mcp.n_states;
    std::vector<double> terms;
    terms.reserve(n);
    for (std::size_t y = 0; y < n; ++y)
        if (base.mu[y] > 0.0) terms.push_back(std::log(base.mu[y]) - K * w[y]);
    const double log_num = log_sum_exp(terms);

    double log_den = -std::numeric_limits<double>::infinity();
    for (auto x : subset)
        for (std::size_t a = 0; a < mcp.n_actions(x); ++a) {
            terms.clear();
            const auto row = mcp.row(x, a);
            for (std::size_t y = 0; y < n; ++y)
                if (row[y] > 0.0) terms.push_back(std::log(row[y]) + K * w[y]);
            log_den = std::max(log_den, log_sum_exp(terms));
        }

    EnvelopeMinorization out;
    out.alpha_B = base.alpha;
    out.alpha = base.alpha * std::exp(log_num - log_den);
    out.mu.assign(n, 0.0);
    for (std::size_t y = 0; y < n; ++y)
        if (base.mu[y] > 0.0) out.mu[y] = std::exp(std::log(base.mu[y]) - K * w[y] - log_num);
    return out;
}

// Invariant ball ------------------------------------------------------------------

double invariant_bound_K(BoundKind kind, const BoundInputs& in) {
    if (!(in.K0 > 0.0)) throw std::invalid_argument("invariant_bound_K: K0 must be positive");
    switch (kind) {
        case BoundKind::coherent:
            if (!(in.alpha > 0.0)) throw std::invalid_argument("invariant_bound_K: alpha = 0");
            return in.K0 / in.alpha;
        case BoundKind::entropic:
            if (!(in.lambda_minus > 0.0)) throw std::invalid_argument("invariant_bound_K: lambda_minus = 0");
            if (!(in.lambda_plus >= in.lambda_minus))
                throw std::invalid_argument("invariant_bound_K: lambda_plus < lambda_minus");
            return in.K0 + 0.5 * std::log(2.0) + std::log(in.lambda_plus / in.lambda_minus);
        case BoundKind::shortfall:
            if (!(in.alpha > 0.0)) throw std::invalid_argument("invariant_bound_K: alpha = 0");
            if (!(in.l > 0.0 && in.L >= in.l)) throw std::invalid_argument("invariant_bound_K: need 0 < l <= L");
            return in.L * in.K0 / (in.alpha * in.l);
    }
    throw std::logic_error("invariant_bound_K: unhandled kind");
}

std::vector<std::size_t> l2_level_set(const std::vector<double>& w0, double K0, double gamma0) {
    if (!(gamma0 > 0.0 && gamma0 < 1.0)) throw std::invalid_argument("l2_level_set: gamma0 must lie in (0,1)");
    return level_set(w0, 2.0 * K0 / (1.0 - gamma0));
}

L2Result check_l2(const FiniteMCP& mcp, const RiskMapSpec& spec, const std::vector<double>& w0, double K0, double K,
                  const std::vector<std::size_t>& B0, const L2Options& options) {
    spec.validate();
    const std::size_t n = mcp.n_states;
    if (w0.size() != n) throw std::invalid_argument("check_l2: w0 length mismatch");
    L2Result res;
    res.B0 = B0;
    if (B0.empty()) {
        res.vacuous = true;
        return res;
    }
    require_subset(mcp, B0, "check_l2");

    std::vector<StateAction> rows;
    for (auto x : B0)
        for (std::size_t a = 0; a < mcp.n_actions(x); ++a) rows.push_back({x, a});

    std::vector<double> b(n), neg_b(n);
    for (std::size_t y = 0; y < n; ++y) {
        b[y] = w0[y] + K;
        neg_b[y] = -b[y];
    }
    std::vector<double> top(rows.size()), bottom(rows.size());
    for (std::size_t p = 0; p < rows.size(); ++p) {
        top[p] = eval_risk(spec, b, mcp.row(rows[p].x, rows[p].a));
        bottom[p] = eval_risk(spec, neg_b, mcp.row(rows[p].x, rows[p].a));
    }

    std::vector<std::vector<double>> vectors;
    std::vector<std::string> labels;
    auto add = [&](std::vector<double> v, std::string label) {
        vectors.push_back(std::move(v));
        labels.push_back(std::move(label));
    };
    add(b, "+(w0+K)");
    add(neg_b, "-(w0+K)");

    std::mt19937_64 rng(options.seed);
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t p = 0; p < rows.size(); ++p)
        for (std::size_t q = 0; q < rows.size(); ++q)
            if (p != q) pairs.emplace_back(p, q);
    if (pairs.size() > options.max_threshold_pairs) {
        std::shuffle(pairs.begin(), pairs.end(), rng);
        pairs.resize(options.max_threshold_pairs);
    }
    for (auto [p, q] : pairs) {
        const auto rp = mcp.row(rows[p].x, rows[p].a);
        const auto rq = mcp.row(rows[q].x, rows[q].a);
        std::vector<double> v(n);
        for (std::size_t y = 0; y < n; ++y) v[y] = rp[y] > rq[y] ? b[y] : -b[y];
        add(std::move(v), "sign pattern of row pair");
    }

    std::vector<std::size_t> order = all_states(n);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return w0[i] < w0[j]; });
    for (std::size_t k = 1; k < n; ++k) {
        std::vector<double> v(n), u(n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t y = order[i];
            v[y] = i < k ? b[y] : -b[y];
            u[y] = -v[y];
        }
        add(std::move(v), "w0-ordered threshold");
        add(std::move(u), "w0-ordered threshold");
    }

    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (std::size_t s = 0; s < options.n_samples; ++s) {
        std::vector<double> v(n);
        for (std::size_t y = 0; y < n; ++y) v[y] = unit(rng) * b[y];
        add(std::move(v), "random draw");
    }

    const auto nv = static_cast<std::ptrdiff_t>(vectors.size());
    std::vector<double> slack(vectors.size());
    std::vector<std::size_t> arg_x(vectors.size()), arg_y(vectors.size());
#pragma omp parallel for schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < nv; ++i) {
        const auto& v = vectors[static_cast<std::size_t>(i)];
        double first = std::numeric_limits<double>::infinity();
        double second = std::numeric_limits<double>::infinity();
        std::size_t ax = 0, ay = 0;
        for (std::size_t p = 0; p < rows.size(); ++p) {
            const double r = eval_risk(spec, v, mcp.row(rows[p].x, rows[p].a));
            if (top[p] - r < first) {
                first = top[p] - r;
                ax = p;
            }
            if (r - bottom[p] < second) {
                second = r - bottom[p];
                ay = p;
            }
        }
        slack[static_cast<std::size_t>(i)] = first + second - 2.0 * K0;
        arg_x[static_cast<std::size_t>(i)] = ax;
        arg_y[static_cast<std::size_t>(i)] = ay;
    }
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        if (slack[i] < res.min_slack) {
            res.min_slack = slack[i];
            res.worst_x = rows[arg_x[i]];
            res.worst_y = rows[arg_y[i]];
            res.worst_vector = labels[i];
        }
    }
    res.vectors_checked = vectors.size();
    res.passed = res.min_slack >= -kTinyPositive;
    return res;
}

DoeblinCertificate difference_minorization(const FiniteMCP& mcp, const RiskMapSpec& spec,
                                           const std::vector<std::size_t>& subset) {
    auto base = doeblin_minorization(mcp, subset);
    double factor = 0.0;
    switch (spec.kind) {
        case RiskKind::neutral: factor = 1.0; break;
        case RiskKind::density_band: factor = spec.g1; break;
        case RiskKind::mean_semideviation: factor = spec.lambda >= 0.0 ? 1.0 - spec.lambda : 0.0; break;
        case RiskKind::shortfall: factor = spec.utility.slope_lower() / spec.utility.slope_upper(); break;
        case RiskKind::entropic: factor = 0.0; break;
    }
    base.alpha *= factor;
    if (!(base.alpha > 0.0)) base.mu.clear();
    return base;
}

InvariantBall certify_invariant_ball(const FiniteMCP& mcp, const RiskMapSpec& spec, const std::vector<double>& w0,
                                     const LyapunovOptions& options) {
    InvariantBall ball;
    ball.lyapunov = fit_lyapunov(mcp, spec, w0, options);
    if (!ball.lyapunov.satisfied) {
        ball.reason = "drift condition not satisfied: " + ball.lyapunov.note;
        return ball;
    }
    const double K0 = ball.lyapunov.K0;
    ball.B0 = l2_level_set(w0, K0, ball.lyapunov.gamma0);

    if (spec.kind == RiskKind::entropic) {
        ball.method = "entropic";
        const auto ld = local_doeblin(mcp, all_states(mcp.n_states));
        ball.lambda_minus = ld.lambda_minus;
        ball.lambda_plus = ld.lambda_plus;
        if (!ld.ok) {
            ball.reason = "local Doeblin failed: " + ld.failure;
            return ball;
        }
        ball.K = invariant_bound_K(BoundKind::entropic, {K0, 0.0, ld.lambda_minus, ld.lambda_plus});
        ball.ok = true;
        return ball;
    }

    ball.method = spec.kind == RiskKind::shortfall ? "shortfall" : "coherent";
    if (ball.B0.empty()) {
        ball.K = 2.0 * K0;
        ball.ok = true;
        ball.reason = "B0 empty: the second condition holds vacuously";
        return ball;
    }
    const auto dm = difference_minorization(mcp, spec, ball.B0);
    ball.alpha = dm.alpha;
    if (!(dm.alpha > 0.0)) {
        ball.reason = "no positive minorization of the map differences on B0";
        return ball;
    }
    ball.K = invariant_bound_K(BoundKind::coherent, {K0, std::min(dm.alpha, 1.0)});
    ball.ok = true;
    return ball;
}

// Contraction ---------------------------------------------------------------------

ContractionCertificate contraction_certificate(double gamma, double K_bar, double alpha, double R,
                                               const std::vector<double>& w0, std::optional<double> alpha0) {
    if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("contraction_certificate: gamma must lie in (0,1)");
    if (!(K_bar > 0.0)) throw std::invalid_argument("contraction_certificate: K_bar must be positive");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("contraction_certificate: alpha must lie in (0,1]");
    const double threshold = 2.0 * K_bar / (1.0 - gamma);
    if (!(R > threshold)) {
        std::ostringstream os;
        os << "R too small: need R > 2 K_bar/(1-gamma) = " << threshold << ", got " << R;
        throw std::invalid_argument(os.str());
    }
    ContractionCertificate c;
    c.gamma = gamma;
    c.K_bar = K_bar;
    c.alpha = alpha;
    c.R = R;
    c.alpha0 = alpha0.value_or(0.5 * alpha);
    if (!(c.alpha0 > 0.0 && c.alpha0 < alpha))
        throw std::invalid_argument("contraction_certificate: alpha0 must lie in (0, alpha)");
    c.beta = c.alpha0 / K_bar;
    c.gamma0 = gamma + 2.0 * K_bar / R;
    c.gamma1 = (2.0 + c.beta * R * c.gamma0) / (2.0 + c.beta * R);
    c.gamma2 = std::max(1.0 - alpha + c.alpha0, gamma);
    c.alpha_bar = std::max(c.gamma1, c.gamma2);
    c.w_hat.resize(w0.size());
    for (std::size_t i = 0; i < w0.size(); ++i) c.w_hat[i] = 1.0 + c.beta * w0[i];
    return c;
}

RiskFunctional upper_envelope(const RiskMapSpec& spec, const std::vector<double>& w0, double K) {
    spec.validate();
    switch (spec.kind) {
        case RiskKind::neutral:
        case RiskKind::density_band:
            return [spec](std::span<const double> v, std::span<const double> q) { return eval_risk(spec, v, q); };
        case RiskKind::mean_semideviation:
            if (spec.lambda < 0.0)
                throw std::invalid_argument("upper_envelope: mean_semideviation with lambda < 0 is not coherent");
            return [spec](std::span<const double> v, std::span<const double> q) { return eval_risk(spec, v, q); };
        case RiskKind::entropic: {
            if (spec.lambda < 0.0) throw std::invalid_argument("upper_envelope: entropic envelope needs lambda > 0");
            if (!(K > 0.0)) throw std::invalid_argument("upper_envelope: K must be positive");
            std::vector<double> b(w0.size());
            for (std::size_t i = 0; i < w0.size(); ++i) b[i] = spec.lambda * (w0[i] + K);
            return [b](std::span<const double> v, std::span<const double> q) {
                return entropic_upper_envelope(v, q, b);
            };
        }
        case RiskKind::shortfall: {
            const double l = spec.utility.slope_lower();
            const double L = spec.utility.slope_upper();
            return [l, L](std::span<const double> v, std::span<const double> q) {
                return shortfall_upper_envelope(v, q, l, L);
            };
        }
    }
    throw std::logic_error("upper_envelope: unhandled kind");
}

ContractionSearch certify_contraction(const FiniteMCP& mcp, const RiskMapSpec& spec, const std::vector<double>& w0,
                                      double K, const ContractionSearchOptions& options) {
    require_valid(mcp);
    if (w0.size() != mcp.n_states) throw std::invalid_argument("certify_contraction: w0 length mismatch");
    ContractionSearch out;
    const auto env = upper_envelope(spec, w0, K);

    std::vector<std::vector<double>> drift(mcp.n_states);
    for (std::size_t x = 0; x < mcp.n_states; ++x) {
        drift[x].resize(mcp.n_actions(x));
        for (std::size_t a = 0; a < mcp.n_actions(x); ++a) drift[x][a] = env(w0, mcp.row(x, a));
    }

    std::vector<double> w(w0.size());
    for (std::size_t i = 0; i < w0.size(); ++i) w[i] = 1.0 + w0[i] / K;

    // envelope minorization constant on a level set, cached by set size (level sets are nested)
    std::map<std::size_t, std::pair<double, std::vector<double>>> cache;
    auto minorize = [&](const std::vector<std::size_t>& B) -> const std::pair<double, std::vector<double>>& {
        auto it = cache.find(B.size());
        if (it != cache.end()) return it->second;
        std::pair<double, std::vector<double>> val{0.0, {}};
        const auto base = doeblin_minorization(mcp, B);
        if (base.ok()) {
            switch (spec.kind) {
                case RiskKind::neutral: val = {base.alpha, base.mu}; break;
                case RiskKind::density_band: val = {spec.g1 * base.alpha, base.mu}; break;
                case RiskKind::mean_semideviation: val = {(1.0 - spec.lambda) * base.alpha, base.mu}; break;
                case RiskKind::shortfall:
                    val = {spec.utility.slope_lower() / spec.utility.slope_upper() * base.alpha, base.mu};
                    break;
                case RiskKind::entropic: {
                    auto em = entropic_envelope_minorization(mcp, B, spec.lambda * K, w);
                    val = {em.alpha, std::move(em.mu)};
                    break;
                }
            }
        }
        return cache.emplace(B.size(), std::move(val)).first->second;
    };

    const double w0max = *std::max_element(w0.begin(), w0.end());
    double best = std::numeric_limits<double>::infinity();
    for (double g : options.gamma_grid) {
        LyapunovOptions lo;
        lo.gamma_grid = {g};
        auto fit = fit_drift(mcp, w0, drift, lo);
        if (!fit.satisfied) continue;
        const double K_bar = std::max(fit.K0, 1e-9);
        const double threshold = 2.0 * K_bar / (1.0 - g);
        std::vector<double> levels;
        for (double f : {1.05, 1.25, 1.5, 2.0, 3.0, 5.0, 10.0}) levels.push_back(threshold * f);
        if (w0max * 1.0001 + 1e-9 > threshold) levels.push_back(w0max * 1.0001 + 1e-9);
        for (double R : levels) {
            const auto B = level_set(w0, R);
            if (B.empty()) continue;
            const auto& [alpha_raw, mu] = minorize(B);
            const double alpha = std::min(alpha_raw, 1.0);
            if (!(alpha > 0.0)) continue;
            auto cert = contraction_certificate(g, K_bar, alpha, R, w0, options.alpha0_fraction * alpha);
            if (cert.alpha_bar < best) {
                best = cert.alpha_bar;
                fit.K0 = K_bar;
                out.envelope_drift = fit;
                out.B = B;
                out.mu = mu;
                out.certificate = std::move(cert);
                out.satisfied = true;
            }
        }
    }
    if (!out.satisfied) out.reason = "no (gamma, R) pair gives a positive envelope minorization";
    return out;
}

}  // namespace riskmdp
