#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "riskmdp/mcp.hpp"

namespace riskmdp {

enum class RiskKind { neutral, entropic, density_band, mean_semideviation, shortfall };

std::string_view to_string(RiskKind kind);
RiskKind risk_kind_from_string(std::string_view name);

/// Increasing piecewise-linear utility with u(0) = 0.
///
/// `slopes[i]` applies on the i-th interval cut by `breakpoints`
/// (so slopes.size() == breakpoints.size() + 1). The function is the integral
/// of the slope from 0, which pins u(0) = 0 wherever the breakpoints sit.
class PiecewiseLinearUtility {
public:
    PiecewiseLinearUtility();  // identity
    PiecewiseLinearUtility(std::vector<double> breakpoints, std::vector<double> slopes);

    double operator()(double x) const;
    double slope_lower() const { return slope_lower_; }
    double slope_upper() const { return slope_upper_; }
    const std::vector<double>& breakpoints() const { return breakpoints_; }
    const std::vector<double>& slopes() const { return slopes_; }

private:
    std::vector<double> breakpoints_;
    std::vector<double> slopes_;
    std::vector<double> values_;  // u at each breakpoint
    double slope_lower_ = 1.0;
    double slope_upper_ = 1.0;
};

/// Tagged choice of one-step risk map with its parameters. Only the fields
/// relevant to `kind` are read.
struct RiskMapSpec {
    RiskKind kind = RiskKind::neutral;
    double lambda = 1.0;  // entropic sensitivity, or semideviation trade-off in [-1, 1]
    double r = 1.0;       // semideviation order
    double g1 = 0.0;      // density band lower bound
    double g2 = 1.0;      // density band upper bound
    PiecewiseLinearUtility utility;
    double shortfall_tol = 1e-13;

    void validate() const;

    static RiskMapSpec neutral();
    static RiskMapSpec entropic(double lambda);
    static RiskMapSpec density_band(double g1, double g2);
    static RiskMapSpec mean_semideviation(double lambda, double r);
    static RiskMapSpec shortfall(PiecewiseLinearUtility u);
};

double expectation(std::span<const double> v, std::span<const double> q);

/// Kind-specific evaluation of R(v) under the probability row q.
double eval_risk(const RiskMapSpec& spec, std::span<const double> v, std::span<const double> q);

/// (1/lambda) ln sum_y q_y exp(lambda v_y), evaluated with a max shift over the support of q.
double entropic(std::span<const double> v, std::span<const double> q, double lambda);

/// Worst-case expectation over densities g1 <= xi <= g2 with E_q[xi] = 1.
double density_band(std::span<const double> v, std::span<const double> q, double g1, double g2);

/// E_q[v] + lambda (E_q[(v - E_q v)_+^r])^{1/r}.
double mean_semideviation(std::span<const double> v, std::span<const double> q, double lambda, double r);

/// Root m of sum_y q_y u(v_y - m) = 0, found by bisection on [min v, max v].
double shortfall(std::span<const double> v, std::span<const double> q, const PiecewiseLinearUtility& u,
                 double tol = 1e-13);

struct RatioMaximum {
    double value = 0.0;
    std::vector<double> d_star;
    int iterations = 0;
};

/// Maximizes sum p d u / sum p d over lo <= d <= hi (lo > 0) by Dinkelbach
/// iteration on threshold vertices. Entries with u == theta take the lower bound.
RatioMaximum maximize_ratio_over_box(std::span<const double> u, std::span<const double> p,
                                     std::span<const double> lo, std::span<const double> hi);

/// sup over |f| <= b of E_q[e^f u] / E_q[e^f].
double entropic_upper_envelope(std::span<const double> u, std::span<const double> q, std::span<const double> b);

/// sup over l <= delta <= L of E_q[delta u] / E_q[delta].
double shortfall_upper_envelope(std::span<const double> u, std::span<const double> q, double l, double L);

// Axiom checks --------------------------------------------------------------

using RiskFunctional = std::function<double(std::span<const double>, std::span<const double>)>;

struct AxiomClaims {
    bool convex = false;
    bool homogeneous = false;
    bool subadditive = false;
};

AxiomClaims claims_for(const RiskMapSpec& spec);

struct AxiomResult {
    std::string name;
    bool claimed = true;
    bool passed = true;
    std::size_t trials = 0;
    double worst_violation = 0.0;
    std::string witness;
};

struct AxiomReport {
    std::vector<AxiomResult> axioms;

    /// All claimed axioms passed.
    bool ok() const;
    const AxiomResult& get(std::string_view name) const;
};

inline constexpr double kAxiomTolerance = 1e-9;

/// Samples rows of `mcp` and value vectors, then tests monotonicity,
/// translation invariance, centralization, convexity, positive homogeneity
/// and subadditivity. Every axiom is tested; only the claimed ones count
/// towards `ok()`. Failures carry a witness.
AxiomReport check_risk_axioms(const RiskFunctional& risk, AxiomClaims claims, const FiniteMCP& mcp,
                              std::size_t n_samples, std::uint64_t seed = 12345);
AxiomReport check_risk_axioms(const RiskMapSpec& spec, const FiniteMCP& mcp, std::size_t n_samples,
                              std::uint64_t seed = 12345);

}  // namespace riskmdp
