#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "riskmdp/mcp.hpp"
#include "riskmdp/risk_map.hpp"

namespace riskmdp {

struct StateAction {
    std::size_t x = 0;
    std::size_t a = 0;
};

/// {0.05, 0.10, ..., 0.95}
std::vector<double> default_gamma_grid();

// Lyapunov drift ----------------------------------------------------------------

struct LyapunovOptions {
    std::vector<double> gamma_grid = default_gamma_grid();
    bool include_cost = true;  // fit c + R(w0); false fits R(w0) alone
    bool two_sided = true;     // also bound -c - R(-w0)
    std::vector<std::size_t> states;  // rows to fit on; all states when empty
    double max_K0 = std::numeric_limits<double>::infinity();
};

struct LyapunovCertificate {
    std::vector<double> w0;
    double gamma0 = 0.0;
    double K0 = 0.0;
    bool satisfied = false;
    StateAction worst_pair;
    std::string note;
};

/// Grid fit of max(T(w0), -T(-w0)) <= gamma0 w0 + K0. For each grid gamma0
/// the smallest K0 is the max over (x,a) of the left side minus gamma0 w0(x);
/// the grid point with the smallest K0 wins, ties going to the smaller gamma0.
/// A fitted K0 <= 0 is lifted to a tiny positive value since the inequality
/// then holds for every positive K0.
LyapunovCertificate fit_lyapunov(const FiniteMCP& mcp, const RiskMapSpec& spec, const std::vector<double>& w0,
                                 const LyapunovOptions& options = {});

/// Same fit on precomputed drift values d[x][a] (for instance an upper envelope of w0).
LyapunovCertificate fit_drift(const FiniteMCP& mcp, const std::vector<double>& w0,
                              const std::vector<std::vector<double>>& drift, const LyapunovOptions& options = {});

// Minorization -------------------------------------------------------------------

struct DoeblinCertificate {
    std::vector<std::size_t> subset;
    double alpha = 0.0;
    std::vector<double> mu;  // empty when alpha == 0
    double R = std::numeric_limits<double>::infinity();
    bool ok() const { return alpha > 0.0; }
};

/// Column-wise minimum of the rows Q[x][a] over x in subset.
DoeblinCertificate doeblin_minorization(const FiniteMCP& mcp, const std::vector<std::size_t>& subset);

struct LocalDoeblinCertificate {
    std::vector<std::size_t> subset;
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    std::vector<double> mu_C;  // full-length, zero outside the subset
    bool ok = false;
    std::string failure;
};

/// mu_C is the normalized average of the rows restricted to C.
LocalDoeblinCertificate local_doeblin(const FiniteMCP& mcp, const std::vector<std::size_t>& subset);
/// Sandwich ratios against a caller-supplied reference measure on C.
LocalDoeblinCertificate local_doeblin(const FiniteMCP& mcp, const std::vector<std::size_t>& subset,
                                      const std::vector<double>& mu_C);

struct EnvelopeMinorization {
    double alpha = 0.0;
    std::vector<double> mu;
    double alpha_B = 0.0;
};

/// alpha = alpha_B mu_B[e^{-Kw}] / max_{x in B, a} Q[e^{Kw}], d mu ∝ e^{-Kw} d mu_B.
EnvelopeMinorization entropic_envelope_minorization(const FiniteMCP& mcp, const std::vector<std::size_t>& subset,
                                                    double K, const std::vector<double>& w);

// Invariant ball ------------------------------------------------------------------

enum class BoundKind { coherent, entropic, shortfall };

struct BoundInputs {
    double K0 = 0.0;
    double alpha = 0.0;
    double lambda_minus = 0.0;
    double lambda_plus = 0.0;
    double l = 1.0;
    double L = 1.0;
};

/// coherent: K0/alpha; entropic: K0 + ln2/2 + ln(lambda+/lambda-); shortfall: L K0/(alpha l).
double invariant_bound_K(BoundKind kind, const BoundInputs& in);

struct L2Options {
    std::size_t n_samples = 10000;
    std::size_t max_threshold_pairs = 2000;
    std::uint64_t seed = 99;
};

struct L2Result {
    bool passed = true;
    bool vacuous = false;
    double min_slack = std::numeric_limits<double>::infinity();
    std::size_t vectors_checked = 0;
    StateAction worst_x;
    StateAction worst_y;
    std::string worst_vector;  // which family produced the minimum
    std::vector<std::size_t> B0;
};

/// Sampled check of
///   R_{x,a}(w0+K) - R_{x,a}(v) + R_{y,b}(v) - R_{y,b}(-w0-K) >= 2 K0
/// over x, y in B0 = {w0 <= 2K0/(1-gamma0)} and |v| <= w0 + K. The left side
/// separates into a min over (x,a) plus a min over (y,b), so each v costs one
/// pass over the B0 rows. Random draws are combined with the extreme vectors
/// +-(w0+K), sign patterns that favour one row over another, and w0-ordered
/// thresholds. A pass is a sampled certificate, not a proof.
L2Result check_l2(const FiniteMCP& mcp, const RiskMapSpec& spec, const std::vector<double>& w0, double K0, double K,
                  const std::vector<std::size_t>& B0, const L2Options& options = {});

/// Level set {w0 <= 2K0/(1-gamma0)}.
std::vector<std::size_t> l2_level_set(const std::vector<double>& w0, double K0, double gamma0);

/// Lower constant of the map differences on a set B: R(v) - R(u) >= alpha mu[v - u]
/// for v >= u and x in B. neutral: alpha_B; density band: g1 alpha_B;
/// mean-semideviation (lambda >= 0): (1 - lambda) alpha_B; shortfall: (l/L) alpha_B.
/// Returns alpha = 0 for kinds without such a bound (entropic, negative lambda).
DoeblinCertificate difference_minorization(const FiniteMCP& mcp, const RiskMapSpec& spec,
                                           const std::vector<std::size_t>& subset);

struct InvariantBall {
    bool ok = false;
    std::string reason;
    std::string method;
    LyapunovCertificate lyapunov;
    std::vector<std::size_t> B0;
    double K = 0.0;
    double alpha = 0.0;         // difference minorization on B0 (non-entropic kinds)
    double lambda_minus = 0.0;  // local Doeblin over all states (entropic)
    double lambda_plus = 0.0;
};

/// Fits the drift condition for w0 and derives the invariant-ball bound K.
/// Entropic maps use the local Doeblin sandwich over every state, for which
/// the truncation term of the general argument vanishes on a finite model.
/// Other kinds use K = K0/alpha with the difference minorization on B0.
InvariantBall certify_invariant_ball(const FiniteMCP& mcp, const RiskMapSpec& spec, const std::vector<double>& w0,
                                     const LyapunovOptions& options = {});

// Contraction ---------------------------------------------------------------------

struct ContractionCertificate {
    double gamma = 0.0;
    double K_bar = 0.0;
    double alpha = 0.0;
    double R = 0.0;
    double alpha0 = 0.0;
    double beta = 0.0;
    double gamma0 = 0.0;
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double alpha_bar = 0.0;
    std::vector<double> w_hat;
};

/// Constants of the weighted-seminorm contraction. alpha0 defaults to alpha/2.
/// Throws std::invalid_argument("R too small ...") unless R > 2 K_bar/(1-gamma).
ContractionCertificate contraction_certificate(double gamma, double K_bar, double alpha, double R,
                                               const std::vector<double>& w0,
                                               std::optional<double> alpha0 = std::nullopt);

/// Coherent upper envelope of `spec` valid on the ball ||v||_{s,w} <= K with
/// w = 1 + w0/K. Coherent maps are their own envelope.
RiskFunctional upper_envelope(const RiskMapSpec& spec, const std::vector<double>& w0, double K);

struct ContractionSearchOptions {
    std::vector<double> gamma_grid = default_gamma_grid();
    double alpha0_fraction = 0.5;
};

struct ContractionSearch {
    bool satisfied = false;
    std::string reason;
    LyapunovCertificate envelope_drift;  // the UE1 fit behind the chosen gamma
    std::vector<std::size_t> B;          // level set used for UE2
    std::vector<double> mu;
    ContractionCertificate certificate;
};

/// Fits the envelope drift and the envelope minorization on a scan of levels
/// R and keeps the smallest alpha_bar. K is the invariant-ball bound (only the
/// entropic envelope depends on it).
ContractionSearch certify_contraction(const FiniteMCP& mcp, const RiskMapSpec& spec, const std::vector<double>& w0,
                                      double K, const ContractionSearchOptions& options = {});

}  // namespace riskmdp
