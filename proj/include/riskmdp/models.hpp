#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "riskmdp/mcp.hpp"

namespace riskmdp {

// Built-in chains -------------------------------------------------------------

struct BuiltinParams {
    std::size_t n = 5;
    std::size_t m = 2;
    std::uint64_t seed = 1;
};

/// uniform2, biased2, ring (n >= 3) or random_seeded (n, m, seed).
FiniteMCP builtin_chain(const std::string& name, const BuiltinParams& params = {});

// Discretized diffusion -------------------------------------------------------

using Matrix = std::vector<std::vector<double>>;  // row-major, d x d

struct DriftAction {
    std::string label;
    std::vector<double> offset;  // constant part of b(x,a)
    Matrix gain;                 // optional linear part, b = offset + gain x
};

/// X' = A X + b(X, a) + D W with standard Gaussian W.
struct DiffusionSpec {
    std::size_t dim = 1;
    Matrix A;
    Matrix D;
    std::vector<DriftAction> actions;
    double drift_bound = std::numeric_limits<double>::infinity();  // B: ||b||^2 <= B by clipping

    void validate() const;
    /// Largest eigenvalue of A^T A.
    double gamma_tilde() const;
    /// Smallest L with L^{-1} <= eig(D^T D) <= L.
    double ellipticity() const;
};

struct GridSpec {
    std::size_t points = 201;  // per axis, odd
    double extent = 5.0;       // nodes span [-extent, extent]

    void validate() const;
};

struct DiffusionModel {
    FiniteMCP mcp;  // cost tensor zero until attach_cost
    std::vector<double> lost_mass;  // per state, worst action: Gaussian mass not captured by the grid
    double gamma_tilde = 0.0;
    double L = 1.0;
    double cell_volume = 1.0;

    /// States whose rows lost at most `tol` probability to truncation.
    std::vector<std::size_t> interior(double tol = 1e-3) const;
};

/// Gaussian density at grid nodes times the cell volume, rows renormalized.
DiffusionModel discretize_diffusion(const DiffusionSpec& spec, const GridSpec& grid);

/// Unnormalized row weight of node y for state x and action a (before renormalization).
double diffusion_cell_weight(const DiffusionSpec& spec, const GridSpec& grid, const std::vector<double>& x,
                             std::size_t action, const std::vector<double>& y);

// Costs and weights -----------------------------------------------------------

struct QuadraticCost {
    double c0 = 1.0;
    std::vector<double> action_cost;  // added per action index, zero when empty
};

struct PowerCost {
    double c0 = 1.0;
    double q = 0.5;
    std::vector<double> w1;  // c(x,a) = c0 w1(x)^q
};

struct TabulatedCost {
    std::vector<std::vector<double>> cost;
};

using CostForm = std::variant<QuadraticCost, PowerCost, TabulatedCost>;

FiniteMCP attach_cost(FiniteMCP mcp, const CostForm& form);

struct EntropicWeight {
    std::vector<double> w1_hat;  // (epsilon/2) ||x||^2
    double epsilon = 0.0;
};

/// epsilon = ((gamma - gamma_tilde)/gamma) / L; requires gamma_tilde < gamma < 1.
EntropicWeight diffusion_entropic_weight(const FiniteMCP& grid_mcp, double gamma, double gamma_tilde, double L);

/// ||x||^2 at every node.
std::vector<double> squared_norm_weight(const FiniteMCP& grid_mcp);

/// Entrywise power v^p.
std::vector<double> power_weight(const std::vector<double>& v, double p);

}  // namespace riskmdp
