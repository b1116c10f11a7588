#include "riskmdp/models.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace riskmdp {

namespace {

FiniteMCP single_action_chain(const std::vector<std::vector<double>>& rows, const std::vector<double>& cost) {
    FiniteMCP m;
    m.n_states = rows.size();
    for (std::size_t x = 0; x < rows.size(); ++x) {
        m.actions.push_back({"stay"});
        m.transition.push_back({rows[x]});
        m.cost.push_back({cost[x]});
    }
    return m;
}

Eigen::MatrixXd to_eigen(const Matrix& m, std::size_t d, const char* what) {
    if (m.size() != d) throw std::invalid_argument(std::string("diffusion: ") + what + " must be d x d");
    Eigen::MatrixXd out(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        if (m[i].size() != d) throw std::invalid_argument(std::string("diffusion: ") + what + " must be d x d");
        for (std::size_t j = 0; j < d; ++j) out(i, j) = m[i][j];
    }
    return out;
}

struct Gaussian {
    Eigen::MatrixXd A;
    Eigen::MatrixXd precision;
    double log_norm = 0.0;  // log of (2 pi)^{-d/2} |precision|^{1/2}
};

Gaussian prepare(const DiffusionSpec& spec) {
    Gaussian g;
    const std::size_t d = spec.dim;
    g.A = to_eigen(spec.A, d, "A");
    const Eigen::MatrixXd D = to_eigen(spec.D, d, "D");
    const Eigen::MatrixXd cov = D * D.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
    if (es.eigenvalues().minCoeff() <= 1e-12) throw std::invalid_argument("diffusion: degenerate covariance");
    g.precision = cov.inverse();
    g.log_norm = -0.5 * static_cast<double>(d) * std::log(2.0 * std::numbers::pi) -
                 0.5 * std::log(cov.determinant());
    return g;
}

Eigen::VectorXd drift(const DiffusionSpec& spec, std::size_t a, const Eigen::VectorXd& x) {
    const std::size_t d = spec.dim;
    const auto& act = spec.actions[a];
    Eigen::VectorXd b = Eigen::VectorXd::Zero(d);
    for (std::size_t i = 0; i < d && i < act.offset.size(); ++i) b(i) = act.offset[i];
    if (!act.gain.empty()) b += to_eigen(act.gain, d, "gain") * x;
    const double nb2 = b.squaredNorm();
    if (nb2 > spec.drift_bound) b *= std::sqrt(spec.drift_bound / nb2);
    return b;
}

std::vector<std::vector<double>> grid_nodes(std::size_t d, const GridSpec& grid) {
    const double h = 2.0 * grid.extent / static_cast<double>(grid.points - 1);
    std::size_t total = 1;
    for (std::size_t k = 0; k < d; ++k) total *= grid.points;
    std::vector<std::vector<double>> nodes(total, std::vector<double>(d));
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        for (std::size_t k = d; k-- > 0;) {
            nodes[idx][k] = -grid.extent + h * static_cast<double>(r % grid.points);
            r /= grid.points;
        }
    }
    return nodes;
}

double log_density(const Gaussian& g, const Eigen::VectorXd& mean, const Eigen::VectorXd& y) {
    const Eigen::VectorXd r = y - mean;
    return g.log_norm - 0.5 * r.dot(g.precision * r);
}

}  // namespace

FiniteMCP builtin_chain(const std::string& name, const BuiltinParams& p) {
    if (name == "uniform2") return single_action_chain({{0.5, 0.5}, {0.5, 0.5}}, {0.0, 1.0});
    if (name == "biased2") return single_action_chain({{0.6, 0.4}, {0.3, 0.7}}, {0.0, 1.0});
    if (name == "ring") {
        if (p.n < 3) throw std::invalid_argument("ring: n must be >= 3");
        std::vector<std::vector<double>> rows(p.n, std::vector<double>(p.n, 0.0));
        std::vector<double> cost(p.n);
        for (std::size_t x = 0; x < p.n; ++x) {
            rows[x][(x + 1) % p.n] = 0.5;
            rows[x][(x + p.n - 1) % p.n] = 0.5;
            cost[x] = static_cast<double>(x) / static_cast<double>(p.n);
        }
        return single_action_chain(rows, cost);
    }
    if (name == "random_seeded") {
        if (p.n == 0 || p.m == 0) throw std::invalid_argument("random_seeded: n and m must be positive");
        std::mt19937_64 rng(p.seed);
        std::uniform_real_distribution<double> weight(0.05, 1.0);
        std::uniform_real_distribution<double> cost(0.0, 1.0);
        FiniteMCP m;
        m.n_states = p.n;
        m.actions.resize(p.n);
        m.transition.resize(p.n);
        m.cost.resize(p.n);
        for (std::size_t x = 0; x < p.n; ++x)
            for (std::size_t a = 0; a < p.m; ++a) {
                m.actions[x].push_back("a" + std::to_string(a));
                std::vector<double> row(p.n);
                double s = 0.0;
                for (auto& v : row) s += (v = weight(rng));
                for (auto& v : row) v /= s;
                m.transition[x].push_back(std::move(row));
                m.cost[x].push_back(cost(rng));
            }
        return m;
    }
    throw std::invalid_argument("unknown builtin chain: " + name);
}

void DiffusionSpec::validate() const {
    if (dim < 1 || dim > 3) throw std::invalid_argument("diffusion: dim must be 1, 2 or 3");
    if (actions.empty()) throw std::invalid_argument("diffusion: need at least one action");
    for (const auto& a : actions)
        if (a.offset.size() != dim) throw std::invalid_argument("diffusion: drift offset must have length dim");
    if (!(drift_bound > 0.0)) throw std::invalid_argument("diffusion: drift bound must be positive");
    const double g = gamma_tilde();
    if (!(g < 1.0)) throw std::invalid_argument("diffusion: A must be a strict contraction (gamma_tilde < 1)");
    (void)ellipticity();
}

double DiffusionSpec::gamma_tilde() const {
    const auto a = to_eigen(A, dim, "A");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a.transpose() * a);
    return es.eigenvalues().maxCoeff();
}

double DiffusionSpec::ellipticity() const {
    const auto d = to_eigen(D, dim, "D");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.transpose() * d);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 1e-12) throw std::invalid_argument("diffusion: degenerate covariance (ellipticity violated)");
    return std::max(hi, 1.0 / lo);
}

void GridSpec::validate() const {
    if (points < 3 || points % 2 == 0) throw std::invalid_argument("grid: points must be odd and >= 3");
    if (!(extent > 0.0)) throw std::invalid_argument("grid: extent must be positive");
}

std::vector<std::size_t> DiffusionModel::interior(double tol) const {
    std::vector<std::size_t> out;
    for (std::size_t x = 0; x < lost_mass.size(); ++x)
        if (lost_mass[x] <= tol) out.push_back(x);
    return out;
}

double diffusion_cell_weight(const DiffusionSpec& spec, const GridSpec& grid, const std::vector<double>& x,
                             std::size_t action, const std::vector<double>& y) {
    spec.validate();
    grid.validate();
    const auto g = prepare(spec);
    const std::size_t d = spec.dim;
    const Eigen::VectorXd xv = Eigen::Map<const Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(d));
    const Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(d));
    const double h = 2.0 * grid.extent / static_cast<double>(grid.points - 1);
    const Eigen::VectorXd mean = g.A * xv + drift(spec, action, xv);
    return std::exp(log_density(g, mean, yv)) * std::pow(h, static_cast<double>(d));
}

DiffusionModel discretize_diffusion(const DiffusionSpec& spec, const GridSpec& grid) {
    spec.validate();
    grid.validate();
    const auto g = prepare(spec);
    const std::size_t d = spec.dim;
    const auto nodes = grid_nodes(d, grid);
    const std::size_t n = nodes.size();
    const double h = 2.0 * grid.extent / static_cast<double>(grid.points - 1);

    DiffusionModel out;
    out.gamma_tilde = spec.gamma_tilde();
    out.L = spec.ellipticity();
    out.cell_volume = std::pow(h, static_cast<double>(d));
    out.lost_mass.assign(n, 0.0);
    FiniteMCP& m = out.mcp;
    m.n_states = n;
    m.coords = nodes;
    m.actions.assign(n, {});
    m.transition.assign(n, {});
    m.cost.assign(n, {});

    std::vector<Eigen::VectorXd> ys(n);
    for (std::size_t y = 0; y < n; ++y) ys[y] = Eigen::Map<const Eigen::VectorXd>(nodes[y].data(), static_cast<Eigen::Index>(d));

    const auto nn = static_cast<std::ptrdiff_t>(n);
    bool empty_row = false;
#pragma omp parallel for schedule(static) reduction(|| : empty_row)
    for (std::ptrdiff_t xi = 0; xi < nn; ++xi) {
        const auto x = static_cast<std::size_t>(xi);
        for (std::size_t a = 0; a < spec.actions.size(); ++a) {
            const Eigen::VectorXd mean = g.A * ys[x] + drift(spec, a, ys[x]);
            std::vector<double> row(n);
            double sum = 0.0;
            for (std::size_t y = 0; y < n; ++y) sum += (row[y] = std::exp(log_density(g, mean, ys[y])) * out.cell_volume);
            if (!(sum > 0.0)) {
                empty_row = true;
                sum = 1.0;
            }
            for (auto& v : row) v /= sum;
            out.lost_mass[x] = std::max(out.lost_mass[x], std::max(0.0, 1.0 - sum));
            m.actions[x].push_back(spec.actions[a].label);
            m.transition[x].push_back(std::move(row));
            m.cost[x].push_back(0.0);
        }
    }
    if (empty_row) throw std::runtime_error("diffusion: a row lost all mass; enlarge the grid");
    return out;
}

FiniteMCP attach_cost(FiniteMCP mcp, const CostForm& form) {
    const std::size_t n = mcp.n_states;
    if (const auto* q = std::get_if<QuadraticCost>(&form)) {
        if (mcp.coords.size() != n) throw std::invalid_argument("attach_cost: quadratic form needs state coordinates");
        for (std::size_t x = 0; x < n; ++x) {
            double r2 = 0.0;
            for (double c : mcp.coords[x]) r2 += c * c;
            for (std::size_t a = 0; a < mcp.n_actions(x); ++a)
                mcp.cost[x][a] = q->c0 * r2 + (a < q->action_cost.size() ? q->action_cost[a] : 0.0);
        }
    } else if (const auto* p = std::get_if<PowerCost>(&form)) {
        if (p->w1.size() != n) throw std::invalid_argument("attach_cost: power form weight length mismatch");
        for (std::size_t x = 0; x < n; ++x)
            for (std::size_t a = 0; a < mcp.n_actions(x); ++a) mcp.cost[x][a] = p->c0 * std::pow(p->w1[x], p->q);
    } else {
        const auto& t = std::get<TabulatedCost>(form);
        if (t.cost.size() != n) throw std::invalid_argument("attach_cost: tabulated cost has wrong state count");
        for (std::size_t x = 0; x < n; ++x)
            if (t.cost[x].size() != mcp.n_actions(x))
                throw std::invalid_argument("attach_cost: tabulated cost has wrong action count");
        mcp.cost = t.cost;
    }
    for (const auto& row : mcp.cost)
        for (double c : row)
            if (!std::isfinite(c)) throw std::invalid_argument("attach_cost: non-finite cost");
    return mcp;
}

EntropicWeight diffusion_entropic_weight(const FiniteMCP& grid_mcp, double gamma, double gamma_tilde, double L) {
    if (!(gamma > gamma_tilde && gamma < 1.0))
        throw std::invalid_argument("diffusion_entropic_weight: need gamma_tilde < gamma < 1");
    if (!(L > 0.0)) throw std::invalid_argument("diffusion_entropic_weight: L must be positive");
    EntropicWeight out;
    out.epsilon = (gamma - gamma_tilde) / gamma / L;
    const auto r2 = squared_norm_weight(grid_mcp);
    out.w1_hat.resize(r2.size());
    for (std::size_t x = 0; x < r2.size(); ++x) out.w1_hat[x] = 0.5 * out.epsilon * r2[x];
    return out;
}

std::vector<double> squared_norm_weight(const FiniteMCP& grid_mcp) {
    if (grid_mcp.coords.size() != grid_mcp.n_states) throw std::invalid_argument("weight: model has no coordinates");
    std::vector<double> out(grid_mcp.n_states);
    for (std::size_t x = 0; x < out.size(); ++x) {
        double s = 0.0;
        for (double c : grid_mcp.coords[x]) s += c * c;
        out[x] = s;
    }
    return out;
}

std::vector<double> power_weight(const std::vector<double>& v, double p) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::pow(v[i], p);
    return out;
}

}  // namespace riskmdp
