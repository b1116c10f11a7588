#include "riskmdp/io.hpp"

#include <fstream>
#include <iomanip>
#include <stdexcept>

namespace riskmdp::io {

json to_json(const FiniteMCP& mcp) {
    json j;
    j["n_states"] = mcp.n_states;
    j["actions"] = mcp.actions;
    j["transition"] = mcp.transition;
    j["cost"] = mcp.cost;
    if (!mcp.coords.empty()) j["coords"] = mcp.coords;
    return j;
}

FiniteMCP mcp_from_json(const json& j) {
    FiniteMCP m;
    m.n_states = j.at("n_states").get<std::size_t>();
    m.actions = j.at("actions").get<std::vector<std::vector<std::string>>>();
    m.transition = j.at("transition").get<std::vector<std::vector<std::vector<double>>>>();
    m.cost = j.at("cost").get<std::vector<std::vector<double>>>();
    if (j.contains("coords")) m.coords = j.at("coords").get<std::vector<std::vector<double>>>();
    return m;
}

json to_json(const RiskMapSpec& spec) {
    json j;
    j["kind"] = std::string(to_string(spec.kind));
    switch (spec.kind) {
        case RiskKind::neutral: break;
        case RiskKind::entropic: j["lambda"] = spec.lambda; break;
        case RiskKind::density_band: j["band"] = {spec.g1, spec.g2}; break;
        case RiskKind::mean_semideviation:
            j["lambda"] = spec.lambda;
            j["r"] = spec.r;
            break;
        case RiskKind::shortfall:
            j["utility"] = {{"breakpoints", spec.utility.breakpoints()}, {"slopes", spec.utility.slopes()}};
            break;
    }
    return j;
}

RiskMapSpec risk_from_json(const json& j) {
    RiskMapSpec s;
    s.kind = risk_kind_from_string(j.at("kind").get<std::string>());
    if (j.contains("lambda")) s.lambda = j.at("lambda").get<double>();
    if (j.contains("r")) s.r = j.at("r").get<double>();
    if (j.contains("band")) {
        const auto band = j.at("band").get<std::vector<double>>();
        if (band.size() != 2) throw std::invalid_argument("risk: band must be [g1, g2]");
        s.g1 = band[0];
        s.g2 = band[1];
    }
    if (j.contains("utility")) {
        const auto& u = j.at("utility");
        s.utility = PiecewiseLinearUtility(u.value("breakpoints", std::vector<double>{}),
                                           u.at("slopes").get<std::vector<double>>());
    }
    if (j.contains("tol")) s.shortfall_tol = j.at("tol").get<double>();
    s.validate();
    return s;
}

namespace {

Matrix matrix_from_json(const json& j, std::size_t d) {
    if (j.is_number()) {
        Matrix m(d, std::vector<double>(d, 0.0));
        for (std::size_t i = 0; i < d; ++i) m[i][i] = j.get<double>();
        return m;
    }
    return j.get<Matrix>();
}

}  // namespace

DiffusionSpec diffusion_from_json(const json& j) {
    DiffusionSpec s;
    s.dim = j.value("dim", std::size_t{1});
    s.A = matrix_from_json(j.at("A"), s.dim);
    s.D = matrix_from_json(j.value("D", json(1.0)), s.dim);
    if (j.contains("drift_bound")) s.drift_bound = j.at("drift_bound").get<double>();
    for (const auto& a : j.at("actions")) {
        DriftAction act;
        act.label = a.at("label").get<std::string>();
        const auto& off = a.at("offset");
        act.offset = off.is_number() ? std::vector<double>(s.dim, off.get<double>()) : off.get<std::vector<double>>();
        if (a.contains("gain")) act.gain = matrix_from_json(a.at("gain"), s.dim);
        s.actions.push_back(std::move(act));
    }
    s.validate();
    return s;
}

GridSpec grid_from_json(const json& j) {
    GridSpec g;
    g.points = j.value("points", g.points);
    g.extent = j.value("extent", g.extent);
    g.validate();
    return g;
}

json to_json(const LyapunovCertificate& c) {
    return {{"kind", "lyapunov"},
            {"satisfied", c.satisfied},
            {"constants", {{"gamma0", c.gamma0}, {"K0", c.K0}}},
            {"worst_witness", {{"x", c.worst_pair.x}, {"a", c.worst_pair.a}, {"note", c.note}}}};
}

json to_json(const DoeblinCertificate& c) {
    return {{"kind", "doeblin"},
            {"satisfied", c.ok()},
            {"constants", {{"alpha", c.alpha}, {"R", std::isfinite(c.R) ? json(c.R) : json("inf")},
                           {"subset_size", c.subset.size()}, {"mu", c.mu}}},
            {"worst_witness", json::object()}};
}

json to_json(const LocalDoeblinCertificate& c) {
    return {{"kind", "local_doeblin"},
            {"satisfied", c.ok},
            {"constants", {{"lambda_minus", c.lambda_minus}, {"lambda_plus", c.lambda_plus},
                           {"subset_size", c.subset.size()}}},
            {"worst_witness", {{"failure", c.failure}}}};
}

json to_json(const ContractionCertificate& c) {
    return {{"gamma", c.gamma},   {"K_bar", c.K_bar},   {"alpha", c.alpha},   {"R", c.R},
            {"alpha0", c.alpha0}, {"beta", c.beta},     {"gamma0", c.gamma0}, {"gamma1", c.gamma1},
            {"gamma2", c.gamma2}, {"alpha_bar", c.alpha_bar}};
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return json::parse(in);
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_trace_csv(const std::filesystem::path& path, const std::vector<TraceRow>& trace) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "iter,span,m,M,rho_est,wall_ns\n" << std::setprecision(17);
    for (const auto& r : trace)
        out << r.iter << ',' << r.span << ',' << r.m << ',' << r.M << ',' << r.rho_est << ',' << r.wall_ns << '\n';
}

void write_policy_table_csv(const std::filesystem::path& path, const std::vector<PolicyRow>& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "policy_id,action_per_state,rho\n" << std::setprecision(17);
    for (const auto& row : table) {
        out << row.id << ',';
        for (std::size_t x = 0; x < row.policy.size(); ++x) out << (x ? ";" : "") << row.policy[x];
        out << ',' << row.rho << '\n';
    }
}

}  // namespace riskmdp::io
