#include "riskmdp/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>

#include <omp.h>

#include "riskmdp/certificates.hpp"
#include "riskmdp/io.hpp"
#include "riskmdp/norms.hpp"
#include "riskmdp/oracles.hpp"

namespace riskmdp::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

enum class LogLevel { error = 0, info = 1, debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("RISKMDP_LOG");
    if (!env) return LogLevel::error;
    const std::string v(env);
    if (v == "debug") return LogLevel::debug;
    if (v == "info") return LogLevel::info;
    return LogLevel::error;
}

void log(LogLevel level, const std::string& msg) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    static const char* names[] = {"error", "info", "debug"};
    std::cerr << "[riskmdp " << names[static_cast<int>(level)] << "] " << msg << "\n";
}

SolveConfig solve_from_json(const json& j) {
    SolveConfig s;
    s.tol = j.value("tol", s.tol);
    s.max_iter = j.value("max_iter", s.max_iter);
    s.reference_state = j.value("reference_state", s.reference_state);
    if (j.contains("initial")) s.initial = j.at("initial").get<std::vector<double>>();
    if (j.contains("exec")) s.exec = j.at("exec").get<std::string>() == "serial" ? Exec::serial : Exec::parallel;
    return s;
}

}  // namespace

RunConfig parse_run_config(const json& j, const fs::path& base_dir) {
    try {
        if (!j.is_object()) throw ConfigError("config must be a JSON object");
        RunConfig cfg;
        cfg.base_dir = base_dir;
        if (!j.contains("model")) throw ConfigError("config has no model");
        cfg.model = j.at("model");
        int sources = 0;
        for (const char* key : {"builtin", "diffusion", "file"})
            if (cfg.model.contains(key)) ++sources;
        if (sources != 1) throw ConfigError("model needs exactly one of builtin, diffusion, file");
        cfg.risk = j.contains("risk") ? io::risk_from_json(j.at("risk")) : RiskMapSpec::neutral();
        if (j.contains("solve")) {
            cfg.solve = solve_from_json(j.at("solve"));
            if (j.at("solve").contains("weight")) cfg.solve_weight = j.at("solve").at("weight");
        }
        if (j.contains("certificates")) {
            for (const auto& c : j.at("certificates")) {
                if (!c.contains("type")) throw ConfigError("certificate request without type");
                cfg.certificates.push_back(c);
            }
        }
        if (j.contains("sweep")) {
            SweepAxis axis;
            axis.param = j.at("sweep").at("param").get<std::string>();
            axis.values = j.at("sweep").at("values").get<std::vector<double>>();
            if (axis.values.empty()) throw ConfigError("sweep axis is empty");
            static const std::set<std::string> known{"lambda", "g1", "g2", "r"};
            if (!known.count(axis.param)) throw ConfigError("unknown sweep parameter " + axis.param);
            cfg.sweep = std::move(axis);
        }
        if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
        return cfg;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

RunConfig load_run_config(const fs::path& path) {
    json j;
    try {
        j = io::read_json_file(path);
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    return parse_run_config(j, path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

namespace {

CostForm cost_from_json(const json& j, const LoadedModel& model) {
    const std::string type = j.value("type", "quadratic");
    if (type == "quadratic") {
        QuadraticCost q;
        q.c0 = j.value("c0", 1.0);
        q.action_cost = j.value("action_cost", std::vector<double>{});
        return q;
    }
    if (type == "power") {
        PowerCost p;
        p.c0 = j.value("c0", 1.0);
        p.q = j.value("q", 0.5);
        p.w1 = resolve_weight(j.at("w1"), model);
        return p;
    }
    if (type == "tabulated") return TabulatedCost{j.at("cost").get<std::vector<std::vector<double>>>()};
    throw ConfigError("unknown cost type " + type);
}

}  // namespace

LoadedModel load_model(const RunConfig& cfg, std::optional<std::uint64_t> seed) {
    try {
        LoadedModel out;
        if (cfg.model.contains("builtin")) {
            const auto& b = cfg.model.at("builtin");
            BuiltinParams p;
            p.n = b.value("n", p.n);
            p.m = b.value("m", p.m);
            p.seed = b.contains("seed") ? b.at("seed").get<std::uint64_t>() : seed.value_or(p.seed);
            out.mcp = builtin_chain(b.at("name").get<std::string>(), p);
        } else if (cfg.model.contains("file")) {
            fs::path path = cfg.model.at("file").get<std::string>();
            if (path.is_relative()) path = cfg.base_dir / path;
            out.mcp = io::mcp_from_json(io::read_json_file(path));
        } else {
            const auto& d = cfg.model.at("diffusion");
            const auto spec = io::diffusion_from_json(d);
            const auto grid = io::grid_from_json(d.value("grid", json::object()));
            out.diffusion = discretize_diffusion(spec, grid);
            out.mcp = out.diffusion->mcp;
            if (d.contains("cost")) {
                out.mcp = attach_cost(out.mcp, cost_from_json(d.at("cost"), out));
                out.diffusion->mcp = out.mcp;
            }
        }
        require_valid(out.mcp);
        return out;
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("model: ") + e.what());
    }
}

std::vector<double> resolve_weight(const json& spec, const LoadedModel& model) {
    const std::size_t n = model.mcp.n_states;
    if (spec.is_array()) return spec.get<std::vector<double>>();
    const std::string type = spec.value("type", "zero");
    std::vector<double> w;
    if (type == "zero") {
        w.assign(n, 0.0);
    } else if (type == "vector") {
        w = spec.at("values").get<std::vector<double>>();
    } else if (type == "index") {
        w.resize(n);
        for (std::size_t x = 0; x < n; ++x) w[x] = static_cast<double>(x);
    } else if (type == "squared_norm") {
        w = squared_norm_weight(model.mcp);
    } else if (type == "entropic") {
        if (!model.diffusion) throw ConfigError("entropic weight needs a diffusion model");
        w = diffusion_entropic_weight(model.mcp, spec.at("gamma").get<double>(), model.diffusion->gamma_tilde,
                                      model.diffusion->L)
                .w1_hat;
    } else {
        throw ConfigError("unknown weight type " + type);
    }
    if (spec.contains("offset"))
        for (double& v : w) v += spec.at("offset").get<double>();
    if (spec.contains("power")) w = power_weight(w, spec.at("power").get<double>());
    if (spec.contains("scale"))
        for (double& v : w) v *= spec.at("scale").get<double>();
    if (w.size() != n) throw ConfigError("weight length does not match the model");
    return w;
}

namespace {

struct Context {
    RunConfig cfg;
    LoadedModel model;
    fs::path out_dir;
};

Context prepare(const CliOptions& opts) {
    Context ctx;
    ctx.cfg = load_run_config(opts.config);
    ctx.model = load_model(ctx.cfg, opts.seed);
    if (opts.output)
        ctx.out_dir = *opts.output;
    else
        ctx.out_dir = ctx.cfg.output_dir.is_relative() ? ctx.cfg.base_dir / ctx.cfg.output_dir : ctx.cfg.output_dir;
    std::error_code ec;
    fs::create_directories(ctx.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + ctx.out_dir.string());
    if (!ctx.cfg.solve_weight.is_null()) {
        WeightSpec ws;
        ws.w0 = resolve_weight(ctx.cfg.solve_weight.at("w0"), ctx.model);
        ws.K = ctx.cfg.solve_weight.value("K", 1.0);
        ctx.cfg.solve.weight = ws;
    }
    try {
        ctx.cfg.solve.validate(ctx.model.mcp.n_states);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("solve: ") + e.what());
    }
    log(LogLevel::info, "model with " + std::to_string(ctx.model.mcp.n_states) + " states, risk " +
                            std::string(to_string(ctx.cfg.risk.kind)));
    return ctx;
}

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

json solve_json(const SolveResult& r, double residual) {
    return {{"rho", r.rho},
            {"policy", r.policy},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"residual", residual},
            {"error_bound", r.error_bound},
            {"h", r.h}};
}

}  // namespace

int cmd_solve(const CliOptions& opts) {
    return guarded([&] {
        auto ctx = prepare(opts);
        const auto result = relative_value_iteration(ctx.model.mcp, ctx.cfg.risk, ctx.cfg.solve);
        std::vector<double> w;
        if (ctx.cfg.solve.weight) w = ctx.cfg.solve.weight->weights();
        const double residual = poisson_residual(ctx.model.mcp, ctx.cfg.risk, result.rho, result.h, w);
        io::write_json_file(ctx.out_dir / "result.json", solve_json(result, residual));
        io::write_trace_csv(ctx.out_dir / "trace.csv", result.trace);
        log(LogLevel::info, "rho " + std::to_string(result.rho) + " after " + std::to_string(result.iterations) +
                                " iterations");
        return result.converged ? kExitOk : kExitNotConverged;
    });
}

namespace {

std::vector<std::size_t> all_states(std::size_t n) {
    std::vector<std::size_t> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = i;
    return s;
}

LyapunovOptions lyapunov_options(const json& req, const LoadedModel& model) {
    LyapunovOptions lo;
    if (req.contains("gamma_grid")) lo.gamma_grid = req.at("gamma_grid").get<std::vector<double>>();
    lo.include_cost = req.value("include_cost", true);
    lo.two_sided = req.value("two_sided", true);
    if (req.value("interior_only", false)) {
        if (!model.diffusion) throw ConfigError("interior_only needs a diffusion model");
        lo.states = model.diffusion->interior(req.value("interior_tol", 1e-3));
    }
    return lo;
}

json witness_pair(const StateAction& p) { return {{"x", p.x}, {"a", p.a}}; }

json run_certificate(const json& req, const Context& ctx, std::optional<std::uint64_t> seed) {
    const auto& mcp = ctx.model.mcp;
    const auto& spec = ctx.cfg.risk;
    const std::string type = req.at("type").get<std::string>();
    const auto w0 = req.contains("w0") ? resolve_weight(req.at("w0"), ctx.model) : std::vector<double>(mcp.n_states, 0.0);

    if (type == "lyapunov") {
        auto lo = lyapunov_options(req, ctx.model);
        auto j = io::to_json(fit_lyapunov(mcp, spec, w0, lo));
        j["constants"]["rows"] = lo.states.empty() ? mcp.n_states : lo.states.size();
        return j;
    }
    if (type == "doeblin") {
        std::vector<double> levels;
        if (req.contains("levels")) {
            levels = req.at("levels").get<std::vector<double>>();
        } else {
            std::set<double> distinct(w0.begin(), w0.end());
            levels.assign(distinct.begin(), distinct.end());
        }
        bool ok = true;
        double min_alpha = std::numeric_limits<double>::infinity();
        json per_level = json::array();
        json worst = json::object();
        for (double R : levels) {
            const auto B = level_set(w0, R);
            if (B.empty()) continue;
            const auto d = doeblin_minorization(mcp, B);
            per_level.push_back({{"R", R}, {"alpha", d.alpha}, {"subset_size", B.size()}});
            if (d.alpha < min_alpha) {
                min_alpha = d.alpha;
                worst = {{"R", R}, {"alpha", d.alpha}};
            }
            ok = ok && d.ok();
        }
        return {{"kind", "doeblin"},
                {"satisfied", ok},
                {"constants", {{"min_alpha", std::isfinite(min_alpha) ? min_alpha : 0.0}, {"levels", per_level}}},
                {"worst_witness", worst}};
    }
    if (type == "local_doeblin") {
        const auto C = req.contains("level") ? level_set(w0, req.at("level").get<double>()) : all_states(mcp.n_states);
        return io::to_json(local_doeblin(mcp, C));
    }
    if (type == "envelope_minorization") {
        const double K = req.at("K").get<double>();
        const auto B = req.contains("level") ? level_set(w0, req.at("level").get<double>()) : all_states(mcp.n_states);
        double alpha = 0.0;
        if (spec.kind == RiskKind::entropic) {
            std::vector<double> w(w0.size());
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = 1.0 + w0[i] / K;
            alpha = entropic_envelope_minorization(mcp, B, spec.lambda * K, w).alpha;
        } else {
            alpha = difference_minorization(mcp, spec, B).alpha;
        }
        return {{"kind", "envelope_minorization"},
                {"satisfied", alpha > 0.0},
                {"constants", {{"alpha", alpha}, {"K", K}, {"subset_size", B.size()}}},
                {"worst_witness", json::object()}};
    }
    if (type == "l2" || type == "contraction") {
        const auto lo = lyapunov_options(req, ctx.model);
        const auto ball = certify_invariant_ball(mcp, spec, w0, lo);
        json constants = {{"K0", ball.lyapunov.K0}, {"gamma0", ball.lyapunov.gamma0}, {"K_computed", ball.K},
                          {"method", ball.method}};
        if (!ball.ok)
            return {{"kind", type}, {"satisfied", false}, {"constants", constants},
                    {"worst_witness", {{"reason", ball.reason}}}};
        const double K = req.contains("K") ? req.at("K").get<double>() : ball.K;
        constants["K"] = K;
        if (type == "l2") {
            L2Options l2o;
            l2o.n_samples = req.value("n_samples", l2o.n_samples);
            if (seed) l2o.seed = *seed;
            const auto r = check_l2(mcp, spec, w0, ball.lyapunov.K0, K, ball.B0, l2o);
            constants["min_slack"] = r.min_slack;
            constants["vectors_checked"] = r.vectors_checked;
            constants["B0_size"] = r.B0.size();
            constants["vacuous"] = r.vacuous;
            return {{"kind", "l2"},
                    {"satisfied", r.passed},
                    {"constants", constants},
                    {"worst_witness", {{"x", witness_pair(r.worst_x)}, {"y", witness_pair(r.worst_y)},
                                       {"vector", r.worst_vector}}}};
        }
        const auto search = certify_contraction(mcp, spec, w0, K);
        if (search.satisfied) {
            constants["certificate"] = io::to_json(search.certificate);
            constants["B_size"] = search.B.size();
        }
        return {{"kind", "contraction"},
                {"satisfied", search.satisfied && search.certificate.alpha_bar < 1.0},
                {"constants", constants},
                {"worst_witness", {{"reason", search.reason}}}};
    }
    throw ConfigError("unknown certificate type " + type);
}

}  // namespace

int cmd_verify(const CliOptions& opts) {
    return guarded([&] {
        auto ctx = prepare(opts);
        json report = json::array();
        bool all_ok = true;
        for (const auto& req : ctx.cfg.certificates) {
            auto entry = run_certificate(req, ctx, opts.seed);
            const bool ok = entry.at("satisfied").get<bool>();
            log(ok ? LogLevel::info : LogLevel::error,
                entry.at("kind").get<std::string>() + (ok ? " satisfied" : " not satisfied"));
            all_ok = all_ok && ok;
            report.push_back(std::move(entry));
        }
        io::write_json_file(ctx.out_dir / "certificates.json",
                            {{"all_satisfied", all_ok}, {"certificates", report}});
        return all_ok ? kExitOk : kExitUnsatisfied;
    });
}

int cmd_sweep(const CliOptions& opts) {
    return guarded([&] {
        auto ctx = prepare(opts);
        if (!ctx.cfg.sweep) throw ConfigError("config has no sweep axis");
        const auto& axis = *ctx.cfg.sweep;
        const std::size_t n = axis.values.size();

        std::vector<RiskMapSpec> specs(n, ctx.cfg.risk);
        for (std::size_t i = 0; i < n; ++i) {
            auto& s = specs[i];
            const double v = axis.values[i];
            if (axis.param == "lambda")
                s.lambda = v;
            else if (axis.param == "g1")
                s.g1 = v;
            else if (axis.param == "g2")
                s.g2 = v;
            else
                s.r = v;
            try {
                s.validate();
            } catch (const std::exception& e) {
                throw ConfigError("sweep value " + std::to_string(v) + ": " + e.what());
            }
        }

        std::vector<SolveResult> results(n);
        std::vector<std::string> errors(n);
        const int jobs = static_cast<int>(std::max<std::size_t>(opts.jobs, 1));
#pragma omp parallel for schedule(dynamic, 1) num_threads(jobs)
        for (std::size_t i = 0; i < n; ++i) {
            try {
                results[i] = relative_value_iteration(ctx.model.mcp, specs[i], ctx.cfg.solve);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
        for (const auto& e : errors)
            if (!e.empty()) throw std::invalid_argument(e);

        std::ofstream out(ctx.out_dir / "sweep.csv");
        if (!out) throw ConfigError("cannot write sweep.csv");
        out << "param,rho,iterations,converged\n" << std::setprecision(17);
        bool all = true;
        for (std::size_t i = 0; i < n; ++i) {
            out << axis.values[i] << ',' << results[i].rho << ',' << results[i].iterations << ','
                << (results[i].converged ? "true" : "false") << '\n';
            all = all && results[i].converged;
        }
        return all ? kExitOk : kExitNotConverged;
    });
}

int cmd_oracle(const CliOptions& opts) {
    return guarded([&] {
        auto ctx = prepare(opts);
        const auto en = enumerate_policies(ctx.model.mcp, ctx.cfg.risk, ctx.cfg.solve);
        io::write_policy_table_csv(ctx.out_dir / "policy_table.csv", en.table);
        io::write_json_file(ctx.out_dir / "oracle.json",
                            {{"best_rho", en.best_rho}, {"best_policy", en.best_policy}, {"policies", en.table.size()}});
        return kExitOk;
    });
}

}  // namespace riskmdp::cli
