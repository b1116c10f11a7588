#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "riskmdp/cli.hpp"
#include "riskmdp/io.hpp"
#include "riskmdp/models.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Sandbox {
    fs::path dir;
    explicit Sandbox(const std::string& name) : dir(fs::temp_directory_path() / ("riskmdp_cli_" + name)) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Sandbox() { fs::remove_all(dir); }

    fs::path write(const std::string& file, const json& j) const {
        const auto p = dir / file;
        std::ofstream(p) << j.dump(2);
        return p;
    }
};

int run(const std::string& args) {
    const std::string cmd = std::string(RISKMDP_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json read(const fs::path& p) {
    std::ifstream in(p);
    return json::parse(in);
}

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string s; std::getline(in, s);) out.push_back(s);
    return out;
}

json diffusion_model() {
    return json::parse(R"({"diffusion": {"dim": 1, "A": 0.5, "D": 1,
        "actions": [{"label": "left", "offset": -0.5}, {"label": "right", "offset": 0.5}],
        "grid": {"points": 201, "extent": 5},
        "cost": {"type": "power", "c0": 0.1, "q": 0.5, "w1": {"type": "entropic", "gamma": 0.5, "offset": 1}}}})");
}

}  // namespace

TEST_CASE("solve writes result and trace") {
    Sandbox sb("solve");
    const auto cfg = sb.write("c.json", {{"model", {{"builtin", {{"name", "uniform2"}}}}},
                                         {"risk", {{"kind", "entropic"}, {"lambda", 1.0}}},
                                         {"output_dir", "out"}});
    CHECK(run("solve --config " + cfg.string()) == 0);
    const auto res = read(sb.dir / "out" / "result.json");
    CHECK(res.at("rho").get<double>() == doctest::Approx(0.620115).epsilon(1e-6));
    CHECK(res.at("converged").get<bool>());
    for (const char* key : {"rho", "policy", "iterations", "converged", "residual"}) CHECK(res.contains(key));
    const auto trace = lines(sb.dir / "out" / "trace.csv");
    REQUIRE(trace.size() >= 2);
    CHECK(trace[0] == "iter,span,m,M,rho_est,wall_ns");
}

TEST_CASE("config errors exit with 2") {
    Sandbox sb("errors");
    CHECK(run("solve --config " + (sb.dir / "missing.json").string()) == 2);
    CHECK(run("solve") == 2);
    std::ofstream(sb.dir / "broken.json") << "{ not json";
    CHECK(run("solve --config " + (sb.dir / "broken.json").string()) == 2);
    auto two = sb.write("two.json", {{"model", {{"builtin", {{"name", "uniform2"}}}, {"file", "x.json"}}}});
    CHECK(run("solve --config " + two.string()) == 2);
    auto bad_risk = sb.write("risk.json", {{"model", {{"builtin", {{"name", "uniform2"}}}}},
                                           {"risk", {{"kind", "density_band"}, {"band", {1.5, 2.0}}}}});
    CHECK(run("solve --config " + bad_risk.string()) == 2);
    auto empty_sweep = sb.write("sweep.json", {{"model", {{"builtin", {{"name", "uniform2"}}}}},
                                               {"sweep", {{"param", "lambda"}, {"values", json::array()}}}});
    CHECK(run("sweep --config " + empty_sweep.string()) == 2);
    auto no_sweep = sb.write("nosweep.json", {{"model", {{"builtin", {{"name", "uniform2"}}}}}});
    CHECK(run("sweep --config " + no_sweep.string()) == 2);
    auto unknown_cert = sb.write("cert.json", {{"model", {{"builtin", {{"name", "uniform2"}}}}},
                                               {"certificates", {{{"type", "telepathy"}}}}});
    CHECK(run("verify --config " + unknown_cert.string()) == 2);
}

TEST_CASE("forced non-convergence exits with 3 and still writes results") {
    Sandbox sb("noconv");
    const auto cfg = sb.write("c.json", {{"model", {{"builtin", {{"name", "random_seeded"}, {"n", 5}, {"m", 2}, {"seed", 3}}}}},
                                         {"risk", {{"kind", "entropic"}, {"lambda", 1.0}}},
                                         {"solve", {{"max_iter", 1}}}});
    CHECK(run("solve --config " + cfg.string() + " --output " + (sb.dir / "o").string()) == 3);
    const auto res = read(sb.dir / "o" / "result.json");
    CHECK_FALSE(res.at("converged").get<bool>());
    CHECK(fs::exists(sb.dir / "o" / "trace.csv"));
}

TEST_CASE("verify on the diffusion") {
    Sandbox sb("verify");
    const json w1 = {{"type", "entropic"}, {"gamma", 0.5}, {"offset", 1}};
    json certs = json::array({{{"type", "lyapunov"}, {"w0", w1}, {"interior_only", true}},
                              {{"type", "doeblin"}, {"w0", w1}},
                              {{"type", "local_doeblin"}},
                              {{"type", "l2"}, {"w0", w1}, {"interior_only", true}, {"n_samples", 2000}}});
    auto cfg = sb.write("ok.json", {{"model", diffusion_model()},
                                    {"risk", {{"kind", "entropic"}, {"lambda", 1.0}}},
                                    {"certificates", certs}});
    CHECK(run("verify --config " + cfg.string()) == 0);
    auto rep = read(sb.dir / "certificates.json");
    CHECK(rep.at("all_satisfied").get<bool>());
    REQUIRE(rep.at("certificates").size() == 4);
    for (const auto& c : rep.at("certificates")) {
        for (const char* key : {"kind", "satisfied", "constants", "worst_witness"}) CHECK(c.contains(key));
        CHECK(c.at("satisfied").get<bool>());
    }
    const double K = rep.at("certificates")[3].at("constants").at("K").get<double>();

    // falsification: a ball radius below the computed bound
    cfg = sb.write("low.json", {{"model", {{"builtin", {{"name", "random_seeded"}, {"n", 5}, {"m", 2}, {"seed", 4}}}}},
                                {"risk", {{"kind", "neutral"}}},
                                {"certificates", {{{"type", "l2"}, {"K", 0.5}}}}});
    CHECK(run("verify --config " + cfg.string()) == 4);
    rep = read(sb.dir / "certificates.json");
    CHECK_FALSE(rep.at("certificates")[0].at("satisfied").get<bool>());
    CHECK(rep.at("certificates")[0].at("constants").at("K_computed").get<double>() > 0.5);
    CHECK(K > 0.0);

    cfg = sb.write("empty.json", {{"model", {{"builtin", {{"name", "uniform2"}}}}}, {"certificates", json::array()}});
    CHECK(run("verify --config " + cfg.string()) == 0);
    rep = read(sb.dir / "certificates.json");
    CHECK(rep.at("certificates").empty());
}

TEST_CASE("contraction and envelope requests") {
    Sandbox sb("contraction");
    const json model = {{"builtin", {{"name", "random_seeded"}, {"n", 5}, {"m", 2}, {"seed", 2}}}};
    const json w0 = {{"type", "index"}};
    const auto cfg = sb.write("c.json", {{"model", model},
                                         {"risk", {{"kind", "entropic"}, {"lambda", 0.5}}},
                                         {"certificates", {{{"type", "contraction"}, {"w0", w0}},
                                                           {{"type", "envelope_minorization"}, {"w0", w0}, {"K", 2.0}}}}});
    CHECK(run("verify --config " + cfg.string()) == 0);
    const auto rep = read(sb.dir / "certificates.json");
    const auto& c = rep.at("certificates")[0].at("constants").at("certificate");
    CHECK(c.at("alpha_bar").get<double>() < 1.0);
    CHECK(rep.at("certificates")[1].at("constants").at("alpha").get<double>() > 0.0);
}

TEST_CASE("sweeps") {
    Sandbox sb("sweep");
    auto cfg = sb.write("c.json", {{"model", {{"builtin", {{"name", "uniform2"}}}}},
                                   {"risk", {{"kind", "entropic"}, {"lambda", 1.0}}},
                                   {"sweep", {{"param", "lambda"}, {"values", {0.001, 0.1, 1.0}}}}});
    CHECK(run("sweep --jobs 3 --config " + cfg.string()) == 0);
    auto rows = lines(sb.dir / "sweep.csv");
    REQUIRE(rows.size() == 4);
    CHECK(rows[0] == "param,rho,iterations,converged");
    std::vector<double> rho;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        std::stringstream ss(rows[i]);
        std::string cell;
        std::getline(ss, cell, ',');
        std::getline(ss, cell, ',');
        rho.push_back(std::stod(cell));
    }
    CHECK(rho[0] < rho[1]);
    CHECK(rho[1] < rho[2]);
    CHECK(std::abs(rho[0] - 0.5) <= 1e-3);
    for (std::size_t i = 0; i < 3; ++i) {
        const double lambda = std::vector<double>{0.001, 0.1, 1.0}[i];
        CHECK(rho[i] == doctest::Approx(std::log(0.5 * (1.0 + std::exp(lambda))) / lambda).epsilon(1e-9));
    }

    cfg = sb.write("one.json", {{"model", {{"builtin", {{"name", "uniform2"}}}}},
                                {"risk", {{"kind", "density_band"}, {"band", {0.0, 2.0}}}},
                                {"sweep", {{"param", "g2"}, {"values", {1.5}}}}});
    CHECK(run("sweep --config " + cfg.string()) == 0);
    CHECK(lines(sb.dir / "sweep.csv").size() == 2);
}

TEST_CASE("oracle command writes the policy table") {
    Sandbox sb("oracle");
    const auto cfg = sb.write("c.json", {{"model", {{"builtin", {{"name", "random_seeded"}, {"n", 3}, {"m", 2}, {"seed", 7}}}}},
                                         {"risk", {{"kind", "entropic"}, {"lambda", 1.0}}}});
    CHECK(run("oracle --config " + cfg.string()) == 0);
    const auto rows = lines(sb.dir / "policy_table.csv");
    CHECK(rows[0] == "policy_id,action_per_state,rho");
    CHECK(rows.size() == 9);
    CHECK(rows[1].find(';') != std::string::npos);
    CHECK(run("solve --config " + cfg.string()) == 0);
    CHECK(std::abs(read(sb.dir / "oracle.json").at("best_rho").get<double>() -
                   read(sb.dir / "result.json").at("rho").get<double>()) <= 1e-6);
}

TEST_CASE("file models round-trip bit-identically") {
    Sandbox sb("roundtrip");
    const auto mcp = riskmdp::builtin_chain("random_seeded", {6, 3, 11});
    riskmdp::io::write_json_file(sb.dir / "model.json", riskmdp::io::to_json(mcp));
    const json risk = {{"kind", "mean_semideviation"}, {"lambda", 0.5}, {"r", 2.0}};
    auto a = sb.write("a.json", {{"model", {{"builtin", {{"name", "random_seeded"}, {"n", 6}, {"m", 3}, {"seed", 11}}}}},
                                 {"risk", risk}, {"output_dir", "a"}});
    auto b = sb.write("b.json", {{"model", {{"file", "model.json"}}}, {"risk", risk}, {"output_dir", "b"}});
    CHECK(run("solve --config " + a.string()) == 0);
    CHECK(run("solve --config " + b.string()) == 0);
    const auto ra = read(sb.dir / "a" / "result.json");
    const auto rb = read(sb.dir / "b" / "result.json");
    CHECK(ra.at("rho").get<double>() == rb.at("rho").get<double>());
    CHECK(ra.at("h") == rb.at("h"));
    CHECK(ra.at("policy") == rb.at("policy"));
}

TEST_CASE("in-process config parsing") {
    using namespace riskmdp::cli;
    CHECK_THROWS_AS(parse_run_config(json::parse(R"({"risk": {"kind": "neutral"}})")), ConfigError);
    const auto cfg = parse_run_config(json::parse(
        R"({"model": {"builtin": {"name": "ring", "n": 7}}, "solve": {"tol": 1e-9, "max_iter": 50},
            "sweep": {"param": "r", "values": [1, 2]}})"));
    CHECK(cfg.solve.tol == 1e-9);
    CHECK(cfg.solve.max_iter == 50);
    REQUIRE(cfg.sweep);
    CHECK(cfg.sweep->values.size() == 2);
    const auto model = load_model(cfg);
    CHECK(model.mcp.n_states == 7);
    CHECK(resolve_weight(json::parse(R"({"type": "index", "power": 2, "scale": 0.5})"), model)[3] == 4.5);
    CHECK_THROWS_AS(resolve_weight(json::parse(R"({"type": "entropic", "gamma": 0.5})"), model), ConfigError);
}
