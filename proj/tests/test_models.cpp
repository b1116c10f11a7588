#include "doctest.h"

#include <set>

#include "riskmdp/certificates.hpp"
#include "riskmdp/io.hpp"
#include "riskmdp/models.hpp"
#include "riskmdp/norms.hpp"
#include "test_support.hpp"

using namespace riskmdp;
using V = std::vector<double>;

namespace {

DiffusionSpec canonical(double drift = 0.5) {
    DiffusionSpec s;
    s.A = {{0.5}};
    s.D = {{1.0}};
    s.actions = {{"left", {-drift}, {}}, {"right", {drift}, {}}};
    return s;
}

const DiffusionModel& canonical_model() {
    static const DiffusionModel m = discretize_diffusion(canonical(), GridSpec{});
    return m;
}

}  // namespace

TEST_CASE("builtin chains") {
    const auto u = builtin_chain("uniform2");
    CHECK(validate_mcp(u).ok());
    CHECK(u.n_states == 2);
    CHECK(u.transition[1][0] == V{0.5, 0.5});
    CHECK(u.cost[1][0] == 1.0);

    const auto b = builtin_chain("biased2");
    CHECK(b.transition[0][0] == V{0.6, 0.4});
    CHECK(b.transition[1][0] == V{0.3, 0.7});

    const auto ring = builtin_chain("ring", {5, 1, 1});
    CHECK(validate_mcp(ring).ok());
    for (const auto& row : ring.transition) {
        int nonzero = 0;
        for (double p : row[0]) {
            if (p != 0.0) {
                ++nonzero;
                CHECK(p == 0.5);
            }
        }
        CHECK(nonzero == 2);
    }

    const auto r1 = builtin_chain("random_seeded", {3, 2, 42});
    const auto r2 = builtin_chain("random_seeded", {3, 2, 42});
    CHECK(validate_mcp(r1).ok());
    CHECK(r1.transition == r2.transition);
    CHECK(r1.cost == r2.cost);
    CHECK(r1.n_actions(0) == 2);
    CHECK(builtin_chain("random_seeded", {3, 2, 43}).transition != r1.transition);

    CHECK_THROWS_AS(builtin_chain("nope"), std::invalid_argument);
    CHECK_THROWS_AS(builtin_chain("ring", {2, 1, 1}), std::invalid_argument);
}

TEST_CASE("diffusion spec checks") {
    auto s = canonical();
    CHECK(s.gamma_tilde() == doctest::Approx(0.25));
    CHECK(s.ellipticity() == doctest::Approx(1.0));
    s.A = {{1.2}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = canonical();
    s.D = {{0.0}};
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    s = canonical();
    s.dim = 4;
    CHECK_THROWS_AS(s.validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{200, 5.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{1, 5.0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{11, 0.0}).validate(), std::invalid_argument);
}

TEST_CASE("discretized diffusion") {
    const auto& m = canonical_model();
    CHECK(m.mcp.n_states == 201);
    CHECK(validate_mcp(m.mcp).ok());
    for (const auto& rows : m.mcp.transition)
        for (const auto& row : rows) {
            double s = 0.0;
            for (double p : row) s += p;
            CHECK(std::abs(s - 1.0) <= 1e-12);
        }
    CHECK(m.mcp.coords[100][0] == 0.0);
    CHECK(m.gamma_tilde == doctest::Approx(0.25));

    // zero drift: the row at the origin is symmetric
    auto s = canonical(0.0);
    const auto sym = discretize_diffusion(s, GridSpec{});
    const auto& row = sym.mcp.transition[100][0];
    for (std::size_t k = 0; k <= 100; ++k) CHECK(row[100 - k] == doctest::Approx(row[100 + k]).epsilon(1e-14));

    // unit cell: the unnormalized weight at the mean is the standard normal density
    GridSpec unit{11, 5.0};
    CHECK(diffusion_cell_weight(s, unit, {0.0}, 0, {0.0}) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)));
    CHECK(diffusion_cell_weight(s, unit, {0.0}, 0, {0.0}) == doctest::Approx(0.398942).epsilon(1e-6));

    const auto interior = m.interior();
    CHECK_FALSE(interior.empty());
    CHECK(interior.size() < 201);
    CHECK(std::find(interior.begin(), interior.end(), 100u) != interior.end());
    CHECK(m.lost_mass.front() > 1e-3);
}

TEST_CASE("two-dimensional grid") {
    DiffusionSpec s;
    s.dim = 2;
    s.A = {{0.5, 0.0}, {0.1, 0.4}};
    s.D = {{1.0, 0.2}, {0.0, 0.8}};
    s.actions = {{"a", {0.3, -0.3}, {}}, {"b", {0.0, 0.0}, {{0.1, 0.0}, {0.0, 0.1}}}};
    s.drift_bound = 1.0;
    const auto m = discretize_diffusion(s, GridSpec{15, 4.0});
    CHECK(m.mcp.n_states == 225);
    CHECK(validate_mcp(m.mcp).ok());
    CHECK(m.mcp.coords[112] == V{0.0, 0.0});
}

TEST_CASE("cost forms") {
    const auto& m = canonical_model();
    auto zero = attach_cost(m.mcp, QuadraticCost{0.0, {}});
    for (const auto& c : zero.cost) CHECK(c == V{0.0, 0.0});

    const auto w1 = power_weight(squared_norm_weight(m.mcp), 1.0);
    auto pc = attach_cost(m.mcp, PowerCost{0.1, 0.5, w1});
    for (std::size_t x = 0; x < 201; ++x) CHECK(pc.cost[x][1] == 0.1 * std::pow(w1[x], 0.5));

    auto quad = attach_cost(m.mcp, QuadraticCost{2.0, {0.0, 1.0}});
    CHECK(quad.cost[150][0] == doctest::Approx(2.0 * 2.5 * 2.5));
    CHECK(quad.cost[150][1] == doctest::Approx(2.0 * 2.5 * 2.5 + 1.0));

    std::vector<V> table(201, V{1.0, 2.0});
    table[3] = {0.25, -4.0};
    auto tab = attach_cost(m.mcp, TabulatedCost{table});
    const auto back = io::mcp_from_json(io::to_json(tab));
    CHECK(back.cost == tab.cost);
    CHECK(back.coords == tab.coords);
    CHECK_THROWS_AS(attach_cost(builtin_chain("uniform2"), QuadraticCost{}), std::invalid_argument);
}

TEST_CASE("entropic weight") {
    const auto& m = canonical_model();
    const auto ew = diffusion_entropic_weight(m.mcp, 0.5, 0.25, 1.0);
    CHECK(ew.epsilon == doctest::Approx(0.5));
    for (std::size_t x = 0; x < 201; ++x) {
        const double c = m.mcp.coords[x][0];
        CHECK(ew.w1_hat[x] == doctest::Approx(0.25 * c * c));
    }
    CHECK(ew.w1_hat[100] == 0.0);
    CHECK_THROWS_AS(diffusion_entropic_weight(m.mcp, 0.2, 0.25, 1.0), std::invalid_argument);

    // pointwise: a finer grid sharing a node gives the same value there
    const auto fine = discretize_diffusion(canonical(), GridSpec{401, 5.0});
    const auto ew2 = diffusion_entropic_weight(fine.mcp, 0.5, 0.25, 1.0);
    CHECK(ew2.w1_hat[400] == ew.w1_hat[200]);
    CHECK(ew2.w1_hat[300] == ew.w1_hat[150]);
}

TEST_CASE("diffusion certificates") {
    const auto& m = canonical_model();
    auto w1 = diffusion_entropic_weight(m.mcp, 0.5, m.gamma_tilde, m.L).w1_hat;
    for (auto& v : w1) v += 1.0;
    const auto mcp = attach_cost(m.mcp, PowerCost{0.1, 0.5, w1});
    LyapunovOptions lo;
    lo.states = m.interior();

    SUBCASE("entropic drift on interior nodes") {
        const auto cert = fit_lyapunov(mcp, RiskMapSpec::entropic(1.0), w1, lo);
        CHECK(cert.satisfied);
        CHECK(cert.gamma0 < 1.0);
        CHECK(cert.K0 > 0.0);
        CHECK(std::isfinite(cert.K0));
    }
    SUBCASE("Doeblin mass on every level set") {
        std::set<double> levels(w1.begin(), w1.end());
        for (double R : levels) CHECK(doeblin_minorization(mcp, level_set(w1, R)).alpha > 0.0);
    }
    SUBCASE("mean-semideviation drift with the squared norm") {
        const auto w0 = squared_norm_weight(mcp);
        const auto cert = fit_lyapunov(mcp, RiskMapSpec::mean_semideviation(0.5, 2.0), w0, lo);
        CHECK(cert.satisfied);
        CHECK(cert.gamma0 < 1.0);
    }
    SUBCASE("envelope drift for a power of the entropic weight") {
        const double q = 0.5;
        const double p = 0.5 * (q + 1.0);
        const auto w0 = power_weight(w1, p);
        const auto ball = certify_invariant_ball(mcp, RiskMapSpec::entropic(1.0), w0, lo);
        REQUIRE(ball.ok);
        const auto env = upper_envelope(RiskMapSpec::entropic(1.0), w0, ball.K);
        std::vector<V> drift(mcp.n_states);
        for (std::size_t x = 0; x < mcp.n_states; ++x)
            for (std::size_t a = 0; a < 2; ++a) drift[x].push_back(env(w0, mcp.row(x, a)));
        const auto fit = fit_drift(mcp, w0, drift, lo);
        CHECK(fit.satisfied);
        CHECK(fit.gamma0 < 1.0);
    }
}
