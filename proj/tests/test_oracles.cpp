#include "doctest.h"

#include "riskmdp/linalg.hpp"
#include "riskmdp/models.hpp"
#include "riskmdp/oracles.hpp"
#include "riskmdp/solver.hpp"
#include "test_support.hpp"

using namespace riskmdp;
using V = std::vector<double>;

TEST_CASE("dense solve and primitivity") {
    const linalg::Dense A{{2.0, 1.0, 0.0}, {1.0, 3.0, 1.0}, {0.0, 1.0, 4.0}};
    const V x{1.0, -2.0, 0.5};
    const auto b = testsupport::mat_vec(A, x);
    CHECK(testsupport::max_abs_diff(linalg::solve(A, b), x) <= 1e-14);
    CHECK_THROWS_AS(linalg::solve({{1.0, 2.0}, {2.0, 4.0}}, {1.0, 2.0}), std::runtime_error);

    CHECK(linalg::is_primitive({{0.5, 0.5}, {0.5, 0.5}}));
    CHECK_FALSE(linalg::is_primitive({{0.0, 1.0}, {1.0, 0.0}}));                      // periodic
    CHECK_FALSE(linalg::is_primitive({{1.0, 0.0}, {0.5, 0.5}}));                      // reducible
    CHECK(linalg::is_primitive({{0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}, {0.5, 0.5, 0.0}}));  // cycles 2 and 3
}

TEST_CASE("spectral entropic oracle") {
    const linalg::Dense U{{0.5, 0.5}, {0.5, 0.5}};
    auto r = entropic_spectral_rho(U, {0.0, 1.0}, 1.0);
    CHECK(std::abs(r.rho - std::log((1.0 + std::exp(1.0)) / 2.0)) <= 1e-13);
    CHECK(r.rho == doctest::Approx(0.620115).epsilon(1e-6));
    CHECK(r.h[0] == 0.0);

    const linalg::Dense P{{0.6, 0.4, 0.0}, {0.1, 0.2, 0.7}, {0.5, 0.0, 0.5}};
    r = entropic_spectral_rho(P, {2.5, 2.5, 2.5}, 0.7);
    CHECK(r.rho == doctest::Approx(2.5).epsilon(1e-13));
    for (double h : r.h) CHECK(std::abs(h) <= 1e-12);

    const auto neutral = neutral_average_cost(P, {0.0, 1.0, 3.0});
    r = entropic_spectral_rho(P, {0.0, 1.0, 3.0}, 1e-8);
    CHECK(std::abs(r.rho - neutral.rho) <= 1e-6);

    CHECK_THROWS_AS(entropic_spectral_rho({{0.0, 1.0}, {1.0, 0.0}}, {0.0, 1.0}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(entropic_spectral_rho(U, {0.0, 1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("spectral solution satisfies the Poisson equation") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto mcp = testsupport::random_mcp(6, 1, seed, 0.3);
        const auto P = policy_matrix(mcp, DeterministicPolicy(6, 0));
        if (!linalg::is_primitive(P)) continue;
        for (double lambda : {0.5, 2.0, -1.0}) {
            const auto r = entropic_spectral_rho(P, policy_cost(mcp, DeterministicPolicy(6, 0)), lambda);
            CHECK(poisson_residual(mcp, RiskMapSpec::entropic(lambda), r.rho, r.h) <= 1e-9);
        }
    }
}

TEST_CASE("stationary neutral oracle") {
    auto r = neutral_average_cost({{0.5, 0.5}, {0.5, 0.5}}, {0.0, 1.0});
    CHECK(r.rho == doctest::Approx(0.5));
    r = neutral_average_cost({{0.6, 0.4}, {0.3, 0.7}}, {0.0, 1.0});
    CHECK(r.rho == doctest::Approx(4.0 / 7.0).epsilon(1e-14));
    r = neutral_average_cost({{0.6, 0.4}, {0.3, 0.7}}, {2.0, 2.0});
    CHECK(r.rho == doctest::Approx(2.0));
    for (double h : r.h) CHECK(std::abs(h) <= 1e-14);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto mcp = testsupport::random_mcp(7, 1, seed, 0.3);
        const DeterministicPolicy pi(7, 0);
        const auto P = policy_matrix(mcp, pi);
        if (!linalg::is_primitive(P)) continue;
        const auto o = neutral_average_cost(P, policy_cost(mcp, pi), 2);
        CHECK(o.h[2] == 0.0);
        CHECK(poisson_residual(mcp, RiskMapSpec::neutral(), o.rho, o.h) <= 1e-10);
    }
}

TEST_CASE("policy enumeration") {
    SUBCASE("single action") {
        const auto mcp = builtin_chain("biased2");
        const auto en = enumerate_policies(mcp, RiskMapSpec::entropic(1.0));
        REQUIRE(en.table.size() == 1);
        const auto sol = relative_value_iteration(mcp, RiskMapSpec::entropic(1.0));
        CHECK(std::abs(en.best_rho - sol.rho) <= 1e-9);
    }
    SUBCASE("dominated action") {
        FiniteMCP mcp = builtin_chain("biased2");
        for (std::size_t x = 0; x < 2; ++x) {
            mcp.actions[x].push_back("worse");
            mcp.transition[x].push_back(mcp.transition[x][0]);
            mcp.cost[x].push_back(mcp.cost[x][0] + 0.5);
        }
        const auto en = enumerate_policies(mcp, RiskMapSpec::neutral());
        CHECK(en.table.size() == 4);
        CHECK(en.best_policy == DeterministicPolicy{0, 0});
    }
    SUBCASE("seeded model agrees with the solver") {
        const auto mcp = builtin_chain("random_seeded", {3, 2, 7});
        const auto en = enumerate_policies(mcp, RiskMapSpec::entropic(1.0));
        const auto sol = relative_value_iteration(mcp, RiskMapSpec::entropic(1.0));
        CHECK(std::abs(en.best_rho - sol.rho) <= 1e-6);
        CHECK(en.table.size() == 8);
        for (const auto& row : en.table) CHECK(row.rho >= en.best_rho);
    }
    SUBCASE("all kinds agree with the solver on small models") {
        for (std::uint64_t seed = 1; seed <= 5; ++seed) {
            const auto mcp = testsupport::random_mcp(3, 3, seed);
            for (const auto& spec : {RiskMapSpec::neutral(), RiskMapSpec::entropic(-0.5), RiskMapSpec::density_band(0.2, 3.0),
                                     RiskMapSpec::mean_semideviation(0.7, 1.5),
                                     RiskMapSpec::shortfall(PiecewiseLinearUtility({0.0}, {0.5, 2.0}))}) {
                const auto en = enumerate_policies(mcp, spec);
                const auto sol = relative_value_iteration(mcp, spec);
                REQUIRE(sol.converged);
                CHECK(std::abs(en.best_rho - sol.rho) <= 1e-6);
            }
        }
    }
    SUBCASE("budget") {
        const auto mcp = testsupport::random_mcp(14, 2, 1);
        CHECK_THROWS_AS(enumerate_policies(mcp, RiskMapSpec::neutral()), std::invalid_argument);
    }
}

TEST_CASE("path enumeration") {
    const auto u = builtin_chain("uniform2");
    const DeterministicPolicy stay{0, 0};
    auto j = path_enumeration_entropic(u, stay, 1.0, 0);
    CHECK(j == V{0.0, 1.0});
    j = path_enumeration_entropic(u, stay, 1.0, 1);
    const double tail = std::log(0.5 * (1.0 + std::exp(1.0)));
    CHECK(j[0] == doctest::Approx(0.0 + tail).epsilon(1e-15));
    CHECK(j[1] == doctest::Approx(1.0 + tail).epsilon(1e-15));

    const auto law = path_total_cost_law(u, stay, 2, 1);
    double mass = 0.0;
    for (double p : law.prob) mass += p;
    CHECK(mass == doctest::Approx(1.0));

    const auto big = testsupport::random_mcp(10, 1, 2);
    CHECK_THROWS_AS(path_enumeration_entropic(big, DeterministicPolicy(10, 0), 1.0, 7), std::invalid_argument);
}

TEST_CASE("entropic nesting equals the one-shot map on total cost") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const std::size_t n = 2 + seed % 4;
        const auto mcp = testsupport::random_mcp(n, 2, seed, 0.3);
        DeterministicPolicy pi(n);
        for (std::size_t x = 0; x < n; ++x) pi[x] = (x + seed) % 2;
        for (std::size_t T : {0u, 1u, 3u, 6u}) {
            for (double lambda : {1.0, -0.7}) {
                const auto paths = path_enumeration_entropic(mcp, pi, lambda, T);
                const auto nested = finite_horizon_risk(mcp, RiskMapSpec::entropic(lambda), {pi}, T);
                CHECK(testsupport::max_abs_diff(paths, nested) <= 1e-12);
                const auto generic = path_enumeration_risk(mcp, RiskMapSpec::entropic(lambda), pi, T);
                CHECK(testsupport::max_abs_diff(generic, nested) <= 1e-12);
            }
        }
    }
}

TEST_CASE("mean-semideviation nesting is not the one-shot map") {
    // two steps of a fair coin: cost 1 on heads. The nested map charges the
    // deviation penalty at every stage, the one-shot map only once.
    const auto mcp = testsupport::chain({{0.5, 0.5}, {0.5, 0.5}}, {0.0, 1.0});
    const auto spec = RiskMapSpec::mean_semideviation(1.0, 1.0);
    const auto nested = finite_horizon_risk(mcp, spec, {DeterministicPolicy{0, 0}}, 2);
    const auto once = path_enumeration_risk(mcp, spec, {0, 0}, 2);
    CHECK(std::abs(nested[0] - once[0]) >= 1e-3);
    // neutral is time consistent as well
    const auto nn = finite_horizon_risk(mcp, RiskMapSpec::neutral(), {DeterministicPolicy{0, 0}}, 3);
    const auto no = path_enumeration_risk(mcp, RiskMapSpec::neutral(), {0, 0}, 3);
    CHECK(testsupport::max_abs_diff(nn, no) <= 1e-12);
}
