#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "riskmdp/kernels.hpp"
#include "riskmdp/models.hpp"

using namespace riskmdp;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

const FiniteMCP& diffusion_grid(std::size_t points) {
    static std::map<std::size_t, FiniteMCP> cache;
    auto it = cache.find(points);
    if (it != cache.end()) return it->second;
    DiffusionSpec spec;
    spec.A = {{0.5}};
    spec.D = {{1.0}};
    spec.actions = {{"left", {-0.5}, {}}, {"right", {0.5}, {}}};
    GridSpec grid;
    grid.points = points;
    auto model = discretize_diffusion(spec, grid);
    auto mcp = attach_cost(model.mcp, QuadraticCost{0.1, {}});
    return cache.emplace(points, std::move(mcp)).first->second;
}

void BM_SeminormSerial(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto v = random_vector(n, 1);
    const std::vector<double> w(n, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::seminorm_serial(v, w));
}

void BM_SeminormParallel(benchmark::State& state) {
    const auto n = static_cast<std::size_t>(state.range(0));
    const auto v = random_vector(n, 1);
    const std::vector<double> w(n, 1.0);
    for (auto _ : state) benchmark::DoNotOptimize(kernels::seminorm_parallel(v, w));
}

void greedy_sweep(benchmark::State& state, const RiskMapSpec& spec, bool parallel) {
    const auto& mcp = diffusion_grid(static_cast<std::size_t>(state.range(0)));
    const auto v = random_vector(mcp.n_states, 2);
    std::vector<double> out(mcp.n_states);
    std::vector<std::size_t> choice(mcp.n_states);
    for (auto _ : state) {
        if (parallel)
            kernels::greedy_sweep_parallel(mcp, spec, v, out, choice);
        else
            kernels::greedy_sweep_serial(mcp, spec, v, out, choice);
        benchmark::DoNotOptimize(out.data());
    }
}

void BM_GreedySerial(benchmark::State& state, RiskMapSpec spec) { greedy_sweep(state, spec, false); }
void BM_GreedyParallel(benchmark::State& state, RiskMapSpec spec) { greedy_sweep(state, spec, true); }

}  // namespace

BENCHMARK(BM_SeminormSerial)->Arg(201)->Arg(1001)->Arg(4001);
BENCHMARK(BM_SeminormParallel)->Arg(201)->Arg(1001)->Arg(4001);
BENCHMARK_CAPTURE(BM_GreedySerial, entropic, RiskMapSpec::entropic(1.0))->Arg(201)->Arg(801);
BENCHMARK_CAPTURE(BM_GreedyParallel, entropic, RiskMapSpec::entropic(1.0))->Arg(201)->Arg(801);
BENCHMARK_CAPTURE(BM_GreedySerial, band, RiskMapSpec::density_band(0.5, 2.0))->Arg(201)->Arg(801);
BENCHMARK_CAPTURE(BM_GreedyParallel, band, RiskMapSpec::density_band(0.5, 2.0))->Arg(201)->Arg(801);

BENCHMARK_MAIN();
