#include <iostream>

#include "CLI11.hpp"
#include "riskmdp/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Average-risk solver and certificate checker for finite Markov control processes"};
    app.require_subcommand(1);

    riskmdp::cli::CliOptions opts;
    std::string output;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opts.config, "Run configuration (JSON)")->required();
        sub->add_option("--output", output, "Output directory (overrides output_dir)");
        sub->add_option("--jobs", opts.jobs, "Parallel sweep points")->check(CLI::PositiveNumber);
        sub->add_option("--seed", opts.seed, "Seed for sampled checks and random models");
    };
    auto* solve = app.add_subcommand("solve", "Relative value iteration");
    auto* verify = app.add_subcommand("verify", "Check certificate requests");
    auto* sweep = app.add_subcommand("sweep", "Solve along a parameter axis");
    auto* oracle = app.add_subcommand("oracle", "Enumerate deterministic stationary policies");
    for (auto* sub : {solve, verify, sweep, oracle}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : riskmdp::cli::kExitConfig;
    }
    if (!output.empty()) opts.output = output;

    if (solve->parsed()) return riskmdp::cli::cmd_solve(opts);
    if (verify->parsed()) return riskmdp::cli::cmd_verify(opts);
    if (sweep->parsed()) return riskmdp::cli::cmd_sweep(opts);
    return riskmdp::cli::cmd_oracle(opts);
}
