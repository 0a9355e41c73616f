#include "maxent/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Maximum-entropy exploration for tabular MDPs"};
    app.require_subcommand(1);

    maxent::CommandOptions options;
    std::string out;
    std::uint64_t seed = 0;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", options.config, "YAML run configuration")->required();
        sub->add_option("--out", out, "output directory");
        sub->add_option("--seed", seed, "overrides the config seed");
        sub->add_option("--override", options.overrides, "dotted.key=value, repeatable")->take_all();
    };
    auto* run = app.add_subcommand("run", "run the Frank-Wolfe driver and write its artifacts");
    auto* oracle = app.add_subcommand("oracle", "brute-force grid search over stationary policies");
    auto* sweep = app.add_subcommand("sweep", "run over the config's seeds and parameter grid");
    auto* export_env = app.add_subcommand("export-env", "write the configured environment as an MDP file");
    for (auto* sub : {run, oracle, sweep, export_env}) add_common(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? maxent::kExitOk : maxent::kExitConfig;
    }

    for (auto* sub : {run, oracle, sweep, export_env}) {
        if (sub->count("--out")) options.out = out;
        if (sub->count("--seed")) options.seed = seed;
    }
    if (*run) return maxent::cmd_run(options, std::cout, std::cerr);
    if (*oracle) return maxent::cmd_oracle(options, std::cout, std::cerr);
    if (*sweep) return maxent::cmd_sweep(options, std::cout, std::cerr);
    return maxent::cmd_export_env(options, std::cout, std::cerr);
}
