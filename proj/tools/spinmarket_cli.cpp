/*
 * SPDX-FileCopyrightText: 2026 spinmarket contributors
 * SPDX-License-Identifier: MIT
 */
#include <cstdio>
#include <exception>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spinmarket/commands.hpp"

namespace {

struct CommonArgs {
    std::string config;
    std::string out = ".";
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "configuration file")
        ->required()
        ->check(CLI::ExistingFile);
    cmd->add_option("--out", args.out, "output directory");
    cmd->add_option("--seed", args.seed,
                    "override the seed from the configuration");
}

spinmarket::CommandContext context_of(const CommonArgs& args) {
    return {args.config, args.out, args.seed};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Three-state spin-lattice market simulator and statistics toolkit"};
    app.require_subcommand(1);

    CommonArgs sim_args;
    CLI::App* sim = app.add_subcommand(
        "simulate", "run one simulation and export magnetization and returns");
    add_common(sim, sim_args);

    CommonArgs stats_args;
    std::string stats_returns;
    CLI::App* stats = app.add_subcommand(
        "stats", "histograms, CCDF, autocorrelations, and fits of a returns file");
    add_common(stats, stats_args);
    stats->add_option("returns", stats_returns, "returns CSV (t,r | t,return | t,price)")
        ->required()
        ->check(CLI::ExistingFile);

    CommonArgs iet_args;
    std::string iet_returns;
    CLI::App* iet = app.add_subcommand(
        "iet", "interevent-time distributions with analytic overlays");
    add_common(iet, iet_args);
    iet->add_option("returns", iet_returns, "returns CSV (t,r | t,return | t,price)")
        ->required()
        ->check(CLI::ExistingFile);

    CommonArgs sweep_args;
    bool sweep_fresh = false;
    CLI::App* sweep = app.add_subcommand(
        "sweep", "parallel 4-D parameter sweep with resume support");
    add_common(sweep, sweep_args);
    sweep->add_flag("--fresh", sweep_fresh,
                    "discard any existing manifest and restart the sweep");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) {
            spinmarket::cmd_simulate(context_of(sim_args));
        } else if (stats->parsed()) {
            spinmarket::cmd_stats(context_of(stats_args), stats_returns);
        } else if (iet->parsed()) {
            spinmarket::cmd_iet(context_of(iet_args), iet_returns);
        } else if (sweep->parsed()) {
            spinmarket::cmd_sweep(context_of(sweep_args), sweep_fresh);
        }
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 0;
}
