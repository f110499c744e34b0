// Command-line front end: validate parameters, compute exact pmfs and
// moments, simulate paths, tabulate return times, run convergence checks,
// and regenerate the simulation-study histogram grid.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fracbin/fracbin.hpp"

namespace {

void add_spec_flags(CLI::App* cmd, fracbin::RunConfig& cfg) {
    cmd->add_option("--process", cfg.raw.process,
                    "process tag: gbp1 | gbp1star | gbp2 | gbp2star | fpp")
        ->required();
    cmd->add_option("--p", [&cfg](const CLI::results_t& r) { cfg.raw.p = std::stod(r[0]); return true; },
                    "success probability (stationary family)");
    cmd->add_option("--H", [&cfg](const CLI::results_t& r) { cfg.raw.H = std::stod(r[0]); return true; },
                    "Hurst-type exponent");
    cmd->add_option("--c", [&cfg](const CLI::results_t& r) { cfg.raw.c = std::stod(r[0]); return true; },
                    "correlation amplitude");
    cmd->add_option("--lambda", [&cfg](const CLI::results_t& r) { cfg.raw.lambda = std::stod(r[0]); return true; },
                    "intensity (horizon family)");
    cmd->add_option("--mu", [&cfg](const CLI::results_t& r) { cfg.raw.mu = std::stod(r[0]); return true; },
                    "waiting-time order (fpp)");
    cmd->add_option("--nu", [&cfg](const CLI::results_t& r) { cfg.raw.nu = std::stod(r[0]); return true; },
                    "rate scale (fpp)");
}

void add_run_flags(CLI::App* cmd, fracbin::RunConfig& cfg, bool with_spec_n) {
    if (with_spec_n)
        cmd->add_option("--n", [&cfg](const CLI::results_t& r) {
            cfg.n = std::stoll(r[0]);
            if (!cfg.raw.n) cfg.raw.n = cfg.n;  // horizon defaults to the window length
            return true;
        }, "path length / horizon");
    cmd->add_option("--reps", cfg.reps, "replications");
    cmd->add_option("--seed", cfg.seed, "random seed");
    cmd->add_option("--kmax", cfg.kmax, "return-time truncation horizon");
    cmd->add_option("--out", cfg.out, "output directory");
    cmd->add_option("--format", cfg.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalized Bernoulli processes and the fractional Poisson process"};
    app.require_subcommand(1);

    fracbin::RunConfig cfg;
    for (const char* name : {"validate", "exact", "simulate", "returns", "converge"}) {
        CLI::App* sub = app.add_subcommand(name, "");
        add_spec_flags(sub, cfg);
        add_run_flags(sub, cfg, true);
        sub->callback([&cfg, name] { cfg.command = name; });
    }
    CLI::App* figures = app.add_subcommand("figures", "reproduce the histogram grid");
    add_run_flags(figures, cfg, true);
    figures->callback([&cfg] { cfg.command = "figures"; });

    CLI11_PARSE(app, argc, argv);
    return fracbin::run_command(cfg, std::cout, std::cerr);
}
