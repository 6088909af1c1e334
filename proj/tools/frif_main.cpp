#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "frif/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"fractal interpolation via Read-Bajractarevic fixed points"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    double eps = -1.0;
    int depth = -1, resolution = -1;
    long long seed = 0;

    auto add_common = [&](CLI::App* cmd, bool needs_config) {
        if (needs_config)
            cmd->add_option("--config", config_path, "problem config file")->required();
        cmd->add_option("--out", out_dir, "output directory for artifacts");
        cmd->add_option("--eps", eps, "solver tolerance override");
        cmd->add_option("--depth", depth, "trajectory depth override");
        cmd->add_option("--resolution", resolution, "grid resolution override");
        cmd->add_option("--seed", seed, "rng seed (property-test fixtures only)");
    };

    CLI::App* check = app.add_subcommand("check", "run certification checks only");
    CLI::App* solve = app.add_subcommand("solve", "iterate to the fixed point and export");
    CLI::App* traj = app.add_subcommand("trajectory", "run a backward trajectory");
    CLI::App* quat = app.add_subcommand("quat", "solve a quaternionic problem");
    CLI::App* figures = app.add_subcommand("figures", "write the builtin figure set");
    add_common(check, true);
    add_common(solve, true);
    add_common(traj, true);
    add_common(quat, true);
    add_common(figures, false);

    CLI11_PARSE(app, argc, argv);

    frif::RunOptions opts;
    opts.out_dir = out_dir;
    if (eps > 0.0) opts.eps = eps;
    if (depth > 0) opts.depth = depth;
    if (resolution > 0) opts.resolution = resolution;

    try {
        if (figures->parsed()) {
            return frif::run_figures(out_dir.empty() ? "figures" : out_dir, std::cout);
        }
        if (check->parsed()) opts.command = "check";
        else if (traj->parsed()) opts.command = "trajectory";
        else if (quat->parsed()) opts.command = "quat";
        else opts.command = "solve";

        frif::ProblemConfig cfg = [&] {
            try {
                return frif::load_config(config_path);
            } catch (const frif::IoError& e) {
                // an unreadable config is a config error, unlike export failures
                std::cerr << "config error: " << e.what() << "\n";
                std::exit(frif::kExitConfig);
            }
        }();
        return frif::run(cfg, opts, std::cout);
    } catch (const frif::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return frif::kExitConfig;
    } catch (const frif::SemanticError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return frif::kExitConfig;
    } catch (const frif::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return frif::kExitCertification;
    } catch (const frif::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return frif::kExitCertification;
    }
}
