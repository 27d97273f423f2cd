// ksdiv.cpp: batch driver: classify | region-scan | witness.
// Exit codes: 0 success, 2 config/usage error, 3 numerical failure,
// 4 internal invariant breach.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ksdiv/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qubit channel divisibility toolkit (positivity / Kadison-Schwarz / CP)"};
    app.fallthrough();
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0, budget = 0;
    double t_max = 0.0;
    int grid = 0;

    app.add_option("--config", config_path, "run configuration file")->required();
    app.add_option("--out", out_dir, "output directory (default: current)");
    auto* opt_seed = app.add_option("--seed", seed, "override configured RNG seed");
    auto* opt_budget = app.add_option("--budget", budget, "override witness-search budget");
    auto* opt_tmax = app.add_option("--t-max", t_max, "override time horizon");
    auto* opt_grid = app.add_option("--grid", grid, "override number of time grid points");

    auto* sub_classify =
        app.add_subcommand("classify", "scan a rate model and classify divisibility over time");
    auto* sub_region =
        app.add_subcommand("region-scan", "map the positivity / KS / CP regions in map space");
    app.add_subcommand("witness", "search for a Kadison-Schwarz violation witness");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int r = app.exit(e);
        return r == 0 ? 0 : 2;
    }

    try {
        ksdiv::cli::RunConfig rc = ksdiv::cli::load_run_config_file(config_path);
        if (opt_seed->count()) rc.seed = seed;
        if (opt_budget->count()) {
            if (budget < 1) throw ksdiv::cli::ConfigError("--budget must be at least 1");
            rc.budget = budget;
        }
        if (opt_tmax->count()) {
            if (!(t_max > 0.0)) throw ksdiv::cli::ConfigError("--t-max must be positive");
            rc.t_max = t_max;
        }
        if (opt_grid->count()) {
            if (grid < 2) throw ksdiv::cli::ConfigError("--grid must be at least 2");
            rc.grid = grid;
        }

        ksdiv::cli::CommandResult res;
        if (*sub_classify)
            res = ksdiv::cli::cmd_classify(rc, out_dir);
        else if (*sub_region)
            res = ksdiv::cli::cmd_region_scan(rc, out_dir);
        else
            res = ksdiv::cli::cmd_witness(rc, out_dir);

        std::cout << res.summary;
        for (const std::string& f : res.files) std::cout << "wrote " << f << "\n";
        return 0;
    } catch (const ksdiv::cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::logic_error& e) {
        std::cerr << "internal invariant breach: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 3;
    }
}
