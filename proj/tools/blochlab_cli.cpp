#include <iostream>

#include <CLI11.hpp>

#include "blochlab/accept.hpp"

int main(int argc, char** argv) {
    CLI::App app{"blochlab: lattice fermion current bounds, dressed charges, and transport indices"};
    app.require_subcommand(1);

    std::string out_path;
    int workers = 1;
    double tol_scale = 1.0;
    app.add_option("--out", out_path, "CSV output path (overrides the config)");
    app.add_option("--workers", workers, "worker pool size for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--tol-scale", tol_scale, "multiply every tolerance window")
        ->check(CLI::PositiveNumber);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run an experiment described by a config file");
    run->fallthrough(); // let the global flags appear after the subcommand
    run->add_option("config", config_path, "JSON config file")->required()
        ->check(CLI::ExistingFile);

    auto* list = app.add_subcommand("list-presets", "list the named experiments");
    auto* accept = app.add_subcommand("accept", "run the full acceptance suite");
    accept->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (list->parsed()) {
            for (const auto& name : blochlab::experiment_names()) std::cout << name << '\n';
            return 0;
        }
        if (accept->parsed()) {
            auto report = blochlab::run_acceptance(std::cout, tol_scale, workers);
            return report.all_passed() ? 0 : 1;
        }
        // run
        blochlab::ExperimentConfig config = blochlab::ExperimentConfig::from_file(config_path);
        if (!out_path.empty()) config.out = out_path;
        if (workers != 1) config.workers = workers;
        if (tol_scale != 1.0) config.tol_scale = tol_scale;
        blochlab::RunResult result = blochlab::run_experiment(config);
        for (const auto& line : result.checks) std::cout << line << '\n';
        if (config.out.empty()) std::cout << result.series.csv();
        return result.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
