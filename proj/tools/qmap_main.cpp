#include <CLI11.hpp>

#include "qmap/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"qmap: coarse-grained quantum maps on the torus and their leading spectra"};
    qmap::ExperimentConfig cfg;

    app.add_option("--command", cfg.command,
                   "spectrum | classical | evolve | echo | compare")
        ->required();
    app.add_option("--N", cfg.N, "Hilbert-space dimension");
    app.add_option("--eps", cfg.eps, "coarse-graining width (fraction of the torus)");
    app.add_option("--k", cfg.k, "kick strength")->capture_default_str();
    app.add_option("--k2", cfg.k2, "second kick strength (echo)")->capture_default_str();
    app.add_option("--kiter", cfg.kiter, "Krylov truncation size")->capture_default_str();
    app.add_option("--L", cfg.L, "classical grid side");
    app.add_option("--T", cfg.T, "time steps")->capture_default_str();
    app.add_option("--seed", cfg.seed, "RNG seed for initial-state centers")
        ->capture_default_str();
    app.add_option("--out", cfg.out, "output path");
    app.add_option("--format", cfg.format, "json | csv (per-command default)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    return qmap::run_experiment(cfg);
}
