#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qmap {

/// Invalid flag combinations and values; maps to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flag-level experiment description shared by all CLI commands.
struct ExperimentConfig {
    std::string command;  // spectrum | classical | evolve | echo | compare
    int N = 0;
    double eps = -1.0;
    double k = 0.01;
    double k2 = 0.02;   // second map parameter (echo)
    int kiter = 12;     // Krylov truncation size
    int L = 0;          // classical grid side
    int T = 40;         // time steps
    std::uint64_t seed = 0;
    std::string out;
    std::string format;  // json | csv; empty means the command default
};

void validate_config(const ExperimentConfig& cfg);

/// Quantum spectrum by all methods the resource guards allow; JSON report.
void run_spectrum(const ExperimentConfig& cfg);

/// Classical transfer-operator spectrum (dense under the guard, else
/// moments); JSON report.
void run_classical(const ExperimentConfig& cfg);

/// Paired quantum/classical leading spectra at matched (eps, k); JSON report.
void run_compare(const ExperimentConfig& cfg);

/// Time series (autocorrelation, linear entropy, optional Loschmidt echo)
/// as CSV plus a JSON sidecar (out + ".meta.json") with fitted slopes,
/// reference decay rates and the fit windows.
void run_evolve(const ExperimentConfig& cfg);

/// Dispatch on cfg.command; exit codes: 0 ok, 1 config, 2 resource guard,
/// 3 numerical failure.
int run_experiment(const ExperimentConfig& cfg);

}  // namespace qmap
