#include "qmap/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>

#include <json.hpp>

#include "qmap/classical.hpp"
#include "qmap/observables.hpp"
#include "qmap/spectral.hpp"

namespace qmap {

namespace {

using json = nlohmann::ordered_json;

constexpr int kAverageCount = 10;     // initial states per time-series run
constexpr int kMaxReported = 64;      // eigenvalues listed per method in reports
constexpr double kStabilityDelta = 1e-5;

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write to " + tmp);
        f << content;
        if (!f) throw ConfigError("write failed for " + tmp);
    }
    std::filesystem::rename(tmp, path);
}

json config_json(const ExperimentConfig& cfg) {
    json meta;
    meta["command"] = cfg.command;
    meta["N"] = cfg.N;
    meta["eps"] = cfg.eps;
    meta["k"] = cfg.k;
    meta["k2"] = cfg.k2;
    meta["kiter"] = cfg.kiter;
    meta["L"] = cfg.L;
    meta["T"] = cfg.T;
    meta["seed"] = cfg.seed;
    meta["format"] = cfg.format;
    meta["averaged_states"] = kAverageCount;
    meta["dense_guard"] = quantum_dense_guard();
    meta["classical_dense_guard"] = classical_dense_guard();
    return meta;
}

json spectrum_json(const SpectrumResult& res, int cap = kMaxReported) {
    json evs = json::array();
    const int n = std::min<int>(cap, static_cast<int>(res.eigenvalues.size()));
    for (int i = 0; i < n; ++i) {
        json e;
        e["re"] = res.eigenvalues[i].real();
        e["im"] = res.eigenvalues[i].imag();
        e["modulus"] = std::abs(res.eigenvalues[i]);
        e["stable"] = static_cast<bool>(res.stable[i]);
        evs.push_back(e);
    }
    json out;
    out["eigenvalues"] = evs;
    out["total_count"] = res.eigenvalues.size();
    return out;
}

double agreement_leading5(const SpectrumResult& a, const SpectrumResult& b) {
    double worst = 0.0;
    const int n = std::min<std::size_t>(5, a.eigenvalues.size());
    for (int i = 0; i < n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (const Complex& l : b.eigenvalues) best = std::min(best, std::abs(a.eigenvalues[i] - l));
        worst = std::max(worst, best);
    }
    return worst;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Reference decay rate for the sidecar: the chord-truncation eigenvalue when
// the retained block is small enough, otherwise the stable iteration value.
std::optional<double> reference_lambda1(const HilbertDim& dim, double k, double eps, int kiter) {
    if (eps <= 0.0) return std::nullopt;  // unitary regime, no decay rate
    CoarseGrainedPropagator prop = make_propagator(dim, k, eps);
    const int w = safe_truncation_window(prop.kernel);
    if (static_cast<long>(2 * w + 1) * (2 * w + 1) <= 4096) {
        SpectrumResult res = chord_truncation_spectrum(prop, w);
        return std::abs(res.leading_nontrivial());
    }
    DensityMatrix rho0 = coherent_state(dim, 0.3, 0.7);
    MomentSequence m =
        compute_moments([&](const DensityMatrix& r) { return apply_propagator(r, prop); }, rho0,
                        kiter);
    SpectrumResult res = iteration_spectrum_stable(m, kiter, kStabilityDelta);
    return std::abs(res.leading_nontrivial());
}

}  // namespace

void validate_config(const ExperimentConfig& cfg) {
    const bool quantum = cfg.command != "classical";
    if (cfg.command != "spectrum" && cfg.command != "classical" && cfg.command != "evolve" &&
        cfg.command != "echo" && cfg.command != "compare")
        throw ConfigError("unknown command '" + cfg.command + "'");
    if (quantum && cfg.N < 2) throw ConfigError("--N must be >= 2");
    if (cfg.eps < 0.0) throw ConfigError("--eps must be >= 0");
    if (cfg.k < 0.0 || cfg.k2 < 0.0) throw ConfigError("--k/--k2 must be >= 0");
    if (cfg.kiter < 2) throw ConfigError("--kiter must be >= 2");
    if ((cfg.command == "classical" || cfg.command == "compare") && cfg.L < 2)
        throw ConfigError("--L must be >= 2 for classical/compare");
    if ((cfg.command == "evolve" || cfg.command == "echo") && cfg.T < 1)
        throw ConfigError("--T must be >= 1");
    if (cfg.out.empty()) throw ConfigError("--out is required");
    const bool series = cfg.command == "evolve" || cfg.command == "echo";
    if (!cfg.format.empty()) {
        if (series && cfg.format != "csv")
            throw ConfigError("evolve/echo write csv (plus a json sidecar)");
        if (!series && cfg.format != "json")
            throw ConfigError(cfg.command + " writes json");
    }
}

void run_spectrum(const ExperimentConfig& cfg) {
    HilbertDim dim(cfg.N);
    CoarseGrainedPropagator prop = make_propagator(dim, cfg.k, cfg.eps);
    DensityMatrix rho0 = coherent_state(dim, 0.3, 0.7);
    MomentSequence m = compute_moments(
        [&](const DensityMatrix& r) { return apply_propagator(r, prop); }, rho0, cfg.kiter);
    SpectrumResult iter = iteration_spectrum_stable(m, cfg.kiter, kStabilityDelta);
    iter.meta = {cfg.N, cfg.eps, cfg.k, cfg.kiter};

    json methods;
    methods["iteration"] = spectrum_json(iter);

    std::optional<SpectrumResult> trunc;
    const int w = safe_truncation_window(prop.kernel);
    if (static_cast<long>(2 * w + 1) * (2 * w + 1) <= 4096 && w < dim.N) {
        trunc = chord_truncation_spectrum(prop, w);
        json t = spectrum_json(*trunc);
        t["window"] = w;
        methods["chord_truncation"] = t;
    } else {
        methods["chord_truncation"] = {{"skipped_reason", "retained block too large"}};
    }

    std::optional<SpectrumResult> dense;
    if (cfg.N <= quantum_dense_guard()) {
        dense = dense_spectrum(prop);
        methods["dense"] = spectrum_json(*dense);
    } else {
        methods["dense"] = {{"skipped_reason", "N exceeds QMAP_DENSE_GUARD"}};
    }

    double agreement = 0.0;
    if (trunc) agreement = std::max(agreement, agreement_leading5(iter, *trunc));
    if (dense) agreement = std::max(agreement, agreement_leading5(iter, *dense));
    if (trunc && dense) agreement = std::max(agreement, agreement_leading5(*trunc, *dense));

    json out;
    out["meta"] = config_json(cfg);
    out["eigenvalues"] = spectrum_json(iter)["eigenvalues"];
    out["methods"] = methods;
    out["method_agreement"] = agreement;
    out["unitary_regime"] = (cfg.eps == 0.0);
    atomic_write(cfg.out, out.dump(2) + "\n");
}

void run_classical(const ExperimentConfig& cfg) {
    ClassicalPropagator prop = build_classical_propagator(cfg.L, cfg.eps, PerturbedCatParams{cfg.k});
    const bool dense_ok = prop.dense_storage() && cfg.L <= classical_dense_guard();
    SpectrumResult res = classical_leading_spectrum(
        prop, cfg.kiter, dense_ok ? ClassicalMethod::dense : ClassicalMethod::moments);
    json out;
    out["meta"] = config_json(cfg);
    out["method"] = dense_ok ? "dense" : "moments";
    out["eigenvalues"] = spectrum_json(res)["eigenvalues"];
    atomic_write(cfg.out, out.dump(2) + "\n");
}

void run_compare(const ExperimentConfig& cfg) {
    HilbertDim dim(cfg.N);
    CoarseGrainedPropagator qprop = make_propagator(dim, cfg.k, cfg.eps);
    DensityMatrix rho0 = coherent_state(dim, 0.3, 0.7);
    MomentSequence m = compute_moments(
        [&](const DensityMatrix& r) { return apply_propagator(r, qprop); }, rho0, cfg.kiter);
    SpectrumResult quantum = iteration_spectrum_stable(m, cfg.kiter, kStabilityDelta);

    ClassicalPropagator cprop =
        build_classical_propagator(cfg.L, cfg.eps, PerturbedCatParams{cfg.k});
    const bool dense_ok = cprop.dense_storage() && cfg.L <= classical_dense_guard();
    SpectrumResult classical = classical_leading_spectrum(
        cprop, cfg.kiter, dense_ok ? ClassicalMethod::dense : ClassicalMethod::moments);

    json out;
    out["meta"] = config_json(cfg);
    out["meta"]["classical_method"] = dense_ok ? "dense" : "moments";
    out["quantum"] = spectrum_json(quantum)["eigenvalues"];
    out["classical"] = spectrum_json(classical)["eigenvalues"];
    json diff = json::array();
    const std::size_t n = std::min(quantum.eigenvalues.size(), classical.eigenvalues.size());
    for (std::size_t i = 0; i < n; ++i)
        diff.push_back(std::abs(std::abs(quantum.eigenvalues[i]) -
                                std::abs(classical.eigenvalues[i])));
    out["diff"] = diff;

    // Supplementary: the chord-truncation determination of the quantum side,
    // which stays accurate when the leading resonances are small.
    const int w = safe_truncation_window(qprop.kernel);
    if (static_cast<long>(2 * w + 1) * (2 * w + 1) <= 4096 && w < dim.N) {
        SpectrumResult t = chord_truncation_spectrum(qprop, w);
        json tj = spectrum_json(t, 16);
        tj["window"] = w;
        out["quantum_truncation"] = tj;
    }
    atomic_write(cfg.out, out.dump(2) + "\n");
}

void run_evolve(const ExperimentConfig& cfg) {
    const bool echo = cfg.command == "echo";
    HilbertDim dim(cfg.N);
    CoarseGrainedPropagator prop = make_propagator(dim, cfg.k, cfg.eps);
    std::optional<CoarseGrainedPropagator> prop2;
    if (echo) prop2 = make_propagator(dim, cfg.k2, cfg.eps);

    TimeSeries autoc = averaged_series(
        dim, [&](const DensityMatrix& r) { return autocorrelation_series(r, prop, cfg.T); },
        kAverageCount, cfg.seed);
    TimeSeries ent = averaged_series(
        dim, [&](const DensityMatrix& r) { return linear_entropy_series(r, prop, cfg.T, false); },
        kAverageCount, cfg.seed);
    // Average the subtracted purity (not its log) so the echo column and the
    // subtracted-entropy column are means of the same kind of quantity.
    TimeSeries pursub = averaged_series(
        dim,
        [&](const DensityMatrix& r) {
            TimeSeries s = linear_entropy_series(r, prop, cfg.T, true);
            for (double& v : s.values) v = std::exp(-v);
            return s;
        },
        kAverageCount, cfg.seed);
    std::optional<TimeSeries> losch;
    if (echo) {
        losch = averaged_series(
            dim, [&](const DensityMatrix& r) { return loschmidt_series(r, prop, *prop2, cfg.T); },
            kAverageCount, cfg.seed);
    }

    std::string csv = echo ? "n,autocorrelation,linear_entropy,linear_entropy_subtracted,loschmidt\n"
                           : "n,autocorrelation,linear_entropy,linear_entropy_subtracted\n";
    const std::size_t rows = std::min({autoc.values.size(), ent.values.size(),
                                       pursub.values.size(),
                                       echo ? losch->values.size() : autoc.values.size()});
    for (std::size_t n = 0; n < rows; ++n) {
        csv += std::to_string(n);
        csv += ',' + fmt17(autoc.values[n]);
        csv += ',' + fmt17(ent.values[n]);
        csv += ',' + fmt17(-std::log(pursub.values[n]));
        if (echo) csv += ',' + fmt17(losch->values[n]);
        csv += '\n';
    }
    atomic_write(cfg.out, csv);

    json side;
    side["meta"] = config_json(cfg);
    json windows, slopes;

    auto [elo, ehi] = early_window(ent, cfg.N);
    windows["early"] = {elo, ehi};
    // fit_linear_slope needs n_max > n_min + 2; fall back to a raw two-point
    // slope when the pre-saturation window is shorter than that.
    if (ehi >= elo + 3) {
        slopes["linear_entropy_early"] = fit_linear_slope(ent, elo, ehi);
    } else if (ehi >= elo + 1) {
        slopes["linear_entropy_early"] =
            (ent.values[ehi] - ent.values[elo]) / static_cast<double>(ehi - elo);
        slopes["linear_entropy_early_note"] = "window too short for least squares";
    } else {
        slopes["linear_entropy_early"] = nullptr;
        slopes["linear_entropy_early_note"] = "pre-saturation window degenerate";
    }

    auto fit_log = [&](const TimeSeries& s, const char* name) {
        auto [lo, hi] = late_window(s.values);
        windows[std::string("late_") + name] = {lo, hi};
        try {
            if (hi >= lo + 3)
                slopes[name] = fit_decay_rate(s, lo, hi);
            else if (hi >= lo + 1)
                slopes[name] = (std::log(std::abs(s.values[hi])) -
                                std::log(std::abs(s.values[lo]))) /
                               static_cast<double>(hi - lo);
            else
                slopes[name] = nullptr;
        } catch (const NumericalError& e) {
            slopes[name] = nullptr;
            slopes[std::string(name) + "_note"] = e.what();
        }
    };
    fit_log(autoc, "autocorrelation");
    fit_log(pursub, "subtracted_purity");
    if (!slopes["subtracted_purity"].is_null()) {
        // S_n^sub = -ln purity; its slope is minus the purity log-slope.
        slopes["linear_entropy_subtracted"] = -slopes["subtracted_purity"].get<double>();
    } else {
        slopes["linear_entropy_subtracted"] = nullptr;
    }
    if (echo) fit_log(*losch, "loschmidt");

    json refs;
    refs["lyapunov"] = lyapunov_exponent(PerturbedCatParams{cfg.k});
    auto l1 = reference_lambda1(dim, cfg.k, cfg.eps, cfg.kiter);
    refs["ln_lambda1"] = l1 ? json(std::log(*l1)) : json(nullptr);
    if (echo) {
        auto l1p = reference_lambda1(dim, cfg.k2, cfg.eps, cfg.kiter);
        refs["ln_lambda1_prime"] = l1p ? json(std::log(*l1p)) : json(nullptr);
    }
    side["slopes"] = slopes;
    side["references"] = refs;
    side["windows"] = windows;
    side["unitary_regime"] = (cfg.eps == 0.0);
    atomic_write(cfg.out + ".meta.json", side.dump(2) + "\n");
}

int run_experiment(const ExperimentConfig& cfg) {
    try {
        validate_config(cfg);
        if (cfg.command == "spectrum")
            run_spectrum(cfg);
        else if (cfg.command == "classical")
            run_classical(cfg);
        else if (cfg.command == "compare")
            run_compare(cfg);
        else
            run_evolve(cfg);
        return 0;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    } catch (const ResourceLimitError& e) {
        std::fprintf(stderr, "resource guard: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return 3;
    }
}

}  // namespace qmap
