#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "qmap/channels.hpp"
#include "qmap/types.hpp"

namespace qmap {

enum class SeriesKind { autocorrelation, linear_entropy, loschmidt };

struct TimeSeriesMeta {
    int N = 0;
    double eps = 0.0;
    double k = 0.0;
    double k2 = 0.0;
    int averaged = 1;
};

struct TimeSeries {
    std::vector<double> values;  // indexed by step n = 0..T
    SeriesKind kind = SeriesKind::autocorrelation;
    TimeSeriesMeta meta;
    bool truncated = false;  // underflow cut before step T
};

/// C_n = Re tr(rho0 rho_n) - 1/N with rho_n = S^n rho0.
TimeSeries autocorrelation_series(const DensityMatrix& rho0,
                                  const CoarseGrainedPropagator& prop, int T);

/// S_n = -ln tr rho_n^2; with subtract_invariant the traceless part
/// delta_n = S^n (rho0 - I/N) is evolved instead and -ln tr delta_n^2 is
/// reported (the approach-to-equilibrium variant).
TimeSeries linear_entropy_series(const DensityMatrix& rho0,
                                 const CoarseGrainedPropagator& prop, int T,
                                 bool subtract_invariant);

/// M_n = Re <S^n(rho0 - I/N), S'^n(rho0 - I/N)>_HS for two propagators with
/// the same N.
TimeSeries loschmidt_series(const DensityMatrix& rho0, const CoarseGrainedPropagator& prop,
                            const CoarseGrainedPropagator& prop_alt, int T);

/// Least-squares slope of ln|values| over steps [n_min, n_max]. Throws
/// NumericalError naming the first index with a zero value.
double fit_decay_rate(const TimeSeries& series, int n_min, int n_max);

/// Least-squares slope of the raw values (used for the entropy series,
/// which is already logarithmic).
double fit_linear_slope(const TimeSeries& series, int n_min, int n_max);

/// Deterministic coherent-state centers drawn from `seed`.
std::vector<std::pair<double, double>> coherent_centers(int count, std::uint64_t seed);

/// Pointwise mean of per-state series over `count` coherent states at
/// seeded pseudo-random centers.
TimeSeries averaged_series(const HilbertDim& dim,
                           const std::function<TimeSeries(const DensityMatrix&)>& generator,
                           int count, std::uint64_t seed);

/// Pre-saturation window [0, n_hi]: the consecutive steps with S_n < 0.8 ln N.
std::pair<int, int> early_window(const TimeSeries& entropy, int N);

/// Last third of the longest prefix whose magnitudes stay above the
/// underflow floor max(1e-15, 1e-12 * max|v|).
std::pair<int, int> late_window(const std::vector<double>& values);

}  // namespace qmap
