#include "qmap/observables.hpp"

#include <cmath>
#include <random>

namespace qmap {

namespace {

DensityMatrix maximally_mixed(int N) {
    return Matrix::Identity(N, N) / static_cast<double>(N);
}

double ls_slope(const std::vector<double>& y, int lo, int hi) {
    const int n = hi - lo + 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = lo; i <= hi; ++i) {
        sx += i;
        sy += y[i];
        sxx += static_cast<double>(i) * i;
        sxy += static_cast<double>(i) * y[i];
    }
    const double denom = n * sxx - sx * sx;
    return (n * sxy - sx * sy) / denom;
}

void check_window(const TimeSeries& s, int n_min, int n_max) {
    if (n_max <= n_min + 2)
        throw std::invalid_argument("fit window must satisfy n_max > n_min + 2");
    if (n_min < 0 || n_max >= static_cast<int>(s.values.size()))
        throw std::invalid_argument("fit window out of range");
}

}  // namespace

TimeSeries autocorrelation_series(const DensityMatrix& rho0,
                                  const CoarseGrainedPropagator& prop, int T) {
    if (T < 1) throw std::invalid_argument("autocorrelation_series: T must be >= 1");
    const int N = prop.N();
    TimeSeries s;
    s.kind = SeriesKind::autocorrelation;
    s.meta = {N, prop.kernel.epsilon, prop.unitary.params.k, 0.0, 1};
    s.values.reserve(T + 1);
    DensityMatrix rho = rho0;
    for (int n = 0; n <= T; ++n) {
        s.values.push_back(hs_inner(rho0, rho).real() - 1.0 / N);
        if (n < T) rho = apply_propagator(rho, prop);
    }
    return s;
}

TimeSeries linear_entropy_series(const DensityMatrix& rho0,
                                 const CoarseGrainedPropagator& prop, int T,
                                 bool subtract_invariant) {
    if (T < 1) throw std::invalid_argument("linear_entropy_series: T must be >= 1");
    const int N = prop.N();
    TimeSeries s;
    s.kind = SeriesKind::linear_entropy;
    s.meta = {N, prop.kernel.epsilon, prop.unitary.params.k, 0.0, 1};
    // S is linear, so evolving the traceless part directly equals
    // subtracting the invariant state from each iterate.
    DensityMatrix cur = subtract_invariant ? DensityMatrix(rho0 - maximally_mixed(N)) : rho0;
    for (int n = 0; n <= T; ++n) {
        const double p = hs_inner(cur, cur).real();
        if (!(p > 1e-300)) {
            s.truncated = true;
            break;
        }
        s.values.push_back(-std::log(p));
        if (n < T) cur = apply_propagator(cur, prop);
    }
    return s;
}

TimeSeries loschmidt_series(const DensityMatrix& rho0, const CoarseGrainedPropagator& prop,
                            const CoarseGrainedPropagator& prop_alt, int T) {
    if (T < 1) throw std::invalid_argument("loschmidt_series: T must be >= 1");
    if (prop.N() != prop_alt.N())
        throw std::invalid_argument("loschmidt_series: propagators differ in N");
    const int N = prop.N();
    TimeSeries s;
    s.kind = SeriesKind::loschmidt;
    s.meta = {N, prop.kernel.epsilon, prop.unitary.params.k, prop_alt.unitary.params.k, 1};
    DensityMatrix a = rho0 - maximally_mixed(N);
    DensityMatrix b = a;
    for (int n = 0; n <= T; ++n) {
        s.values.push_back(hs_inner(a, b).real());
        if (n < T) {
            a = apply_propagator(a, prop);
            b = apply_propagator(b, prop_alt);
        }
    }
    return s;
}

double fit_decay_rate(const TimeSeries& series, int n_min, int n_max) {
    check_window(series, n_min, n_max);
    std::vector<double> logs(series.values.size(), 0.0);
    for (int i = n_min; i <= n_max; ++i) {
        const double a = std::abs(series.values[i]);
        if (!(a > 0.0))
            throw NumericalError("fit_decay_rate: zero value at index " + std::to_string(i));
        logs[i] = std::log(a);
    }
    return ls_slope(logs, n_min, n_max);
}

double fit_linear_slope(const TimeSeries& series, int n_min, int n_max) {
    check_window(series, n_min, n_max);
    return ls_slope(series.values, n_min, n_max);
}

std::vector<std::pair<double, double>> coherent_centers(int count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("coherent_centers: count must be >= 1");
    std::mt19937_64 rng(seed);
    auto unit = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    std::vector<std::pair<double, double>> centers;
    centers.reserve(count);
    for (int i = 0; i < count; ++i) {
        const double q = unit();
        const double p = unit();
        centers.emplace_back(q, p);
    }
    return centers;
}

TimeSeries averaged_series(const HilbertDim& dim,
                           const std::function<TimeSeries(const DensityMatrix&)>& generator,
                           int count, std::uint64_t seed) {
    auto centers = coherent_centers(count, seed);
    TimeSeries acc;
    bool first = true;
    for (const auto& [q0, p0] : centers) {
        TimeSeries s = generator(coherent_state(dim, q0, p0));
        if (first) {
            acc = s;
            first = false;
        } else {
            const std::size_t n = std::min(acc.values.size(), s.values.size());
            acc.values.resize(n);
            acc.truncated = acc.truncated || s.truncated;
            for (std::size_t i = 0; i < n; ++i) acc.values[i] += s.values[i];
        }
    }
    for (double& v : acc.values) v /= count;
    acc.meta.averaged = count;
    return acc;
}

std::pair<int, int> early_window(const TimeSeries& entropy, int N) {
    const double thresh = 0.8 * std::log(static_cast<double>(N));
    int hi = -1;
    for (std::size_t n = 0; n < entropy.values.size(); ++n) {
        if (entropy.values[n] < thresh)
            hi = static_cast<int>(n);
        else
            break;
    }
    return {0, hi};
}

std::pair<int, int> late_window(const std::vector<double>& values) {
    double vmax = 0.0;
    for (double v : values) vmax = std::max(vmax, std::abs(v));
    // below ~1e-13 of the series maximum the values sit at the roundoff
    // floor of the Hilbert-Schmidt inner products and carry no decay signal
    const double floor = std::max(1e-13, 1e-13 * vmax);
    int valid = 0;
    while (valid < static_cast<int>(values.size()) && std::abs(values[valid]) > floor) ++valid;
    if (valid == 0) return {0, -1};
    const int span = std::max(2, (valid + 2) / 3);
    return {std::max(0, valid - span), valid - 1};
}

}  // namespace qmap
