#include "qmap/classical.hpp"

#include <cmath>
#include <cstdlib>

#include <lapacke.h>

namespace qmap {

namespace {

int env_guard(const char* name, int fallback) {
    if (const char* v = std::getenv(name)) {
        const int parsed = std::atoi(v);
        if (parsed > 0) return parsed;
    }
    return fallback;
}

constexpr int kDenseStorageMaxL = 64;
constexpr int kBuildMaxL = 1024;

// Periodized Gaussian of width sigma (torus metric) at the L cell centers,
// centered at y; column-normalized by the caller.
RealVector kernel_column_factor(int L, double sigma, double y) {
    int shells = 3;
    while (std::exp(-std::pow(shells - 1.0, 2) / (2.0 * sigma * sigma)) > 1e-16) ++shells;
    RealVector g(L);
    for (int i = 0; i < L; ++i) {
        const double c = (i + 0.5) / L;
        double acc = 0.0;
        for (int m = -shells; m <= shells; ++m) {
            const double d = c - y + m;
            acc += std::exp(-d * d / (2.0 * sigma * sigma));
        }
        g(i) = acc;
    }
    return g / g.sum();
}

std::vector<Complex> eig_dgeev(const RealMatrix& A) {
    const int n = static_cast<int>(A.rows());
    RealMatrix work = A;  // dgeev destroys its input
    std::vector<double> wr(n), wi(n);
    const int info =
        LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, work.data(), n, wr.data(), wi.data(),
                      nullptr, 1, nullptr, 1);
    if (info != 0) throw NumericalError("classical dense eigensolve failed, info=" +
                                        std::to_string(info));
    std::vector<Complex> lams(n);
    for (int i = 0; i < n; ++i) lams[i] = Complex(wr[i], wi[i]);
    std::stable_sort(lams.begin(), lams.end(),
                     [](const Complex& a, const Complex& b) { return std::abs(a) > std::abs(b); });
    return lams;
}

}  // namespace

int classical_dense_guard() { return env_guard("QMAP_CLASSICAL_DENSE_GUARD", 40); }

RealVector ClassicalPropagator::apply(const RealVector& v) const {
    if (v.size() != static_cast<Eigen::Index>(L) * L)
        throw std::invalid_argument("ClassicalPropagator::apply: dimension mismatch");
    if (dense_storage()) return matrix * v;
    RealVector out = RealVector::Zero(v.size());
    for (int j = 0; j < L * L; ++j) {
        if (v(j) == 0.0) continue;
        RealVector gq = kernel_column_factor(L, eps, images[j].q);
        RealVector gp = kernel_column_factor(L, eps, images[j].p);
        for (int iq = 0; iq < L; ++iq) {
            const double w = v(j) * gq(iq);
            for (int ip = 0; ip < L; ++ip) out(iq * L + ip) += w * gp(ip);
        }
    }
    return out;
}

ClassicalPropagator build_classical_propagator(int L, double eps,
                                               const PerturbedCatParams& params,
                                               const ClassicalMap& map_override) {
    if (L < 2) throw std::invalid_argument("build_classical_propagator: L must be >= 2");
    if (eps <= 0.0) throw std::invalid_argument("build_classical_propagator: eps must be > 0");
    if (L > kBuildMaxL)
        throw ResourceLimitError("build_classical_propagator: L=" + std::to_string(L) +
                                 " exceeds " + std::to_string(kBuildMaxL));
    ClassicalPropagator prop;
    prop.L = L;
    prop.eps = eps;
    prop.params = params;
    prop.images.resize(static_cast<std::size_t>(L) * L);
    for (int jq = 0; jq < L; ++jq) {
        for (int jp = 0; jp < L; ++jp) {
            const PhasePoint x{(jq + 0.5) / L, (jp + 0.5) / L};
            prop.images[static_cast<std::size_t>(jq) * L + jp] =
                map_override ? map_override(x) : classical_cat_step(x, params);
        }
    }
    if (L <= kDenseStorageMaxL) {
        prop.matrix.resize(static_cast<Eigen::Index>(L) * L, static_cast<Eigen::Index>(L) * L);
        for (int j = 0; j < L * L; ++j) {
            RealVector gq = kernel_column_factor(L, eps, prop.images[j].q);
            RealVector gp = kernel_column_factor(L, eps, prop.images[j].p);
            for (int iq = 0; iq < L; ++iq)
                for (int ip = 0; ip < L; ++ip) prop.matrix(iq * L + ip, j) = gq(iq) * gp(ip);
        }
    }
    return prop;
}

RealVector classical_seed_density(int L) {
    RealVector f(static_cast<Eigen::Index>(L) * L);
    for (int iq = 0; iq < L; ++iq) {
        const double q = (iq + 0.5) / L;
        for (int ip = 0; ip < L; ++ip) {
            const double p = (ip + 0.5) / L;
            f(iq * L + ip) = 1.0 + 0.5 * std::sin(2.0 * pi * q) * std::cos(4.0 * pi * p) +
                             0.3 * std::cos(2.0 * pi * p) + 0.2 * std::sin(4.0 * pi * q + 0.7);
        }
    }
    return f;
}

SpectrumResult classical_leading_spectrum(const ClassicalPropagator& prop, int k,
                                          ClassicalMethod method) {
    SpectrumResult res;
    res.meta = {prop.L, prop.eps, prop.params.k, k};
    if (method == ClassicalMethod::dense) {
        const int guard = classical_dense_guard();
        if (!prop.dense_storage() || prop.L > guard) {
            throw ResourceLimitError("classical_leading_spectrum: dense method needs L <= " +
                                     std::to_string(std::min(guard, kDenseStorageMaxL)) +
                                     " (QMAP_CLASSICAL_DENSE_GUARD)");
        }
        res.eigenvalues = eig_dgeev(prop.matrix);
        if (static_cast<int>(res.eigenvalues.size()) > std::max(k, 1))
            res.eigenvalues.resize(std::max(k, 1));
        res.stable.assign(res.eigenvalues.size(), true);
        res.method = SpectrumMethod::dense;
        return res;
    }

    // Moments path: Hankel iteration on a mean-free smooth density. The
    // mean subtraction removes the lambda_0 = 1 mode exactly (the left
    // eigenvector of a column-stochastic matrix is uniform), so the exact
    // eigenvalue 1 is prepended to the recovered decaying part.
    RealVector v = classical_seed_density(prop.L);
    v.array() -= v.mean();
    MomentSequence m = compute_moments([&](const RealVector& x) { return prop.apply(x); }, v,
                                       std::max(k, 2));
    SpectrumResult it = iteration_spectrum_stable(m, std::max(k, 2), 1e-5);
    res.eigenvalues.push_back(Complex(1.0, 0.0));
    res.stable.push_back(true);
    for (std::size_t i = 0; i < it.eigenvalues.size(); ++i) {
        res.eigenvalues.push_back(it.eigenvalues[i]);
        res.stable.push_back(it.stable[i]);
    }
    res.method = SpectrumMethod::iteration;
    return res;
}

std::vector<double> classical_correlation_series(const ClassicalPropagator& prop,
                                                 const RealVector& f, const RealVector& g,
                                                 int T) {
    if (T < 1) throw std::invalid_argument("classical_correlation_series: T must be >= 1");
    const double cells = static_cast<double>(prop.L) * prop.L;
    const double sub = (f.sum() / cells) * (g.sum() / cells);
    std::vector<double> c;
    c.reserve(T + 1);
    RealVector cur = g;
    for (int t = 0; t <= T; ++t) {
        c.push_back(f.dot(cur) / cells - sub);
        if (t < T) cur = prop.apply(cur);
    }
    return c;
}

}  // namespace qmap
