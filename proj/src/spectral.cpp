#include "qmap/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace qmap {

const char* to_string(SpectrumMethod m) {
    switch (m) {
        case SpectrumMethod::iteration: return "iteration";
        case SpectrumMethod::chord_truncation: return "chord_truncation";
        case SpectrumMethod::dense: return "dense";
    }
    return "unknown";
}

Complex SpectrumResult::leading_nontrivial(double tol) const {
    for (const Complex& lam : eigenvalues) {
        if (std::abs(lam - 1.0) > tol) return lam;
    }
    return Complex(0, 0);
}

namespace {

// Shared moment recursion: iterate, renormalize, record the log scale.
// The inner product and one application step are supplied by the caller.
template <class State, class Apply, class Inner, class Norm>
MomentSequence moment_loop(const State& s0, int k, Apply&& apply, Inner&& inner, Norm&& norm) {
    if (k < 1) throw std::invalid_argument("compute_moments: k must be >= 1");
    MomentSequence seq;
    seq.m.reserve(2 * k + 1);
    seq.scale_log.reserve(2 * k + 1);
    State cur = s0;
    double logscale = 0.0;
    seq.m.push_back(inner(s0, cur));
    seq.scale_log.push_back(0.0);
    for (int t = 1; t <= 2 * k; ++t) {
        cur = apply(cur);
        const double nrm = norm(cur);
        if (!(nrm > 1e-300)) {
            seq.truncated = true;
            break;
        }
        cur /= nrm;
        logscale += std::log(nrm);
        seq.m.push_back(inner(s0, cur) * std::exp(logscale));
        seq.scale_log.push_back(logscale);
    }
    return seq;
}

std::vector<Complex> sort_by_modulus(std::vector<Complex> v) {
    std::stable_sort(v.begin(), v.end(),
                     [](const Complex& a, const Complex& b) { return std::abs(a) > std::abs(b); });
    return v;
}

}  // namespace

MomentSequence compute_moments(const StateMap& apply, const DensityMatrix& rho0, int k) {
    return moment_loop(
        rho0, k, [&](const DensityMatrix& r) { return apply(r); },
        [](const DensityMatrix& a, const DensityMatrix& b) { return hs_inner(a, b); },
        [](const DensityMatrix& r) { return hs_norm(r); });
}

MomentSequence compute_moments(const VectorMap& apply, const RealVector& v0, int k) {
    return moment_loop(
        v0, k, [&](const RealVector& v) { return apply(v); },
        [](const RealVector& a, const RealVector& b) { return Complex(a.dot(b), 0.0); },
        [](const RealVector& v) { return v.norm(); });
}

std::pair<Matrix, Matrix> hankel_matrices(const MomentSequence& seq, int k) {
    if (static_cast<int>(seq.m.size()) < 2 * k)
        throw std::invalid_argument("hankel_matrices: need at least 2k moments");
    Matrix S(k, k), O(k, k);
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j) {
            S(i, j) = seq.m[i + j + 1];
            O(i, j) = seq.m[i + j];
        }
    }
    return {S, O};
}

SpectrumResult iteration_spectrum(const MomentSequence& seq, int k, double svd_tol) {
    if (k < 1) throw std::invalid_argument("iteration_spectrum: k must be >= 1");
    const int avail = (static_cast<int>(seq.m.size()) - 1) / 2;
    if (avail < k) k = avail;  // truncated sequences fall back to what is there
    if (k < 1) throw NumericalError("iteration_spectrum: moment sequence too short");
    auto [S, O] = hankel_matrices(seq, k);

    Eigen::JacobiSVD<Matrix> svd(O, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = svd_tol * sv(0);
    int rank = 0;
    while (rank < sv.size() && sv(rank) > cut) ++rank;
    if (rank == 0 || !(sv(0) > 0.0))
        throw NumericalError("iteration_spectrum: initial state has no usable overlap");

    const Matrix Ur = svd.matrixU().leftCols(rank);
    const Matrix Vr = svd.matrixV().leftCols(rank);
    Matrix reduced = Ur.adjoint() * S * Vr;
    for (int i = 0; i < rank; ++i) reduced.col(i) /= sv(i);

    Eigen::ComplexEigenSolver<Matrix> eig(reduced);
    std::vector<Complex> lams(eig.eigenvalues().data(), eig.eigenvalues().data() + rank);
    lams = sort_by_modulus(std::move(lams));
    // Unit-disk guard: values outside are Krylov artifacts, never spectrum.
    std::erase_if(lams, [](const Complex& l) { return std::abs(l) > 1.0 + 1e-8; });

    SpectrumResult res;
    res.eigenvalues = std::move(lams);
    res.stable.assign(res.eigenvalues.size(), true);
    res.method = SpectrumMethod::iteration;
    res.meta.truncation = k;
    return res;
}

SpectrumResult stability_filter(const SpectrumResult& res_k, const SpectrumResult& res_km1,
                                double delta) {
    SpectrumResult out = res_k;
    out.stable.assign(out.eigenvalues.size(), false);
    for (std::size_t i = 0; i < out.eigenvalues.size(); ++i) {
        for (const Complex& prev : res_km1.eigenvalues) {
            if (std::abs(out.eigenvalues[i] - prev) < delta) {
                out.stable[i] = true;
                break;
            }
        }
    }
    return out;
}

SpectrumResult iteration_spectrum_stable(const MomentSequence& m, int k, double delta,
                                         double svd_tol) {
    SpectrumResult at_k = iteration_spectrum(m, k, svd_tol);
    if (k < 2) return at_k;
    SpectrumResult at_km1 = iteration_spectrum(m, k - 1, svd_tol);
    return stability_filter(at_k, at_km1, delta);
}

int safe_truncation_window(const NoiseKernel& kernel, double cut) {
    const int N = kernel.N();
    const int cap = N / 2;
    for (int w = 0; w < cap; ++w) {
        if (kernel.chord_eigs(w + 1, 0) < cut) return w;
    }
    return cap;
}

SpectrumResult chord_truncation_spectrum(const CoarseGrainedPropagator& prop, int window) {
    const int N = prop.N();
    if (window < 0 || window > N)
        throw std::invalid_argument("chord_truncation_spectrum: window out of range");
    auto wrap = [N](int n) { return std::min(n, N - n); };
    std::vector<LatticePoint> kept;
    for (int q = 0; q < N; ++q) {
        for (int p = 0; p < N; ++p) {
            if (std::max(wrap(q), wrap(p)) <= window) kept.push_back({q, p});
        }
    }
    const int d = static_cast<int>(kept.size());
    if (d > 4096)
        throw ResourceLimitError("chord_truncation_spectrum: retained dimension " +
                                 std::to_string(d) + " exceeds 4096");

    // Column b of the truncated superoperator: chord symbol of U T_b U^dag,
    // modulated by Dtilde and normalized to the orthonormal basis T/sqrt(N).
    const Matrix& U = prop.unitary.matrix;
    HilbertDim dim(N);
    Matrix M(d, d);
    for (int col = 0; col < d; ++col) {
        Matrix Tb = translation_matrix(dim, kept[col]);
        ChordSymbol c = chord_transform(U * Tb * U.adjoint());
        for (int row = 0; row < d; ++row) {
            M(row, col) =
                prop.kernel.chord_eigs(kept[row].q, kept[row].p) * c(kept[row].q, kept[row].p) /
                static_cast<double>(N);
        }
    }

    Eigen::ComplexEigenSolver<Matrix> eig(M);
    std::vector<Complex> lams(eig.eigenvalues().data(), eig.eigenvalues().data() + d);
    SpectrumResult res;
    res.eigenvalues = sort_by_modulus(std::move(lams));
    res.stable.assign(res.eigenvalues.size(), true);
    res.method = SpectrumMethod::chord_truncation;
    res.meta = {N, prop.kernel.epsilon, prop.unitary.params.k, window};
    return res;
}

SpectrumResult dense_spectrum(const CoarseGrainedPropagator& prop) {
    Matrix S = dense_superoperator(prop);
    Eigen::ComplexEigenSolver<Matrix> eig(S);
    std::vector<Complex> lams(eig.eigenvalues().data(),
                              eig.eigenvalues().data() + eig.eigenvalues().size());
    SpectrumResult res;
    res.eigenvalues = sort_by_modulus(std::move(lams));
    res.stable.assign(res.eigenvalues.size(), true);
    res.method = SpectrumMethod::dense;
    res.meta = {prop.N(), prop.kernel.epsilon, prop.unitary.params.k, 0};
    return res;
}

}  // namespace qmap
