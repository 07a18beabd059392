#include "qmap/channels.hpp"

#include <cmath>
#include <cstdlib>

namespace qmap {

namespace {

int env_guard(const char* name, int fallback) {
    if (const char* v = std::getenv(name)) {
        const int parsed = std::atoi(v);
        if (parsed > 0) return parsed;
    }
    return fallback;
}

// Periodized Gaussian on the length-N lattice, sigma in lattice units.
// Shells are extended until the next term drops below 1e-16.
RealVector periodized_gaussian(int N, double sigma) {
    RealVector g = RealVector::Zero(N);
    int shells = 3;
    while (std::exp(-std::pow((shells - 1.0) * N, 2) / (2.0 * sigma * sigma)) > 1e-16) ++shells;
    for (int j = 0; j < N; ++j) {
        double acc = 0.0;
        for (int m = -shells; m <= shells; ++m) {
            const double x = j + static_cast<double>(m) * N;
            acc += std::exp(-x * x / (2.0 * sigma * sigma));
        }
        g(j) = acc;
    }
    return g;
}

// Dual profile via the Poisson-summed theta form, manifestly positive:
// d(n) = Theta(n)/Theta(0), Theta(n) = sum_m exp(-2 pi^2 sigma^2 (n/N + m)^2).
RealVector dual_profile(int N, double sigma) {
    RealVector d(N);
    const double a = 2.0 * pi * pi * sigma * sigma / (static_cast<double>(N) * N);
    int shells = 3;
    while (std::exp(-a * std::pow((shells - 1.0) * N, 2)) > 1e-16) ++shells;
    auto theta = [&](int n) {
        double acc = 0.0;
        for (int m = -shells; m <= shells; ++m) {
            const double x = n + static_cast<double>(m) * N;
            acc += std::exp(-a * x * x);
        }
        return acc;
    };
    const double t0 = theta(0);
    for (int n = 0; n < N; ++n) d(n) = theta(n) / t0;
    return d;
}

}  // namespace

int quantum_dense_guard() { return env_guard("QMAP_DENSE_GUARD", 16); }

NoiseKernel build_noise_kernel(const HilbertDim& dim, double eps) {
    if (eps < 0.0) throw std::invalid_argument("build_noise_kernel: eps must be >= 0");
    const int N = dim.N;
    NoiseKernel kernel;
    kernel.epsilon = eps;
    if (eps == 0.0) {
        kernel.kraus_probs = RealMatrix::Zero(N, N);
        kernel.kraus_probs(0, 0) = 1.0;
        kernel.chord_eigs = RealMatrix::Ones(N, N);
        return kernel;
    }
    const double sigma = eps * N;
    RealVector g = periodized_gaussian(N, sigma);
    kernel.kraus_probs = (g * g.transpose()) / (g.sum() * g.sum());
    RealVector d = dual_profile(N, sigma);
    kernel.chord_eigs = d * d.transpose();
    return kernel;
}

DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseKernel& kernel) {
    if (rho.rows() != kernel.N())
        throw std::invalid_argument("apply_noise: dimension mismatch");
    if (kernel.epsilon == 0.0) return rho;
    ChordSymbol c = chord_transform(rho);
    c.array() *= kernel.chord_eigs.array();
    return inverse_chord_transform(c);
}

DensityMatrix apply_propagator(const DensityMatrix& rho, const CoarseGrainedPropagator& prop) {
    return apply_noise(unitary_conjugation(rho, prop.unitary), prop.kernel);
}

DensityMatrix apply_adjoint_propagator(const DensityMatrix& rho,
                                       const CoarseGrainedPropagator& prop) {
    DensityMatrix noisy = apply_noise(rho, prop.kernel);
    return prop.unitary.matrix.adjoint() * noisy * prop.unitary.matrix;
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    const auto ar = a.rows(), ac = a.cols(), br = b.rows(), bc = b.cols();
    Matrix out(ar * br, ac * bc);
    for (Eigen::Index i = 0; i < ar; ++i)
        for (Eigen::Index j = 0; j < ac; ++j) out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    return out;
}

}  // namespace

Matrix dense_superoperator(const CoarseGrainedPropagator& prop) {
    const int N = prop.N();
    const int guard = quantum_dense_guard();
    if (N > guard) {
        throw ResourceLimitError("dense_superoperator: N=" + std::to_string(N) +
                                 " exceeds guard " + std::to_string(guard) +
                                 " (QMAP_DENSE_GUARD)");
    }
    const Matrix& U = prop.unitary.matrix;
    Matrix S = kron(U.conjugate(), U);
    if (prop.kernel.epsilon == 0.0) return S;
    Matrix D = Matrix::Zero(N * N, N * N);
    HilbertDim dim(N);
    for (int q = 0; q < N; ++q) {
        for (int p = 0; p < N; ++p) {
            const double c = prop.kernel.kraus_probs(q, p);
            if (c <= 0.0) continue;
            Matrix T = translation_matrix(dim, q, p);
            D += c * kron(T.conjugate(), T);
        }
    }
    return D * S;
}

}  // namespace qmap
