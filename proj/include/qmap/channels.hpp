#pragma once

#include "qmap/maps.hpp"
#include "qmap/torus.hpp"
#include "qmap/types.hpp"

namespace qmap {

/// Diffusive Gaussian noise channel D_eps(rho) = sum_a c(a) T_a rho T_a^dag.
/// The Kraus probabilities c(a) form a periodized 2D Gaussian of standard
/// deviation sigma = eps*N lattice units (eps is a fraction of the torus
/// side). The channel is diagonal in the chord representation with real
/// eigenvalues Dtilde(b) in (0,1], the symplectic Fourier dual of c.
struct NoiseKernel {
    RealMatrix kraus_probs;  // c(q,p) >= 0, sums to 1
    RealMatrix chord_eigs;   // Dtilde(q,p), Dtilde(0,0) = 1
    double epsilon = 0.0;
    int N() const { return static_cast<int>(kraus_probs.rows()); }
};

/// Two-step coarse-grained propagator S_eps = D_eps o U.
struct CoarseGrainedPropagator {
    QuantumMapUnitary unitary;
    NoiseKernel kernel;
    int N() const { return unitary.dim.N; }
};

/// eps = 0 yields the exact identity channel (c = delta at the origin,
/// Dtilde = 1). eps < 0 is an error.
NoiseKernel build_noise_kernel(const HilbertDim& dim, double eps);

/// Noise step via chord-space multiplication: chord(out) = Dtilde .* chord(rho).
/// O(N^2 log N); equals the Kraus sum exactly.
DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseKernel& kernel);

/// rho -> D_eps(U rho U^dag).
DensityMatrix apply_propagator(const DensityMatrix& rho, const CoarseGrainedPropagator& prop);

/// Hilbert-Schmidt adjoint S^dag = U^dag-conjugation after the (self-adjoint)
/// noise step: rho -> U^dag D_eps(rho) U.
DensityMatrix apply_adjoint_propagator(const DensityMatrix& rho,
                                       const CoarseGrainedPropagator& prop);

/// Dense N^2 x N^2 matrix of S_eps in the column-stacking vectorization
/// (vec(U rho U^dag) = (conj(U) kron U) vec(rho)). Refuses N above the
/// quantum dense guard.
Matrix dense_superoperator(const CoarseGrainedPropagator& prop);

/// Size guard for the dense superoperator oracle; environment variable
/// QMAP_DENSE_GUARD, default 16.
int quantum_dense_guard();

inline CoarseGrainedPropagator make_propagator(const HilbertDim& dim, double k, double eps) {
    return {quantize_perturbed_cat(dim, PerturbedCatParams{k}), build_noise_kernel(dim, eps)};
}

}  // namespace qmap
