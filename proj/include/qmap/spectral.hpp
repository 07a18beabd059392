#pragma once

#include <functional>
#include <string>
#include <vector>

#include "qmap/channels.hpp"
#include "qmap/types.hpp"

namespace qmap {

/// Moments m_t = <rho0, S^t rho0>_HS, t = 0..2k, computed with per-iterate
/// renormalization. scale_log[t] holds the accumulated log of the rescaling
/// factors; the stored m are the exact products.
struct MomentSequence {
    std::vector<Complex> m;
    std::vector<double> scale_log;
    bool truncated = false;  // iterate collapsed to numerical zero early
};

enum class SpectrumMethod { iteration, chord_truncation, dense };

const char* to_string(SpectrumMethod m);

struct SpectrumMeta {
    int N = 0;
    double eps = 0.0;
    double k = 0.0;
    int truncation = 0;  // Krylov size or chord window, method dependent
};

/// Eigenvalues ordered by decreasing modulus, with per-eigenvalue stability
/// flags (set by stability_filter; defaults to true for direct methods).
struct SpectrumResult {
    std::vector<Complex> eigenvalues;
    std::vector<bool> stable;
    SpectrumMethod method = SpectrumMethod::dense;
    SpectrumMeta meta;

    /// Largest-modulus eigenvalue with |lambda - 1| > tol, or 0 if none.
    Complex leading_nontrivial(double tol = 1e-4) const;
};

using StateMap = std::function<DensityMatrix(const DensityMatrix&)>;
using VectorMap = std::function<RealVector(const RealVector&)>;

MomentSequence compute_moments(const StateMap& apply, const DensityMatrix& rho0, int k);

/// Same moment recursion for classical density vectors (standard dot product).
MomentSequence compute_moments(const VectorMap& apply, const RealVector& v0, int k);

/// Hankel pair [S]_{ij} = m_{i+j+1}, [O]_{ij} = m_{i+j}, i,j = 0..k-1.
/// [S] equals the projected propagator tr(rho_{-i}^dag S rho_j) and [O] the
/// overlap matrix tr(rho_{-i}^dag rho_j), both collapsed onto one moment
/// sequence through the adjoint identity.
std::pair<Matrix, Matrix> hankel_matrices(const MomentSequence& m, int k);

/// Solves Det([S] - lambda [O]) = 0 by projecting onto the numerical range
/// of [O] (singular values > svd_tol * max), then a standard eigensolve.
/// Returns at most rank([O]) eigenvalues, ordered by modulus, restricted to
/// the closed unit disk (tolerance 1e-8).
SpectrumResult iteration_spectrum(const MomentSequence& m, int k, double svd_tol = 1e-12);

/// Marks an eigenvalue of res_k stable iff res_km1 has an eigenvalue within
/// delta of it.
SpectrumResult stability_filter(const SpectrumResult& res_k, const SpectrumResult& res_km1,
                                double delta);

/// Superoperator restricted to chord components with wrap-aware sup-norm
/// <= window: the matrix Dtilde(a) U(a,b) on the retained set, dense
/// diagonalized. window >= floor(N/2) retains everything.
SpectrumResult chord_truncation_spectrum(const CoarseGrainedPropagator& prop, int window);

/// Smallest window with the chord eigenvalue profile below `cut` outside the
/// retained block, capped at floor(N/2).
int safe_truncation_window(const NoiseKernel& kernel, double cut = 1e-8);

/// Full spectrum of the dense superoperator (the oracle).
SpectrumResult dense_spectrum(const CoarseGrainedPropagator& prop);

/// Convenience: moments -> iteration spectrum at truncation sizes k and k-1,
/// stability-filtered with threshold delta.
SpectrumResult iteration_spectrum_stable(const MomentSequence& m, int k, double delta,
                                         double svd_tol = 1e-12);

}  // namespace qmap
