#pragma once

#include "qmap/types.hpp"

namespace qmap {

/// Point on the classical unit torus, coordinates in [0,1).
struct PhasePoint {
    double q = 0.0;
    double p = 0.0;
};

/// Kick strength of the perturbed cat map (k = 0 is the bare cat map
/// A = [[2,1],[1,1]]).
struct PerturbedCatParams {
    double k = 0.0;
};

/// Quantized map U together with the classical parameters it was built from.
struct QuantumMapUnitary {
    Matrix matrix;
    PerturbedCatParams params;
    HilbertDim dim;
};

/// One step of the perturbed cat map:
///   q' = 2q + p                 (mod 1)
///   p' = q + p - (k/2pi) sin(2 pi q')   (mod 1)
/// The kick acts after the linear step, in the primed position variable,
/// generated by V(q) = -(k/4 pi^2) cos(2 pi q); the Jacobian determinant is 1.
PhasePoint classical_cat_step(const PhasePoint& x, const PerturbedCatParams& params);

/// Largest Lyapunov exponent of the unperturbed cat map,
/// ln((3+sqrt(5))/2) ~= 0.9624. For k > 0 this is an approximation.
double lyapunov_exponent(const PerturbedCatParams& params);

/// Quantization U = K_k U_A with the exact linear-cat kernel
///   U_A[q',q] = N^{-1/2} e^{-i pi/4} exp((i pi/N)(2 q^2 - 2 q q' + q'^2))
/// and the diagonal kick K_k[q'] = exp(i (k N / 2pi) cos(2 pi q'/N)).
/// U_A is exactly unitary for every N (the quadratic terms cancel in U U^dag).
QuantumMapUnitary quantize_perturbed_cat(const HilbertDim& dim,
                                         const PerturbedCatParams& params);

/// rho -> U rho U^dag.
DensityMatrix unitary_conjugation(const DensityMatrix& rho, const QuantumMapUnitary& u);

}  // namespace qmap
