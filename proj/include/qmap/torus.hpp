#pragma once

#include <utility>

#include "qmap/types.hpp"

namespace qmap {

/// Translation (Weyl) operator T_(q,p) = U^q V^p e^{i pi q p / N} on the
/// quantized torus, with U the cyclic position shift U|j> = |j+1> and
/// V^p |j> = e^{(2 pi i/N) p j} |j>.
///
/// The integer arguments are used unreduced: the shift part is N-periodic
/// but the symmetrizing phase is only 2N-periodic, so T_{q+N,p} = (-1)^p T_{q,p}.
Matrix translation_matrix(const HilbertDim& dim, int q, int p);

inline Matrix translation_matrix(const HilbertDim& dim, const LatticePoint& a) {
    auto r = a.reduced(dim);
    return translation_matrix(dim, r.q, r.p);
}

/// Phase c(a,b) with T_a T_b = c(a,b) T_{a+b}, for representatives in [0,N):
/// c(a,b) = e^{(i pi / N)(p_a q_b - q_a p_b)}.
/// The wedge orientation is fixed by the operator ordering in T_(q,p); see
/// the composition tests, which check the identity at the matrix level.
Complex compose_translations_phase(const HilbertDim& dim, const LatticePoint& a,
                                   const LatticePoint& b);

/// Chord symbol C_B(q,p) = tr(T_(q,p)^dag B), computed with one length-N DFT
/// per shifted diagonal of B.
ChordSymbol chord_transform(const Matrix& B);

/// Reconstructs B = (1/N) sum_a C_B(a) T_a from its chord symbol.
Matrix inverse_chord_transform(const ChordSymbol& s);

/// Discrete Wigner function W(b) = Re tr(A_b^dag rho) on the 2N x 2N grid
/// G_2N, with A_b = (1/(2N)^2) sum_{a in G_2N} T_a e^{-(2 pi i/2N) a^b}.
/// Grid point (i,j) corresponds to the phase-space point (i/2N, j/2N).
/// sum over the grid equals tr(rho); the sum-rule weight is w = 1/N.
WignerGrid wigner_function(const HilbertDim& dim, const DensityMatrix& rho);

/// Circular (torus) centroid of a Wigner grid, in [0,1)^2.
std::pair<double, double> wigner_centroid(const WignerGrid& w);

/// Pure coherent state centered at (q0, p0): a periodized Gaussian
/// wavepacket <q_j|z> ~ sum_{|m|<=3} exp(-pi N (j/N - q0 + m)^2
///                                       + 2 pi i N p0 (j/N + m)),
/// normalized numerically.
DensityMatrix coherent_state(const HilbertDim& dim, double q0, double p0);

/// Hilbert-Schmidt inner product tr(A^dag B).
Complex hs_inner(const Matrix& A, const Matrix& B);

inline double hs_norm(const Matrix& A) { return std::sqrt(std::abs(hs_inner(A, A))); }

/// Purity tr(rho^2) for self-adjoint rho.
inline double purity(const DensityMatrix& rho) { return hs_inner(rho, rho).real(); }

}  // namespace qmap
