#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qmap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

using DensityMatrix = Matrix;
using ChordSymbol = Matrix;
using WignerGrid = RealMatrix;

inline constexpr double pi = std::numbers::pi;

/// Thrown when a computation would exceed a configured resource guard
/// (dense superoperator size, classical grid size, truncation dimension).
struct ResourceLimitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Thrown on numerical failure (zero-overlap initial state, underflow,
/// unfittable window).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Hilbert-space dimension of the quantized torus. Fixes the effective
/// Planck constant hbar = 1/(2 pi N).
struct HilbertDim {
    int N;
    explicit HilbertDim(int n) : N(n) {
        if (n < 1) throw std::invalid_argument("HilbertDim: N must be >= 1");
    }
    double hbar() const { return 1.0 / (2.0 * pi * N); }
};

inline int mod(int a, int n) {
    int r = a % n;
    return r < 0 ? r + n : r;
}

/// Point alpha = (q, p) on the N x N phase-space lattice G_N.
struct LatticePoint {
    int q = 0;
    int p = 0;
    LatticePoint() = default;
    LatticePoint(int q_, int p_) : q(q_), p(p_) {}
    LatticePoint reduced(const HilbertDim& dim) const {
        return {mod(q, dim.N), mod(p, dim.N)};
    }
};

inline void require_square(const Matrix& m, const char* what) {
    if (m.rows() != m.cols())
        throw std::invalid_argument(std::string(what) + ": matrix must be square");
}

inline void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace qmap
