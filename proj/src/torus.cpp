#include "qmap/torus.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace qmap {

namespace {

// Forward DFT: out_k = sum_j in_j e^{-2 pi i j k / n} (unnormalized).
Vector dft_fwd(const Vector& in) {
    Eigen::FFT<double> fft;
    Vector out(in.size());
    fft.fwd(out, in);
    return out;
}

// Inverse DFT: out_j = (1/n) sum_k in_k e^{+2 pi i j k / n}.
Vector dft_inv(const Vector& in) {
    Eigen::FFT<double> fft;
    Vector out(in.size());
    fft.inv(out, in);
    return out;
}

}  // namespace

Matrix translation_matrix(const HilbertDim& dim, int q, int p) {
    const int N = dim.N;
    Matrix T = Matrix::Zero(N, N);
    const Complex sym = std::exp(Complex(0.0, pi * static_cast<double>(q) * p / N));
    for (int m = 0; m < N; ++m) {
        T(mod(m + q, N), m) = sym * std::exp(Complex(0.0, 2.0 * pi * p * m / N));
    }
    return T;
}

Complex compose_translations_phase(const HilbertDim& dim, const LatticePoint& a,
                                   const LatticePoint& b) {
    const auto ra = a.reduced(dim);
    const auto rb = b.reduced(dim);
    const double wedge = static_cast<double>(ra.p) * rb.q - static_cast<double>(ra.q) * rb.p;
    return std::exp(Complex(0.0, pi * wedge / dim.N));
}

ChordSymbol chord_transform(const Matrix& B) {
    require_square(B, "chord_transform");
    const int N = static_cast<int>(B.rows());
    ChordSymbol C(N, N);
    Vector diag(N);
    for (int q = 0; q < N; ++q) {
        for (int m = 0; m < N; ++m) diag(m) = B(mod(m + q, N), m);
        Vector f = dft_fwd(diag);
        for (int p = 0; p < N; ++p) {
            C(q, p) = f(p) * std::exp(Complex(0.0, -pi * static_cast<double>(q) * p / N));
        }
    }
    return C;
}

Matrix inverse_chord_transform(const ChordSymbol& s) {
    require_square(s, "inverse_chord_transform");
    const int N = static_cast<int>(s.rows());
    Matrix B = Matrix::Zero(N, N);
    Vector row(N);
    for (int q = 0; q < N; ++q) {
        for (int p = 0; p < N; ++p) {
            row(p) = s(q, p) * std::exp(Complex(0.0, pi * static_cast<double>(q) * p / N));
        }
        Vector d = dft_inv(row);
        for (int m = 0; m < N; ++m) B(mod(m + q, N), m) = d(m);
    }
    return B;
}

WignerGrid wigner_function(const HilbertDim& dim, const DensityMatrix& rho) {
    require_square(rho, "wigner_function");
    const int N = dim.N;
    if (rho.rows() != N) throw std::invalid_argument("wigner_function: dimension mismatch");
    const int n2 = 2 * N;

    // Chord symbol extended to G_2N. The diagonal DFT part is N-periodic in
    // both indices; only the symmetrizing phase distinguishes the copies.
    Matrix base(N, N);  // base(q,p) = sum_m e^{-2 pi i p m/N} rho[(m+q)%N, m]
    Vector diag(N);
    for (int q = 0; q < N; ++q) {
        for (int m = 0; m < N; ++m) diag(m) = rho(mod(m + q, N), m);
        base.row(q) = dft_fwd(diag).transpose();
    }
    Matrix c2(n2, n2);
    for (int q = 0; q < n2; ++q) {
        for (int p = 0; p < n2; ++p) {
            const Complex ph = std::exp(Complex(0.0, -pi * static_cast<double>(q) * p / N));
            c2(q, p) = ph * base(q % N, p % N);
        }
    }

    // W(qb,pb) = Re (1/(2N)^2) sum_{qa,pa} c2(qa,pa) e^{(2 pi i/2N)(pa qb - qa pb)}:
    // forward DFT over qa (-> pb), then inverse DFT over pa (-> qb).
    Matrix stage(n2, n2);
    for (int pa = 0; pa < n2; ++pa) stage.col(pa) = dft_fwd(c2.col(pa));
    WignerGrid W(n2, n2);
    for (int pb = 0; pb < n2; ++pb) {
        Vector r = dft_inv(stage.row(pb).transpose());
        for (int qb = 0; qb < n2; ++qb) W(qb, pb) = r(qb).real() / n2;
    }
    return W;
}

std::pair<double, double> wigner_centroid(const WignerGrid& w) {
    const int n2 = static_cast<int>(w.rows());
    Complex zq(0, 0), zp(0, 0);
    double tot = 0.0;
    for (int i = 0; i < n2; ++i) {
        for (int j = 0; j < n2; ++j) {
            zq += w(i, j) * std::exp(Complex(0.0, 2.0 * pi * i / n2));
            zp += w(i, j) * std::exp(Complex(0.0, 2.0 * pi * j / n2));
            tot += w(i, j);
        }
    }
    zq /= tot;
    zp /= tot;
    auto to_unit = [](const Complex& z) {
        double t = std::arg(z) / (2.0 * pi);
        t -= std::floor(t);
        return t;
    };
    return {to_unit(zq), to_unit(zp)};
}

DensityMatrix coherent_state(const HilbertDim& dim, double q0, double p0) {
    const int N = dim.N;
    Vector psi = Vector::Zero(N);
    for (int j = 0; j < N; ++j) {
        Complex amp(0, 0);
        for (int m = -3; m <= 3; ++m) {
            const double x = static_cast<double>(j) / N - q0 + m;
            const double phase = 2.0 * pi * N * p0 * (static_cast<double>(j) / N + m);
            amp += std::exp(Complex(-pi * N * x * x, phase));
        }
        psi(j) = amp;
    }
    psi.normalize();
    return psi * psi.adjoint();
}

Complex hs_inner(const Matrix& A, const Matrix& B) {
    require_same_dim(A, B, "hs_inner");
    return (A.conjugate().cwiseProduct(B)).sum();
}

}  // namespace qmap
