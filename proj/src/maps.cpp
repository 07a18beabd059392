#include "qmap/maps.hpp"

#include <cmath>

namespace qmap {

namespace {

double mod1(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? r - 1.0 : r;
}

}  // namespace

PhasePoint classical_cat_step(const PhasePoint& x, const PerturbedCatParams& params) {
    const double qn = mod1(2.0 * x.q + x.p);
    const double ps = mod1(x.q + x.p);
    const double pn = mod1(ps - (params.k / (2.0 * pi)) * std::sin(2.0 * pi * qn));
    return {qn, pn};
}

double lyapunov_exponent(const PerturbedCatParams&) {
    return std::log((3.0 + std::sqrt(5.0)) / 2.0);
}

QuantumMapUnitary quantize_perturbed_cat(const HilbertDim& dim,
                                         const PerturbedCatParams& params) {
    const int N = dim.N;
    if (N < 2) throw std::invalid_argument("quantize_perturbed_cat: N must be >= 2");
    Matrix U(N, N);
    const Complex pref = std::exp(Complex(0.0, -pi / 4.0)) / std::sqrt(static_cast<double>(N));
    for (int qp = 0; qp < N; ++qp) {
        const double kick = (params.k * N / (2.0 * pi)) * std::cos(2.0 * pi * qp / N);
        const Complex row = pref * std::exp(Complex(0.0, kick));
        for (int q = 0; q < N; ++q) {
            const double s = pi / N *
                             (2.0 * q * static_cast<double>(q) -
                              2.0 * static_cast<double>(q) * qp + static_cast<double>(qp) * qp);
            U(qp, q) = row * std::exp(Complex(0.0, s));
        }
    }
    QuantumMapUnitary result{std::move(U), params, dim};
    const double unit_err =
        (result.matrix * result.matrix.adjoint() - Matrix::Identity(N, N)).cwiseAbs().maxCoeff();
    if (unit_err > 1e-8) {
        throw NumericalError("quantize_perturbed_cat: quantization convention failed unitarity, N=" +
                             std::to_string(N));
    }
    return result;
}

DensityMatrix unitary_conjugation(const DensityMatrix& rho, const QuantumMapUnitary& u) {
    require_same_dim(rho, u.matrix, "unitary_conjugation");
    return u.matrix * rho * u.matrix.adjoint();
}

}  // namespace qmap
