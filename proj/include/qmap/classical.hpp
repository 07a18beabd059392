#pragma once

#include <functional>
#include <vector>

#include "qmap/maps.hpp"
#include "qmap/spectral.hpp"
#include "qmap/types.hpp"

namespace qmap {

using ClassicalMap = std::function<PhasePoint(const PhasePoint&)>;

/// Coarse-grained Perron-Frobenius operator on an L x L grid of cell
/// centers: column j holds the periodized Gaussian of width eps (torus
/// metric) centered at M(x_j), normalized to sum 1 (column stochastic).
/// Dense storage up to L = 64; above that only matrix-free application.
struct ClassicalPropagator {
    RealMatrix matrix;  // L^2 x L^2 when stored densely, else empty
    int L = 0;
    double eps = 0.0;
    PerturbedCatParams params;
    std::vector<PhasePoint> images;  // M(x_j) per column, for matrix-free apply

    bool dense_storage() const { return matrix.size() > 0; }
    RealVector apply(const RealVector& v) const;
};

/// map_override is a test hook substituting the perturbed cat step.
ClassicalPropagator build_classical_propagator(int L, double eps,
                                               const PerturbedCatParams& params,
                                               const ClassicalMap& map_override = {});

enum class ClassicalMethod { dense, moments };

/// Leading eigenvalues of the transfer matrix. The dense method requires
/// stored storage and L <= classical_dense_guard(); the moments method runs
/// the Hankel iteration on a fixed smooth mean-subtracted density and
/// prepends the exact stochastic eigenvalue lambda_0 = 1.
SpectrumResult classical_leading_spectrum(const ClassicalPropagator& prop, int k,
                                          ClassicalMethod method);

/// C_t = (f, P^t g) - (I,f)(I,g), t = 0..T, with the cell-average inner
/// product (f,g) = sum_i f_i g_i / L^2 and I the uniform density.
std::vector<double> classical_correlation_series(const ClassicalPropagator& prop,
                                                 const RealVector& f, const RealVector& g,
                                                 int T);

/// Grid-size guard for dense classical diagonalization; environment variable
/// QMAP_CLASSICAL_DENSE_GUARD, default 40.
int classical_dense_guard();

/// The deterministic smooth seed density used by the moments method
/// (before mean subtraction).
RealVector classical_seed_density(int L);

}  // namespace qmap
