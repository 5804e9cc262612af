#pragma once

#include "thermimic/fock.hpp"

namespace thermimic::metrics {

// Eigenvalues below -kPsdTolerance mark an input as not positive semidefinite;
// anything between that and 0 is clipped before square roots and logarithms.
inline constexpr double kPsdTolerance = 1e-8;
// Eigenvalues below this contribute nothing to the entropy (0 log 0 = 0).
inline constexpr double kEntropyFloor = 1e-14;

// Hermitian PSD square root via eigendecomposition with clipping.
ComplexMatrix psd_sqrt(const FockDensityMatrix& rho);

// Uhlmann fidelity (Tr sqrt(sqrt(b) a sqrt(b)))^2.
//
// Evaluated as the squared nuclear norm of sqrt(a) sqrt(b), which is the same
// quantity but needs no square root of the near-zero eigenvalues of the
// product. The result is symmetric in (a, b) to SVD rounding.
double fidelity(const FockDensityMatrix& a, const FockDensityMatrix& b);

// (1/2) ||a - b||_1
double trace_distance(const FockDensityMatrix& a, const FockDensityMatrix& b);

// Minimum error probability for telling a from b with equal priors:
// 1/2 - ||a - b||_1 / 4, clamped to [0, 1/2].
double helstrom_error(const FockDensityMatrix& a, const FockDensityMatrix& b);

// -Tr(rho log2 rho), in bits.
double von_neumann_entropy(const FockDensityMatrix& rho);

// Closed-form entropy of a thermal state with mean photon number nbar, in bits.
double thermal_entropy(double nbar);

struct MetricReport {
    double fidelity = 0.0;
    double trace_distance = 0.0;
    double helstrom_error = 0.0;
    double entropy_a = 0.0;
    double entropy_b = 0.0;
    double mean_photon_a = 0.0;
    double mean_photon_b = 0.0;
};

MetricReport compare(const FockDensityMatrix& a, const FockDensityMatrix& b);

}  // namespace thermimic::metrics
