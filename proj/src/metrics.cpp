#include "thermimic/metrics.hpp"

#include "thermimic/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace thermimic::metrics {

namespace {

void require_same_cutoff(const FockDensityMatrix& a, const FockDensityMatrix& b) {
    if (a.cutoff() != b.cutoff()) {
        throw InvalidArgument("density matrices have different cutoffs: " + std::to_string(a.cutoff()) +
                              " vs " + std::to_string(b.cutoff()));
    }
}

Eigen::SelfAdjointEigenSolver<ComplexMatrix> hermitian_eigen(const ComplexMatrix& m, int options) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (m + m.adjoint()), options);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue decomposition failed");
    }
    return solver;
}

void require_psd(const Eigen::VectorXd& eigenvalues, const char* what) {
    const double lowest = eigenvalues.minCoeff();
    if (lowest < -kPsdTolerance) {
        throw NotPositiveError(std::string(what) + ": input has eigenvalue " + std::to_string(lowest) +
                               " below -" + std::to_string(kPsdTolerance));
    }
}

}  // namespace

ComplexMatrix psd_sqrt(const FockDensityMatrix& rho) {
    const auto solver = hermitian_eigen(rho.matrix(), Eigen::ComputeEigenvectors);
    require_psd(solver.eigenvalues(), "matrix square root");
    // eigenvalues at round-off level are zeros; their square roots would be ~1e-8
    const Eigen::VectorXd& lambda = solver.eigenvalues();
    const double floor = static_cast<double>(lambda.size()) * std::numeric_limits<double>::epsilon() *
                         lambda.cwiseAbs().maxCoeff();
    const Eigen::VectorXd roots = lambda.unaryExpr([floor](double l) { return l > floor ? std::sqrt(l) : 0.0; });
    const auto& v = solver.eigenvectors();
    return v * roots.asDiagonal() * v.adjoint();
}

double fidelity(const FockDensityMatrix& a, const FockDensityMatrix& b) {
    require_same_cutoff(a, b);
    const ComplexMatrix product = psd_sqrt(a) * psd_sqrt(b);
    Eigen::JacobiSVD<ComplexMatrix> svd(product);
    const double root_fidelity = svd.singularValues().sum();
    return root_fidelity * root_fidelity;
}

double trace_distance(const FockDensityMatrix& a, const FockDensityMatrix& b) {
    require_same_cutoff(a, b);
    const auto solver = hermitian_eigen(a.matrix() - b.matrix(), Eigen::EigenvaluesOnly);
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

double helstrom_error(const FockDensityMatrix& a, const FockDensityMatrix& b) {
    const double trace_norm = 2.0 * trace_distance(a, b);
    return std::clamp(0.5 - 0.25 * trace_norm, 0.0, 0.5);
}

double von_neumann_entropy(const FockDensityMatrix& rho) {
    const auto solver = hermitian_eigen(rho.matrix(), Eigen::EigenvaluesOnly);
    require_psd(solver.eigenvalues(), "von Neumann entropy");
    double s = 0.0;
    for (const double lambda : solver.eigenvalues()) {
        if (lambda > kEntropyFloor) {
            s -= lambda * std::log2(lambda);
        }
    }
    return std::max(s, 0.0);
}

double thermal_entropy(double nbar) {
    if (nbar < 0.0) {
        throw InvalidArgument("mean photon number must be >= 0");
    }
    if (nbar == 0.0) {
        return 0.0;
    }
    return (nbar + 1.0) * std::log2(nbar + 1.0) - nbar * std::log2(nbar);
}

MetricReport compare(const FockDensityMatrix& a, const FockDensityMatrix& b) {
    MetricReport r;
    r.fidelity = fidelity(a, b);
    r.trace_distance = trace_distance(a, b);
    r.helstrom_error = std::clamp(0.5 - 0.5 * r.trace_distance, 0.0, 0.5);
    r.entropy_a = von_neumann_entropy(a);
    r.entropy_b = von_neumann_entropy(b);
    r.mean_photon_a = fock::mean_photon(a);
    r.mean_photon_b = fock::mean_photon(b);
    return r;
}

}  // namespace thermimic::metrics
