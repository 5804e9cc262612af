#include "thermimic/fock.hpp"

#include "thermimic/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace thermimic {

double wrap_phase(double theta) {
    if (!std::isfinite(theta)) {
        throw InvalidArgument("phase must be finite");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double wrapped = std::fmod(theta, two_pi);
    if (wrapped < 0.0) {
        wrapped += two_pi;
    }
    // fmod of a tiny negative number can round back up to exactly 2pi
    if (wrapped >= two_pi) {
        wrapped = 0.0;
    }
    return wrapped;
}

ComplexAmplitude::ComplexAmplitude(double magnitude, double phase)
    : magnitude_(magnitude), phase_(wrap_phase(phase)) {
    if (!std::isfinite(magnitude) || magnitude < 0.0) {
        throw InvalidArgument("coherent amplitude magnitude must be finite and >= 0, got " +
                              std::to_string(magnitude));
    }
}

ComplexAmplitude ComplexAmplitude::from_complex(Complex alpha) {
    return ComplexAmplitude(std::abs(alpha), std::arg(alpha));
}

PureStateVector::PureStateVector(ComplexVector coefficients) : coefficients_(std::move(coefficients)) {
    if (coefficients_.size() == 0) {
        throw InvalidArgument("state vector needs at least one Fock coefficient");
    }
}

double PureStateVector::truncation_mass() const {
    return std::max(0.0, 1.0 - squared_norm());
}

FockDensityMatrix::FockDensityMatrix(ComplexMatrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw InvalidArgument("density matrix must be square and non-empty, got " +
                              std::to_string(entries_.rows()) + "x" + std::to_string(entries_.cols()));
    }
}

FockDensityMatrix FockDensityMatrix::projector(const PureStateVector& psi) {
    const auto& c = psi.coefficients();
    return FockDensityMatrix(c * c.adjoint());
}

FockDensityMatrix FockDensityMatrix::number_state(int n, int cutoff) {
    if (cutoff < 0 || n < 0 || n > cutoff) {
        throw InvalidArgument("number state |" + std::to_string(n) + "> outside cutoff " +
                              std::to_string(cutoff));
    }
    ComplexMatrix m = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
    m(n, n) = 1.0;
    return FockDensityMatrix(std::move(m));
}

double FockDensityMatrix::hermiticity_error() const {
    return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::VectorXd FockDensityMatrix::eigenvalues() const {
    const ComplexMatrix hermitian_part = 0.5 * (entries_ + entries_.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericError("eigenvalue decomposition failed");
    }
    return solver.eigenvalues();
}

double FockDensityMatrix::min_eigenvalue() const {
    return eigenvalues().minCoeff();
}

InvariantReport check_invariants(const FockDensityMatrix& rho, const InvariantTolerances& tol) {
    InvariantReport r;
    r.hermiticity_error = rho.hermiticity_error();
    r.trace_real = rho.trace().real();
    r.min_eigenvalue = rho.min_eigenvalue();
    r.hermitian = r.hermiticity_error <= tol.hermitian;
    r.trace_ok = r.trace_real >= 1.0 - tol.tail && r.trace_real <= 1.0 + tol.trace_excess;
    r.positive = r.min_eigenvalue >= -tol.negative_eigenvalue;
    return r;
}

namespace fock {

namespace {

void require_cutoff(int cutoff) {
    if (cutoff < 0) {
        throw InvalidArgument("Fock cutoff must be >= 0, got " + std::to_string(cutoff));
    }
}

}  // namespace

PureStateVector coherent_pure(const ComplexAmplitude& alpha, int cutoff, double tail_tol) {
    require_cutoff(cutoff);
    ComplexVector c = ComplexVector::Zero(cutoff + 1);
    const double r = alpha.magnitude();
    if (r == 0.0) {
        c(0) = 1.0;
        return PureStateVector(std::move(c));
    }
    // log|c_n| = n ln r - r^2/2 - ln(n!)/2, accumulated term by term
    const double log_r = std::log(r);
    double log_mag = -0.5 * r * r;
    for (int n = 0; n <= cutoff; ++n) {
        if (n > 0) {
            log_mag += log_r - 0.5 * std::log(static_cast<double>(n));
        }
        c(n) = std::polar(std::exp(log_mag), n * alpha.phase());
    }
    PureStateVector psi(std::move(c));
    if (psi.truncation_mass() > tail_tol) {
        throw TruncationError("coherent state |alpha|=" + std::to_string(r) + " loses mass " +
                              std::to_string(psi.truncation_mass()) + " beyond cutoff " +
                              std::to_string(cutoff));
    }
    return psi;
}

double thermal_tail_mass(double nbar, int cutoff) {
    if (nbar == 0.0) {
        return 0.0;
    }
    return std::pow(nbar / (nbar + 1.0), cutoff + 1);
}

FockDensityMatrix thermal(double nbar, int cutoff, double tail_tol) {
    require_cutoff(cutoff);
    if (!std::isfinite(nbar) || nbar < 0.0) {
        throw InvalidArgument("mean photon number must be finite and >= 0, got " + std::to_string(nbar));
    }
    const double tail = thermal_tail_mass(nbar, cutoff);
    if (tail > tail_tol) {
        throw TruncationError("thermal state nbar=" + std::to_string(nbar) + " loses mass " +
                              std::to_string(tail) + " beyond cutoff " + std::to_string(cutoff));
    }
    ComplexMatrix m = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
    const double ratio = nbar / (nbar + 1.0);
    for (int n = 0; n <= cutoff; ++n) {
        // std::pow(0, 0) == 1 covers the vacuum limit
        m(n, n) = std::pow(ratio, n) / (nbar + 1.0);
    }
    return FockDensityMatrix(std::move(m));
}

FockDensityMatrix mix(std::span<const MixtureComponent> components) {
    if (components.empty()) {
        throw InvalidArgument("mixture needs at least one component");
    }
    const int cutoff = components.front().state.cutoff();
    double weight_sum = 0.0;
    for (const auto& comp : components) {
        if (!(comp.weight >= 0.0)) {
            throw InvalidArgument("mixture weights must be >= 0, got " + std::to_string(comp.weight));
        }
        if (comp.state.cutoff() != cutoff) {
            throw InvalidArgument("mixture components have mismatched cutoffs " + std::to_string(cutoff) +
                                  " and " + std::to_string(comp.state.cutoff()));
        }
        weight_sum += comp.weight;
    }
    if (std::abs(weight_sum - 1.0) > 1e-12) {
        throw InvalidArgument("mixture weights sum to " + std::to_string(weight_sum) + ", expected 1");
    }

    ComplexMatrix rho = ComplexMatrix::Zero(cutoff + 1, cutoff + 1);
    for (const auto& comp : components) {
        if (comp.weight == 0.0) {
            continue;
        }
        const auto& c = comp.state.coefficients();
        rho.noalias() += comp.weight * (c * c.adjoint());
    }
    return FockDensityMatrix(std::move(rho));
}

double mean_photon(const FockDensityMatrix& rho) {
    double n_mean = 0.0;
    for (Eigen::Index n = 1; n < rho.dim(); ++n) {
        n_mean += static_cast<double>(n) * rho(n, n).real();
    }
    return n_mean;
}

FockDensityMatrix normalize(const FockDensityMatrix& rho) {
    const double tr = rho.trace().real();
    if (!(tr > 0.0)) {
        throw NumericError("cannot normalize a density matrix with trace " + std::to_string(tr));
    }
    return FockDensityMatrix(rho.matrix() / tr);
}

FockDensityMatrix truncate(const FockDensityMatrix& rho, int cutoff) {
    require_cutoff(cutoff);
    if (cutoff > rho.cutoff()) {
        throw InvalidArgument("cannot truncate cutoff " + std::to_string(rho.cutoff()) + " up to " +
                              std::to_string(cutoff));
    }
    return FockDensityMatrix(rho.matrix().topLeftCorner(cutoff + 1, cutoff + 1));
}

double purity(const FockDensityMatrix& rho) {
    // Tr(rho^2) = sum |rho_mn|^2 for Hermitian rho
    return rho.matrix().cwiseAbs2().sum();
}

}  // namespace fock
}  // namespace thermimic
