#pragma once

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace thermimic {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Cutoff used when engineering states; reconstructions use a smaller one (see tomo.hpp).
inline constexpr int kDefaultStateCutoff = 30;
// Largest probability mass allowed to fall beyond the Fock cutoff.
inline constexpr double kDefaultTailTol = 1e-6;

// Polar coherent-state amplitude alpha = |alpha| e^{i theta}.
class ComplexAmplitude {
public:
    // Throws InvalidArgument for negative or non-finite magnitude. Phase is wrapped to [0, 2pi).
    ComplexAmplitude(double magnitude, double phase);

    static ComplexAmplitude from_complex(Complex alpha);

    double magnitude() const noexcept { return magnitude_; }
    double phase() const noexcept { return phase_; }
    Complex value() const { return std::polar(magnitude_, phase_); }

private:
    double magnitude_;
    double phase_;
};

// Wraps any finite angle into [0, 2pi).
double wrap_phase(double theta);

// Fock-basis coefficient vector <n|psi>, n = 0..cutoff.
class PureStateVector {
public:
    explicit PureStateVector(ComplexVector coefficients);

    int cutoff() const noexcept { return static_cast<int>(coefficients_.size()) - 1; }
    const ComplexVector& coefficients() const noexcept { return coefficients_; }
    double squared_norm() const { return coefficients_.squaredNorm(); }
    // Probability mass lost beyond the cutoff, 1 - ||psi||^2 clamped at 0.
    double truncation_mass() const;

private:
    ComplexVector coefficients_;
};

// Density matrix <m|rho|n> truncated at photon number `cutoff`.
//
// Construction only checks the shape. Physical validity (Hermitian, PSD, trace)
// is checked separately with check_invariants() because reconstructions and
// differences of states pass through the same type.
class FockDensityMatrix {
public:
    explicit FockDensityMatrix(ComplexMatrix entries);

    static FockDensityMatrix projector(const PureStateVector& psi);
    static FockDensityMatrix number_state(int n, int cutoff);

    int cutoff() const noexcept { return static_cast<int>(entries_.rows()) - 1; }
    Eigen::Index dim() const noexcept { return entries_.rows(); }
    const ComplexMatrix& matrix() const noexcept { return entries_; }
    Complex operator()(Eigen::Index m, Eigen::Index n) const { return entries_(m, n); }

    Complex trace() const { return entries_.trace(); }
    // max |rho - rho^dagger|
    double hermiticity_error() const;
    // Smallest eigenvalue of the Hermitian part.
    double min_eigenvalue() const;
    Eigen::VectorXd eigenvalues() const;

private:
    ComplexMatrix entries_;
};

struct InvariantReport {
    double hermiticity_error = 0.0;
    double trace_real = 0.0;
    double min_eigenvalue = 0.0;
    bool hermitian = false;
    bool trace_ok = false;
    bool positive = false;

    bool ok() const noexcept { return hermitian && trace_ok && positive; }
};

struct InvariantTolerances {
    double hermitian = 1e-12;
    double tail = kDefaultTailTol;
    double trace_excess = 1e-12;
    double negative_eigenvalue = 1e-10;
};

InvariantReport check_invariants(const FockDensityMatrix& rho, const InvariantTolerances& tol = {});

namespace fock {

// Coherent state |alpha> truncated at `cutoff`. Throws TruncationError when the
// mass beyond the cutoff exceeds tail_tol.
PureStateVector coherent_pure(const ComplexAmplitude& alpha, int cutoff,
                              double tail_tol = kDefaultTailTol);

// Mass of the Bose-Einstein distribution above `cutoff`: (nbar/(nbar+1))^(cutoff+1).
double thermal_tail_mass(double nbar, int cutoff);

// Diagonal thermal state with populations nbar^n / (nbar+1)^(n+1). Not renormalized.
FockDensityMatrix thermal(double nbar, int cutoff, double tail_tol = kDefaultTailTol);

struct MixtureComponent {
    double weight;
    PureStateVector state;
};

// sum_i p_i |psi_i><psi_i|. Weights must be non-negative and sum to 1 within 1e-12.
FockDensityMatrix mix(std::span<const MixtureComponent> components);

double mean_photon(const FockDensityMatrix& rho);

// rho / Tr(rho). Throws NumericError when the trace is not positive.
FockDensityMatrix normalize(const FockDensityMatrix& rho);

// Keeps the top-left (cutoff+1) block; no renormalization.
FockDensityMatrix truncate(const FockDensityMatrix& rho, int cutoff);

// Tr(rho^2)
double purity(const FockDensityMatrix& rho);

}  // namespace fock
}  // namespace thermimic
