#pragma once

#include "thermimic/fock.hpp"
#include "thermimic/homodyne.hpp"

#include <functional>
#include <span>
#include <vector>

namespace thermimic {

// Settings for the iterative R rho R maximum-likelihood reconstruction.
struct MleConfig {
    int cutoff = 12;
    int max_iterations = 2000;
    double stop_tol = 1e-7;  // max |rho_{k+1} - rho_k| that counts as converged
    double dilution = 0.5;   // R' = (1 - d) I + d R

    void validate() const;
};

struct MleResult {
    FockDensityMatrix rho;
    bool converged = false;
    int iterations = 0;
    double log_likelihood = 0.0;
    // log-likelihood of the starting point followed by every accepted iterate
    std::vector<double> log_likelihood_trace;
};

struct ReconstructionEnsemble {
    FockDensityMatrix mean;
    Eigen::MatrixXd elementwise_std;
    int n_runs = 0;
};

namespace tomo {

// Precomputed projector kernels for one dataset at a fixed cutoff. Records that
// share an LO phase are grouped so probabilities and the R operator reduce to
// real matrix products per phase.
class LikelihoodKernel {
public:
    LikelihoodKernel(const QuadratureDataset& data, int cutoff);

    int cutoff() const noexcept { return cutoff_; }
    std::size_t size() const noexcept { return count_; }

    // p(x_k | theta_k) for every record, in grouped order.
    Eigen::VectorXd probabilities(const ComplexMatrix& rho) const;
    // sum_k ln max(p_k, 1e-300)
    double log_likelihood(const Eigen::VectorXd& probabilities) const;
    // (1/K) sum_k Pi_k / p_k
    ComplexMatrix r_operator(const Eigen::VectorXd& probabilities) const;

private:
    struct PhaseGroup {
        double theta;
        Eigen::MatrixXd psi;  // (cutoff+1) x records at this phase
        Eigen::Index offset;  // position in the grouped probability vector
    };
    int cutoff_;
    std::size_t count_;
    std::vector<PhaseGroup> groups_;
};

// sum_k ln p(x_k | theta_k). Throws InvalidArgument for quarter-convention data.
double log_likelihood(const FockDensityMatrix& rho, const QuadratureDataset& data);

// Iterates rho <- N[R' rho R'] from the maximally mixed state. A step that would
// lower the likelihood is retried with half the dilution, so the trace of
// accepted log-likelihoods never decreases. Non-convergence within the
// iteration cap is reported through MleResult::converged.
MleResult mle_reconstruct(const QuadratureDataset& data, const MleConfig& config = {});

// Elementwise mean (renormalized to unit trace) and population standard
// deviation; complex entries combine the real and imaginary spreads in quadrature.
ReconstructionEnsemble average(std::span<const FockDensityMatrix> runs);

}  // namespace tomo
}  // namespace thermimic
