#include "thermimic/tomo.hpp"

#include "thermimic/error.hpp"

#include <cmath>
#include <map>
#include <string>

namespace thermimic {

void MleConfig::validate() const {
    if (cutoff < 0) {
        throw InvalidArgument("MLE cutoff must be >= 0");
    }
    if (max_iterations < 1) {
        throw InvalidArgument("MLE max_iterations must be >= 1");
    }
    if (!(stop_tol > 0.0)) {
        throw InvalidArgument("MLE stop_tol must be > 0");
    }
    if (!(dilution > 0.0 && dilution <= 1.0)) {
        throw InvalidArgument("MLE dilution must lie in (0, 1]");
    }
}

namespace tomo {

namespace {

constexpr double kProbabilityFloor = 1e-300;
// Likelihood drops smaller than this are treated as round-off when accepting a step.
constexpr double kAcceptSlack = 1e-9;
constexpr int kMaxStepHalvings = 30;

void require_half(const QuadratureDataset& data) {
    if (data.convention() != Convention::half) {
        throw InvalidArgument("likelihood needs half-convention quadratures; convert the '" +
                              std::string(to_string(data.convention())) + "' dataset first");
    }
}

ComplexMatrix hermitize(const ComplexMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

}  // namespace

LikelihoodKernel::LikelihoodKernel(const QuadratureDataset& data, int cutoff)
    : cutoff_(cutoff), count_(data.size()) {
    require_half(data);
    if (cutoff < 0) {
        throw InvalidArgument("likelihood cutoff must be >= 0");
    }
    std::map<double, std::vector<double>> by_phase;
    for (const auto& r : data.records()) {
        by_phase[r.theta].push_back(r.x);
    }
    Eigen::Index offset = 0;
    for (const auto& [theta, xs] : by_phase) {
        PhaseGroup g{theta, Eigen::MatrixXd(cutoff + 1, static_cast<Eigen::Index>(xs.size())), offset};
        for (std::size_t i = 0; i < xs.size(); ++i) {
            g.psi.col(static_cast<Eigen::Index>(i)) = homodyne::hermite_functions(xs[i], cutoff);
        }
        offset += g.psi.cols();
        groups_.push_back(std::move(g));
    }
}

Eigen::VectorXd LikelihoodKernel::probabilities(const ComplexMatrix& rho) const {
    const Eigen::Index d = cutoff_ + 1;
    if (rho.rows() != d || rho.cols() != d) {
        throw InvalidArgument("density matrix cutoff does not match the likelihood kernel");
    }
    Eigen::VectorXd p(static_cast<Eigen::Index>(count_));
    Eigen::MatrixXd kernel(d, d);
    for (const auto& g : groups_) {
        for (Eigen::Index m = 0; m < d; ++m) {
            for (Eigen::Index n = 0; n < d; ++n) {
                kernel(m, n) = (rho(m, n) * std::polar(1.0, static_cast<double>(n - m) * g.theta)).real();
            }
        }
        p.segment(g.offset, g.psi.cols()) = (g.psi.array() * (kernel * g.psi).array()).colwise().sum().transpose();
    }
    return p;
}

double LikelihoodKernel::log_likelihood(const Eigen::VectorXd& probabilities) const {
    double ll = 0.0;
    for (const double p : probabilities) {
        ll += std::log(std::max(p, kProbabilityFloor));
    }
    return ll;
}

ComplexMatrix LikelihoodKernel::r_operator(const Eigen::VectorXd& probabilities) const {
    const Eigen::Index d = cutoff_ + 1;
    ComplexMatrix r = ComplexMatrix::Zero(d, d);
    for (const auto& g : groups_) {
        const Eigen::VectorXd inv =
            probabilities.segment(g.offset, g.psi.cols()).cwiseMax(kProbabilityFloor).cwiseInverse();
        const Eigen::MatrixXd s = g.psi * inv.asDiagonal() * g.psi.transpose();
        for (Eigen::Index m = 0; m < d; ++m) {
            for (Eigen::Index n = 0; n < d; ++n) {
                r(m, n) += s(m, n) * std::polar(1.0, static_cast<double>(m - n) * g.theta);
            }
        }
    }
    return r / static_cast<double>(count_);
}

double log_likelihood(const FockDensityMatrix& rho, const QuadratureDataset& data) {
    const LikelihoodKernel kernel(data, rho.cutoff());
    return kernel.log_likelihood(kernel.probabilities(rho.matrix()));
}

MleResult mle_reconstruct(const QuadratureDataset& data, const MleConfig& config) {
    config.validate();
    require_half(data);
    const LikelihoodKernel kernel(data, config.cutoff);
    const Eigen::Index d = config.cutoff + 1;
    const ComplexMatrix identity = ComplexMatrix::Identity(d, d);

    ComplexMatrix rho = identity / static_cast<double>(d);
    Eigen::VectorXd probs = kernel.probabilities(rho);
    double ll = kernel.log_likelihood(probs);

    MleResult result{FockDensityMatrix(rho), false, 0, ll, {ll}};
    for (int it = 1; it <= config.max_iterations; ++it) {
        const ComplexMatrix r = kernel.r_operator(probs);
        double dilution = config.dilution;
        ComplexMatrix candidate;
        Eigen::VectorXd candidate_probs;
        double candidate_ll = 0.0;
        bool accepted = false;
        for (int halving = 0; halving <= kMaxStepHalvings; ++halving) {
            const ComplexMatrix step = (1.0 - dilution) * identity + dilution * r;
            candidate = hermitize(step * rho * step.adjoint());
            candidate /= candidate.trace().real();
            candidate_probs = kernel.probabilities(candidate);
            candidate_ll = kernel.log_likelihood(candidate_probs);
            if (candidate_ll >= ll - kAcceptSlack) {
                accepted = true;
                break;
            }
            dilution *= 0.5;
        }
        result.iterations = it;
        if (!accepted) {
            // no ascent direction left at machine precision
            result.converged = true;
            break;
        }
        const double change = (candidate - rho).cwiseAbs().maxCoeff();
        rho = std::move(candidate);
        probs = std::move(candidate_probs);
        ll = candidate_ll;
        result.log_likelihood_trace.push_back(ll);
        if (change < config.stop_tol) {
            result.converged = true;
            break;
        }
    }
    result.rho = FockDensityMatrix(rho);
    result.log_likelihood = ll;
    return result;
}

ReconstructionEnsemble average(std::span<const FockDensityMatrix> runs) {
    if (runs.empty()) {
        throw InvalidArgument("averaging needs at least one reconstruction");
    }
    const int cutoff = runs.front().cutoff();
    const Eigen::Index d = runs.front().dim();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& rho : runs) {
        if (rho.cutoff() != cutoff) {
            throw InvalidArgument("reconstructions have mismatched cutoffs " + std::to_string(cutoff) + " and " +
                                  std::to_string(rho.cutoff()));
        }
        sum += rho.matrix();
    }
    const double n = static_cast<double>(runs.size());
    const ComplexMatrix mean = sum / n;

    Eigen::MatrixXd var_re = Eigen::MatrixXd::Zero(d, d);
    Eigen::MatrixXd var_im = Eigen::MatrixXd::Zero(d, d);
    for (const auto& rho : runs) {
        const ComplexMatrix dev = rho.matrix() - mean;
        var_re += dev.real().cwiseAbs2();
        var_im += dev.imag().cwiseAbs2();
    }
    Eigen::MatrixXd std = ((var_re + var_im) / n).cwiseSqrt();
    return {fock::normalize(FockDensityMatrix(mean)), std::move(std), static_cast<int>(runs.size())};
}

}  // namespace tomo
}  // namespace thermimic
