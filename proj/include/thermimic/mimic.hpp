#pragma once

#include "thermimic/fock.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thermimic {

// How a codebook's constellation points and weights were chosen.
//   stratified: Rayleigh quantile midpoints x midpoint phase grid, uniform weights
//   random:     i.i.d. Rayleigh amplitudes x i.i.d. uniform phases, uniform weights
//   optimized:  weights refit by non-negative least squares against a target state
enum class Scheme { stratified, random, optimized };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view name);

// Discrete amplitude/phase constellation {(|alpha|_l, theta_q, p_lq)}.
// Every amplitude is combined with every phase, so there are M = L * Q symbols.
struct Codebook {
    double nbar_target = 0.0;
    std::vector<double> amplitudes;  // L entries, |alpha|_l >= 0
    std::vector<double> phases;      // Q entries in [0, 2pi)
    Eigen::MatrixXd weights;         // L x Q, non-negative, sums to 1
    Scheme scheme = Scheme::stratified;
    std::optional<std::uint64_t> seed;

    int num_amplitudes() const noexcept { return static_cast<int>(amplitudes.size()); }
    int num_phases() const noexcept { return static_cast<int>(phases.size()); }
    int size() const noexcept { return num_amplitudes() * num_phases(); }

    // Throws InvalidArgument if any structural invariant is broken.
    void validate() const;

    friend bool operator==(const Codebook& a, const Codebook& b);
};

namespace mimic {

// Inverse CDF of the Rayleigh amplitude law (2/nbar) r exp(-r^2/nbar):
// sqrt(-nbar ln(1 - u)).
double rayleigh_quantile(double nbar, double u);

// L x Q constellation for a thermal target with mean photon number nbar.
// `seed` is required for Scheme::random. Scheme::optimized places points
// like stratified, then fits weights to thermal(nbar, kDefaultStateCutoff).
Codebook build_codebook(double nbar, int num_amplitudes, int num_phases, Scheme scheme,
                        std::optional<std::uint64_t> seed = std::nullopt);

// sum_{l,q} p_lq |alpha_lq><alpha_lq|
FockDensityMatrix assemble(const Codebook& codebook, int cutoff = kDefaultStateCutoff,
                           double tail_tol = kDefaultTailTol);

// Refits weights by NNLS on the real embedding of the Hermitian matrices
// (Frobenius distance to `target`), then renormalizes. If the refit would lower
// the fidelity to `target`, the input weights are kept. Throws SingularityError
// when every constellation point is the same coherent state and M > 1.
Codebook optimize_weights(const Codebook& codebook, const FockDensityMatrix& target,
                          double tail_tol = kDefaultTailTol);

// Real vector of length d^2 holding the diagonal, then sqrt(2) Re and sqrt(2) Im
// of the strict upper triangle, so that its Euclidean norm equals the Frobenius norm.
Eigen::VectorXd hermitian_embedding(const ComplexMatrix& m);

struct SweepRow {
    double nbar = 0.0;
    int samples = 0;  // M = L * Q with L = Q
    Scheme scheme = Scheme::stratified;
    double fidelity_mean = 0.0;
    double fidelity_std = 0.0;
};

// Fidelity of assemble(build_codebook(nbar, sqrt(M), sqrt(M))) against
// thermal(nbar) over the nbar x M grid. Random codebooks average `trials`
// draws seeded with seed + trial index; the std is the sample standard
// deviation (0 for a single trial or a deterministic scheme).
std::vector<SweepRow> sweep_fidelity(const std::vector<double>& nbars, const std::vector<int>& sample_counts,
                                     Scheme scheme, int cutoff, int trials, std::uint64_t seed,
                                     double tail_tol = kDefaultTailTol);

}  // namespace mimic
}  // namespace thermimic
