#pragma once

#include "thermimic/fock.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace thermimic {

// Quadrature scale. `half` puts the vacuum variance at 1/2, which is what the
// Hermite kernel H_m H_n exp(-x^2) of the likelihood assumes. `quarter` puts it
// at 1/4, the shot-noise normalization applied to raw detector voltages.
enum class Convention { half, quarter };

std::string_view to_string(Convention convention);
Convention parse_convention(std::string_view name);

struct QuadratureRecord {
    double x = 0.0;      // scaled quadrature value
    double theta = 0.0;  // local-oscillator phase, [0, 2pi)
};

// Tagged list of homodyne outcomes. Phases are wrapped to [0, 2pi) on construction.
class QuadratureDataset {
public:
    QuadratureDataset(std::vector<QuadratureRecord> records, Convention convention,
                      std::optional<std::uint64_t> seed = std::nullopt);

    const std::vector<QuadratureRecord>& records() const noexcept { return records_; }
    Convention convention() const noexcept { return convention_; }
    std::optional<std::uint64_t> seed() const noexcept { return seed_; }
    std::size_t size() const noexcept { return records_.size(); }

private:
    std::vector<QuadratureRecord> records_;
    Convention convention_;
    std::optional<std::uint64_t> seed_;
};

// Vacuum reference measured on the raw detector output.
struct CalibrationStats {
    double v_vac = 0.0;
    double sigma_vac = 1.0;
};

struct RawSample {
    double voltage = 0.0;
    double theta = 0.0;
};

struct RawRun {
    std::vector<RawSample> samples;
    CalibrationStats stats;
};

namespace homodyne {

inline constexpr int kDefaultPhases = 50;
inline constexpr int kDefaultSamplesPerPhase = 40;
inline constexpr int kSamplerGridPoints = 4096;

double vacuum_variance(Convention convention);

// Harmonic-oscillator eigenfunctions psi_n(x) = H_n(x) e^{-x^2/2} / (pi^{1/4} sqrt(2^n n!)),
// n = 0..cutoff, by the three-term recurrence.
Eigen::VectorXd hermite_functions(double x, int cutoff);

// p(x | theta) = sum_{m,n} rho_mn e^{i(n-m)theta} psi_m(x) psi_n(x), half convention,
// small negative round-off clipped to 0.
double quadrature_pdf(const FockDensityMatrix& rho, double theta, double x);

// `count` LO phases 2 pi k / count, k = 0..count-1.
std::vector<double> equispaced_phases(int count);

// Inverse-CDF sampler over a tabulated grid x in [-X, X], X = 5 sqrt(2 <n> + 1),
// one table per phase, linear interpolation inside a grid cell. The tables
// depend only on (rho, phases), so one sampler can serve many seeds.
class QuadratureSampler {
public:
    QuadratureSampler(const FockDensityMatrix& rho, std::span<const double> phases,
                      int grid_points = kSamplerGridPoints);

    // n_per_phase draws at every phase, concatenated in phase order. Each phase
    // uses its own stream derived from (seed, phase index).
    QuadratureDataset sample(int n_per_phase, std::uint64_t seed) const;

    double half_width() const noexcept { return half_width_; }
    const std::vector<double>& phases() const noexcept { return phases_; }

private:
    std::vector<double> phases_;
    std::vector<double> grid_;
    std::vector<std::vector<double>> cdfs_;  // normalized, cdfs_[j].back() == 1
    double half_width_ = 0.0;
};

QuadratureDataset sample(const FockDensityMatrix& rho, std::span<const double> phases, int n_per_phase,
                         std::uint64_t seed);

// Synthetic detector output V = offset + gain * x (x in half convention), with
// vacuum calibration statistics from a separate vacuum run seeded with seed + 1.
RawRun simulate_raw(const FockDensityMatrix& rho, std::span<const double> phases, int n_per_phase, double gain,
                    double offset, std::uint64_t seed);
RawRun simulate_raw(const QuadratureSampler& sampler, int n_per_phase, double gain, double offset,
                    std::uint64_t seed);

// Sample mean and sample standard deviation of raw vacuum voltages.
CalibrationStats vacuum_stats(std::span<const RawSample> vacuum);

// x = (V - V_vac) sqrt(1 / (4 sigma_vac^2)) for `quarter`,
// x = (V - V_vac) sqrt(1 / (2 sigma_vac^2)) for `half`.
QuadratureDataset calibrate(std::span<const RawSample> raw, const CalibrationStats& stats, Convention convention,
                            std::optional<std::uint64_t> seed = std::nullopt);

// Rescales x between conventions (factor sqrt(2) or 1/sqrt(2)).
QuadratureDataset convert(const QuadratureDataset& data, Convention target);

}  // namespace homodyne
}  // namespace thermimic
