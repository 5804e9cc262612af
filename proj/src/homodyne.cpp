#include "thermimic/homodyne.hpp"

#include "thermimic/error.hpp"
#include "thermimic/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace thermimic {

std::string_view to_string(Convention convention) {
    return convention == Convention::half ? "half" : "quarter";
}

Convention parse_convention(std::string_view name) {
    if (name == "half") {
        return Convention::half;
    }
    if (name == "quarter") {
        return Convention::quarter;
    }
    throw InvalidArgument("unknown quadrature convention '" + std::string(name) + "' (expected half or quarter)");
}

QuadratureDataset::QuadratureDataset(std::vector<QuadratureRecord> records, Convention convention,
                                     std::optional<std::uint64_t> seed)
    : records_(std::move(records)), convention_(convention), seed_(seed) {
    if (records_.empty()) {
        throw InvalidArgument("quadrature dataset needs at least one record");
    }
    for (auto& r : records_) {
        if (!std::isfinite(r.x)) {
            throw InvalidArgument("quadrature value must be finite");
        }
        r.theta = wrap_phase(r.theta);
    }
}

namespace homodyne {

double vacuum_variance(Convention convention) {
    return convention == Convention::half ? 0.5 : 0.25;
}

Eigen::VectorXd hermite_functions(double x, int cutoff) {
    if (cutoff < 0) {
        throw InvalidArgument("Hermite function order must be >= 0");
    }
    Eigen::VectorXd psi(cutoff + 1);
    psi(0) = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
    if (cutoff >= 1) {
        psi(1) = std::numbers::sqrt2 * x * psi(0);
    }
    for (int n = 1; n < cutoff; ++n) {
        psi(n + 1) = std::sqrt(2.0 / (n + 1)) * x * psi(n) - std::sqrt(static_cast<double>(n) / (n + 1)) * psi(n - 1);
    }
    return psi;
}

namespace {

// Re of rho_mn e^{i(n-m)theta}; symmetric, and the only part that reaches p(x|theta).
Eigen::MatrixXd rotated_real_part(const ComplexMatrix& rho, double theta) {
    const Eigen::Index d = rho.rows();
    Eigen::MatrixXd out(d, d);
    for (Eigen::Index m = 0; m < d; ++m) {
        for (Eigen::Index n = 0; n < d; ++n) {
            out(m, n) = (rho(m, n) * std::polar(1.0, static_cast<double>(n - m) * theta)).real();
        }
    }
    return 0.5 * (out + out.transpose());
}

}  // namespace

double quadrature_pdf(const FockDensityMatrix& rho, double theta, double x) {
    const Eigen::VectorXd psi = hermite_functions(x, rho.cutoff());
    const double p = psi.dot(rotated_real_part(rho.matrix(), theta) * psi);
    return std::max(p, 0.0);
}

std::vector<double> equispaced_phases(int count) {
    if (count < 1) {
        throw InvalidArgument("need at least one LO phase");
    }
    std::vector<double> phases;
    phases.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        phases.push_back(2.0 * std::numbers::pi * k / count);
    }
    return phases;
}

QuadratureSampler::QuadratureSampler(const FockDensityMatrix& rho, std::span<const double> phases,
                                     int grid_points) {
    if (phases.empty()) {
        throw InvalidArgument("sampler needs at least one LO phase");
    }
    if (grid_points < 2) {
        throw InvalidArgument("sampler grid needs at least two points");
    }
    const double nbar = std::max(fock::mean_photon(rho), 0.0);
    half_width_ = 5.0 * std::sqrt(2.0 * nbar + 1.0);

    grid_.resize(static_cast<std::size_t>(grid_points));
    const double step = 2.0 * half_width_ / (grid_points - 1);
    Eigen::MatrixXd psi(rho.dim(), grid_points);
    for (int i = 0; i < grid_points; ++i) {
        grid_[i] = -half_width_ + step * i;
        psi.col(i) = hermite_functions(grid_[i], rho.cutoff());
    }

    for (const double raw_theta : phases) {
        const double theta = wrap_phase(raw_theta);
        phases_.push_back(theta);
        const Eigen::MatrixXd kernel = rotated_real_part(rho.matrix(), theta);
        const Eigen::RowVectorXd density = (psi.array() * (kernel * psi).array()).colwise().sum().cwiseMax(0.0);

        std::vector<double> cdf(static_cast<std::size_t>(grid_points), 0.0);
        for (int i = 1; i < grid_points; ++i) {
            cdf[i] = cdf[i - 1] + 0.5 * step * (density(i - 1) + density(i));
        }
        const double total = cdf.back();
        if (!(total > 0.0)) {
            throw NumericError("quadrature distribution has no mass on the sampling grid");
        }
        for (auto& c : cdf) {
            c /= total;
        }
        cdf.back() = 1.0;
        cdfs_.push_back(std::move(cdf));
    }
}

QuadratureDataset QuadratureSampler::sample(int n_per_phase, std::uint64_t seed) const {
    if (n_per_phase < 1) {
        throw InvalidArgument("need at least one sample per phase");
    }
    std::vector<QuadratureRecord> records;
    records.reserve(phases_.size() * static_cast<std::size_t>(n_per_phase));
    for (std::size_t j = 0; j < phases_.size(); ++j) {
        rng::Engine eng(rng::derive(seed, j));
        const auto& cdf = cdfs_[j];
        for (int s = 0; s < n_per_phase; ++s) {
            const double u = rng::uniform01(eng);
            // first grid cell whose upper CDF edge exceeds u
            auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
            std::size_t hi = static_cast<std::size_t>(it - cdf.begin());
            hi = std::clamp<std::size_t>(hi, 1, cdf.size() - 1);
            const std::size_t lo = hi - 1;
            const double span = cdf[hi] - cdf[lo];
            const double frac = span > 0.0 ? (u - cdf[lo]) / span : 0.5;
            records.push_back({grid_[lo] + frac * (grid_[hi] - grid_[lo]), phases_[j]});
        }
    }
    return QuadratureDataset(std::move(records), Convention::half, seed);
}

QuadratureDataset sample(const FockDensityMatrix& rho, std::span<const double> phases, int n_per_phase,
                         std::uint64_t seed) {
    return QuadratureSampler(rho, phases).sample(n_per_phase, seed);
}

RawRun simulate_raw(const QuadratureSampler& sampler, int n_per_phase, double gain, double offset,
                    std::uint64_t seed) {
    if (!(gain > 0.0)) {
        throw InvalidArgument("detector gain must be positive");
    }
    const auto to_raw = [&](const QuadratureDataset& data) {
        std::vector<RawSample> raw;
        raw.reserve(data.size());
        for (const auto& r : data.records()) {
            raw.push_back({offset + gain * r.x, r.theta});
        }
        return raw;
    };

    RawRun run;
    run.samples = to_raw(sampler.sample(n_per_phase, seed));

    const FockDensityMatrix vacuum = FockDensityMatrix::number_state(0, 0);
    const QuadratureSampler vacuum_sampler(vacuum, sampler.phases());
    const auto vacuum_raw = to_raw(vacuum_sampler.sample(n_per_phase, seed + 1));
    run.stats = vacuum_stats(vacuum_raw);
    return run;
}

RawRun simulate_raw(const FockDensityMatrix& rho, std::span<const double> phases, int n_per_phase, double gain,
                    double offset, std::uint64_t seed) {
    return simulate_raw(QuadratureSampler(rho, phases), n_per_phase, gain, offset, seed);
}

CalibrationStats vacuum_stats(std::span<const RawSample> vacuum) {
    if (vacuum.size() < 2) {
        throw InvalidArgument("vacuum calibration needs at least two samples");
    }
    double mean = 0.0;
    for (const auto& s : vacuum) {
        mean += s.voltage;
    }
    mean /= static_cast<double>(vacuum.size());
    double ss = 0.0;
    for (const auto& s : vacuum) {
        ss += (s.voltage - mean) * (s.voltage - mean);
    }
    return {mean, std::sqrt(ss / static_cast<double>(vacuum.size() - 1))};
}

QuadratureDataset calibrate(std::span<const RawSample> raw, const CalibrationStats& stats, Convention convention,
                            std::optional<std::uint64_t> seed) {
    if (!(stats.sigma_vac > 0.0) || !std::isfinite(stats.sigma_vac)) {
        throw InvalidArgument("vacuum standard deviation must be positive, got " + std::to_string(stats.sigma_vac));
    }
    const double scale = std::sqrt(vacuum_variance(convention) / (stats.sigma_vac * stats.sigma_vac));
    std::vector<QuadratureRecord> records;
    records.reserve(raw.size());
    for (const auto& s : raw) {
        records.push_back({(s.voltage - stats.v_vac) * scale, s.theta});
    }
    return QuadratureDataset(std::move(records), convention, seed);
}

QuadratureDataset convert(const QuadratureDataset& data, Convention target) {
    if (data.convention() == target) {
        return data;
    }
    const double scale = std::sqrt(vacuum_variance(target) / vacuum_variance(data.convention()));
    std::vector<QuadratureRecord> records = data.records();
    for (auto& r : records) {
        r.x *= scale;
    }
    return QuadratureDataset(std::move(records), target, data.seed());
}

}  // namespace homodyne
}  // namespace thermimic
