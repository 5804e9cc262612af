#include "thermimic/mimic.hpp"

#include "thermimic/error.hpp"
#include "thermimic/metrics.hpp"
#include "thermimic/nnls.hpp"
#include "thermimic/rng.hpp"

#include <cmath>
#include <numbers>

namespace thermimic {

std::string_view to_string(Scheme scheme) {
    switch (scheme) {
        case Scheme::stratified:
            return "stratified";
        case Scheme::random:
            return "random";
        case Scheme::optimized:
            return "optimized";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view name) {
    if (name == "stratified") {
        return Scheme::stratified;
    }
    if (name == "random") {
        return Scheme::random;
    }
    if (name == "optimized") {
        return Scheme::optimized;
    }
    throw InvalidArgument("unknown codebook scheme '" + std::string(name) +
                          "' (expected stratified, random or optimized)");
}

void Codebook::validate() const {
    if (!(nbar_target > 0.0) || !std::isfinite(nbar_target)) {
        throw InvalidArgument("codebook nbar_target must be positive");
    }
    if (amplitudes.empty() || phases.empty()) {
        throw InvalidArgument("codebook needs at least one amplitude and one phase");
    }
    if (weights.rows() != num_amplitudes() || weights.cols() != num_phases()) {
        throw InvalidArgument("codebook weights must be " + std::to_string(num_amplitudes()) + "x" +
                              std::to_string(num_phases()));
    }
    for (const double a : amplitudes) {
        if (!std::isfinite(a) || a < 0.0) {
            throw InvalidArgument("codebook amplitudes must be finite and >= 0");
        }
    }
    for (const double p : phases) {
        if (!std::isfinite(p) || p < 0.0 || p >= 2.0 * std::numbers::pi) {
            throw InvalidArgument("codebook phases must lie in [0, 2pi)");
        }
    }
    if (!weights.allFinite() || weights.minCoeff() < 0.0) {
        throw InvalidArgument("codebook weights must be finite and >= 0");
    }
    if (std::abs(weights.sum() - 1.0) > 1e-12) {
        throw InvalidArgument("codebook weights sum to " + std::to_string(weights.sum()) + ", expected 1");
    }
    if (scheme == Scheme::random && !seed) {
        throw InvalidArgument("random codebook must record its seed");
    }
}

bool operator==(const Codebook& a, const Codebook& b) {
    return a.nbar_target == b.nbar_target && a.amplitudes == b.amplitudes && a.phases == b.phases &&
           a.weights.rows() == b.weights.rows() && a.weights.cols() == b.weights.cols() &&
           a.weights == b.weights && a.scheme == b.scheme && a.seed == b.seed;
}

namespace mimic {

double rayleigh_quantile(double nbar, double u) {
    if (!(nbar > 0.0)) {
        throw InvalidArgument("Rayleigh quantile needs nbar > 0");
    }
    if (!(u >= 0.0 && u < 1.0)) {
        throw InvalidArgument("Rayleigh quantile needs u in [0, 1), got " + std::to_string(u));
    }
    return std::sqrt(-nbar * std::log1p(-u));
}

namespace {

void require_shape(double nbar, int num_amplitudes, int num_phases) {
    if (num_amplitudes < 1 || num_phases < 1) {
        throw InvalidArgument("codebook needs L >= 1 and Q >= 1");
    }
    if (!(nbar > 0.0) || !std::isfinite(nbar)) {
        throw InvalidArgument("codebook needs a positive finite nbar");
    }
}

Codebook stratified(double nbar, int num_amplitudes, int num_phases) {
    Codebook cb;
    cb.nbar_target = nbar;
    cb.scheme = Scheme::stratified;
    for (int l = 1; l <= num_amplitudes; ++l) {
        cb.amplitudes.push_back(rayleigh_quantile(nbar, (2.0 * l - 1.0) / (2.0 * num_amplitudes)));
    }
    for (int q = 1; q <= num_phases; ++q) {
        cb.phases.push_back(std::numbers::pi * (2.0 * q - 1.0) / num_phases);
    }
    cb.weights = Eigen::MatrixXd::Constant(num_amplitudes, num_phases,
                                           1.0 / (static_cast<double>(num_amplitudes) * num_phases));
    return cb;
}

Codebook random_draw(double nbar, int num_amplitudes, int num_phases, std::uint64_t seed) {
    Codebook cb;
    cb.nbar_target = nbar;
    cb.scheme = Scheme::random;
    cb.seed = seed;
    rng::Engine eng(seed);
    for (int l = 0; l < num_amplitudes; ++l) {
        cb.amplitudes.push_back(rayleigh_quantile(nbar, rng::uniform01(eng)));
    }
    for (int q = 0; q < num_phases; ++q) {
        cb.phases.push_back(wrap_phase(2.0 * std::numbers::pi * rng::uniform01(eng)));
    }
    cb.weights = Eigen::MatrixXd::Constant(num_amplitudes, num_phases,
                                           1.0 / (static_cast<double>(num_amplitudes) * num_phases));
    return cb;
}

std::vector<PureStateVector> symbol_states(const Codebook& codebook, int cutoff, double tail_tol) {
    std::vector<PureStateVector> states;
    states.reserve(static_cast<std::size_t>(codebook.size()));
    for (const double a : codebook.amplitudes) {
        for (const double p : codebook.phases) {
            states.push_back(fock::coherent_pure(ComplexAmplitude(a, p), cutoff, tail_tol));
        }
    }
    return states;
}

}  // namespace

Codebook build_codebook(double nbar, int num_amplitudes, int num_phases, Scheme scheme,
                        std::optional<std::uint64_t> seed) {
    require_shape(nbar, num_amplitudes, num_phases);
    switch (scheme) {
        case Scheme::stratified:
            return stratified(nbar, num_amplitudes, num_phases);
        case Scheme::random:
            if (!seed) {
                throw InvalidArgument("random codebook requires a seed");
            }
            return random_draw(nbar, num_amplitudes, num_phases, *seed);
        case Scheme::optimized: {
            const Codebook placed = stratified(nbar, num_amplitudes, num_phases);
            return optimize_weights(placed, fock::thermal(nbar, kDefaultStateCutoff));
        }
    }
    throw InvalidArgument("unknown codebook scheme");
}

FockDensityMatrix assemble(const Codebook& codebook, int cutoff, double tail_tol) {
    codebook.validate();
    const auto states = symbol_states(codebook, cutoff, tail_tol);
    std::vector<fock::MixtureComponent> components;
    components.reserve(states.size());
    std::size_t k = 0;
    for (int l = 0; l < codebook.num_amplitudes(); ++l) {
        for (int q = 0; q < codebook.num_phases(); ++q) {
            components.push_back({codebook.weights(l, q), states[k++]});
        }
    }
    return fock::mix(components);
}

Eigen::VectorXd hermitian_embedding(const ComplexMatrix& m) {
    const Eigen::Index d = m.rows();
    Eigen::VectorXd v(d * d);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < d; ++i) {
        v(k++) = m(i, i).real();
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            v(k++) = std::numbers::sqrt2 * m(i, j).real();
        }
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = i + 1; j < d; ++j) {
            v(k++) = std::numbers::sqrt2 * m(i, j).imag();
        }
    }
    return v;
}

Codebook optimize_weights(const Codebook& codebook, const FockDensityMatrix& target, double tail_tol) {
    codebook.validate();
    const int cutoff = target.cutoff();
    const auto states = symbol_states(codebook, cutoff, tail_tol);
    const Eigen::Index dim = target.dim();

    Eigen::MatrixXd design(dim * dim, static_cast<Eigen::Index>(states.size()));
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& c = states[k].coefficients();
        design.col(static_cast<Eigen::Index>(k)) = hermitian_embedding(c * c.adjoint());
    }
    if (design.cols() > 1) {
        const double spread = (design.colwise() - design.col(0)).cwiseAbs().maxCoeff();
        if (spread < 1e-14) {
            throw SingularityError("weight fit is degenerate: all " + std::to_string(design.cols()) +
                                   " constellation points are the same coherent state");
        }
    }

    const NnlsResult fit = nnls(design, hermitian_embedding(target.matrix()));
    const double total = fit.x.sum();
    if (!(total > 0.0)) {
        return codebook;
    }

    Codebook out = codebook;
    out.scheme = Scheme::optimized;
    for (int l = 0; l < codebook.num_amplitudes(); ++l) {
        for (int q = 0; q < codebook.num_phases(); ++q) {
            out.weights(l, q) = fit.x(l * codebook.num_phases() + q) / total;
        }
    }
    // renormalization can leave the sum a few ulp off; fold the residue into the largest weight
    Eigen::Index max_l = 0;
    Eigen::Index max_q = 0;
    out.weights.maxCoeff(&max_l, &max_q);
    out.weights(max_l, max_q) += 1.0 - out.weights.sum();

    const double before = metrics::fidelity(assemble(codebook, cutoff, tail_tol), target);
    const double after = metrics::fidelity(assemble(out, cutoff, tail_tol), target);
    if (after < before) {
        return codebook;
    }
    return out;
}

std::vector<SweepRow> sweep_fidelity(const std::vector<double>& nbars, const std::vector<int>& sample_counts,
                                     Scheme scheme, int cutoff, int trials, std::uint64_t seed,
                                     double tail_tol) {
    if (trials < 1) {
        throw InvalidArgument("sweep needs trials >= 1");
    }
    std::vector<int> sides;
    for (const int m : sample_counts) {
        const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
        if (m < 1 || side * side != m) {
            throw InvalidArgument("sample count M=" + std::to_string(m) + " is not a perfect square (L = Q)");
        }
        sides.push_back(side);
    }
    const int runs = scheme == Scheme::random ? trials : 1;

    std::vector<SweepRow> rows;
    for (const double nbar : nbars) {
        const FockDensityMatrix target = fock::thermal(nbar, cutoff, tail_tol);
        for (std::size_t i = 0; i < sample_counts.size(); ++i) {
            std::vector<double> values;
            for (int t = 0; t < runs; ++t) {
                const Scheme placement = scheme == Scheme::optimized ? Scheme::stratified : scheme;
                const Codebook cb = build_codebook(nbar, sides[i], sides[i], placement,
                                                   seed + static_cast<std::uint64_t>(t));
                const Codebook fitted = scheme == Scheme::optimized ? optimize_weights(cb, target, tail_tol) : cb;
                values.push_back(metrics::fidelity(target, assemble(fitted, cutoff, tail_tol)));
            }
            double mean = 0.0;
            for (const double v : values) {
                mean += v;
            }
            mean /= static_cast<double>(values.size());
            double var = 0.0;
            for (const double v : values) {
                var += (v - mean) * (v - mean);
            }
            const double std = values.size() > 1 ? std::sqrt(var / static_cast<double>(values.size() - 1)) : 0.0;
            rows.push_back({nbar, sample_counts[i], scheme, mean, std});
        }
    }
    return rows;
}

}  // namespace mimic
}  // namespace thermimic
