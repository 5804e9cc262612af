#include "oracles.hpp"

#include "thermimic/error.hpp"
#include "thermimic/metrics.hpp"
#include "thermimic/mimic.hpp"

#include <gtest/gtest.h>

using namespace thermimic;

namespace {

FockDensityMatrix coherent(double alpha_sq, double phase, int cutoff) {
    return FockDensityMatrix::projector(fock::coherent_pure(ComplexAmplitude(std::sqrt(alpha_sq), phase), cutoff));
}

// Mix of full-rank, low-rank and pure states so the square roots see zero eigenvalues too.
std::vector<std::pair<FockDensityMatrix, FockDensityMatrix>> random_pairs() {
    std::vector<std::pair<FockDensityMatrix, FockDensityMatrix>> pairs;
    for (std::uint64_t i = 0; i < 50; ++i) {
        const int cutoff = 2 + static_cast<int>(i % 7);
        auto a = oracle::random_density(cutoff, 1000 + i);
        auto b = oracle::random_density(cutoff, 2000 + i);
        if (i % 5 == 0) {
            a = coherent(0.3 + 0.02 * i, 0.1 * i, cutoff + 20);
            b = fock::truncate(oracle::random_density(cutoff + 20, 3000 + i), cutoff + 20);
        }
        if (i % 7 == 0) {
            b = FockDensityMatrix::number_state(static_cast<int>(i % 3), a.cutoff());
        }
        pairs.emplace_back(a, b);
    }
    return pairs;
}

}  // namespace

TEST(Fidelity, SelfFidelityIsOne) {
    const auto rho = fock::thermal(1.0, 30);
    EXPECT_NEAR(metrics::fidelity(rho, rho), 1.0, 1e-9);
    const auto psi = coherent(1.0, 0.3, 30);
    EXPECT_NEAR(metrics::fidelity(psi, psi), 1.0, 1e-9);
}

TEST(Fidelity, PureStateOverlap) {
    EXPECT_NEAR(metrics::fidelity(FockDensityMatrix::number_state(0, 30), fock::thermal(1.0, 30)), 0.5, 1e-12);
    EXPECT_NEAR(metrics::fidelity(fock::thermal(1.0, 30), FockDensityMatrix::number_state(0, 30)), 0.5, 1e-12);
}

TEST(Fidelity, StratifiedMixtureReachesTarget) {
    const auto art = mimic::assemble(mimic::build_codebook(1.0, 8, 8, Scheme::stratified), 30);
    EXPECT_GE(metrics::fidelity(fock::thermal(1.0, 30), art), 0.99);
}

TEST(Fidelity, MatchesEigenRouteOracle) {
    for (const auto& [a, b] : random_pairs()) {
        if (fock::purity(a) > 1.0 - 1e-9) {
            // rank one: F = <psi|b|psi>, and the eigen route loses sqrt(eps) on the null space
            EXPECT_NEAR(metrics::fidelity(a, b), (a.matrix() * b.matrix()).trace().real(), 1e-12);
        } else {
            EXPECT_NEAR(metrics::fidelity(a, b), oracle::fidelity(a, b), 1e-9);
        }
    }
}

TEST(Fidelity, SymmetricAndBounded) {
    for (const auto& [a, b] : random_pairs()) {
        const double fab = metrics::fidelity(a, b);
        EXPECT_NEAR(fab, metrics::fidelity(b, a), 1e-9);
        EXPECT_GE(fab, 0.0);
        EXPECT_LE(fab, 1.0 + 1e-9);
        EXPECT_LT(fab, 1.0 - 1e-6);  // these pairs differ well above 1e-7
    }
}

TEST(Fidelity, RejectsNonPsdAndMismatchedCutoff) {
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 0) = 1.1;
    bad(1, 1) = -0.1;
    EXPECT_THROW(metrics::fidelity(FockDensityMatrix(bad), fock::thermal(0.5, 1, 1.0)), NotPositiveError);
    ComplexMatrix slightly = fock::thermal(0.5, 1, 1.0).matrix();
    slightly(1, 1) = -1e-10;
    EXPECT_NO_THROW(metrics::fidelity(FockDensityMatrix(slightly), fock::thermal(0.5, 1, 1.0)));
    EXPECT_THROW(metrics::fidelity(fock::thermal(1.0, 30), fock::thermal(1.0, 31)), InvalidArgument);
}

TEST(TraceDistance, BasicValues) {
    const auto rho = fock::thermal(1.0, 30);
    EXPECT_NEAR(metrics::trace_distance(rho, rho), 0.0, 1e-15);
    EXPECT_NEAR(metrics::trace_distance(FockDensityMatrix::number_state(0, 3), FockDensityMatrix::number_state(1, 3)),
                1.0, 1e-15);
    EXPECT_THROW(metrics::trace_distance(rho, fock::thermal(1.0, 29, 1.0)), InvalidArgument);
}

TEST(TraceDistance, FuchsVanDeGraaffSandwich) {
    for (const auto& [a, b] : random_pairs()) {
        const double f = metrics::fidelity(a, b);
        const double t = metrics::trace_distance(a, b);
        EXPECT_GE(t, 1.0 - std::sqrt(f) - 1e-8);
        EXPECT_LE(t, std::sqrt(1.0 - f) + 1e-8);
    }
}

TEST(Helstrom, LimitsAndDefinition) {
    const auto rho = fock::thermal(1.0, 30);
    EXPECT_NEAR(metrics::helstrom_error(rho, rho), 0.5, 1e-15);
    EXPECT_NEAR(
        metrics::helstrom_error(FockDensityMatrix::number_state(0, 3), FockDensityMatrix::number_state(2, 3)), 0.0,
        1e-15);
    for (const auto& [a, b] : random_pairs()) {
        EXPECT_NEAR(metrics::helstrom_error(a, b) + 0.5 * metrics::trace_distance(a, b), 0.5, 1e-15);
    }
}

TEST(Helstrom, ThermalVersusLaser) {
    const double p = metrics::helstrom_error(fock::thermal(1.0, 30), coherent(1.0, 0.0, 30));
    EXPECT_NEAR(p, 0.14, 0.02);
}

TEST(Entropy, PureStatesCarryNone) {
    for (const double a2 : {0.0, 0.5, 1.0, 2.0}) {
        EXPECT_NEAR(metrics::von_neumann_entropy(coherent(a2, 1.1, 30)), 0.0, 1e-9);
    }
}

TEST(Entropy, ThermalMatchesClosedForm) {
    EXPECT_NEAR(metrics::von_neumann_entropy(fock::thermal(1.0, 60)), 2.0, 1e-6);
    for (const double nbar : {0.25, 0.5, 1.0, 1.35, 2.0}) {
        const auto rho = fock::thermal(nbar, 40, 1e-4);
        double truncated = 0.0;
        for (int n = 0; n <= 40; ++n) {
            const double p = rho(n, n).real();
            truncated -= p * std::log2(p);
        }
        EXPECT_NEAR(metrics::von_neumann_entropy(rho), truncated, 1e-12) << nbar;
        EXPECT_NEAR(metrics::thermal_entropy(nbar), oracle::thermal_entropy(nbar), 1e-12);
        // at nbar = 2 the states beyond n = 40 still hold 1.6e-6 bits
        const int cutoff = nbar < 2.0 ? 40 : 60;
        EXPECT_NEAR(metrics::von_neumann_entropy(fock::thermal(nbar, cutoff, 1e-4)), oracle::thermal_entropy(nbar),
                    1e-6)
            << nbar;
    }
}

TEST(Entropy, OperatingPointFromEntropyCeiling) {
    const double nbar = oracle::nbar_for_entropy(2.31);
    EXPECT_NEAR(nbar, 1.35, 0.01);
    EXPECT_NEAR(metrics::thermal_entropy(1.35), 2.31, 0.01);
}

TEST(Entropy, ThermalIsMaximalAtFixedMean) {
    for (const double nbar : {0.5, 1.0, 1.5, 2.0}) {
        for (const int side : {2, 4, 8}) {
            for (const Scheme scheme : {Scheme::stratified, Scheme::random}) {
                const auto art = mimic::assemble(mimic::build_codebook(nbar, side, side, scheme, 9), 30);
                EXPECT_LE(metrics::von_neumann_entropy(art),
                          metrics::thermal_entropy(fock::mean_photon(art)) + 1e-9);
            }
        }
    }
}

TEST(Entropy, RejectsNegativeSpectrum) {
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    EXPECT_THROW(metrics::von_neumann_entropy(FockDensityMatrix(bad)), NotPositiveError);
}

TEST(Compare, ReportFields) {
    const auto a = fock::thermal(1.0, 30);
    const auto b = coherent(1.0, 0.0, 30);
    const auto r = metrics::compare(a, b);
    EXPECT_EQ(r.fidelity, metrics::fidelity(a, b));
    EXPECT_EQ(r.trace_distance, metrics::trace_distance(a, b));
    EXPECT_EQ(r.helstrom_error, metrics::helstrom_error(a, b));
    EXPECT_NEAR(r.entropy_a, 2.0, 1e-5);
    EXPECT_NEAR(r.entropy_b, 0.0, 1e-9);
    EXPECT_NEAR(r.mean_photon_a, 1.0, 1e-7);
    EXPECT_NEAR(r.mean_photon_b, 1.0, 1e-9);
}
