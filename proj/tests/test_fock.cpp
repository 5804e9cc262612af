#include "oracles.hpp"

#include "thermimic/error.hpp"
#include "thermimic/fock.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace thermimic;

TEST(ComplexAmplitude, WrapsPhaseAndRejectsNegativeMagnitude) {
    const ComplexAmplitude a(1.0, -std::numbers::pi / 2);
    EXPECT_NEAR(a.phase(), 3 * std::numbers::pi / 2, 1e-15);
    EXPECT_GE(wrap_phase(2 * std::numbers::pi), 0.0);
    EXPECT_LT(wrap_phase(2 * std::numbers::pi), 2 * std::numbers::pi);
    EXPECT_THROW(ComplexAmplitude(-0.1, 0.0), InvalidArgument);
    const auto b = ComplexAmplitude::from_complex(Complex(0.0, 2.0));
    EXPECT_NEAR(b.magnitude(), 2.0, 1e-15);
    EXPECT_NEAR(b.phase(), std::numbers::pi / 2, 1e-15);
}

TEST(CoherentPure, VacuumIsTheGroundState) {
    const auto psi = fock::coherent_pure(ComplexAmplitude(0.0, 0.0), 10);
    ASSERT_EQ(psi.cutoff(), 10);
    EXPECT_EQ(psi.coefficients()(0), Complex(1.0));
    for (int n = 1; n <= 10; ++n) {
        EXPECT_EQ(psi.coefficients()(n), Complex(0.0));
    }
}

TEST(CoherentPure, GroundAmplitudeIsGaussianFactor) {
    const auto psi = fock::coherent_pure(ComplexAmplitude(1.0, 0.0), 30);
    EXPECT_NEAR(psi.coefficients()(0).real(), 0.60653065971263342, 1e-14);
    EXPECT_NEAR(psi.coefficients()(0).imag(), 0.0, 1e-15);
}

TEST(CoherentPure, MatchesFactorialFormula) {
    for (const double mag : {0.3, 1.0, std::sqrt(1.5), 2.5, 3.5}) {
        for (const double phase : {0.0, 1.0, std::numbers::pi / 3, 5.5}) {
            const auto psi = fock::coherent_pure(ComplexAmplitude(mag, phase), 40);
            for (int n = 0; n <= 40; ++n) {
                const Complex want = oracle::coherent_coefficient(std::polar(mag, phase), n);
                EXPECT_NEAR(std::abs(psi.coefficients()(n) - want), 0.0, 1e-13) << mag << " " << phase << " " << n;
            }
        }
    }
}

TEST(CoherentPure, NormLossBelowPoissonTail) {
    const auto psi = fock::coherent_pure(ComplexAmplitude(std::sqrt(1.5), std::numbers::pi / 3), 30);
    EXPECT_GE(psi.squared_norm(), 1.0 - 1e-9);
    EXPECT_LE(psi.squared_norm(), 1.0 + 1e-12);
}

TEST(CoherentPure, LargeAmplitudeAtSmallCutoffThrows) {
    EXPECT_THROW(fock::coherent_pure(ComplexAmplitude(3.0, 0.0), 5), TruncationError);
    EXPECT_NO_THROW(fock::coherent_pure(ComplexAmplitude(3.0, 0.0), 5, 1.0));
}

TEST(Thermal, ZeroTemperatureIsVacuum) {
    const auto rho = fock::thermal(0.0, 5);
    EXPECT_NEAR((rho.matrix() - FockDensityMatrix::number_state(0, 5).matrix()).norm(), 0.0, 1e-15);
}

TEST(Thermal, UnitMeanIsGeometricHalves) {
    const auto rho = fock::thermal(1.0, 30);
    double p = 0.5;
    for (int n = 0; n <= 30; ++n, p *= 0.5) {
        EXPECT_NEAR(rho(n, n).real(), p, 1e-15);
    }
}

TEST(Thermal, DiagonalOnly) {
    const auto rho = fock::thermal(1.5, 30);
    EXPECT_NEAR(rho(0, 0).real(), 0.4, 1e-15);
    EXPECT_EQ(rho(0, 1), Complex(0.0));
    EXPECT_EQ(rho(3, 7), Complex(0.0));
}

TEST(Thermal, CutoffTooSmallThrows) {
    EXPECT_THROW(fock::thermal(2.0, 5), TruncationError);
    EXPECT_NEAR(fock::thermal_tail_mass(2.0, 5), std::pow(2.0 / 3.0, 6), 1e-15);
    EXPECT_THROW(fock::thermal(-0.1, 5), InvalidArgument);
}

TEST(Thermal, GeometricLawForRangeOfMeans) {
    for (const double nbar : {0.1, 0.5, 1.0, 2.0, 3.5, 5.0}) {
        const auto rho = fock::thermal(nbar, 120);
        for (int n = 0; n <= 120; ++n) {
            EXPECT_NEAR(rho(n, n).real(), std::pow(nbar, n) / std::pow(nbar + 1, n + 1), 1e-12);
            if (n > 0) {
                EXPECT_LT(rho(n, n).real(), rho(n - 1, n - 1).real());
            }
        }
    }
}

TEST(Thermal, MeanPhotonWithinTailError) {
    for (const double nbar : {0.5, 1.0, 1.35, 2.0}) {
        const int cutoff = 30;
        const auto rho = fock::thermal(nbar, cutoff, 1e-3);
        // sum_{n > c} n p_n for the geometric law
        const double q = nbar / (nbar + 1);
        const double tail = std::pow(q, cutoff + 1) * ((cutoff + 1) + nbar);
        EXPECT_LE(fock::mean_photon(rho), nbar + 1e-12);
        EXPECT_GE(fock::mean_photon(rho), nbar - tail - 1e-12);
    }
}

TEST(Mix, SingleCoherentIsPure) {
    const auto psi = fock::coherent_pure(ComplexAmplitude(1.2, 0.7), 30);
    const std::vector<fock::MixtureComponent> parts{{1.0, psi}};
    const auto rho = fock::mix(parts);
    EXPECT_GE(fock::purity(rho), 1.0 - 2 * kDefaultTailTol);
    EXPECT_TRUE(check_invariants(rho).ok());
}

TEST(Mix, RejectsBadWeightsAndCutoffs) {
    const auto a = fock::coherent_pure(ComplexAmplitude(0.5, 0.0), 20);
    const auto b = fock::coherent_pure(ComplexAmplitude(0.5, 1.0), 21);
    const std::vector<fock::MixtureComponent> bad_sum{{0.5, a}, {0.6, a}};
    EXPECT_THROW(fock::mix(bad_sum), InvalidArgument);
    const std::vector<fock::MixtureComponent> negative{{1.5, a}, {-0.5, a}};
    EXPECT_THROW(fock::mix(negative), InvalidArgument);
    const std::vector<fock::MixtureComponent> mismatched{{0.5, a}, {0.5, b}};
    EXPECT_THROW(fock::mix(mismatched), InvalidArgument);
}

TEST(Mix, PhaseAveragedCoherentStateIsDiagonalPoisson) {
    const int q = 16;
    std::vector<fock::MixtureComponent> parts;
    for (int k = 0; k < q; ++k) {
        parts.push_back({1.0 / q, fock::coherent_pure(ComplexAmplitude(1.0, 2 * std::numbers::pi * k / q), 12)});
    }
    const auto rho = fock::mix(parts);
    for (int m = 0; m <= 12; ++m) {
        EXPECT_NEAR(rho(m, m).real(), std::exp(-1.0) / std::tgamma(m + 1.0), 1e-14);
        for (int n = 0; n <= 12; ++n) {
            if (m != n && std::abs(m - n) % q != 0) {
                EXPECT_NEAR(std::abs(rho(m, n)), 0.0, 1e-15);
            }
        }
    }
}

TEST(Invariants, DetectBrokenMatrices) {
    EXPECT_TRUE(check_invariants(fock::thermal(1.0, 30)).ok());
    ComplexMatrix m = fock::thermal(1.0, 4, 1.0).matrix();
    m(0, 1) = Complex(0.0, 0.1);
    EXPECT_FALSE(check_invariants(FockDensityMatrix(m)).hermitian);
    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.2;
    neg(1, 1) = -0.2;
    const auto report = check_invariants(FockDensityMatrix(neg));
    EXPECT_TRUE(report.hermitian);
    EXPECT_FALSE(report.positive);
    EXPECT_THROW(FockDensityMatrix(ComplexMatrix::Zero(2, 3)), InvalidArgument);
}

TEST(Invariants, TraceWindowUsesTailTolerance) {
    const auto rho = fock::thermal(1.0, 10, 1e-2);
    EXPECT_FALSE(check_invariants(rho).trace_ok);
    InvariantTolerances loose;
    loose.tail = 1e-3;
    EXPECT_TRUE(check_invariants(rho, loose).trace_ok);
    EXPECT_NEAR(fock::normalize(rho).trace().real(), 1.0, 1e-15);
}

TEST(Truncate, KeepsLeadingBlock) {
    const auto rho = oracle::random_density(8, 11);
    const auto small = fock::truncate(rho, 3);
    ASSERT_EQ(small.cutoff(), 3);
    EXPECT_EQ((small.matrix() - rho.matrix().topLeftCorner(4, 4)).norm(), 0.0);
    EXPECT_THROW(fock::truncate(rho, 9), InvalidArgument);
}

TEST(NumberState, ProjectorAndBounds) {
    const auto rho = FockDensityMatrix::number_state(2, 4);
    EXPECT_EQ(rho(2, 2), Complex(1.0));
    EXPECT_NEAR(fock::mean_photon(rho), 2.0, 1e-15);
    EXPECT_THROW(FockDensityMatrix::number_state(5, 4), InvalidArgument);
}
