#include "oracles.hpp"

#include "thermimic/error.hpp"
#include "thermimic/metrics.hpp"
#include "thermimic/mimic.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace thermimic;

TEST(RayleighQuantile, ClosedFormPoints) {
    EXPECT_EQ(mimic::rayleigh_quantile(1.0, 0.0), 0.0);
    EXPECT_NEAR(mimic::rayleigh_quantile(1.0, 0.5), 0.83255461115769769, 1e-14);
    EXPECT_NEAR(mimic::rayleigh_quantile(2.0, 1.0 - std::exp(-1.0)), std::sqrt(2.0), 1e-14);
    EXPECT_THROW(mimic::rayleigh_quantile(1.0, 1.0), InvalidArgument);
    EXPECT_THROW(mimic::rayleigh_quantile(1.0, -0.1), InvalidArgument);
    EXPECT_THROW(mimic::rayleigh_quantile(0.0, 0.5), InvalidArgument);
}

TEST(RayleighQuantile, AgreesWithBisectionOracle) {
    for (const double nbar : {0.3, 1.0, 1.35, 4.0}) {
        for (const double u : {0.01, 0.2, 0.5, 0.9, 0.999}) {
            EXPECT_NEAR(mimic::rayleigh_quantile(nbar, u), oracle::rayleigh_quantile(nbar, u), 1e-12);
        }
    }
}

TEST(BuildCodebook, SingleStratifiedPoint) {
    const auto cb = mimic::build_codebook(1.0, 1, 1, Scheme::stratified);
    ASSERT_EQ(cb.size(), 1);
    EXPECT_NEAR(cb.amplitudes[0], std::sqrt(std::log(2.0)), 1e-15);
    EXPECT_NEAR(cb.phases[0], std::numbers::pi, 1e-15);
    EXPECT_EQ(cb.weights(0, 0), 1.0);
}

TEST(BuildCodebook, MidpointPhaseGrid) {
    const auto cb = mimic::build_codebook(1.0, 2, 4, Scheme::stratified);
    const double pi = std::numbers::pi;
    const std::vector<double> want{pi / 4, 3 * pi / 4, 5 * pi / 4, 7 * pi / 4};
    ASSERT_EQ(cb.num_phases(), 4);
    for (int q = 0; q < 4; ++q) {
        EXPECT_NEAR(cb.phases[q], want[q], 1e-15);
    }
    EXPECT_TRUE((cb.weights.array() == 1.0 / 8).all());
}

TEST(BuildCodebook, StratifiedAmplitudesIncreaseAndMatchRayleighMean) {
    const double nbar = 1.0;
    const auto cb = mimic::build_codebook(nbar, 32, 1, Scheme::stratified);
    double mean = 0.0;
    for (int l = 0; l < 32; ++l) {
        if (l > 0) {
            EXPECT_GT(cb.amplitudes[l], cb.amplitudes[l - 1]);
        }
        mean += cb.amplitudes[l] * cb.weights(l, 0);
    }
    const double rayleigh_mean = std::sqrt(std::numbers::pi * nbar) / 2;
    EXPECT_NEAR(mean, rayleigh_mean, 0.02 * rayleigh_mean);
}

TEST(BuildCodebook, RandomSchemeIsSeedDeterministic) {
    const auto a = mimic::build_codebook(1.5, 8, 8, Scheme::random, 7);
    const auto b = mimic::build_codebook(1.5, 8, 8, Scheme::random, 7);
    const auto c = mimic::build_codebook(1.5, 8, 8, Scheme::random, 8);
    EXPECT_TRUE(a == b);
    EXPECT_FALSE(a == c);
    EXPECT_THROW(mimic::build_codebook(1.5, 8, 8, Scheme::random), InvalidArgument);
}

TEST(BuildCodebook, RejectsBadShape) {
    EXPECT_THROW(mimic::build_codebook(1.0, 0, 4, Scheme::stratified), InvalidArgument);
    EXPECT_THROW(mimic::build_codebook(1.0, 4, 0, Scheme::stratified), InvalidArgument);
    EXPECT_THROW(mimic::build_codebook(0.0, 4, 4, Scheme::stratified), InvalidArgument);
}

TEST(Codebook, ValidateCatchesBrokenWeights) {
    auto cb = mimic::build_codebook(1.0, 2, 2, Scheme::stratified);
    cb.weights(0, 0) = 0.3;
    EXPECT_THROW(cb.validate(), InvalidArgument);
    cb.weights(0, 0) = -0.25;
    cb.weights(1, 1) = 0.75;
    EXPECT_THROW(cb.validate(), InvalidArgument);
}

TEST(Assemble, ZeroAmplitudeIsVacuum) {
    Codebook cb;
    cb.nbar_target = 1.0;
    cb.amplitudes = {0.0};
    cb.phases = {0.0};
    cb.weights = Eigen::MatrixXd::Ones(1, 1);
    const auto rho = mimic::assemble(cb, 10);
    EXPECT_NEAR((rho.matrix() - FockDensityMatrix::number_state(0, 10).matrix()).norm(), 0.0, 1e-15);
}

TEST(Assemble, StratifiedEightByEightMimicsThermal) {
    const auto rho = mimic::assemble(mimic::build_codebook(1.0, 8, 8, Scheme::stratified), 30);
    EXPECT_GE(metrics::fidelity(rho, fock::thermal(1.0, 30)), 0.99);
}

TEST(Assemble, PhaseOrthogonalityKillsOffDiagonals) {
    for (const int q : {2, 3, 5, 8}) {
        const auto rho = mimic::assemble(mimic::build_codebook(1.2, 3, q, Scheme::stratified), 20);
        for (int m = 0; m <= 20; ++m) {
            for (int n = 0; n <= 20; ++n) {
                if ((m - n) % q != 0) {
                    EXPECT_LT(std::abs(rho(m, n)), 1e-10) << q << " " << m << " " << n;
                }
            }
        }
    }
}

TEST(Assemble, OutputIsAValidState) {
    const auto cb = mimic::build_codebook(2.0, 8, 8, Scheme::random, 5);
    const auto rho = mimic::assemble(cb, 30);
    InvariantTolerances tol;
    tol.tail = kDefaultTailTol * cb.size();
    tol.trace_excess = 1e-9;
    EXPECT_TRUE(check_invariants(rho, tol).ok());
}

TEST(Assemble, FidelityMonotoneInLevelsAndPhases) {
    const std::vector<int> grid{2, 4, 8, 16};
    for (const double nbar : {0.5, 1.0, 1.5, 2.0}) {
        const auto target = fock::thermal(nbar, 30, 1e-5);
        std::vector<std::vector<double>> f(grid.size(), std::vector<double>(grid.size()));
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t j = 0; j < grid.size(); ++j) {
                f[i][j] = metrics::fidelity(
                    target, mimic::assemble(mimic::build_codebook(nbar, grid[i], grid[j], Scheme::stratified), 30));
            }
        }
        for (std::size_t i = 0; i < grid.size(); ++i) {
            for (std::size_t j = 0; j < grid.size(); ++j) {
                if (i > 0) {
                    EXPECT_GE(f[i][j], f[i - 1][j] - 1e-12) << nbar << " L " << grid[i] << " Q " << grid[j];
                }
                if (j > 0) {
                    EXPECT_GE(f[i][j], f[i][j - 1] - 1e-12) << nbar << " L " << grid[i] << " Q " << grid[j];
                }
            }
        }
    }
}

TEST(HermitianEmbedding, PreservesFrobeniusNorm) {
    const auto rho = oracle::random_density(6, 3);
    const Eigen::VectorXd v = mimic::hermitian_embedding(rho.matrix());
    EXPECT_EQ(v.size(), 49);
    EXPECT_NEAR(v.norm(), rho.matrix().norm(), 1e-14);
    const auto sigma = oracle::random_density(6, 4);
    EXPECT_NEAR((v - mimic::hermitian_embedding(sigma.matrix())).norm(), (rho.matrix() - sigma.matrix()).norm(),
                1e-14);
}

TEST(OptimizeWeights, SingleVacuumPointIsFixed) {
    Codebook cb;
    cb.nbar_target = 1.0;
    cb.amplitudes = {0.0};
    cb.phases = {0.0};
    cb.weights = Eigen::MatrixXd::Ones(1, 1);
    const auto out = mimic::optimize_weights(cb, FockDensityMatrix::number_state(0, 10));
    EXPECT_EQ(out.weights(0, 0), 1.0);
}

TEST(OptimizeWeights, NeverLowersFidelity) {
    const auto target = fock::thermal(1.0, 30);
    const auto cb = mimic::build_codebook(1.0, 4, 4, Scheme::stratified);
    const auto out = mimic::optimize_weights(cb, target);
    EXPECT_NO_THROW(out.validate());
    EXPECT_GE(metrics::fidelity(mimic::assemble(out), target),
              metrics::fidelity(mimic::assemble(cb), target) - 1e-12);
}

TEST(OptimizeWeights, RandomConstellationImproves) {
    // Regression baseline: this draw reaches 0.9431 after the fit (0.8954 before).
    const auto target = fock::thermal(1.5, 30);
    const auto cb = mimic::build_codebook(1.5, 8, 8, Scheme::random, 3);
    const double before = metrics::fidelity(mimic::assemble(cb), target);
    const double after = metrics::fidelity(mimic::assemble(mimic::optimize_weights(cb, target)), target);
    EXPECT_NEAR(before, 0.895406, 1e-5);
    EXPECT_NEAR(after, 0.943055, 1e-5);
}

TEST(OptimizeWeights, IdenticalPointsAreSingular) {
    Codebook cb;
    cb.nbar_target = 1.0;
    cb.amplitudes = {1.0, 1.0};
    cb.phases = {0.5};
    cb.weights = Eigen::MatrixXd::Constant(2, 1, 0.5);
    EXPECT_THROW(mimic::optimize_weights(cb, fock::thermal(1.0, 20)), SingularityError);
}

TEST(SweepFidelity, SingleCellAndSquareCheck) {
    const auto rows = mimic::sweep_fidelity({1.0}, {64}, Scheme::stratified, 30, 1, 0);
    ASSERT_EQ(rows.size(), 1u);
    EXPECT_EQ(rows[0].samples, 64);
    EXPECT_GE(rows[0].fidelity_mean, 0.99);
    EXPECT_EQ(rows[0].fidelity_std, 0.0);
    EXPECT_THROW(mimic::sweep_fidelity({1.0}, {12}, Scheme::stratified, 30, 1, 0), InvalidArgument);
}

TEST(SweepFidelity, MoreSamplesNeededAtHigherMean) {
    const auto rows = mimic::sweep_fidelity({0.5, 2.0}, {4, 64}, Scheme::stratified, 30, 1, 0, 1e-5);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_LT(rows[0].fidelity_mean, rows[1].fidelity_mean);
    EXPECT_LT(rows[2].fidelity_mean, rows[0].fidelity_mean);
}

TEST(SweepFidelity, RandomDrawsAgreeWithStratifiedWithinThreeSigma) {
    const auto strat = mimic::sweep_fidelity({1.0}, {64}, Scheme::stratified, 30, 1, 0);
    const auto rand = mimic::sweep_fidelity({1.0}, {64}, Scheme::random, 30, 20, 100);
    ASSERT_GT(rand[0].fidelity_std, 0.0);
    EXPECT_LE(std::abs(rand[0].fidelity_mean - strat[0].fidelity_mean), 3 * rand[0].fidelity_std);
}

TEST(Scheme, NamesRoundTrip) {
    for (const auto s : {Scheme::stratified, Scheme::random, Scheme::optimized}) {
        EXPECT_EQ(parse_scheme(to_string(s)), s);
    }
    EXPECT_THROW(parse_scheme("uniform"), InvalidArgument);
}
