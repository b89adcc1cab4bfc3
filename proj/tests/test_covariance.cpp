#include <gtest/gtest.h>

#include "fadoa/covariance.hpp"
#include "fadoa/virtual_array.hpp"
#include "oracles.hpp"

using namespace fadoa;
using cd = std::complex<double>;

TEST(Scm, Examples) {
    EXPECT_EQ(scm(CMatrixXd::Zero(3, 5)), CMatrixXd::Zero(3, 3));

    std::mt19937_64 rng(1);
    const CMatrixXd v = oracle::random_complex(4, 1, rng);
    EXPECT_LT((scm(v) - v * v.adjoint()).norm(), 1e-14);

    const CMatrixXd d = oracle::random_complex(4, 100, rng);
    const CMatrixXd r = scm(d);
    EXPECT_LT((r - oracle::loop_scm(d)).norm(), 1e-13 * r.norm());
    EXPECT_LT((r - r.adjoint()).norm(), 1e-15 * r.norm());
    Eigen::SelfAdjointEigenSolver<CMatrixXd> eig(r);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
    EXPECT_THROW(scm(CMatrixXd(3, 0)), InvalidArgument);
}

TEST(ToeplitzRectify, Examples) {
    std::mt19937_64 rng(2);
    const CMatrixXd h = oracle::random_hermitian(6, rng);
    const CMatrixXd t = toeplitz_rectify(h);
    EXPECT_LT((toeplitz_rectify(t) - t).norm(), 1e-14);

    CMatrixXd d(2, 2);
    d << 1.0, cd(0.5, 0.25), cd(0.5, -0.25), 3.0;
    CMatrixXd expected(2, 2);
    expected << 2.0, cd(0.5, 0.25), cd(0.5, -0.25), 2.0;
    EXPECT_LT((toeplitz_rectify(d) - expected).norm(), 1e-15);

    EXPECT_LT((t - oracle::loop_toeplitz(h)).norm(), 1e-13);
    EXPECT_LT((t - t.adjoint()).norm(), 1e-14);
}

TEST(ToeplitzRectify, TraceAndIdempotence) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const Index n = 2 + trial % 9;
        const CMatrixXd h = oracle::random_hermitian(n, rng);
        const CMatrixXd t = toeplitz_rectify(h);
        EXPECT_NEAR(std::abs(t.trace() - h.trace()), 0, 1e-12);
        EXPECT_LT((toeplitz_rectify(t) - t).norm(), 1e-13);
    }
}

TEST(ToeplitzRectify, MatchesTraceFormSum) {
    std::mt19937_64 rng(4);
    const CMatrixXd h = oracle::random_hermitian(7, rng);
    const oracle::LMatrix ref = oracle::trace_form_toeplitz(h.cast<oracle::LComplex>());
    EXPECT_LT((toeplitz_rectify(h).cast<oracle::LComplex>() - ref).norm(), 1e-13L);
}

TEST(Shrinkage, ToeplitzInputGivesOne) {
    std::mt19937_64 rng(5);
    const CMatrixXd t = toeplitz_rectify(oracle::random_hermitian(5, rng));
    const auto d = shrinkage_coefficient(t, toeplitz_rectify(t), 50);
    EXPECT_TRUE(d.already_toeplitz);
    EXPECT_EQ(d.rho, 1.0);
}

TEST(Shrinkage, RefusesSmallN) {
    const CMatrixXd i = CMatrixXd::Identity(3, 3);
    EXPECT_THROW(shrinkage_coefficient(i, i, 3), InvalidArgument);
    EXPECT_NO_THROW(shrinkage_coefficient(i, i, 4));
}

TEST(Shrinkage, ClosedFormMatchesStepByStepOracle) {
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> dim(2, 10), blocks(4, 400);
    for (int trial = 0; trial < 200; ++trial) {
        const Index p = dim(rng);
        const Index n = blocks(rng);
        const CMatrixXd r = trial % 2 ? oracle::random_hermitian(p, rng) : scm(oracle::random_complex(p, n, rng));
        const auto d = shrinkage_coefficient(r, toeplitz_rectify(r), n);
        const auto steps = oracle::shrinkage_steps(r, n);
        EXPECT_NEAR(d.rho_raw, static_cast<double>(steps.rho), 1e-12 * std::abs(static_cast<double>(steps.rho)));
    }
}

TEST(Shrinkage, ClampedAndDiagnosticsConsistent) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        const Index n = 4 + trial;
        const CMatrixXd r = scm(oracle::random_complex(6, n, rng));
        const CMatrixXd rt = toeplitz_rectify(r);
        const auto d = shrinkage_coefficient(r, rt, n);
        EXPECT_GE(d.rho, 0.0);
        EXPECT_LE(d.rho, 1.0);
        EXPECT_EQ(d.rho, std::clamp(d.rho_raw, 0.0, 1.0));
        EXPECT_NEAR(d.trace, r.trace().real(), 1e-12);
        EXPECT_NEAR(d.trace_sq, (r * r).trace().real(), 1e-10);
        EXPECT_NEAR(d.distance_sq, ((r - rt) * (r - rt)).trace().real(), 1e-10);
    }
}

TEST(EnhancedScm, Examples) {
    std::mt19937_64 rng(8);
    const CMatrixXd r = scm(oracle::random_complex(5, 30, rng));
    const CMatrixXd rt = toeplitz_rectify(r);
    EXPECT_EQ(enhanced_scm(r, rt, 0.0), r);
    EXPECT_EQ(enhanced_scm(r, rt, 1.0), rt);
    const CMatrixXd half = enhanced_scm(r, rt, 0.5);
    for (Index i = 0; i < 5; ++i)
        for (Index j = 0; j < 5; ++j) EXPECT_NEAR(std::abs(half(i, j) - (r(i, j) + rt(i, j)) / 2.0), 0, 1e-15);
    EXPECT_THROW(enhanced_scm(r, rt, 1.5), InvalidArgument);
    EXPECT_THROW(enhanced_scm(r, rt, -0.1), InvalidArgument);
}

TEST(EnhancedScm, DistanceToTargetNonIncreasing) {
    std::mt19937_64 rng(9);
    const CMatrixXd r = scm(oracle::random_complex(6, 20, rng));
    const CMatrixXd rt = toeplitz_rectify(r);
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= 20; ++i) {
        const double dist = (enhanced_scm(r, rt, i / 20.0) - rt).norm();
        EXPECT_LE(dist, prev + 1e-15);
        prev = dist;
    }
}

TEST(EnhancedScm, HermitianAndPsdForPsdInputs) {
    std::mt19937_64 rng(10);
    const CMatrixXd r = scm(oracle::random_complex(5, 40, rng));
    const CMatrixXd b = scm(oracle::random_complex(5, 40, rng));
    const CMatrixXd e = enhanced_scm(r, b, 0.3);
    EXPECT_LT((e - e.adjoint()).norm(), 1e-14);
    Eigen::SelfAdjointEigenSolver<CMatrixXd> eig(e);
    EXPECT_GE(eig.eigenvalues().minCoeff(), -1e-12);
}

TEST(SubCovariances, ZeroAndRankOne) {
    SnapshotSet<double> zero;
    zero.mode = Mode::NARS;
    zero.per_state.assign(3, CMatrixXd::Zero(2, 10));
    for (const auto& r : sub_covariances(zero)) EXPECT_EQ(r, CMatrixXd::Zero(2, 2));

    Scene s;
    s.doas_deg = {23};
    s.noise_var = 0;
    const ArraySpec spec{Mode::NARS, 3, 2, 0.5};
    const auto covs = sub_covariances(simulate_dataset<double>(s, spec, 30, 4));
    const double phi = 2 * std::numbers::pi * 0.5 * std::sin(23.0 * std::numbers::pi / 180);
    for (int g = 0; g < 3; ++g) {
        const auto pos = nars_positions(spec, g);
        const CMatrixXd& r = covs[g];
        Eigen::SelfAdjointEigenSolver<CMatrixXd> eig(r);
        EXPECT_LT(eig.eigenvalues().head(2).cwiseAbs().maxCoeff(), 1e-12 * eig.eigenvalues()[2]);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                const cd expected = r(0, 0) * std::polar(1.0, -(pos[a] - pos[b]) * phi);
                EXPECT_NEAR(std::abs(r(a, b) - expected), 0, 1e-12 * std::abs(r(0, 0)));
            }
    }
    SnapshotSet<double> ars;
    EXPECT_THROW(sub_covariances(ars), InvalidArgument);
}

TEST(Shrinkage, LowSnrExceedsHighSnr) {
    Scene s;
    s.num_users = 2;
    s.paths_per_user = 3;
    s.doas_deg = {-15.2, -10.5, -5.3, 4.1, 10.3, 15.4};
    const ArraySpec spec{Mode::ARS, 20, 1, 0.5};
    auto mean_rho = [&](double snr) {
        s.set_snr_db(snr);
        double sum = 0;
        for (int t = 0; t < 100; ++t) {
            const auto data = simulate_dataset<double>(s, spec, 200, 1000 + t);
            const CMatrixXd r = scm(rearrange_ars(data.stacked, spec));
            sum += shrinkage_coefficient(r, toeplitz_rectify(r), 200).rho;
        }
        return sum / 100;
    };
    EXPECT_GT(mean_rho(-20), mean_rho(10));
}
