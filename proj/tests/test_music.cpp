#include <gtest/gtest.h>

#include <cmath>

#include "fadoa/music.hpp"
#include "fadoa/scene.hpp"

using namespace fadoa;
using cd = std::complex<double>;

namespace {

SpectrumGrid<double> bumps(std::vector<double> centers, std::vector<double> heights, double width, double step = 0.05) {
    SpectrumGrid<double> s;
    s.angles_deg = angle_grid<double>(step);
    for (double t : s.angles_deg) {
        // Lorentzian tails never flatten into rounding-noise plateaus
        double v = 0;
        for (std::size_t i = 0; i < centers.size(); ++i)
            v += heights[i] / (1.0 + std::pow((t - centers[i]) / width, 2));
        s.values.push_back(v);
    }
    return s;
}

CMatrixXd ula_covariance(std::vector<double> doas, Index size, double noise) {
    Scene s;
    s.num_users = static_cast<int>(doas.size());
    s.doas_deg = std::move(doas);
    s.noise_var = noise;
    return ars_expected_covariance<double>(s, ArraySpec{Mode::ARS, static_cast<int>(size), 0, 0.5});
}

}  // namespace

TEST(AngleGrid, DefaultHas3600Points) {
    const auto g = angle_grid<double>(0.05);
    ASSERT_EQ(g.size(), 3600u);
    EXPECT_NEAR(g.front(), -89.95, 1e-9);
    EXPECT_NEAR(g.back(), 90.0, 1e-9);
    for (std::size_t i = 1; i < g.size(); ++i) EXPECT_GT(g[i], g[i - 1]);
    EXPECT_THROW(angle_grid<double>(0.0), InvalidArgument);
}

TEST(VirtualSteering, Ars) {
    EXPECT_LT((virtual_steering_ars(0.0, 5, 0.5) - CVectorXd::Ones(5)).norm(), 1e-15);
    const auto v = virtual_steering_ars(90.0, 2, 0.5);
    EXPECT_NEAR(std::abs(v[1] - std::polar(1.0, -std::numbers::pi)), 0, 1e-12);
    for (double t : {-73.0, -5.0, 12.5, 88.0}) EXPECT_NEAR(virtual_steering_ars(t, 9, 0.5).squaredNorm(), 9.0, 1e-12);
}

TEST(VirtualSteering, Nars) {
    EXPECT_LT((virtual_steering_nars(0.0, 6, 0.5) - CVectorXd::Ones(7)).norm(), 1e-15);
    // a pair: coarray of two elements, conjugate of the physical ramp
    const auto pair = virtual_steering_nars(33.0, 1, 0.5);
    ASSERT_EQ(pair.size(), 2);
    for (double t : {-60.0, -7.0, 21.0, 80.0})
        EXPECT_LT((virtual_steering_nars(t, 6, 0.5) - virtual_steering_ars(t, 7, 0.5).conjugate()).norm(), 1e-12);
}

TEST(MusicSpectrum, NoiseFreeSourcePeaksAtTruth) {
    const CMatrixXd r = ula_covariance({10.0}, 8, 0.0);
    const auto basis = exact_signal_subspace<double>(r, 1);
    const auto spec = music_spectrum<double>(basis, SteeringFamily<double>::ars(8, 0.5), 0.05);
    const auto it = std::max_element(spec.values.begin(), spec.values.end());
    EXPECT_NEAR(spec.angles_deg[static_cast<std::size_t>(it - spec.values.begin())], 10.0, 0.025 + 1e-9);
    EXPECT_EQ(*it, kSpectrumCap);
}

TEST(MusicSpectrum, PositiveFinite) {
    const CMatrixXd r = ula_covariance({-30, 40}, 6, 0.5);
    const auto spec = music_spectrum<double>(exact_signal_subspace<double>(r, 2), SteeringFamily<double>::ars(6, 0.5), 0.1);
    EXPECT_EQ(spec.values.size(), 1800u);
    for (double v : spec.values) {
        EXPECT_TRUE(std::isfinite(v));
        EXPECT_GT(v, 0.0);
        EXPECT_LE(v, kSpectrumCap);
    }
}

TEST(MusicSpectrum, RejectsFullRankBasisAndSizeMismatch) {
    SubspaceBasis<double> full;
    full.basis = CMatrixXd::Identity(3, 3);
    EXPECT_THROW(music_spectrum<double>(full, SteeringFamily<double>::ars(3, 0.5), 0.05), InvalidArgument);
    SubspaceBasis<double> one;
    one.basis = CMatrixXd::Identity(3, 1);
    EXPECT_THROW(music_spectrum<double>(one, SteeringFamily<double>::ars(4, 0.5), 0.05), InvalidArgument);
}

TEST(PickPeaks, UnimodalInterpolated) {
    const auto s = bumps({12.34}, {1.0}, 2.0);
    const auto p = pick_peaks(s, 1);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(p[0], 12.34, 0.01);
}

TEST(PickPeaks, TieBreaksTowardSmallerAngle) {
    const auto s = bumps({-30.0, 30.0}, {1.0, 1.0}, 1.0);
    const auto p = pick_peaks(s, 1);
    ASSERT_EQ(p.size(), 1u);
    EXPECT_NEAR(p[0], -30.0, 0.01);
}

TEST(PickPeaks, TwoBumps) {
    const auto s = bumps({-20.0, 35.0}, {2.0, 1.0}, 0.8);
    std::vector<std::size_t> idx;
    for (std::size_t i = 1; i + 1 < s.values.size(); ++i)
        if (s.values[i] > s.values[i - 1] && s.values[i] >= s.values[i + 1]) idx.push_back(i);
    ASSERT_EQ(idx.size(), 2u);
    EXPECT_NEAR(s.angles_deg[idx[0]], -20.0, 0.025 + 1e-9);
    EXPECT_NEAR(s.angles_deg[idx[1]], 35.0, 0.025 + 1e-9);
    const auto p = pick_peaks(s, 2);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_NEAR(p[0], -20.0, 0.01);
    EXPECT_NEAR(p[1], 35.0, 0.01);
}

TEST(PickPeaks, KeepsTheLargestAndSorts) {
    const auto s = bumps({-60.0, -10.0, 20.0, 70.0}, {0.5, 3.0, 0.2, 2.0}, 1.0);
    const auto p = pick_peaks(s, 2);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_NEAR(p[0], -10.0, 0.01);
    EXPECT_NEAR(p[1], 70.0, 0.01);
}

TEST(PickPeaks, TooFewMaximaReportsCount) {
    const auto s = bumps({5.0}, {1.0}, 3.0);
    try {
        pick_peaks(s, 3);
        FAIL() << "expected ResolutionFailure";
    } catch (const ResolutionFailure& e) {
        EXPECT_EQ(e.found(), 1u);
        EXPECT_EQ(e.wanted(), 3u);
    }
}

TEST(PickPeaks, MonotoneSpectrumHasNoInteriorMaximum) {
    SpectrumGrid<double> s;
    s.angles_deg = angle_grid<double>(1.0);
    for (std::size_t i = 0; i < s.angles_deg.size(); ++i) s.values.push_back(double(i));
    EXPECT_THROW(pick_peaks(s, 1), ResolutionFailure);
}

TEST(MusicSpectrum, FinerGridNeverWorse) {
    const std::vector<double> truth{-33.33, 7.77};
    const CMatrixXd r = ula_covariance(truth, 10, 0.1);
    const auto basis = exact_signal_subspace<double>(r, 2);
    double prev = std::numeric_limits<double>::infinity();
    for (double step : {0.4, 0.2, 0.1, 0.05}) {
        const auto p = pick_peaks(music_spectrum<double>(basis, SteeringFamily<double>::ars(10, 0.5), step), 2);
        const double err = std::max(std::abs(p[0] - truth[0]), std::abs(p[1] - truth[1]));
        EXPECT_LE(err, prev + 1e-9) << "step " << step;
        prev = err;
    }
}
