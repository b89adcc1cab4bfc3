#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include "fadoa/geometry.hpp"

using namespace fadoa;

namespace {

ArraySpec ars(int m, int g) { return {Mode::ARS, m, g, 0.5}; }
ArraySpec nars(int m, int g) { return {Mode::NARS, m, g, 0.5}; }

std::vector<int> range(int lo, int hi) {
    std::vector<int> out(static_cast<std::size_t>(hi - lo + 1));
    std::iota(out.begin(), out.end(), lo);
    return out;
}

}  // namespace

TEST(ArraySpec, Validation) {
    EXPECT_NO_THROW(ars(1, 0).validate());
    EXPECT_NO_THROW(nars(2, 0).validate());
    EXPECT_THROW(ars(0, 0).validate(), InvalidArgument);
    EXPECT_THROW(nars(1, 3).validate(), InvalidArgument);
    EXPECT_THROW(ars(2, -1).validate(), InvalidArgument);
    EXPECT_THROW((ArraySpec{Mode::ARS, 2, 1, 0.6}).validate(), InvalidArgument);
    EXPECT_THROW((ArraySpec{Mode::ARS, 2, 1, 0.0}).validate(), InvalidArgument);
    EXPECT_NO_THROW((ArraySpec{Mode::ARS, 2, 1, 0.25}).validate());
}

TEST(ArsPositions, Examples) {
    EXPECT_EQ(ars_positions(ars(2, 2), 0), (std::vector<int>{0, 3}));
    EXPECT_EQ(ars_positions(ars(1, 0), 0), (std::vector<int>{0}));
    EXPECT_EQ(ars_lag_set(ars(2, 2)), range(0, 5));
    EXPECT_EQ(ars_lag_set(ars(1, 3)), range(0, 3));
    EXPECT_EQ(ars_lag_set(ars(5, 0)), range(0, 4));
    EXPECT_THROW(ars_positions(ars(2, 2), 3), InvalidArgument);
    EXPECT_THROW(ars_positions(ars(2, 2), -1), InvalidArgument);
}

TEST(NarsPositions, Examples) {
    EXPECT_EQ(nars_positions(nars(2, 2), 0), (std::vector<int>{0, 1}));
    EXPECT_EQ(nars_positions(nars(3, 2), 2), (std::vector<int>{0, 3, 6}));
    EXPECT_EQ(nars_positions(nars(2, 0), 0), (std::vector<int>{0, 1}));
    EXPECT_EQ(nars_lag_set(nars(3, 2)), range(-6, 6));
    EXPECT_EQ(nars_lag_set(nars(3, 2)).size(), 13u);
    EXPECT_EQ(nars_lag_set(nars(2, 0)), range(-1, 1));
    EXPECT_EQ(nars_lag_set(nars(4, 3)), range(-12, 12));
    EXPECT_THROW(nars_positions(nars(3, 2), 3), InvalidArgument);
}

TEST(Positions, StrictlyIncreasingAndAnchored) {
    for (int m = 1; m <= 8; ++m)
        for (int g = 0; g <= 8; ++g)
            for (Mode mode : {Mode::ARS, Mode::NARS}) {
                if (mode == Mode::NARS && m < 2) continue;
                const ArraySpec spec{mode, m, g, 0.5};
                for (int s = 0; s <= g; ++s) {
                    const auto p = positions(spec, s);
                    ASSERT_EQ(p.size(), static_cast<std::size_t>(m));
                    for (std::size_t i = 1; i < p.size(); ++i) EXPECT_LT(p[i - 1], p[i]);
                    if (mode == Mode::NARS) EXPECT_EQ(p[0], 0);
                    EXPECT_EQ(p, positions(spec, s));
                }
            }
}

// Brute-force enumeration of every position / pairwise difference, kept
// independent of the library's set builders.
TEST(LagSets, CoverageExhaustive) {
    for (int m = 1; m <= 8; ++m)
        for (int g = 0; g <= 8; ++g) {
            std::set<int> first;
            for (int s = 0; s <= g; ++s)
                for (int e = 0; e < m; ++e) first.insert(e * (g + 1) + s);
            EXPECT_EQ(std::vector<int>(first.begin(), first.end()), range(0, m * (g + 1) - 1));
            EXPECT_EQ(ars_lag_set(ars(m, g)), range(0, m * (g + 1) - 1));
            if (m < 2) continue;
            const int mg = (m - 1) * (g + 1);
            EXPECT_EQ(nars_lag_set(nars(m, g)), range(-mg, mg)) << "M=" << m << " G=" << g;
        }
}

TEST(LagLookup, Examples) {
    EXPECT_EQ(lag_lookup(nars(3, 2), 4), (LagSource{0, 2, 0}));
    EXPECT_EQ(lag_lookup(nars(3, 2), 0), (LagSource{0, 0, 0}));
    EXPECT_EQ(lag_lookup(nars(2, 2), -3), (LagSource{2, 0, 1}));
    EXPECT_THROW(lag_lookup(nars(3, 2), 7), InvalidArgument);
    EXPECT_THROW(lag_lookup(ars(3, 2), 1), InvalidArgument);
}

TEST(LagLookup, ReproducesEveryLag) {
    for (int m = 2; m <= 8; ++m)
        for (int g = 0; g <= 8; ++g) {
            const auto spec = nars(m, g);
            const int mg = coarray_extent(spec);
            EXPECT_EQ(mg, (m - 1) * (g + 1));
            for (int lag = -mg; lag <= mg; ++lag) {
                const auto src = lag_lookup(spec, lag);
                const auto pos = nars_positions(spec, src.state);
                EXPECT_EQ(pos[src.row] - pos[src.col], lag);
                if (lag > 0) EXPECT_EQ(src.col, 0);
                if (lag < 0) EXPECT_EQ(src.row, 0);
            }
        }
}

TEST(VirtualSize, Bounds) {
    EXPECT_EQ(virtual_size(ars(2, 2)), 6);
    EXPECT_EQ(max_resolvable(ars(2, 2)), 5);
    EXPECT_EQ(virtual_size(nars(3, 2)), 7);
    EXPECT_EQ(max_resolvable(nars(3, 2)), 6);
    EXPECT_EQ(virtual_size(ars(20, 1)), 40);
}
