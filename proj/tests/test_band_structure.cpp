#include <gtest/gtest.h>

#include "blochlab/band_structure.hpp"
#include "blochlab/kronig_penney.hpp"

using namespace blochlab;

TEST(Sweep, FreeBandsFollowParabolas) {
    const PotentialSpec free(TrigPotential{}, TrigPotential{});
    const auto grid = uniform_grid(9);
    const auto t = sweep(free, 0.0, 16, grid, 5);
    ASSERT_EQ(t.band_count(), 6);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        std::vector<double> want;
        for (int n = -16; n <= 16; ++n) want.push_back((n + grid[j]) * (n + grid[j]));
        std::ranges::sort(want);
        for (int n = 0; n <= 5; ++n) EXPECT_NEAR(t.bands[n][j].real(), want[n], 1e-12);
    }
}

TEST(Sweep, ValidatesGridAndBandCount) {
    const PotentialSpec free(TrigPotential{}, TrigPotential{});
    EXPECT_THROW(sweep(free, 0.0, 8, {0.0, 0.6}, 2), InvalidInputError);
    EXPECT_THROW(sweep(free, 0.0, 8, {0.2, 0.1}, 2), InvalidInputError);
    EXPECT_THROW(sweep(free, 0.0, 4, {0.0, 0.5}, 7), InvalidInputError);
    EXPECT_THROW(uniform_grid(1), InvalidInputError);
}

TEST(Sweep, ThreadCountDoesNotChangeResults) {
    const PotentialSpec spec(DeltaComb{1.0}, i_sin(1));
    SweepOptions one, four;
    four.threads = 4;
    const auto a = sweep(spec, 0.05, 24, uniform_grid(17), 6, one);
    const auto b = sweep(spec, 0.05, 24, uniform_grid(17), 6, four);
    EXPECT_EQ(a.bands, b.bands);
}

TEST(Sweep, NonSelfAdjointTrackingIsContinuous) {
    const PotentialSpec spec(DeltaComb{1.0}, i_sin(1));
    const auto t = sweep(spec, 0.003, 32, uniform_grid(33), 6);
    for (int n = 0; n < t.band_count(); ++n)
        for (std::size_t j = 1; j < t.p_grid.size(); ++j)
            EXPECT_LT(std::abs(t.bands[n][j] - t.bands[n][j - 1]), 0.2) << "band " << n << " step " << j;
}

TEST(Edges, CombEdgesApproachExactValues) {
    const PotentialSpec spec(DeltaComb{1.0}, TrigPotential{});
    const auto t = sweep(spec, 0.0, 256, uniform_grid(9), 5);
    const auto edges = band_edges(t);
    const auto exact = kp::band_edges_exact(1.0, 5);
    for (int n = 0; n <= 5; ++n) {
        EXPECT_NEAR(edges[n].alpha, exact.alpha[n], 2e-2 * std::max(1.0, exact.alpha[n])) << n;
        EXPECT_NEAR(edges[n].beta, exact.beta[n], 2e-2 * std::max(1.0, exact.beta[n])) << n;
        // Truncation only raises eigenvalues (variational).
        EXPECT_GE(edges[n].alpha, exact.alpha[n] - 1e-10);
    }
}

TEST(Edges, GoldenSectionFindsInteriorExtremum) {
    auto f = [](double x) { return (x - 0.3) * (x - 0.3) + 1.0; };
    EXPECT_NEAR(detail::golden_extremum(f, 0.0, 0.5, 1.0), 1.0, 1e-15);
    EXPECT_NEAR(detail::golden_extremum([&](double x) { return -f(x); }, 0.0, 0.5, -1.0), -1.0, 1e-15);
}

TEST(Gaps, ReportFromExactEdges) {
    std::vector<BandEdge> e{{0, 0.0, 0.2}, {1, 0.5, 0.3}, {2, 0.6, 0.9}};
    const auto r = gap_report_from_edges(e, {1.0, 1.0}, 2);
    EXPECT_NEAR(r.gaps[0].width(), 0.1, 1e-15);
    EXPECT_NEAR(r.gaps[1].width(), 0.1, 1e-15);
    EXPECT_NEAR(r.d, 0.05, 1e-15);
    EXPECT_NEAR(r.g_bar, 0.05 * 0.05 / (2 * 1.05), 1e-15);
}

TEST(Gaps, ThresholdFormula) {
    EXPECT_NEAR(reality_threshold(0.1, 1.0), 0.01 / 2.2, 1e-16);
    EXPECT_TRUE(std::isinf(reality_threshold(0.1, 0.0)));
}

TEST(Gaps, FreeOperatorHasClosedGaps) {
    const PotentialSpec free(TrigPotential{}, i_sin(1));
    const auto t0 = sweep(free, 0.0, 16, uniform_grid(17), 8);
    EXPECT_THROW(gap_analysis(t0, free.W()), GapClosedError);
    const auto c = certify_reality(free, 0.01, 16, uniform_grid(17), 8);
    EXPECT_TRUE(c.gap_closed);
    EXPECT_FALSE(c.pass);
}

TEST(Certify, PassesBelowThresholdAndFailsFarAbove) {
    const PotentialSpec spec(DeltaComb{1.0}, i_sin(1));
    const auto grid = uniform_grid(17);
    const auto t0 = sweep(spec, 0.0, 48, grid, 8);
    const auto gaps = gap_analysis(t0, spec.W());
    EXPECT_GT(gaps.d, 0.0);
    const auto ok = certify_reality(t0, 0.9 * gaps.g_bar);
    EXPECT_TRUE(ok.pass);
    EXPECT_TRUE(ok.within_guaranteed_regime);
    EXPECT_EQ(ok.conjugate_pairs, 0);
    EXPECT_LT(ok.max_displacement, ok.displacement_bound);
    EXPECT_NEAR(ok.displacement_bound, 0.5 * gaps.d, 1e-15);
    EXPECT_TRUE(ok.inclusion_ok);

    const auto bad = certify_reality(t0, 1.5);
    EXPECT_FALSE(bad.pass);
    EXPECT_FALSE(bad.within_guaranteed_regime);
    EXPECT_GT(bad.conjugate_pairs, 0);
    EXPECT_GT(bad.max_im, 0.0);
}

TEST(Certify, RejectsUncheckedSpec) {
    const auto u = PotentialSpec::unchecked(DeltaComb{1.0}, TrigPotential({{1, cplx(0, 0.5)}}));
    EXPECT_THROW(certify_reality(u, 0.001, 8, uniform_grid(5), 3), SymmetryError);
}
