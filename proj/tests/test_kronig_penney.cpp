#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "blochlab/kronig_penney.hpp"
#include "oracles.hpp"

using namespace blochlab;

TEST(KronigPenney, DiscriminantMatchesSmoothedCombOde) {
    for (double e : {0.05, 0.3, 0.9, 1.7, 3.1}) {
        const double want = oracle::smoothed_comb_discriminant(e, 1.0);
        EXPECT_NEAR(kp::discriminant(e, 1.0), want, 1e-4) << "E=" << e;
    }
    EXPECT_NEAR(kp::discriminant(-0.2, 1.0), oracle::smoothed_comb_discriminant(-0.2, 1.0), 1e-4);
}

TEST(KronigPenney, TransferMatrixHasUnitDeterminant) {
    for (double e : {-1.0, 0.0, 0.2, 2.5, 11.0}) {
        const auto m = kp::transfer_matrix(e, 1.3);
        EXPECT_NEAR(m[0][0] * m[1][1] - m[0][1] * m[1][0], 1.0, 1e-10);
        EXPECT_NEAR(0.5 * (m[0][0] + m[1][1]), kp::discriminant(e, 1.3), 1e-10);
    }
}

TEST(KronigPenney, SeriesBranchIsContinuous) {
    for (double e : {9.99e-5, 1.01e-4, -9.99e-5, -1.01e-4})
        EXPECT_NEAR(kp::discriminant(e, 1.0), kp::discriminant(e * (1 + 1e-9), 1.0), 1e-9);
}

TEST(KronigPenney, GammaZeroIsFree) {
    const auto e = kp::band_edges_exact(0.0, 6);
    for (int n = 0; n <= 6; ++n) {
        const double lo = 0.25 * n * n, hi = 0.25 * (n + 1) * (n + 1);
        EXPECT_NEAR(e.lower(n), lo, 1e-12);
        EXPECT_NEAR(e.upper(n), hi, 1e-12);
    }
    for (double w : e.gap_widths()) EXPECT_NEAR(w, 0.0, 1e-12);
}

TEST(KronigPenney, FiberRootsSolveFloquetCondition) {
    for (double p : {0.0, 0.1, 0.25, 0.4, 0.5}) {
        const auto ev = kp::fiber_eigenvalues_exact(p, 1.0, 9);
        for (double e : ev) EXPECT_NEAR(kp::discriminant(e, 1.0), std::cos(2 * std::numbers::pi * p), 1e-9);
        EXPECT_TRUE(std::ranges::is_sorted(ev));
    }
}

TEST(KronigPenney, EdgesInterlaceAndUpperEdgesAreFree) {
    const auto e = kp::band_edges_exact(1.0, 8);
    const auto chain = e.chain();
    for (std::size_t i = 0; i + 1 < chain.size(); ++i) EXPECT_LE(chain[i], chain[i + 1]);
    for (int n = 0; n <= 8; ++n) {
        EXPECT_NEAR(e.upper(n), 0.25 * (n + 1) * (n + 1), 1e-10);
        EXPECT_GT(e.upper(n) - e.lower(n), 0.0);
    }
    // Alternation: band 0 bottom at p = 0, band 1 bottom at p = 1/2, ...
    EXPECT_LT(e.alpha[0], e.beta[0]);
    EXPECT_GT(e.alpha[1], e.beta[1]);
    for (double w : e.gap_widths()) EXPECT_GT(w, 0.0);
}

TEST(KronigPenney, RejectsAttractiveComb) {
    EXPECT_THROW(kp::band_edges_exact(-0.5, 3), InvalidInputError);
    EXPECT_THROW(kp::fiber_eigenvalues_exact(0.7, 1.0, 3), InvalidInputError);
}
