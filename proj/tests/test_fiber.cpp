#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "blochlab/fiber.hpp"

using namespace blochlab;

namespace {

std::vector<double> free_levels(double p, int N) {
    std::vector<double> v;
    for (int n = -N; n <= N; ++n) v.push_back((n + p) * (n + p));
    std::ranges::sort(v);
    return v;
}

double sorted_distance(CVector a, CVector b) {
    sort_spectrum(a);
    sort_spectrum(b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace

TEST(Fiber, FreeFiberIsDiagonalAndExact) {
    const PotentialSpec free(TrigPotential{}, TrigPotential{});
    for (double p : {0.0, 0.1, 0.25, 0.5}) {
        const auto s = fiber_spectrum({free, 0.0, p, 8});
        const auto want = free_levels(p, 8);
        for (std::size_t i = 0; i < want.size(); ++i) EXPECT_NEAR(s.eigenvalues[i].real(), want[i], 1e-12);
    }
    // p = 1/4, N = 1: {1/16, 9/16, 25/16}
    const auto s = fiber_spectrum({free, 0.0, 0.25, 1});
    EXPECT_NEAR(s.eigenvalues[0].real(), 1.0 / 16, 1e-15);
    EXPECT_NEAR(s.eigenvalues[1].real(), 9.0 / 16, 1e-15);
    EXPECT_NEAR(s.eigenvalues[2].real(), 25.0 / 16, 1e-15);
}

TEST(Fiber, MatrixEntries) {
    const PotentialSpec spec(DeltaComb{1.0}, i_sin(1));
    const auto fm = assemble({spec, 0.3, 0.2, 3});
    const double c = 1.0 / (2.0 * std::numbers::pi);
    EXPECT_NEAR(fm.h(fm.index(0), fm.index(0)).real(), 0.04 + c, 1e-15);
    // H[m, n] carries w_{m-n}: row 1, column 0 sees w_1 = 1/2.
    EXPECT_NEAR(fm.h(fm.index(1), fm.index(0)).real(), c + 0.3 * 0.5, 1e-15);
    EXPECT_NEAR(fm.h(fm.index(0), fm.index(1)).real(), c - 0.3 * 0.5, 1e-15);
    EXPECT_EQ(max_abs_imag(fm.h), 0.0);
}

TEST(Fiber, RealForRealGAndPtData) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 20; ++t) {
        std::map<int, cplx> w;
        for (int n = -3; n <= 3; ++n) w[n] = u(rng);
        const PotentialSpec spec(DeltaComb{0.7}, TrigPotential(w));
        const auto fm = assemble({spec, u(rng), 0.5 * std::abs(u(rng)), 10});
        EXPECT_LE(max_abs_imag(fm.h), 1e-14);
    }
}

TEST(Fiber, SpectrumEvenInP) {
    const PotentialSpec spec(DeltaComb{1.0}, i_sin(1) + cos_mode(2, 0.4));
    for (double p : {0.07, 0.21, 0.33, 0.49}) {
        const auto a = fiber_spectrum({spec, 0.15, p, 16});
        const auto b = fiber_spectrum({spec, 0.15, -p, 16});
        EXPECT_LE(sorted_distance(a.eigenvalues, b.eigenvalues), 1e-10 * a.scale) << p;
    }
}

TEST(Fiber, ISinSpectrumEvenInG) {
    // Antisymmetric W: H(-g) is the transpose-conjugate partner of H(g).
    const PotentialSpec spec(DeltaComb{1.0}, i_sin(1));
    const auto a = fiber_spectrum({spec, 0.2, 0.3, 12});
    const auto b = fiber_spectrum({spec, -0.2, 0.3, 12});
    EXPECT_LE(sorted_distance(a.eigenvalues, b.eigenvalues), 1e-10 * a.scale);
}

TEST(Fiber, PairingClassification) {
    CVector ev{cplx(1.0, 0.0), cplx(2.0, 0.5), cplx(2.0, -0.5), cplx(3.0, 0.2)};
    double scale = 0;
    const auto tags = classify_pairs(ev, 1e-8, scale);
    EXPECT_EQ(tags[0].kind, PairKind::real);
    EXPECT_EQ(tags[1].kind, PairKind::conjugate_pair);
    EXPECT_EQ(tags[1].partner, 2);
    EXPECT_EQ(tags[2].partner, 1);
    EXPECT_EQ(tags[3].kind, PairKind::unpaired);
}

TEST(Fiber, ArcPairAtHalfIsConjugate) {
    const PotentialSpec spec(TrigPotential{}, i_sin(1));
    const auto s = fiber_spectrum({spec, 0.1, 0.5, 16});
    EXPECT_GE(s.conjugate_pairs(), 1);
    for (std::size_t i = 0; i < s.tags.size(); ++i)
        if (s.tags[i].kind == PairKind::conjugate_pair) {
            const auto j = static_cast<std::size_t>(s.tags[i].partner);
            EXPECT_LE(std::abs(s.eigenvalues[i] - std::conj(s.eigenvalues[j])), 1e-10 * s.scale);
        }
}

TEST(Fiber, InputValidation) {
    const PotentialSpec spec(TrigPotential{}, TrigPotential{});
    EXPECT_THROW(assemble({spec, 0.0, 0.6, 4}), InvalidInputError);
    EXPECT_THROW(assemble({spec, 0.0, -0.5, 4}), InvalidInputError);
    EXPECT_THROW(assemble({spec, 0.0, 0.1, 0}), InvalidInputError);
    EXPECT_THROW(assemble({spec, 0.0, 0.1, kMaxHalfBandwidth + 1}), ResourceError);
}
