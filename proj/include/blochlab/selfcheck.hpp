#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "blochlab/arcs.hpp"
#include "blochlab/eigensolver.hpp"
#include "blochlab/fiber.hpp"
#include "blochlab/kronig_penney.hpp"
#include "blochlab/potentials.hpp"

namespace blochlab {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double limit = 0.0;
};

namespace detail {

inline CheckResult bounded(std::string name, double measured, double limit) {
    return {std::move(name), measured <= limit, measured, limit};
}

inline double sorted_distance(CVector a, CVector b) {
    sort_spectrum(a);
    sort_spectrum(b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

}  // namespace detail

/// Quick invariant suite used by the `selfcheck` subcommand. Runs in well
/// under a second.
inline std::vector<CheckResult> run_selfcheck() {
    using detail::bounded;
    std::vector<CheckResult> out;
    std::mt19937_64 rng(0x5eed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);

    {
        double err = 0.0;
        const PotentialSpec free(TrigPotential{}, TrigPotential{});
        for (double p : {0.0, 0.125, 0.3, 0.5}) {
            const auto s = fiber_spectrum({free, 0.0, p, 16});
            std::vector<double> want;
            for (int n = -16; n <= 16; ++n) want.push_back((n + p) * (n + p));
            std::ranges::sort(want);
            for (std::size_t i = 0; i < want.size(); ++i) err = std::max(err, std::abs(s.eigenvalues[i] - want[i]));
        }
        out.push_back(bounded("free_fiber_exact", err, 1e-10));
    }

    const PotentialSpec pt(DeltaComb{1.0}, i_sin(1) + cos_mode(2, 0.3));
    {
        const auto fm = assemble({pt, 0.37, 0.2, 12});
        out.push_back(bounded("fiber_real_for_real_g", max_abs_imag(fm.h), 1e-14));
    }
    {
        const auto a = fiber_spectrum({pt, 0.2, 0.3, 12});
        const auto b = fiber_spectrum({pt, 0.2, -0.3, 12});
        out.push_back(bounded("spectrum_even_in_p", detail::sorted_distance(a.eigenvalues, b.eigenvalues) / a.scale,
                              1e-10));
    }
    {
        double err = 0.0;
        for (std::size_t dim = 1; dim <= 6; ++dim) {
            CMatrix m(dim, dim);
            cplx tr{};
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t j = 0; j < dim; ++j) m(i, j) = {unif(rng), unif(rng)};
            for (std::size_t i = 0; i < dim; ++i) tr += m(i, i);
            const DenseEigen eig(m);
            cplx sum{};
            for (const auto& z : eig.eigenvalues()) sum += z;
            err = std::max(err, std::abs(sum - tr) / std::max(1.0, frobenius_norm(m)));
        }
        out.push_back(bounded("eigen_trace_identity", err, 1e-12));
    }
    {
        RMatrix r(7, 7);
        for (std::size_t i = 0; i < 7; ++i)
            for (std::size_t j = 0; j < 7; ++j) r(i, j) = unif(rng);
        const auto ev = DenseEigen(to_complex(r)).eigenvalues();
        CVector conj_ev;
        for (const auto& z : ev) conj_ev.push_back(std::conj(z));
        out.push_back(bounded("real_matrix_conjugation", detail::sorted_distance(ev, conj_ev), 1e-10));
    }
    {
        const auto e = kp::band_edges_exact(1.0, 8);
        const auto chain = e.chain();
        double worst = 0.0;  // largest downward step; interlacing means none
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) worst = std::max(worst, chain[i] - chain[i + 1]);
        out.push_back(bounded("kp_edge_interlacing", worst, 0.0));
    }
    {
        const PotentialSpec k0(TrigPotential{}, i_sin(1));
        const auto s = slope_check(k0, 0, {1e-3, 2e-3}, 16);
        out.push_back(bounded("arc_slope_k0", s.error(), 1e-3));
    }
    {
        // PT samples (conj(f(-x)) = f(x)) give real coefficients.
        double worst = 0.0;
        for (int trial = 0; trial < 10; ++trial) {
            std::map<int, cplx> c;
            for (int n = -4; n <= 4; ++n) c[n] = unif(rng);
            const TrigPotential f(c);
            const auto samples = sample_on_grid([&](double x) { return f.evaluate(x); }, 16);
            const auto back = fourier_from_samples(samples, 4);
            for (int n = -4; n <= 4; ++n) worst = std::max(worst, std::abs(back.coeff(n).imag()));
        }
        out.push_back(bounded("pt_samples_real_coefficients", worst, 1e-12));
    }
    return out;
}

}  // namespace blochlab
