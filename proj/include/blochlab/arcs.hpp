#pragma once

// Complex arcs born at the p = 1/2 crossings of the free fiber.
//
// At p = 1/2 the plane waves u_k and u_{-k-1} share the energy (k + 1/2)^2.
// Restricted to that pair, W acts as T = [[0, w_{2k+1}], [w_{-2k-1}, 0]], so the
// crossing splits to first order into (k + 1/2)^2 + g mu_pm with
// mu_pm = pm sqrt(w_{2k+1} w_{-2k-1}). A negative product makes mu purely
// imaginary, and the pair stays complex on a short interval [1/2 - eta, 1/2].

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "blochlab/error.hpp"
#include "blochlab/fiber.hpp"
#include "blochlab/parallel.hpp"
#include "blochlab/potentials.hpp"

namespace blochlab {

inline constexpr int kArcBisectionSteps = 48;

struct DegenerateBlock {
    int k = 0;
    std::array<std::array<cplx, 2>, 2> T{};
    cplx mu_plus;
    cplx mu_minus;
    double product = 0.0;  // w_{2k+1} w_{-2k-1}, real for PT data

    bool predicts_arc() const noexcept { return product < 0.0; }
};

inline DegenerateBlock degenerate_block(const TrigPotential& w, int k) {
    if (k < 0) throw InvalidInputError("degenerate_block: k must be >= 0");
    if (!w.pt_symmetric()) throw SymmetryError("degenerate_block: W is not PT-symmetric");
    DegenerateBlock b;
    b.k = k;
    const cplx up = w.coeff(2 * k + 1);
    const cplx dn = w.coeff(-2 * k - 1);
    b.T = {{{cplx{}, up}, {dn, cplx{}}}};
    b.product = (up * dn).real();
    const cplx root = b.product < 0.0 ? cplx{0.0, std::sqrt(-b.product)} : cplx{std::sqrt(b.product), 0.0};
    b.mu_plus = root;
    b.mu_minus = -root;
    return b;
}

inline double crossing_energy(int k) { return (k + 0.5) * (k + 0.5); }

/// Leading-order pair (k + 1/2)^2 pm i g sqrt(-w_{2k+1} w_{-2k-1}); plus first.
inline std::pair<cplx, cplx> arc_prediction(const TrigPotential& w, int k, double g) {
    const auto b = degenerate_block(w, k);
    if (!b.predicts_arc())
        throw ConditionNotMetError("arc_prediction: w_{2k+1} w_{-2k-1} = " + std::to_string(b.product) +
                                   " is not negative for k = " + std::to_string(k));
    const double e = crossing_energy(k);
    return {e + g * b.mu_plus, e + g * b.mu_minus};
}

struct ArcPoint {
    double p = 0.0;
    cplx plus;   // Im >= 0 member, or the upper of two real levels
    cplx minus;
    bool complex_pair = false;
    double conj_error = 0.0;  // |minus - conj(plus)|, meaningful on the arc
    double scale = 1.0;
};

struct ArcReport {
    int k = 0;
    double g = 0.0;
    int N = 0;
    std::vector<ArcPoint> samples;  // window points, ascending p
    ArcPoint at_half;
    std::pair<cplx, cplx> predicted;
    std::optional<double> eta;       // refined; empty when no arc is seen
    std::optional<double> eta_grid;  // from the window alone
    double max_abs_im = 0.0;
    double max_conj_error = 0.0;
    double re_offset = 0.0;         // Re lambda^+(g, 1/2) - (k + 1/2)^2
    double prediction_error = 0.0;  // |lambda^+(g, 1/2) - predicted.first|, O(g^2)
    bool empirical = true;          // q != 0: no analytic guarantee for the arcs
};

namespace detail {

/// The two levels continuing the k-th crossing at quasimomentum p.
inline ArcPoint arc_point(const PotentialSpec& spec, double g, int k, double p, int N, double tau_pair) {
    const auto s = spectrum(assemble({spec, g, p, N}), tau_pair);
    const double target = crossing_energy(k);
    ArcPoint a;
    a.p = p;
    a.scale = s.scale;

    int best = -1;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) {
        if (s.tags[i].kind != PairKind::conjugate_pair || s.eigenvalues[i].imag() <= 0.0) continue;
        const double d = std::abs(s.eigenvalues[i].real() - target);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(i);
        }
    }
    if (best >= 0) {
        a.complex_pair = true;
        a.plus = s.eigenvalues[best];
        a.minus = s.eigenvalues[s.tags[best].partner];
        a.conj_error = std::abs(a.minus - std::conj(a.plus));
        return a;
    }

    // No pair: report the two levels nearest the crossing energy.
    std::vector<cplx> ev = s.eigenvalues;
    std::ranges::sort(ev, [&](cplx x, cplx y) { return std::abs(x - target) < std::abs(y - target); });
    if (ev.size() >= 2) {
        a.plus = ev[0].real() >= ev[1].real() ? ev[0] : ev[1];
        a.minus = ev[0].real() >= ev[1].real() ? ev[1] : ev[0];
    }
    return a;
}

}  // namespace detail

inline std::vector<double> arc_window(int points, double width = 0.2) {
    if (points < 2) throw InvalidInputError("arc_window: need at least 2 points");
    std::vector<double> out(points);
    for (int j = 0; j < points; ++j) out[j] = 0.5 - width + width * j / (points - 1);
    out.back() = 0.5;
    return out;
}

inline ArcReport trace_arcs(const PotentialSpec& spec, int k, double g, int N, const std::vector<double>& p_window,
                            unsigned threads = 1, double tau_pair = kPairTolerance) {
    ArcReport r;
    r.k = k;
    r.g = g;
    r.N = N;
    r.predicted = arc_prediction(spec.W(), k, g);
    r.empirical = !spec.q_is_zero();
    if (N < 2 * k + 2) throw InvalidInputError("trace_arcs: N too small to hold the crossing at k");
    for (double p : p_window)
        if (!(p > 0.25 && p <= 0.5)) throw InvalidInputError("trace_arcs: window must lie in (1/4, 1/2]");
    if (!std::ranges::is_sorted(p_window)) throw InvalidInputError("trace_arcs: window must be ascending");

    r.samples.resize(p_window.size());
    parallel_for(p_window.size(), threads,
                 [&](std::size_t j) { r.samples[j] = detail::arc_point(spec, g, k, p_window[j], N, tau_pair); });
    r.at_half = (!p_window.empty() && p_window.back() == 0.5) ? r.samples.back()
                                                              : detail::arc_point(spec, g, k, 0.5, N, tau_pair);

    for (const auto& a : r.samples) {
        if (!a.complex_pair) continue;
        r.max_abs_im = std::max(r.max_abs_im, std::abs(a.plus.imag()));
        r.max_conj_error = std::max(r.max_conj_error, a.conj_error / a.scale);
    }
    r.re_offset = r.at_half.plus.real() - crossing_energy(k);
    r.prediction_error = std::abs(r.at_half.plus - r.predicted.first);

    if (g == 0.0) return r;  // no arc; eta stays undefined
    if (!r.at_half.complex_pair)
        throw ContradictionError("trace_arcs: no conjugate pair near (k+1/2)^2 at p = 1/2 for g = " +
                                 std::to_string(g) + "; g may be below solver resolution");

    // Walk down from 1/2 while the pair stays complex.
    std::size_t j = r.samples.size();
    while (j > 0 && r.samples[j - 1].complex_pair) --j;
    double inside = 0.5;
    if (j < r.samples.size()) inside = r.samples[j].p;
    r.eta_grid = 0.5 - inside;
    if (j == 0) {
        r.eta = r.eta_grid;  // arc reaches past the window; grid value is a lower bound
        return r;
    }
    double outside = r.samples[j - 1].p;
    for (int it = 0; it < kArcBisectionSteps && inside - outside > 1e-13; ++it) {
        const double mid = 0.5 * (inside + outside);
        if (detail::arc_point(spec, g, k, mid, N, tau_pair).complex_pair)
            inside = mid;
        else
            outside = mid;
    }
    r.eta = 0.5 - inside;
    return r;
}

struct SlopeReport {
    int k = 0;
    std::vector<double> g_samples;
    std::vector<double> im_plus;  // Im lambda^+(g, 1/2)
    double measured = 0.0;
    double predicted = 0.0;  // sqrt(-w_{2k+1} w_{-2k-1})
    double error() const { return std::abs(measured - predicted); }
};

/// Secant slope of Im lambda^+(g, 1/2) through the smallest and largest samples.
/// A single sample gives Im / g.
inline SlopeReport slope_check(const PotentialSpec& spec, int k, const std::vector<double>& g_samples, int N = 32,
                               double tau_pair = kPairTolerance) {
    if (g_samples.empty()) throw InvalidInputError("slope_check: need at least one g sample");
    const auto b = degenerate_block(spec.W(), k);
    SlopeReport s;
    s.k = k;
    s.g_samples = g_samples;
    std::ranges::sort(s.g_samples);
    s.predicted = b.product < 0.0 ? std::sqrt(-b.product) : 0.0;
    for (double g : s.g_samples) {
        const auto a = detail::arc_point(spec, g, k, 0.5, N, tau_pair);
        s.im_plus.push_back(a.complex_pair ? a.plus.imag() : 0.0);
    }
    if (s.g_samples.size() == 1) {
        s.measured = s.g_samples[0] != 0.0 ? s.im_plus[0] / s.g_samples[0] : 0.0;
    } else {
        const double dg = s.g_samples.back() - s.g_samples.front();
        s.measured = dg != 0.0 ? (s.im_plus.back() - s.im_plus.front()) / dg : 0.0;
    }
    return s;
}

}  // namespace blochlab
