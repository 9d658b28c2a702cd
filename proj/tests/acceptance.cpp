// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "blochlab/blochlab.hpp"
#include "oracles.hpp"

using namespace blochlab;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;

void criterion(int id, const char* name, double time_limit, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < time_limit;
    const bool ok = o.pass && in_time;
    if (!ok) ++failures;
    std::printf("[%s] criterion %d: %s | %s | %.2fs (limit %.0fs%s)\n", ok ? "PASS" : "FAIL", id, name,
                o.detail.c_str(), secs, time_limit, in_time ? "" : ", exceeded");
    std::fflush(stdout);
}

double sorted_distance(CVector a, CVector b) {
    sort_spectrum(a);
    sort_spectrum(b);
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

Outcome free_fiber() {
    const PotentialSpec free(TrigPotential{}, TrigPotential{});
    const int N = 64;
    double err = 0.0;
    for (double p : uniform_grid(65)) {
        const auto s = fiber_spectrum({free, 0.0, p, N});
        std::vector<double> want;
        for (int n = -N; n <= N; ++n) want.push_back((n + p) * (n + p));
        std::ranges::sort(want);
        for (std::size_t i = 0; i < want.size(); ++i) err = std::max(err, std::abs(s.eigenvalues[i] - want[i]));
    }
    return {err <= 1e-10, fmt("max |lambda - (n+p)^2| = %.3e (<= 1e-10)", err)};
}

Outcome oracle_equivalence() {
    const PotentialSpec comb(DeltaComb{1.0}, TrigPotential{});
    const auto exact = kp::band_edges_exact(1.0, 7);
    const std::vector<double> grid{0.0, 0.25, 0.5};
    std::vector<double> total;
    double worst_rel = 0.0;
    for (int N : {256, 512, 1024}) {
        const auto edges = band_edges(sweep(comb, 0.0, N, grid, 7));
        double sum = 0.0, rel = 0.0;
        for (int n = 0; n < 8; ++n) {
            const double da = std::abs(edges[n].alpha - exact.alpha[n]);
            const double db = std::abs(edges[n].beta - exact.beta[n]);
            sum += da + db;
            rel = std::max({rel, da / std::max(1e-300, std::abs(exact.alpha[n])),
                            db / std::max(1e-300, std::abs(exact.beta[n]))});
        }
        total.push_back(sum);
        worst_rel = rel;  // keeps the N = 1024 value
    }
    const double order = std::log2(total[1] / total[2]);
    return {worst_rel <= 1e-2 && order >= 0.8,
            fmt("max rel edge error at N=1024 = %.3e (<= 1e-2), summed errors %.3e/%.3e/%.3e, order = %.3f (>= 0.8)",
                worst_rel, total[0], total[1], total[2], order)};
}

Outcome reality_instantiation() {
    const PotentialSpec spec(DeltaComb{1.0}, i_sin(1));
    const auto grid = uniform_grid(65);
    const auto t0 = sweep(spec, 0.0, 256, grid, 8);
    const auto gaps = gap_analysis(t0, spec.W(), 8);
    // Independent evaluation of the threshold from the reported d and ||W|| = 1.
    const double g_bar = gaps.d * gaps.d / (2.0 * (1.0 + gaps.d) * 1.0);
    const auto c = certify_reality(t0, 0.9 * g_bar);
    const bool ok = c.conjugate_pairs == 0 && c.max_displacement < 0.5 * gaps.d &&
                    std::abs(gaps.g_bar - g_bar) <= 1e-15 && gaps.w_norm == 1.0;
    return {ok, fmt("d = %.6f, g_bar = %.6e, g = %.6e, conjugate pairs = %d, max displacement = %.3e (< d/2 = %.3e)",
                    gaps.d, g_bar, 0.9 * g_bar, c.conjugate_pairs, c.max_displacement, 0.5 * gaps.d)};
}

Outcome arc_slope() {
    const auto s = slope_check(PotentialSpec(TrigPotential{}, i_sin(1)), 0, {1e-3, 2e-3}, 32);
    return {std::abs(s.measured - 0.5) <= 1e-3, fmt("slope = %.9f (0.5 +- 1e-3)", s.measured)};
}

Outcome arc_pairing() {
    const PotentialSpec spec(TrigPotential{}, i_sin(1));
    const auto window = arc_window(81);
    const auto r = trace_arcs(spec, 0, 0.1, 32, window);
    const auto h = trace_arcs(spec, 0, 0.05, 32, window);
    double conj = 0.0;
    int arc_points = 0;
    for (const auto& a : r.samples)
        if (a.complex_pair) {
            ++arc_points;
            conj = std::max(conj, std::abs(a.minus - std::conj(a.plus)) / a.scale);
        }
    const double shift_full = r.at_half.plus.real() - 0.25;
    const double shift_half = h.at_half.plus.real() - 0.25;
    const double ratio = std::abs(shift_full) / std::abs(shift_half);
    const bool ok = r.eta && *r.eta > 0.0 && arc_points > 0 && conj <= 1e-10 && ratio >= 3.5;
    return {ok, fmt("eta = %.5f, arc samples = %d, max |l- - conj(l+)|/scale = %.2e, Re shift %.4e -> %.4e, ratio %.3f "
                    "(>= 3.5)",
                    r.eta.value_or(0.0), arc_points, conj, shift_full, shift_half, ratio)};
}

Outcome rs_series() {
    const int N = 128;
    const double p = 0.25;
    const PotentialSpec spec(DeltaComb{1.0}, i_sin(1));
    const auto r = rs_coefficients(spec, 0, p, N, 5);
    const double l0 = r.coeffs[0].real();
    auto f = [&](double g) { return nearest_fiber_eigenvalue(spec, g, p, N, l0).real(); };
    const double fd1 = oracle::fd_first(f, 1e-4);
    const double fd2 = 0.5 * oracle::fd_second(f, 2e-4);
    const double e1 = std::abs(r.coeffs[1].real() - fd1);
    const double e2 = std::abs(r.coeffs[2].real() - fd2);

    const PotentialSpec free(TrigPotential{}, i_sin(1));
    const auto rf = rs_coefficients(free, 0, p, N, 2);
    auto ff = [&](double g) { return nearest_fiber_eigenvalue(free, g, p, N, 1.0 / 16).real(); };
    const double fd_free = 0.5 * oracle::fd_second(ff, 2e-4);
    const double ef = std::abs(rf.coeffs[2].real() - fd_free);
    const double ef_exact = std::abs(fd_free - 2.0 / 3.0);

    const auto gaps = gap_analysis(sweep(spec, 0.0, N, uniform_grid(65), 8), spec.W(), 8);
    const auto maj = check_majorization(r, gaps.w_norm, gaps.d);

    const bool ok = e1 <= 1e-7 && e2 <= 1e-5 && ef <= 1e-6 && ef_exact <= 1e-6 && maj.all();
    return {ok, fmt("|l1 - FD| = %.2e (<= 1e-7), |l2 - FD| = %.2e (<= 1e-5), free l2 = %.9f vs FD %.9f (<= 1e-6), "
                    "majorization s<=5: %s",
                    e1, e2, rf.coeffs[2].real(), fd_free, maj.all() ? "holds" : "violated")};
}

Outcome pt_equivalence() {
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> bw(1, 10);
    double worst_imag = 0.0;
    int pt_ok = 0, flagged = 0;
    for (int t = 0; t < 100; ++t) {
        const int m = bw(rng);
        std::vector<double> c(2 * m + 1);
        for (auto& v : c) v = u(rng);
        auto f = [&](double x) {
            cplx s{};
            for (int n = -m; n <= m; ++n) s += c[n + m] * std::polar(1.0, n * x);
            return s;
        };
        const auto w = fourier_from_samples(sample_on_grid(f, 2 * m + 2), m);
        double im = 0.0;
        for (int n = -m; n <= m; ++n) im = std::max(im, std::abs(w.coeff(n).imag()));
        worst_imag = std::max(worst_imag, im);
        if (im <= 1e-12 && check_pt(w).pt) ++pt_ok;
    }
    for (int t = 0; t < 100; ++t) {
        const int m = bw(rng);
        std::vector<cplx> c(2 * m + 1);
        for (auto& v : c) v = cplx(u(rng), 0.0);
        std::uniform_int_distribution<int> pick(0, 2 * m);
        c[pick(rng)] += cplx(0.0, u(rng) >= 0 ? 0.5 : -0.5);
        auto f = [&](double x) {
            cplx s{};
            for (int n = -m; n <= m; ++n) s += c[n + m] * std::polar(1.0, n * x);
            return s;
        };
        if (!check_pt(fourier_from_samples(sample_on_grid(f, 2 * m + 2), m)).pt) ++flagged;
    }
    return {pt_ok == 100 && flagged == 100,
            fmt("PT samples with real coefficients: %d/100 (max |Im| = %.2e), non-PT flagged: %d/100", pt_ok,
                worst_imag, flagged)};
}

Outcome structural() {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);

    double reality = 0.0, evenness = 0.0;
    for (int t = 0; t < 10; ++t) {
        std::map<int, cplx> wc;
        for (int n = -3; n <= 3; ++n) wc[n] = u(rng);
        const PotentialSpec spec(DeltaComb{1.0}, TrigPotential(wc));
        const double g = 0.3 * u(rng);
        const double p = 0.45 * std::abs(u(rng)) + 0.01;
        reality = std::max(reality, max_abs_imag(assemble({spec, g, p, 16}).h));
        const auto a = fiber_spectrum({spec, g, p, 16});
        const auto b = fiber_spectrum({spec, g, -p, 16});
        evenness = std::max(evenness, sorted_distance(a.eigenvalues, b.eigenvalues) / a.scale);
    }

    double trace_err = 0.0, poly_err = 0.0;
    for (std::size_t n = 1; n <= 6; ++n)
        for (int t = 0; t < 5; ++t) {
            CMatrix m(n, n);
            oracle::Dense d(n, std::vector<cplx>(n));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) d[i][j] = m(i, j) = cplx(u(rng), t % 2 ? 0.0 : u(rng));
            const auto ev = eig_dense(m).eigenvalues;
            cplx tr{}, sum{};
            for (std::size_t i = 0; i < n; ++i) tr += m(i, i);
            for (auto z : ev) sum += z;
            const double scale = std::max(1.0, frobenius_norm(m));
            trace_err = std::max(trace_err, std::abs(sum - tr) / scale);
            poly_err = std::max(poly_err, oracle::multiset_distance(ev, oracle::poly_roots(oracle::char_poly(d))) / scale);
        }

    const auto chain_exact = kp::band_edges_exact(1.0, 8).chain();
    const auto pw = band_edges(sweep(PotentialSpec(DeltaComb{1.0}, TrigPotential{}), 0.0, 128, {0.0, 0.25, 0.5}, 8));
    bool interlace = true;
    for (std::size_t i = 0; i + 1 < chain_exact.size(); ++i) interlace = interlace && chain_exact[i] <= chain_exact[i + 1];
    for (std::size_t n = 0; n + 1 < pw.size(); ++n)
        interlace = interlace && pw[n].lower() <= pw[n].upper() && pw[n].upper() <= pw[n + 1].lower();

    const bool ok = reality <= 1e-14 && evenness <= 1e-10 && trace_err <= 1e-12 && poly_err <= 1e-8 && interlace;
    return {ok, fmt("fiber Im = %.1e (<= 1e-14), p-evenness = %.1e (<= 1e-10), trace = %.1e, char-poly = %.1e, "
                    "interlacing %s",
                    reality, evenness, trace_err, poly_err, interlace ? "ok" : "violated")};
}

}  // namespace

int main() {
    criterion(1, "free-fiber exactness", 1.0, free_fiber);
    criterion(2, "plane-wave vs Kronig-Penney edges and convergence order", 120.0, oracle_equivalence);
    criterion(3, "reality below threshold for delta comb + i sin x", 300.0, reality_instantiation);
    criterion(4, "complex-arc slope at p = 1/2", 10.0, arc_slope);
    criterion(5, "arc conjugate pairing, extent and quadratic real shift", 30.0, arc_pairing);
    criterion(6, "perturbation coefficients vs finite differences and majorization", 30.0, rs_series);
    criterion(7, "PT symmetry <=> real Fourier coefficients (randomized)", 5.0, pt_equivalence);
    criterion(8, "structural invariants", 60.0, structural);
    std::printf("%d of 8 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
