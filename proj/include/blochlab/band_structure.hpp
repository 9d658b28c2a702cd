#pragma once

// Brillouin-zone sweeps, band edges, gaps and the reality certificate.
//
// Bands are sampled on p in [0, 1/2]; the fiber spectrum is even in p, so the
// other half of the zone adds nothing.

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "blochlab/eigensolver.hpp"
#include "blochlab/error.hpp"
#include "blochlab/fiber.hpp"
#include "blochlab/parallel.hpp"
#include "blochlab/potentials.hpp"

namespace blochlab {

inline constexpr int kDefaultGridPoints = 65;
inline constexpr int kDefaultBandsUsed = 8;
inline constexpr double kOverlapThreshold = 0.6;

struct SweepOptions {
    unsigned threads = 1;
    double tau_pair = kPairTolerance;
    double tau_resid = kResidualTolerance;
    double overlap_threshold = kOverlapThreshold;
};

/// `points` uniformly spaced values on [0, 1/2], endpoints included.
inline std::vector<double> uniform_grid(int points) {
    if (points < 2) throw InvalidInputError("p grid needs at least 2 points");
    std::vector<double> g(points);
    for (int j = 0; j < points; ++j) g[j] = 0.5 * j / (points - 1);
    g.back() = 0.5;
    return g;
}

struct BandTable {
    PotentialSpec spec;
    cplx g = 0.0;
    int N = 0;
    int n_max = 0;
    std::vector<double> p_grid;
    std::vector<std::vector<cplx>> bands;        // bands[n][j] = lambda_n(g; p_j)
    std::vector<std::vector<PairKind>> kinds;    // pairing tag of each tracked sample
    std::vector<double> scale;                   // per p: max(1, max|lambda|) over the full fiber spectrum
    double tau_pair = kPairTolerance;

    int band_count() const noexcept { return static_cast<int>(bands.size()); }
};

namespace detail {

struct FiberPoint {
    CVector values;                 // lowest candidates, sorted (Re, Im)
    std::vector<PairKind> kinds;
    std::vector<CVector> vectors;   // empty on the self-adjoint path
    double scale = 1.0;
};

inline FiberPoint solve_point(const PotentialSpec& spec, cplx g, double p, int N, int candidates,
                              const SweepOptions& opt) {
    const auto fm = assemble({spec, g, p, N});
    FiberPoint pt;
    CVector all;
    std::unique_ptr<DenseEigen> solver;
    if (is_real_symmetric(fm.h)) {
        const auto sym = eig_hermitian(real_part(fm.h));
        all.assign(sym.values.begin(), sym.values.end());
    } else {
        solver = std::make_unique<DenseEigen>(fm.h);
        all = solver->eigenvalues();
    }
    sort_spectrum(all);
    const auto tags = classify_pairs(all, opt.tau_pair, pt.scale);
    const int c = std::min<int>(candidates, static_cast<int>(all.size()));
    pt.values.assign(all.begin(), all.begin() + c);
    for (int i = 0; i < c; ++i) pt.kinds.push_back(tags[i].kind);
    if (solver) {
        const double bound = opt.tau_resid * solver->norm();
        for (int i = 0; i < c; ++i) {
            auto v = solver->eigenvector(pt.values[i]);
            const double res = solver->residual(v, pt.values[i]);
            if (!(res <= bound))
                throw NumericalError("eigenvector residual " + std::to_string(res) + " above certificate bound at p = " +
                                         std::to_string(p),
                                     solver->iterations());
            pt.vectors.push_back(std::move(v));
        }
    }
    return pt;
}

/// assignment[a] = candidate index at the current point continuing band a.
inline std::vector<int> match_bands(const FiberPoint& prev, const std::vector<int>& prev_assign, const FiberPoint& cur,
                                    int n_bands, double threshold, double p_lo, double p_hi) {
    const int nc = static_cast<int>(cur.values.size());
    std::vector<int> assign(n_bands, -1);
    std::vector<char> taken(nc, 0);

    if (!prev.vectors.empty() && !cur.vectors.empty()) {
        std::vector<std::vector<double>> ov(n_bands, std::vector<double>(nc));
        for (int a = 0; a < n_bands; ++a)
            for (int b = 0; b < nc; ++b)
                ov[a][b] = std::abs(dot(prev.vectors[prev_assign[a]], cur.vectors[b]));
        for (int a = 0; a < n_bands; ++a) {
            const int b = static_cast<int>(std::ranges::max_element(ov[a]) - ov[a].begin());
            if (ov[a][b] < threshold || taken[b]) continue;
            bool mutual = true;
            for (int a2 = 0; a2 < n_bands; ++a2)
                if (a2 != a && ov[a2][b] > ov[a][b]) mutual = false;
            if (!mutual) continue;
            assign[a] = b;
            taken[b] = 1;
        }
    } else if (prev.vectors.empty() && cur.vectors.empty()) {
        // Self-adjoint fibers: eigenvalues are simple and ordered, so the
        // sorted position is the band index.
        for (int a = 0; a < n_bands; ++a) assign[a] = a;
        return assign;
    }

    // Nearest-eigenvalue fallback for bands the overlaps left ambiguous.
    const double tie = 1e-12 * std::max(prev.scale, cur.scale);
    for (int a = 0; a < n_bands; ++a) {
        if (assign[a] >= 0) continue;
        const cplx from = prev.values[prev_assign[a]];
        int best = -1, second = -1;
        double d1 = std::numeric_limits<double>::infinity(), d2 = d1;
        for (int b = 0; b < nc; ++b) {
            if (taken[b]) continue;
            const double d = std::abs(cur.values[b] - from);
            if (d < d1) {
                second = best;
                d2 = d1;
                best = b;
                d1 = d;
            } else if (d < d2) {
                second = b;
                d2 = d;
            }
        }
        if (best < 0)
            throw TrackingError("band " + std::to_string(a) + " has no continuation candidate", p_lo, p_hi);
        if (second >= 0 && d2 - d1 <= tie && std::abs(cur.values[best] - cur.values[second]) > tie)
            throw TrackingError("band " + std::to_string(a) + " is ambiguous between two eigenvalues on [" +
                                    std::to_string(p_lo) + ", " + std::to_string(p_hi) + "]",
                                p_lo, p_hi);
        assign[a] = best;
        taken[best] = 1;
    }
    return assign;
}

}  // namespace detail

/// Samples and tracks bands 0..n_max of H_p(g) on p_grid.
inline BandTable sweep(const PotentialSpec& spec, cplx g, int N, const std::vector<double>& p_grid, int n_max,
                       const SweepOptions& opt = {}) {
    if (p_grid.empty()) throw InvalidInputError("sweep: empty p grid");
    for (std::size_t j = 0; j < p_grid.size(); ++j) {
        if (!(p_grid[j] >= 0.0 && p_grid[j] <= 0.5)) throw InvalidInputError("sweep: p grid must lie in [0, 1/2]");
        if (j > 0 && !(p_grid[j] > p_grid[j - 1])) throw InvalidInputError("sweep: p grid must be strictly ascending");
    }
    if (n_max < 0) throw InvalidInputError("sweep: n_max must be >= 0");
    if (n_max > 2 * N - 2)
        throw InvalidInputError("sweep: n_max = " + std::to_string(n_max) + " exceeds 2N - 2 = " +
                                std::to_string(2 * N - 2));

    const int n_bands = n_max + 1;
    const int candidates = std::min(2 * N + 1, n_bands + 2);
    std::vector<detail::FiberPoint> points(p_grid.size());
    parallel_for(p_grid.size(), opt.threads,
                 [&](std::size_t j) { points[j] = detail::solve_point(spec, g, p_grid[j], N, candidates, opt); });

    BandTable t;
    t.spec = spec;
    t.g = g;
    t.N = N;
    t.n_max = n_max;
    t.p_grid = p_grid;
    t.tau_pair = opt.tau_pair;
    t.bands.assign(n_bands, std::vector<cplx>(p_grid.size()));
    t.kinds.assign(n_bands, std::vector<PairKind>(p_grid.size()));
    t.scale.resize(p_grid.size());

    std::vector<int> assign(n_bands);
    for (int a = 0; a < n_bands; ++a) assign[a] = a;
    for (std::size_t j = 0; j < p_grid.size(); ++j) {
        if (j > 0)
            assign = detail::match_bands(points[j - 1], assign, points[j], n_bands, opt.overlap_threshold,
                                         p_grid[j - 1], p_grid[j]);
        for (int a = 0; a < n_bands; ++a) {
            t.bands[a][j] = points[j].values[assign[a]];
            t.kinds[a][j] = points[j].kinds[assign[a]];
        }
        t.scale[j] = points[j].scale;
    }
    return t;
}

/// Real part of the n-th eigenvalue (sorted by real part) of H_p(g).
inline double band_value(const PotentialSpec& spec, cplx g, int N, double p, int n) {
    const auto fm = assemble({spec, g, p, N});
    CVector ev;
    if (is_real_symmetric(fm.h)) {
        const auto sym = eig_hermitian(real_part(fm.h));
        ev.assign(sym.values.begin(), sym.values.end());
    } else {
        ev = DenseEigen(fm.h).eigenvalues();
    }
    sort_spectrum(ev);
    return ev.at(n).real();
}

struct BandEdge {
    int n = 0;
    double alpha = 0.0;
    double beta = 0.0;
    bool complex_band = false;  // edges taken on real parts

    double lower() const { return std::min(alpha, beta); }
    double upper() const { return std::max(alpha, beta); }
};

namespace detail {

/// Golden-section extremum of f on [a, b]; sign = +1 for a minimum, -1 for a maximum.
template <class F>
double golden_extremum(F&& f, double a, double b, double sign, double tol = 1e-9) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a);
    double d = a + r * (b - a);
    double fc = sign * f(c);
    double fd = sign * f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = sign * f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = sign * f(d);
        }
    }
    return sign * std::min(fc, fd);
}

}  // namespace detail

/// Band edges from a table. Even bands: alpha = min, beta = max; odd bands:
/// beta = min, alpha = max. Interior grid extrema of real bands are refined by
/// golden-section search; extrema at p = 0 or 1/2 are taken as sampled.
inline std::vector<BandEdge> band_edges(const BandTable& t, bool refine = true) {
    std::vector<BandEdge> out;
    const std::size_t np = t.p_grid.size();
    for (int n = 0; n < t.band_count(); ++n) {
        BandEdge e;
        e.n = n;
        std::size_t jmin = 0, jmax = 0;
        for (std::size_t j = 0; j < np; ++j) {
            const cplx z = t.bands[n][j];
            if (t.kinds[n][j] != PairKind::real || std::abs(z.imag()) > t.tau_pair * t.scale[j]) e.complex_band = true;
            if (z.real() < t.bands[n][jmin].real()) jmin = j;
            if (z.real() > t.bands[n][jmax].real()) jmax = j;
        }
        double lo = t.bands[n][jmin].real();
        double hi = t.bands[n][jmax].real();
        if (refine && !e.complex_band) {
            auto f = [&](double p) { return band_value(t.spec, t.g, t.N, p, n); };
            if (jmin > 0 && jmin + 1 < np)
                lo = std::min(lo, detail::golden_extremum(f, t.p_grid[jmin - 1], t.p_grid[jmin + 1], 1.0));
            if (jmax > 0 && jmax + 1 < np)
                hi = std::max(hi, detail::golden_extremum(f, t.p_grid[jmax - 1], t.p_grid[jmax + 1], -1.0));
        }
        if (n % 2 == 0) {
            e.alpha = lo;
            e.beta = hi;
        } else {
            e.beta = lo;
            e.alpha = hi;
        }
        out.push_back(e);
    }
    return out;
}

struct Gap {
    int below = 0;  // band index under the gap
    double lower = 0.0;
    double upper = 0.0;
    double width() const { return upper - lower; }
};

struct GapReport {
    std::vector<Gap> gaps;
    double d = 0.0;          // half the smallest computed gap width
    double g_bar = 0.0;      // d^2 / (2 (1 + d) ||W||)
    double w_norm = 0.0;     // value of ||W||_inf used (l1 upper bound)
    double w_norm_lower = 0.0;
    int n_bands_used = 0;
    bool finite_band_estimate = true;  // d is a minimum over finitely many gaps, not the infimum
};

/// Reality threshold for a given gap half-width and sup norm.
inline double reality_threshold(double d, double w_norm) {
    if (w_norm == 0.0) return std::numeric_limits<double>::infinity();
    return d * d / (2.0 * (1.0 + d) * w_norm);
}

/// Gaps between consecutive bands among the first n_gaps + 1 edges.
inline GapReport gap_report_from_edges(const std::vector<BandEdge>& edges, const SupNormBound& w_norm, int n_gaps) {
    if (n_gaps < 1) throw InvalidInputError("gap analysis needs at least one gap");
    if (static_cast<int>(edges.size()) < n_gaps + 1)
        throw InvalidInputError("gap analysis: " + std::to_string(n_gaps) + " gaps need " + std::to_string(n_gaps + 1) +
                                " bands, have " + std::to_string(edges.size()));
    GapReport r;
    r.n_bands_used = n_gaps;
    r.w_norm = w_norm.upper;
    r.w_norm_lower = w_norm.lower;
    double min_width = std::numeric_limits<double>::infinity();
    for (int n = 0; n < n_gaps; ++n) {
        Gap g{n, edges[n].upper(), edges[n + 1].lower()};
        const double closed_tol = 1e-9 * std::max(1.0, std::abs(g.upper));
        if (g.width() <= closed_tol)
            throw GapClosedError("gap " + std::to_string(n) + " above band " + std::to_string(n) +
                                     " is closed (width " + std::to_string(g.width()) +
                                     "): all gaps of the unperturbed operator must be open",
                                 n, g.width());
        min_width = std::min(min_width, g.width());
        r.gaps.push_back(g);
    }
    r.d = 0.5 * min_width;
    r.g_bar = reality_threshold(r.d, r.w_norm);
    return r;
}

/// Gap analysis of an unperturbed (g = 0) table.
inline GapReport gap_analysis(const BandTable& t0, const TrigPotential& w, int n_bands_used = kDefaultBandsUsed) {
    if (t0.g != cplx(0.0)) throw InvalidInputError("gap_analysis expects a g = 0 table");
    const int n_gaps = std::min(n_bands_used, t0.band_count() - 1);
    return gap_report_from_edges(band_edges(t0), sup_norm_bound(w), n_gaps);
}

struct RealityCertificate {
    bool pass = false;
    double max_im = 0.0;
    int worst_n = 0;
    double worst_p = 0.0;
    int conjugate_pairs = 0;       // tracked samples tagged as members of a conjugate pair
    double max_displacement = 0.0; // max_{n,p} |lambda_n(g,p) - lambda_n(0,p)|; NaN when a gap is closed
    double displacement_bound = 0.0;  // d / 2
    bool displacement_ok = false;
    bool inclusion_ok = false;     // B_n(g) inside the unperturbed band widened by d/2
    bool gap_closed = false;
    bool within_guaranteed_regime = false;  // |g| < g_bar
    GapReport gaps;
};

struct CertifyOptions {
    SweepOptions sweep;
    int n_bands_used = kDefaultBandsUsed;
    double tau_real = kPairTolerance;
};

/// Same as below with the g = 0 sweep supplied by the caller.
inline RealityCertificate certify_reality(const BandTable& t0, double g, const CertifyOptions& opt = {}) {
    const auto& spec = t0.spec;
    const auto& p_grid = t0.p_grid;
    const int N = t0.N;
    const int n_max = t0.n_max;
    spec.require_checked("certify_reality");
    if (t0.g != cplx(0.0)) throw InvalidInputError("certify_reality expects a g = 0 reference table");
    RealityCertificate c;
    try {
        c.gaps = gap_analysis(t0, spec.W(), opt.n_bands_used);
    } catch (const GapClosedError&) {
        c.gap_closed = true;
        c.gaps = {};
        c.gaps.w_norm = sup_norm_bound(spec.W()).upper;
    }
    c.within_guaranteed_regime = !c.gap_closed && std::abs(g) < c.gaps.g_bar;
    c.displacement_bound = 0.5 * c.gaps.d;

    const auto tg = g == 0.0 ? t0 : sweep(spec, g, N, p_grid, n_max, opt.sweep);

    bool real_ok = true;
    for (int n = 0; n < tg.band_count(); ++n)
        for (std::size_t j = 0; j < p_grid.size(); ++j) {
            const cplx z = tg.bands[n][j];
            if (tg.kinds[n][j] == PairKind::conjugate_pair) ++c.conjugate_pairs;
            if (tg.kinds[n][j] != PairKind::real) real_ok = false;
            if (std::abs(z.imag()) > c.max_im) {
                c.max_im = std::abs(z.imag());
                c.worst_n = n;
                c.worst_p = p_grid[j];
            }
            if (std::abs(z.imag()) > opt.tau_real * tg.scale[j]) real_ok = false;
            c.max_displacement = std::max(c.max_displacement, std::abs(z - t0.bands[n][j]));
        }

    c.displacement_ok = !c.gap_closed && c.max_displacement < c.displacement_bound;
    if (c.gap_closed) {
        // Touching bands make the band labels of the two tables incomparable.
        c.max_displacement = std::numeric_limits<double>::quiet_NaN();
        c.displacement_bound = std::numeric_limits<double>::quiet_NaN();
    }
    if (!c.gap_closed) {
        const auto e0 = band_edges(t0, false);
        const auto eg = band_edges(tg, false);
        c.inclusion_ok = true;
        for (std::size_t n = 0; n < e0.size(); ++n)
            if (eg[n].lower() < e0[n].lower() - c.displacement_bound ||
                eg[n].upper() > e0[n].upper() + c.displacement_bound)
                c.inclusion_ok = false;
    }
    c.pass = real_ok && c.conjugate_pairs == 0 && c.displacement_ok;
    return c;
}

/// Sweeps at g = 0 and at g and checks that every tracked eigenvalue is real
/// and stays within d/2 of its unperturbed value.
inline RealityCertificate certify_reality(const PotentialSpec& spec, double g, int N, const std::vector<double>& p_grid,
                                          int n_max, const CertifyOptions& opt = {}) {
    spec.require_checked("certify_reality");
    return certify_reality(sweep(spec, 0.0, N, p_grid, n_max, opt.sweep), g, opt);
}

}  // namespace blochlab
