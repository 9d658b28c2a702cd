#pragma once

// Rayleigh-Schroedinger series lambda_n(g; p) = sum_s lambda_n^s(0; p) g^s for a
// simple eigenvalue of the self-adjoint g = 0 fiber perturbed by g W.
//
// Work in the eigenbasis of H0 (orthonormal, real). With intermediate
// normalization <e_n, psi^s> = 0 for s >= 1:
//
//   lambda^s   = (V psi^{s-1})_n
//   psi^s_m    = [ (V psi^{s-1})_m - sum_{j=1}^{s-1} lambda^j psi^{s-j}_m ] / (lambda_n - lambda_m),  m != n

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "blochlab/eigensolver.hpp"
#include "blochlab/error.hpp"
#include "blochlab/fiber.hpp"
#include "blochlab/potentials.hpp"

namespace blochlab {

inline constexpr int kMaxSeriesOrder = 10;

struct RSSeries {
    int n = 0;
    double p = 0.0;
    int order = 0;
    CVector coeffs;  // coeffs[s] = lambda_n^s(0; p), s = 0..order
    double radius_lower = std::numeric_limits<double>::quiet_NaN();  // g_bar when known
    double level_spacing = 0.0;  // min |lambda_k - lambda_{k+1}| over the truncated g = 0 fiber

    cplx partial_sum(cplx g, int upto = -1) const {
        const int top = upto < 0 ? order : std::min(upto, order);
        cplx s{}, gs{1.0};
        for (int k = 0; k <= top; ++k) {
            s += coeffs[k] * gs;
            gs *= g;
        }
        return s;
    }
};

inline RSSeries rs_coefficients(const PotentialSpec& spec, int n, double p, int N, int order,
                                std::optional<double> g_bar = std::nullopt) {
    if (order < 0 || order > kMaxSeriesOrder)
        throw InvalidInputError("rs_coefficients: order must be in [0, " + std::to_string(kMaxSeriesOrder) + "]");
    const int dim = 2 * N + 1;
    if (n < 0 || n >= dim) throw InvalidInputError("rs_coefficients: band index out of range");

    const auto h0 = assemble({spec, 0.0, p, N});
    if (!is_real_symmetric(h0.h)) throw InvalidInputError("rs_coefficients: unperturbed fiber is not self-adjoint");
    const auto eig = eig_hermitian(real_part(h0.h), true);
    const auto& lam = eig.values;
    const auto& u = eig.vectors;

    double scale = 1.0;
    for (double l : lam) scale = std::max(scale, std::abs(l));
    const double tol = 10.0 * kDeflationTolerance * scale;
    double isolation = std::numeric_limits<double>::infinity();
    if (n > 0) isolation = std::min(isolation, lam[n] - lam[n - 1]);
    if (n + 1 < dim) isolation = std::min(isolation, lam[n + 1] - lam[n]);
    if (!(isolation > tol))
        throw DegeneracyError("unperturbed eigenvalue " + std::to_string(n) + " at p = " + std::to_string(p) +
                              " is degenerate (spacing " + std::to_string(isolation) +
                              "); use the degenerate-block analysis in the arcs module");

    RSSeries r;
    r.n = n;
    r.p = p;
    r.order = order;
    if (g_bar) r.radius_lower = *g_bar;
    r.level_spacing = std::numeric_limits<double>::infinity();
    for (int k = 0; k + 1 < dim; ++k) r.level_spacing = std::min(r.level_spacing, lam[k + 1] - lam[k]);

    // V in the eigenbasis: Vt[a][b] = sum_ij u[a][i] w_{i-j} u[b][j]; W is banded.
    const int bw = spec.W().bandwidth();
    CMatrix tmp(dim, dim);  // tmp[i][b] = sum_j w_{i-j} u[b][j]
    for (int i = 0; i < dim; ++i)
        for (int j = std::max(0, i - bw); j <= std::min(dim - 1, i + bw); ++j) {
            const cplx w = spec.w_coeff(i - j);
            if (w == cplx{}) continue;
            auto row = tmp.row(i);
            for (int b = 0; b < dim; ++b) row[b] += w * u(b, j);
        }
    CMatrix vt(dim, dim);
    for (int a = 0; a < dim; ++a) {
        auto out = vt.row(a);
        for (int i = 0; i < dim; ++i) {
            const double ua = u(a, i);
            if (ua == 0.0) continue;
            const auto row = tmp.row(i);
            for (int b = 0; b < dim; ++b) out[b] += ua * row[b];
        }
    }

    r.coeffs.assign(order + 1, cplx{});
    r.coeffs[0] = lam[n];
    std::vector<CVector> psi;
    psi.push_back(CVector(dim));
    psi[0][n] = 1.0;
    for (int s = 1; s <= order; ++s) {
        const auto vpsi = vt * std::span<const cplx>(psi[s - 1]);
        r.coeffs[s] = vpsi[n];
        CVector next(dim);
        for (int m = 0; m < dim; ++m) {
            if (m == n) continue;
            cplx rhs = vpsi[m];
            for (int j = 1; j < s; ++j) rhs -= r.coeffs[j] * psi[s - j][m];
            next[m] = rhs / (lam[n] - lam[m]);
        }
        psi.push_back(std::move(next));
    }
    return r;
}

struct MajorizationCheck {
    std::vector<bool> holds;     // holds[s-1] for s = 1..order
    std::vector<double> bound;   // (W_norm / d)^s
    bool all() const { return std::ranges::all_of(holds, [](bool b) { return b; }); }
};

/// |lambda^s| <= (W_norm / d)^s for s = 1..order.
inline MajorizationCheck check_majorization(const RSSeries& series, double w_norm, double d) {
    if (!(d > 0.0)) throw InvalidInputError("check_majorization: d must be positive");
    MajorizationCheck c;
    for (int s = 1; s <= series.order; ++s) {
        const double b = std::pow(w_norm / d, s);
        c.bound.push_back(b);
        c.holds.push_back(std::abs(series.coeffs[s]) <= b);
    }
    return c;
}

struct SeriesError {
    double g = 0.0;
    cplx partial_sum;
    cplx exact;
    double error = 0.0;
};

/// Eigenvalue of H_p(g) closest to `near`.
inline cplx nearest_fiber_eigenvalue(const PotentialSpec& spec, cplx g, double p, int N, cplx near) {
    const auto fm = assemble({spec, g, p, N});
    CVector ev;
    if (is_real_symmetric(fm.h)) {
        const auto sym = eig_hermitian(real_part(fm.h));
        ev.assign(sym.values.begin(), sym.values.end());
    } else {
        ev = DenseEigen(fm.h).eigenvalues();
    }
    return *std::ranges::min_element(ev, [&](cplx a, cplx b) { return std::abs(a - near) < std::abs(b - near); });
}

/// Truncation error of the order-`order` partial sum against a dense solve, per g.
inline std::vector<SeriesError> series_vs_exact(const PotentialSpec& spec, int n, double p, int N, int order,
                                                const std::vector<double>& g_samples) {
    const auto series = rs_coefficients(spec, n, p, N, order);
    std::vector<SeriesError> out;
    for (double g : g_samples) {
        SeriesError e;
        e.g = g;
        e.partial_sum = series.partial_sum(g);
        e.exact = g == 0.0 ? series.coeffs[0] : nearest_fiber_eigenvalue(spec, g, p, N, e.partial_sum);
        e.error = std::abs(e.partial_sum - e.exact);
        out.push_back(e);
    }
    return out;
}

}  // namespace blochlab
