#pragma once

// Exact Floquet data for the delta comb q(x) = gamma * sum_n delta(x - 2 pi n).
//
// One period = free propagation over 2*pi followed by the kick psi' -> psi' + gamma psi.
// The monodromy matrix is
//
//   M(E) = [[1, 0], [gamma, 1]] * [[cos 2 pi k, sin(2 pi k)/k], [-k sin 2 pi k, cos 2 pi k]],  k = sqrt(E),
//
// with det M = 1, and the discriminant D(E) = tr M / 2 = cos 2 pi k + gamma sin(2 pi k) / (2k).
// A Bloch solution with quasimomentum p exists iff D(E) = cos(2 pi p).
//
// For gamma >= 0, band n lies in k in [n/2, (n+1)/2]; its upper edge is the
// free value ((n+1)/2)^2 and its lower edge is pushed up by the comb.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "blochlab/error.hpp"

namespace blochlab::kp {

inline constexpr double kSeriesSwitch = 1e-4;
inline constexpr double kBracketStep = 0.05;
inline constexpr double kRootTolerance = 1e-12;

using Mat2 = std::array<std::array<double, 2>, 2>;

/// Period monodromy in the (psi, psi') basis. Real for every real E.
inline Mat2 transfer_matrix(double e, double gamma) {
    const double two_pi = 2.0 * std::numbers::pi;
    double c, s_over_k, k_s;  // cos, sin(kL)/k, -k sin(kL) -> stored as k_s = k^2 * (sin(kL)/k)
    if (e > 0.0) {
        const double k = std::sqrt(e);
        c = std::cos(two_pi * k);
        s_over_k = std::sin(two_pi * k) / k;
    } else if (e < 0.0) {
        const double kappa = std::sqrt(-e);
        c = std::cosh(two_pi * kappa);
        s_over_k = std::sinh(two_pi * kappa) / kappa;
    } else {
        c = 1.0;
        s_over_k = two_pi;
    }
    k_s = -e * s_over_k;
    const Mat2 free{{{c, s_over_k}, {k_s, c}}};
    return {{{free[0][0], free[0][1]}, {gamma * free[0][0] + free[1][0], gamma * free[0][1] + free[1][1]}}};
}

/// D(E) = cos(2 pi sqrt E) + gamma sin(2 pi sqrt E) / (2 sqrt E), continued
/// analytically to E <= 0. A power series is used for |E| < 1e-4.
inline double discriminant(double e, double gamma) {
    const double pi = std::numbers::pi;
    if (std::abs(e) < kSeriesSwitch) {
        // z = (2 pi k)^2;  cos = sum (-z)^j / (2j)!,  sin(2 pi k)/(2k) = pi sum (-z)^j / (2j+1)!
        const double z = 4.0 * pi * pi * e;
        double c = 0.0, s = 0.0, term_c = 1.0, term_s = 1.0;
        for (int j = 0; j < 8; ++j) {
            c += term_c;
            s += term_s;
            term_c *= -z / ((2.0 * j + 1.0) * (2.0 * j + 2.0));
            term_s *= -z / ((2.0 * j + 2.0) * (2.0 * j + 3.0));
        }
        return c + gamma * pi * s;
    }
    if (e > 0.0) {
        const double k = std::sqrt(e);
        return std::cos(2.0 * pi * k) + gamma * std::sin(2.0 * pi * k) / (2.0 * k);
    }
    const double kappa = std::sqrt(-e);
    return std::cosh(2.0 * pi * kappa) + gamma * std::sinh(2.0 * pi * kappa) / (2.0 * kappa);
}

namespace detail {

inline void require_repulsive(double gamma) {
    if (!(gamma >= 0.0) || !std::isfinite(gamma))
        throw InvalidInputError("Kronig-Penney oracle requires a finite comb strength gamma >= 0");
}

/// Root of D(E) = c on band n's sub-branch k in [n/2, (n+1)/2].
inline double band_root(int n, double c, double gamma) {
    const double lo = 0.25 * n * n;
    const double hi = 0.25 * (n + 1) * (n + 1);
    const double pi = std::numbers::pi;

    if (gamma == 0.0) {
        // cos(2 pi k) = c on a monotone half-period.
        const double a = std::acos(std::clamp(c, -1.0, 1.0)) / (2.0 * pi);
        const double k = (n % 2 == 0) ? 0.5 * n + a : 0.5 * (n + 1) - a;
        return k * k;
    }

    // Just above lo the comb pushes D beyond (-1)^n, so D - c has the sign
    // of (-1)^n there for every |c| <= 1.
    const double s_lo = (n % 2 == 0) ? 1.0 : -1.0;
    auto f = [&](double e) { return discriminant(e, gamma) - c; };

    const int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) / kBracketStep)));
    double a = lo;
    double b = hi;
    bool found = false;
    int sign_changes = 0;
    double prev_sign = s_lo;
    for (int i = 1; i <= steps; ++i) {
        const double e = (i == steps) ? hi : lo + (hi - lo) * i / steps;
        const double v = f(e);
        if (i == steps && std::abs(v) <= 1e-13) {
            if (!found) return hi;
            break;
        }
        const double sg = v > 0.0 ? 1.0 : -1.0;
        if (sg != prev_sign) {
            ++sign_changes;
            if (!found) {
                a = lo + (hi - lo) * (i - 1) / steps;
                b = e;
                found = true;
            }
        }
        prev_sign = sg;
    }
    if (!found)
        throw OracleError("no root of D(E) = " + std::to_string(c) + " bracketed in band " + std::to_string(n));
    if (sign_changes != 1)
        throw OracleError("root of D(E) = " + std::to_string(c) + " is not unique in band " + std::to_string(n));

    // Bisection; the sign at the left end of the bracket is s_lo by construction.
    while (b - a > kRootTolerance) {
        const double m = 0.5 * (a + b);
        const double v = f(m);
        if (v == 0.0) return m;
        if ((v > 0.0 ? 1.0 : -1.0) == s_lo)
            a = m;
        else
            b = m;
    }
    return 0.5 * (a + b);
}

}  // namespace detail

/// The first `count` eigenvalues of the unperturbed fiber at quasimomentum p,
/// i.e. the roots of D(E) = cos(2 pi p), ascending.
inline std::vector<double> fiber_eigenvalues_exact(double p, double gamma, int count) {
    detail::require_repulsive(gamma);
    if (count < 1) throw InvalidInputError("fiber_eigenvalues_exact: count must be >= 1");
    if (!(p >= 0.0 && p <= 0.5)) throw InvalidInputError("fiber_eigenvalues_exact: p must lie in [0, 1/2]");
    const double c = std::cos(2.0 * std::numbers::pi * p);
    std::vector<double> out(count);
    for (int n = 0; n < count; ++n) out[n] = detail::band_root(n, c, gamma);
    return out;
}

struct EdgeChain {
    std::vector<double> alpha;  // alpha_n = lambda_n(p = 0)
    std::vector<double> beta;   // beta_n = lambda_n(p = 1/2)

    int bands() const noexcept { return static_cast<int>(alpha.size()); }
    double lower(int n) const { return std::min(alpha[n], beta[n]); }
    double upper(int n) const { return std::max(alpha[n], beta[n]); }

    /// alpha_0, beta_0, beta_1, alpha_1, alpha_2, beta_2, ... (ascending).
    std::vector<double> chain() const {
        std::vector<double> out;
        for (int n = 0; n < bands(); ++n) {
            out.push_back(lower(n));
            out.push_back(upper(n));
        }
        return out;
    }

    std::vector<double> gap_widths() const {
        std::vector<double> out;
        for (int n = 0; n + 1 < bands(); ++n) out.push_back(lower(n + 1) - upper(n));
        return out;
    }
};

/// Band edges of bands 0..n_max.
inline EdgeChain band_edges_exact(double gamma, int n_max) {
    if (n_max < 0) throw InvalidInputError("band_edges_exact: n_max must be >= 0");
    EdgeChain e;
    e.alpha = fiber_eigenvalues_exact(0.0, gamma, n_max + 1);
    e.beta = fiber_eigenvalues_exact(0.5, gamma, n_max + 1);
    return e;
}

struct DispersionPoint {
    double p;
    int n;
    double energy;
};

inline std::vector<DispersionPoint> dispersion_samples(double gamma, int count, int p_points) {
    if (p_points < 2) throw InvalidInputError("dispersion_samples: need at least 2 p points");
    std::vector<DispersionPoint> out;
    for (int j = 0; j < p_points; ++j) {
        const double p = 0.5 * j / (p_points - 1);
        const auto ev = fiber_eigenvalues_exact(p, gamma, count);
        for (int n = 0; n < count; ++n) out.push_back({p, n, ev[n]});
    }
    return out;
}

}  // namespace blochlab::kp
