#pragma once

// Reference computations used only by the tests. None of them shares code
// with the library's solvers.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;
using Dense = std::vector<std::vector<cplx>>;

/// Characteristic polynomial coefficients c[0..n] of det(z I - A), c[n] = 1,
/// by the Faddeev-LeVerrier recursion.
inline std::vector<cplx> char_poly(const Dense& a) {
    const std::size_t n = a.size();
    std::vector<cplx> c(n + 1);
    c[n] = 1.0;
    Dense m(n, std::vector<cplx>(n));
    for (std::size_t k = 1; k <= n; ++k) {
        Dense am(n, std::vector<cplx>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                cplx s{};
                for (std::size_t l = 0; l < n; ++l) s += a[i][l] * m[l][j];
                am[i][j] = s;
            }
        for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k + 1];
        m = am;
        cplx tr{};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t l = 0; l < n; ++l) tr += a[i][l] * m[l][i];
        c[n - k] = -tr / static_cast<double>(k);
    }
    return c;
}

inline cplx poly_eval(const std::vector<cplx>& c, cplx z) {
    cplx v{};
    for (std::size_t i = c.size(); i-- > 0;) v = v * z + c[i];
    return v;
}

/// All roots of a monic polynomial by Durand-Kerner (Weierstrass) iteration.
inline std::vector<cplx> poly_roots(const std::vector<cplx>& c) {
    const std::size_t n = c.size() - 1;
    double radius = 0.0;
    for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, std::abs(c[i]));
    radius = 1.0 + radius;
    std::vector<cplx> z(n);
    for (std::size_t i = 0; i < n; ++i) z[i] = std::polar(radius, 2.0 * std::numbers::pi * (i + 0.25) / n);
    for (int it = 0; it < 5000; ++it) {
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            cplx den = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) den *= z[i] - z[j];
            const cplx step = poly_eval(c, z[i]) / den;
            z[i] -= step;
            change = std::max(change, std::abs(step));
        }
        if (change < 1e-15 * radius) break;
    }
    // Newton polish.
    for (auto& r : z)
        for (int it = 0; it < 3; ++it) {
            cplx d{};
            for (std::size_t i = c.size() - 1; i >= 1; --i) d = d * r + static_cast<double>(i) * c[i];
            if (std::abs(d) > 0.0) r -= poly_eval(c, r) / d;
        }
    return z;
}

/// Optimal matching distance between two small multisets (brute force over
/// permutations).
inline double multiset_distance(std::vector<cplx> a, std::vector<cplx> b) {
    std::vector<std::size_t> perm(b.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    double best = 1e300;
    do {
        double m = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[perm[i]]));
        best = std::min(best, m);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

/// Floquet discriminant of -psi'' + gamma * G_sigma(x - pi) psi = E psi on
/// [0, 2 pi], where G_sigma is a unit-mass Gaussian of width sigma. Classical
/// RK4 on the two fundamental solutions. The bias against the delta comb is
/// O(gamma^2 sigma).
inline double gaussian_comb_discriminant(double e, double gamma, double sigma, int steps) {
    const double L = 2.0 * std::numbers::pi;
    const double norm = gamma / (sigma * std::sqrt(2.0 * std::numbers::pi));
    auto q = [&](double x) {
        const double u = (x - std::numbers::pi) / sigma;
        return u * u > 200.0 ? 0.0 : norm * std::exp(-0.5 * u * u);
    };
    auto integrate = [&](double y0, double v0) {
        double y = y0, v = v0;
        const double h = L / steps;
        for (int i = 0; i < steps; ++i) {
            const double x = i * h;
            auto f = [&](double xx, double yy) { return (q(xx) - e) * yy; };
            const double k1y = v, k1v = f(x, y);
            const double k2y = v + 0.5 * h * k1v, k2v = f(x + 0.5 * h, y + 0.5 * h * k1y);
            const double k3y = v + 0.5 * h * k2v, k3v = f(x + 0.5 * h, y + 0.5 * h * k2y);
            const double k4y = v + h * k3v, k4v = f(x + h, y + h * k3y);
            y += h / 6.0 * (k1y + 2 * k2y + 2 * k3y + k4y);
            v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        }
        return std::pair{y, v};
    };
    const auto [c, cp] = integrate(1.0, 0.0);
    const auto [s, sp] = integrate(0.0, 1.0);
    (void)cp;
    (void)s;
    return 0.5 * (c + sp);
}

/// Delta-comb limit of gaussian_comb_discriminant: Richardson extrapolation
/// over sigma and sigma / 2 removes the first-order width bias.
inline double smoothed_comb_discriminant(double e, double gamma, double sigma = 2e-3) {
    const double coarse = gaussian_comb_discriminant(e, gamma, sigma, 80000);
    const double fine = gaussian_comb_discriminant(e, gamma, 0.5 * sigma, 160000);
    return 2.0 * fine - coarse;
}

/// Central differences of f at 0 with step h: first and second derivative.
template <class F>
double fd_first(F&& f, double h) {
    return (f(h) - f(-h)) / (2.0 * h);
}

template <class F>
double fd_second(F&& f, double h) {
    return (f(h) + f(-h) - 2.0 * f(0.0)) / (h * h);
}

}  // namespace oracle
