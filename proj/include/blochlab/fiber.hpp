#pragma once

// Plane-wave truncation of the Bloch fiber operator
//
//   H_p(g) = (-i d/dx + p)^2 + q + g W   on the 2*pi torus,
//
// in the basis u_n = exp(i n x) / sqrt(2 pi), |n| <= N. Matrix elements:
//   H[m, n] = (n + p)^2 [m == n] + q_{m-n} + g w_{m-n}.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "blochlab/eigensolver.hpp"
#include "blochlab/error.hpp"
#include "blochlab/matrix.hpp"
#include "blochlab/potentials.hpp"

namespace blochlab {

inline constexpr double kPairTolerance = 1e-8;
inline constexpr int kMaxHalfBandwidth = 2048;

struct FiberProblem {
    PotentialSpec spec;
    cplx g = 0.0;
    double p = 0.0;  // quasimomentum in (-1/2, 1/2]
    int N = 1;       // matrix dimension 2N + 1

    void validate() const {
        if (N < 1) throw InvalidInputError("fiber: truncation N must be >= 1");
        if (!(p > -0.5 && p <= 0.5)) throw InvalidInputError("fiber: p must lie in (-1/2, 1/2]");
        if (!std::isfinite(g.real()) || !std::isfinite(g.imag())) throw InvalidInputError("fiber: non-finite g");
        if (N > kMaxHalfBandwidth)
            throw ResourceError("fiber: N = " + std::to_string(N) + " exceeds the dense limit " +
                                std::to_string(kMaxHalfBandwidth));
    }
};

struct FiberMatrix {
    CMatrix h;
    int N = 0;
    double p = 0.0;
    cplx g = 0.0;

    std::size_t dim() const noexcept { return h.rows(); }
    /// Matrix index of plane wave n.
    std::size_t index(int n) const noexcept { return static_cast<std::size_t>(n + N); }
};

inline FiberMatrix assemble(const FiberProblem& prob) {
    prob.validate();
    const int n_modes = 2 * prob.N + 1;
    FiberMatrix fm{CMatrix(n_modes, n_modes), prob.N, prob.p, prob.g};

    // Coefficients depend only on m - n in [-2N, 2N].
    std::vector<cplx> band(2 * n_modes - 1);
    for (int d = -(n_modes - 1); d <= n_modes - 1; ++d)
        band[d + n_modes - 1] = prob.spec.q_coeff(d) + prob.g * prob.spec.w_coeff(d);

    for (int i = 0; i < n_modes; ++i) {
        auto row = fm.h.row(i);
        for (int j = 0; j < n_modes; ++j) row[j] = band[i - j + n_modes - 1];
        const double k = (i - prob.N) + prob.p;
        row[i] += k * k;
    }
    return fm;
}

/// Matrix of the multiplication operator alone (the g-derivative of the fiber).
inline CMatrix potential_matrix(const TrigPotential& w, int N) {
    const int n_modes = 2 * N + 1;
    CMatrix v(n_modes, n_modes);
    for (int i = 0; i < n_modes; ++i)
        for (int j = 0; j < n_modes; ++j) v(i, j) = w.coeff(i - j);
    return v;
}

enum class PairKind { real, conjugate_pair, unpaired };

struct PairTag {
    PairKind kind = PairKind::real;
    int partner = -1;  // index of the conjugate partner when kind == conjugate_pair
};

struct SpectrumSample {
    double p = 0.0;
    cplx g = 0.0;
    CVector eigenvalues;  // sorted by (Re, Im)
    std::vector<PairTag> tags;
    double scale = 1.0;  // max(1, max |lambda|)

    int conjugate_pairs() const {
        return static_cast<int>(std::ranges::count_if(tags, [](const PairTag& t) { return t.kind == PairKind::conjugate_pair; })) / 2;
    }
};

inline void sort_spectrum(CVector& ev) {
    std::ranges::sort(ev, [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

/// Tags each eigenvalue as real, part of a conjugate pair, or unpaired.
/// Thresholds are tau_pair * max(1, max|lambda|).
inline std::vector<PairTag> classify_pairs(const CVector& ev, double tau_pair, double& scale_out) {
    double scale = 1.0;
    for (const auto& z : ev) scale = std::max(scale, std::abs(z));
    scale_out = scale;
    const double tol = tau_pair * scale;
    std::vector<PairTag> tags(ev.size());
    std::vector<char> done(ev.size(), 0);
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (std::abs(ev[i].imag()) <= tol) {
            tags[i].kind = PairKind::real;
            done[i] = 1;
        }
    for (std::size_t i = 0; i < ev.size(); ++i) {
        if (done[i]) continue;
        std::size_t best = ev.size();
        double best_d = tol;
        for (std::size_t j = i + 1; j < ev.size(); ++j) {
            if (done[j]) continue;
            const double d = std::abs(ev[i] - std::conj(ev[j]));
            if (d <= best_d) {
                best_d = d;
                best = j;
            }
        }
        done[i] = 1;
        if (best == ev.size()) {
            tags[i].kind = PairKind::unpaired;
            continue;
        }
        done[best] = 1;
        tags[i] = {PairKind::conjugate_pair, static_cast<int>(best)};
        tags[best] = {PairKind::conjugate_pair, static_cast<int>(i)};
    }
    return tags;
}

inline bool is_real_symmetric(const CMatrix& h) {
    if (max_abs_imag(h) != 0.0) return false;
    for (std::size_t i = 0; i < h.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (h(i, j).real() != h(j, i).real()) return false;
    return true;
}

/// Full spectrum of a fiber matrix. Self-adjoint (real symmetric) fibers use
/// the symmetric solver; everything else goes through eig_dense with residual
/// certificates.
inline SpectrumSample spectrum(const FiberMatrix& fm, double tau_pair = kPairTolerance,
                               double tau_resid = kResidualTolerance) {
    SpectrumSample s;
    s.p = fm.p;
    s.g = fm.g;
    if (is_real_symmetric(fm.h)) {
        const auto sym = eig_hermitian(real_part(fm.h));
        s.eigenvalues.assign(sym.values.begin(), sym.values.end());
    } else {
        s.eigenvalues = eig_dense(fm.h, tau_resid).eigenvalues;
    }
    sort_spectrum(s.eigenvalues);
    s.tags = classify_pairs(s.eigenvalues, tau_pair, s.scale);
    return s;
}

inline SpectrumSample fiber_spectrum(const FiberProblem& prob, double tau_pair = kPairTolerance) {
    return spectrum(assemble(prob), tau_pair);
}

}  // namespace blochlab
