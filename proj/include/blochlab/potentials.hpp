#pragma once

// Periodic potentials in Fourier form.
//
// All potentials have period 2*pi. A potential is stored as its Fourier
// coefficients, W(x) = sum_n w_n exp(i n x), which is exactly what the
// plane-wave fiber matrices consume.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "blochlab/error.hpp"
#include "blochlab/matrix.hpp"

namespace blochlab {

inline constexpr double kDefaultCoeffTolerance = 1e-10;

class TrigPotential {
 public:
    TrigPotential() = default;

    explicit TrigPotential(std::map<int, cplx> coeffs) {
        for (const auto& [n, w] : coeffs) {
            if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
                throw InvalidInputError("non-finite Fourier coefficient at n = " + std::to_string(n));
            if (w != cplx{}) coeffs_.emplace(n, w);
        }
    }

    cplx coeff(int n) const {
        const auto it = coeffs_.find(n);
        return it == coeffs_.end() ? cplx{} : it->second;
    }

    const std::map<int, cplx>& coeffs() const noexcept { return coeffs_; }

    /// Largest |n| with a stored coefficient; 0 for the zero potential.
    int bandwidth() const noexcept {
        int m = 0;
        for (const auto& [n, w] : coeffs_) m = std::max(m, std::abs(n));
        return m;
    }

    bool is_zero() const noexcept { return coeffs_.empty(); }

    double max_coeff() const noexcept {
        double m = 0.0;
        for (const auto& [n, w] : coeffs_) m = std::max(m, std::abs(w));
        return m;
    }

    /// l1 norm of the coefficient sequence; an upper bound for sup|W|.
    double l1_norm() const noexcept {
        double s = 0.0;
        for (const auto& [n, w] : coeffs_) s += std::abs(w);
        return s;
    }

    cplx evaluate(double x) const {
        cplx s{};
        for (const auto& [n, w] : coeffs_) s += w * std::polar(1.0, n * x);
        return s;
    }

    TrigPotential scaled(cplx c) const {
        std::map<int, cplx> out;
        for (const auto& [n, w] : coeffs_) out[n] = c * w;
        return TrigPotential(std::move(out));
    }

    friend TrigPotential operator+(const TrigPotential& a, const TrigPotential& b) {
        std::map<int, cplx> out = a.coeffs_;
        for (const auto& [n, w] : b.coeffs_) out[n] += w;
        return TrigPotential(std::move(out));
    }

    // Symmetry classes, tested with a tolerance relative to max|w_n|.

    /// conj(W(-x)) = W(x)  <=>  every w_n is real.
    bool pt_symmetric(double tol_rel = kDefaultCoeffTolerance) const {
        const double tol = tol_rel * max_coeff();
        return std::ranges::all_of(coeffs_, [&](const auto& kv) { return std::abs(kv.second.imag()) <= tol; });
    }

    /// W(-x) = W(x)  <=>  w_n = w_{-n}.
    bool p_symmetric(double tol_rel = kDefaultCoeffTolerance) const {
        const double tol = tol_rel * max_coeff();
        return std::ranges::all_of(coeffs_, [&](const auto& kv) { return std::abs(kv.second - coeff(-kv.first)) <= tol; });
    }

    /// W real-valued  <=>  w_{-n} = conj(w_n).
    bool real_valued(double tol_rel = kDefaultCoeffTolerance) const {
        const double tol = tol_rel * max_coeff();
        return std::ranges::all_of(coeffs_, [&](const auto& kv) {
            return std::abs(coeff(-kv.first) - std::conj(kv.second)) <= tol;
        });
    }

 private:
    std::map<int, cplx> coeffs_;
};

/// amp * i * sin(n x): w_n = amp/2, w_{-n} = -amp/2.
inline TrigPotential i_sin(int n, double amp = 1.0) {
    if (n == 0) return {};
    return TrigPotential({{n, 0.5 * amp}, {-n, -0.5 * amp}});
}

/// amp * cos(n x).
inline TrigPotential cos_mode(int n, double amp = 1.0) {
    if (n == 0) return TrigPotential({{0, amp}});
    return TrigPotential({{n, 0.5 * amp}, {-n, 0.5 * amp}});
}

/// gamma * sum_n delta(x - 2 pi n). Every Fourier coefficient equals gamma / (2 pi).
struct DeltaComb {
    double strength = 1.0;

    double coeff(int /*k*/) const noexcept { return strength / (2.0 * std::numbers::pi); }

    friend bool operator==(const DeltaComb&, const DeltaComb&) = default;
};

using PeriodicPotential = std::variant<DeltaComb, TrigPotential>;

/// q (real, even; delta comb or trigonometric polynomial) and the PT-symmetric
/// perturbation W. Construction validates both symmetry classes.
class PotentialSpec {
 public:
    PotentialSpec() = default;

    PotentialSpec(PeriodicPotential q, TrigPotential w, double tol_rel = kDefaultCoeffTolerance)
        : q_(std::move(q)), w_(std::move(w)) {
        if (const auto* t = std::get_if<TrigPotential>(&q_)) {
            if (!t->real_valued(tol_rel)) throw SymmetryError("q must be real-valued (w_{-n} = conj(w_n))");
            if (!t->p_symmetric(tol_rel)) throw SymmetryError("q must be P-symmetric (w_n = w_{-n})");
        } else if (!std::isfinite(std::get<DeltaComb>(q_).strength)) {
            throw InvalidInputError("delta comb strength must be finite");
        }
        if (!w_.pt_symmetric(tol_rel)) throw SymmetryError("W must be PT-symmetric (all Fourier coefficients real)");
    }

    /// Skips the PT check on W. Only assembly and spectra are meaningful for
    /// such a spec; certification entry points reject it.
    static PotentialSpec unchecked(PeriodicPotential q, TrigPotential w) {
        PotentialSpec s;
        s.q_ = std::move(q);
        s.w_ = std::move(w);
        s.checked_ = false;
        return s;
    }

    const PeriodicPotential& q() const noexcept { return q_; }
    const TrigPotential& W() const noexcept { return w_; }
    bool checked() const noexcept { return checked_; }

    bool q_is_delta_comb() const noexcept { return std::holds_alternative<DeltaComb>(q_); }

    bool q_is_zero() const noexcept {
        if (const auto* t = std::get_if<TrigPotential>(&q_)) return t->is_zero();
        return std::get<DeltaComb>(q_).strength == 0.0;
    }

    cplx q_coeff(int k) const {
        if (const auto* t = std::get_if<TrigPotential>(&q_)) return t->coeff(k);
        return std::get<DeltaComb>(q_).coeff(k);
    }

    cplx w_coeff(int k) const { return w_.coeff(k); }

    void require_checked(const char* who) const {
        if (!checked_) throw SymmetryError(std::string(who) + " requires a PT-symmetric W");
    }

 private:
    PeriodicPotential q_ = TrigPotential{};
    TrigPotential w_;
    bool checked_ = true;
};

// ---------------------------------------------------------------------------
// Operations

/// Discrete Fourier coefficients w_n = (1/2K) sum_j f_j exp(-i n x_j),
/// |n| <= bandwidth, from 2K samples on x_j = -pi + j pi / K.
inline TrigPotential fourier_from_samples(std::span<const cplx> samples, int bandwidth) {
    if (samples.empty()) throw InvalidInputError("fourier_from_samples: no samples");
    if (samples.size() % 2 != 0) throw InvalidInputError("fourier_from_samples: need an even number (2K) of samples");
    if (bandwidth < 0) throw InvalidInputError("fourier_from_samples: negative bandwidth");
    for (const auto& s : samples)
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw InvalidInputError("fourier_from_samples: non-finite sample");
    const auto two_k = static_cast<int>(samples.size());
    const int k = two_k / 2;
    if (k < 2 * bandwidth + 1)
        throw InvalidInputError("fourier_from_samples: K = " + std::to_string(k) + " too small for bandwidth " +
                                std::to_string(bandwidth));

    const double pi = std::numbers::pi;
    std::map<int, cplx> coeffs;
    for (int n = -bandwidth; n <= bandwidth; ++n) {
        cplx s{};
        for (int j = 0; j < two_k; ++j) {
            const double x = -pi + j * pi / k;
            s += samples[j] * std::polar(1.0, -n * x);
        }
        coeffs[n] = s / static_cast<double>(two_k);
    }
    return TrigPotential(std::move(coeffs));
}

/// Samples f on the 2K-point grid used by fourier_from_samples.
template <class F>
std::vector<cplx> sample_on_grid(F&& f, int k) {
    std::vector<cplx> out(2 * static_cast<std::size_t>(k));
    for (int j = 0; j < 2 * k; ++j) out[j] = f(-std::numbers::pi + j * std::numbers::pi / k);
    return out;
}

struct PtCheck {
    bool pt = true;
    double max_violation = 0.0;  // max_n |Im w_n|
};

/// PT test: max_n |Im w_n| <= tol_rel * max_n |w_n|.
inline PtCheck check_pt(const TrigPotential& pot, double tol_rel = kDefaultCoeffTolerance) {
    PtCheck r;
    for (const auto& [n, w] : pot.coeffs()) r.max_violation = std::max(r.max_violation, std::abs(w.imag()));
    r.pt = r.max_violation <= tol_rel * pot.max_coeff();
    return r;
}

struct SupNormBound {
    double upper = 0.0;
    double lower = 0.0;
};

inline constexpr int kSupNormGrid = 4096;

/// lower <= sup|W| <= upper: upper from the triangle inequality, lower from a
/// 4096-point grid maximum.
inline SupNormBound sup_norm_bound(const TrigPotential& pot) {
    SupNormBound b;
    b.upper = pot.l1_norm();
    if (pot.is_zero()) return b;
    for (int j = 0; j < kSupNormGrid; ++j) {
        const double x = -std::numbers::pi + 2.0 * std::numbers::pi * j / kSupNormGrid;
        b.lower = std::max(b.lower, std::abs(pot.evaluate(x)));
    }
    b.lower = std::min(b.lower, b.upper);
    return b;
}

/// Odd k >= 1 with w_k * w_{-k} < 0: the modes that open complex arcs.
inline std::vector<int> odd_condition_scan(const TrigPotential& w) {
    if (!check_pt(w).pt) throw SymmetryError("odd_condition_scan: W is not PT-symmetric");
    std::vector<int> out;
    const int m = w.bandwidth();
    for (int k = 1; k <= m; k += 2)
        if (w.coeff(k).real() * w.coeff(-k).real() < 0.0) out.push_back(k);
    return out;
}

}  // namespace blochlab
