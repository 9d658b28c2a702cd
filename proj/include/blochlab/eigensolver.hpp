#pragma once

// Dense eigenvalue solvers.
//
// General matrices: balance -> Householder Hessenberg reduction -> shifted QR
// with deflation. Real input takes the Francis double-shift path, so complex
// eigenvalues of a real matrix come out as exact conjugate pairs (they are
// read off 2x2 blocks). Complex input uses single-shift QR with a Wilkinson
// shift. Eigenvectors are never accumulated during QR; they are recovered on
// request by inverse iteration on the Hessenberg form.
//
// Real symmetric matrices: Householder tridiagonalization + implicit QL.

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "blochlab/error.hpp"
#include "blochlab/matrix.hpp"

namespace blochlab {

inline constexpr double kDeflationTolerance = 1e-14;
inline constexpr double kResidualTolerance = 1e-9;
inline constexpr int kSweepsPerDimension = 30;

namespace detail {

inline double conj_if(double x) { return x; }
inline cplx conj_if(cplx z) { return std::conj(z); }

/// Parlett-Reinsch balancing by powers of two: A <- D^{-1} A D. Returns diag(D).
template <class T>
std::vector<double> balance(Matrix<T>& a) {
    constexpr double radix = 2.0;
    constexpr double sqrdx = radix * radix;
    const std::size_t n = a.rows();
    std::vector<double> scale(n, 1.0);
    bool done = false;
    while (!done) {
        done = true;
        for (std::size_t i = 0; i < n; ++i) {
            double r = 0.0;
            double c = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) continue;
                c += abs1(a(j, i));
                r += abs1(a(i, j));
            }
            if (c == 0.0 || r == 0.0) continue;
            double g = r / radix;
            double f = 1.0;
            const double s = c + r;
            while (c < g) {
                f *= radix;
                c *= sqrdx;
            }
            g = r * radix;
            while (c > g) {
                f /= radix;
                c /= sqrdx;
            }
            if ((c + r) / f < 0.95 * s) {
                done = false;
                g = 1.0 / f;
                scale[i] *= f;
                for (std::size_t j = 0; j < n; ++j) a(i, j) *= g;
                for (std::size_t j = 0; j < n; ++j) a(j, i) *= f;
            }
        }
    }
    return scale;
}

/// One Householder reflector P = I - beta v v^H acting on indices offset..offset+v.size()-1.
template <class T>
struct Reflector {
    std::size_t offset = 0;
    std::vector<T> v;
    double beta = 0.0;
};

/// In-place reduction to upper Hessenberg form, A = Q H Q^H with
/// Q = P_0 P_1 ... P_{n-3}. Returns the reflectors.
template <class T>
std::vector<Reflector<T>> hessenberg_reduce(Matrix<T>& a) {
    const std::size_t n = a.rows();
    std::vector<Reflector<T>> refl;
    if (n < 3) return refl;
    refl.reserve(n - 2);
    std::vector<T> s(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        Reflector<T> r;
        r.offset = k + 1;
        const std::size_t m = n - k - 1;
        r.v.resize(m);
        double tail = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            r.v[i] = a(k + 1 + i, k);
            if (i > 0) tail += std::norm(r.v[i]);
        }
        if (tail == 0.0) {
            refl.push_back(std::move(r));  // beta = 0: identity
            continue;
        }
        const double alpha = std::sqrt(tail + std::norm(r.v[0]));
        const double x0abs = std::abs(r.v[0]);
        const T phase = x0abs == 0.0 ? T{1} : r.v[0] / x0abs;
        r.v[0] += phase * alpha;
        double vnorm2 = 0.0;
        for (const auto& x : r.v) vnorm2 += std::norm(x);
        r.beta = 2.0 / vnorm2;

        // Left: rows k+1.., columns k..n-1.
        std::fill(s.begin(), s.end(), T{});
        for (std::size_t i = 0; i < m; ++i) {
            const T vi = conj_if(r.v[i]);
            const auto row = a.row(k + 1 + i);
            for (std::size_t j = k; j < n; ++j) s[j] += vi * row[j];
        }
        for (std::size_t i = 0; i < m; ++i) {
            const T vi = r.beta * r.v[i];
            auto row = a.row(k + 1 + i);
            for (std::size_t j = k; j < n; ++j) row[j] -= vi * s[j];
        }
        // Right: all rows, columns k+1..n-1.
        for (std::size_t i = 0; i < n; ++i) {
            auto row = a.row(i);
            T t{};
            for (std::size_t j = 0; j < m; ++j) t += row[k + 1 + j] * r.v[j];
            t *= r.beta;
            for (std::size_t j = 0; j < m; ++j) row[k + 1 + j] -= t * conj_if(r.v[j]);
        }
        a(k + 1, k) = -phase * alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = T{};
        refl.push_back(std::move(r));
    }
    return refl;
}

inline double sign_of(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

/// Francis double-shift QR on a real upper Hessenberg matrix (destroyed).
/// Conjugate pairs are produced from 2x2 blocks and are exact conjugates.
inline CVector francis_qr(RMatrix& a, long& sweeps, double tol) {
    const int n = static_cast<int>(a.rows());
    CVector eig(n);
    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(a(i, j));

    const long max_sweeps = static_cast<long>(kSweepsPerDimension) * n;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(a(l - 1, l - 1)) + std::abs(a(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(a(l, l - 1)) <= tol * s) {
                    a(l, l - 1) = 0.0;
                    break;
                }
            }
            double x = a(nn, nn);
            if (l == nn) {
                eig[nn--] = x + t;
            } else {
                double y = a(nn - 1, nn - 1);
                double w = a(nn, nn - 1) * a(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_of(z, p);
                        eig[nn - 1] = eig[nn] = x + z;
                        if (z != 0.0) eig[nn] = x - w / z;
                    } else {
                        eig[nn - 1] = cplx(x + p, z);
                        eig[nn] = cplx(x + p, -z);
                    }
                    nn -= 2;
                } else {
                    if (++sweeps > max_sweeps)
                        throw NumericalError("Francis QR did not converge after " + std::to_string(sweeps - 1) +
                                                 " sweeps",
                                             sweeps - 1);
                    if (its > 0 && its % 10 == 0) {
                        // Exceptional shift.
                        t += x;
                        for (int i = 0; i <= nn; ++i) a(i, i) -= x;
                        const double s = std::abs(a(nn, nn - 1)) + std::abs(a(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    int m = nn - 2;
                    double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
                    for (; m >= l; --m) {
                        z = a(m, m);
                        r = x - z;
                        double s = y - z;
                        p = (r * s - w) / a(m + 1, m) + a(m, m + 1);
                        q = a(m + 1, m + 1) - z - r - s;
                        r = a(m + 2, m + 1);
                        s = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= s;
                        q /= s;
                        r /= s;
                        if (m == l) break;
                        const double u = std::abs(a(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v =
                            std::abs(p) * (std::abs(a(m - 1, m - 1)) + std::abs(z) + std::abs(a(m + 1, m + 1)));
                        if (u <= DBL_EPSILON * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) {
                        a(i, i - 2) = 0.0;
                        if (i != m + 2) a(i, i - 3) = 0.0;
                    }
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = a(k, k - 1);
                            q = a(k + 1, k - 1);
                            r = 0.0;
                            if (k != nn - 1) r = a(k + 2, k - 1);
                            if ((x = std::abs(p) + std::abs(q) + std::abs(r)) != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        const double s = sign_of(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) a(k, k - 1) = -a(k, k - 1);
                        } else {
                            a(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            p = a(k, j) + q * a(k + 1, j);
                            if (k != nn - 1) {
                                p += r * a(k + 2, j);
                                a(k + 2, j) -= p * z;
                            }
                            a(k + 1, j) -= p * y;
                            a(k, j) -= p * x;
                        }
                        const int mmin = nn < k + 3 ? nn : k + 3;
                        for (int i = l; i <= mmin; ++i) {
                            p = x * a(i, k) + y * a(i, k + 1);
                            if (k != nn - 1) {
                                p += z * a(i, k + 2);
                                a(i, k + 2) -= p * r;
                            }
                            a(i, k + 1) -= p * q;
                            a(i, k) -= p;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return eig;
}

/// Single-shift (Wilkinson) QR on a complex upper Hessenberg matrix (destroyed).
inline CVector complex_qr(CMatrix& h, long& sweeps, double tol) {
    const int n = static_cast<int>(h.rows());
    CVector eig(n);
    const double hnorm = std::max(frobenius_norm(h), DBL_MIN);
    const long max_sweeps = static_cast<long>(kSweepsPerDimension) * n;
    std::vector<double> cs(n);
    CVector sn(n);

    int hi = n - 1;
    int its = 0;
    while (hi >= 0) {
        int l = hi;
        for (; l > 0; --l) {
            double s = abs1(h(l - 1, l - 1)) + abs1(h(l, l));
            if (s == 0.0) s = hnorm;
            if (abs1(h(l, l - 1)) <= tol * s) {
                h(l, l - 1) = 0.0;
                break;
            }
        }
        if (l == hi) {
            eig[hi] = h(hi, hi);
            --hi;
            its = 0;
            continue;
        }
        if (++sweeps > max_sweeps)
            throw NumericalError("complex QR did not converge after " + std::to_string(sweeps - 1) + " sweeps",
                                 sweeps - 1);
        ++its;

        cplx mu;
        if (its % 10 == 0) {
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1).real()) + 0.75 * std::abs(h(hi, hi - 1).imag());
        } else {
            const cplx a = h(hi - 1, hi - 1), b = h(hi - 1, hi), c = h(hi, hi - 1), d = h(hi, hi);
            const cplx half = 0.5 * (a - d);
            const cplx disc = std::sqrt(half * half + b * c);
            const cplx m1 = 0.5 * (a + d) + disc;
            const cplx m2 = 0.5 * (a + d) - disc;
            mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
        }

        for (int k = l; k <= hi; ++k) h(k, k) -= mu;
        for (int k = l; k < hi; ++k) {
            const cplx a = h(k, k), b = h(k + 1, k);
            const double r = std::hypot(std::abs(a), std::abs(b));
            double c;
            cplx s;
            if (r == 0.0) {
                c = 1.0;
                s = 0.0;
            } else if (std::abs(a) == 0.0) {
                c = 0.0;
                s = std::conj(b) / std::abs(b);
            } else {
                c = std::abs(a) / r;
                s = (a / std::abs(a)) * std::conj(b) / r;
            }
            cs[k] = c;
            sn[k] = s;
            for (int j = k; j <= hi; ++j) {
                const cplx x = h(k, j), y = h(k + 1, j);
                h(k, j) = c * x + s * y;
                h(k + 1, j) = -std::conj(s) * x + c * y;
            }
        }
        for (int k = l; k < hi; ++k) {
            const double c = cs[k];
            const cplx s = sn[k];
            const int imax = std::min(k + 2, hi);
            for (int i = l; i <= imax; ++i) {
                const cplx x = h(i, k), y = h(i, k + 1);
                h(i, k) = c * x + std::conj(s) * y;
                h(i, k + 1) = -s * x + c * y;
            }
        }
        for (int k = l; k <= hi; ++k) h(k, k) += mu;
    }
    return eig;
}

}  // namespace detail

/// Eigenvalues of a general square matrix, with on-demand eigenvectors.
/// Keeps the balanced Hessenberg form and its reflectors so that each
/// eigenvector costs O(n^2).
class DenseEigen {
 public:
    explicit DenseEigen(const CMatrix& a, double deflation_tol = kDeflationTolerance) : a_(a) {
        if (!a.square() || a.rows() == 0) throw InvalidInputError("eigensolver: matrix must be square and non-empty");
        for (const auto& z : a.data())
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw InvalidInputError("eigensolver: non-finite matrix entry");
        norm_ = frobenius_norm(a);
        real_ = max_abs_imag(a) == 0.0;
        if (real_) {
            RMatrix h = real_part(a);
            scale_ = detail::balance(h);
            const auto refl = detail::hessenberg_reduce(h);
            hess_ = to_complex(h);
            reflectors_.reserve(refl.size());
            for (const auto& r : refl) {
                detail::Reflector<cplx> c{r.offset, CVector(r.v.begin(), r.v.end()), r.beta};
                reflectors_.push_back(std::move(c));
            }
            eigenvalues_ = detail::francis_qr(h, sweeps_, deflation_tol);
        } else {
            CMatrix h = a;
            scale_ = detail::balance(h);
            reflectors_ = detail::hessenberg_reduce(h);
            hess_ = h;
            eigenvalues_ = detail::complex_qr(h, sweeps_, deflation_tol);
        }
    }

    const CVector& eigenvalues() const noexcept { return eigenvalues_; }
    long iterations() const noexcept { return sweeps_; }
    bool real_input() const noexcept { return real_; }
    double norm() const noexcept { return norm_; }
    std::size_t dim() const noexcept { return a_.rows(); }

    /// Unit right eigenvector for an (approximate) eigenvalue, by inverse
    /// iteration on the Hessenberg form.
    CVector eigenvector(cplx lambda) const {
        const std::size_t n = hess_.rows();
        if (n == 1) return {cplx(1.0)};
        CMatrix m = hess_;
        for (std::size_t i = 0; i < n; ++i) m(i, i) -= lambda;
        const double tiny = DBL_EPSILON * std::max(frobenius_norm(hess_), DBL_MIN);

        std::vector<char> swapped(n, 0);
        CVector mult(n);
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (std::abs(m(k + 1, k)) > std::abs(m(k, k))) {
                for (std::size_t j = k; j < n; ++j) std::swap(m(k, j), m(k + 1, j));
                swapped[k] = 1;
            }
            if (std::abs(m(k, k)) < tiny) m(k, k) = m(k, k) == 0.0 ? cplx(tiny) : tiny * m(k, k) / std::abs(m(k, k));
            const cplx l = m(k + 1, k) / m(k, k);
            mult[k] = l;
            m(k + 1, k) = 0.0;
            if (l != 0.0)
                for (std::size_t j = k + 1; j < n; ++j) m(k + 1, j) -= l * m(k, j);
        }
        if (std::abs(m(n - 1, n - 1)) < tiny)
            m(n - 1, n - 1) = m(n - 1, n - 1) == 0.0 ? cplx(tiny) : tiny * m(n - 1, n - 1) / std::abs(m(n - 1, n - 1));

        std::mt19937_64 rng(0x5eed);
        std::uniform_real_distribution<double> uni(0.5, 1.5);
        CVector y(n);
        for (auto& v : y) v = uni(rng);

        for (int it = 0; it < 3; ++it) {
            for (std::size_t k = 0; k + 1 < n; ++k) {
                if (swapped[k]) std::swap(y[k], y[k + 1]);
                y[k + 1] -= mult[k] * y[k];
            }
            for (std::size_t ii = n; ii-- > 0;) {
                cplx s = y[ii];
                const auto row = m.row(ii);
                for (std::size_t j = ii + 1; j < n; ++j) s -= row[j] * y[j];
                y[ii] = s / row[ii];
            }
            const double nrm = norm2(y);
            for (auto& v : y) v /= nrm;
        }

        // Back to the balanced basis (x = Q y), then undo balancing.
        for (std::size_t r = reflectors_.size(); r-- > 0;) {
            const auto& ref = reflectors_[r];
            if (ref.beta == 0.0) continue;
            cplx s{};
            for (std::size_t i = 0; i < ref.v.size(); ++i) s += std::conj(ref.v[i]) * y[ref.offset + i];
            s *= ref.beta;
            for (std::size_t i = 0; i < ref.v.size(); ++i) y[ref.offset + i] -= ref.v[i] * s;
        }
        for (std::size_t i = 0; i < n; ++i) y[i] *= scale_[i];
        const double nrm = norm2(y);
        for (auto& v : y) v /= nrm;
        return y;
    }

    /// ||A v - lambda v|| against the original matrix.
    double residual(std::span<const cplx> v, cplx lambda) const {
        const auto av = a_ * v;
        double s = 0.0;
        for (std::size_t i = 0; i < av.size(); ++i) s += std::norm(av[i] - lambda * v[i]);
        return std::sqrt(s);
    }

 private:
    CMatrix a_;
    CMatrix hess_;
    std::vector<double> scale_;
    std::vector<detail::Reflector<cplx>> reflectors_;
    CVector eigenvalues_;
    long sweeps_ = 0;
    double norm_ = 0.0;
    bool real_ = false;
};

struct EigenResult {
    CVector eigenvalues;
    std::vector<double> residuals;  // ||A v - lambda v|| for unit v
    long iterations = 0;
};

/// All eigenvalues of a general square matrix with residual certificates.
/// Throws NumericalError if QR does not converge or a certificate exceeds
/// tau_resid * ||A||_F.
inline EigenResult eig_dense(const CMatrix& a, double tau_resid = kResidualTolerance) {
    const DenseEigen solver(a);
    EigenResult r;
    r.eigenvalues = solver.eigenvalues();
    r.iterations = solver.iterations();
    r.residuals.reserve(r.eigenvalues.size());
    const double bound = tau_resid * std::max(solver.norm(), DBL_MIN);
    for (const auto& lambda : r.eigenvalues) {
        const auto v = solver.eigenvector(lambda);
        const double res = solver.residual(v, lambda);
        if (!(res <= bound))
            throw NumericalError("eigenvalue residual " + std::to_string(res) + " exceeds certificate bound " +
                                     std::to_string(bound),
                                 r.iterations);
        r.residuals.push_back(res);
    }
    return r;
}

struct SymmetricEigen {
    std::vector<double> values;  // ascending
    RMatrix vectors;             // row i: unit eigenvector for values[i]; empty unless requested
};

/// Eigen-decomposition of a real symmetric matrix (symmetric to 1e-12
/// relative). Householder tridiagonalization followed by implicit QL.
inline SymmetricEigen eig_hermitian(const RMatrix& a, bool want_vectors = false) {
    if (!a.square() || a.rows() == 0) throw InvalidInputError("eig_hermitian: matrix must be square and non-empty");
    const std::size_t n = a.rows();
    const double amax = max_abs(a);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            if (!std::isfinite(a(i, j)) || !std::isfinite(a(j, i)))
                throw InvalidInputError("eig_hermitian: non-finite entry");
            if (std::abs(a(i, j) - a(j, i)) > 1e-12 * amax)
                throw InvalidInputError("eig_hermitian: matrix is not symmetric");
        }

    // w holds V^T so that every inner loop runs along a row.
    RMatrix w = a;
    std::vector<double> d(n), e(n);

    for (std::size_t j = 0; j < n; ++j) d[j] = w(j, n - 1);
    for (std::size_t i = n - 1; i > 0; --i) {
        double scale = 0.0;
        double h = 0.0;
        for (std::size_t k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (std::size_t j = 0; j < i; ++j) {
                d[j] = w(j, i - 1);
                w(j, i) = 0.0;
                w(i, j) = 0.0;
            }
        } else {
            for (std::size_t k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (std::size_t j = 0; j < i; ++j) e[j] = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                w(i, j) = f;
                g = e[j] + w(j, j) * f;
                const auto row = w.row(j);
                for (std::size_t k = j + 1; k < i; ++k) {
                    g += row[k] * d[k];
                    e[k] += row[k] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (std::size_t j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (std::size_t j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (std::size_t j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                auto row = w.row(j);
                for (std::size_t k = j; k < i; ++k) row[k] -= (f * e[k] + g * d[k]);
                d[j] = w(j, i - 1);
                w(j, i) = 0.0;
            }
        }
        d[i] = h;
    }

    if (want_vectors) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            w(i, n - 1) = w(i, i);
            w(i, i) = 1.0;
            const double h = d[i + 1];
            if (h != 0.0) {
                const auto hv = w.row(i + 1);
                for (std::size_t k = 0; k <= i; ++k) d[k] = hv[k] / h;
                for (std::size_t j = 0; j <= i; ++j) {
                    auto row = w.row(j);
                    double g = 0.0;
                    for (std::size_t k = 0; k <= i; ++k) g += hv[k] * row[k];
                    for (std::size_t k = 0; k <= i; ++k) row[k] -= g * d[k];
                }
            }
            for (std::size_t k = 0; k <= i; ++k) w(i + 1, k) = 0.0;
        }
        for (std::size_t j = 0; j < n; ++j) {
            d[j] = w(j, n - 1);
            w(j, n - 1) = 0.0;
        }
        w(n - 1, n - 1) = 1.0;
    } else {
        for (std::size_t j = 0; j < n; ++j) d[j] = w(j, j);
    }
    e[0] = 0.0;

    // Implicit QL on the tridiagonal (d, e).
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    double f = 0.0;
    double tst1 = 0.0;
    long sweeps = 0;
    const long max_sweeps = static_cast<long>(kSweepsPerDimension) * static_cast<long>(n);
    for (std::size_t l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        std::size_t m = l;
        while (m < n) {
            if (std::abs(e[m]) <= DBL_EPSILON * tst1) break;
            ++m;
        }
        if (m > l) {
            do {
                if (++sweeps > max_sweeps)
                    throw NumericalError("symmetric QL did not converge after " + std::to_string(sweeps - 1) +
                                             " sweeps",
                                         sweeps - 1);
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (std::size_t i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (std::size_t i = m; i-- > l;) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (want_vectors) {
                        auto vi = w.row(i);
                        auto vi1 = w.row(i + 1);
                        for (std::size_t k = 0; k < n; ++k) {
                            h = vi1[k];
                            vi1[k] = s * vi[k] + c * h;
                            vi[k] = c * vi[k] - s * h;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > DBL_EPSILON * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] < d[y]; });
    SymmetricEigen out;
    out.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.values[i] = d[order[i]];
    if (want_vectors) {
        out.vectors = RMatrix(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            const auto src = w.row(order[i]);
            std::copy(src.begin(), src.end(), out.vectors.row(i).begin());
        }
    }
    return out;
}

}  // namespace blochlab
