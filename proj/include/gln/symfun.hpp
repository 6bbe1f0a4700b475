// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_SYMFUN_HPP
#define GLN_SYMFUN_HPP

#include "exactnum.hpp"
#include "matrix.hpp"
#include "poly.hpp"

#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace gln {

template <class T>
inline constexpr bool is_field_v = std::is_same_v<T, Rational> || std::is_same_v<T, cplx>;

/// e_l(x); 0 for l > r.
template <class T>
T elementary(int l, const std::vector<T>& x)
{
    if (l < 0) throw std::invalid_argument("elementary: negative degree");
    if (l > static_cast<int>(x.size())) return T(0);
    std::vector<T> e(static_cast<std::size_t>(l) + 1, T(0));
    e[0] = T(1);
    for (const auto& xi : x)
        for (int k = l; k >= 1; --k) e[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(k)] + xi * e[static_cast<std::size_t>(k - 1)];
    return e[static_cast<std::size_t>(l)];
}

/// h_l(x); 0 for l < 0 (used by the H matrix).
template <class T>
T complete(int l, const std::vector<T>& x)
{
    if (l < 0) return T(0);
    std::vector<T> h(static_cast<std::size_t>(l) + 1, T(0));
    h[0] = T(1);
    // h^{(k)}_j = h^{(k-1)}_j + x_k h^{(k)}_{j-1}
    for (const auto& xi : x)
        for (int j = 1; j <= l; ++j) h[static_cast<std::size_t>(j)] = h[static_cast<std::size_t>(j)] + xi * h[static_cast<std::size_t>(j - 1)];
    return h[static_cast<std::size_t>(l)];
}

/// x with the i-th entry removed.
template <class T>
std::vector<T> omit(const std::vector<T>& x, std::size_t i)
{
    std::vector<T> y;
    y.reserve(x.size());
    for (std::size_t k = 0; k < x.size(); ++k)
        if (k != i) y.push_back(x[k]);
    return y;
}

/// D(x) = prod_{i<j} (x_j - x_i).
template <class T>
T vandermonde_det(const std::vector<T>& x)
{
    T d = T(1);
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = i + 1; j < x.size(); ++j) d = d * (x[j] - x[i]);
    return d;
}

/// The r symbolic variables T_1..T_r (plus `extra` trailing slots).
inline std::vector<RatPoly> poly_variables(std::size_t r, std::size_t extra = 0)
{
    std::vector<RatPoly> v;
    for (std::size_t i = 0; i < r; ++i) v.push_back(RatPoly::variable(r + extra, i));
    return v;
}

template <class T>
struct VandermondeFactorization
{
    Matrix<T> V, E, H;
    std::optional<Matrix<T>> V_inverse; ///< closed form; empty when entries repeat or T is not a field
};

/// V = (x_i^{j-1}), E = (e_{j-1}(x^_i)), H = ((-1)^{i-1} h_{j-i}(x)) and the closed-form inverse of V.
template <class T>
VandermondeFactorization<T> vandermonde_factorization(const std::vector<T>& x)
{
    std::size_t r = x.size();
    VandermondeFactorization<T> f{Matrix<T>(r, r), Matrix<T>(r, r), Matrix<T>(r, r), std::nullopt};
    for (std::size_t i = 0; i < r; ++i) {
        T pw = T(1);
        for (std::size_t j = 0; j < r; ++j) {
            f.V(i, j) = pw;
            pw = pw * x[i];
        }
        auto xh = omit(x, i);
        for (std::size_t j = 0; j < r; ++j) f.E(i, j) = elementary(static_cast<int>(j), xh);
        for (std::size_t j = 0; j < r; ++j) {
            T h = complete(static_cast<int>(j) - static_cast<int>(i), x);
            f.H(i, j) = (i % 2 == 0) ? h : T(-h);
        }
    }
    if constexpr (is_field_v<T>) {
        bool regular = true;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j)
                if (is_zero(T(x[i] - x[j]))) regular = false;
        if (regular) {
            Matrix<T> inv(r, r);
            for (std::size_t j = 0; j < r; ++j) {
                T den = T(1);
                for (std::size_t a = 0; a < r; ++a)
                    if (a != j) den = den * (x[j] - x[a]);
                auto xh = omit(x, j);
                for (std::size_t i = 0; i < r; ++i) {
                    T e = elementary(static_cast<int>(r - 1 - i), xh);
                    if ((r - 1 - i) % 2 == 1) e = -e;
                    inv(i, j) = e / den;
                }
            }
            f.V_inverse = std::move(inv);
        }
    }
    return f;
}

/// Symbolic V^{-1} with the common denominator cleared: V^{-1} = N / D(T).
struct ClearedInverse
{
    Matrix<RatPoly> numerator;
    RatPoly denominator;
};

inline ClearedInverse vandermonde_inverse_cleared(std::size_t r)
{
    auto T = poly_variables(r);
    Matrix<RatPoly> N(r, r, RatPoly::zero(r));
    for (std::size_t j = 0; j < r; ++j) {
        // D(T) / prod_{a != j}(T_j - T_a) = (-1)^{r-1-j} D(T^_j)   (0-based j)
        RatPoly cof = vandermonde_det(omit(T, j));
        if ((r - 1 - j) % 2 == 1) cof = -cof;
        auto th = omit(T, j);
        for (std::size_t i = 0; i < r; ++i) {
            RatPoly e = elementary(static_cast<int>(r - 1 - i), th);
            if ((r - 1 - i) % 2 == 1) e = -e;
            N(i, j) = e * cof;
        }
    }
    return {N, vandermonde_det(T)};
}

// ---------------------------------------------------------------------------
// Schur polynomials

/// Memoised branching-rule evaluator of s_lambda(x_1..x_k), lambda possibly with negative parts.
/// Every term of the branching rule is a monomial, so no cancellation happens for positive data.
template <class T>
class SchurEvaluator
{
public:
    explicit SchurEvaluator(std::vector<T> x) : x_(std::move(x)) {}
    /// For non-field coefficient rings (Laurent polynomials) pass (x_1..x_k)^{-1} explicitly.
    SchurEvaluator(std::vector<T> x, T det_inverse) : x_(std::move(x)), det_inv_(std::move(det_inverse)) {}

    std::size_t nvars() const { return x_.size(); }

    /// s_lambda(x); zero unless lambda is non-increasing. Negative parts need invertible x.
    T operator()(const std::vector<int>& lambda)
    {
        if (lambda.size() != x_.size()) throw std::invalid_argument("schur: length mismatch");
        for (std::size_t i = 0; i + 1 < lambda.size(); ++i)
            if (lambda[i] < lambda[i + 1]) return T(0);
        if (lambda.empty()) return T(1);
        int shift = lambda.back();
        std::vector<int> mu = lambda;
        for (auto& v : mu) v -= shift;
        T s = eval(mu);
        if (shift > 0) s = s * power(det_x(), shift);
        if (shift < 0) s = s * (det_inv_ ? power(*det_inv_, -shift) : power(det_x(), shift));
        return s;
    }

private:
    std::vector<T> x_;
    std::optional<T> det_inv_;
    std::map<std::vector<int>, T> memo_; // key: partition of length k, values over x_1..x_k

    T det_x() const
    {
        T d = T(1);
        for (const auto& v : x_) d = d * v;
        return d;
    }

    static T power(const T& b, int e)
    {
        if (e < 0) {
            if constexpr (is_field_v<T>) return power(T(T(1) / b), -e);
            else throw std::domain_error("schur: negative power needs a field");
        }
        T r = T(1), base = b;
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    T eval(const std::vector<int>& mu)
    {
        std::size_t k = mu.size();
        if (k == 1) return power(x_[0], mu[0]);
        auto it = memo_.find(mu);
        if (it != memo_.end()) return it->second;
        if (mu.back() > 0) {
            // factor out (x_1..x_k)^{mu_k}
            std::vector<int> nu = mu;
            for (auto& v : nu) v -= mu.back();
            T d = T(1);
            for (std::size_t i = 0; i < k; ++i) d = d * x_[i];
            T r = power(d, mu.back()) * eval(nu);
            memo_.emplace(mu, r);
            return r;
        }
        // sum over nu interlacing mu: mu_i >= nu_i >= mu_{i+1}
        int total = 0;
        for (int v : mu) total += v;
        std::vector<int> nu(k - 1);
        T acc = T(0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int partial) {
            if (i == k - 1) {
                acc = acc + eval(nu) * power(x_[k - 1], total - partial);
                return;
            }
            for (int v = mu[i + 1]; v <= mu[i]; ++v) {
                nu[i] = v;
                rec(i + 1, partial + v);
            }
        };
        rec(0, 0);
        memo_.emplace(mu, acc);
        return acc;
    }
};

/// One-shot Schur polynomial s_lambda(x).
template <class T>
T schur(const std::vector<int>& lambda, const std::vector<T>& x)
{
    SchurEvaluator<T> s(x);
    return s(lambda);
}

// ---------------------------------------------------------------------------
// Companion-matrix forms of D(Z,T) and P_m(T)

/// Matrix of multiplication by X on C[X]/(prod (X - x_a)) in the basis 1..X^{n-1}.
/// Equals V(x)^{-1} diag(x) V(x) for regular x and stays polynomial in the e_k(x).
inline CMatrix companion(const std::vector<cplx>& x)
{
    std::size_t n = x.size();
    CMatrix C(n, n);
    for (std::size_t j = 0; j + 1 < n; ++j) C(j + 1, j) = 1.0;
    // X^n = sum_k (-1)^{n-k-1} e_{n-k}(x) X^k
    for (std::size_t k = 0; k < n; ++k) {
        cplx e = elementary(static_cast<int>(n - k), x);
        C(k, n - 1) = ((n - k) % 2 == 1) ? e : -e;
    }
    return C;
}

/// P_m(x) = V^{-1} diag(x^m) V.
inline CMatrix p_matrix(int m, const std::vector<cplx>& x)
{
    CMatrix C = companion(x), P = CMatrix::identity(x.size());
    for (int i = 0; i < m; ++i) P = P * C;
    return P;
}

/// D(z,x) = V^{-1} diag(Q(z x_a; x)^{-1}) V with Q(Z;T) = prod_j (1 - Z/T_j).
inline CMatrix d_matrix(cplx z, const std::vector<cplx>& x)
{
    std::size_t n = x.size();
    CMatrix C = companion(x), A = CMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j) {
        CMatrix f = CMatrix::identity(n);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) f(a, b) -= z * C(a, b) / x[j];
        A = A * f;
    }
    return complex_inverse(A);
}

// ---------------------------------------------------------------------------
// D*(Z,T)

/// Polynomial matrix D*(Z,T) in the variables T_1..T_n, Z (Z is variable index n).
struct DStar
{
    std::size_t n;
    Matrix<RatPoly> entries;
    int z_degree_bound; ///< n(n-1)
};

/// D*(Z,T) = e_n(T)^{n-1} prod_{i,j}(1 - Z T_i/T_j) D(Z,T), built by exact division by D(T).
inline DStar d_star_symbolic(std::size_t n)
{
    std::size_t nv = n + 1;
    auto T = poly_variables(n, 1);
    RatPoly Z = RatPoly::variable(nv, n);
    Matrix<RatPoly> M(n, n, RatPoly::zero(nv));
    for (std::size_t a = 0; a < n; ++a) {
        auto th = omit(T, a);
        RatPoly common(nv, Rational(1));
        for (std::size_t i = 0; i < n; ++i) {
            if (i == a) continue;
            for (std::size_t j = 0; j < n; ++j) common = common * (T[j] - Z * T[i]);
        }
        common = common * vandermonde_det(th);
        if ((n - 1 - a) % 2 == 1) common = -common; // (-1)^{n-alpha}, alpha = a+1
        for (std::size_t k = 0; k < n; ++k) {
            RatPoly e = elementary(static_cast<int>(n - 1 - k), th);
            if ((n - 1 - k) % 2 == 1) e = -e;
            RatPoly ek = e * common;
            RatPoly tp(nv, Rational(1));
            for (std::size_t l = 0; l < n; ++l) {
                M(k, l) = M(k, l) + ek * tp;
                tp = tp * T[a];
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            RatPoly q = M(k, l);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j) q = q.divide_by_difference(j, i);
            M(k, l) = q;
        }
    return {n, M, static_cast<int>(n * (n - 1))};
}

/// Cached symbolic D* for size n.
inline const DStar& d_star_cached(std::size_t n)
{
    static std::mutex mu;
    static std::map<std::size_t, DStar> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, d_star_symbolic(n)).first;
    return it->second;
}

/// Numeric D*(z, x); x may be non-regular (polynomial specialisation).
inline CMatrix d_star(cplx z, const std::vector<cplx>& x)
{
    cplx en = elementary(static_cast<int>(x.size()), x);
    if (std::abs(en) == 0.0) throw std::domain_error("d_star: e_n(T) = 0");
    const DStar& ds = d_star_cached(x.size());
    std::vector<cplx> args = x;
    args.push_back(z);
    CMatrix out(x.size(), x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        for (std::size_t j = 0; j < x.size(); ++j) out(i, j) = eval_complex(ds.entries(i, j), args);
    return out;
}

/// Clearing factor e_n(x)^{n-1} prod_{i,j}(1 - z x_i/x_j).
inline cplx d_star_clearing_factor(cplx z, const std::vector<cplx>& x)
{
    std::size_t n = x.size();
    cplx f = std::pow(elementary(static_cast<int>(n), x), static_cast<double>(n - 1));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) f *= 1.0 - z * x[i] / x[j];
    return f;
}

// ---------------------------------------------------------------------------
// Power series of D(z,x)

struct PowerSeriesReport
{
    int order;
    double max_error;               ///< entrywise max |truncated - D(z,x)|
    std::vector<double> coefficient_max; ///< max_ij |P_m(x)_ij|, m = 0..order
};

/// True when (z,x) lies in the convergence set: |z| < min |x_i conj(x_j)|^{-1}, e_n(x) != 0
/// and {1/x_j} = {conj(x_j)} as multisets (to tol).
inline bool in_convergence_set(cplx z, const std::vector<cplx>& x, double tol = 1e-9)
{
    if (std::abs(elementary(static_cast<int>(x.size()), x)) == 0.0) return false;
    double mx = 0;
    for (const auto& a : x)
        for (const auto& b : x) mx = std::max(mx, std::abs(a * std::conj(b)));
    if (!(std::abs(z) * mx < 1.0)) return false;
    std::vector<bool> used(x.size(), false);
    for (const auto& a : x) {
        cplx inv = 1.0 / a;
        bool found = false;
        for (std::size_t j = 0; j < x.size(); ++j)
            if (!used[j] && std::abs(std::conj(x[j]) - inv) <= tol) {
                used[j] = true;
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

/// Compares sum_{m<=M} h_m(conj x) P_m(x) z^m with D(z,x).
inline PowerSeriesReport power_series_check(cplx z, const std::vector<cplx>& x, int M)
{
    if (!in_convergence_set(z, x)) throw std::domain_error("power_series_check: (z,x) outside the convergence set");
    std::size_t n = x.size();
    std::vector<cplx> xb;
    for (const auto& a : x) xb.push_back(std::conj(a));
    CMatrix C = companion(x), P = CMatrix::identity(n), S(n, n);
    PowerSeriesReport rep{M, 0.0, {}};
    cplx zm = 1.0;
    for (int m = 0; m <= M; ++m) {
        cplx h = complete(m, xb);
        double cm = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                S(i, j) += h * zm * P(i, j);
                cm = std::max(cm, std::abs(P(i, j)));
            }
        rep.coefficient_max.push_back(cm);
        P = P * C;
        zm *= z;
    }
    CMatrix D = d_matrix(z, x);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) rep.max_error = std::max(rep.max_error, std::abs(S(i, j) - D(i, j)));
    return rep;
}

// ---------------------------------------------------------------------------
// Residue identity

struct ResidueReport
{
    cplx lhs;        ///< contour integral / (2 pi i)^{n-1}, by quadrature
    cplx rhs;        ///< residue sum / (2 pi i)^{n-1}
    double error;    ///< |lhs - rhs|
    double quadrature_drift; ///< |lhs(N) - lhs(N/2)|, flags non-convergence
    bool equal;
};

/// Contour integral over the unit torus of F(z)/prod_{j,a}(z_j - x_a), (n-1)-fold, against the residue sum.
inline ResidueReport residue_identity_check(const std::function<cplx(const std::vector<cplx>&)>& F,
                                            const std::vector<cplx>& x, int nodes = 64, double tol = 1e-8)
{
    std::size_t n = x.size();
    if (n < 2) throw std::invalid_argument("residue_identity_check: need n >= 2");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(std::abs(x[i]) < 1.0)) throw std::invalid_argument("residue_identity_check: point outside the unit disc");
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(x[i] - x[j]) < 1e-12) throw std::invalid_argument("residue_identity_check: x is not regular");
    }
    std::size_t d = n - 1;
    double fact = 1;
    for (std::size_t k = 2; k <= d; ++k) fact *= static_cast<double>(k);

    auto quad = [&](int N) {
        std::vector<cplx> roots(static_cast<std::size_t>(N));
        for (int k = 0; k < N; ++k) roots[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * std::numbers::pi * k / N);
        std::vector<std::size_t> idx(d, 0);
        std::vector<cplx> z(d);
        cplx sum = 0, comp = 0; // Kahan
        while (true) {
            cplx w = 1.0;
            for (std::size_t j = 0; j < d; ++j) {
                z[j] = roots[idx[j]];
                w *= z[j];
                for (const auto& xa : x) w /= (z[j] - xa);
            }
            cplx term = F(z) * w - comp;
            cplx t = sum + term;
            comp = (t - sum) - term;
            sum = t;
            std::size_t j = 0;
            while (j < d && ++idx[j] == static_cast<std::size_t>(N)) idx[j++] = 0;
            if (j == d) break;
        }
        return sum / std::pow(static_cast<double>(N), static_cast<double>(d)) / fact;
    };

    ResidueReport r{};
    r.lhs = quad(nodes);
    r.quadrature_drift = std::abs(r.lhs - quad(nodes / 2));
    double sign = ((d * (d - 1) / 2) % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t a = 0; a < n; ++a) {
        auto xh = omit(x, a);
        cplx den = vandermonde_det(xh);
        den *= den;
        for (std::size_t i = 0; i < n; ++i)
            if (i != a) den *= (x[i] - x[a]);
        r.rhs += sign * F(xh) / den;
    }
    r.error = std::abs(r.lhs - r.rhs);
    r.equal = r.error <= tol;
    return r;
}

} // namespace gln

#endif // GLN_SYMFUN_HPP
