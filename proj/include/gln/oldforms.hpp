// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_OLDFORMS_HPP
#define GLN_OLDFORMS_HPP

#include "exactnum.hpp"
#include "matrix.hpp"
#include "padiclinalg.hpp"
#include "poly.hpp"
#include "symfun.hpp"
#include "weylcoset.hpp"
#include "whittaker.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace gln {

// ---------------------------------------------------------------------------
// Column Hermite form over Z_(p)

/// The element of Z[1/p] in [0, p^v) congruent to x modulo p^v Z_(p).
inline Rational reduce_mod_pv(const Rational& x, long p, long v)
{
    auto vx = valuation(x, p);
    if (!vx || *vx >= v) return 0;
    long k = std::max(0L, -*vx);
    Rational y = x * rpow(p, k); // p-integral
    Integer mod = ipow(p, k + v);
    Integer den = y.get_den(), inv;
    mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
    Integer a = (y.get_num() * inv) % mod;
    if (a < 0) a += mod;
    return Rational(a) / rpow(p, k);
}

/// Canonical representative of A GL_m(Z_(p)): upper triangular, diagonal p^{v_i},
/// entry (i,j), j > i, reduced into [0, p^{v_i}).
inline RatMatrix column_hermite(const RatMatrix& A, long p)
{
    require_prime(p);
    std::size_t m = A.rows();
    if (A.cols() != m || determinant(A) == 0) throw std::invalid_argument("column_hermite: need an invertible square matrix");
    RatMatrix B = A;
    auto swap_cols = [&](std::size_t a, std::size_t b) {
        for (std::size_t r = 0; r < m; ++r) std::swap(B(r, a), B(r, b));
    };
    std::vector<long> v(m);
    for (std::size_t ii = m; ii-- > 0;) {
        std::size_t piv = ii;
        std::optional<long> best;
        for (std::size_t c = 0; c <= ii; ++c) {
            auto vc = valuation(B(ii, c), p);
            if (vc && (!best || *vc < *best)) {
                best = vc;
                piv = c;
            }
        }
        swap_cols(piv, ii);
        for (std::size_t c = 0; c < ii; ++c) {
            if (B(ii, c) == 0) continue;
            Rational f = B(ii, c) / B(ii, ii);
            for (std::size_t r = 0; r < m; ++r) B(r, c) -= f * B(r, ii);
        }
        Rational s = rpow(p, *best) / B(ii, ii);
        for (std::size_t r = 0; r < m; ++r) B(r, ii) *= s;
        v[ii] = *best;
    }
    for (std::size_t ii = m; ii-- > 0;)
        for (std::size_t j = ii + 1; j < m; ++j) {
            Rational q = (B(ii, j) - reduce_mod_pv(B(ii, j), p, v[ii])) / B(ii, ii);
            if (q == 0) continue;
            for (std::size_t r = 0; r <= ii; ++r) B(r, j) -= q * B(r, ii);
        }
    return B;
}

// ---------------------------------------------------------------------------
// Hecke cosets K diag(p 1_j, 1_{m-j}) K / K

/// bK: X_j = disjoint union of b K (column Hermite forms).
/// Kb: X_j = disjoint union of K b (row Hermite forms, entries reduced mod the column's diagonal).
enum class CosetSide { bK, Kb };

struct HeckeCosetSet
{
    int m = 0, j = 0;
    long p = 2;
    CosetSide side = CosetSide::bK;
    std::vector<RatMatrix> representatives;
};

/// Gaussian binomial [m choose j]_p.
inline Integer gaussian_binomial(int m, int j, long p)
{
    if (j < 0 || j > m) return 0;
    Integer num = 1, den = 1;
    for (int i = 0; i < j; ++i) {
        num *= ipow(p, m - i) - 1;
        den *= ipow(p, i + 1) - 1;
    }
    return num / den;
}

/// Hermite-form enumeration (upper triangular, diagonal in {1,p}, entries reduced mod the
/// diagonal entry of their row for bK or of their column for Kb), filtered by Smith exponents
/// in {0,1} with exactly j ones.
inline HeckeCosetSet hecke_cosets(int m, int j, long p, CosetSide side = CosetSide::bK)
{
    require_prime(p);
    if (m < 1 || j < 0 || j > m) throw std::invalid_argument("hecke_cosets: need 0 <= j <= m, m >= 1");
    HeckeCosetSet out{m, j, p, side, {}};
    auto M = static_cast<std::size_t>(m);
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
        if (std::popcount(mask) != j) continue;
        // free slots above the diagonal, in rows (bK) or columns (Kb) whose diagonal is p
        std::vector<std::pair<std::size_t, std::size_t>> slots;
        for (std::size_t i = 0; i < M; ++i)
            for (std::size_t c = i + 1; c < M; ++c) {
                std::size_t d = side == CosetSide::bK ? i : c;
                if (mask & (1u << d)) slots.emplace_back(i, c);
            }
        std::vector<long> digits(slots.size(), 0);
        while (true) {
            RatMatrix b = RatMatrix::identity(M);
            for (std::size_t i = 0; i < M; ++i)
                if (mask & (1u << i)) b(i, i) = p;
            for (std::size_t s = 0; s < slots.size(); ++s) b(slots[s].first, slots[s].second) = digits[s];
            auto d = smith_at_p(b, p);
            bool ok = std::all_of(d.begin(), d.end(), [](long e) { return e == 0 || e == 1; });
            if (ok) out.representatives.push_back(b);
            std::size_t s = 0;
            while (s < digits.size() && ++digits[s] == p) digits[s++] = 0;
            if (s == digits.size()) break;
        }
    }
    return out;
}

/// a K = b K.
inline bool same_right_coset(const RatMatrix& a, const RatMatrix& b, long p)
{
    return in_GL_Zp(inverse(a) * b, p);
}

/// K a = K b.
inline bool same_left_coset(const RatMatrix& a, const RatMatrix& b, long p)
{
    return in_GL_Zp(a * inverse(b), p);
}

// ---------------------------------------------------------------------------
// Satake transform of phi_j = p^{-j(m-j)/2} char(X_j)

/// Laurent polynomial in X_i = p^{-nu_i}: sum over cosets of p^{-j(m-j)/2} delta^{1/2}(t_b) X^{a_b}.
/// The total power of p is integral, so the coefficients are rational.
inline RatPoly satake_of_phi_poly(int j, int m, long p)
{
    auto cosets = hecke_cosets(m, j, p);
    RatPoly s = RatPoly::zero(static_cast<std::size_t>(m));
    for (const auto& b : cosets.representatives) {
        auto d = iwasawa_qp(b, p);
        long twice = -static_cast<long>(j) * (m - j);
        Exponent e;
        for (int i = 1; i <= m; ++i) {
            long a = d.exponents[static_cast<std::size_t>(i - 1)];
            twice -= a * (m + 1 - 2 * i);
            e.push_back(static_cast<int>(a));
        }
        if (twice % 2 != 0) throw std::logic_error("satake_of_phi_poly: odd half power");
        s += RatPoly::monomial(e, rpow(p, twice / 2));
    }
    return s;
}

inline cplx satake_of_phi(int j, const CVector& nu, int m, long p)
{
    if (static_cast<int>(nu.size()) != m) throw std::invalid_argument("satake_of_phi: nu must have m entries");
    CVector x;
    for (const auto& v : nu) x.push_back(p_power(p, v));
    return eval_complex(satake_of_phi_poly(j, m, p), x);
}

// ---------------------------------------------------------------------------
// W^{(j)} = p^{-j(n-1-j)/2} p^{-j/2} sum_b W0(g iota(b^{-1})), b over K\X_j, so that
// the K factor of h = k b lands on the right of b^{-1}

namespace detail {

inline HalfPowerLaurent oldform_scale(int j, int m, long p)
{
    return HalfPowerLaurent::half_power(p, -static_cast<long>(j) * (m - j) - j);
}

} // namespace detail

inline cplx W_j_value(int j, const SatakeParam& t, const RatMatrix& g)
{
    int n = t.n(), m = n - 1;
    if (static_cast<int>(g.rows()) != n) throw std::invalid_argument("W_j_value: size mismatch");
    if (j == 0) return whittaker_at(t.t, g, t.p);
    cplx s = 0;
    for (const auto& b : hecke_cosets(m, j, t.p, CosetSide::Kb).representatives) s += whittaker_at(t.t, g * iota(inverse(b)), t.p);
    return detail::oldform_scale(j, m, t.p).to_complex() * s;
}

inline HalfPowerLaurent W_j_value_exact(int j, const std::vector<Rational>& t, const RatMatrix& g, long p)
{
    int n = static_cast<int>(t.size()), m = n - 1;
    if (static_cast<int>(g.rows()) != n) throw std::invalid_argument("W_j_value_exact: size mismatch");
    if (j == 0) return whittaker_at_exact(t, g, p);
    HalfPowerLaurent s;
    for (const auto& b : hecke_cosets(m, j, p, CosetSide::Kb).representatives) s += whittaker_at_exact(t, g * iota(inverse(b)), p);
    return detail::oldform_scale(j, m, p) * s;
}

/// W^{(j)}(iota(p^lambda)) for all j, for long lattice sums. p^lambda b^{-1} is already
/// upper triangular, so no Iwasawa step is needed.
class OldformTorusEvaluator
{
public:
    explicit OldformTorusEvaluator(const SatakeParam& t) : p_(t.p), n_(t.n()), cs_(t.t, t.p)
    {
        int m = n_ - 1;
        for (int j = 0; j <= m; ++j) {
            std::vector<Coset> cs;
            for (const auto& b : hecke_cosets(m, j, p_, CosetSide::Kb).representatives) {
                Coset c;
                RatMatrix bi = inverse(b);
                for (int i = 0; i < m; ++i) {
                    auto v = valuation(b(static_cast<std::size_t>(i), static_cast<std::size_t>(i)), p_);
                    c.a.push_back(static_cast<int>(*v));
                }
                for (int i = 0; i + 1 < m; ++i) c.super.push_back(bi(static_cast<std::size_t>(i), static_cast<std::size_t>(i + 1)));
                cs.push_back(std::move(c));
            }
            cosets_.push_back(std::move(cs));
            scale_.push_back(detail::oldform_scale(j, m, p_).to_complex());
        }
    }

    int n() const { return n_; }

    cplx operator()(int j, const std::vector<int>& lambda)
    {
        int m = n_ - 1;
        if (static_cast<int>(lambda.size()) != m) throw std::invalid_argument("OldformTorusEvaluator: lambda must have n-1 entries");
        cplx s = 0;
        for (const auto& c : cosets_.at(static_cast<std::size_t>(j))) {
            std::vector<int> mu(static_cast<std::size_t>(n_), 0);
            for (int i = 0; i < m; ++i) mu[static_cast<std::size_t>(i)] = lambda[static_cast<std::size_t>(i)] - c.a[static_cast<std::size_t>(i)];
            if (!is_dominant(mu)) continue;
            // u_{i,i+1} = p^{lambda_i} (b^{-1})_{i,i+1} / p^{lambda_{i+1} - a_{i+1}}
            Rational x = 0;
            for (int i = 0; i + 1 < m; ++i) {
                const Rational& e = c.super[static_cast<std::size_t>(i)];
                if (e != 0) x += e * rpow(p_, mu[static_cast<std::size_t>(i)] + c.a[static_cast<std::size_t>(i)] - mu[static_cast<std::size_t>(i + 1)]);
            }
            cplx w = cs_(mu);
            if (w != cplx(0)) s += psi_value(x) * w;
        }
        return scale_[static_cast<std::size_t>(j)] * s;
    }

private:
    struct Coset
    {
        std::vector<int> a;
        std::vector<Rational> super;
    };
    long p_;
    int n_;
    CSEvaluator cs_;
    std::vector<std::vector<Coset>> cosets_;
    std::vector<cplx> scale_;

    cplx psi_value(const Rational& x) const
    {
        if (x == 0) return 1;
        auto [a, k] = frac_p(x, p_);
        if (k == 0) return 1;
        double ang = 2 * std::numbers::pi * Rational(Rational(a) / rpow(p_, k)).get_d();
        return {std::cos(ang), std::sin(ang)};
    }
};

// ---------------------------------------------------------------------------
// F and G matrices

/// Rows 1..n-1 zero; row n, column j: p^{-(n-j)/2} e_{n-j}(p^{-nu}).
inline CMatrix F_matrix(const CVector& nu, const SatakeParam& t)
{
    int n = t.n();
    if (static_cast<int>(nu.size()) != n - 1) throw std::invalid_argument("F_matrix: nu must have n-1 entries");
    for (const auto& v : nu)
        if (v.real() < 0) throw std::domain_error("F_matrix: Re nu_j must be >= 0");
    CVector x;
    for (const auto& v : nu) x.push_back(p_power(t.p, v));
    CMatrix F(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j)
        F(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(j - 1)) = std::pow(static_cast<double>(t.p), -(n - j) / 2.0) * elementary(n - j, x);
    return F;
}

namespace detail {

/// Visit lambda in Z^m with 0 <= lambda_m <= Lambda and -1 <= lambda_i - lambda_{i+1} <= Lambda.
inline void for_each_near_dominant(int m, int Lambda, const std::function<void(const std::vector<int>&)>& f)
{
    std::vector<int> lam(static_cast<std::size_t>(m));
    std::function<void(int)> rec = [&](int i) {
        if (i < 0) {
            f(lam);
            return;
        }
        for (int g = -1; g <= Lambda; ++g) {
            lam[static_cast<std::size_t>(i)] = lam[static_cast<std::size_t>(i + 1)] + g;
            rec(i - 1);
        }
    };
    for (int last = 0; last <= Lambda; ++last) {
        lam[static_cast<std::size_t>(m - 1)] = last;
        rec(m - 2);
    }
}

inline double delta_B0_inverse(const std::vector<int>& lam, long p)
{
    int m = static_cast<int>(lam.size());
    double e = 0;
    for (int j = 1; j <= m; ++j) e += (m + 1 - 2 * j) * lam[static_cast<std::size_t>(j - 1)];
    return std::pow(static_cast<double>(p), e);
}

/// Gamma_{ab} = <W^{(a)}|W^{(b)}>, a,b = 0..n-1, truncated at Lambda.
inline CMatrix oldform_gram(const SatakeParam& t, int Lambda)
{
    int n = t.n(), m = n - 1;
    OldformTorusEvaluator W(t);
    auto N = static_cast<std::size_t>(n);
    CMatrix G(N, N);
    CVector w(N);
    for_each_near_dominant(m, Lambda, [&](const std::vector<int>& lam) {
        bool any = false;
        for (int a = 0; a < n; ++a) {
            w[static_cast<std::size_t>(a)] = W(a, lam);
            any = any || w[static_cast<std::size_t>(a)] != cplx(0);
        }
        if (!any) return;
        double d = delta_B0_inverse(lam, t.p);
        for (std::size_t a = 0; a < N; ++a)
            for (std::size_t b = 0; b < N; ++b) G(a, b) += w[a] * std::conj(w[b]) * d;
    });
    cplx z = zeta_p(cplx(n), t.p);
    for (std::size_t a = 0; a < N; ++a)
        for (std::size_t b = 0; b < N; ++b) G(a, b) *= z;
    return G;
}

/// Z(z, W0_{G0}(nu) x conj W^{(j)}) for j = 0..n-1, truncated at Lambda.
inline CVector oldform_zeta(cplx z, const CVector& nu, const SatakeParam& t, int Lambda)
{
    int n = t.n(), m = n - 1;
    if (static_cast<int>(nu.size()) != m) throw std::invalid_argument("oldform_zeta: nu must have n-1 entries");
    OldformTorusEvaluator W(t);
    CSEvaluator w0(SatakeParam::from_nu(t.p, nu).t, t.p);
    double lp = std::log(static_cast<double>(t.p));
    CVector out(static_cast<std::size_t>(n), cplx(0));
    for_each_truncated_dominant(m, Lambda, 0, [&](const std::vector<int>& lam) {
        double detv = 0;
        for (int v : lam) detv += v;
        cplx a = w0(lam) * std::exp(-(z - 0.5) * detv * lp) * delta_B0_inverse(lam, t.p);
        for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] += a * std::conj(W(j, lam));
    });
    return out;
}

inline cplx L_half_product(const CVector& nu, const SatakeParam& t)
{
    SatakeParam tbar(t.p, t.conjugate());
    cplx r = 1;
    for (const auto& v : nu) r *= local_L(0.5 + v, tbar);
    return r;
}

} // namespace detail

/// Column-wise check of F: row n, column j against the truncated zeta integral of
/// conj W^{(n-j)} divided by prod L(1/2 + nu_i, conj t).
inline std::vector<TruncatedResult> F_column_check(const CVector& nu, const SatakeParam& t, int Lambda)
{
    if (Lambda < 2) throw std::invalid_argument("F_column_check: Lambda must be at least 2");
    CMatrix F = F_matrix(nu, t);
    int n = t.n();
    cplx L = detail::L_half_product(nu, t);
    CVector full = detail::oldform_zeta(0.5, nu, t, Lambda), half = detail::oldform_zeta(0.5, nu, t, Lambda / 2);
    std::vector<TruncatedResult> out;
    for (int j = 1; j <= n; ++j) {
        auto k = static_cast<std::size_t>(n - j);
        out.push_back(detail::finish(full[k] / L, half[k] / L, F(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(j - 1))));
    }
    return out;
}

/// H(x) = ((-1)^{i-1} h_{j-i}(x)).
inline CMatrix H_matrix(const CVector& x)
{
    std::size_t n = x.size();
    CMatrix H(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            cplx h = complete(static_cast<int>(j - i), x);
            H(i, j) = (i % 2 == 0) ? h : -h;
        }
    return H;
}

/// R(z) = diag(z^{n-i}).
inline CMatrix R_matrix(cplx z, std::size_t n)
{
    CMatrix R(n, n);
    for (std::size_t i = 0; i < n; ++i) R(i, i) = std::pow(z, static_cast<double>(n - 1 - i));
    return R;
}

/// (1 - p^{-n}) (-1)^{n-1} H(t) D*(p^{-1}, t) R(-p), the transpose of G^{-1}.
inline CMatrix G_inverse_transpose(const SatakeParam& t)
{
    int n = t.n();
    double p = static_cast<double>(t.p);
    CMatrix M = H_matrix(t.t) * d_star(1.0 / p, t.t) * R_matrix(-p, t.t.size());
    double c = (1 - std::pow(p, -n)) * ((n - 1) % 2 == 0 ? 1.0 : -1.0);
    for (std::size_t i = 0; i < M.rows(); ++i)
        for (std::size_t j = 0; j < M.cols(); ++j) M(i, j) *= c;
    return M;
}

enum class GMode { closed, oracle };

/// G_{ij} = <W^{(n-i)}|W^{(n-j)}>. Closed mode inverts the polynomial form; oracle mode
/// sums the truncated mirabolic inner products.
inline CMatrix G_matrix(const SatakeParam& t, GMode mode, int Lambda = 30)
{
    if (!t.unitary_generic) throw std::invalid_argument("G_matrix: parameter is not unitary generic");
    if (!t.trivial_central) throw std::invalid_argument("G_matrix: central character is not trivial");
    std::size_t n = t.t.size();
    if (mode == GMode::closed) {
        CMatrix M = G_inverse_transpose(t);
        double cond = condition_number(M);
        if (!(cond < 1e12))
            throw std::domain_error("G_matrix: closed form numerically singular (condition " + std::to_string(cond) + ")");
        return complex_inverse(M).transpose();
    }
    if (Lambda < 1) throw std::invalid_argument("G_matrix: Lambda must be positive");
    CMatrix g = detail::oldform_gram(t, Lambda), G(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) G(i, j) = g(n - 1 - i, n - 1 - j);
    return G;
}

// ---------------------------------------------------------------------------
// Local period at K_1(p)

struct PeriodReport
{
    CVector nu;
    SatakeParam t;
    std::optional<cplx> direct;
    cplx trace, closed;
    std::string direct_skipped; ///< reason when direct is empty
    double gram_condition = 0;
    double direct_trace = 0, direct_closed = 0, trace_closed = 0; ///< scaled discrepancies
    double bound_ratio = 0; ///< |closed| p^{1+(n-1)/(n^2+1)}
};

inline cplx period_trace(const CVector& nu, const SatakeParam& t)
{
    int n = t.n();
    CMatrix Ginv = G_inverse_transpose(t).transpose(), F = F_matrix(nu, t), P = Ginv * F;
    cplx tr = 0;
    for (int i = 0; i < n; ++i) tr += P(static_cast<std::size_t>(i), static_cast<std::size_t>(i));
    cplx L = rs_L(1.0, t, SatakeParam(t.p, t.conjugate()));
    return L * tr / (std::pow(static_cast<double>(t.p), n) - 1);
}

inline cplx period_closed(const CVector& nu, const SatakeParam& t)
{
    int n = t.n();
    if (static_cast<int>(nu.size()) != n - 1) throw std::invalid_argument("period: nu must have n-1 entries");
    double p = static_cast<double>(t.p);
    CMatrix D = d_star(1.0 / p, t.t);
    CVector x;
    for (const auto& v : nu) x.push_back(p_power(t.p, v));
    cplx s = 0;
    for (int i = 1; i <= n; ++i) {
        cplx term = D(static_cast<std::size_t>(n - 1), static_cast<std::size_t>(i - 1)) * std::pow(p, (n - i) / 2.0) * elementary(n - i, x);
        s += ((n - i) % 2 == 0) ? term : -term; // (-1)^{n-i}
    }
    return rs_L(1.0, t, SatakeParam(t.p, t.conjugate())) * s / std::pow(p, n);
}

/// (p^n - 1) / L(1, pi x pibar) times the trace and closed routes, as Laurent polynomials in
/// T_1..T_n, X_1..X_{n-1} (X_i = p^{-nu_i}) and q = p^{1/2}; variable order (T, X, q).
struct PeriodKernels
{
    RatPoly trace, closed;
};

inline PeriodKernels period_kernels_symbolic(std::size_t n)
{
    if (n < 2) throw std::invalid_argument("period_kernels_symbolic: n >= 2");
    std::size_t nv = 2 * n, qi = 2 * n - 1;
    std::vector<RatPoly> T, X;
    for (std::size_t i = 0; i < n; ++i) T.push_back(RatPoly::variable(nv, i));
    for (std::size_t i = 0; i + 1 < n; ++i) X.push_back(RatPoly::variable(nv, n + i));
    auto qpow = [&](int e) {
        Exponent x(nv, 0);
        x[qi] = e;
        return RatPoly::monomial(x, Rational(1));
    };
    // D*(q^{-2}, T)
    const DStar& ds = d_star_cached(n);
    Matrix<RatPoly> D(n, n, RatPoly::zero(nv));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (const auto& [e, c] : ds.entries(i, j).terms()) {
                Exponent x(nv, 0);
                for (std::size_t k = 0; k < n; ++k) x[k] = e[k];
                x[qi] = -2 * e[n];
                D(i, j) += RatPoly::monomial(x, c);
            }
    Matrix<RatPoly> H(n, n, RatPoly::zero(nv)), R(n, n, RatPoly::zero(nv)), F(n, n, RatPoly::zero(nv));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            RatPoly h = complete(static_cast<int>(j - i), T);
            H(i, j) = (i % 2 == 0) ? h : -h;
        }
        auto k = static_cast<int>(n - 1 - i);
        R(i, i) = (k % 2 == 0 ? Rational(1) : Rational(-1)) * qpow(2 * k);
        F(n - 1, i) = qpow(-k) * elementary(k, X);
    }
    RatPoly c = RatPoly(nv, Rational(1)) - qpow(-2 * static_cast<int>(n));
    if ((n - 1) % 2 == 1) c = -c;
    Matrix<RatPoly> M = H * D * R;
    PeriodKernels out{RatPoly::zero(nv), RatPoly::zero(nv)};
    // tr(G^{-1} F) with G^{-1} = transpose of M
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) out.trace += c * M(i, j) * F(i, j);
    for (std::size_t i = 1; i <= n; ++i) {
        auto k = static_cast<int>(n - i);
        RatPoly term = D(n - 1, i - 1) * qpow(k) * elementary(k, X);
        out.closed += (k % 2 == 0) ? term : -term;
    }
    out.closed = (RatPoly(nv, Rational(1)) - qpow(-2 * static_cast<int>(n))) * out.closed;
    return out;
}

/// Direct route: Gram-Schmidt of W^{(0)}, ..., W^{(n-1)} under truncated inner products,
/// then L(1, pi x pibar) / (p^n - 1) sum_k Z0(nu; conj V_k) V_k(1).
inline PeriodReport period(const CVector& nu, const SatakeParam& t, int Lambda = 40)
{
    if (!t.unitary_generic || !t.trivial_central) throw std::invalid_argument("period: need a unitary generic parameter with trivial central character");
    for (const auto& v : nu)
        if (v.real() < 0) throw std::domain_error("period: Re nu_j must be >= 0");
    int n = t.n();
    auto N = static_cast<std::size_t>(n);
    PeriodReport r;
    r.nu = nu;
    r.t = t;
    r.trace = period_trace(nu, t);
    r.closed = period_closed(nu, t);

    CMatrix gram = detail::oldform_gram(t, Lambda);
    r.gram_condition = condition_number(gram);
    if (!(r.gram_condition <= 1e8)) {
        r.direct_skipped = "Gram matrix numerically singular (condition " + std::to_string(r.gram_condition) + ")";
    } else {
        // coefficient vectors a_k with V_k = sum_j a_k[j] W^{(j)}
        auto inner = [&](const CVector& x, const CVector& y) {
            cplx s = 0;
            for (std::size_t a = 0; a < N; ++a)
                for (std::size_t b = 0; b < N; ++b) s += x[a] * std::conj(y[b]) * gram(a, b);
            return s;
        };
        std::vector<CVector> V;
        for (std::size_t k = 0; k < N; ++k) {
            CVector v(N, cplx(0));
            v[k] = 1;
            for (const auto& u : V) {
                cplx c = inner(v, u);
                for (std::size_t a = 0; a < N; ++a) v[a] -= c * u[a];
            }
            double nv = std::sqrt(std::abs(inner(v, v)));
            for (auto& x : v) x /= nv;
            V.push_back(v);
        }
        CVector zeta = detail::oldform_zeta(0.5, nu, t, Lambda);
        cplx L = detail::L_half_product(nu, t);
        CVector at1;
        for (int j = 0; j < n; ++j) at1.push_back(W_j_value(j, t, RatMatrix::identity(N)));
        cplx s = 0;
        for (const auto& v : V) {
            cplx z0 = 0, v1 = 0;
            for (std::size_t a = 0; a < N; ++a) {
                z0 += std::conj(v[a]) * zeta[a] / L;
                v1 += v[a] * at1[a];
            }
            s += z0 * v1;
        }
        r.direct = rs_L(1.0, t, SatakeParam(t.p, t.conjugate())) * s / (std::pow(static_cast<double>(t.p), n) - 1);
        r.direct_trace = scaled_error(*r.direct, r.trace);
        r.direct_closed = scaled_error(*r.direct, r.closed);
    }
    r.trace_closed = scaled_error(r.trace, r.closed);
    r.bound_ratio = std::abs(r.closed) * std::pow(static_cast<double>(t.p), 1.0 + (n - 1.0) / (n * n + 1.0));
    return r;
}

// ---------------------------------------------------------------------------
// Scan of |period| p^{1+(n-1)/(n^2+1)} over non-tempered parameters

/// n >= 3: t = (p^{-sigma} e^{i theta}, p^{sigma} e^{i theta}, e^{-2 i theta}, 1, ..., 1).
/// n = 2: (e^{i theta}, e^{-i theta}) when sigma = 0, else +-(p^{-sigma}, p^{sigma}) with the sign of cos theta.
/// Unitary generic with prod t = 1 in both cases.
inline SatakeParam lrs_grid_parameter(int n, long p, double sigma, double theta)
{
    if (n < 2) throw std::invalid_argument("lrs_grid_parameter: n >= 2");
    double a = std::pow(static_cast<double>(p), -sigma);
    CVector t;
    if (n == 2) {
        if (sigma == 0) {
            t = {std::polar(1.0, theta), std::polar(1.0, -theta)};
        } else {
            double sg = std::cos(theta) >= 0 ? 1.0 : -1.0;
            t = {cplx(sg * a), cplx(sg / a)};
        }
    } else {
        t = {a * std::polar(1.0, theta), std::polar(1.0, theta) / a, std::polar(1.0, -2 * theta)};
        while (static_cast<int>(t.size()) < n) t.emplace_back(1.0);
    }
    return SatakeParam(p, t);
}

struct LrsScanEntry
{
    long p = 2;
    double sup_ratio = 0;
    double argmax_sigma = 0, argmax_theta = 0;
    bool finite = true;
};

struct LrsScanReport
{
    int n = 3;
    double sigma_max = 0;
    int points = 0;
    std::vector<LrsScanEntry> entries;
    double empirical_constant = 0; ///< max over p of sup_ratio
};

/// Grid point k of K: sigma = sigma_max k/(K-1), theta by a golden-ratio rotation.
inline std::pair<double, double> lrs_grid_point(int k, int K, double sigma_max)
{
    double sigma = K > 1 ? sigma_max * k / (K - 1) : 0.0;
    double phi = (std::sqrt(5.0) - 1) / 2;
    double frac = k * phi - std::floor(k * phi);
    return {sigma, 2 * std::numbers::pi * frac};
}

inline LrsScanReport lrs_bound_scan(int n, const std::vector<long>& primes, int points = 200, double sigma_max = -1, int threads = 1)
{
    if (n < 2) throw std::invalid_argument("lrs_bound_scan: n >= 2");
    if (points < 1) throw std::invalid_argument("lrs_bound_scan: points must be positive");
    double bound = 0.5 - 1.0 / (n * n + 1.0);
    if (sigma_max < 0) sigma_max = bound;
    if (sigma_max > bound + 1e-15) throw std::invalid_argument("lrs_bound_scan: sigma_max exceeds 1/2 - 1/(n^2+1)");
    LrsScanReport rep{n, sigma_max, points, {}, 0};
    CVector nu(static_cast<std::size_t>(n - 1), cplx(0));
    d_star_cached(static_cast<std::size_t>(n));
    for (long p : primes) {
        std::vector<double> ratio(static_cast<std::size_t>(points));
        auto work = [&](int lo, int hi) {
            for (int k = lo; k < hi; ++k) {
                auto [s, th] = lrs_grid_point(k, points, sigma_max);
                cplx P = period_closed(nu, lrs_grid_parameter(n, p, s, th));
                ratio[static_cast<std::size_t>(k)] = std::abs(P) * std::pow(static_cast<double>(p), 1.0 + (n - 1.0) / (n * n + 1.0));
            }
        };
        int T = std::max(1, std::min(threads, points));
        std::vector<std::thread> pool;
        for (int i = 0; i < T; ++i) pool.emplace_back(work, points * i / T, points * (i + 1) / T);
        for (auto& th : pool) th.join();
        LrsScanEntry e;
        e.p = p;
        for (int k = 0; k < points; ++k) {
            double v = ratio[static_cast<std::size_t>(k)];
            if (!std::isfinite(v)) e.finite = false;
            if (v > e.sup_ratio) {
                e.sup_ratio = v;
                std::tie(e.argmax_sigma, e.argmax_theta) = lrs_grid_point(k, points, sigma_max);
            }
        }
        rep.empirical_constant = std::max(rep.empirical_constant, e.sup_ratio);
        rep.entries.push_back(e);
    }
    return rep;
}

} // namespace gln

#endif // GLN_OLDFORMS_HPP
