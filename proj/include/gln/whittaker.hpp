// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_WHITTAKER_HPP
#define GLN_WHITTAKER_HPP

#include "exactnum.hpp"
#include "padiclinalg.hpp"
#include "symfun.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace gln {

using CVector = std::vector<cplx>;

// ---------------------------------------------------------------------------
// Parameters

/// Satake parameter of an unramified representation of GL_n(Q_p).
struct SatakeParam
{
    long p = 2;
    CVector t;
    bool trivial_central = false; ///< prod t_j = 1
    bool unitary_generic = false; ///< {conj t_j} = {1/t_j} as multisets

    SatakeParam() = default;
    SatakeParam(long prime, CVector values) : p(prime), t(std::move(values))
    {
        require_prime(p);
        if (t.empty()) throw std::invalid_argument("SatakeParam: empty parameter");
        for (const auto& x : t)
            if (x == cplx(0)) throw std::invalid_argument("SatakeParam: zero entry");
        cplx prod = 1;
        for (const auto& x : t) prod *= x;
        trivial_central = std::abs(prod - cplx(1)) <= 1e-12;
        unitary_generic = multiset_match(t);
    }

    /// t_j = p^{-nu_j}.
    static SatakeParam from_nu(long prime, const CVector& nu)
    {
        CVector t;
        for (const auto& v : nu) t.push_back(std::exp(-v * std::log(static_cast<double>(prime))));
        return SatakeParam(prime, std::move(t));
    }

    int n() const { return static_cast<int>(t.size()); }

    CVector conjugate() const
    {
        CVector c;
        for (const auto& x : t) c.push_back(std::conj(x));
        return c;
    }

private:
    static bool multiset_match(const CVector& t)
    {
        std::vector<bool> used(t.size(), false);
        for (const auto& x : t) {
            cplx target = std::conj(x);
            bool found = false;
            for (std::size_t j = 0; j < t.size() && !found; ++j)
                if (!used[j] && std::abs(target - cplx(1) / t[j]) <= 1e-12) used[j] = found = true;
            if (!found) return false;
        }
        return true;
    }
};

inline bool is_dominant(const std::vector<int>& lambda)
{
    for (std::size_t i = 0; i + 1 < lambda.size(); ++i)
        if (lambda[i] < lambda[i + 1]) return false;
    return true;
}

/// rho of the Borel of GL_m: (m+1-2j)/2.
inline std::vector<double> rho_B(int m)
{
    std::vector<double> r;
    for (int j = 1; j <= m; ++j) r.push_back((m + 1 - 2 * j) / 2.0);
    return r;
}

// ---------------------------------------------------------------------------
// Casselman-Shalika values

/// delta_B(p^lambda)^{1/2} = p^{-sum_j lambda_j (m-2j+1)/2} in GL_m.
inline HalfPowerLaurent delta_B_half(const std::vector<int>& lambda, long p, int m)
{
    require_prime(p);
    if (static_cast<int>(lambda.size()) != m) throw std::invalid_argument("delta_B_half: length of lambda is not m");
    long twice = 0;
    for (int j = 1; j <= m; ++j) twice -= static_cast<long>(lambda[static_cast<std::size_t>(j - 1)]) * (m - 2 * j + 1);
    return HalfPowerLaurent::half_power(p, twice);
}

inline double delta_B_half_value(const std::vector<int>& lambda, long p)
{
    int m = static_cast<int>(lambda.size());
    double e = 0;
    for (int j = 1; j <= m; ++j) e -= lambda[static_cast<std::size_t>(j - 1)] * (m - 2 * j + 1) / 2.0;
    return std::pow(static_cast<double>(p), e);
}

/// W0(p^lambda) = delta_B^{1/2}(p^lambda) s_lambda(t), zero off the dominant cone.
inline cplx cs_value(const CVector& t, const std::vector<int>& lambda, long p)
{
    if (t.size() != lambda.size()) throw std::invalid_argument("cs_value: length mismatch");
    if (!is_dominant(lambda)) return 0;
    return delta_B_half_value(lambda, p) * schur(lambda, t);
}

/// Exact version for rational Satake parameters.
inline HalfPowerLaurent cs_value_exact(const std::vector<Rational>& t, const std::vector<int>& lambda, long p)
{
    if (t.size() != lambda.size()) throw std::invalid_argument("cs_value_exact: length mismatch");
    if (!is_dominant(lambda)) return HalfPowerLaurent();
    return delta_B_half(lambda, p, static_cast<int>(lambda.size())) * HalfPowerLaurent(schur(lambda, t));
}

/// W0 on the torus for one parameter, for long lattice sums: Jacobi-Trudi det(h_{lambda_i - i + j}(t))
/// over a cached table of complete symmetric functions.
class CSEvaluator
{
public:
    CSEvaluator(const CVector& t, long p) : p_(p), t_(t), h_{cplx(1)} {}

    cplx operator()(const std::vector<int>& lambda)
    {
        if (lambda.size() != t_.size()) throw std::invalid_argument("CSEvaluator: length mismatch");
        if (!is_dominant(lambda)) return 0;
        return delta_B_half_value(lambda, p_) * schur_jt(lambda);
    }

    cplx schur_jt(const std::vector<int>& lambda)
    {
        std::size_t k = lambda.size();
        if (k == 0) return 1;
        int shift = lambda.back();
        extend(lambda.front() - shift + static_cast<int>(k));
        std::vector<cplx> a(k * k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j) a[i * k + j] = h(lambda[i] - shift - static_cast<int>(i) + static_cast<int>(j));
        cplx det = 1;
        for (std::size_t c = 0; c < k; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < k; ++r)
                if (std::abs(a[r * k + c]) > std::abs(a[piv * k + c])) piv = r;
            if (a[piv * k + c] == cplx(0)) return 0;
            if (piv != c) {
                for (std::size_t j = 0; j < k; ++j) std::swap(a[c * k + j], a[piv * k + j]);
                det = -det;
            }
            det *= a[c * k + c];
            for (std::size_t r = c + 1; r < k; ++r) {
                cplx f = a[r * k + c] / a[c * k + c];
                for (std::size_t j = c; j < k; ++j) a[r * k + j] -= f * a[c * k + j];
            }
        }
        cplx d = 1;
        for (const auto& x : t_) d *= x;
        return det * std::pow(d, shift);
    }

private:
    long p_;
    CVector t_;
    std::vector<cplx> h_; // h_0, h_1, ...

    cplx h(int l) const { return l < 0 ? cplx(0) : h_[static_cast<std::size_t>(l)]; }

    void extend(int upto)
    {
        if (upto < static_cast<int>(h_.size())) return;
        // h_l(t_1..t_r) by adding one variable at a time
        std::vector<cplx> g(static_cast<std::size_t>(upto) + 1, cplx(0));
        g[0] = 1;
        for (const auto& x : t_)
            for (std::size_t l = 1; l < g.size(); ++l) g[l] += x * g[l - 1];
        h_ = std::move(g);
    }
};

// ---------------------------------------------------------------------------
// Whittaker function on GL_n(Q_p)

/// W0(g) = psi(sum u_{j,j+1}) W0(tau) from g = u tau k; unit parts of tau act trivially.
inline cplx whittaker_at(const CVector& t, const RatMatrix& g, long p)
{
    if (g.rows() != t.size()) throw std::invalid_argument("whittaker_at: size mismatch");
    auto d = iwasawa_qp(g, p);
    Rational s = 0;
    for (std::size_t j = 0; j + 1 < g.rows(); ++j) s += d.u(j, j + 1);
    std::vector<int> lambda;
    for (long a : d.exponents) lambda.push_back(static_cast<int>(a));
    return psi_p(s, p).to_complex() * cs_value(t, lambda, p);
}

inline HalfPowerLaurent whittaker_at_exact(const std::vector<Rational>& t, const RatMatrix& g, long p)
{
    if (g.rows() != t.size()) throw std::invalid_argument("whittaker_at_exact: size mismatch");
    auto d = iwasawa_qp(g, p);
    Rational s = 0;
    for (std::size_t j = 0; j + 1 < g.rows(); ++j) s += d.u(j, j + 1);
    std::vector<int> lambda;
    for (long a : d.exponents) lambda.push_back(static_cast<int>(a));
    return HalfPowerLaurent(p, psi_p(s, p)) * cs_value_exact(t, lambda, p);
}

// ---------------------------------------------------------------------------
// Local L-factors

inline cplx p_power(long p, cplx s) { return std::exp(-s * std::log(static_cast<double>(p))); } // p^{-s}

/// zeta_p(s) = (1 - p^{-s})^{-1}.
inline cplx zeta_p(cplx s, long p) { return cplx(1) / (cplx(1) - p_power(p, s)); }

/// prod_j (1 - t_j p^{-s})^{-1}.
inline cplx local_L(cplx s, const SatakeParam& t)
{
    cplx r = 1, q = p_power(t.p, s);
    for (const auto& x : t.t) r /= (cplx(1) - x * q);
    return r;
}

/// prod_{i,j} (1 - t_i t'_j p^{-s})^{-1}.
inline cplx rs_L(cplx s, const SatakeParam& t, const SatakeParam& tp)
{
    if (t.p != tp.p) throw std::invalid_argument("rs_L: different primes");
    cplx r = 1, q = p_power(t.p, s);
    for (const auto& x : t.t)
        for (const auto& y : tp.t) r /= (cplx(1) - x * y * q);
    return r;
}

/// L(1, Ad) = zeta_p(1)^{-1} L(1, t x conj t).
inline cplx adjoint_L(cplx s, const SatakeParam& t)
{
    return rs_L(s, t, SatakeParam(t.p, t.conjugate())) / zeta_p(s, t.p);
}

// ---------------------------------------------------------------------------
// Truncated lattice sums

struct TruncatedResult
{
    cplx value, reference;
    double error = 0;      ///< scaled error of value against reference
    double half_error = 0; ///< the same at Lambda/2
    bool converged = true; ///< error did not grow when Lambda doubled
};

/// Visit dominant lambda in Z^m with gaps lambda_i - lambda_{i+1} <= Lambda and lo <= lambda_m <= Lambda.
inline void for_each_truncated_dominant(int m, int Lambda, int lo, const std::function<void(const std::vector<int>&)>& f)
{
    std::vector<int> lam(static_cast<std::size_t>(m));
    std::function<void(int)> rec = [&](int i) {
        if (i < 0) {
            f(lam);
            return;
        }
        for (int g = 0; g <= Lambda; ++g) {
            lam[static_cast<std::size_t>(i)] = lam[static_cast<std::size_t>(i + 1)] + g;
            rec(i - 1);
        }
    };
    for (int last = lo; last <= Lambda; ++last) {
        lam[static_cast<std::size_t>(m - 1)] = last;
        rec(m - 2);
    }
}

namespace detail {

inline cplx zeta_sum(cplx z, const CVector& nu, const SatakeParam& t, int Lambda)
{
    int m = static_cast<int>(nu.size());
    if (t.n() != m + 1) throw std::invalid_argument("zeta_truncated: nu must have n-1 entries");
    long p = t.p;
    CSEvaluator w0(SatakeParam::from_nu(p, nu).t, p), wbar(t.conjugate(), p);
    double lp = std::log(static_cast<double>(p));
    std::vector<double> rho0 = rho_B(m);
    cplx acc = 0;
    // W0 of GL_n vanishes unless lambda_{n-1} >= 0
    for_each_truncated_dominant(m, Lambda, 0, [&](const std::vector<int>& lam) {
        std::vector<int> ext = lam;
        ext.push_back(0);
        double detv = 0, delta0 = 0;
        for (int j = 0; j < m; ++j) {
            detv += lam[static_cast<std::size_t>(j)];
            delta0 += 2 * rho0[static_cast<std::size_t>(j)] * lam[static_cast<std::size_t>(j)];
        }
        // |det p^lambda|^{z-1/2} delta_B0(p^lambda)^{-1}
        cplx weight = std::exp(-(z - 0.5) * detv * lp) * std::exp(delta0 * lp);
        acc += w0(lam) * wbar(ext) * weight;
    });
    return acc;
}

inline cplx mirabolic_sum(const SatakeParam& t, int Lambda)
{
    int n = t.n(), m = n - 1;
    long p = t.p;
    CSEvaluator w(t.t, p);
    double lp = std::log(static_cast<double>(p));
    std::vector<double> rho0 = rho_B(m);
    double acc = 0;
    for_each_truncated_dominant(m, Lambda, 0, [&](const std::vector<int>& lam) {
        std::vector<int> ext = lam;
        ext.push_back(0);
        double delta0 = 0;
        for (int j = 0; j < m; ++j) delta0 += 2 * rho0[static_cast<std::size_t>(j)] * lam[static_cast<std::size_t>(j)];
        acc += std::norm(w(ext)) * std::exp(delta0 * lp);
    });
    return zeta_p(cplx(n), p) * acc;
}

inline TruncatedResult finish(cplx value, cplx half_value, cplx reference)
{
    TruncatedResult r{value, reference, scaled_error(value, reference), scaled_error(half_value, reference), true};
    r.converged = r.error <= r.half_error || r.error < 1e-14;
    return r;
}

} // namespace detail

/// Truncated local Rankin-Selberg integral of W0(nu) against conj W0(t); reference prod_j L(z + nu_j, conj t).
inline TruncatedResult zeta_truncated(cplx z, const CVector& nu, const SatakeParam& t, int Lambda)
{
    if (Lambda < 1) throw std::invalid_argument("zeta_truncated: Lambda must be positive");
    SatakeParam tbar(t.p, t.conjugate());
    cplx ref = 1;
    for (const auto& v : nu) ref *= local_L(z + v, tbar);
    return detail::finish(detail::zeta_sum(z, nu, t, Lambda), detail::zeta_sum(z, nu, t, Lambda / 2), ref);
}

/// Truncated <W0|W0> on the mirabolic subgroup; reference L(1, t x conj t).
inline TruncatedResult mirabolic_inner_truncated(const SatakeParam& t, int Lambda)
{
    if (Lambda < 1) throw std::invalid_argument("mirabolic_inner_truncated: Lambda must be positive");
    if (!t.unitary_generic) throw std::invalid_argument("mirabolic_inner_truncated: parameter is not unitary generic");
    cplx ref = rs_L(1.0, t, SatakeParam(t.p, t.conjugate()));
    return detail::finish(detail::mirabolic_sum(t, Lambda), detail::mirabolic_sum(t, Lambda / 2), ref);
}

// ---------------------------------------------------------------------------
// Truncated Jacquet integral at the longest Weyl element

/// #(Z_p^x / U_p(N)) with U_p(N) = 1 + N Z_p when p | N.
inline long unit_index(long N, long p)
{
    long e = level_exponent(N, p);
    if (e == 0) return 1;
    long r = p - 1;
    for (long i = 1; i < e; ++i) r *= p;
    return r;
}

/// M(nu) = prod_{i<j} zeta_p(1 + nu_i - nu_j).
inline cplx M_G0(const CVector& nu, long p)
{
    cplx r = 1;
    for (std::size_t i = 0; i < nu.size(); ++i)
        for (std::size_t j = i + 1; j < nu.size(); ++j) r *= zeta_p(cplx(1) + nu[i] - nu[j], p);
    return r;
}

/// s^{(nu)}(h) = exp <H(h), nu + rho_B0> for h in GL_m(Q_p).
inline cplx spherical_section(const CVector& nu, const RatMatrix& h, long p)
{
    int m = static_cast<int>(nu.size());
    auto d = iwasawa_qp(h, p);
    auto rho = rho_B(m);
    double lp = std::log(static_cast<double>(p));
    cplx e = 0;
    for (int i = 0; i < m; ++i) e -= static_cast<double>(d.exponents[static_cast<std::size_t>(i)]) * (nu[static_cast<std::size_t>(i)] + rho[static_cast<std::size_t>(i)]);
    return std::exp(e * lp);
}

/// Representatives of U_0(p^{-k}Z_p)/U_0(Z_p) in GL_m: every above-diagonal entry in {0, 1, .., p^k - 1}/p^k.
/// Right multiplication by U_0(Z_p) can be undone column by column, bottom entry first, so the grid is complete.
inline std::vector<RatMatrix> jacquet_cells(int m, long p, int k)
{
    if (m < 1) throw std::invalid_argument("jacquet_cells: m must be positive");
    long pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i)
        for (std::size_t j = i + 1; j < static_cast<std::size_t>(m); ++j) coords.emplace_back(i, j);
    std::vector<RatMatrix> out;
    RatMatrix u = RatMatrix::identity(static_cast<std::size_t>(m));
    std::function<void(std::size_t)> rec = [&](std::size_t c) {
        if (c == coords.size()) {
            out.push_back(u);
            return;
        }
        for (long a = 0; a < pk; ++a) {
            u(coords[c].first, coords[c].second) = rat(a, pk);
            rec(c + 1);
        }
    };
    rec(0);
    return out;
}

/// Cell sum of s^{(nu)}(w_l^0 u) psi^{-1}(u) over U_0(p^{-k}Z_p)/U_0(Z_p), times #(Z_p^x/U_p(N))^{-1};
/// reference #(Z_p^x/U_p(N))^{-1} M(nu)^{-1}.
inline TruncatedResult jacquet_truncated(const CVector& nu, long p, int k, long N = 1)
{
    require_prime(p);
    int m = static_cast<int>(nu.size());
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (!((nu[static_cast<std::size_t>(i)] - nu[static_cast<std::size_t>(j)]).real() > 1))
                throw std::invalid_argument("jacquet_truncated: nu outside the convergence cone");
    if (k < 0) throw std::invalid_argument("jacquet_truncated: negative depth");
    double index = static_cast<double>(unit_index(N, p));
    RatMatrix w = Permutation::longest(m).matrix();
    auto sum = [&](int depth) {
        cplx acc = 0;
        for (const auto& u : jacquet_cells(m, p, depth)) {
            Rational s = 0;
            for (int j = 0; j + 1 < m; ++j) s += u(static_cast<std::size_t>(j), static_cast<std::size_t>(j + 1));
            acc += spherical_section(nu, w * u, p) * psi_p(-s, p).to_complex();
        }
        return acc / index;
    };
    return detail::finish(sum(k), sum(k / 2), cplx(1) / (M_G0(nu, p) * index));
}

} // namespace gln

#endif // GLN_WHITTAKER_HPP
