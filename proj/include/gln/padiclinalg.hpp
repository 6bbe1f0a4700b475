// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_PADICLINALG_HPP
#define GLN_PADICLINALG_HPP

#include "exactnum.hpp"
#include "matrix.hpp"
#include "weylcoset.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace gln {

/// Smallest valuation among the entries (nullopt for the zero matrix).
inline std::optional<long> min_valuation(const RatMatrix& a, long p)
{
    std::optional<long> best;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            auto v = valuation(a(i, j), p);
            if (v && (!best || *v < *best)) best = v;
        }
    return best;
}

inline bool is_p_integral(const RatMatrix& a, long p)
{
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (!is_p_integral(a(i, j), p)) return false;
    return true;
}

/// k in GL_n(Z_(p)): integral entries and unit determinant.
inline bool in_GL_Zp(const RatMatrix& k, long p)
{
    if (!is_p_integral(k, p)) return false;
    Rational d = determinant(k);
    auto v = valuation(d, p);
    return v && *v == 0;
}

// ---------------------------------------------------------------------------
// Generic Iwasawa decomposition over Q_p

struct IwasawaQp
{
    RatMatrix u;                 ///< upper unipotent
    RatMatrix t;                 ///< diagonal
    RatMatrix k;                 ///< in GL_n(Z_(p))
    std::vector<long> exponents; ///< a_i with t_i = p^{a_i} * unit_i
    std::vector<Rational> units;
};

/// g = u t k by column operations: rows from the bottom up, pivot of minimal valuation,
/// ties to the smallest column index.
inline IwasawaQp iwasawa_qp(const RatMatrix& g, long p)
{
    require_prime(p);
    std::size_t n = g.rows();
    if (g.cols() != n) throw std::invalid_argument("iwasawa_qp: matrix not square");
    if (determinant(g) == 0) throw std::invalid_argument("iwasawa_qp: singular matrix");
    RatMatrix B = g, kp = RatMatrix::identity(n); // B = g kp
    for (std::size_t ii = n; ii-- > 0;) {
        std::size_t piv = n;
        long best = 0;
        for (std::size_t j = 0; j <= ii; ++j) {
            auto v = valuation(B(ii, j), p);
            if (v && (piv == n || *v < best)) {
                piv = j;
                best = *v;
            }
        }
        if (piv == n) throw std::logic_error("iwasawa_qp: zero row");
        if (piv != ii)
            for (std::size_t r = 0; r < n; ++r) {
                std::swap(B(r, piv), B(r, ii));
                std::swap(kp(r, piv), kp(r, ii));
            }
        for (std::size_t j = 0; j < ii; ++j) {
            if (B(ii, j) == 0) continue;
            Rational f = B(ii, j) / B(ii, ii); // p-integral by minimality
            for (std::size_t r = 0; r < n; ++r) {
                B(r, j) -= f * B(r, ii);
                kp(r, j) -= f * kp(r, ii);
            }
        }
    }
    IwasawaQp out{RatMatrix(n, n), RatMatrix(n, n), inverse(kp), {}, {}};
    for (std::size_t i = 0; i < n; ++i) {
        out.t(i, i) = B(i, i);
        auto [a, u] = split_unit(B(i, i), p);
        out.exponents.push_back(a);
        out.units.push_back(u);
        for (std::size_t j = 0; j < n; ++j) out.u(i, j) = B(i, j) / B(j, j);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Explicit Iwasawa data of [[1, 0], [xi^t, 1]]

/// [[1_r, 0], [xi^t, 1]] = [[Upsilon, ell], [0, 1]] diag(alpha, t) kappa.
struct LowerIwasawa
{
    std::vector<int> sequence;   ///< strictly decreasing 1-based positions iota(0) > iota(1) > ...
    RatMatrix Upsilon;           ///< r x r upper unipotent
    RatVector ell;               ///< length r
    RatVector alpha;             ///< diagonal, length r
    Rational t;
    RatMatrix kappa;             ///< (r+1) x (r+1)
};

inline RatMatrix lower_unipotent_column(const RatVector& xi)
{
    std::size_t r = xi.size();
    RatMatrix m = RatMatrix::identity(r + 1);
    for (std::size_t i = 0; i < r; ++i) m(r, i) = xi[i];
    return m;
}

/// The decreasing sequence: iota(0) the largest position of maximal |xi|_p > 1, then repeat below it.
inline std::vector<int> iwasawa_sequence(const RatVector& xi, long p)
{
    std::vector<int> seq;
    int upper = static_cast<int>(xi.size()); // search positions 1..upper
    while (upper >= 1) {
        int best = 0;
        long bv = 0;
        for (int i = 1; i <= upper; ++i) {
            auto v = valuation(xi[static_cast<std::size_t>(i - 1)], p);
            if (v && (best == 0 || *v <= bv)) {
                best = i;
                bv = *v;
            }
        }
        if (best == 0 || bv >= 0) break;
        seq.push_back(best);
        upper = best - 1;
    }
    return seq;
}

/// Row-operation construction of (Upsilon, ell, alpha, t, kappa) for xi in Q^r.
inline LowerIwasawa explicit_lower_iwasawa(const RatVector& xi, long p)
{
    require_prime(p);
    std::size_t r = xi.size();
    std::size_t R = r + 1;
    LowerIwasawa out;
    out.sequence = iwasawa_sequence(xi, p);
    RatMatrix nbar = lower_unipotent_column(xi);
    RatMatrix cur = nbar;
    auto z = [&](int i) { return xi[static_cast<std::size_t>(i - 1)]; };
    auto add_row = [&](int dst, int src, const Rational& c) {
        for (std::size_t j = 0; j < R; ++j) cur(static_cast<std::size_t>(dst - 1), j) += c * cur(static_cast<std::size_t>(src - 1), j);
    };
    auto scale_row = [&](int row, const Rational& c) {
        for (std::size_t j = 0; j < R; ++j) cur(static_cast<std::size_t>(row - 1), j) *= c;
    };
    int prev = static_cast<int>(R);
    for (int a : out.sequence) {
        add_row(a, prev, -1 / z(a));
        scale_row(a, -z(a));
        scale_row(prev, 1 / z(a));
        int last = (prev == static_cast<int>(R)) ? static_cast<int>(r) : prev - 1;
        for (int i = a + 1; i <= last; ++i) add_row(a, i, -z(i));
        prev = a;
    }
    out.kappa = cur;
    RatMatrix P = nbar * inverse(cur);
    out.Upsilon = RatMatrix(r, r);
    out.ell.assign(r, Rational(0));
    out.alpha.assign(r, Rational(0));
    out.t = P(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        out.alpha[i] = P(i, i);
        out.ell[i] = P(i, r) / out.t;
        for (std::size_t j = 0; j < r; ++j) out.Upsilon(i, j) = P(i, j) / P(j, j);
    }
    return out;
}

/// [[Upsilon, ell], [0, 1]] diag(alpha, t) kappa.
inline RatMatrix reconstruct(const LowerIwasawa& d)
{
    std::size_t r = d.alpha.size();
    RatMatrix U = RatMatrix::identity(r + 1), T(r + 1, r + 1);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) U(i, j) = d.Upsilon(i, j);
        U(i, r) = d.ell[i];
        T(i, i) = d.alpha[i];
    }
    T(r, r) = d.t;
    return U * T * d.kappa;
}

// ---------------------------------------------------------------------------
// Archimedean counterpart

struct ArchLowerIwasawa
{
    Eigen::MatrixXd Upsilon;
    Eigen::VectorXd ell, alpha;
    double t = 1;
    Eigen::MatrixXd kappa;
};

/// Closed forms for t, ell, alpha; Upsilon from Upsilon alpha^2 Upsilon^t = 1 - xi xi^t / (1 + |xi|^2).
inline ArchLowerIwasawa arch_lower_iwasawa(const Eigen::VectorXd& xi)
{
    const Eigen::Index r = xi.size();
    ArchLowerIwasawa out;
    double s = 1 + xi.squaredNorm();
    out.t = std::sqrt(s);
    out.ell = xi / s;
    out.alpha.resize(r);
    double partial = 1;
    for (Eigen::Index i = 0; i < r; ++i) {
        double next = partial + xi(i) * xi(i);
        out.alpha(i) = std::sqrt(partial / next);
        partial = next;
    }
    // upper-unipotent UDU^t factorisation, last column first
    Eigen::MatrixXd G = Eigen::MatrixXd::Identity(r, r) - xi * xi.transpose() / s;
    Eigen::MatrixXd U = Eigen::MatrixXd::Identity(r, r);
    Eigen::VectorXd d(r);
    for (Eigen::Index j = r - 1; j >= 0; --j) {
        double dj = G(j, j);
        for (Eigen::Index k = j + 1; k < r; ++k) dj -= U(j, k) * U(j, k) * d(k);
        d(j) = dj;
        for (Eigen::Index i = 0; i < j; ++i) {
            double v = G(i, j);
            for (Eigen::Index k = j + 1; k < r; ++k) v -= U(i, k) * U(j, k) * d(k);
            U(i, j) = v / dj;
        }
    }
    out.Upsilon = U;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(r + 1, r + 1);
    P.topLeftCorner(r, r) = U * out.alpha.asDiagonal();
    P.topRightCorner(r, 1) = out.ell * out.t;
    P(r, r) = out.t;
    Eigen::MatrixXd nbar = Eigen::MatrixXd::Identity(r + 1, r + 1);
    nbar.bottomLeftCorner(1, r) = xi.transpose();
    out.kappa = P.inverse() * nbar;
    return out;
}

// ---------------------------------------------------------------------------
// Smith normal form at p

/// Elementary divisor exponents d_1 <= ... <= d_n of a p-integral nonsingular matrix.
inline std::vector<long> smith_at_p(const RatMatrix& A, long p)
{
    require_prime(p);
    std::size_t n = A.rows();
    if (A.cols() != n) throw std::invalid_argument("smith_at_p: matrix not square");
    if (!is_p_integral(A, p)) throw std::invalid_argument("smith_at_p: matrix not p-integral");
    if (determinant(A) == 0) throw std::invalid_argument("smith_at_p: singular matrix");
    RatMatrix M = A;
    std::vector<long> d;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pi = k, pj = k;
        std::optional<long> best;
        for (std::size_t i = k; i < n; ++i)
            for (std::size_t j = k; j < n; ++j) {
                auto v = valuation(M(i, j), p);
                if (v && (!best || *v < *best)) {
                    best = v;
                    pi = i;
                    pj = j;
                }
            }
        for (std::size_t j = 0; j < n; ++j) std::swap(M(k, j), M(pi, j));
        for (std::size_t i = 0; i < n; ++i) std::swap(M(i, k), M(i, pj));
        for (std::size_t i = k + 1; i < n; ++i) {
            Rational f = M(i, k) / M(k, k);
            for (std::size_t j = k; j < n; ++j) M(i, j) -= f * M(k, j);
        }
        for (std::size_t j = k + 1; j < n; ++j) M(k, j) = 0;
        d.push_back(*best);
    }
    std::sort(d.begin(), d.end());
    return d;
}

// ---------------------------------------------------------------------------
// K_1(N) membership

/// N_p = p^{v_p(N)}.
inline long level_exponent(long N, long p)
{
    if (N < 1) throw std::invalid_argument("level must be a positive integer");
    auto v = valuation(Rational(N), p);
    return *v;
}

/// k in K_1(N Z_p): k in GL_n(Z_p), k_{ni} in N Z_p for i < n, k_nn - 1 in N Z_p.
inline bool in_K1(const RatMatrix& k, long N, long p)
{
    if (!in_GL_Zp(k, p)) return false;
    long e = level_exponent(N, p);
    std::size_t n = k.rows();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto v = valuation(k(n - 1, i), p);
        if (v && *v < e) return false;
    }
    auto v = valuation(Rational(k(n - 1, n - 1) - 1), p);
    return !v || *v >= e;
}

struct ZK1Membership
{
    bool member = false;
    Rational z; ///< z^{-1} g in K_1(N Z_p) when member
};

/// g in Z(Q_p) K_1(N Z_p), with witness z = g_nn.
inline ZK1Membership in_ZK1(long N, const RatMatrix& g, long p)
{
    require_prime(p);
    if (determinant(g) == 0) throw std::invalid_argument("in_ZK1: singular matrix");
    std::size_t n = g.rows();
    Rational z = g(n - 1, n - 1);
    if (z == 0) return {};
    RatMatrix k = g;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) k(i, j) /= z;
    if (!in_K1(k, N, p)) return {};
    return {true, z};
}

/// Exists h in GL_{n-1}(Q_p) with iota(h)^{-1} g in Z(Q_p) K_1(N Z_p).
/// The top n-1 rows only matter through their span S; with c = g^{-1} e_n spanning S^perp and
/// s = p^{min v(c)}, the last row r needs s r_i in N Z_p (i < n) and s r_n a unit (in Z_p if p does not divide N).
inline ZK1Membership exists_h_in_ZK1(const RatMatrix& g, long N, long p)
{
    require_prime(p);
    std::size_t n = g.rows();
    if (determinant(g) == 0) throw std::invalid_argument("exists_h_in_ZK1: singular matrix");
    long e = level_exponent(N, p);
    RatMatrix gi = inverse(g);
    std::optional<long> mv;
    for (std::size_t i = 0; i < n; ++i) {
        auto v = valuation(gi(i, n - 1), p);
        if (v && (!mv || *v < *mv)) mv = v;
    }
    Rational s = rpow(p, *mv);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        auto v = valuation(Rational(s * g(n - 1, i)), p);
        if (v && *v < e) return {};
    }
    auto vn = valuation(Rational(s * g(n - 1, n - 1)), p);
    if (e > 0) {
        if (!vn || *vn != 0) return {};
        return {true, g(n - 1, n - 1)};
    }
    if (vn && *vn < 0) return {};
    return {true, 1 / s};
}

// ---------------------------------------------------------------------------
// Orbit representatives and the support predicate

/// n(y) w [w0 Z w0^{-1}; w0 (xi, 0), w0 (0, xi')]_w for Z in V_{y,w}, xi in Q^{m-1}, xi' in Q^{n-m}.
inline RatMatrix orbit_matrix(const RatVector& y, const Permutation& w, const RatMatrix& Z, const RatVector& xi,
                              const RatVector& xip)
{
    int n = w.size();
    int m = w.inverse()(n);
    if (static_cast<int>(xi.size()) != m - 1 || static_cast<int>(xip.size()) != n - m)
        throw std::invalid_argument("orbit_matrix: coordinate lengths do not match m");
    Permutation w0 = w0_of(w);
    std::size_t k = static_cast<std::size_t>(n - 1);
    OrbitElement e{w0.matrix() * Z * w0.inverse().matrix(), RatVector(k, Rational(0)), RatVector(k, Rational(0))};
    // (w0 v)_{w0(j)} = v_j
    for (int j = 1; j < m; ++j) e.x[static_cast<std::size_t>(w0(j) - 1)] = xi[static_cast<std::size_t>(j - 1)];
    for (int j = m; j <= n - 1; ++j) e.xp[static_cast<std::size_t>(w0(j) - 1)] = xip[static_cast<std::size_t>(j - m)];
    return n_of(y) * w.matrix() * realize(e, w);
}

/// Exact support indicator: exists h with iota(h)^{-1} n(y) w [..]_w in Z(Q_p) K_1(N Z_p).
inline bool support_indicator(const IndexSet& Q, const RatVector& y, const Permutation& w, long N, long p,
                              const RatMatrix& Z, const RatVector& xi, const RatVector& xip)
{
    if (!in_YQ(Q, y) || !satisfies_SnQy(Q, y, w)) throw std::invalid_argument("support_indicator: triple not admissible");
    return exists_h_in_ZK1(orbit_matrix(y, w, Z, xi, xip), N, p).member;
}

/// Necessary condition for support_indicator when p | N and Q is proper: t^{-1} (0,..,0,1,xi') is a primitive
/// vector of N Z_p^{n-1} + Z_p, with t from the explicit Iwasawa data of xi'_+ (coordinates j with w0(j) in sp(y)).
/// Not necessary when p does not divide N: the scalar z can then differ from t by a power of p.
inline bool support_necessary_condition(const RatVector& y, const Permutation& w, long N, long p, const RatVector& xip)
{
    int n = w.size();
    int m = w.inverse()(n);
    Permutation w0 = w0_of(w);
    IndexSet sp = support(y);
    RatVector plus(xip.size(), Rational(0));
    for (int j = m; j <= n - 1; ++j)
        if (sp.count(w0(j))) plus[static_cast<std::size_t>(j - m)] = xip[static_cast<std::size_t>(j - m)];
    Rational t = plus.empty() ? Rational(1) : explicit_lower_iwasawa(plus, p).t;
    RatVector v(static_cast<std::size_t>(n), Rational(0));
    v[static_cast<std::size_t>(m - 1)] = 1;
    for (int j = m; j <= n - 1; ++j) v[static_cast<std::size_t>(j)] = xip[static_cast<std::size_t>(j - m)];
    long e = level_exponent(N, p);
    bool primitive = false;
    for (std::size_t i = 0; i < v.size(); ++i) {
        Rational c = v[i] / t;
        auto val = valuation(c, p);
        long need = (i + 1 < v.size()) ? e : 0;
        if (val && *val < need) return false;
        if (val && *val == need) primitive = true;
    }
    return primitive;
}

} // namespace gln

#endif // GLN_PADICLINALG_HPP
