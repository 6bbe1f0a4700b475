// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_WEYLCOSET_HPP
#define GLN_WEYLCOSET_HPP

#include "exactnum.hpp"
#include "matrix.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gln {

using RatVector = std::vector<Rational>;
using IndexSet = std::set<int>; // 1-based indices

/// Permutation of {1..n}; w(i) = images[i-1].
class Permutation
{
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> images) : w_(std::move(images))
    {
        std::vector<int> seen(w_.size() + 1, 0);
        for (int v : w_) {
            if (v < 1 || v > static_cast<int>(w_.size()) || seen[static_cast<std::size_t>(v)]++)
                throw std::invalid_argument("Permutation: not a bijection");
        }
    }

    static Permutation identity(int n)
    {
        std::vector<int> v(static_cast<std::size_t>(n));
        std::iota(v.begin(), v.end(), 1);
        return Permutation(v);
    }

    /// w_l: i -> n+1-i.
    static Permutation longest(int n)
    {
        std::vector<int> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n - i;
        return Permutation(v);
    }

    /// w_l^0 of the first n-1 letters, fixing n.
    static Permutation longest_levi(int n)
    {
        std::vector<int> v(static_cast<std::size_t>(n));
        for (int i = 0; i < n - 1; ++i) v[static_cast<std::size_t>(i)] = n - 1 - i;
        v[static_cast<std::size_t>(n - 1)] = n;
        return Permutation(v);
    }

    int size() const { return static_cast<int>(w_.size()); }
    int operator()(int i) const { return w_.at(static_cast<std::size_t>(i - 1)); }
    const std::vector<int>& images() const { return w_; }

    Permutation inverse() const
    {
        std::vector<int> v(w_.size());
        for (std::size_t i = 0; i < w_.size(); ++i) v[static_cast<std::size_t>(w_[i] - 1)] = static_cast<int>(i) + 1;
        return Permutation(v);
    }

    /// (a*b)(i) = a(b(i)).
    friend Permutation operator*(const Permutation& a, const Permutation& b)
    {
        std::vector<int> v(b.w_.size());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = a(b.w_[i]);
        return Permutation(v);
    }

    friend bool operator==(const Permutation& a, const Permutation& b) { return a.w_ == b.w_; }
    friend bool operator<(const Permutation& a, const Permutation& b) { return a.w_ < b.w_; }

    /// Permutation matrix (delta_{i,w(j)}), so that w e_j = e_{w(j)}.
    RatMatrix matrix() const
    {
        std::size_t n = w_.size();
        RatMatrix m(n, n);
        for (std::size_t j = 0; j < n; ++j) m(static_cast<std::size_t>(w_[j] - 1), j) = 1;
        return m;
    }

    std::string str() const
    {
        std::string s = "(";
        for (std::size_t i = 0; i < w_.size(); ++i) s += (i ? "," : "") + std::to_string(w_[i]);
        return s + ")";
    }

    /// All permutations of {1..n} in lexicographic order.
    static std::vector<Permutation> all(int n)
    {
        std::vector<int> v(static_cast<std::size_t>(n));
        std::iota(v.begin(), v.end(), 1);
        std::vector<Permutation> out;
        do out.emplace_back(v);
        while (std::next_permutation(v.begin(), v.end()));
        return out;
    }

private:
    std::vector<int> w_;
};

// ---------------------------------------------------------------------------
// Basic sets

inline IndexSet support(const RatVector& y)
{
    IndexSet s;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] != 0) s.insert(static_cast<int>(i) + 1);
    return s;
}

/// I_w^0 = {i in [1,n-1] : w^{-1}(i) > w^{-1}(n)}.
inline IndexSet I_w0(const Permutation& w)
{
    int n = w.size();
    Permutation wi = w.inverse();
    IndexSet s;
    for (int i = 1; i < n; ++i)
        if (wi(i) > wi(n)) s.insert(i);
    return s;
}

/// Membership y in Y(w).
inline bool in_Y(const Permutation& w, const RatVector& y)
{
    if (static_cast<int>(y.size()) != w.size() - 1) throw std::invalid_argument("in_Y: length mismatch");
    IndexSet sp = support(y), iw = I_w0(w);
    Permutation wi = w.inverse();
    for (int h : sp)
        if (!iw.count(h)) return false;
    for (int h : sp)
        for (int k : sp)
            if (h < k && !(wi(h) > wi(k))) return false;
    return true;
}

/// Membership y in Y_Q: sp(y) inside Q' and below every element of Q.
inline bool in_YQ(const IndexSet& Q, const RatVector& y)
{
    for (int i : support(y)) {
        if (Q.count(i)) return false;
        if (!Q.empty() && i >= *Q.begin()) return false;
    }
    return true;
}

/// N(w) = {i in [1,n-1] : i > w^{-1}(n), w(i) < w(i+1)}.
inline IndexSet frak_N(const Permutation& w)
{
    int n = w.size();
    int m = w.inverse()(n);
    IndexSet s;
    for (int i = 1; i < n; ++i)
        if (i > m && w(i) < w(i + 1)) s.insert(i);
    return s;
}

/// Q = w([1, w^{-1}(n) - 1]).
inline IndexSet Q_of(const Permutation& w)
{
    int m = w.inverse()(w.size());
    IndexSet q;
    for (int i = 1; i < m; ++i) q.insert(w(i));
    return q;
}

/// Element w_0 of S_{n-1} attached to w (drop the position of n).
inline Permutation w0_of(const Permutation& w)
{
    int n = w.size(), m = w.inverse()(n);
    std::vector<int> v;
    for (int j = 1; j <= n - 1; ++j) v.push_back(j < m ? w(j) : w(j + 1));
    return Permutation(v);
}

/// Conditions (a)-(d) for w in S_n(Q, y).
inline bool satisfies_SnQy(const IndexSet& Q, const RatVector& y, const Permutation& w)
{
    int n = w.size();
    int m = static_cast<int>(Q.size()) + 1;
    IndexSet sp = support(y);
    // (a)
    IndexSet img;
    for (int i = 1; i < m; ++i) img.insert(w(i));
    if (img != Q || w(m) != n) return false;
    // (b)
    for (int i = 1; i + 1 <= m - 1; ++i)
        if (!(w(i) > w(i + 1))) return false;
    // (c)
    Permutation wi = w.inverse();
    for (int h : sp)
        for (int k : sp)
            if (h < k && !(wi(h) > wi(k))) return false;
    // (d)
    for (int j : frak_N(w)) {
        if (sp.count(w(j)) || !sp.count(w(j + 1))) return false;
        for (int v = w(j); v < w(j + 1); ++v)
            if (sp.count(v)) return false;
    }
    return true;
}

/// S_n(Q, y) built position by position: Q in decreasing order, then n, then arrangements of Q'.
inline std::vector<Permutation> enumerate_SnQy(int n, const IndexSet& Q, const RatVector& y)
{
    if (static_cast<int>(y.size()) != n - 1) throw std::invalid_argument("enumerate_SnQy: length mismatch");
    IndexSet sp = support(y);
    for (int i : sp)
        if (Q.count(i)) throw std::invalid_argument("enumerate_SnQy: sp(y) not inside Q'");
    for (int q : Q)
        if (q < 1 || q > n - 1) throw std::invalid_argument("enumerate_SnQy: Q not inside [1,n-1]");
    std::vector<int> head(Q.rbegin(), Q.rend());
    head.push_back(n);
    std::vector<int> rest;
    for (int i = 1; i < n; ++i)
        if (!Q.count(i)) rest.push_back(i);
    std::vector<Permutation> out;
    std::vector<int> tail;
    std::vector<bool> used(rest.size(), false);
    // (c): support elements appear in decreasing order; (d): every ascent a<b has a not in sp, b in sp, [a,b) free of sp
    auto ascent_ok = [&](int a, int b) {
        if (a > b) return true;
        if (sp.count(a) || !sp.count(b)) return false;
        for (int v = a; v < b; ++v)
            if (sp.count(v)) return false;
        return true;
    };
    std::function<void()> rec = [&]() {
        if (tail.size() == rest.size()) {
            std::vector<int> v = head;
            v.insert(v.end(), tail.begin(), tail.end());
            out.emplace_back(v);
            return;
        }
        for (std::size_t k = 0; k < rest.size(); ++k) {
            if (used[k]) continue;
            int c = rest[k];
            if (sp.count(c)) {
                bool bad = false;
                for (int t : tail)
                    if (sp.count(t) && t < c) bad = true;
                if (bad) continue;
            }
            if (!tail.empty() && !ascent_ok(tail.back(), c)) continue;
            used[k] = true;
            tail.push_back(c);
            rec();
            tail.pop_back();
            used[k] = false;
        }
    };
    rec();
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Matrices n(y), iota(b)

inline RatMatrix n_of(const RatVector& y)
{
    std::size_t n = y.size() + 1;
    RatMatrix m = RatMatrix::identity(n);
    for (std::size_t i = 0; i + 1 < n; ++i) m(i, n - 1) = y[i];
    return m;
}

inline RatMatrix iota(const RatMatrix& b)
{
    std::size_t n = b.rows() + 1;
    RatMatrix m = RatMatrix::identity(n);
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) m(i, j) = b(i, j);
    return m;
}

inline bool is_upper_unipotent(const RatMatrix& u)
{
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j <= i; ++j)
            if (u(i, j) != (i == j ? 1 : 0)) return false;
    return true;
}

inline bool is_upper_triangular(const RatMatrix& u)
{
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (u(i, j) != 0) return false;
    return true;
}

/// Factorisation u = x y with x supported on R, y on the complement (unique; solved by increasing j - i).
inline std::pair<RatMatrix, RatMatrix> split_unipotent(const RatMatrix& u, const std::function<bool(int, int)>& inR)
{
    std::size_t n = u.rows();
    RatMatrix x = RatMatrix::identity(n), y = RatMatrix::identity(n);
    for (std::size_t d = 1; d < n; ++d)
        for (std::size_t i = 0; i + d < n; ++i) {
            std::size_t j = i + d;
            Rational r = u(i, j);
            for (std::size_t m = i + 1; m < j; ++m) r -= x(i, m) * y(m, j);
            if (inR(static_cast<int>(i) + 1, static_cast<int>(j) + 1)) x(i, j) = r;
            else y(i, j) = r;
        }
    return {x, y};
}

// ---------------------------------------------------------------------------
// Classification

struct Classification
{
    RatVector y;
    Permutation w;
    Rational z;     ///< central witness
    RatMatrix b;    ///< upper triangular (n-1)x(n-1) witness
    RatMatrix u;    ///< upper unipotent n x n witness
};

/// Bruhat cell: g = b * M with b upper triangular and M = w u; returns (b, w, u).
inline std::tuple<RatMatrix, Permutation, RatMatrix> bruhat(const RatMatrix& g)
{
    std::size_t n = g.rows();
    RatMatrix M = g;
    std::vector<int> pivot(n, -1);
    for (std::size_t ii = n; ii-- > 0;) {
        std::size_t c = n;
        for (std::size_t j = 0; j < n; ++j)
            if (M(ii, j) != 0) {
                c = j;
                break;
            }
        if (c == n) throw std::invalid_argument("classify: singular matrix");
        Rational s = M(ii, c);
        for (std::size_t j = 0; j < n; ++j) M(ii, j) /= s;
        for (std::size_t r = 0; r < ii; ++r) {
            if (M(r, c) == 0) continue;
            Rational f = M(r, c);
            for (std::size_t j = 0; j < n; ++j) M(r, j) -= f * M(ii, j);
        }
        pivot[ii] = static_cast<int>(c);
    }
    // row r has its pivot in column w^{-1}(r)
    std::vector<int> img(n);
    for (std::size_t r = 0; r < n; ++r) img[static_cast<std::size_t>(pivot[r])] = static_cast<int>(r) + 1;
    Permutation w(img);
    RatMatrix u = w.inverse().matrix() * M;
    RatMatrix b = g * inverse(M);
    return {b, w, u};
}

/// The unique (y in Y(w), w) with g in Z iota(B0) n(y) w U, with witnesses g = z iota(b) n(y) w u.
inline Classification classify(const RatMatrix& g)
{
    std::size_t n = g.rows();
    if (g.cols() != n || n < 2) throw std::invalid_argument("classify: need a square matrix of size >= 2");
    if (determinant(g) == 0) throw std::invalid_argument("classify: singular matrix");
    auto [bb, w, u] = bruhat(g);
    Permutation wi = w.inverse();
    // bb = t u'
    RatMatrix t(n, n), up(n, n);
    for (std::size_t i = 0; i < n; ++i) t(i, i) = bb(i, i);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) up(i, j) = bb(i, j) / bb(i, i);
    // u' = u^w u_w; u^w vanishes where w^{-1}(i) < w^{-1}(j)
    auto [uw_up, uw_low] = split_unipotent(up, [&](int i, int j) { return wi(i) > wi(j); });
    RatMatrix wm = w.matrix(), wim = wi.matrix();
    RatMatrix utilde = wim * uw_low * wm * u;
    // u^w = iota(A) n(A^{-1} c)
    RatMatrix A(n - 1, n - 1);
    RatVector c(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        c[i] = uw_up(i, n - 1);
        for (std::size_t j = 0; j + 1 < n; ++j) A(i, j) = uw_up(i, j);
    }
    RatMatrix Ainv = inverse(A);
    RatVector y0(n - 1, Rational(0));
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) y0[i] += Ainv(i, j) * c[j];
    Rational z = t(n - 1, n - 1);
    RatMatrix t0(n - 1, n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) t0(i, i) = t(i, i) / z;
    // b-correction: for i in I_w^0, pick the smallest j in sp(y0), j > i, with w^{-1}(i) < w^{-1}(j)
    IndexSet sp = support(y0), iw = I_w0(w);
    RatMatrix corr = RatMatrix::identity(n - 1);
    for (int i : iw) {
        if (!sp.count(i)) continue;
        for (int j : sp) {
            if (j > i && wi(i) < wi(j)) {
                corr(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = -y0[static_cast<std::size_t>(i - 1)] / y0[static_cast<std::size_t>(j - 1)];
                break;
            }
        }
    }
    RatVector y(n - 1, Rational(0));
    for (std::size_t i = 0; i + 1 < n; ++i)
        for (std::size_t j = 0; j + 1 < n; ++j) y[i] += corr(i, j) * y0[j];
    Classification out{y, w, z, t0 * A * inverse(corr), wim * iota(corr) * wm * utilde};
    return out;
}

/// z iota(b) n(y) w u.
inline RatMatrix reconstruct(const Classification& c)
{
    std::size_t n = c.y.size() + 1;
    RatMatrix zI = RatMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i) zI(i, i) = c.z;
    return zI * iota(c.b) * n_of(c.y) * c.w.matrix() * c.u;
}

// ---------------------------------------------------------------------------
// Stabiliser of n(y) w in U and the a(gamma) predicate

/// Coordinates u_{ij} (1 <= i < j <= n-1) of U_0, a linear system on them and the character form.
struct StabilizerDescription
{
    std::vector<std::pair<int, int>> coords;  ///< free coordinates of U_0, in order
    std::vector<RatVector> constraints;       ///< rows of a linear system C u = 0
    RatVector character;                      ///< psi_U(w^{-1} v w) = psi(<character, u>)
    int dimension = 0;                        ///< #coords - rank(constraints)
};

inline int rank_of(std::vector<RatVector> rows, std::size_t ncols)
{
    int rank = 0;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < rows.size(); ++c) {
        std::size_t piv = rows.size();
        for (std::size_t k = r; k < rows.size(); ++k)
            if (rows[k][c] != 0) {
                piv = k;
                break;
            }
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[r]);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            if (k == r || rows[k][c] == 0) continue;
            Rational f = rows[k][c] / rows[r][c];
            for (std::size_t j = 0; j < ncols; ++j) rows[k][j] -= f * rows[r][j];
        }
        ++r;
        ++rank;
    }
    return rank;
}

/// Conditions (i) and (ii) describing U_[gamma] for gamma = n(y) w, y in Y(w).
inline StabilizerDescription stabilizer(const RatVector& y, const Permutation& w)
{
    int n = w.size();
    if (!in_Y(w, y)) throw std::invalid_argument("stabilizer: y not in Y(w)");
    Permutation wi = w.inverse();
    IndexSet sp = support(y), iw = I_w0(w);
    StabilizerDescription s;
    std::map<std::pair<int, int>, std::size_t> index;
    for (int i = 1; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            index[{i, j}] = s.coords.size();
            s.coords.emplace_back(i, j);
        }
    std::size_t N = s.coords.size();
    // (i)
    for (auto [i, j] : s.coords)
        if (wi(i) > wi(j)) {
            RatVector row(N, Rational(0));
            row[index[{i, j}]] = 1;
            s.constraints.push_back(row);
        }
    // (ii)
    for (int i : iw) {
        if (sp.count(i)) continue;
        RatVector row(N, Rational(0));
        bool any = false;
        for (int j : sp)
            if (j > i && wi(i) < wi(j)) {
                row[index[{i, j}]] = y[static_cast<std::size_t>(j - 1)];
                any = true;
            }
        if (any) s.constraints.push_back(row);
    }
    // character: sum over i of v_{w(i), w(i+1)} with v = [[u, uy - y], [0, 1]]
    s.character.assign(N, Rational(0));
    for (int i = 1; i < n; ++i) {
        int a = w(i), b = w(i + 1);
        if (a > b) continue;
        if (b < n) {
            s.character[index[{a, b}]] += 1;
        } else {
            for (int j = a + 1; j < n; ++j) s.character[index[{a, j}]] += y[static_cast<std::size_t>(j - 1)];
        }
    }
    s.dimension = static_cast<int>(N) - rank_of(s.constraints, N);
    return s;
}

/// a(gamma) for gamma = n(y) w: 1 iff y in Y_Q and w in S_n(Q, y) with Q = w([1, w^{-1}(n) - 1]).
inline int a_gamma(const RatVector& y, const Permutation& w)
{
    IndexSet Q = Q_of(w);
    return (in_YQ(Q, y) && satisfies_SnQy(Q, y, w)) ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Orbit parametrisation

/// Element [u; x, x']_w = w^{-1} [[u, x], [x'^t, 1]] w.
struct OrbitElement
{
    RatMatrix u;
    RatVector x, xp;
};

inline OrbitElement orbit_product(const OrbitElement& a, const OrbitElement& b)
{
    std::size_t m = a.x.size();
    OrbitElement c{a.u * b.u, RatVector(m), RatVector(m)};
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) c.u(i, j) += a.x[i] * b.xp[j];
    for (std::size_t i = 0; i < m; ++i) {
        c.x[i] = a.x[i];
        c.xp[i] = b.xp[i];
        for (std::size_t j = 0; j < m; ++j) {
            c.x[i] += a.u(i, j) * b.x[j];
            c.xp[i] += b.u(j, i) * a.xp[j];
        }
    }
    return c;
}

inline RatMatrix realize(const OrbitElement& e, const Permutation& w)
{
    std::size_t n = e.x.size() + 1;
    RatMatrix m = iota(e.u);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        m(i, n - 1) = e.x[i];
        m(n - 1, i) = e.xp[i];
    }
    return w.inverse().matrix() * m * w.matrix();
}

/// Inverse within the orbit-element group (x'^t x = 0 on F_Q x F_Q'): [u^{-1}(1 + x x'^t u^{-1})... solved from the product law.
inline OrbitElement orbit_inverse(const OrbitElement& a)
{
    std::size_t m = a.x.size();
    RatMatrix ui = inverse(a.u);
    OrbitElement b{RatMatrix(m, m), RatVector(m), RatVector(m)};
    // x_b = -u^{-1} x, x'_b = -u^{-t} x', u_b = u^{-1} (1 - x x'_b^t)
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            b.x[i] -= ui(i, j) * a.x[j];
            b.xp[i] -= ui(j, i) * a.xp[j];
        }
    RatMatrix t = RatMatrix::identity(m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) t(i, j) -= a.x[i] * b.xp[j];
    b.u = ui * t;
    return b;
}

struct CosetParametrization
{
    IndexSet frakN;
    std::vector<IndexSet> J, Jstar;               ///< J_nu(w), J_nu^*(y,w), nu = 1..h
    std::vector<std::pair<int, int>> v0_roots;    ///< root subgroups U_0(i-1, j_nu)
    std::vector<std::pair<int, int>> w0_part;     ///< coordinates of w_0^{-1} Ubar_0 w_0 cap U_0
    int xi_dim = 0, xi_prime_dim = 0;             ///< m-1 and n-m
    bool v0_commutes = true;
    int dimension() const { return static_cast<int>(v0_roots.size() + w0_part.size()) + xi_dim + xi_prime_dim; }
};

inline CosetParametrization coset_parametrization(const IndexSet& Q, const RatVector& y, const Permutation& w)
{
    int n = w.size();
    if (!in_YQ(Q, y) || !satisfies_SnQy(Q, y, w)) throw std::invalid_argument("coset_parametrization: triple not admissible");
    int m = static_cast<int>(Q.size()) + 1;
    IndexSet sp = support(y);
    CosetParametrization cp;
    cp.frakN = frak_N(w);
    std::vector<int> js(cp.frakN.begin(), cp.frakN.end());
    int prev = m;
    for (int jn : js) {
        IndexSet J, Js;
        for (int i = prev + 1; i <= jn; ++i) {
            J.insert(i);
            if (!sp.count(w(i)) && w(i) < w(jn + 1)) Js.insert(i);
        }
        for (int i : Js) cp.v0_roots.emplace_back(i - 1, jn);
        cp.J.push_back(J);
        cp.Jstar.push_back(Js);
        prev = jn;
    }
    Permutation w0 = w0_of(w);
    for (int i = 1; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (w0(i) > w0(j)) cp.w0_part.emplace_back(i, j);
    cp.xi_dim = m - 1;
    cp.xi_prime_dim = n - m;
    for (auto [a, b] : cp.v0_roots)
        for (auto [c, d] : cp.v0_roots)
            if (b == c || d == a) cp.v0_commutes = false;
    return cp;
}

} // namespace gln

#endif // GLN_WEYLCOSET_HPP
