// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_POLY_HPP
#define GLN_POLY_HPP

#include "exactnum.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace gln {

using Exponent = std::vector<int>;

namespace detail {
// unqualified so that overloads found by ADL at instantiation also take part
template <class C>
bool coeff_is_zero(const C& c)
{
    return is_zero(c);
}
} // namespace detail

/// Multivariate Laurent polynomial with coefficients in C.
/// C needs +, -, *, unary - and a free is_zero(const C&).
template <class C>
class LaurentPoly
{
public:
    LaurentPoly() = default;
    LaurentPoly(int constant) : LaurentPoly(0, C(constant)) {} // NOLINT(implicit)
    LaurentPoly(const C& constant) : LaurentPoly(0, constant) {} // NOLINT(implicit)
    LaurentPoly(std::size_t nvars, const C& constant) : n_(nvars)
    {
        if (!detail::coeff_is_zero(constant)) t_.emplace(Exponent(nvars, 0), constant);
    }

    /// Zero polynomial in nvars variables.
    static LaurentPoly zero(std::size_t nvars)
    {
        LaurentPoly r;
        r.n_ = nvars;
        return r;
    }

    /// The variable x_i (0-based).
    static LaurentPoly variable(std::size_t nvars, std::size_t i)
    {
        Exponent e(nvars, 0);
        e.at(i) = 1;
        return monomial(e, C(1));
    }

    static LaurentPoly monomial(const Exponent& e, const C& c)
    {
        LaurentPoly r = zero(e.size());
        if (!detail::coeff_is_zero(c)) r.t_.emplace(e, c);
        return r;
    }

    std::size_t nvars() const { return n_; }
    const std::map<Exponent, C>& terms() const { return t_; }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }

    /// Pads every exponent to at least n variables.
    void widen(std::size_t n)
    {
        if (n <= n_) return;
        std::map<Exponent, C> t;
        for (auto& [e, c] : t_) {
            Exponent f = e;
            f.resize(n, 0);
            t.emplace(std::move(f), std::move(c));
        }
        t_ = std::move(t);
        n_ = n;
    }

    void add_term(const Exponent& e0, const C& c)
    {
        if (is_zero_c(c)) return;
        widen(e0.size());
        Exponent e = e0;
        e.resize(n_, 0);
        auto it = t_.find(e);
        if (it == t_.end()) {
            t_.emplace(e, c);
        } else {
            it->second = it->second + c;
            if (is_zero_c(it->second)) t_.erase(it);
        }
    }

    LaurentPoly operator-() const
    {
        LaurentPoly r = *this;
        for (auto& [e, c] : r.t_) c = -c;
        return r;
    }

    friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b)
    {
        LaurentPoly r = a;
        r.widen(b.n_);
        for (const auto& [e, c] : b.t_) r.add_term(e, c);
        return r;
    }

    friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }

    friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b)
    {
        LaurentPoly r = zero(std::max(a.n_, b.n_));
        Exponent e(r.n_);
        for (const auto& [e1, c1] : a.t_)
            for (const auto& [e2, c2] : b.t_) {
                for (std::size_t i = 0; i < r.n_; ++i) e[i] = (i < e1.size() ? e1[i] : 0) + (i < e2.size() ? e2[i] : 0);
                r.add_term(e, c1 * c2);
            }
        return r;
    }

    friend LaurentPoly operator*(const C& s, const LaurentPoly& a)
    {
        LaurentPoly r = zero(a.n_);
        for (const auto& [e, c] : a.t_) r.add_term(e, s * c);
        return r;
    }

    LaurentPoly& operator+=(const LaurentPoly& o) { return *this = *this + o; }
    LaurentPoly& operator-=(const LaurentPoly& o) { return *this = *this - o; }
    LaurentPoly& operator*=(const LaurentPoly& o) { return *this = *this * o; }

    friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) { return (a - b).is_zero(); }

    /// Polynomial with variables renamed: new exponent[perm[i]] = old exponent[i].
    LaurentPoly permuted(const std::vector<std::size_t>& perm) const
    {
        LaurentPoly r = zero(n_);
        Exponent f(n_);
        for (const auto& [e, c] : t_) {
            for (std::size_t i = 0; i < n_; ++i) f[perm[i]] = e[i];
            r.add_term(f, c);
        }
        return r;
    }

    /// Maximal exponent of variable i (throws on the zero polynomial).
    int degree_in(std::size_t i) const
    {
        if (t_.empty()) throw std::domain_error("degree of zero polynomial");
        int d = t_.begin()->first[i];
        for (const auto& [e, c] : t_) d = std::max(d, e[i]);
        return d;
    }

    /// Evaluates with a ring homomorphism C -> R and values for the variables.
    template <class R>
    R evaluate(const std::vector<R>& x, const std::function<R(const C&)>& embed) const
    {
        if (x.size() < n_) throw std::invalid_argument("LaurentPoly: unbound variable");
        R s = R(0);
        for (const auto& [e, c] : t_) {
            R m = embed(c);
            for (std::size_t i = 0; i < n_; ++i) m = m * ipow_r(x[i], e[i]);
            s = s + m;
        }
        return s;
    }

    /// Exact quotient by (x_a - x_b); throws if the division leaves a remainder.
    LaurentPoly divide_by_difference(std::size_t a, std::size_t b) const
    {
        using BPoly = std::map<int, C>; // polynomial in x_b
        // group by the exponents of every variable other than x_a, x_b
        std::map<Exponent, std::map<int, BPoly>> groups;
        for (const auto& [e, c] : t_) {
            Exponent key = e;
            key[a] = 0;
            key[b] = 0;
            groups[key][e[a]][e[b]] = c;
        }
        auto shift_add = [](const BPoly& q, const BPoly* c) {
            BPoly out;
            for (const auto& [eb, cc] : q) out.emplace(eb + 1, cc);
            if (c)
                for (const auto& [eb, cc] : *c) {
                    auto it = out.find(eb);
                    if (it == out.end()) out.emplace(eb, cc);
                    else it->second = it->second + cc;
                }
            return out;
        };
        LaurentPoly q = zero(n_);
        for (const auto& [key, coeffs] : groups) {
            int lo = coeffs.begin()->first, hi = coeffs.rbegin()->first;
            // q_{k-1} = c_k + x_b q_k, from the top; remainder c_lo + x_b q_lo
            BPoly carry;
            for (int k = hi; k > lo; --k) {
                auto it = coeffs.find(k);
                carry = shift_add(carry, it == coeffs.end() ? nullptr : &it->second);
                for (const auto& [eb, cc] : carry) {
                    Exponent e = key;
                    e[a] = k - 1;
                    e[b] = eb;
                    q.add_term(e, cc);
                }
            }
            BPoly rem = shift_add(carry, &coeffs.at(lo));
            for (const auto& [eb, cc] : rem)
                if (!is_zero_c(cc)) throw std::domain_error("divide_by_difference: not divisible");
        }
        return q;
    }

    friend std::ostream& operator<<(std::ostream& os, const LaurentPoly& p)
    {
        if (p.t_.empty()) return os << 0;
        bool first = true;
        for (const auto& [e, c] : p.t_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c << ")";
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] != 0) os << "*x" << i << "^" << e[i];
        }
        return os;
    }

private:
    std::size_t n_ = 0;
    std::map<Exponent, C> t_;

    static bool is_zero_c(const C& c) { return detail::coeff_is_zero(c); }

    template <class R>
    static R ipow_r(const R& x, int e)
    {
        if (e == 0) return R(1);
        R base = e > 0 ? x : R(1) / x;
        int k = e > 0 ? e : -e;
        R r = R(1);
        while (k) {
            if (k & 1) r = r * base;
            base = base * base;
            k >>= 1;
        }
        return r;
    }
};

template <class C>
bool is_zero(const LaurentPoly<C>& p)
{
    return p.is_zero();
}

using RatPoly = LaurentPoly<Rational>;

/// Numeric evaluation of a rational polynomial.
inline cplx eval_complex(const RatPoly& f, const std::vector<cplx>& x)
{
    return f.evaluate<cplx>(x, [](const Rational& c) { return cplx(c.get_d(), 0.0); });
}

/// Exact evaluation of a rational polynomial at rational points.
inline Rational eval_rational(const RatPoly& f, const std::vector<Rational>& x)
{
    return f.evaluate<Rational>(x, [](const Rational& c) { return c; });
}

} // namespace gln

#endif // GLN_POLY_HPP
