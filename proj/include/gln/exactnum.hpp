// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_EXACTNUM_HPP
#define GLN_EXACTNUM_HPP

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gln {

using Rational = mpq_class;
using Integer = mpz_class;
using cplx = std::complex<double>;

/// Default comparison tolerance of the numeric backend.
inline constexpr double default_tolerance = 1e-9;

/// Reduced fraction n/d.
inline Rational rat(long n, long d = 1)
{
    if (d == 0) throw std::domain_error("rat: zero denominator");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

inline Rational rat(const Integer& n, const Integer& d)
{
    if (d == 0) throw std::domain_error("rat: zero denominator");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

/// Parses "a", "a/b" or "-a/b".
inline Rational parse_rational(const std::string& s)
{
    Rational r;
    if (r.set_str(s, 10) != 0) throw std::invalid_argument("not a rational: " + s);
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + s);
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline bool is_prime(long p)
{
    if (p < 2) return false;
    for (long d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

inline void require_prime(long p)
{
    if (!is_prime(p)) throw std::invalid_argument("not a prime: " + std::to_string(p));
}

/// Integer power p^e as a rational; e may be negative.
inline Rational rpow(long p, long e)
{
    Integer b;
    mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e < 0 ? -e : e));
    return e >= 0 ? Rational(b) : Rational(Integer(1), b);
}

inline Integer ipow(long p, long e)
{
    Integer b;
    mpz_ui_pow_ui(b.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(e));
    return b;
}

/// p-adic valuation of an integer; nullopt stands for +infinity.
inline std::optional<long> valuation(const Integer& x, long p)
{
    require_prime(p);
    if (x == 0) return std::nullopt;
    Integer rest;
    Integer pp(p);
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), pp.get_mpz_t()));
}

/// p-adic valuation of a rational; nullopt stands for +infinity.
inline std::optional<long> valuation(const Rational& x, long p)
{
    require_prime(p);
    if (x == 0) return std::nullopt;
    Integer rest, pp(p);
    long vn = static_cast<long>(mpz_remove(rest.get_mpz_t(), x.get_num_mpz_t(), pp.get_mpz_t()));
    long vd = static_cast<long>(mpz_remove(rest.get_mpz_t(), x.get_den_mpz_t(), pp.get_mpz_t()));
    return vn - vd;
}

/// |x|_p as an exact rational (0 for x = 0).
inline Rational padic_abs(const Rational& x, long p)
{
    auto v = valuation(x, p);
    return v ? rpow(p, -*v) : Rational(0);
}

inline bool is_p_integral(const Rational& x, long p)
{
    auto v = valuation(x, p);
    return !v || *v >= 0;
}

/// A rational number seen as an element of Q_p.
class PAdicView
{
public:
    PAdicView(long p, Rational value) : p_(p), value_(std::move(value)) { require_prime(p_); }

    long prime() const { return p_; }
    const Rational& value() const { return value_; }
    std::optional<long> valuation() const { return gln::valuation(value_, p_); }
    Rational abs() const { return padic_abs(value_, p_); }
    bool is_integral() const { return is_p_integral(value_, p_); }
    bool is_unit() const
    {
        auto v = valuation();
        return v && *v == 0;
    }

private:
    long p_;
    Rational value_;
};

/// Splits x = p^v * u with u a p-unit; x must be nonzero.
inline std::pair<long, Rational> split_unit(const Rational& x, long p)
{
    auto v = valuation(x, p);
    if (!v) throw std::domain_error("split_unit: zero");
    return {*v, x / rpow(p, *v)};
}

/// The p-fractional part of x: the unique a/p^k in [0,1) with x - a/p^k p-integral.
/// Returns (a, k) with 0 <= a < p^k and k = max(0, -v_p(x)).
inline std::pair<Integer, long> frac_p(const Rational& x, long p)
{
    auto v = valuation(x, p);
    if (!v || *v >= 0) return {Integer(0), 0};
    long k = -*v;
    Integer pk = ipow(p, k);
    // x = num / (p^k * u), u coprime to p
    Integer u = x.get_den() / pk;
    Integer uinv;
    if (mpz_invert(uinv.get_mpz_t(), u.get_mpz_t(), pk.get_mpz_t()) == 0)
        throw std::logic_error("frac_p: unit not invertible");
    Integer a = (x.get_num() * uinv) % pk;
    if (a < 0) a += pk;
    return {a, k};
}

// ---------------------------------------------------------------------------
// Cyclotomic values

/// Element of Q(zeta_N) with N = p^k, stored in the power basis 1, zeta, ..., zeta^{phi(N)-1}.
/// Order 1 (k = 0) is plain Q and mixes freely with any prime power.
class CyclotomicValue
{
public:
    CyclotomicValue() : p_(1), k_(0), c_(1, Rational(0)) {}
    CyclotomicValue(const Rational& r) : p_(1), k_(0), c_(1, r) {} // NOLINT(implicit)
    CyclotomicValue(long r) : CyclotomicValue(Rational(r)) {}       // NOLINT(implicit)

    /// zeta_{p^k}^e.
    static CyclotomicValue root(long p, long k, long e)
    {
        if (k == 0) return CyclotomicValue(Rational(1));
        require_prime(p);
        CyclotomicValue z;
        z.p_ = p;
        z.k_ = k;
        long N = order_of(p, k);
        std::vector<Rational> full(static_cast<std::size_t>(N), Rational(0));
        long ee = ((e % N) + N) % N;
        full[static_cast<std::size_t>(ee)] = 1;
        z.c_ = reduce(p, k, std::move(full));
        z.normalize();
        return z;
    }

    long prime() const { return p_; }
    long exponent() const { return k_; }
    long order() const { return order_of(p_, k_); }
    const std::vector<Rational>& coefficients() const { return c_; }

    bool is_zero() const
    {
        for (const auto& x : c_)
            if (x != 0) return false;
        return true;
    }

    bool is_rational() const { return k_ == 0; }

    Rational rational_part() const
    {
        if (!is_rational()) throw std::domain_error("CyclotomicValue: not rational");
        return c_[0];
    }

    cplx to_complex() const
    {
        cplx s = 0;
        long N = order();
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (c_[i] == 0) continue;
            double ang = 2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(N);
            s += c_[i].get_d() * cplx(std::cos(ang), std::sin(ang));
        }
        return s;
    }

    CyclotomicValue operator-() const
    {
        CyclotomicValue r = *this;
        for (auto& x : r.c_) x = -x;
        return r;
    }

    friend CyclotomicValue operator+(const CyclotomicValue& a, const CyclotomicValue& b)
    {
        auto [p, k] = common(a, b);
        std::vector<Rational> x = a.lift(p, k), y = b.lift(p, k);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] += y[i];
        return make(p, k, std::move(x));
    }

    friend CyclotomicValue operator-(const CyclotomicValue& a, const CyclotomicValue& b) { return a + (-b); }

    friend CyclotomicValue operator*(const CyclotomicValue& a, const CyclotomicValue& b)
    {
        auto [p, k] = common(a, b);
        std::vector<Rational> x = a.lift(p, k), y = b.lift(p, k);
        long N = order_of(p, k);
        std::vector<Rational> prod(static_cast<std::size_t>(N), Rational(0));
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] == 0) continue;
            for (std::size_t j = 0; j < y.size(); ++j) {
                if (y[j] == 0) continue;
                prod[(i + j) % static_cast<std::size_t>(N)] += x[i] * y[j];
            }
        }
        return make(p, k, reduce(p, k, std::move(prod)));
    }

    CyclotomicValue& operator+=(const CyclotomicValue& o) { return *this = *this + o; }
    CyclotomicValue& operator-=(const CyclotomicValue& o) { return *this = *this - o; }
    CyclotomicValue& operator*=(const CyclotomicValue& o) { return *this = *this * o; }

    friend bool operator==(const CyclotomicValue& a, const CyclotomicValue& b) { return (a - b).is_zero(); }

    friend std::ostream& operator<<(std::ostream& os, const CyclotomicValue& v)
    {
        bool first = true;
        for (std::size_t i = 0; i < v.c_.size(); ++i) {
            if (v.c_[i] == 0) continue;
            if (!first) os << " + ";
            first = false;
            os << v.c_[i];
            if (i > 0) os << "*z" << v.order() << "^" << i;
        }
        if (first) os << 0;
        return os;
    }

private:
    long p_;
    long k_;
    std::vector<Rational> c_; // length phi(p^k)

    static long order_of(long p, long k)
    {
        long N = 1;
        for (long i = 0; i < k; ++i) N *= p;
        return N;
    }

    static long phi(long p, long k) { return k == 0 ? 1 : order_of(p, k - 1) * (p - 1); }

    // Reduces a length-N vector (exponents mod N) modulo Phi_{p^k}.
    static std::vector<Rational> reduce(long p, long k, std::vector<Rational> full)
    {
        if (k == 0) return full;
        long q = order_of(p, k - 1);
        long ph = phi(p, k);
        // zeta^{(p-1)q + r} = -sum_{i=0}^{p-2} zeta^{iq + r}
        for (long e = static_cast<long>(full.size()) - 1; e >= ph; --e) {
            Rational c = full[static_cast<std::size_t>(e)];
            if (c == 0) continue;
            full[static_cast<std::size_t>(e)] = 0;
            long r = e - (p - 1) * q;
            for (long i = 0; i <= p - 2; ++i) full[static_cast<std::size_t>(i * q + r)] -= c;
        }
        full.resize(static_cast<std::size_t>(ph));
        return full;
    }

    static std::pair<long, long> common(const CyclotomicValue& a, const CyclotomicValue& b)
    {
        if (a.k_ == 0) return {b.p_, b.k_};
        if (b.k_ == 0) return {a.p_, a.k_};
        if (a.p_ != b.p_) throw std::domain_error("CyclotomicValue: mixed prime orders are not supported");
        return {a.p_, std::max(a.k_, b.k_)};
    }

    // Coefficients over the full cyclic basis of Q(zeta_{p^k}) of length p^k.
    std::vector<Rational> lift(long p, long k) const
    {
        long N = order_of(p, k);
        std::vector<Rational> out(static_cast<std::size_t>(N), Rational(0));
        long step = k_ == 0 ? 0 : order_of(p, k - k_);
        for (std::size_t i = 0; i < c_.size(); ++i) out[static_cast<std::size_t>(static_cast<long>(i) * step % N)] += c_[i];
        return out;
    }

    static CyclotomicValue make(long p, long k, std::vector<Rational> v)
    {
        CyclotomicValue r;
        r.p_ = k == 0 ? 1 : p;
        r.k_ = k;
        r.c_ = k == 0 ? std::vector<Rational>{v[0]} : reduce(p, k, std::move(v));
        r.normalize();
        return r;
    }

    // Drops to the smallest subfield that contains the value.
    void normalize()
    {
        while (k_ > 0) {
            // in the reduced basis the subfield Q(zeta_{p^{k-1}}) is spanned by the powers divisible by p
            bool ok = true;
            for (std::size_t i = 0; i < c_.size(); ++i)
                if (c_[i] != 0 && static_cast<long>(i) % p_ != 0) ok = false;
            if (!ok) break;
            if (k_ == 1) {
                // reduced basis of Q(zeta_p) is 1..zeta^{p-2}; only index 0 survives
                p_ = 1;
                k_ = 0;
                c_ = {c_[0]};
                break;
            }
            long nk = k_ - 1;
            std::vector<Rational> nc(static_cast<std::size_t>(phi(p_, nk)), Rational(0));
            for (std::size_t i = 0; i < c_.size(); i += static_cast<std::size_t>(p_)) nc[i / static_cast<std::size_t>(p_)] = c_[i];
            k_ = nk;
            c_ = std::move(nc);
        }
        if (k_ == 0) p_ = 1;
    }
};

inline bool is_zero(const CyclotomicValue& x) { return x.is_zero(); }
inline bool is_zero(const Rational& x) { return x == 0; }
inline bool is_zero(const cplx& x) { return x == cplx(0); }

/// psi_p(x) = exp(2 pi i frac_p(x)) as an exact root of unity.
inline CyclotomicValue psi_p(const Rational& x, long p)
{
    require_prime(p);
    auto [a, k] = frac_p(x, p);
    if (k == 0) return CyclotomicValue(Rational(1));
    // a < p^k fits in long for every k used here
    return CyclotomicValue::root(p, k, a.get_si());
}

// ---------------------------------------------------------------------------
// Formal half powers of p

/// Finite sum of c_e * q^{e/2} with q = p, coefficients in Q(zeta_{p^k}).
/// Integral powers of p are folded into the coefficients, so only e in {0, 1} is stored.
class HalfPowerLaurent
{
public:
    HalfPowerLaurent() = default;
    HalfPowerLaurent(long p, const CyclotomicValue& c) : p_(p) { add_term(0, c); }
    HalfPowerLaurent(const Rational& r) { add_term(0, CyclotomicValue(r)); } // NOLINT(implicit)
    HalfPowerLaurent(long r) : HalfPowerLaurent(Rational(r)) {}              // NOLINT(implicit)

    /// q^{twice/2} for the prime p.
    static HalfPowerLaurent half_power(long p, long twice)
    {
        HalfPowerLaurent h;
        h.p_ = p;
        h.add_term(twice, CyclotomicValue(Rational(1)));
        return h;
    }

    long base() const { return p_; }
    const std::map<int, CyclotomicValue>& terms() const { return t_; }

    bool is_zero() const { return t_.empty(); }

    cplx to_complex() const
    {
        cplx s = 0;
        for (const auto& [e, c] : t_) s += c.to_complex() * (e == 0 ? 1.0 : std::sqrt(static_cast<double>(p_)));
        return s;
    }

    HalfPowerLaurent operator-() const
    {
        HalfPowerLaurent r = *this;
        for (auto& [e, c] : r.t_) c = -c;
        return r;
    }

    friend HalfPowerLaurent operator+(const HalfPowerLaurent& a, const HalfPowerLaurent& b)
    {
        HalfPowerLaurent r = a;
        r.p_ = merge_base(a, b);
        for (const auto& [e, c] : b.t_) r.add_term(e, c);
        return r;
    }

    friend HalfPowerLaurent operator-(const HalfPowerLaurent& a, const HalfPowerLaurent& b) { return a + (-b); }

    friend HalfPowerLaurent operator*(const HalfPowerLaurent& a, const HalfPowerLaurent& b)
    {
        HalfPowerLaurent r;
        r.p_ = merge_base(a, b);
        for (const auto& [e1, c1] : a.t_)
            for (const auto& [e2, c2] : b.t_) r.add_term(e1 + e2, c1 * c2);
        return r;
    }

    HalfPowerLaurent& operator+=(const HalfPowerLaurent& o) { return *this = *this + o; }
    HalfPowerLaurent& operator-=(const HalfPowerLaurent& o) { return *this = *this - o; }
    HalfPowerLaurent& operator*=(const HalfPowerLaurent& o) { return *this = *this * o; }

    friend bool operator==(const HalfPowerLaurent& a, const HalfPowerLaurent& b) { return (a - b).is_zero(); }

    friend std::ostream& operator<<(std::ostream& os, const HalfPowerLaurent& h)
    {
        if (h.t_.empty()) return os << 0;
        bool first = true;
        for (const auto& [e, c] : h.t_) {
            if (!first) os << " + ";
            first = false;
            os << "(" << c << ")";
            if (e == 1) os << "*q^(1/2)";
        }
        return os;
    }

private:
    long p_ = 0; // 0 while no half power has been seen
    std::map<int, CyclotomicValue> t_;

    static long merge_base(const HalfPowerLaurent& a, const HalfPowerLaurent& b)
    {
        if (a.p_ == 0) return b.p_;
        if (b.p_ == 0 || a.p_ == b.p_) return a.p_;
        throw std::domain_error("HalfPowerLaurent: different bases");
    }

    void add_term(int twice, CyclotomicValue c)
    {
        if (c.is_zero()) return;
        int parity = ((twice % 2) + 2) % 2;
        int whole = (twice - parity) / 2;
        if (whole != 0) {
            if (p_ == 0) throw std::domain_error("HalfPowerLaurent: base not set");
            c = c * CyclotomicValue(rpow(p_, whole));
        }
        if (parity == 1 && p_ == 0) throw std::domain_error("HalfPowerLaurent: base not set");
        auto it = t_.find(parity);
        if (it == t_.end()) {
            t_.emplace(parity, std::move(c));
        } else {
            it->second += c;
            if (it->second.is_zero()) t_.erase(it);
        }
    }
};

inline bool is_zero(const HalfPowerLaurent& x) { return x.is_zero(); }

// ---------------------------------------------------------------------------
// Embedding into C

inline cplx to_complex(const Rational& x) { return {x.get_d(), 0.0}; }
inline cplx to_complex(const CyclotomicValue& x) { return x.to_complex(); }
inline cplx to_complex(const HalfPowerLaurent& x) { return x.to_complex(); }
inline cplx to_complex(const cplx& x) { return x; }

/// Scaled error |a-b| / max(1, |b|) used by all numeric checks.
inline double scaled_error(cplx value, cplx reference)
{
    return std::abs(value - reference) / std::max(1.0, std::abs(reference));
}

} // namespace gln

#endif // GLN_EXACTNUM_HPP
