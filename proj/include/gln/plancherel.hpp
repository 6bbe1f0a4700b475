// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_PLANCHEREL_HPP
#define GLN_PLANCHEREL_HPP

#include "exactnum.hpp"
#include "oldforms.hpp"
#include "poly.hpp"
#include "symfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

namespace gln {

// ---------------------------------------------------------------------------
// p-adic Plancherel density on X_p^0(1)

/// |c(is)|^{-2} with c(s) = prod_{i<j} zeta_p(s_i - s_j) / zeta_p(s_i - s_j + 1), s real.
inline double padic_c_inverse_square(const std::vector<double>& s, long p)
{
    double lp = std::log(static_cast<double>(p)), q = 1.0 / static_cast<double>(p), r = 1;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            double c = std::cos((s[i] - s[j]) * lp);
            r *= (2 - 2 * c) / (1 - 2 * q * c + q * q);
        }
    return r;
}

/// zeta_p(1)^n Delta_{G,p}(1)^{-1} / n! with Delta_{G,p}(1) = prod_{k=1}^n zeta_p(k).
inline double padic_plancherel_constant(long p, int n)
{
    double c = 1;
    for (int k = 1; k <= n; ++k) c *= (1 - std::pow(static_cast<double>(p), -k)) / (1 - 1.0 / static_cast<double>(p)) / k;
    return c;
}

/// Density of the Plancherel measure of PGL_n(Q_p) against d_0 s (total volume 1).
inline double padic_density(const std::vector<double>& s, long p)
{
    require_prime(p);
    int n = static_cast<int>(s.size());
    if (n < 1) throw std::invalid_argument("padic_density: empty s");
    double sum = 0;
    for (double x : s) sum += x;
    double period = 2 * std::numbers::pi / std::log(static_cast<double>(p));
    double r = std::remainder(sum, period);
    if (std::abs(r) > 1e-9 * std::max(1.0, std::abs(sum))) throw std::domain_error("padic_density: s is not on X_p^0(1)");
    return padic_plancherel_constant(p, n) * padic_c_inverse_square(s, p);
}

/// |c|^{-2} as a rational function of a_j = p^{i s_j} (conj a_j = 1/a_j), numerator and denominator
/// in n variables for a fixed prime: prod_{i<j} -p^2 (a_i - a_j)^2 / ((p a_j - a_i)(p a_i - a_j)).
struct RationalFunction
{
    RatPoly num, den;
};

inline RationalFunction padic_c_inverse_square_poly(int n, long p)
{
    auto a = poly_variables(static_cast<std::size_t>(n));
    auto nv = static_cast<std::size_t>(n);
    RatPoly num(nv, Rational(1)), den(nv, Rational(1));
    RatPoly P(nv, Rational(p)), k(nv, Rational(-p * p));
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const RatPoly &x = a[static_cast<std::size_t>(i)], &y = a[static_cast<std::size_t>(j)];
            num = num * k * (x - y) * (x - y);
            den = den * (P * y - x) * (P * x - y);
        }
    return {num, den};
}

// ---------------------------------------------------------------------------
// Torus quadrature

struct QuadratureResult
{
    double value = 0, reference = 0, error = 0;
    int nodes = 0; ///< per dimension
};

namespace detail {

/// Neumaier-compensated sum.
struct CompensatedSum
{
    double s = 0, c = 0;
    void add(double x)
    {
        double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

/// Mean of f over the uniform grid of N^{n-1} nodes on X_p^0(1), s_n = -sum s_i.
/// Rows (first coordinate) are summed independently and combined in order, so the result
/// does not depend on the thread count.
inline double torus_mean(int n, long p, int N, int threads, const std::function<double(const std::vector<double>&)>& f)
{
    if (n < 2) throw std::invalid_argument("torus quadrature: n >= 2");
    if (N < 1) throw std::invalid_argument("torus quadrature: nodes must be positive");
    double period = 2 * std::numbers::pi / std::log(static_cast<double>(p)), h = period / N;
    long inner = 1;
    for (int d = 1; d < n - 1; ++d) inner *= N;
    std::vector<double> rows(static_cast<std::size_t>(N));
    auto work = [&](int lo, int hi) {
        std::vector<double> s(static_cast<std::size_t>(n));
        for (int r = lo; r < hi; ++r) {
            CompensatedSum acc;
            for (long k = 0; k < inner; ++k) {
                s[0] = r * h;
                long rest = k;
                double sum = s[0];
                for (int d = 1; d < n - 1; ++d) {
                    s[static_cast<std::size_t>(d)] = static_cast<double>(rest % N) * h;
                    rest /= N;
                    sum += s[static_cast<std::size_t>(d)];
                }
                s[static_cast<std::size_t>(n - 1)] = -sum;
                acc.add(f(s));
            }
            rows[static_cast<std::size_t>(r)] = acc.value();
        }
    };
    int T = std::max(1, std::min(threads, N));
    std::vector<std::thread> pool;
    for (int i = 0; i < T; ++i) pool.emplace_back(work, N * i / T, N * (i + 1) / T);
    for (auto& t : pool) t.join();
    CompensatedSum total;
    for (double r : rows) total.add(r);
    return total.value() / (static_cast<double>(N) * static_cast<double>(inner));
}

} // namespace detail

/// Total Plancherel mass; the Satake transform of the characteristic function of Z K is 1, so the mass is 1.
inline QuadratureResult padic_mass(long p, int n, int nodes = 64, int threads = 1)
{
    require_prime(p);
    double v = detail::torus_mean(n, p, nodes, threads, [&](const std::vector<double>& s) {
        return padic_plancherel_constant(p, n) * padic_c_inverse_square(s, p);
    });
    return {v, 1.0, std::abs(v - 1.0), nodes};
}

/// int |e_j(p^{-is})|^2 dmu^Pl against the L^2 norm of p^{-j(n-j)/2} char(K diag(p 1_j, 1_{n-j}) K Z) on Z\G,
/// which is p^{-j(n-j)} times the number of cosets [n choose j]_p.
inline QuadratureResult padic_parseval(long p, int n, int j, int nodes = 128, int threads = 1)
{
    require_prime(p);
    if (j < 1 || j > n - 1) throw std::invalid_argument("padic_parseval: need 1 <= j <= n-1");
    double lp = std::log(static_cast<double>(p));
    double v = detail::torus_mean(n, p, nodes, threads, [&](const std::vector<double>& s) {
        CVector t;
        for (double x : s) t.push_back(std::polar(1.0, -x * lp));
        return std::norm(elementary(j, t)) * padic_plancherel_constant(p, n) * padic_c_inverse_square(s, p);
    });
    double rhs = std::pow(static_cast<double>(p), -j * (n - j)) * gaussian_binomial(n, j, p).get_d();
    return {v, rhs, std::abs(v - rhs), nodes};
}

// ---------------------------------------------------------------------------
// Archimedean place

/// log Gamma(z) for complex z (Lanczos, g = 7, with reflection for Re z < 1/2).
/// The real part is log|Gamma(z)|; the imaginary part is only determined modulo 2 pi.
inline cplx lgamma_complex(cplx z)
{
    static constexpr std::array<double, 9> c{0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                             771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                             -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double pi = std::numbers::pi;
    if (z.real() < 0.5) {
        // log sin(pi z) without overflow for large |Im z|
        cplx w = pi * z, I(0, 1);
        cplx ls = w.imag() >= 0 ? -I * w + std::log(1.0 - std::exp(2.0 * I * w)) - std::log(-2.0 * I)
                                : I * w + std::log(1.0 - std::exp(-2.0 * I * w)) - std::log(2.0 * I);
        return std::log(pi) - ls - lgamma_complex(1.0 - z);
    }
    z -= 1.0;
    cplx x = c[0];
    for (std::size_t i = 1; i < c.size(); ++i) x += c[i] / (z + static_cast<double>(i));
    cplx t = z + 7.5;
    return 0.5 * std::log(2 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

/// log Gamma_R(z) = log(pi^{-z/2} Gamma(z/2)).
inline cplx log_gamma_R(cplx z) { return -0.5 * z * std::log(std::numbers::pi) + lgamma_complex(0.5 * z); }

/// Delta_{G,inf}(1) = prod_{j=1}^n Gamma_R(j).
inline double arch_delta_G(int n)
{
    double d = 1;
    for (int j = 1; j <= n; ++j) d *= std::exp(log_gamma_R(cplx(j)).real());
    return d;
}

/// |c(is)|^{-2} with c(s) = prod_{i<j} Gamma_R(s_i-s_j)/Gamma_R(s_i-s_j+1), s real:
/// prod_{i<j} (y/(2 pi)) tanh(pi y/2), y = s_i - s_j.
inline double arch_c_inverse_square(const std::vector<double>& s)
{
    double r = 1;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) {
            double y = s[i] - s[j];
            r *= y / (2 * std::numbers::pi) * std::tanh(std::numbers::pi * y / 2);
        }
    return r;
}

/// Archimedean Plancherel density against d_0 s.
inline double arch_density(const std::vector<double>& s)
{
    int n = static_cast<int>(s.size());
    if (n < 1) throw std::invalid_argument("arch_density: empty s");
    double fact = std::tgamma(n + 1.0);
    return arch_c_inverse_square(s) / (arch_delta_G(n) * fact);
}

struct ArchBoundReport
{
    int n = 3;
    double radius = 0, step = 0;
    long points = 0;
    double c_inf = 0;          ///< inf of |c(is)| prod (1 + s_i - s_j)^{1/2}
    double exponent = 0;       ///< fitted r (largest per-nu slope)
    std::vector<double> exponents; ///< per-nu slopes
    double constant = 0;       ///< smallest const with log Q <= r log(1+|s|) + const on the grid
    double tail_residual = 0;  ///< max over the outer half of the grid of log Q - (r log(1+|s|) + const)
    std::vector<CVector> nus;  ///< sampled nu
};

/// log |M_{G,inf}(-is)^{-1} prod_j L(1/2 + nu_j, I(-is))| with M(is) = prod_{i<j} Gamma_R(1 + i(s_i - s_j))
/// and L(z, I(-is)) = prod_k Gamma_R(z - i s_k).
inline double arch_log_growth(const std::vector<double>& s, const CVector& nu)
{
    const cplx I(0, 1);
    double v = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = i + 1; j < s.size(); ++j) v -= log_gamma_R(1.0 - I * (s[i] - s[j])).real();
    for (const auto& x : nu)
        for (double sk : s) v += log_gamma_R(0.5 + x - I * sk).real();
    return v;
}

/// s in (t*[0])^+ from gaps g_i = s_i - s_{i+1} >= 0.
inline std::vector<double> from_gaps(const std::vector<double>& g)
{
    std::size_t n = g.size() + 1;
    std::vector<double> s(n, 0.0);
    for (std::size_t i = n - 1; i-- > 0;) s[i] = s[i + 1] + g[i];
    double mean = 0;
    for (double x : s) mean += x;
    mean /= static_cast<double>(n);
    for (auto& x : s) x -= mean;
    return s;
}

/// Pointwise checks on the dominant grid {gaps in step Z_{>=0}, |s| <= radius}.
inline ArchBoundReport arch_c_bound_check(int n, double radius, double step = 0.5, int nu_samples = 6, unsigned long seed = 1)
{
    if (n < 2) throw std::invalid_argument("arch_c_bound_check: n >= 2");
    if (!(radius > 0) || !(step > 0)) throw std::invalid_argument("arch_c_bound_check: radius and step must be positive");
    ArchBoundReport rep;
    rep.n = n;
    rep.radius = radius;
    rep.step = step;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> re(-0.45, 1.0), im(-3.0, 3.0);
    for (int k = 0; k < nu_samples; ++k) {
        CVector nu;
        for (int j = 0; j + 1 < n; ++j) nu.emplace_back(re(rng), im(rng));
        rep.nus.push_back(nu);
    }
    int G = static_cast<int>(std::ceil(2 * radius / step)) + 1;
    std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
    std::vector<std::pair<double, std::vector<double>>> pts; // (log(1+|s|), log Q per nu)
    rep.c_inf = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<double> g;
        for (int v : idx) g.push_back(v * step);
        auto s = from_gaps(g);
        double norm = 0;
        for (double x : s) norm += x * x;
        norm = std::sqrt(norm);
        if (norm <= radius) {
            ++rep.points;
            double cb = 0;
            bool regular = true;
            for (std::size_t i = 0; i < s.size(); ++i)
                for (std::size_t j = i + 1; j < s.size(); ++j) {
                    double y = s[i] - s[j];
                    if (y == 0) regular = false;
                    cb += 0.5 * std::log1p(y);
                }
            if (regular) rep.c_inf = std::min(rep.c_inf, std::exp(cb - 0.5 * std::log(arch_c_inverse_square(s))));
            std::vector<double> vals;
            for (const auto& nu : rep.nus) vals.push_back(arch_log_growth(s, nu));
            pts.emplace_back(std::log1p(norm), std::move(vals));
        }
        std::size_t d = 0;
        while (d < idx.size() && ++idx[d] >= G) idx[d++] = 0;
        if (d == idx.size()) break;
    }
    // per nu: least-squares slope of the shell maxima (shells of width 4 step) over the outer half of the radius;
    // r is the largest of these slopes
    rep.exponents.assign(rep.nus.size(), 0.0);
    for (std::size_t k = 0; k < rep.nus.size(); ++k) {
        std::map<long, double> shell;
        for (const auto& [x, ys] : pts) {
            long key = std::lround(std::expm1(x) / (4 * step));
            auto it = shell.find(key);
            if (it == shell.end() || ys[k] > it->second) shell[key] = ys[k];
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        long cnt = 0;
        for (const auto& [key, y] : shell) {
            double r = static_cast<double>(key) * 4 * step;
            if (r < 0.5 * radius) continue;
            double x = std::log1p(r);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
            ++cnt;
        }
        if (cnt >= 2) rep.exponents[k] = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    }
    rep.exponent = rep.exponents.empty() ? 0.0 : *std::max_element(rep.exponents.begin(), rep.exponents.end());
    rep.constant = -std::numeric_limits<double>::infinity();
    for (const auto& [x, ys] : pts)
        for (double y : ys) rep.constant = std::max(rep.constant, y - rep.exponent * x);
    rep.tail_residual = -std::numeric_limits<double>::infinity();
    for (const auto& [x, ys] : pts)
        if (std::expm1(x) >= 0.5 * radius)
            for (double y : ys) rep.tail_residual = std::max(rep.tail_residual, y - rep.exponent * x - rep.constant);
    return rep;
}

// ---------------------------------------------------------------------------
// Shifting off the hyperplanes nu_i - nu_j = +-1

/// nu in D: some nu_i - nu_j = +-1 (exact).
inline bool in_hyperplane_union(const std::vector<Rational>& nu)
{
    for (std::size_t i = 0; i < nu.size(); ++i)
        for (std::size_t j = i + 1; j < nu.size(); ++j) {
            Rational d = nu[i] - nu[j];
            if (d == 1 || d == -1) return true;
        }
    return false;
}

/// Floating version with margin 1e-12.
inline bool in_hyperplane_union(const std::vector<double>& nu)
{
    for (std::size_t i = 0; i < nu.size(); ++i)
        for (std::size_t j = i + 1; j < nu.size(); ++j)
            if (std::abs(std::abs(nu[i] - nu[j]) - 1.0) <= 1e-12) return true;
    return false;
}

struct HyperplaneShift
{
    std::vector<Rational> nu0, mu;
    Rational C, delta;
    std::vector<std::pair<int, int>> R; ///< pairs with nu0_i - nu0_j = +-1 (0-based)
    long samples = 0, failures = 0;
    bool passed() const { return failures == 0; }
};

/// delta = C/4 and mu_i in {0, 3 delta/4} by a 2-colouring of the graph of pairs in R
/// (bipartite: a cycle of +-1 steps has even length), so |mu_i - mu_j| = 3 delta/4 on R and < delta everywhere.
/// Certificate: exact rational samples nu with |nu - nu0| < delta/8 all have nu + mu outside D.
inline HyperplaneShift shift_off_hyperplanes(const std::vector<Rational>& nu0, long samples = 10000, unsigned long seed = 1)
{
    std::size_t m = nu0.size();
    HyperplaneShift out;
    out.nu0 = nu0;
    Rational mind = 4; // bounds C by 2
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) {
            Rational d = nu0[i] - nu0[j];
            if (d == 1 || d == -1) {
                out.R.emplace_back(static_cast<int>(i), static_cast<int>(j));
                mind = std::min(mind, Rational(abs(-d - d)));
            } else {
                mind = std::min(mind, Rational(abs(1 - abs(d))));
            }
        }
    out.C = mind / 2;
    out.delta = out.C / 4;
    std::vector<int> colour(m, -1);
    int comp = 0;
    for (std::size_t s = 0; s < m; ++s) {
        if (colour[s] >= 0) continue;
        colour[s] = comp++ % 2;
        std::vector<std::size_t> stack{s};
        while (!stack.empty()) {
            std::size_t v = stack.back();
            stack.pop_back();
            for (auto [a, b] : out.R) {
                std::size_t w;
                if (static_cast<std::size_t>(a) == v) w = static_cast<std::size_t>(b);
                else if (static_cast<std::size_t>(b) == v) w = static_cast<std::size_t>(a);
                else continue;
                if (colour[w] < 0) {
                    colour[w] = 1 - colour[v];
                    stack.push_back(w);
                } else if (colour[w] == colour[v]) {
                    throw std::logic_error("shift_off_hyperplanes: odd cycle in R");
                }
            }
        }
    }
    for (std::size_t i = 0; i < m; ++i) out.mu.push_back(colour[i] == 0 ? Rational(0) : Rational(3) * out.delta / 4);
    // samples in the cube of half-width delta/(8 sqrt m) shrunk by 1/2, inside the ball of radius delta/8
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> u(-1000000, 1000000);
    long root = 1;
    while (root * root < static_cast<long>(std::max<std::size_t>(m, 1))) ++root;
    Rational half_width = out.delta / (16 * root);
    for (long k = 0; k < samples; ++k) {
        std::vector<Rational> v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = nu0[i] + half_width * Rational(u(rng), 1000000) + out.mu[i];
        ++out.samples;
        if (in_hyperplane_union(v)) ++out.failures;
    }
    return out;
}

} // namespace gln

#endif // GLN_PLANCHEREL_HPP
