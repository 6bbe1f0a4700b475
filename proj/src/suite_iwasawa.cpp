// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#include "suite_internal.hpp"

#include <gln/padiclinalg.hpp>

#include <Eigen/Cholesky>

#include <algorithm>
#include <random>

namespace gln::suites {

namespace {

Rational random_padic(std::mt19937_64& rng, long p, int vmin, int vmax)
{
    std::uniform_int_distribution<int> v(vmin, vmax), u(1, 40), zero(0, 5);
    if (zero(rng) == 0) return 0;
    long num = u(rng), den = u(rng);
    while (num % p == 0) ++num;
    while (den % p == 0) ++den;
    if (u(rng) % 2) num = -num;
    return rpow(p, v(rng)) * rat(num, den);
}

RatMatrix random_gl(std::mt19937_64& rng, long p, std::size_t n, int vmin, int vmax)
{
    for (;;) {
        RatMatrix g(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) g(i, j) = random_padic(rng, p, vmin, vmax);
        if (determinant(g) != 0) return g;
    }
}

bool is_diagonal(const RatMatrix& t)
{
    for (std::size_t i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.cols(); ++j)
            if (i != j && t(i, j) != 0) return false;
    return true;
}

RatMatrix random_V(std::mt19937_64& rng, long p, const CosetParametrization& cp, int n)
{
    std::size_t k = static_cast<std::size_t>(n - 1);
    RatMatrix a = RatMatrix::identity(k), b = RatMatrix::identity(k);
    for (auto [i, j] : cp.v0_roots) a(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = random_padic(rng, p, -2, 2);
    for (auto [i, j] : cp.w0_part) b(static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)) = random_padic(rng, p, -2, 2);
    return a * b;
}

// the defining properties of the explicit decomposition, checked literally
bool explicit_decomposition_ok(const RatVector& xi, long p)
{
    std::size_t r = xi.size();
    auto d = explicit_lower_iwasawa(xi, p);
    if (!(reconstruct(d) == lower_unipotent_column(xi)) || !in_GL_Zp(d.kappa, p) || !is_upper_unipotent(d.Upsilon)) return false;
    int upper = static_cast<int>(r);
    for (int a : d.sequence) {
        if (a > upper) return false;
        Rational m = 0;
        for (int i = 1; i <= upper; ++i) m = std::max(m, padic_abs(xi[static_cast<std::size_t>(i - 1)], p));
        if (padic_abs(xi[static_cast<std::size_t>(a - 1)], p) != m || !(m > 1)) return false;
        upper = a - 1;
    }
    if (d.sequence.empty()) return d.t == 1;
    auto z = [&](int i) { return xi[static_cast<std::size_t>(i - 1)]; };
    if (d.t != z(d.sequence[0])) return false;
    std::size_t h = d.sequence.size();
    if (d.alpha[static_cast<std::size_t>(d.sequence[h - 1] - 1)] != -1 / z(d.sequence[h - 1])) return false;
    for (std::size_t nu = 1; nu < h; ++nu)
        if (d.alpha[static_cast<std::size_t>(d.sequence[nu - 1] - 1)] != -z(d.sequence[nu]) / z(d.sequence[nu - 1])) return false;
    for (std::size_t i = 1; i <= r; ++i) {
        bool in_seq = std::find(d.sequence.begin(), d.sequence.end(), static_cast<int>(i)) != d.sequence.end();
        if (!in_seq && d.alpha[i - 1] != 1) return false;
        if (!is_p_integral(Rational(d.ell[i - 1] * d.t), p)) return false;
        for (std::size_t j = 1; j <= r; ++j)
            if (!is_p_integral(Rational(d.Upsilon(i - 1, j - 1) * d.alpha[j - 1]), p)) return false;
    }
    return true;
}

} // namespace

std::vector<CaseSpec> iwasawa_cases(const Config& c)
{
    std::vector<CaseSpec> out;
    unsigned long seed = c.seed;
    for (long p : {2L, 3L, 5L})
        out.push_back({"iwasawa/explicit-lower/p" + std::to_string(p), "ExplicitIwasawaDec", 3, [seed, p] {
                           std::mt19937_64 rng(seed ^ (0x31u + static_cast<unsigned long>(p)));
                           long ok = 0, total = 0;
                           for (std::size_t r = 1; r <= 4; ++r)
                               for (int trial = 0; trial < 120; ++trial, ++total) {
                                   RatVector xi(r);
                                   for (auto& x : xi) x = random_padic(rng, p, -3, 2);
                                   ok += explicit_decomposition_ok(xi, p);
                               }
                           return exact(ok, total, "reconstruction, sequence, t, alpha and integrality");
                       }});
    for (std::size_t n : {3u, 4u})
        for (long p : {2L, 3L, 5L})
            out.push_back({"iwasawa/explicit-vs-generic/n" + std::to_string(n) + "-p" + std::to_string(p), "IwasawaDecxi", 3, [seed, n, p] {
                               std::mt19937_64 rng(seed ^ (0x3400u + 16 * n + static_cast<unsigned long>(p)));
                               long ok = 0, total = 0;
                               for (int trial = 0; trial < 500; ++trial, ++total) {
                                   RatVector xi(n - 1);
                                   for (auto& x : xi) x = random_padic(rng, p, -3, 2);
                                   auto d = explicit_lower_iwasawa(xi, p);
                                   auto g = iwasawa_qp(lower_unipotent_column(xi), p);
                                   bool good = g.exponents[n - 1] == *valuation(d.t, p);
                                   for (std::size_t i = 0; i + 1 < n; ++i) good = good && g.exponents[i] == *valuation(d.alpha[i], p);
                                   ok += good;
                               }
                               return exact(ok, total, "|t_i|_p from both decompositions");
                           }});
    out.push_back({"iwasawa/arch-gram", "ExplicitIwasawaDecArch-f0", 3, [seed] {
                       std::mt19937_64 rng(seed ^ 0x35);
                       std::normal_distribution<double> gauss(0.0, 2.0);
                       double worst = 0;
                       for (int r = 1; r <= 5; ++r)
                           for (int trial = 0; trial < 100; ++trial) {
                               Eigen::VectorXd xi(r);
                               for (int i = 0; i < r; ++i) xi(i) = gauss(rng);
                               auto d = arch_lower_iwasawa(xi);
                               Eigen::MatrixXd Ua = d.Upsilon * d.alpha.asDiagonal();
                               Eigen::MatrixXd expect = Eigen::MatrixXd::Identity(r, r) - xi * xi.transpose() / (1 + xi.squaredNorm());
                               worst = std::max(worst, (Ua * Ua.transpose() - expect).cwiseAbs().maxCoeff());
                               worst = std::max(worst, std::abs(d.t - std::sqrt(1 + xi.squaredNorm())) / d.t);
                           }
                       return numeric(worst, 0, worst, 1e-12, "max entry of the Gram residual");
                   }});
    out.push_back({"iwasawa/generic-reconstruction", "ExplicitIwasawaDec", 0, [seed] {
                       std::mt19937_64 rng(seed ^ 0x36);
                       long ok = 0, total = 0;
                       for (std::size_t n : {3u, 4u})
                           for (long p : {2L, 3L, 5L})
                               for (int trial = 0; trial < 100; ++trial, ++total) {
                                   RatMatrix g = random_gl(rng, p, n, -3, 3);
                                   auto d = iwasawa_qp(g, p);
                                   long sum = 0;
                                   for (auto e : d.exponents) sum += e;
                                   ok += d.u * d.t * d.k == g && is_upper_unipotent(d.u) && is_diagonal(d.t) && in_GL_Zp(d.k, p) &&
                                         sum == *valuation(determinant(g), p);
                               }
                       return exact(ok, total, "g = u t k with k in GL_n(Z_(p))");
                   }});
    // vanishing of the support predicate: half of the corpus per prime
    long per_prime = std::max(1L, c.fuzz_size / 2);
    for (long p : {2L, 3L})
        out.push_back({"iwasawa/support-vanishing/n3-p" + std::to_string(p), "JJL-5", 8, [seed, p, per_prime] {
                           std::mt19937_64 rng(seed ^ (0x3700u + static_cast<unsigned long>(p)));
                           const int n = 3;
                           const std::vector<IndexSet> proper{{}, {1}, {2}};
                           const std::vector<long> levels{p, p * p, 5 * p};
                           long ok = 0, total = 0, zero_y = 0;
                           std::uniform_int_distribution<std::size_t> pickQ(0, proper.size() - 1), pickN(0, levels.size() - 1);
                           while (total < per_prime) {
                               const IndexSet& Q = proper[pickQ(rng)];
                               long N = levels[pickN(rng)];
                               long e = level_exponent(N, p);
                               bool aimed = rng() % 2;
                               RatVector y(n - 1, Rational(0));
                               int below = Q.empty() ? n : *Q.begin();
                               // y = 0, or y_{q'} outside N Z_p with the remaining support unconstrained
                               if (rng() % 4 != 0)
                                   for (int i = 1; i < below; ++i)
                                       if (rng() % 2) y[static_cast<std::size_t>(i - 1)] = random_padic(rng, p, -2, static_cast<int>(e) + 2);
                               IndexSet sp = support(y);
                               if (!sp.empty()) {
                                   auto& first = y[static_cast<std::size_t>(*sp.begin() - 1)];
                                   std::uniform_int_distribution<int> v(-2, static_cast<int>(e) - 1);
                                   first = rpow(p, v(rng)) * rat(1 + 2 * static_cast<long>(rng() % 7) * (p == 2 ? 1 : p), 1);
                                   if (*valuation(first, p) >= e) continue;
                               } else {
                                   ++zero_y;
                               }
                               for (auto& w : enumerate_SnQy(n, Q, y)) {
                                   if (total >= per_prime) break;
                                   auto cp = coset_parametrization(Q, y, w);
                                   RatMatrix Z = aimed ? RatMatrix::identity(n - 1) : random_V(rng, p, cp, n);
                                   RatVector xi(static_cast<std::size_t>(cp.xi_dim)), xip(static_cast<std::size_t>(cp.xi_prime_dim));
                                   for (auto& x : xi) x = aimed ? random_padic(rng, p, 0, 2) : random_padic(rng, p, -2, 3);
                                   for (auto& x : xip) x = aimed ? random_padic(rng, p, -4, 0) : random_padic(rng, p, -2, 3);
                                   ok += !support_indicator(Q, y, w, N, p, Z, xi, xip);
                                   ++total;
                               }
                           }
                           return exact(ok, total, "samples with p | N and (y = 0 or y_q' not in N Z_p) where the indicator is false; " +
                                                       std::to_string(zero_y) + " draws with y = 0");
                       }});
    return out;
}

} // namespace gln::suites
