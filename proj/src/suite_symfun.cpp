// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#include "suite_internal.hpp"

#include <gln/symfun.hpp>

#include <functional>
#include <numbers>
#include <random>

namespace gln::suites {

namespace {

Rational e_subsets(int l, const std::vector<Rational>& x)
{
    Rational s = 0;
    int r = static_cast<int>(x.size());
    for (unsigned mask = 0; mask < (1u << r); ++mask) {
        if (__builtin_popcount(mask) != l) continue;
        Rational t = 1;
        for (int i = 0; i < r; ++i)
            if (mask >> i & 1) t *= x[static_cast<std::size_t>(i)];
        s += t;
    }
    return s;
}

Rational h_multisets(int l, const std::vector<Rational>& x)
{
    Rational s = 0;
    std::function<void(int, std::size_t, Rational)> rec = [&](int k, std::size_t start, Rational t) {
        if (k == l) {
            s += t;
            return;
        }
        for (std::size_t i = start; i < x.size(); ++i) rec(k + 1, i, t * x[i]);
    };
    rec(0, 0, Rational(1));
    return s;
}

std::vector<Rational> random_distinct(std::mt19937_64& rng, std::size_t r)
{
    std::uniform_int_distribution<long> num(-30, 30), den(1, 12);
    std::vector<Rational> x;
    while (x.size() < r) {
        Rational v = rat(num(rng), den(rng));
        if (v == 0 || std::find(x.begin(), x.end(), v) != x.end()) continue;
        x.push_back(v);
    }
    return x;
}

std::vector<cplx> random_disc(std::mt19937_64& rng, std::size_t n, double rmax)
{
    std::uniform_real_distribution<double> rad(0.1, rmax), ang(0, 2 * std::numbers::pi);
    std::vector<cplx> x;
    while (x.size() < n) {
        cplx v = std::polar(rad(rng), ang(rng));
        bool ok = true;
        for (auto& u : x)
            if (std::abs(u - v) < 0.05) ok = false;
        if (ok) x.push_back(v);
    }
    return x;
}

// D(z,x) = V^{-1} diag(prod_j (1 - z x_a / x_j)^{-1}) V at regular x
CMatrix d_matrix_literal(cplx z, const std::vector<cplx>& x)
{
    std::size_t n = x.size();
    Eigen::MatrixXcd V(n, n), Dg = Eigen::MatrixXcd::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) V(i, j) = std::pow(x[i], static_cast<int>(j));
    for (std::size_t a = 0; a < n; ++a) {
        cplx q = 1;
        for (std::size_t j = 0; j < n; ++j) q *= 1.0 - z * x[a] / x[j];
        Dg(a, a) = 1.0 / q;
    }
    return from_eigen(V.inverse() * Dg * V);
}

} // namespace

std::vector<CaseSpec> symfun_cases(const Config& c)
{
    std::vector<CaseSpec> out;
    for (std::size_t r = 1; r <= 5; ++r)
        out.push_back({"symfun/vandermonde-factorization/r" + std::to_string(r), "SymF-f3", 1, [r] {
                           auto f = vandermonde_factorization(poly_variables(r));
                           long ok = 0, total = 0;
                           auto EH = f.E * f.H;
                           for (std::size_t i = 0; i < r; ++i)
                               for (std::size_t j = 0; j < r; ++j, ++total) ok += EH(i, j) == f.V(i, j);
                           return exact(ok, total, "entries of E*H equal to V, symbolic");
                       }});
    for (std::size_t r = 2; r <= 4; ++r)
        out.push_back({"symfun/vandermonde-inverse/r" + std::to_string(r), "SymF-f3", 1, [r] {
                           auto ci = vandermonde_inverse_cleared(r);
                           auto f = vandermonde_factorization(poly_variables(r));
                           auto prod = ci.numerator * f.V;
                           long ok = 0, total = 0;
                           for (std::size_t i = 0; i < r; ++i)
                               for (std::size_t j = 0; j < r; ++j, ++total) ok += prod(i, j) == (i == j ? ci.denominator : RatPoly::zero(r));
                           return exact(ok, total, "closed-form inverse times V equals the clearing factor times 1, symbolic");
                       }});
    unsigned long seed = c.seed;
    out.push_back({"symfun/vandermonde-inverse/rational", "SymF-f3", 1, [seed] {
                       std::mt19937_64 rng(seed ^ 0x11);
                       long ok = 0, total = 0;
                       for (int it = 0; it < 20; ++it, ++total) {
                           auto g = vandermonde_factorization(random_distinct(rng, 4));
                           ok += g.V_inverse.has_value() && *g.V_inverse == inverse(g.V);
                       }
                       return exact(ok, total, "closed-form inverse vs Gauss-Jordan inverse, random rationals, r = 4");
                   }});
    out.push_back({"symfun/elementary-complete", "SymF-f0", 1, [seed] {
                       std::mt19937_64 rng(seed ^ 0x12);
                       long ok = 0, total = 0;
                       for (std::size_t r = 1; r <= 5; ++r) {
                           auto x = random_distinct(rng, r);
                           for (int l = 0; l <= static_cast<int>(r) + 2; ++l, total += 2) {
                               ok += elementary(l, x) == e_subsets(l, x);
                               ok += complete(l, x) == h_multisets(l, x);
                           }
                       }
                       return exact(ok, total, "e_l over subsets and h_l over multisets");
                   }});
    // residue identity: 20 regular instances, n = 2..4
    for (int k = 0; k < 20; ++k) {
        std::size_t n = k < 6 ? 2 : k < 13 ? 3 : 4;
        out.push_back({"symfun/residue/n" + std::to_string(n) + "-" + std::to_string(k), "OldF-L3-LL", 1, [seed, n, k] {
                           std::mt19937_64 rng(seed ^ (0x1300u + static_cast<unsigned>(k)));
                           auto x = random_disc(rng, n, 0.6);
                           auto F = [](const std::vector<cplx>& z) {
                               cplx pz = 1;
                               for (auto v : z) pz *= v;
                               cplx e1 = elementary(1, z);
                               return pz * (1.0 + e1 * e1) * std::pow(vandermonde_det(z), 2);
                           };
                           auto r = residue_identity_check(F, x, n <= 3 ? 64 : 48);
                           return numeric(std::abs(r.lhs), std::abs(r.rhs), r.error, 1e-8, "quadrature vs residue sum");
                       }});
    }
    out.push_back({"symfun/dstar-vs-literal", "OldF-L4", 0, [seed] {
                       std::mt19937_64 rng(seed ^ 0x14);
                       std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
                       double worst = 0;
                       for (int it = 0; it < 5; ++it) {
                           std::vector<cplx> x;
                           for (int i = 0; i < 3; ++i) x.push_back(std::polar(1.0, ang(rng)));
                           for (cplx z : {cplx(0.1), cplx(0.3, 0.1), cplx(0, 0.5)}) {
                               CMatrix a = d_star(z, x), b = d_matrix_literal(z, x);
                               cplx cf = d_star_clearing_factor(z, x);
                               for (std::size_t i = 0; i < 3; ++i)
                                   for (std::size_t j = 0; j < 3; ++j) worst = std::max(worst, std::abs(a(i, j) / cf - b(i, j)));
                           }
                       }
                       return numeric(worst, 0, worst, 1e-8, "max entry difference");
                   }});
    out.push_back({"symfun/dstar-z-degree", "OldF-L4", 0, [] {
                       long ok = 0, total = 0;
                       for (std::size_t n : {2u, 3u, 4u}) {
                           const DStar& ds = d_star_cached(n);
                           int mx = 0;
                           for (std::size_t i = 0; i < n; ++i)
                               for (std::size_t j = 0; j < n; ++j) mx = std::max(mx, ds.entries(i, j).degree_in(n));
                           ok += mx == static_cast<int>(n * (n - 1)) && ds.z_degree_bound == mx;
                           ++total;
                       }
                       return exact(ok, total, "Z-degree of the entries equals n(n-1)");
                   }});
    out.push_back({"symfun/power-series", "PrfOldL-L7-f1", 0, [seed] {
                       std::mt19937_64 rng(seed ^ 0x15);
                       std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
                       std::vector<cplx> x;
                       for (int i = 0; i < 3; ++i) x.push_back(std::polar(1.0, ang(rng)));
                       auto r = power_series_check(0.5, x, 40);
                       return numeric(r.max_error, 0, r.max_error, 1e-8, "partial sums at z = 1/2, 40 terms");
                   }});
    return out;
}

} // namespace gln::suites
