// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#include "suite_internal.hpp"

#include <gln/oldforms.hpp>

#include <fstream>
#include <numbers>
#include <random>

#ifndef GLN_DATA_DIR
#define GLN_DATA_DIR "tests/data"
#endif

namespace gln::suites {

namespace {

SatakeParam random_tempered(std::mt19937_64& rng, int n, long p)
{
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
    CVector t;
    cplx prod = 1;
    for (int i = 0; i + 1 < n; ++i) {
        t.push_back(std::polar(1.0, ang(rng)));
        prod *= t.back();
    }
    t.push_back(1.0 / prod);
    return SatakeParam(p, t);
}

std::vector<Rational> random_rational_t(std::mt19937_64& rng, int n)
{
    std::uniform_int_distribution<long> num(-7, 7), den(1, 5);
    std::vector<Rational> t;
    while (static_cast<int>(t.size()) < n) {
        Rational x = rat(num(rng), den(rng));
        if (x != 0) t.push_back(x);
    }
    return t;
}

double max_scaled_diff(const CMatrix& a, const CMatrix& b)
{
    double e = 0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) e = std::max(e, scaled_error(a(i, j), b(i, j)));
    return e;
}

} // namespace

std::vector<CaseSpec> oldforms_cases(const Config& c)
{
    std::vector<CaseSpec> out;
    unsigned long seed = c.seed;
    int threads = c.threads;
    for (long p : {2L, 3L})
        out.push_back({"oldforms/W_j-at-identity/p" + std::to_string(p), "OldF-L3-f2", 5, [seed, p] {
                           std::mt19937_64 rng(seed ^ (0x5100u + static_cast<unsigned long>(p)));
                           long ok = 0, total = 0;
                           for (int n = 2; n <= 4; ++n)
                               for (int trial = 0; trial < 2; ++trial) {
                                   auto t = random_rational_t(rng, n);
                                   RatMatrix one = RatMatrix::identity(static_cast<std::size_t>(n));
                                   for (int j = 0; j < n; ++j, ++total) ok += W_j_value_exact(j, t, one, p) == HalfPowerLaurent(j == 0 ? 1L : 0L);
                               }
                           return exact(ok, total, "W^(j)(1) == delta_{j0} over Q(p^{1/2}), random rational t, n = 2..4");
                       }});
    out.push_back({"oldforms/satake-of-phi", "OldF-L2-1", 5, [] {
                       long ok = 0, total = 0;
                       for (long p : {2L, 3L, 5L})
                           for (int m = 1; m <= 3; ++m) {
                               auto X = poly_variables(static_cast<std::size_t>(m));
                               for (int j = 0; j <= m; ++j, ++total) ok += satake_of_phi_poly(j, m, p) == elementary(j, X);
                           }
                       return exact(ok, total, "Satake transform of the Hecke coset sum equals e_j, symbolic");
                   }});
    for (int k = 0; k < 4; ++k)
        out.push_back({"oldforms/gram-closed-vs-truncated/n3-p2-" + std::to_string(k), "OldF-L5-f0", 5, [seed, k] {
                           std::mt19937_64 rng(seed ^ (0x5200u + static_cast<unsigned long>(k)));
                           SatakeParam t = random_tempered(rng, 3, 2);
                           CMatrix a = G_matrix(t, GMode::closed), b = G_matrix(t, GMode::oracle, 30);
                           double e = max_scaled_diff(a, b);
                           return numeric(std::abs(a(2, 2)), std::abs(b(2, 2)), e, 1e-6, "max scaled entry difference, Lambda 30");
                       }});
    for (int k = 0; k < 20; ++k)
        out.push_back({"oldforms/period-routes/n3-" + std::to_string(k), "LocalWHittPer", 5, [seed, k] {
                           std::mt19937_64 rng(seed ^ (0x5300u + static_cast<unsigned long>(k)));
                           long p = k % 2 ? 3 : 2;
                           SatakeParam t = random_tempered(rng, 3, p);
                           auto r = period({0.0, 0.0}, t, 80);
                           if (!r.direct) {
                               CaseResult s;
                               s.status = Status::fail;
                               s.detail = "direct route skipped: " + r.direct_skipped;
                               return s;
                           }
                           double e = std::max({r.direct_trace, r.direct_closed, r.trace_closed});
                           return numeric(std::abs(*r.direct), std::abs(r.closed), e, 1e-6,
                                          "p = " + std::to_string(p) + ", worst of the three pairwise discrepancies, Lambda 80");
                       }});
    out.push_back({"oldforms/trace-equals-closed-symbolic", "OldF-L6", 5, [] {
                       long ok = 0, total = 0;
                       for (std::size_t n : {2u, 3u}) {
                           auto k = period_kernels_symbolic(n);
                           ok += !k.closed.is_zero() && k.trace == k.closed;
                           ++total;
                       }
                       return exact(ok, total, "trace kernel == closed kernel as Laurent polynomials, n = 2, 3");
                   }});
    for (long p : {2L, 3L, 5L, 7L, 11L})
        out.push_back({"oldforms/lrs-baseline/p" + std::to_string(p), "OldF-L7", 6, [p, threads] {
                           std::string path = std::string(GLN_DATA_DIR) + "/lrs_baseline.json";
                           std::ifstream in(path);
                           if (!in) throw std::runtime_error("cannot read " + path);
                           auto base = nlohmann::json::parse(in);
                           auto rep = lrs_bound_scan(base["n"], {p}, base["points"], base["sigma_max"], threads);
                           const auto& e = rep.entries.at(0);
                           double stored = base["sup_ratio"][std::to_string(p)];
                           auto r = numeric(e.sup_ratio, stored, scaled_error(e.sup_ratio, stored), 1e-9,
                                            "sup of |P| p^{1+2/10} over " + std::to_string(rep.points) + " grid points");
                           if (!e.finite) {
                               r.status = Status::fail;
                               r.detail += "; non-finite ratio on the grid";
                           }
                           return r;
                       }});
    return out;
}

} // namespace gln::suites
