// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#include "suite_internal.hpp"

#include <gln/whittaker.hpp>

#include <numbers>
#include <random>

namespace gln::suites {

namespace {

CVector random_unit_circle(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
    CVector t;
    for (int i = 0; i < n; ++i) t.push_back(std::polar(1.0, ang(rng)));
    return t;
}

cplx pow_minus(long p, cplx s) { return std::exp(-s * std::log(static_cast<double>(p))); }

// prod_i prod_j (1 - conj(t_j) p^{-(z + nu_i)})^{-1}
cplx zeta_oracle(cplx z, const CVector& nu, const CVector& t, long p)
{
    cplx r = 1;
    for (auto v : nu)
        for (auto tj : t) r /= 1.0 - std::conj(tj) * pow_minus(p, z + v);
    return r;
}

// prod_{i,j} (1 - t_i conj(t_j) / p)^{-1}
cplx mirabolic_oracle(const CVector& t, long p)
{
    cplx r = 1;
    for (auto a : t)
        for (auto b : t) r /= 1.0 - a * std::conj(b) / static_cast<double>(p);
    return r;
}

// prod_{i<j} (1 - p^{-(1 + nu_i - nu_j)}) / #(Z_p^x / (1 + N Z_p))
cplx jacquet_oracle(const CVector& nu, long p, long N)
{
    cplx r = 1;
    for (std::size_t i = 0; i < nu.size(); ++i)
        for (std::size_t j = i + 1; j < nu.size(); ++j) r *= 1.0 - pow_minus(p, 1.0 + nu[i] - nu[j]);
    long index = 1, m = N;
    if (m % p == 0) {
        index = p - 1;
        m /= p;
        while (m % p == 0) {
            index *= p;
            m /= p;
        }
    }
    return r / static_cast<double>(index);
}

CaseResult against(const TruncatedResult& r, cplx oracle, double tol, const std::string& what)
{
    double ref_gap = scaled_error(r.reference, oracle);
    double err = std::max(scaled_error(r.value, oracle), ref_gap);
    auto c = numeric(std::abs(r.value), std::abs(oracle), err, tol, what + "; library reference off by " + format_double(ref_gap));
    if (!r.converged) {
        c.status = Status::fail;
        c.detail += "; error grew under doubling";
    }
    return c;
}

std::string nu_str(const CVector& nu)
{
    std::string s;
    for (auto v : nu) s += (s.empty() ? "" : ",") + format_double(v.real()) + (v.imag() != 0 ? "+" + format_double(v.imag()) + "i" : "");
    return s;
}

} // namespace

std::vector<CaseSpec> whittaker_cases(const Config& c)
{
    std::vector<CaseSpec> out;
    unsigned long seed = c.seed;
    int Lambda = c.lambda_bound;
    for (long p : {2L, 3L})
        for (int k = 0; k < 10; ++k)
            out.push_back({"whittaker/zeta/n3-p" + std::to_string(p) + "-" + std::to_string(k), "URZetaInt", 4, [seed, p, k, Lambda] {
                               std::mt19937_64 rng(seed ^ (0x4100u + 16 * static_cast<unsigned long>(p) + static_cast<unsigned long>(k)));
                               SatakeParam t(p, random_unit_circle(rng, 3));
                               CVector nu = k % 2 ? CVector{0.25, -0.25} : CVector{0.0, 0.0};
                               auto r = zeta_truncated(1.0, nu, t, Lambda);
                               return against(r, zeta_oracle(1.0, nu, t.t, p), 1e-7, "z = 1, nu = (" + nu_str(nu) + "), Lambda " + std::to_string(Lambda));
                           }});
    out.push_back({"whittaker/mirabolic/trivial-p2", "normLocalUrWhitt", 4, [Lambda] {
                       auto r = mirabolic_inner_truncated(SatakeParam(2, {1, 1, 1}), Lambda);
                       auto c = against(r, 512.0, 1e-6, "t = (1,1,1); the reference is exactly 2^9");
                       if (mirabolic_oracle({1, 1, 1}, 2) != cplx(512)) c.status = Status::fail;
                       return c;
                   }});
    for (long p : {2L, 3L})
        for (int k = 0; k < 5; ++k)
            out.push_back({"whittaker/mirabolic/n3-p" + std::to_string(p) + "-" + std::to_string(k), "normLocalUrWhitt", 4, [seed, p, k, Lambda] {
                               std::mt19937_64 rng(seed ^ (0x4200u + 16 * static_cast<unsigned long>(p) + static_cast<unsigned long>(k)));
                               SatakeParam t(p, random_unit_circle(rng, 3));
                               auto r = mirabolic_inner_truncated(t, Lambda);
                               return against(r, mirabolic_oracle(t.t, p), 1e-6, "tempered t, Lambda " + std::to_string(Lambda));
                           }});
    struct JCase
    {
        CVector nu;
        long p;
        int k;
        long N;
        double tol;
    };
    const std::vector<JCase> jc{{{1, -1}, 2, 6, 1, 1e-8},
                                {{1, -1}, 2, 6, 8, 1e-8},
                                {{cplx(1.2, 0.4), cplx(-1.1, 0.2)}, 3, 6, 1, 1e-8},
                                {{cplx(1.2, 0.4), cplx(-1.1, 0.2)}, 3, 6, 3, 1e-8},
                                {{cplx(2, 0.3), 0, cplx(-2, 0.1)}, 2, 3, 1, 1e-5},
                                {{cplx(2, 0.3), 0, cplx(-2, 0.1)}, 2, 3, 2, 1e-5},
                                {{1.6, 0, -1.6}, 3, 3, 1, 1e-5},
                                {{1.6, 0, -1.6}, 3, 3, 3, 1e-5}};
    for (const auto& j : jc) {
        int n = static_cast<int>(j.nu.size()) + 1;
        out.push_back({"whittaker/jacquet/n" + std::to_string(n) + "-p" + std::to_string(j.p) + "-N" + std::to_string(j.N), "GSST-L2", 4, [j] {
                           auto r = jacquet_truncated(j.nu, j.p, j.k, j.N);
                           return against(r, jacquet_oracle(j.nu, j.p, j.N), j.tol, "nu = (" + nu_str(j.nu) + "), depth " + std::to_string(j.k));
                       }});
    }
    return out;
}

} // namespace gln::suites
