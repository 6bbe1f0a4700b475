// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#include "suite_internal.hpp"

#include <gln/oldforms.hpp>
#include <gln/plancherel.hpp>

#include <random>

namespace gln::suites {

std::vector<CaseSpec> plancherel_cases(const Config& c)
{
    std::vector<CaseSpec> out;
    int nodes = c.quadrature_nodes, threads = c.threads;
    unsigned long seed = c.seed;
    for (long p : {2L, 3L, 5L}) {
        out.push_back({"plancherel/mass/n3-p" + std::to_string(p), "LNVpadicL1", 7, [p, nodes, threads] {
                           auto r = padic_mass(p, 3, nodes, threads);
                           return numeric(r.value, 1.0, std::abs(r.value - 1.0), 1e-6, std::to_string(nodes) + "^2 nodes");
                       }});
        out.push_back({"plancherel/mass-doubling/n3-p" + std::to_string(p), "LNVpadicL1", 7, [p] {
                           double e4 = padic_mass(p, 3, 4).error, e8 = padic_mass(p, 3, 8).error, e16 = padic_mass(p, 3, 16).error;
                           double ratio = std::max(e8 / e4, e16 / e8);
                           return numeric(ratio, 0.25, std::max(0.0, ratio - 0.25), 0.0, "worst error ratio under node doubling 4 -> 8 -> 16");
                       }});
    }
    out.push_back({"plancherel/parseval/n3-j1-p2", "LNVpadicL1", 7, [threads] {
                       auto r = padic_parseval(2, 3, 1, 128, threads);
                       // p^{-j(n-j)} times the number of K-cosets in K diag(p, 1, 1) K
                       double oracle = static_cast<double>(hecke_cosets(3, 1, 2).representatives.size()) / 4.0;
                       auto res = numeric(r.value, oracle, std::abs(r.value - oracle), 1e-5, "128^2 nodes against 7 cosets / 4");
                       if (r.reference != oracle) {
                           res.status = Status::fail;
                           res.detail += "; library reference " + format_double(r.reference);
                       }
                       return res;
                   }});
    out.push_back({"plancherel/arch-bound/n3", "LNVAr-L10", 7, [] {
                       auto a = arch_c_bound_check(3, 50, 0.5, 6, 1), b = arch_c_bound_check(3, 100, 0.5, 6, 1);
                       double drift = std::abs(a.exponent - b.exponent) / std::abs(b.exponent);
                       auto r = numeric(b.exponent, a.exponent, drift, 0.1, "relative drift of the fitted exponent, radius 50 vs 100");
                       if (!(a.c_inf > 0 && b.c_inf > 0)) {
                           r.status = Status::fail;
                           r.detail += "; inf not positive";
                       }
                       r.detail += "; inf " + format_double(b.c_inf);
                       return r;
                   }});
    struct Point
    {
        std::string name;
        std::vector<Rational> nu;
    };
    const std::vector<Point> pts{{"far", {Rational(1, 10), Rational(-1, 10)}},
                                 {"rank3-on-wall", {Rational(1, 2), Rational(-1, 2)}},
                                 {"rank4-chain", {Rational(1, 2), Rational(-1, 2), Rational(3, 2)}},
                                 {"rank5-mixed", {Rational(0), Rational(1), Rational(3, 7), Rational(-4, 7)}},
                                 {"rank5-two-chains", {Rational(2, 3), Rational(-1, 3), Rational(1, 5), Rational(6, 5)}}};
    for (const auto& pt : pts)
        out.push_back({"plancherel/shift-certificate/" + pt.name, "LNVAr-L10-L", 7, [pt, seed] {
                           auto h = shift_off_hyperplanes(pt.nu, 10000, seed);
                           return exact(h.samples - h.failures, h.samples, "exact samples near nu0 whose shift avoids every hyperplane");
                       }});
    return out;
}

} // namespace gln::suites
