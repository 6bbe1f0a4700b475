// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#include "suite_internal.hpp"

#include <gln/weylcoset.hpp>

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

namespace gln::suites {

namespace {

IndexSet oracle_support(const RatVector& y)
{
    IndexSet s;
    for (std::size_t i = 0; i < y.size(); ++i)
        if (y[i] != 0) s.insert(static_cast<int>(i + 1));
    return s;
}

int inverse_at(const Permutation& w, int i)
{
    for (int j = 1; j <= w.size(); ++j)
        if (w(j) == i) return j;
    return 0;
}

// admissibility conditions checked literally
bool oracle_admissible(const IndexSet& Q, const RatVector& y, const Permutation& w)
{
    int n = w.size(), m = static_cast<int>(Q.size()) + 1;
    IndexSet sp = oracle_support(y);
    for (int i = 1; i < m; ++i)
        if (!Q.count(w(i))) return false;
    if (w(m) != n) return false;
    for (int i = 1; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (!(w(i) > w(j))) return false;
    for (int h : sp)
        for (int k : sp)
            if (h < k && !(inverse_at(w, h) > inverse_at(w, k))) return false;
    for (int j = 1; j < n; ++j) {
        bool inN = j > inverse_at(w, n) && w(j) < w(j + 1);
        if (!inN) continue;
        if (sp.count(w(j)) || !sp.count(w(j + 1))) return false;
        for (int v : sp)
            if (v >= w(j) && v < w(j + 1)) return false;
    }
    return true;
}

// the character form vanishes on the null space of the constraints
bool oracle_character_trivial(const StabilizerDescription& s)
{
    std::size_t N = s.coords.size();
    std::vector<RatVector> rows = s.constraints;
    std::vector<int> pivcol;
    std::size_t r = 0;
    for (std::size_t c = 0; c < N && r < rows.size(); ++c) {
        std::size_t piv = rows.size();
        for (std::size_t k = r; k < rows.size(); ++k)
            if (rows[k][c] != 0) {
                piv = k;
                break;
            }
        if (piv == rows.size()) continue;
        std::swap(rows[r], rows[piv]);
        Rational inv = 1 / rows[r][c];
        for (auto& v : rows[r]) v *= inv;
        for (std::size_t k = 0; k < rows.size(); ++k)
            if (k != r && rows[k][c] != 0) {
                Rational f = rows[k][c];
                for (std::size_t j = 0; j < N; ++j) rows[k][j] -= f * rows[r][j];
            }
        pivcol.push_back(static_cast<int>(c));
        ++r;
    }
    std::set<int> piv(pivcol.begin(), pivcol.end());
    for (std::size_t f = 0; f < N; ++f) {
        if (piv.count(static_cast<int>(f))) continue;
        RatVector v(N, Rational(0));
        v[f] = 1;
        for (std::size_t k = 0; k < pivcol.size(); ++k) v[static_cast<std::size_t>(pivcol[k])] = -rows[k][f];
        Rational val = 0;
        for (std::size_t j = 0; j < N; ++j) val += s.character[j] * v[j];
        if (val != 0) return false;
    }
    return true;
}

std::vector<IndexSet> all_subsets(int n)
{
    std::vector<IndexSet> out;
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        IndexSet q;
        for (int i = 0; i < n - 1; ++i)
            if (mask >> i & 1) q.insert(i + 1);
        out.push_back(q);
    }
    return out;
}

std::vector<RatVector> y_patterns(int n, const IndexSet& Q)
{
    std::vector<int> allowed;
    for (int i = 1; i < n; ++i)
        if (!Q.count(i) && (Q.empty() || i < *Q.begin())) allowed.push_back(i);
    std::vector<RatVector> out;
    for (unsigned mask = 0; mask < (1u << allowed.size()); ++mask) {
        RatVector y(static_cast<std::size_t>(n - 1), Rational(0));
        for (std::size_t k = 0; k < allowed.size(); ++k)
            if (mask >> k & 1) y[static_cast<std::size_t>(allowed[k] - 1)] = rat(static_cast<long>(k) + 2, 3);
        out.push_back(y);
    }
    return out;
}

RatMatrix random_matrix(std::mt19937_64& rng, std::size_t n, int height = 10)
{
    std::uniform_int_distribution<long> num(-height, height), den(1, height);
    std::uniform_int_distribution<int> kind(0, 3);
    while (true) {
        RatMatrix g(n, n);
        if (kind(rng) == 0) {
            std::vector<int> v(n);
            std::iota(v.begin(), v.end(), 1);
            std::shuffle(v.begin(), v.end(), rng);
            g = Permutation(v).matrix();
            std::uniform_int_distribution<std::size_t> ix(0, n - 1);
            for (int k = 0; k < 2; ++k) {
                RatMatrix e = RatMatrix::identity(n);
                std::size_t a = ix(rng), b = ix(rng);
                if (a != b) e(a, b) = rat(num(rng), den(rng));
                g = kind(rng) % 2 ? e * g : g * e;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) g(i, j) = (kind(rng) == 0) ? Rational(0) : rat(num(rng), den(rng));
        }
        if (determinant(g) != 0) return g;
    }
}

RatMatrix random_upper(std::mt19937_64& rng, std::size_t n, bool unipotent)
{
    std::uniform_int_distribution<long> num(-9, 9), den(1, 9);
    RatMatrix u = RatMatrix::identity(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            if (i == j) {
                if (!unipotent) {
                    long a = 0;
                    while (a == 0) a = num(rng);
                    u(i, i) = rat(a, den(rng));
                }
            } else {
                u(i, j) = rat(num(rng), den(rng));
            }
        }
    return u;
}

OrbitElement random_orbit(std::mt19937_64& rng, const Permutation& w)
{
    int n = w.size();
    IndexSet Q = Q_of(w);
    Permutation w0 = w0_of(w);
    std::uniform_int_distribution<long> num(-6, 6), den(1, 5);
    std::size_t k = static_cast<std::size_t>(n - 1);
    RatMatrix Z = random_upper(rng, k, true);
    OrbitElement e{w0.matrix() * Z * w0.inverse().matrix(), RatVector(k, Rational(0)), RatVector(k, Rational(0))};
    for (int i = 1; i < n; ++i) {
        if (Q.count(i)) e.x[static_cast<std::size_t>(i - 1)] = rat(num(rng), den(rng));
        else e.xp[static_cast<std::size_t>(i - 1)] = rat(num(rng), den(rng));
    }
    return e;
}

CaseResult classify_fuzz(std::size_t n, long count, unsigned long seed)
{
    std::mt19937_64 rng(seed);
    long ok = 0;
    for (long it = 0; it < count; ++it) {
        RatMatrix g = random_matrix(rng, n);
        auto c = classify(g);
        bool good = reconstruct(c) == g && in_Y(c.w, c.y) && is_upper_triangular(c.b) && is_upper_unipotent(c.u) && c.z != 0;
        // another element of the same double coset gets the same label
        std::uniform_int_distribution<long> num(1, 9);
        RatMatrix zI = RatMatrix::identity(n);
        Rational z = rat(num(rng), num(rng));
        for (std::size_t i = 0; i < n; ++i) zI(i, i) = z;
        RatMatrix g2 = zI * iota(random_upper(rng, n - 1, false)) * g * random_upper(rng, n, true);
        auto c2 = classify(g2);
        good = good && c2.w == c.w && c2.y == c.y;
        ok += good;
    }
    return exact(ok, count, "reconstruct(classify(g)) == g and label invariance");
}

} // namespace

std::vector<CaseSpec> coset_cases(const Config& c)
{
    std::vector<CaseSpec> out;
    unsigned long seed = c.seed;
    out.push_back({"coset/classify-roundtrip/gl3", "Doublecoset", 2, [seed] { return classify_fuzz(3, 1000, seed ^ 0x21); }});
    out.push_back({"coset/classify-roundtrip/gl4", "Doublecoset", 2, [seed] { return classify_fuzz(4, 200, seed ^ 0x22); }});
    for (int n = 2; n <= 5; ++n) {
        out.push_back({"coset/enumerate-vs-brute-force/n" + std::to_string(n), "Def1", 2, [n] {
                           auto perms = Permutation::all(n);
                           long ok = 0, total = 0;
                           for (auto& Q : all_subsets(n))
                               for (auto& y : y_patterns(n, Q)) {
                                   auto got = enumerate_SnQy(n, Q, y);
                                   std::vector<Permutation> brute;
                                   for (auto& w : perms)
                                       if (oracle_admissible(Q, y, w)) brute.push_back(w);
                                   ok += got == brute;
                                   ++total;
                               }
                           return exact(ok, total, "(Q, y-pattern) pairs where enumeration equals the brute-force filter");
                       }});
        out.push_back({"coset/zero-y-unique/n" + std::to_string(n), "Def1", 2, [n] {
                           long ok = 0, total = 0;
                           for (auto& Q : all_subsets(n)) {
                               auto l = enumerate_SnQy(n, Q, RatVector(static_cast<std::size_t>(n - 1), Rational(0)));
                               ok += l.size() == 1;
                               ++total;
                           }
                           return exact(ok, total, "subsets Q with exactly one admissible w at y = 0");
                       }});
    }
    for (int n = 2; n <= 4; ++n)
        out.push_back({"coset/a-gamma-vs-character-oracle/n" + std::to_string(n), "agammanot0", 2, [n] {
                           long ok = 0, total = 0;
                           for (auto& w : Permutation::all(n)) {
                               std::vector<RatVector> ys{RatVector(static_cast<std::size_t>(n - 1), Rational(0))};
                               for (unsigned mask = 1; mask < (1u << (n - 1)); ++mask) {
                                   RatVector y(static_cast<std::size_t>(n - 1), Rational(0));
                                   for (int i = 0; i < n - 1; ++i)
                                       if (mask >> i & 1) y[static_cast<std::size_t>(i)] = rat(i + 1, 2);
                                   ys.push_back(y);
                               }
                               for (auto& y : ys) {
                                   if (!in_Y(w, y)) continue;
                                   bool good = (a_gamma(y, w) == 1) == oracle_character_trivial(stabilizer(y, w));
                                   if (good && a_gamma(y, w)) {
                                       int matches = 0;
                                       for (auto& Q : all_subsets(n))
                                           if (in_YQ(Q, y) && oracle_admissible(Q, y, w)) ++matches;
                                       good = matches == 1;
                                   }
                                   ok += good;
                                   ++total;
                               }
                           }
                           return exact(ok, total, "admissible (y, w) where a(gamma) matches the exact character oracle");
                       }});
    out.push_back({"coset/orbit-product-law", "ProdLaw", 0, [seed] {
                       std::mt19937_64 rng(seed ^ 0x23);
                       long ok = 0, total = 0;
                       for (int n = 3; n <= 4; ++n)
                           for (auto& w : Permutation::all(n)) {
                               OrbitElement a = random_orbit(rng, w), b = random_orbit(rng, w), cc = random_orbit(rng, w);
                               ok += realize(orbit_product(a, b), w) == realize(a, w) * realize(b, w);
                               ok += realize(orbit_product(orbit_product(a, b), cc), w) == realize(orbit_product(a, orbit_product(b, cc)), w);
                               ok += realize(orbit_product(a, orbit_inverse(a)), w) == RatMatrix::identity(static_cast<std::size_t>(n));
                               total += 3;
                           }
                       return exact(ok, total, "product law, associativity and inverse against matrix products");
                   }});
    return out;
}

} // namespace gln::suites
