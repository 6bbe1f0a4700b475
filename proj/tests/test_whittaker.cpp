// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#include <gln/whittaker.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace gln;

namespace {

constexpr double kPi = 3.14159265358979323846;

CVector random_unit_circle(std::mt19937_64& rng, int n)
{
    std::uniform_real_distribution<double> ang(0, 2 * kPi);
    CVector t;
    for (int i = 0; i < n; ++i) t.push_back(std::polar(1.0, ang(rng)));
    return t;
}

RatMatrix diag_p(const std::vector<int>& lambda, long p)
{
    RatMatrix d = RatMatrix::identity(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) d(i, i) = rpow(p, lambda[i]);
    return d;
}

// Jacquet integral oracle: M(nu) * sum of s(w u h) psi^{-1}(u) over U_0(p^{-k}Z_p), written out independently.
// The integrand is right invariant under U_0(p^c Z_p) for c >= max gap of lambda, so cells have volume p^{-c}.
cplx jacquet_whittaker_oracle(const CVector& nu, const std::vector<int>& lambda, long p, int k)
{
    std::size_t m = nu.size();
    RatMatrix h = diag_p(lambda, p);
    int c = std::max(0, lambda.front() - lambda.back());
    RatMatrix w(m, m);
    for (std::size_t i = 0; i < m; ++i) w(i, m - 1 - i) = 1;
    long pk = 1, pkc = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    for (int i = 0; i < k + c; ++i) pkc *= p;
    std::vector<std::pair<std::size_t, std::size_t>> coords;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) coords.emplace_back(i, j);
    std::size_t total = 1;
    double volume = 1;
    for (std::size_t q = 0; q < coords.size(); ++q) {
        total *= static_cast<std::size_t>(pkc);
        volume /= static_cast<double>(pkc / pk);
    }
    cplx acc = 0;
    for (std::size_t idx = 0; idx < total; ++idx) {
        RatMatrix u = RatMatrix::identity(m);
        std::size_t rest = idx;
        for (auto [i, j] : coords) {
            u(i, j) = rat(static_cast<long>(rest % static_cast<std::size_t>(pkc)), pk);
            rest /= static_cast<std::size_t>(pkc);
        }
        auto d = iwasawa_qp(w * u * h, p);
        cplx e = 0;
        for (std::size_t i = 0; i < m; ++i) e -= static_cast<double>(d.exponents[i]) * (nu[i] + (static_cast<double>(m) + 1 - 2.0 * static_cast<double>(i + 1)) / 2);
        Rational s = 0;
        for (std::size_t i = 0; i + 1 < m; ++i) s += u(i, i + 1);
        auto [num, depth] = frac_p(s, p);
        double ang = -2 * kPi * num.get_d() / std::pow(static_cast<double>(p), static_cast<double>(depth));
        acc += std::exp(e * std::log(static_cast<double>(p))) * std::polar(1.0, ang);
    }
    cplx M = 1;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j) M /= (cplx(1) - std::exp(-(cplx(1) + nu[i] - nu[j]) * std::log(static_cast<double>(p))));
    return M * volume * acc;
}

RatMatrix random_gl_Zp(std::mt19937_64& rng, long p, std::size_t n)
{
    std::uniform_int_distribution<long> d(-6, 6);
    for (;;) {
        RatMatrix k(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                long den = d(rng);
                if (den == 0 || den % p == 0) den = 1;
                k(i, j) = rat(d(rng), den < 0 ? -den : den);
            }
        if (in_GL_Zp(k, p)) return k;
    }
}

} // namespace

// ---- delta and Casselman-Shalika ----

TEST(DeltaB, Examples)
{
    EXPECT_EQ(delta_B_half({0, 0, 0}, 3, 3), HalfPowerLaurent(1));
    EXPECT_EQ(delta_B_half({1, 0}, 2, 2), HalfPowerLaurent::half_power(2, -1));
    EXPECT_THROW(delta_B_half({1, 0}, 2, 3), std::invalid_argument);
}

TEST(DeltaB, AgreesWithSimpleRootCoordinates)
{
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> d(-5, 5);
    for (int n = 3; n <= 6; ++n)
        for (int trial = 0; trial < 30; ++trial) {
            int m = n - 1;
            std::vector<int> lam(static_cast<std::size_t>(m));
            for (auto& v : lam) v = d(rng);
            // delta_B0 = prod_{j <= n-2} y_j^{j(n-1-j)} with y_j = |p^{lambda_j - lambda_{j+1}}|
            long expo = 0;
            for (int j = 1; j <= n - 2; ++j) expo -= static_cast<long>(lam[static_cast<std::size_t>(j - 1)] - lam[static_cast<std::size_t>(j)]) * j * (n - 1 - j);
            HalfPowerLaurent h = delta_B_half(lam, 3, m);
            EXPECT_EQ(h * h, HalfPowerLaurent(rpow(3, expo)));
        }
}

TEST(CSValue, Examples)
{
    CVector t{cplx(0.3, 0.4), cplx(-1.1, 0.2)};
    EXPECT_EQ(cs_value(t, {0, 0}, 2), cplx(1));
    EXPECT_EQ(cs_value(t, {0, 1}, 2), cplx(0));
    EXPECT_LT(std::abs(cs_value(t, {1, 0}, 2) - (t[0] + t[1]) / std::sqrt(2.0)), 1e-15);
    std::vector<Rational> tr{rat(2), rat(1, 3)};
    EXPECT_EQ(cs_value_exact(tr, {1, 0}, 2), HalfPowerLaurent::half_power(2, -1) * HalfPowerLaurent(rat(7, 3)));
}

TEST(CSValue, MatchesJacquetIntegral)
{
    // W0(nu; p^lambda) from the Jacquet integral, with t_j = p^{-nu_j}
    struct Case
    {
        CVector nu;
        std::vector<int> lambda;
        long p;
        int k;
    };
    std::vector<Case> cases{{{cplx(1.5, 0.2), cplx(-1.5, 0.1)}, {1, 0}, 2, 8},
                            {{cplx(1.5, 0.2), cplx(-1.5, 0.1)}, {3, 1}, 2, 8},
                            {{cplx(1.2, 0), cplx(-1.2, 0)}, {2, -1}, 3, 5},
                            {{cplx(2.5, 0.1), cplx(0, -0.2), cplx(-2.5, 0)}, {1, 0, 0}, 2, 2},
                            {{cplx(2.5, 0.1), cplx(0, -0.2), cplx(-2.5, 0)}, {1, 1, 0}, 2, 2},
                            {{cplx(2.5, 0.1), cplx(0, -0.2), cplx(-2.5, 0)}, {2, 1, 0}, 2, 2}};
    for (const auto& c : cases) {
        cplx oracle = jacquet_whittaker_oracle(c.nu, c.lambda, c.p, c.k);
        cplx cs = cs_value(SatakeParam::from_nu(c.p, c.nu).t, c.lambda, c.p);
        EXPECT_LT(scaled_error(cs, oracle), 1e-9) << cs << " vs " << oracle;
    }
    // off the dominant cone both vanish
    CVector nu{cplx(1.5, 0), cplx(-1.5, 0)};
    EXPECT_LT(std::abs(jacquet_whittaker_oracle(nu, {0, 1}, 2, 8)), 1e-12);
}

TEST(CSValue, JacobiTrudiMatchesBranching)
{
    std::mt19937_64 rng(7);
    for (int n = 2; n <= 4; ++n) {
        CVector t = random_unit_circle(rng, n);
        t[0] *= 0.7;
        CSEvaluator jt(t, 3);
        SchurEvaluator<cplx> br(t);
        std::uniform_int_distribution<int> d(0, 6);
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> lam(static_cast<std::size_t>(n));
            for (auto& v : lam) v = d(rng) - 2;
            std::sort(lam.rbegin(), lam.rend());
            EXPECT_LT(std::abs(jt.schur_jt(lam) - br(lam)), 1e-10 * (1 + std::abs(br(lam))));
            EXPECT_LT(std::abs(jt(lam) - cs_value(t, lam, 3)), 1e-10 * (1 + std::abs(br(lam))));
        }
    }
    // repeated entries
    CSEvaluator one({1, 1, 1}, 2);
    EXPECT_LT(std::abs(one.schur_jt({2, 1, 0}) - 8.0), 1e-12);
}

TEST(CSValue, SymmetricInT)
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        CVector t = random_unit_circle(rng, 4);
        CVector s = t;
        std::shuffle(s.begin(), s.end(), rng);
        std::vector<int> lam{3, 1, 1, 0};
        EXPECT_LT(std::abs(cs_value(t, lam, 5) - cs_value(s, lam, 5)), 1e-12);
        EXPECT_LT(std::abs(local_L(0.5, SatakeParam(5, t)) - local_L(0.5, SatakeParam(5, s))), 1e-12);
    }
    std::vector<Rational> a{rat(2), rat(1, 3), rat(-5, 7)}, b{rat(-5, 7), rat(2), rat(1, 3)};
    EXPECT_EQ(cs_value_exact(a, {2, 1, -1}, 3), cs_value_exact(b, {2, 1, -1}, 3));
}

// ---- Whittaker function on the group ----

TEST(WhittakerAt, Examples)
{
    std::vector<Rational> t{rat(2), rat(1, 3), rat(3, 2)};
    EXPECT_EQ(whittaker_at_exact(t, RatMatrix::identity(3), 5), HalfPowerLaurent(1));
    RatMatrix u = RatMatrix::identity(3);
    u(0, 1) = 7;
    u(0, 2) = rat(1, 2);
    u(1, 2) = -3;
    EXPECT_EQ(whittaker_at_exact(t, u, 5), HalfPowerLaurent(1));
    RatVector x{rat(0), rat(1, 5)};
    auto v = whittaker_at_exact(t, n_of(x), 5);
    EXPECT_EQ(v, HalfPowerLaurent(5, CyclotomicValue::root(5, 1, 1)));
    EXPECT_LT(std::abs(to_complex(v) - std::polar(1.0, 2 * kPi / 5)), 1e-14);
}

TEST(WhittakerAt, RightKInvariantExact)
{
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> d(-2, 2);
    std::vector<Rational> t{rat(2), rat(1, 3), rat(-3, 2)};
    for (long p : {2L, 3L})
        for (int trial = 0; trial < 40; ++trial) {
            RatMatrix g = RatMatrix::identity(3);
            for (std::size_t i = 0; i < 3; ++i) g(i, i) = rpow(p, d(rng));
            g(0, 1) = rat(d(rng), p);
            g(1, 2) = rat(d(rng), p * p);
            g(0, 2) = rat(d(rng), p);
            RatMatrix k = random_gl_Zp(rng, p, 3);
            EXPECT_EQ(whittaker_at_exact(t, g * k, p), whittaker_at_exact(t, g, p));
        }
}

TEST(WhittakerAt, LeftUnipotentEquivariance)
{
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> d(-4, 4);
    CVector t = random_unit_circle(rng, 3);
    for (long p : {2L, 3L})
        for (int trial = 0; trial < 40; ++trial) {
            RatMatrix g = random_gl_Zp(rng, p, 3);
            for (std::size_t j = 0; j < 3; ++j) g(0, j) *= rpow(p, d(rng) % 3);
            RatMatrix u = RatMatrix::identity(3);
            u(0, 1) = rat(d(rng), p * p);
            u(1, 2) = rat(d(rng), p);
            u(0, 2) = rat(d(rng), 7);
            cplx lhs = whittaker_at(t, u * g, p);
            cplx rhs = psi_p(Rational(u(0, 1) + u(1, 2)), p).to_complex() * whittaker_at(t, g, p);
            EXPECT_LT(std::abs(lhs - rhs), 1e-12 * (1 + std::abs(rhs)));
        }
}

// ---- L-factors ----

TEST(LocalL, Examples)
{
    SatakeParam one(2, {1});
    EXPECT_LT(std::abs(local_L(2.0, one) - zeta_p(2.0, 2)), 1e-15);
    SatakeParam t(2, {1, 1, 1});
    EXPECT_LT(std::abs(local_L(1.0, t) - 8.0), 1e-13);
    EXPECT_TRUE(t.trivial_central);
    EXPECT_TRUE(t.unitary_generic);
    EXPECT_FALSE(SatakeParam(2, {2.0, 1.0}).unitary_generic);
    EXPECT_THROW(SatakeParam(2, {0.0, 1.0}), std::invalid_argument);
    EXPECT_THROW(SatakeParam(6, {1.0}), std::invalid_argument);
}

TEST(LocalL, AdjointFactorisation)
{
    std::mt19937_64 rng(19);
    for (int n = 2; n <= 4; ++n)
        for (int trial = 0; trial < 20; ++trial) {
            SatakeParam t(3, random_unit_circle(rng, n));
            // tempered: L(s, Ad) = zeta_p(s)^{n-1} prod_{i != j} (1 - t_i / t_j p^{-s})^{-1}
            cplx q = 1.0 / 3.0, oracle = std::pow(zeta_p(1.0, 3), n - 1);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j) oracle /= (cplx(1) - t.t[static_cast<std::size_t>(i)] / t.t[static_cast<std::size_t>(j)] * q);
            EXPECT_LT(scaled_error(adjoint_L(1.0, t), oracle), 1e-13);
        }
}

// ---- truncated zeta integrals ----

TEST(ZetaTruncated, TrivialParameter)
{
    auto r = zeta_truncated(1.0, {0, 0}, SatakeParam(2, {1, 1, 1}), 40);
    EXPECT_LT(std::abs(r.reference - 64.0), 1e-12);
    EXPECT_LT(r.error, 1e-8);
    EXPECT_TRUE(r.converged);
    auto s = zeta_truncated(cplx(1, 2.5), {0, 0}, SatakeParam(2, {1, 1, 1}), 40);
    EXPECT_LT(s.error, 1e-8);
}

TEST(ZetaTruncated, PermutedNuGivesSameValue)
{
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        SatakeParam t(2, random_unit_circle(rng, 4));
        CVector nu{cplx(0.1, 0.3), cplx(-0.2, 0.0), cplx(0.05, -0.7)}, mu{nu[2], nu[0], nu[1]};
        auto a = zeta_truncated(1.0, nu, t, 16), b = zeta_truncated(1.0, mu, t, 16);
        EXPECT_LT(scaled_error(a.value, b.value), 1e-12);
    }
}

TEST(ZetaTruncated, RandomUnitaryParameters)
{
    std::mt19937_64 rng(29);
    for (long p : {2L, 3L})
        for (int trial = 0; trial < 5; ++trial) {
            SatakeParam t(p, random_unit_circle(rng, 3));
            auto r = zeta_truncated(1.0, {0.25, -0.25}, t, 60);
            EXPECT_LT(r.error, 1e-7) << p;
            EXPECT_TRUE(r.converged);
        }
}

TEST(ZetaTruncated, GeometricDecay)
{
    std::mt19937_64 rng(31);
    SatakeParam t(2, random_unit_circle(rng, 3));
    std::vector<double> err;
    for (int L : {5, 10, 20, 40}) err.push_back(zeta_truncated(1.0, {0.1, -0.1}, t, L).error);
    for (std::size_t i = 1; i < err.size(); ++i) EXPECT_LT(err[i], 0.5 * err[i - 1]);
}

// ---- mirabolic inner product ----

TEST(MirabolicInner, TrivialParameter)
{
    auto r = mirabolic_inner_truncated(SatakeParam(2, {1, 1, 1}), 40);
    EXPECT_LT(std::abs(r.reference - 512.0), 1e-9);
    EXPECT_LT(r.error, 1e-6);
    EXPECT_THROW(mirabolic_inner_truncated(SatakeParam(2, {2.0, 1.0, 1.0}), 10), std::invalid_argument);
}

TEST(MirabolicInner, TemperedPositiveAndDecaying)
{
    std::mt19937_64 rng(37);
    for (int n = 2; n <= 4; ++n) {
        SatakeParam t(3, random_unit_circle(rng, n));
        std::vector<double> err;
        for (int L : {4, 8, 16}) {
            auto r = mirabolic_inner_truncated(t, L);
            EXPECT_GT(r.value.real(), 0);
            EXPECT_EQ(r.value.imag(), 0);
            err.push_back(r.error);
        }
        EXPECT_LE(err[1], 0.5 * err[0]);
        EXPECT_LE(err[2], 0.5 * err[1] + 1e-15);
    }
}

// ---- truncated Jacquet integral ----

TEST(JacquetTruncated, RankOne)
{
    auto r = jacquet_truncated({1, -1}, 2, 6, 1);
    EXPECT_LT(std::abs(r.reference - 0.875), 1e-15);
    EXPECT_LT(r.error, 1e-8);
    auto s = jacquet_truncated({1, -1}, 2, 6, 8);
    EXPECT_LT(std::abs(s.reference - 0.875 / 4.0), 1e-15);
    EXPECT_LT(s.error, 1e-8);
    EXPECT_LT(std::abs(jacquet_truncated({1, -1}, 3, 4, 9).reference - (1 - 1.0 / 27) / 6.0), 1e-15);
}

TEST(JacquetTruncated, RankTwo)
{
    auto r = jacquet_truncated({cplx(2, 0.3), 0, cplx(-2, 0.1)}, 2, 3, 1);
    EXPECT_LT(r.error, 1e-5);
    auto s = jacquet_truncated({1.6, 0, -1.6}, 3, 3, 3);
    EXPECT_LT(s.error, 1e-5);
}

TEST(JacquetTruncated, Preconditions)
{
    EXPECT_THROW(jacquet_truncated({0.5, 0}, 2, 3), std::invalid_argument);
    EXPECT_THROW(jacquet_truncated({3, 1.5, 1}, 2, 2), std::invalid_argument);
    EXPECT_THROW(jacquet_truncated({2, 0}, 4, 2), std::invalid_argument);
}
