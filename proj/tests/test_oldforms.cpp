// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#include <gln/oldforms.hpp>

#include <gtest/gtest.h>
#include <json.hpp>

#include <fstream>
#include <random>

using namespace gln;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Random tempered parameter with trivial central character.
SatakeParam random_tempered(std::mt19937_64& rng, int n, long p)
{
    std::uniform_real_distribution<double> ang(0, 2 * kPi);
    CVector t;
    cplx prod = 1;
    for (int i = 0; i + 1 < n; ++i) {
        t.push_back(std::polar(1.0, ang(rng)));
        prod *= t.back();
    }
    t.push_back(1.0 / prod);
    return SatakeParam(p, t);
}

RatMatrix diag_p(const std::vector<int>& lambda, long p)
{
    RatMatrix d = RatMatrix::identity(lambda.size());
    for (std::size_t i = 0; i < lambda.size(); ++i) d(i, i) = rpow(p, lambda[i]);
    return d;
}

/// Random element of GL_m(Z_(p)): integer matrix with unit determinant.
RatMatrix random_gl_Zp(std::mt19937_64& rng, std::size_t m, long p)
{
    std::uniform_int_distribution<long> d(-6, 6);
    while (true) {
        RatMatrix k(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j) k(i, j) = d(rng);
        if (in_GL_Zp(k, p)) return k;
    }
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

/// W0(g) read off the column Hermite form g = B k, B upper triangular with p-power diagonal.
HalfPowerLaurent whittaker_via_hermite(const std::vector<Rational>& t, const RatMatrix& g, long p)
{
    RatMatrix B = column_hermite(g, p);
    std::vector<int> lambda;
    Rational s = 0;
    for (std::size_t i = 0; i < B.rows(); ++i) lambda.push_back(static_cast<int>(*valuation(B(i, i), p)));
    for (std::size_t i = 0; i + 1 < B.rows(); ++i) s += B(i, i + 1) / B(i + 1, i + 1);
    return HalfPowerLaurent(p, psi_p(s, p)) * cs_value_exact(t, lambda, p);
}

} // namespace

// ---------------------------------------------------------------------------

TEST(ColumnHermite, ReduceModPower)
{
    EXPECT_EQ(reduce_mod_pv(rat(7), 2, 2), rat(3));
    EXPECT_EQ(reduce_mod_pv(rat(1, 3), 2, 1), rat(1));
    EXPECT_EQ(reduce_mod_pv(rat(5, 4), 2, 0), rat(1, 4));
    EXPECT_EQ(reduce_mod_pv(rat(-1, 2), 3, 1), rat(1));
    EXPECT_EQ(reduce_mod_pv(rat(0), 5, 3), rat(0));
    EXPECT_EQ(reduce_mod_pv(rat(9), 3, 2), rat(0));
}

TEST(ColumnHermite, CanonicalOnRightCosets)
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long> e(-3, 3), v(-2, 2);
    for (long p : {2L, 3L, 5L})
        for (std::size_t m : {2u, 3u})
            for (int trial = 0; trial < 40; ++trial) {
                RatMatrix g(m, m);
                do {
                    for (std::size_t i = 0; i < m; ++i)
                        for (std::size_t j = 0; j < m; ++j) g(i, j) = rat(e(rng)) * rpow(p, v(rng));
                } while (determinant(g) == 0);
                RatMatrix H = column_hermite(g, p);
                EXPECT_TRUE(in_GL_Zp(inverse(g) * H, p));
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(H(i, j), 0);
                EXPECT_EQ(column_hermite(g * random_gl_Zp(rng, m, p), p), H);
                EXPECT_EQ(column_hermite(H, p), H);
            }
}

// ---------------------------------------------------------------------------

TEST(HeckeCosets, Examples)
{
    EXPECT_EQ(hecke_cosets(2, 1, 2).representatives.size(), 3u);
    auto central = hecke_cosets(2, 2, 2);
    ASSERT_EQ(central.representatives.size(), 1u);
    EXPECT_EQ(central.representatives[0], RatMatrix({{rat(2), rat(0)}, {rat(0), rat(2)}}));
    EXPECT_EQ(hecke_cosets(3, 1, 2).representatives.size(), 7u);
    EXPECT_EQ(hecke_cosets(3, 0, 5).representatives.size(), 1u);
    EXPECT_THROW(hecke_cosets(2, 3, 2), std::invalid_argument);
    EXPECT_THROW(hecke_cosets(2, 1, 4), std::invalid_argument);
}

TEST(HeckeCosets, CountIsGaussianBinomial)
{
    EXPECT_EQ(gaussian_binomial(2, 1, 2), 3);
    EXPECT_EQ(gaussian_binomial(3, 1, 2), 7);
    EXPECT_EQ(gaussian_binomial(4, 2, 2), 35);
    for (long p : {2L, 3L, 5L})
        for (int m = 1; m <= 3; ++m)
            for (int j = 0; j <= m; ++j)
                for (auto side : {CosetSide::bK, CosetSide::Kb})
                    EXPECT_EQ(Integer(hecke_cosets(m, j, p, side).representatives.size()), gaussian_binomial(m, j, p))
                        << "m=" << m << " j=" << j << " p=" << p;
}

TEST(HeckeCosets, PairwiseInequivalentWithSmithType)
{
    for (long p : {2L, 3L})
        for (int m = 1; m <= 3; ++m)
            for (int j = 0; j <= m; ++j) {
                auto right = hecke_cosets(m, j, p, CosetSide::bK).representatives;
                auto left = hecke_cosets(m, j, p, CosetSide::Kb).representatives;
                for (const auto* reps : {&right, &left})
                    for (const auto& b : *reps) {
                        auto d = smith_at_p(b, p);
                        EXPECT_EQ(std::count(d.begin(), d.end(), 1L), j);
                        EXPECT_EQ(std::count(d.begin(), d.end(), 0L), m - j);
                    }
                for (std::size_t a = 0; a < right.size(); ++a) {
                    EXPECT_EQ(column_hermite(right[a], p), right[a]);
                    for (std::size_t b = a + 1; b < right.size(); ++b) {
                        EXPECT_FALSE(same_right_coset(right[a], right[b], p));
                        EXPECT_NE(column_hermite(right[a], p), column_hermite(right[b], p));
                    }
                }
                for (std::size_t a = 0; a < left.size(); ++a)
                    for (std::size_t b = a + 1; b < left.size(); ++b) EXPECT_FALSE(same_left_coset(left[a], left[b], p));
            }
}

TEST(HeckeCosets, CompleteOnRandomDoubleCosetElements)
{
    std::mt19937_64 rng(5);
    for (long p : {2L, 3L})
        for (int m = 2; m <= 3; ++m)
            for (int j = 0; j <= m; ++j) {
                auto right = hecke_cosets(m, j, p, CosetSide::bK).representatives;
                auto left = hecke_cosets(m, j, p, CosetSide::Kb).representatives;
                std::vector<int> a(static_cast<std::size_t>(m), 0);
                for (int i = 0; i < j; ++i) a[static_cast<std::size_t>(i)] = 1;
                for (int trial = 0; trial < 25; ++trial) {
                    auto M = static_cast<std::size_t>(m);
                    RatMatrix g = random_gl_Zp(rng, M, p) * diag_p(a, p) * random_gl_Zp(rng, M, p);
                    int hits_right = 0, hits_left = 0;
                    for (const auto& b : right) hits_right += same_right_coset(g, b, p);
                    for (const auto& b : left) hits_left += same_left_coset(g, b, p);
                    EXPECT_EQ(hits_right, 1);
                    EXPECT_EQ(hits_left, 1);
                }
            }
}

// ---------------------------------------------------------------------------

TEST(SatakeOfPhi, TrivialAndRankTwo)
{
    EXPECT_NEAR(std::abs(satake_of_phi(0, {cplx(0.3, 1.0), cplx(-0.2, 0.0)}, 2, 3) - cplx(1)), 0.0, 1e-15);
    auto X = poly_variables(2);
    for (long p : {2L, 3L, 7L}) EXPECT_EQ(satake_of_phi_poly(1, 2, p), X[0] + X[1]);
}

TEST(SatakeOfPhi, ElementarySymbolic)
{
    for (long p : {2L, 3L, 5L})
        for (int m = 1; m <= 3; ++m) {
            auto X = poly_variables(static_cast<std::size_t>(m));
            for (int j = 0; j <= m; ++j) EXPECT_EQ(satake_of_phi_poly(j, m, p), elementary(j, X)) << "m=" << m << " j=" << j << " p=" << p;
        }
}

TEST(SatakeOfPhi, NumericRankThree)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 10; ++trial) {
        CVector nu{cplx(u(rng), u(rng)), cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
        CVector x;
        for (const auto& v : nu) x.push_back(p_power(2, v));
        EXPECT_LE(scaled_error(satake_of_phi(2, nu, 3, 2), elementary(2, x)), 1e-12);
    }
}

// ---------------------------------------------------------------------------

TEST(WjValue, ZeroIsWhittaker)
{
    std::mt19937_64 rng(8);
    SatakeParam t = random_tempered(rng, 3, 3);
    RatMatrix g{{rat(3), rat(1, 3), rat(2)}, {rat(0), rat(1, 9), rat(5)}, {rat(1), rat(0), rat(1)}};
    EXPECT_EQ(W_j_value(0, t, RatMatrix::identity(3)), whittaker_at(t.t, RatMatrix::identity(3), 3));
    EXPECT_NEAR(std::abs(W_j_value(0, t, RatMatrix::identity(3)) - cplx(1)), 0.0, 1e-15);
    EXPECT_EQ(W_j_value(0, t, g), whittaker_at(t.t, g, 3));
}

TEST(WjValue, KroneckerAtIdentityExact)
{
    std::mt19937_64 rng(21);
    for (int n = 2; n <= 4; ++n)
        for (long p : {2L, 3L})
            for (int trial = 0; trial < 2; ++trial) {
                auto t = random_rational_t(rng, n);
                RatMatrix one = RatMatrix::identity(static_cast<std::size_t>(n));
                for (int j = 0; j < n; ++j)
                    EXPECT_EQ(W_j_value_exact(j, t, one, p), HalfPowerLaurent(j == 0 ? 1L : 0L)) << "n=" << n << " p=" << p << " j=" << j;
            }
}

TEST(WjValue, TorusPointsTwoEvaluationOrders)
{
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<int> l(-1, 3);
    for (long p : {2L, 3L})
        for (int n = 3; n <= 4; ++n) {
            auto m = static_cast<std::size_t>(n - 1);
            auto t = random_rational_t(rng, n);
            for (int trial = 0; trial < 6; ++trial) {
                std::vector<int> lambda(m);
                for (auto& x : lambda) x = l(rng);
                if (trial == 0) {
                    std::fill(lambda.begin(), lambda.end(), 0);
                    lambda[0] = 1;
                }
                RatMatrix g = iota(diag_p(lambda, p));
                for (int j = 0; j < n; ++j) {
                    // oracle: multiply first, then take the column Hermite form
                    HalfPowerLaurent s;
                    for (const auto& b : hecke_cosets(n - 1, j, p, CosetSide::Kb).representatives) s += whittaker_via_hermite(t, g * iota(inverse(b)), p);
                    s *= HalfPowerLaurent::half_power(p, -static_cast<long>(j) * (n - 1 - j) - j);
                    EXPECT_EQ(W_j_value_exact(j, t, g, p), s);
                }
            }
        }
}

TEST(WjValue, TorusEvaluatorMatchesGeneric)
{
    std::mt19937_64 rng(6);
    for (int n = 2; n <= 4; ++n) {
        SatakeParam t = random_tempered(rng, n, 2);
        OldformTorusEvaluator fast(t);
        int checked = 0;
        detail::for_each_near_dominant(n - 1, 3, [&](const std::vector<int>& lam) {
            if (checked++ % 3 != 0) return;
            RatMatrix g = iota(diag_p(lam, 2));
            for (int j = 0; j < n; ++j) EXPECT_LE(std::abs(fast(j, lam) - W_j_value(j, t, g)), 1e-12);
        });
    }
}

TEST(WjValue, RightK1Invariance)
{
    // W^{(j)} is right invariant under K_1(p)
    std::mt19937_64 rng(9);
    long p = 2;
    SatakeParam t = random_tempered(rng, 3, p);
    RatMatrix g{{rat(2), rat(1, 2), rat(0)}, {rat(0), rat(1), rat(3, 4)}, {rat(0), rat(0), rat(1)}};
    int checked = 0;
    while (checked < 6) {
        RatMatrix k = random_gl_Zp(rng, 3, p);
        if (!in_K1(k, p, p)) continue;
        ++checked;
        for (int j = 0; j < 3; ++j) EXPECT_LE(std::abs(W_j_value(j, t, g * k) - W_j_value(j, t, g)), 1e-12);
    }
}

// ---------------------------------------------------------------------------

TEST(FMatrix, Examples)
{
    SatakeParam t(2, {1.0, 1.0, 1.0});
    CMatrix F = F_matrix({0.0, 0.0}, t);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(F(i, j), cplx(0));
    EXPECT_NEAR(std::abs(F(2, 0) - 0.5), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(F(2, 1) - 2 / std::sqrt(2.0)), 0.0, 1e-15);
    EXPECT_EQ(F(2, 2), cplx(1));
    EXPECT_THROW(F_matrix({-0.1, 0.0}, t), std::domain_error);
    EXPECT_THROW(F_matrix({0.0}, t), std::invalid_argument);
}

TEST(FMatrix, ColumnsMatchTruncatedZeta)
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 3; ++trial) {
        SatakeParam t = random_tempered(rng, 3, 2);
        CVector nu{cplx(0.5, 0.3 * trial), cplx(0.8, -0.2)};
        for (const auto& r : F_column_check(nu, t, 40)) {
            EXPECT_LE(r.error, 1e-6);
            EXPECT_TRUE(r.converged);
        }
    }
    SatakeParam t = random_tempered(rng, 3, 2);
    for (const auto& r : F_column_check({0.0, 0.0}, t, 80)) EXPECT_LE(r.error, 1e-6);
}

// ---------------------------------------------------------------------------

TEST(GMatrix, OracleCornerAndHermitian)
{
    std::mt19937_64 rng(13);
    for (int n = 2; n <= 3; ++n) {
        SatakeParam t = random_tempered(rng, n, 2);
        CMatrix G = G_matrix(t, GMode::oracle, 30);
        auto N = static_cast<std::size_t>(n);
        EXPECT_LE(scaled_error(G(N - 1, N - 1), rs_L(1.0, t, SatakeParam(2, t.conjugate()))), 1e-7);
        EXPECT_LE(scaled_error(G(N - 1, N - 1), mirabolic_inner_truncated(t, 30).value), 1e-12);
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) EXPECT_LE(std::abs(G(i, j) - std::conj(G(j, i))), 1e-12);
    }
}

TEST(GMatrix, ClosedMatchesOracle)
{
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 4; ++trial) {
        SatakeParam t = random_tempered(rng, 3, 2);
        EXPECT_LE(max_scaled_diff(G_matrix(t, GMode::closed), G_matrix(t, GMode::oracle, 30)), 1e-6);
    }
    SatakeParam t2 = random_tempered(rng, 2, 3);
    EXPECT_LE(max_scaled_diff(G_matrix(t2, GMode::closed), G_matrix(t2, GMode::oracle, 40)), 1e-8);
}

TEST(GMatrix, TrivialParameterAtLargerTruncation)
{
    SatakeParam t(2, {1.0, 1.0, 1.0});
    EXPECT_LE(max_scaled_diff(G_matrix(t, GMode::closed), G_matrix(t, GMode::oracle, 60)), 1e-6);
}

TEST(GMatrix, OracleConvergesUnderDoubling)
{
    std::mt19937_64 rng(15);
    for (int n : {3, 4}) {
        SatakeParam t = random_tempered(rng, n, 2);
        CMatrix closed = G_matrix(t, GMode::closed);
        double prev = 1e300;
        for (int L : {5, 10, 20}) {
            double e = max_scaled_diff(G_matrix(t, GMode::oracle, L), closed);
            EXPECT_LT(e, prev) << "n=" << n << " Lambda=" << L;
            prev = e;
        }
        if (n == 3) EXPECT_LE(prev, 1e-4);
    }
}

TEST(GMatrix, ContinuousAtDegenerateParameter)
{
    SatakeParam t0(2, {1.0, 1.0, 1.0});
    CMatrix G0 = G_matrix(t0, GMode::closed);
    for (double eps : {1e-3, 1e-5}) {
        SatakeParam te(2, {std::polar(1.0, eps), std::polar(1.0, -eps), 1.0});
        EXPECT_LE(max_scaled_diff(G_matrix(te, GMode::closed), G0), 50 * eps);
    }
}

TEST(GMatrix, Preconditions)
{
    EXPECT_THROW(G_matrix(SatakeParam(2, {2.0, 3.0, 1.0 / 6}), GMode::closed), std::invalid_argument);
    EXPECT_THROW(G_matrix(SatakeParam(2, {std::polar(1.0, 0.3), 1.0, 1.0}), GMode::closed), std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST(Period, ThreeRoutesAgree)
{
    std::mt19937_64 rng(16);
    for (int trial = 0; trial < 4; ++trial) {
        SatakeParam t = random_tempered(rng, 3, 2);
        auto r = period({0.0, 0.0}, t, 80);
        ASSERT_TRUE(r.direct.has_value()) << r.direct_skipped;
        EXPECT_LE(r.direct_trace, 1e-6);
        EXPECT_LE(r.direct_closed, 1e-6);
        EXPECT_LE(r.trace_closed, 1e-12);
        EXPECT_TRUE(std::isfinite(r.bound_ratio));
    }
}

TEST(Period, EvenRankSign)
{
    std::mt19937_64 rng(17);
    for (long p : {2L, 5L}) {
        SatakeParam t = random_tempered(rng, 2, p);
        auto r = period({cplx(0.2, 0.1)}, t, 60);
        ASSERT_TRUE(r.direct.has_value());
        EXPECT_LE(r.direct_closed, 1e-8);
        EXPECT_LE(r.trace_closed, 1e-12);
    }
}

TEST(Period, SymmetricInNu)
{
    std::mt19937_64 rng(18);
    SatakeParam t = random_tempered(rng, 3, 3);
    CVector nu{cplx(0.3, 0.1), cplx(0.7, -0.4)}, swapped{nu[1], nu[0]};
    EXPECT_LE(scaled_error(period_closed(nu, t), period_closed(swapped, t)), 1e-14);
    EXPECT_LE(scaled_error(period_trace(nu, t), period_trace(swapped, t)), 1e-14);
}

TEST(Period, TraceEqualsClosedSymbolic)
{
    for (std::size_t n : {2u, 3u}) {
        auto k = period_kernels_symbolic(n);
        EXPECT_FALSE(k.closed.is_zero());
        EXPECT_EQ(k.trace, k.closed) << "n=" << n;
    }
}

TEST(Period, Preconditions)
{
    SatakeParam t(2, {1.0, 1.0, 1.0});
    EXPECT_THROW(period({-0.5, 0.0}, t), std::domain_error);
    EXPECT_THROW(period({0.0, 0.0}, SatakeParam(2, {2.0, 0.25, 2.0})), std::invalid_argument);
}

// ---------------------------------------------------------------------------

TEST(LrsScan, TemperedAndBoundaryFinite)
{
    auto tempered = lrs_bound_scan(3, {2, 3}, 20, 0.0);
    for (const auto& e : tempered.entries) {
        EXPECT_TRUE(e.finite);
        EXPECT_GT(e.sup_ratio, 0);
    }
    // boundary Re s = 1/2 - 1/10
    for (long p : {2L, 3L, 5L, 7L, 11L})
        for (double th : {0.0, 1.0, 2.5}) {
            cplx P = period_closed({0.0, 0.0}, lrs_grid_parameter(3, p, 0.4, th));
            EXPECT_TRUE(std::isfinite(std::abs(P)));
        }
    EXPECT_THROW(lrs_bound_scan(3, {2}, 10, 0.45), std::invalid_argument);
}

TEST(LrsScan, GridParametersAreAdmissible)
{
    for (int n : {2, 3, 4})
        for (int k = 0; k < 20; ++k) {
            auto [s, th] = lrs_grid_point(k, 20, 0.5 - 1.0 / (n * n + 1));
            SatakeParam t = lrs_grid_parameter(n, 3, s, th);
            EXPECT_TRUE(t.unitary_generic);
            EXPECT_TRUE(t.trivial_central);
        }
}

TEST(LrsScan, RegressionBaseline)
{
    std::ifstream in(std::string(GLN_TEST_DATA_DIR) + "/lrs_baseline.json");
    ASSERT_TRUE(in.good());
    auto base = nlohmann::json::parse(in);
    int points = base["points"];
    auto rep = lrs_bound_scan(base["n"], {2, 3, 5, 7, 11}, points, base["sigma_max"], 4);
    double p2 = base["sup_ratio"]["2"];
    constexpr double slack = 1.5;
    for (const auto& e : rep.entries) {
        double stored = base["sup_ratio"][std::to_string(e.p)];
        EXPECT_LE(scaled_error(e.sup_ratio, stored), 1e-9) << "p=" << e.p;
        EXPECT_LE(e.sup_ratio, slack * p2) << "p=" << e.p;
    }
    // threads do not change the result
    auto single = lrs_bound_scan(base["n"], {2, 3}, points, base["sigma_max"], 1);
    EXPECT_EQ(single.entries[0].sup_ratio, rep.entries[0].sup_ratio);
    EXPECT_EQ(single.entries[1].sup_ratio, rep.entries[1].sup_ratio);
}
