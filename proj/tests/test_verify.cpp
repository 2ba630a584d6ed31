#include <cmath>

#include <gtest/gtest.h>

#include "glancing/parallel.hpp"
#include "glancing/rng.hpp"
#include "glancing/verify.hpp"

using namespace glancing::verify;
using glancing::green::Collar;

TEST(Verify, JAlphaBoundary) {
    EXPECT_EQ(j_alpha(64, 0.6), 3);     // 3.6
    EXPECT_EQ(j_alpha(1024, 0.6), 6);   // exactly 6
    EXPECT_EQ(j_alpha(1024, 0.5), 5);
    EXPECT_EQ(j_alpha(1, 0.6), 0);
    EXPECT_THROW(j_alpha(0.5, 0.6), std::domain_error);
    for (double lam : {64.0, 100.0, 777.0, 1024.0}) {
        const int j = j_alpha(lam, 0.6);
        EXPECT_GE(std::exp2(-j), std::pow(lam, -0.6) * (1 - 1e-12));
        EXPECT_LT(std::exp2(-(j + 1)), std::pow(lam, -0.6));
    }
}

TEST(Verify, NuLadder) {
    const auto l2 = nu_ladder(2, 3);
    ASSERT_EQ(l2.size(), 4u);
    EXPECT_DOUBLE_EQ(l2[3], 3.0);
    const auto l3 = nu_ladder(3, 2);
    EXPECT_DOUBLE_EQ(l3[0], 0.5);
    EXPECT_DOUBLE_EQ(l3[2], 2.5);
    EXPECT_TRUE(nu_ladder(2, -1).empty());
    EXPECT_THROW(nu_ladder(4, 3), std::domain_error);
}

TEST(Verify, OlsRecoversSyntheticSlopes) {
    std::vector<SweepRecord> rec;
    for (double lam : {64.0, 128.0, 256.0, 512.0})
        for (int j = 0; j <= 4; ++j) {
            SweepRecord r;
            r.lambda = lam;
            r.j = j;
            r.hs_norm = 0.37 / lam * std::exp2(-0.5 * j);
            rec.push_back(r);
        }
    const auto a = fit_scaling(rec, Axis::LambdaAtFixedJ, 2);
    EXPECT_NEAR(a.slope, -1.0, 1e-12);
    EXPECT_EQ(a.points, 4);
    EXPECT_NEAR(a.r_squared, 1.0, 1e-12);
    const auto b = fit_scaling(rec, Axis::JAtFixedLambda, 256);
    EXPECT_NEAR(b.slope, 0.5, 1e-12);
    EXPECT_EQ(b.points, 5);
    EXPECT_THROW(fit_scaling(rec, Axis::JAtFixedLambda, 100), std::invalid_argument);

    // noisy line: slope from the textbook normal equations
    std::vector<double> x{0, 1, 2, 3, 4}, y{1.0, 2.9, 5.2, 7.1, 8.8};
    const auto f = ols(x, y);
    EXPECT_NEAR(f.slope, 1.98, 1e-12);
    EXPECT_NEAR(f.intercept, 1.04, 1e-12);
    EXPECT_THROW(ols({1, 1, 1}, {1, 2, 3}), std::invalid_argument);
    EXPECT_THROW(ols({1, 2}, {1, 2}), std::invalid_argument);
}

TEST(Verify, SweepSupMatchesExhaustiveScan) {
    const double lambda = 32.0;
    SweepConfig opt;
    for (int j : {0, 2}) {
        const auto s = sweep_modes(2, lambda, j, BC::Neumann, opt);
        const Collar c = Collar::make(j);
        double best = 0.0, nu_best = 0.0;
        for (int l = 0; l <= static_cast<int>(8 * lambda * c.a_hi); ++l) {
            const double v = glancing::green::green_hs_norm({2, lambda, double(l), BC::Neumann}, c);
            if (v > best) {
                best = v;
                nu_best = l;
            }
        }
        EXPECT_DOUBLE_EQ(s.sup_norm, best) << j;
        EXPECT_DOUBLE_EQ(s.nu_star, nu_best) << j;
        EXPECT_GT(s.nu_star, lambda);
        EXPECT_LT(s.nu_star, 1.2 * lambda);
    }
}

TEST(Verify, SweepIndependentOfThreadCount) {
    SweepConfig a;
    a.lambdas = {64, 128};
    a.threads = 1;
    SweepConfig b = a;
    b.threads = 3;
    const auto ra = sweep_grid(a), rb = sweep_grid(b);
    ASSERT_EQ(ra.size(), rb.size());
    ASSERT_EQ(ra.size(), static_cast<std::size_t>(j_alpha(64, 0.6) + 1 + j_alpha(128, 0.6) + 1));
    for (std::size_t i = 0; i < ra.size(); ++i) {
        EXPECT_EQ(ra[i].hs_norm, rb[i].hs_norm);
        EXPECT_EQ(ra[i].nu_star, rb[i].nu_star);
        EXPECT_EQ(ra[i].modes_scanned, rb[i].modes_scanned);
        EXPECT_DOUBLE_EQ(ra[i].constant, ra[i].hs_norm * ra[i].lambda * std::exp2(0.5 * ra[i].j));
    }
    // nested scan equals the single-collar scan
    const auto nested = sweep_collars(2, 64, 3, BC::Neumann, a);
    EXPECT_EQ(nested[2].sup_norm, sweep_modes(2, 64, 2, BC::Neumann, a).sup_norm);
    SweepConfig bad = a;
    bad.alpha = 0.7;
    EXPECT_THROW(sweep_grid(bad), std::invalid_argument);
}

TEST(Verify, RandomRhsSupportedInCollar) {
    const Collar c = Collar::make(2);
    const auto g = random_rhs(64, c, 5, 9);
    const auto h = random_rhs(64, c, 5, 9);
    EXPECT_EQ(g(1.3), h(1.3));
    EXPECT_EQ(g(c.a_lo), 0.0);
    EXPECT_EQ(g(c.a_hi + 0.01), 0.0);
    EXPECT_EQ(g(0.9), 0.0);
    EXPECT_GT(std::abs(g(0.5 * (c.a_lo + c.a_hi))), 0.0);
    for (double w : g.omega) EXPECT_LE(std::fabs(w), 2.0 * 64 + 1e-12);
    EXPECT_NE(random_rhs(64, c, 5, 10)(1.3), g(1.3));
}

TEST(Verify, TrialObeysCauchySchwarz) {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const int n = 2 + static_cast<int>(seed % 2);
        const auto t = mode_inequality_trial(n, 24, static_cast<int>(seed % 3), BC::Neumann, seed, 40);
        EXPECT_GT(t.ratio, 0.0);
        EXPECT_LE(t.ratio, t.hs_norm * (1 + 1e-12)) << seed;
    }
}

TEST(Verify, PhiloxKnownAnswers) {
    // Random123 kat_vectors for philox4x32_10
    using P = glancing::Philox4x32;
    EXPECT_EQ(P::bijection({0, 0, 0, 0}, {0, 0}), (P::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
    EXPECT_EQ(P::bijection({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}),
              (P::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
    EXPECT_EQ(P::bijection({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}),
              (P::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
    glancing::CounterRng a(7, 3), b(7, 3), c(7, 4);
    const double x = a.uniform();
    EXPECT_EQ(x, b.uniform());
    EXPECT_NE(x, c.uniform());
}

TEST(Verify, ParallelForRethrowsLowestIndex) {
    std::vector<int> out(50, 0);
    glancing::parallel_for(out.size(), 4, [&](std::size_t i) { out[i] = static_cast<int>(i * i); });
    for (std::size_t i = 0; i < out.size(); ++i) EXPECT_EQ(out[i], static_cast<int>(i * i));
    try {
        glancing::parallel_for(20, 3, [](std::size_t i) {
            if (i == 7 || i == 13) throw std::runtime_error(std::to_string(i));
        });
        FAIL();
    } catch (const std::runtime_error& e) {
        EXPECT_STREQ(e.what(), "7");
    }
}
