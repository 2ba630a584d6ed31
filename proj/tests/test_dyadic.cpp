#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "glancing/dyadic.hpp"
#include "glancing/verify.hpp"

using namespace glancing::dyadic;

namespace {

// naive DFT pair on the x_n axis (dim = 1), test-only
std::vector<cd> dft(const std::vector<cd>& v, int sign) {
    const std::size_t N = v.size();
    std::vector<cd> out(N);
    for (std::size_t k = 0; k < N; ++k) {
        cd s = 0.0;
        for (std::size_t m = 0; m < N; ++m)
            s += v[m] * std::polar(1.0, sign * 2.0 * std::numbers::pi * double((k * m) % N) / double(N));
        out[k] = s;
    }
    return out;
}

// a(D_n)(c(x_n) u) on a one-dimensional lattice
template <class Mult, class Cut>
std::vector<cd> apply(const Field& u, Cut cut, Mult mult) {
    const Lattice& L = u.lat;
    std::vector<cd> v(u.v);
    for (int k = 0; k < L.nn; ++k) v[k] *= cut(L.xn(k));
    auto c = dft(v, -1);
    for (int k = 0; k < L.nn; ++k) c[k] *= mult(L.xin(k)) / double(L.nn);
    return dft(c, +1);
}

}  // namespace

TEST(Profiles, SmoothStepAndPhi) {
    EXPECT_EQ(smooth_step(0.0), 0.0);
    EXPECT_EQ(smooth_step(-1.0), 0.0);
    EXPECT_EQ(smooth_step(1.0), 1.0);
    for (double u : {0.1, 0.37, 0.5, 0.9}) EXPECT_NEAR(smooth_step(u) + smooth_step(1.0 - u), 1.0, 1e-15);
    EXPECT_EQ(phi(0.0), 1.0);
    EXPECT_EQ(phi(PHI_IN), 1.0);
    EXPECT_EQ(phi(PHI_OUT), 0.0);
    EXPECT_GT(phi(1.0), 0.0);
    EXPECT_LT(phi(1.0), 1.0);
    EXPECT_EQ(lowpass(LOWPASS_IN), 1.0);
    EXPECT_EQ(lowpass(LOWPASS_OUT), 0.0);
}

TEST(Profiles, LittlewoodPaleyPartition) {
    const LPSequence seq;
    std::vector<double> z;
    for (int i = 0; i < 10000; ++i) z.push_back(std::exp2(-4.0 + 20.0 * i / 9999.0));
    z.push_back(0.0);
    EXPECT_LE(lp_partition_defect(seq, z), 1e-12);
    // beta_1 lives in (2^{-1/2}, 2^{3/2})
    EXPECT_EQ(seq.beta1(0.7071), 0.0);
    EXPECT_EQ(seq.beta1(2.8285), 0.0);
    EXPECT_GT(seq.beta1(1.5), 0.0);
    EXPECT_DOUBLE_EQ(seq.beta(3, 6.0), seq.beta1(1.5));
    EXPECT_GE(seq.last_index(100.0), 7);
    EXPECT_EQ(seq.beta(seq.last_index(100.0) + 1, 100.0), 0.0);
}

TEST(Ladder, TelescopingAndGammaPartition) {
    const CutoffLadder L(1024, 0.6);
    EXPECT_EQ(L.J(), glancing::verify::j_alpha(1024, 0.6));
    double tel = 0.0, gam = 0.0;
    for (int i = 0; i <= 4000; ++i) {
        const double x = -3.0 + 6.0 * i / 4000.0;
        for (int l = 1; l <= L.J(); ++l) {
            double s = L.chi(l, x);
            for (int j = 0; j < l; ++j) s += L.psi(j, x);
            tel = std::max(tel, std::fabs(s - L.chi(0, x)));
        }
    }
    const double top = 4.0 * L.lambda();  // Gamma_1 has no upper edge
    for (int i = 0; i <= 4000; ++i) {
        const double xi = top * i / 4000.0;
        double s = 0.0;
        for (int j = 1; j <= L.J(); ++j) s += L.Gamma(j, xi);
        gam = std::max(gam, std::fabs(s - 1.0));
        for (int j = 1; j < L.J(); ++j) {
            double tail = 0.0;
            for (int l = j + 1; l <= L.J(); ++l) tail += L.Gamma(l, xi);
            EXPECT_NEAR(L.Gamma_tilde(j, xi), tail, 1e-12);
        }
    }
    EXPECT_LE(tel, 1e-12);
    EXPECT_LE(gam, 1e-12);
}

TEST(Ladder, SupportsOfCutoffs) {
    const CutoffLadder L(256, 0.6);
    for (int j = 0; j + 1 <= L.J(); ++j) {
        const double a = std::exp2(-j);
        EXPECT_EQ(L.chi(j, 0.999 * a), 1.0);
        EXPECT_EQ(L.chi(j, 2.0 * a), 0.0);
        // psi_j vanishes below 2^{-j-1} and at or beyond 2^{1-j}
        EXPECT_EQ(L.psi(j, 0.49 * a), 0.0);
        EXPECT_EQ(L.psi(j, 2.0 * a), 0.0);
        EXPECT_GT(L.psi(j, 0.75 * a), 0.0);
    }
    for (int j = 1; j <= L.J(); ++j) {
        const auto [lo, hi] = L.gamma_window(j);
        if (j < L.J()) EXPECT_EQ(L.Gamma(j, 0.999 * lo), 0.0);
        if (j > 1) EXPECT_EQ(L.Gamma(j, 1.001 * hi), 0.0);
        else EXPECT_TRUE(std::isinf(hi));
    }
}

TEST(Decompose, IdentitiesAndLeakage) {
    for (int dim : {1, 2}) {
        const double lambda = dim == 1 ? 256 : 64;
        const auto lat = make_lattice(dim, lambda, 8.0);
        EXPECT_GE(std::numbers::pi / lat.hn(), 1.25 * 2 * lambda);
        EXPECT_EQ(lat.nn & (lat.nn - 1), 0);
        const auto u = random_band_limited(lat, lambda, 3);
        const CutoffLadder L(lambda, 0.6);
        const auto d = decompose(u, L);
        EXPECT_LE(d.recomposition_defect, 1e-10) << dim;
        for (double v : d.leakage_v) EXPECT_LE(v, 1e-8);
        for (double v : d.leakage_w) EXPECT_LE(v, 1e-8);
        EXPECT_EQ(d.v.size(), static_cast<std::size_t>(L.J() + 1));
    }
}

TEST(Decompose, PiecesMatchNaiveMultipliers) {
    const double lambda = 32;
    const auto lat = make_lattice(1, lambda, 8.0);
    const auto u = random_band_limited(lat, lambda, 11);
    const CutoffLadder L(lambda, 0.6);
    const auto d = decompose(u, L);
    const double un = l2_norm(u);
    auto diff = [&](const std::vector<cd>& a, const Field& b) {
        double s = 0.0;
        for (std::size_t k = 0; k < a.size(); ++k) s += std::norm(a[k] - b.v[k]);
        return std::sqrt(s * lat.hn()) / un;
    };
    for (int j = 1; j < L.J(); ++j) {
        const auto v = apply(u, [&](double x) { return L.psi(j, x); }, [&](double xi) { return L.Phi(j, xi); });
        EXPECT_LT(diff(v, d.v[j]), 1e-12) << j;
        const auto w = apply(u, [&](double x) { return L.chi(j, x); }, [&](double xi) { return L.Gamma(j, xi); });
        EXPECT_LT(diff(w, d.w[j]), 1e-12) << j;
    }
    const auto vJ = apply(u, [&](double x) { return L.chi(L.J(), x); }, [&](double xi) { return L.Gamma(L.J(), xi); });
    EXPECT_LT(diff(vJ, d.v[L.J()]), 1e-12);
}

TEST(Decompose, RejectsUnderResolvedLattice) {
    auto lat = make_lattice(1, 64, 8.0);
    const auto u = random_band_limited(lat, 64, 1);
    EXPECT_THROW(decompose(u, CutoffLadder(256, 0.6)), AliasingError);
}

TEST(Truncation, ConstantsUniformAcrossCutoffs) {
    const CoeffModel m;
    std::vector<TruncationReport> r;
    for (int e = 4; e <= 10; ++e) r.push_back(truncate_coeff(m, std::exp2(e)));
    auto spread = [&](auto get) {
        double lo = 1e300, hi = 0.0;
        for (const auto& t : r) {
            lo = std::min(lo, get(t));
            hi = std::max(hi, get(t));
        }
        return hi / lo;
    };
    EXPECT_LE(spread([](const auto& t) { return t.c_diff; }), 10.0);
    EXPECT_LE(spread([](const auto& t) { return t.c_d1; }), 10.0);
    EXPECT_LE(spread([](const auto& t) { return t.c_d2; }), 10.0);
    EXPECT_LE(spread([](const auto& t) { return t.c_wdiff; }), 10.0);
    EXPECT_LE(spread([](const auto& t) { return t.c_wd1; }), 10.0);
    EXPECT_LE(spread([](const auto& t) { return t.c_wd2; }), 10.0);

    CoeffModel flat;
    flat.c0 = 0.0;
    const auto z = truncate_coeff(flat, 64);
    EXPECT_EQ(z.sup_diff, 0.0);
    EXPECT_EQ(z.c_diff, 0.0);
    CoeffModel small;
    small.n = 256;
    EXPECT_THROW(truncate_coeff(small, 64), AliasingError);
    EXPECT_NEAR(m.g(0.0), 1.0, 1e-15);
    EXPECT_NEAR(m.g(std::numbers::pi), 1.05, 1e-15);
}

TEST(Truncation, EvenAndOddExtension) {
    const std::vector<double> f{0.0, 1.0, 4.0};
    const auto e = even_extend(f, 0.5, Parity::Even);
    EXPECT_DOUBLE_EQ(e.x0, -1.0);
    EXPECT_EQ(e.v, (std::vector<double>{4, 1, 0, 1, 4}));
    const auto o = even_extend(f, 0.5, Parity::Odd);
    EXPECT_EQ(o.v, (std::vector<double>{-4, -1, 0, 1, 4}));
    EXPECT_THROW(even_extend({1.0, 2.0}, 0.5, Parity::Odd), ParityError);
    EXPECT_THROW(even_extend({}, 0.5, Parity::Even), std::invalid_argument);
}

TEST(Exponents, HandDerivedTable) {
    EXPECT_EQ(exponent_book(3, 4, 4, 0.6).sigma, 0.25);
    EXPECT_EQ(exponent_book(3, P_INF, 4, 0.6).sigma, 0.25);
    const auto c1 = exponent_book(3, 4, 3, 0.6), c2 = exponent_book(3, 8, 2.4, 0.6);
    EXPECT_EQ(c1.cls, PairClass::Critical);
    EXPECT_EQ(c1.sigma, 0.0);
    EXPECT_EQ(c2.cls, PairClass::Critical);
    EXPECT_EQ(c2.sigma, 0.0);
    EXPECT_EQ(exponent_book(3, 3, 2.5, 0.6).cls, PairClass::Inadmissible);
    EXPECT_LT(exponent_book(3, 3, 2.5, 0.6).sigma, 0.0);
    EXPECT_NEAR(exponent_book(3, 4, 4, 0.6).delta, 0.1, 1e-15);
    EXPECT_EQ(to_string(PairClass::Subcritical), "subcritical");
    EXPECT_THROW(exponent_book(3, 2, 4, 0.6), std::domain_error);
    EXPECT_THROW(exponent_book(3, 4, 4, 0.7), std::domain_error);
}

TEST(Exponents, ClassificationMatchesDefiningInequality) {
    int mismatches = 0;
    for (int a = 0; a < 10; ++a)
        for (int b = 0; b < 10; ++b) {
            const double inv_p = 0.05 * a;  // 1/p in [0, 0.45]
            const double p = a == 0 ? P_INF : 1.0 / inv_p;
            const double q = 2.0 + 10.0 * b / 9.0;
            const double lhs = 2.0 * inv_p + 3.0 / q;
            const PairClass want = std::fabs(lhs - 1.5) <= 1e-12 ? PairClass::Critical
                                   : lhs < 1.5                 ? PairClass::Subcritical
                                                               : PairClass::Inadmissible;
            const auto bk = exponent_book(3, p, q, 0.6);
            mismatches += bk.cls != want;
            EXPECT_EQ(bk.sigma > 0.0, want == PairClass::Subcritical);
        }
    EXPECT_EQ(mismatches, 0);
}

TEST(Exponents, ThetaCalculus) {
    for (double lambda : {64.0, 1024.0, 5000.0}) {
        const auto c = theta_calculus_check(lambda, 0.6);
        EXPECT_TRUE(c.ok);
        EXPECT_GE(c.min_margin, 1.0);
        EXPECT_EQ(c.margins.size(), static_cast<std::size_t>(glancing::verify::j_alpha(lambda, 0.6) + 1));
    }
    EXPECT_EQ(theta_calculus_check(1024, 0.6).min_margin, 1.0);
    EXPECT_DOUBLE_EQ(theta(4), 0.25);
}
