#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <gtest/gtest.h>

#include "glancing/specfun.hpp"
#include "oracles/bessel_series.hpp"

using namespace glancing::specfun;

namespace {

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

// d/dx J_nu = (J_{nu-1} - J_{nu+1}) / 2
double oracle_jp(double nu, double x) {
    return 0.5 * (oracle::bessel_j(nu - 1.0, x) - oracle::bessel_j(nu + 1.0, x));
}

}  // namespace

TEST(Specfun, SeriesPathMatchesHighPrecisionSeries) {
    for (double nu : {0.0, 0.5, 1.0, 2.5, 7.0, 20.0})
        for (double x : {0.1, 0.7, 2.0, 9.5, 25.0}) {
            const auto p = eval_bessel_pair(nu, x, Method::Series);
            const double j = oracle::bessel_j(nu, x), y = oracle::bessel_y(nu, x);
            const double scale = std::hypot(j, y);
            EXPECT_LT(std::fabs(p.j - j) / scale, 1e-12) << nu << ' ' << x;
            EXPECT_LT(std::fabs(p.y - y) / scale, 1e-12) << nu << ' ' << x;
            if (nu >= 1.0) {
                const double jp = oracle_jp(nu, x);
                const double yp = 0.5 * (oracle::bessel_y(nu - 1, x) - oracle::bessel_y(nu + 1, x));
                EXPECT_LT(std::fabs(p.jp - jp) / std::hypot(jp, yp), 1e-11) << nu << ' ' << x;
                EXPECT_LT(std::fabs(p.yp - yp) / std::hypot(jp, yp), 1e-11) << nu << ' ' << x;
            }
        }
}

TEST(Specfun, UniformCrossCheckAtOrderTen) {
    const auto u = eval_bessel_pair(10.0, 12.0, Method::Uniform);
    const auto s = eval_bessel_pair(10.0, 12.0, Method::Series);
    const double j = oracle::bessel_j(10, 12), y = oracle::bessel_y(10, 12);
    EXPECT_LT(rel(s.j, j), 1e-12);
    EXPECT_LT(rel(s.y, y), 1e-12);
    EXPECT_LT(std::fabs(u.j - j) / std::hypot(j, y), 1e-6);
    EXPECT_LT(std::fabs(u.y - y) / std::hypot(j, y), 1e-6);
}

TEST(Specfun, UniformPathAgainstSeriesOracleLargeOrder) {
    // J_30(15) is about 1e-5, so the oracle's 100 digits matter only mildly;
    // z = 0.5 is well inside the exponential region.
    for (auto [nu, x] : {std::pair{30.0, 15.0}, {50.0, 60.0}, {100.0, 100.0}, {30.0, 75.0}}) {
        const auto u = eval_bessel_pair(nu, x, Method::Uniform);
        const double j = oracle::bessel_j(nu, x), y = oracle::bessel_y(nu, x);
        if (x < nu) {
            EXPECT_LT(rel(u.j, j), 1e-8) << nu << ' ' << x;
            EXPECT_LT(rel(u.y, y), 1e-8) << nu << ' ' << x;
        } else {
            EXPECT_LT(std::fabs(u.j - j) / std::hypot(j, y), 1e-8) << nu << ' ' << x;
            EXPECT_LT(std::fabs(u.y - y) / std::hypot(j, y), 1e-8) << nu << ' ' << x;
        }
    }
}

TEST(Specfun, ScaledValuesKeepDeepExponentialRegime) {
    // J_300(90) ~ 1e-140 and Y_300(90) ~ 1e+137: the mantissas must carry them
    const double nu = 300.0, z = 0.3;
    const auto s = eval_bessel_scaled(nu, z);
    const oracle::mp jm = oracle::bessel_j_series(oracle::mp(nu), oracle::mp(nu * z));
    const double logj = static_cast<double>(log(abs(jm)));
    EXPECT_GT(s.L, 100.0);
    EXPECT_NEAR(std::log(std::fabs(s.mj)) - s.L, logj, 1e-9);
    EXPECT_LT(s.my, 0.0);
    // Wronskian in scaled form: J Y' - J' Y = 2 / (pi x)
    const double w = s.mj * s.myp - s.mjp * s.my;
    EXPECT_LT(rel(w, 2.0 / (std::numbers::pi * nu * z)), 1e-10);
}

TEST(Specfun, OverflowIsReported) {
    EXPECT_THROW(eval_bessel_pair(2000.0, 10.0), OverflowError);
    EXPECT_NO_THROW(eval_bessel_scaled(2000.0, 10.0 / 2000.0));
}

TEST(Specfun, DomainErrors) {
    EXPECT_THROW(eval_bessel_pair(1.0, 0.0), std::domain_error);
    EXPECT_THROW(eval_bessel_pair(-1.0, 1.0), std::domain_error);
    EXPECT_THROW(eval_bessel_pair(5.0, 3.0, Method::Uniform), std::domain_error);
    EXPECT_THROW(turning_map(0.0), std::domain_error);
    EXPECT_THROW(turning_map(Z_MAX), std::domain_error);
    EXPECT_THROW(parse_method("fast"), std::invalid_argument);
    EXPECT_EQ(parse_method("uniform"), Method::Uniform);
}

TEST(Specfun, WronskianOnValidationGrid) {
    double worst = 0.0;
    for (double nu : {0.0, 0.5, 1.0, 3.0, 10.0, 30.0, 50.5, 100.0, 300.0})
        for (int k = 0; k < 40; ++k) {
            const double x = 0.05 * std::pow((2.0 * nu + 40.0) / 0.05, k / 39.0);
            worst = std::max(worst, wronskian_defect(nu, x));
        }
    EXPECT_LT(worst, 1e-8);
}

TEST(Specfun, TurningMapMatchesQuadrature) {
    boost::math::quadrature::tanh_sinh<double> ts;
    for (double z : {0.1, 0.5, 0.9, 0.999, 1.001, 1.3, 3.0, 8.0}) {
        const auto t = turning_map(z);
        double phase;
        if (z < 1.0) {
            phase = ts.integrate([](double s) { return std::sqrt(1.0 - s * s) / s; }, z, 1.0);
            EXPECT_GT(t.zeta, 0.0);
            EXPECT_LT(rel(2.0 / 3.0 * std::pow(t.zeta, 1.5), phase), 1e-10) << z;
        } else {
            phase = ts.integrate([](double s) { return std::sqrt(s * s - 1.0) / s; }, 1.0, z);
            EXPECT_LT(t.zeta, 0.0);
            EXPECT_LT(rel(2.0 / 3.0 * std::pow(-t.zeta, 1.5), phase), 1e-10) << z;
        }
        // (dzeta/dz)^2 zeta = (1 - z^2) / z^2
        EXPECT_LT(std::fabs(t.dzeta * t.dzeta * t.zeta - (1 - z * z) / (z * z)), 1e-10 * (1 + std::fabs(1 - z * z) / (z * z)));
    }
    const auto one = turning_map(1.0);
    EXPECT_NEAR(one.zeta, 0.0, 1e-15);
    EXPECT_NEAR(one.dzeta, -std::cbrt(2.0), 1e-12);
}

TEST(Specfun, AiryAgainstMaclaurin) {
    for (double t : {-5.0, -1.0, 0.0, 0.5, 2.0}) {
        const auto a = eval_airy(t);
        EXPECT_LT(std::fabs(a.ai - oracle::airy_ai(t)), 1e-10 * std::max(1.0, std::fabs(oracle::airy_ai(t)))) << t;
        EXPECT_LT(std::fabs(a.ai * a.bip - a.aip * a.bi - 1.0 / std::numbers::pi), 1e-10) << t;
    }
    EXPECT_LT(rel(eval_airy(2.0).ai, oracle::airy_ai(2.0)), 1e-10);
}

TEST(Specfun, PathsAgreeAwayFromTurningPoint) {
    double worst = 0.0;
    for (double nu : {30.0, 50.0, 100.0})
        for (int k = 0; k < 12; ++k) {
            worst = std::max(worst, path_agreement(nu, 0.2 + 0.7 * k / 11.0));
            worst = std::max(worst, path_agreement(nu, 1.1 + 1.9 * k / 11.0));
        }
    EXPECT_LT(worst, 1e-4);
}

TEST(Specfun, EnvelopeBracketsScaledValues) {
    for (double nu : {30.0, 100.0, 300.0})
        for (double z : {0.3, 0.8, 0.99, 1.0, 1.01, 1.5, 4.0}) {
            const auto e = envelope_bounds(nu, z);
            const auto s = eval_bessel_scaled(nu, z);
            EXPECT_LE(std::fabs(s.mj), e.highJ) << nu << ' ' << z;
            EXPECT_GE(std::fabs(s.mj), e.lowJ) << nu << ' ' << z;
            EXPECT_LE(std::fabs(s.my), e.highY) << nu << ' ' << z;
            EXPECT_GE(std::fabs(s.my), e.lowY) << nu << ' ' << z;
            if (s.L == 0.0) {
                const double h = std::hypot(s.mj, s.my);
                EXPECT_LE(h, e.highH);
                EXPECT_GE(h, e.lowH);
            }
        }
    EXPECT_THROW(envelope_bounds(10.0, 0.5), std::domain_error);
}

TEST(Specfun, ChebyshevCoefficientsMatchClosedFormAwayFromOne) {
    for (double z : {0.55, 0.7, 1.35, 1.55}) {
        double A[4], B[4], C[4], D[4], a[4], b[4], c[4], d[4];
        detail::uniform_coeffs(z, A, B, C, D);
        detail::uniform_coeffs_direct(z, a, b, c, d);
        for (int k = 0; k < 4; ++k) {
            EXPECT_NEAR(A[k], a[k], 1e-8 * (1 + std::fabs(a[k]))) << z << ' ' << k;
            EXPECT_NEAR(B[k], b[k], 1e-8 * (1 + std::fabs(b[k]))) << z << ' ' << k;
            EXPECT_NEAR(C[k], c[k], 1e-8 * (1 + std::fabs(c[k]))) << z << ' ' << k;
            EXPECT_NEAR(D[k], d[k], 1e-8 * (1 + std::fabs(d[k]))) << z << ' ' << k;
        }
    }
}
