#pragma once
// High-precision power series for J_nu and Y_nu (test-only oracle).
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace oracle {

using mp = boost::multiprecision::cpp_bin_float_100;

// sum_k (-1)^k (x/2)^{2k+nu} / (k! Gamma(k+nu+1)); nu must not be a negative integer
inline mp bessel_j_series(const mp& nu, const mp& x) {
    const mp h = x / 2, h2 = h * h;
    mp term = boost::multiprecision::pow(h, nu) / boost::math::tgamma(nu + 1);
    mp sum = term;
    for (int k = 1; k < 2000; ++k) {
        term *= -h2 / (mp(k) * (nu + k));
        sum += term;
        if (abs(term) < abs(sum) * mp("1e-90") && k > 2 * static_cast<double>(h)) break;
    }
    return sum;
}

// Y_nu = (J_nu cos(nu pi) - J_{-nu}) / sin(nu pi); integer orders through a tiny
// offset, whose O(eps) error sits far below double precision
inline mp bessel_y_series(const mp& nu0, const mp& x) {
    mp nu = nu0;
    const mp pi = boost::math::constants::pi<mp>();
    if (abs(nu - round(nu)) < mp("1e-30")) nu += mp("1e-40");
    return (bessel_j_series(nu, x) * cos(nu * pi) - bessel_j_series(-nu, x)) / sin(nu * pi);
}

inline double bessel_j(double nu, double x) { return static_cast<double>(bessel_j_series(mp(nu), mp(x))); }
inline double bessel_y(double nu, double x) { return static_cast<double>(bessel_y_series(mp(nu), mp(x))); }

// Maclaurin series of Ai: c1 f(t) - c2 g(t)
inline double airy_ai(double t) {
    const mp z = t, z3 = z * z * z;
    const mp c1 = 1 / (boost::multiprecision::pow(mp(3), mp(2) / 3) * boost::math::tgamma(mp(2) / 3));
    const mp c2 = 1 / (boost::multiprecision::pow(mp(3), mp(1) / 3) * boost::math::tgamma(mp(1) / 3));
    mp f = 1, g = z, tf = 1, tg = z;
    for (int k = 1; k < 400; ++k) {
        tf *= z3 / (mp(3 * k - 1) * (3 * k));
        tg *= z3 / (mp(3 * k) * (3 * k + 1));
        f += tf;
        g += tg;
        if (abs(tf) + abs(tg) < mp("1e-80")) break;
    }
    return static_cast<double>(c1 * f - c2 * g);
}

}  // namespace oracle
