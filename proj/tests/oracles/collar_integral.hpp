#pragma once
// (1/nu) int_{A_j} ds / |(lambda s / nu)^2 - 1|^{1/2} by Gauss-Kronrod after
// s = s* -+ u^2 around s* = nu / lambda, which removes the inverse square root.
#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace oracle {

inline double collar_integral(double lambda, double nu, double a_lo, double a_hi) {
    using boost::math::quadrature::gauss_kronrod;
    auto gk = [](auto f, double a, double b) { return gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-15); };
    const double sing = nu / lambda;
    // ds / |z^2 - 1|^{1/2} = 2 du (nu / lambda)^{1/2} / |z + 1|^{1/2}
    auto left = [&](double u) { return 2.0 / (nu * std::sqrt(lambda / nu) * std::sqrt(1.0 + lambda * (sing - u * u) / nu)); };
    auto right = [&](double u) { return 2.0 / (nu * std::sqrt(lambda / nu) * std::sqrt(1.0 + lambda * (sing + u * u) / nu)); };
    double v = 0.0;
    if (sing > a_lo) v += gk(left, std::sqrt(std::max(0.0, sing - std::min(sing, a_hi))), std::sqrt(sing - a_lo));
    if (sing < a_hi) v += gk(right, std::sqrt(std::max(0.0, a_lo - sing)), std::sqrt(a_hi - sing));
    return v;
}

}  // namespace oracle
