#pragma once
// Independent references for the mode Green function: brute-force tensor
// quadrature of the HS norm and an ODE-shooting construction of G.
#include <array>
#include <cmath>
#include <complex>

#include <boost/numeric/odeint.hpp>

#include "glancing/green.hpp"
#include "glancing/quadrature.hpp"

namespace oracle {

using glancing::green::BC;
using glancing::green::ModeProblem;

// ||G||_{L^2(A x A)} with A = [1, a]; the triangle s < r is mapped to a square
// so the kink on the diagonal sits on a panel edge.
inline double dense_hs(const ModeProblem& p, double a, int panels) {
    const glancing::green::GreenKernel K(p);
    const auto& gl = glancing::quad::gauss_legendre(16);
    const double hr = (a - 1.0) / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i)
        for (int k = 0; k < 16; ++k) {
            const double r = 1.0 + hr * (i + 0.5 * (gl.x[k] + 1.0)), wr = 0.5 * hr * gl.w[k];
            for (int i2 = 0; i2 < panels; ++i2)
                for (int k2 = 0; k2 < 16; ++k2) {
                    const double t = (i2 + 0.5 * (gl.x[k2] + 1.0)) / panels, wt = 0.5 * gl.w[k2] / panels;
                    const double s = 1.0 + (r - 1.0) * t;
                    sum += wr * wt * (r - 1.0) * std::norm(K.eval(r, s)) * std::pow(r * s, p.n - 1);
                }
        }
    return std::sqrt(2.0 * sum);
}

// G(r, s) from two shot solutions of
//   -u'' - (n-1)/r u' + (mu_l / r^2 - lambda^2) u = 0,
// one obeying the boundary condition at r = 1 and one started from the
// large-argument Hankel expansion far out.  G = -u1(r<) u2(r>) / (r^{n-1} W).
inline std::complex<double> shoot_green(const ModeProblem& p, double r, double s) {
    using state = std::array<double, 4>;
    using cd = std::complex<double>;
    namespace ode = boost::numeric::odeint;
    const double lam = p.lambda, mul = p.nu * p.nu - 0.25 * (p.n - 2) * (p.n - 2);
    const int n = p.n;
    auto rhs = [&](const state& u, state& du, double x) {
        const double k = lam * lam - mul / (x * x);
        du[0] = u[2];
        du[1] = u[3];
        du[2] = -(n - 1) / x * u[2] - k * u[0];
        du[3] = -(n - 1) / x * u[3] - k * u[1];
    };
    auto stepper = [] { return ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_dopri5<state>()); };
    const double lo = std::min(r, s), hi = std::max(r, s);

    state u1 = p.bc == BC::Neumann ? state{1.0, 0.0, 0.0, 0.0} : state{0.0, 0.0, 1.0, 0.0};
    ode::integrate_adaptive(stepper(), rhs, u1, 1.0, lo, 1e-4);

    // x^{1-n/2} H_nu(lambda x) up to a constant, from the asymptotic series
    const double R = 60.0 + 4.0 * p.nu / lam;
    auto out = [&](double x) {
        const double z = lam * x, m4 = 4.0 * p.nu * p.nu;
        cd sum = 1.0, term = 1.0;
        for (int k = 1; k <= 10; ++k) {
            term *= cd(0.0, 1.0) * (m4 - (2.0 * k - 1) * (2.0 * k - 1)) / (8.0 * k * z);
            sum += term;
        }
        return std::pow(x, 1.0 - 0.5 * n) * sum * std::exp(cd(0.0, z)) / std::sqrt(z);
    };
    const double h = 1e-5;
    const cd fp = (out(R - 2 * h) - 8.0 * out(R - h) + 8.0 * out(R + h) - out(R + 2 * h)) / (12.0 * h);
    const cd f0 = out(R);
    state u2{f0.real(), f0.imag(), fp.real(), fp.imag()};
    ode::integrate_adaptive(stepper(), rhs, u2, R, hi, -1e-4);

    // continue u2 down to lo so both solutions are known at the same point
    state u2lo = u2;
    if (hi > lo) ode::integrate_adaptive(stepper(), rhs, u2lo, hi, lo, -1e-4);
    const cd a1(u1[0], u1[1]), a1p(u1[2], u1[3]);
    const cd a2(u2lo[0], u2lo[1]), a2p(u2lo[2], u2lo[3]);
    const cd W = std::pow(lo, n - 1) * (a1 * a2p - a1p * a2);
    return -a1 * cd(u2[0], u2[1]) / W;
}

}  // namespace oracle
