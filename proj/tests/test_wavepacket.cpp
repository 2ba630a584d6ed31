#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "glancing/rng.hpp"
#include "glancing/wavepacket.hpp"
#include "oracles/packet_oracles.hpp"

using namespace glancing::wavepacket;

namespace {

SpatialField sample(int N, double P, const oracle::Gaussian1d& g) {
    SpatialField f;
    f.n = 1;
    f.period = P;
    f.N = N;
    f.v.resize(N);
    for (int k = 0; k < N; ++k) f.v[k] = g(f.x(k));
    return f;
}

bool smooth_size(int N) {
    for (int p : {2, 3, 5})
        while (N % p == 0) N /= p;
    return N == 1;
}

}  // namespace

TEST(Window, NormalizationAndSupport) {
    for (int n : {1, 2})
        for (double d : {0.125, 0.25}) {
            const auto w = make_window(n, d);
            EXPECT_NEAR(w.c, oracle::bump_constant(n, d), 1e-10 * w.c) << n << ' ' << d;
            EXPECT_NEAR(w.l2_norm(), std::pow(2.0 * std::numbers::pi, -0.5 * n), 1e-10);
            EXPECT_EQ(w.ghat_radial(d), 0.0);
            EXPECT_EQ(w.ghat_radial(1.01 * d), 0.0);
            EXPECT_NEAR(w.ghat_radial(0.0), w.c * std::exp(-1.0), 1e-15);
        }
    EXPECT_THROW(make_window(3), std::invalid_argument);
    EXPECT_THROW(make_window(1, 0.3), std::invalid_argument);
}

TEST(Transform, LatticeGeometry) {
    const auto w = make_window(1, 0.125);
    for (double mu : {32.0, 64.0, 128.0}) {
        const double P = torus_period(w, mu, 8);
        EXPECT_NEAR(2.0 * std::numbers::pi / P, 0.125 * std::sqrt(mu) / 8.0, 1e-12);
        const int N = x_points(P, mu);
        EXPECT_TRUE(smooth_size(N)) << N;
        EXPECT_LE(P / N, 0.25 / std::sqrt(mu));
        EXPECT_GT(P / (N - 1), 0.25 / std::sqrt(mu) * 0.8);
    }
}

TEST(Transform, MatchesDirectQuadratureOfGaussianPacket) {
    const double mu = 32.0, d0 = 0.125;
    const auto w = make_window(1, d0);
    TransformOptions opt;
    opt.xi_per_radius = 16;
    const double P = torus_period(w, mu, 16);
    const oracle::Gaussian1d g{3.0, mu, 1.0 / std::sqrt(mu)};
    const auto F = wp_transform(w, sample(16384, P, g), mu, opt);
    double peak = 0.0;
    std::size_t pi = 0;
    int pj = 0;
    for (std::size_t i = 0; i < F.m.size(); ++i)
        for (int j = 0; j < F.nx; ++j)
            if (std::abs(F.v[i * F.nx + j]) > peak) {
                peak = std::abs(F.v[i * F.nx + j]);
                pi = i;
                pj = j;
            }
    // packet sits at (x0, xi0) up to one lattice cell
    EXPECT_LE(std::fabs(F.x(pj) - g.x0), F.hx());
    EXPECT_LE(std::fabs(F.m[pi][1] * F.dxi() - g.xi0), F.dxi());
    double err = 0.0;
    for (int di = -4; di <= 4; ++di)
        for (int dj = -6; dj <= 6; ++dj) {
            const std::size_t i = pi + 3 * di;
            const int j = pj + 4 * dj;
            const cd ref = oracle::direct_transform(g, d0, mu, F.x(j), F.m[i][1] * F.dxi());
            err = std::max(err, std::abs(ref - F.v[i * F.nx + j]) / peak);
        }
    EXPECT_LT(err, 2e-5);
}

TEST(Transform, AdjointPairing) {
    for (int n : {1, 2}) {
        const double mu = 32.0, d0 = n == 1 ? 0.125 : 0.25;
        const int q = n == 1 ? 8 : 5;
        const auto w = make_window(n, d0);
        TransformOptions opt;
        opt.xi_per_radius = q;
        const double P = torus_period(w, mu, q);
        const double rad = n == 1 ? 0.5 * mu : 3 * 2 * std::numbers::pi / P;
        int N = 16;
        while (N * 3 / 8 < (mu + rad) * P / (2 * std::numbers::pi) + 2) N *= 2;
        const auto f = random_band_limited(n, P, N, Vec{mu, 0.0}, rad, 3);
        const auto F = wp_transform(w, f, mu, opt);
        PhaseSpaceField H = F;
        glancing::CounterRng rng(9, 0);
        for (auto& v : H.v) v = cd(rng.normal(), rng.normal()) * std::abs(v);
        const auto g = wp_adjoint(w, H, N, opt);
        const cd lhs = field_dot(F, H);
        cd rhs = 0.0;
        for (std::size_t k = 0; k < f.v.size(); ++k) rhs += f.v[k] * std::conj(g.v[k]);
        rhs *= std::pow(P / N, n);
        EXPECT_LT(std::abs(lhs - rhs) / std::abs(lhs), 1e-10) << n;
    }
}

TEST(Transform, IsometryAndReconstruction) {
    for (std::uint64_t s = 1; s <= 3; ++s) {
        const auto c = transform_check(1, 32, s);
        EXPECT_LT(c.isometry, 1e-3);
        EXPECT_LT(c.reconstruction, 1e-3);
    }
    const auto c = transform_check(2, 32, 1);
    EXPECT_LT(c.isometry, 1e-3);
    EXPECT_LT(c.reconstruction, 1e-3);
}

TEST(Transform, RejectsAliasedInput) {
    const auto w = make_window(1, 0.125);
    const double P = torus_period(w, 32, 8);
    auto f = random_band_limited(1, P, 256, Vec{0.0, 40.0}, 5.0, 1);
    f.v[0] += 1.0;  // a spike has a flat spectrum
    EXPECT_THROW(wp_transform(w, f, 32), AliasingError);
    EXPECT_THROW(wp_transform(w, f, 8), std::invalid_argument);
}

TEST(Symbol, DerivativesMatchFiniteDifferences) {
    const auto s = make_symbol(2, 64, 0.05);
    const Vec x{0.3, 0.02}, xi{50.0, -20.0};
    const double h = 1e-6;
    const Vec gx = s.dq_dx(x, xi), gxi = s.dq_dxi(x, xi);
    for (int d = 0; d < 2; ++d) {
        Vec xp = x, xm = x, ep = xi, em = xi;
        xp[d] += h;
        xm[d] -= h;
        ep[d] += h * 64;
        em[d] -= h * 64;
        EXPECT_NEAR(gx[d], (s.q(xp, xi) - s.q(xm, xi)) / (2 * h), 1e-7 * (1 + std::fabs(gx[d])));
        EXPECT_NEAR(gxi[d], (s.q(x, ep) - s.q(x, em)) / (2 * h * 64), 1e-7 * (1 + std::fabs(gxi[d])));
    }
    std::array<double, 4> qxx, qxxi, qxixi;
    s.hessian(x, xi, qxx, qxxi, qxixi);
    for (int a = 0; a < 2; ++a) {
        Vec xp = x, xm = x;
        xp[a] += h;
        xm[a] -= h;
        for (int b = 0; b < 2; ++b) {
            EXPECT_NEAR(qxx[a * 2 + b], (s.dq_dx(xp, xi)[b] - s.dq_dx(xm, xi)[b]) / (2 * h), 1e-5 * (1 + std::fabs(qxx[a * 2 + b])));
            EXPECT_NEAR(qxxi[a * 2 + b], (s.dq_dxi(xp, xi)[b] - s.dq_dxi(xm, xi)[b]) / (2 * h), 1e-5 * (1 + std::fabs(qxxi[a * 2 + b])));
        }
    }
    EXPECT_DOUBLE_EQ(qxixi[1], 0.0);
    EXPECT_NEAR(qxixi[3], 2.0 / 64, 1e-15);
    const auto f = make_symbol(2, 64, 0.0);
    EXPECT_NEAR(f.q(x, xi), (50.0 * 50 + 20.0 * 20) / 64, 1e-12);
    EXPECT_THROW(make_symbol(2, 64, 0.1), std::invalid_argument);
}

TEST(Flow, FreeFlowIsTranslationWithKnownAction) {
    const double mu = 64;
    const auto s = make_symbol(2, mu, 0.0);
    const Vec x0{0.1, -0.2}, xi0{70.0, 15.0};
    const auto tr = hamiltonian_flow(s, x0, xi0, 0.0, 0.8, 1e-10);
    const auto z = tr.at(0.8);
    for (int d = 0; d < 2; ++d) {
        EXPECT_NEAR(z.x[d], x0[d] + 2 * 0.8 * xi0[d] / mu, 1e-12);
        EXPECT_NEAR(z.xi[d], xi0[d], 1e-10);
    }
    EXPECT_NEAR(tr.jacobian_det(0.8), 1.0, 1e-12);
    // trajectory from (x, xi) at time t back to 0: psi = -t |xi|^2 / mu
    const auto back = hamiltonian_flow(s, x0, xi0, 0.8, 0.0, 1e-10);
    const double psi = action_phase(back, s), psi2 = action_phase(back, s, 2);
    EXPECT_NEAR(psi, -0.8 * (70.0 * 70 + 15.0 * 15) / mu, 1e-9);
    EXPECT_NEAR(psi, psi2, 1e-9);
    EXPECT_THROW(tr.at(1.0), std::out_of_range);
    EXPECT_THROW(hamiltonian_flow(s, x0, xi0, 0, 1, 1e-3), std::invalid_argument);
    EXPECT_THROW(hamiltonian_flow(s, x0, xi0, 0, 1, 1e-10, false).jacobian(0.5), std::logic_error);
}

TEST(Flow, SeededChecksStayInBands) {
    const auto s = make_symbol(2, 64, 0.05);
    for (std::uint64_t k = 0; k < 8; ++k) {
        const auto c = flow_check(s, 1, 0x5100 + k, 1e-10);
        EXPECT_LT(c.energy_drift, 1e-8) << k;
        EXPECT_LT(c.det_defect, 1e-6) << k;
        EXPECT_LT(c.translation, 1e-9) << k;
    }
    // the variational matrix agrees with finite differences of the flow
    const Vec x{0.2, 0.1}, xi{-40.0, 55.0};
    const auto tr = hamiltonian_flow(s, x, xi, 0.0, 1.0, 1e-12);
    const auto J = tr.jacobian(1.0);
    const double h = 1e-5;
    Vec xp = x, xm = x;
    xp[1] += h;
    xm[1] -= h;
    const auto a = flow_map(s, 1.0, 0.0, xp, xi, 1e-12), b = flow_map(s, 1.0, 0.0, xm, xi, 1e-12);
    for (int r = 0; r < 2; ++r) {
        EXPECT_NEAR(J[r * 4 + 1], (a.x[r] - b.x[r]) / (2 * h), 1e-5);
        EXPECT_NEAR(J[(2 + r) * 4 + 1], (a.xi[r] - b.xi[r]) / (2 * h), 1e-4 * 64);
    }
}

TEST(Parametrix, IdentityAtTimeZeroAndFreePropagator) {
    const double mu = 32.0;
    const auto w = make_window(1, 0.125);
    const auto sym = make_symbol(1, mu, 0.0);
    const double P = torus_period(w, mu, 8);
    int N = 16;
    while (N * 3 / 8 < 2 * mu * P / (2 * std::numbers::pi) + 2) N *= 2;
    const auto f = random_band_limited(1, P, N, Vec{0.0, mu}, 0.5 * mu, 3);
    for (double t : {0.0, 1.0}) {
        const auto r = parametrix_evolve(w, f, sym, t);
        const auto exact = oracle::free_propagator(f, mu, t);
        double e = 0.0, n2 = 0.0;
        for (int i = 0; i < N; ++i) {
            e += std::norm(r.u.v[i] - exact[i]);
            n2 += std::norm(exact[i]);
        }
        EXPECT_LT(std::sqrt(e / n2), t == 0.0 ? 1e-3 : 2e-2) << t;
        EXPECT_NEAR(r.norm_ratio, 1.0, 1e-3);
        EXPECT_LT(r.lost_fraction, 1e-6);
        EXPECT_FALSE(r.support_warning);
    }
}

TEST(Kernel, AutocorrelationMatchesHankelTransform) {
    const auto w = make_window(2, 0.125);
    const auto ac = make_autocorrelation(w);
    const oracle::HankelAutocorrelation G(0.125, 400.0, 0.25);
    for (double r : {0.0, 3.0, 17.5, 60.0, 150.0, 390.0})
        EXPECT_NEAR(ac(r), G(r), 1e-9 * G(0.0)) << r;
}

TEST(Kernel, CutoffProfile) {
    const double mu = 64, th = 0.5;
    EXPECT_EQ(upsilon(mu, th, Vec{mu, 0.0}), 1.0);
    EXPECT_EQ(upsilon(mu, th, Vec{2.5 * mu, mu * th}), 1.0);
    EXPECT_EQ(upsilon(mu, th, Vec{0.5 * mu, 0.0}), 0.0);
    EXPECT_EQ(upsilon(mu, th, Vec{mu, 1.2 * mu * th}), 0.0);
    EXPECT_EQ(upsilon(mu, th, Vec{3.2 * mu, 0.0}), 0.0);
    const double v = upsilon(mu, th, Vec{mu, 1.05 * mu * th});
    EXPECT_GT(v, 0.0);
    EXPECT_LT(v, 1.0);
}

TEST(Kernel, MatchesBruteForceQuadratureAtFullAperture) {
    const double mu = 32.0;
    const auto w = make_window(2, 0.125);
    const auto sym = make_symbol(2, mu, 0.0);
    const PacketKernel K(w, sym, 1.0);
    const oracle::HankelAutocorrelation G(0.125, 3000.0, 0.25);
    const double k0 = std::abs(K(0.0, Vec{0, 0}, 0.0, Vec{0, 0}));
    for (double s : {0.05, 0.3})
        for (Vec d : {Vec{0.0, 0.0}, Vec{0.1, 0.05}, Vec{0.4, -0.2}}) {
            const cd k = K(0.2, Vec{0.1, 0.1}, 0.2 + s, Vec{0.1 + d[0], 0.1 + d[1]});
            const cd b = oracle::brute_kernel(G, mu, 1.0, s, d, 0.05);
            EXPECT_LT(std::abs(k - b), 2e-3 * std::abs(b) + 1e-6 * k0) << s << ' ' << d[0];
        }
}

TEST(Kernel, HermitianSymmetryAndGuards) {
    const auto w = make_window(2, 0.125);
    const auto sym = make_symbol(2, 64, 0.0);
    const PacketKernel K(w, sym, 0.5);
    const cd a = K(0.1, Vec{0.0, 0.1}, 0.35, Vec{0.2, 0.05});
    const cd b = K(0.35, Vec{0.2, 0.05}, 0.1, Vec{0.0, 0.1});
    EXPECT_LT(std::abs(a - std::conj(b)), 1e-10 * std::abs(a));
    EXPECT_THROW(K(0.0, Vec{0, 0}, 0.6, Vec{0, 0}), std::invalid_argument);
    EXPECT_THROW(PacketKernel(w, make_symbol(2, 64, 0.05), 0.5), std::invalid_argument);
    EXPECT_THROW(PacketKernel(w, sym, 1.5), std::invalid_argument);
    KernelOptions tiny;
    tiny.budget = 1e3;
    EXPECT_THROW(PacketKernel(w, sym, 0.5, tiny)(0.0, Vec{0, 0}, 0.3, Vec{0.2, 0}), CostError);
}

TEST(Kernel, DecayScanRegimesAndDeterminism) {
    const auto w = make_window(2, 0.125);
    const auto sym = make_symbol(2, 32, 0.0);
    ScanOptions o;
    o.times = 8;
    o.pairs = 1;
    o.seed = 5;
    const auto a = kernel_decay_scan(w, sym, 0.5, o);
    o.threads = 3;
    const auto b = kernel_decay_scan(w, sym, 0.5, o);
    ASSERT_EQ(a.rows.size(), 8u);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        EXPECT_EQ(a.rows[i].sup_k, b.rows[i].sup_k);
        const double dt = a.rows[i].dt;
        const int want = dt <= 1.0 / 32 ? 0 : (dt <= 1.0 / (32 * 0.25) ? 1 : 2);
        EXPECT_EQ(a.rows[i].regime, want) << dt;
        if (i) EXPECT_GT(dt, a.rows[i - 1].dt);
    }
    EXPECT_GT(a.inner_level, 0.0);
}
