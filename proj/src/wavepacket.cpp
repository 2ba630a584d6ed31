// Window and the lattice wave-packet transform on a torus.
//
// f has period P and Fourier coefficients a_k at eta_k = 2 pi k / P.  Then
//   T f(x, xi) = mu^{-n/4} sum_k a_k ghat((xi - eta_k) / mu^{1/2}) e^{i eta_k x},
// which is the windowed integral with the z-integral done exactly.  The xi
// lattice is the dual lattice 2 pi m / P, so only m within the window radius
// of the spectrum of f carry values.  For fixed m the x dependence is a short
// trigonometric sum, evaluated separably on the x lattice.
#include "glancing/wavepacket.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "detail/fft.hpp"
#include "detail/wp_coef.hpp"
#include "glancing/parallel.hpp"
#include "glancing/rng.hpp"

namespace glancing::wavepacket {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
using Mat = Eigen::Matrix<cd, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double bump(double u2) { return u2 < 1.0 ? std::exp(-1.0 / (1.0 - u2)) : 0.0; }

int sgn_pow(long k) { return (k & 1) ? -1 : 1; }

long wrap(long k, long n) {
    long r = k % n;
    return r < 0 ? r + n : r;
}

std::size_t ipow(int b, int n) { return n == 1 ? static_cast<std::size_t>(b) : static_cast<std::size_t>(b) * b; }

// Fourier coefficients a_k, k in [-N/2, N/2)^n, stored at the FFT bin of k.
std::vector<cd> coefficients(const SpatialField& f) {
    std::vector<cd> a = f.v;
    if (f.n == 1)
        fft::one_d(a, -1);
    else
        fft::two_d(a, f.N, f.N, -1);
    const double s = 1.0 / static_cast<double>(ipow(f.N, f.n));
    for (int i = 0; i < (f.n == 1 ? 1 : f.N); ++i)
        for (int j = 0; j < f.N; ++j) {
            const long ki = f.n == 1 ? 0 : (i < f.N / 2 ? i : i - f.N);
            const long kj = j < f.N / 2 ? j : j - f.N;
            a[static_cast<std::size_t>(i) * f.N + j] *= s * sgn_pow(ki + kj);
        }
    return a;
}

void check_band(const SpatialField& f, const std::vector<cd>& a) {
    double tot = 0.0, hi = 0.0;
    const int lim = 3 * f.N / 8;
    for (int i = 0; i < (f.n == 1 ? 1 : f.N); ++i)
        for (int j = 0; j < f.N; ++j) {
            const long ki = f.n == 1 ? 0 : (i < f.N / 2 ? i : i - f.N);
            const long kj = j < f.N / 2 ? j : j - f.N;
            const double e = std::norm(a[static_cast<std::size_t>(i) * f.N + j]);
            tot += e;
            if (std::labs(ki) > lim || std::labs(kj) > lim) hi += e;
        }
    if (hi > 1e-20 * tot) throw AliasingError("input is not band-limited below 3/8 of the sampling Nyquist");
}

struct Roots {
    int nx;
    std::vector<cd> r;
    explicit Roots(int n) : nx(n), r(n) {
        for (int l = 0; l < n; ++l) r[l] = std::polar(1.0, kTwoPi * l / n);
    }
    // e^{i eta_k x_j} on the lattice x_j = -P/2 + j P / nx
    cd e(long k, int j) const { return static_cast<double>(sgn_pow(k)) * r[wrap(wrap(k, nx) * j, nx)]; }
    // out[j] += c e(k, j) for all j
    void add(cd c, long k, cd* out) const {
        c *= static_cast<double>(sgn_pow(k));
        const long step = wrap(k, nx);
        long idx = 0;
        for (int j = 0; j < nx; ++j) {
            out[j] += c * r[idx];
            idx += step;
            if (idx >= nx) idx -= nx;
        }
    }
    // sum_j in[j] conj(e(k, j))
    cd dot(const cd* in, long k) const {
        const long step = wrap(k, nx);
        long idx = 0;
        double re = 0.0, im = 0.0;
        for (int j = 0; j < nx; ++j) {
            const cd& z = r[idx];
            re += in[j].real() * z.real() + in[j].imag() * z.imag();
            im += in[j].imag() * z.real() - in[j].real() * z.imag();
            idx += step;
            if (idx >= nx) idx -= nx;
        }
        return static_cast<double>(sgn_pow(k)) * cd(re, im);
    }
};

void check_xi_step(const Window& w, double period, double mu) {
    if (!(mu >= 16.0)) throw std::invalid_argument("wave-packet transform needs mu >= 16");
    const double dxi = kTwoPi / period;
    if (dxi > w.delta0 * std::sqrt(mu) / 4.0 * (1.0 + 1e-12))
        throw ResolutionError("xi step 2 pi / period exceeds delta0 mu^{1/2} / 4; enlarge the period");
}

}  // namespace

std::vector<cd> detail::fourier_coefficients(const SpatialField& f) { return coefficients(f); }

// ---------------------------------------------------------------- window

double Window::ghat_radial(double r) const { return c * bump((r / delta0) * (r / delta0)); }

double Window::l2_norm() const {
    double s = 0.0;
    for (double v : g) s += v * v;
    return std::sqrt(s * std::pow(h, n));
}

Window make_window(int n, double delta0) {
    if (n != 1 && n != 2) throw std::invalid_argument("make_window: n must be 1 or 2");
    if (!(delta0 > 0.0 && delta0 <= 0.25)) throw std::invalid_argument("make_window: delta0 must lie in (0, 1/4]");
    Window w;
    w.n = n;
    w.delta0 = delta0;
    boost::math::quadrature::tanh_sinh<double> ts;
    const double I = n == 1 ? 2.0 * delta0 * ts.integrate([](double u) { return bump(u * u) * bump(u * u); }, 0.0, 1.0)
                            : kTwoPi * delta0 * delta0 *
                                  ts.integrate([](double u) { return bump(u * u) * bump(u * u) * u; }, 0.0, 1.0);
    w.c = 1.0 / std::sqrt(I);
    // 8 points per wavelength 2 pi / delta0; radius N h / 2 = N pi / (8 delta0)
    w.N = n == 1 ? 8192 : 1024;
    w.h = std::numbers::pi / (4.0 * delta0);
    w.dxi = kTwoPi / (w.N * w.h);
    const int N = w.N;
    const int rows = n == 1 ? 1 : N;
    std::vector<cd> a(ipow(N, n));
    w.ghat.assign(a.size(), 0.0);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < N; ++j) {
            const double xi1 = n == 1 ? 0.0 : (i - N / 2) * w.dxi;
            const double xi2 = (j - N / 2) * w.dxi;
            const double gh = w.ghat_radial(std::hypot(xi1, xi2));
            w.ghat[static_cast<std::size_t>(i) * N + j] = gh;
            a[static_cast<std::size_t>(i) * N + j] = gh * sgn_pow((n == 1 ? 0 : i) + j);
        }
    if (n == 1)
        fft::one_d(a, +1);
    else
        fft::two_d(a, N, N, +1);
    const double s = std::pow(w.dxi / kTwoPi, n);
    w.g.resize(a.size());
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < N; ++j) {
            const std::size_t id = static_cast<std::size_t>(i) * N + j;
            w.g[id] = s * sgn_pow((n == 1 ? 0 : i) + j) * a[id].real();
        }
    const double target = std::pow(kTwoPi, -0.5 * n);
    if (std::fabs(w.l2_norm() / target - 1.0) > 1e-10) throw ResolutionError("window lattice too coarse for the L2 normalization");
    return w;
}

// ---------------------------------------------------------------- fields

double SpatialField::l2_norm() const {
    double s = 0.0;
    for (const cd& z : v) s += std::norm(z);
    return std::sqrt(s * std::pow(period / N, n));
}

double PhaseSpaceField::dxi() const { return kTwoPi / period; }

std::size_t PhaseSpaceField::cells() const { return ipow(nx, n); }

double PhaseSpaceField::l2_norm() const {
    double s = 0.0;
    for (const cd& z : v) s += std::norm(z);
    return std::sqrt(s * std::pow(hx() * dxi(), n));
}

cd field_dot(const PhaseSpaceField& F, const PhaseSpaceField& G) {
    if (F.n != G.n || F.nx != G.nx || F.period != G.period || F.m != G.m) throw std::invalid_argument("field_dot: lattices differ");
    cd s = 0.0;
    for (std::size_t i = 0; i < F.v.size(); ++i) s += F.v[i] * std::conj(G.v[i]);
    return s * std::pow(F.hx() * F.dxi(), F.n);
}

double torus_period(const Window& w, double mu, int xi_per_radius) {
    return kTwoPi * xi_per_radius / (w.delta0 * std::sqrt(mu));
}

int x_points(double period, double mu) {
    const double need = 4.0 * period * std::sqrt(mu) * (1.0 - 1e-12);
    for (int N = 1;; ++N) {
        if (N < need) continue;
        int r = N;
        for (int p : {2, 3, 5})
            while (r % p == 0) r /= p;
        if (r == 1) return N;
    }
}

SpatialField random_band_limited(int n, double period, int N, const Vec& center, double radius, std::uint64_t seed) {
    if (n != 1 && n != 2) throw std::invalid_argument("random_band_limited: n must be 1 or 2");
    SpatialField f{n, period, N, std::vector<cd>(ipow(N, n))};
    CounterRng rng(seed, 0x7770);
    const double dk = kTwoPi / period;
    const int lim = 3 * N / 8;
    const int rows = n == 1 ? 1 : N;
    std::vector<cd> a(f.v.size());
    bool any = false;
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < N; ++j) {
            const long ki = n == 1 ? 0 : (i < N / 2 ? i : i - N);
            const long kj = j < N / 2 ? j : j - N;
            const double d = n == 1 ? std::fabs(kj * dk - center[0]) : std::hypot(ki * dk - center[0], kj * dk - center[1]);
            if (d > radius) continue;
            if (std::labs(ki) > lim || std::labs(kj) > lim) throw std::invalid_argument("random_band_limited: ball exceeds the sampling band");
            a[static_cast<std::size_t>(i) * N + j] = cd(rng.normal(), rng.normal()) * static_cast<double>(sgn_pow(ki + kj));
            any = true;
        }
    if (!any) throw std::invalid_argument("random_band_limited: no lattice frequency inside the ball");
    if (n == 1)
        fft::one_d(a, +1);
    else
        fft::two_d(a, N, N, +1);
    f.v = std::move(a);
    const double s = 1.0 / f.l2_norm();
    for (auto& z : f.v) z *= s;
    return f;
}

// ---------------------------------------------------------------- transform

namespace {

// Stencil of lattice offsets d with |d| dxi < delta0 mu^{1/2}.
std::vector<std::array<int, 2>> window_stencil(int n, double R) {
    std::vector<std::array<int, 2>> s;
    const int r = static_cast<int>(std::ceil(R));
    for (int a = (n == 1 ? 0 : -r); a <= (n == 1 ? 0 : r); ++a)
        for (int b = -r; b <= r; ++b)
            if (std::hypot(a, b) < R) s.push_back({a, b});
    return s;
}

}  // namespace

PhaseSpaceField wp_transform(const Window& w, const SpatialField& f, double mu, const TransformOptions& opt) {
    if (f.n != w.n) throw std::invalid_argument("wp_transform: dimension mismatch");
    if (opt.xi_per_radius < 4) throw std::invalid_argument("wp_transform: xi_per_radius must be >= 4");
    check_xi_step(w, f.period, mu);
    const int n = f.n, N = f.N;
    std::vector<cd> a = coefficients(f);
    check_band(f, a);

    const double dxi = kTwoPi / f.period, sm = std::sqrt(mu);
    const double R = w.delta0 * sm / dxi;
    const auto stencil = window_stencil(n, R);
    const int r = static_cast<int>(std::ceil(R));

    // support of f in k, as a dense box
    double amax = 0.0;
    for (const cd& z : a) amax = std::max(amax, std::abs(z));
    const int rows = n == 1 ? 1 : N;
    auto kof = [&](int i) { return i < N / 2 ? i : i - N; };
    std::vector<char> live(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) live[i] = amax > 0.0 && std::abs(a[i]) > 1e-14 * amax;

    // m set: the live k dilated by the stencil, on a box of side N + 2r
    const int side = N + 2 * r + 1, off = N / 2 + r;
    std::vector<char> mask(ipow(side, n), 0);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < N; ++j) {
            if (!live[static_cast<std::size_t>(i) * N + j]) continue;
            const int ki = n == 1 ? 0 : kof(i), kj = kof(j);
            for (const auto& d : stencil) {
                const int mi = n == 1 ? 0 : ki + d[0] + off, mj = kj + d[1] + off;
                mask[static_cast<std::size_t>(mi) * side + mj] = 1;
            }
        }
    PhaseSpaceField F;
    F.n = n;
    F.mu = mu;
    F.period = f.period;
    F.nx = x_points(f.period, mu);
    for (int i = 0; i < (n == 1 ? 1 : side); ++i)
        for (int j = 0; j < side; ++j)
            if (mask[static_cast<std::size_t>(i) * side + j]) F.m.push_back({n == 1 ? 0 : i - off, j - off});
    const std::size_t cells = F.cells();
    F.v.assign(F.m.size() * cells, 0.0);

    const int nx = F.nx;
    const Roots roots(nx);
    const double pre = std::pow(mu, -0.25 * n);
    auto coef = [&](long ki, long kj) -> cd {
        if (std::labs(kj) >= N / 2 || std::labs(ki) >= N / 2) return 0.0;
        return a[static_cast<std::size_t>(wrap(ki, N)) * (n == 1 ? 0 : N) + wrap(kj, N)];
    };

    parallel_for(F.m.size(), opt.threads, [&](std::size_t im) {
        const auto m = F.m[im];
        cd* out = F.v.data() + im * cells;
        if (n == 1) {
            std::vector<std::pair<long, cd>> terms;
            for (const auto& d : stencil) {
                const long k = m[1] - d[1];
                const cd ak = coef(0, k);
                if (ak == 0.0) continue;
                terms.push_back({k, pre * ak * w.ghat_radial(std::fabs(d[1]) * dxi / sm)});
            }
            for (const auto& [k, c] : terms) roots.add(c, k, out);
            return;
        }
        // n = 2: rows k1 = m1 - d1; out = E U with E[j1][d1] = e(k1, j1) and
        // U[d1][j2] the inner sums over k2
        const int rr = 2 * r + 1;
        Mat U = Mat::Zero(rr, nx), E = Mat::Zero(nx, rr);
        for (const auto& d : stencil) {
            const long k1 = m[0] - d[0], k2 = m[1] - d[1];
            const cd ak = coef(k1, k2);
            if (ak == 0.0) continue;
            const cd c = pre * ak * w.ghat_radial(std::hypot(d[0], d[1]) * dxi / sm);
            roots.add(c, k2, U.data() + static_cast<std::size_t>(d[0] + r) * nx);
        }
        for (int d1 = -r; d1 <= r; ++d1) {
            std::vector<cd> e1(nx, 0.0);
            roots.add(1.0, m[0] - d1, e1.data());
            for (int j1 = 0; j1 < nx; ++j1) E(j1, d1 + r) = e1[j1];
        }
        Eigen::Map<Mat>(out, nx, nx).noalias() = E * U;
    });
    return F;
}

SpatialField wp_adjoint(const Window& w, const PhaseSpaceField& F, int n_out, const TransformOptions& opt) {
    if (F.n != w.n) throw std::invalid_argument("wp_adjoint: dimension mismatch");
    check_xi_step(w, F.period, F.mu);
    if (n_out < 4 || n_out % 2) throw std::invalid_argument("wp_adjoint: n_out must be even and >= 4");
    const int n = F.n, nx = F.nx;
    const double dxi = F.dxi(), sm = std::sqrt(F.mu);
    const double R = w.delta0 * sm / dxi;
    const auto stencil = window_stencil(n, R);
    const int r = static_cast<int>(std::ceil(R));
    const Roots roots(nx);
    const std::size_t cells = F.cells();
    const double pre = std::pow(F.mu, -0.25 * n) * std::pow(dxi / nx, n);

    // per m: contributions to coefficient k = m - d, in stencil order
    std::vector<std::vector<cd>> part(F.m.size());
    parallel_for(F.m.size(), opt.threads, [&](std::size_t im) {
        const auto m = F.m[im];
        const cd* in = F.v.data() + im * cells;
        auto& out = part[im];
        out.assign(stencil.size(), 0.0);
        if (n == 1) {
            for (std::size_t s = 0; s < stencil.size(); ++s) {
                const long k = m[1] - stencil[s][1];
                out[s] = pre * w.ghat_radial(std::fabs(stencil[s][1]) * dxi / sm) * roots.dot(in, k);
            }
            return;
        }
        // W = E^H in, E[j1][d1] = e(k1, j1)
        const int rr = 2 * r + 1;
        Mat E(nx, rr);
        for (int d1 = -r; d1 <= r; ++d1) {
            std::vector<cd> e1(nx, 0.0);
            roots.add(1.0, m[0] - d1, e1.data());
            for (int j1 = 0; j1 < nx; ++j1) E(j1, d1 + r) = e1[j1];
        }
        const Mat W = E.adjoint() * Eigen::Map<const Mat>(in, nx, nx);
        for (std::size_t s = 0; s < stencil.size(); ++s) {
            const long k2 = m[1] - stencil[s][1];
            out[s] = pre * w.ghat_radial(std::hypot(stencil[s][0], stencil[s][1]) * dxi / sm) *
                     roots.dot(W.data() + static_cast<std::size_t>(stencil[s][0] + r) * nx, k2);
        }
    });

    SpatialField u{n, F.period, n_out, std::vector<cd>(ipow(n_out, n), 0.0)};
    double inside = 0.0, outside = 0.0;
    for (std::size_t im = 0; im < F.m.size(); ++im)
        for (std::size_t s = 0; s < stencil.size(); ++s) {
            const long ki = n == 1 ? 0 : F.m[im][0] - stencil[s][0];
            const long kj = F.m[im][1] - stencil[s][1];
            const cd b = part[im][s];
            if (std::labs(ki) >= n_out / 2 || std::labs(kj) >= n_out / 2) {
                outside = std::max(outside, std::abs(b));
                continue;
            }
            inside = std::max(inside, std::abs(b));
            u.v[static_cast<std::size_t>(wrap(ki, n_out)) * (n == 1 ? 0 : n_out) + wrap(kj, n_out)] +=
                b * static_cast<double>(sgn_pow(ki + kj));
        }
    if (outside > 1e-12 * inside) throw AliasingError("wp_adjoint: output lattice does not resolve the field's frequencies");
    if (n == 1)
        fft::one_d(u.v, +1);
    else
        fft::two_d(u.v, n_out, n_out, +1);
    return u;
}

}  // namespace glancing::wavepacket
