// Packet kernel K(r, x; t, y) and its dispersive decay scan.
//
// For the free symbol the flow is a translation, so the z integral of the
// two windows collapses to the autocorrelation G = (2 pi)^{-n} F[ghat^2]:
//   K = int Upsilon(zeta) e^{i (zeta.(x - y) + s |zeta|^2 / mu)} G(|w|) dzeta,
//   w = mu^{1/2} (y - x) - 2 s zeta / mu^{1/2},  s = t - r.
// The remaining zeta integral is a tensor Gauss-Legendre rule on the two
// lobes zeta_1 > 0 and zeta_1 < 0 of the cutoff.
#include <algorithm>
#include <cmath>
#include <numbers>

#include "detail/fft.hpp"
#include "glancing/dyadic.hpp"
#include "glancing/parallel.hpp"
#include "glancing/quadrature.hpp"
#include "glancing/rng.hpp"
#include "glancing/wavepacket.hpp"

namespace glancing::wavepacket {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * kPi;

// cutoff geometry in units of mu (radial) and mu theta (normal)
constexpr double kRin = 0.70710678118654752, kRout = 2.8284271247461901;
constexpr double kMargin = 0.1;
constexpr double kRin0 = kRin * (1.0 - kMargin), kRout1 = kRout * (1.0 + kMargin);
constexpr double kN1 = 1.0 + kMargin;

double radial_profile(double r) {  // r in units of mu
    if (r <= kRin0 || r >= kRout1) return 0.0;
    double v = 1.0;
    if (r < kRin) v *= dyadic::smooth_step((r - kRin0) / (kRin - kRin0));
    if (r > kRout) v *= dyadic::smooth_step((kRout1 - r) / (kRout1 - kRout));
    return v;
}

double normal_profile(double a) {  // |zeta_n| in units of mu theta
    if (a >= kN1) return 0.0;
    return a <= 1.0 ? 1.0 : dyadic::smooth_step((kN1 - a) / (kN1 - 1.0));
}

// Breakpoints of [lo, hi] split into zones (end, max panel width) with increasing ends.
std::vector<double> breakpoints(double lo, double hi, const std::vector<std::pair<double, double>>& zones) {
    std::vector<double> b{lo};
    double a = lo;
    for (const auto& [end, width] : zones) {
        const double e = std::min(end, hi);
        if (e <= a) continue;
        const int k = std::max(1, static_cast<int>(std::ceil((e - a) / width)));
        for (int i = 1; i <= k; ++i) b.push_back(a + (e - a) * i / k);
        a = e;
        if (a >= hi) break;
    }
    return b;
}

struct Nodes {
    std::vector<double> x, w;
};

Nodes gl_nodes(const std::vector<double>& bp) {
    const auto& gl = quad::gauss_legendre(16);
    Nodes n;
    for (std::size_t p = 0; p + 1 < bp.size(); ++p) {
        const double c = 0.5 * (bp[p] + bp[p + 1]), h = 0.5 * (bp[p + 1] - bp[p]);
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            n.x.push_back(c + h * gl.x[i]);
            n.w.push_back(h * gl.w[i]);
        }
    }
    return n;
}

}  // namespace

double upsilon(double mu, double theta, const Vec& zeta) {
    return radial_profile(std::hypot(zeta[0], zeta[1]) / mu) * normal_profile(std::fabs(zeta[1]) / (mu * theta));
}

// ---------------------------------------------------------------- autocorrelation

double Autocorrelation::operator()(double w) const {
    w = std::fabs(w);
    if (w >= w_max) return 0.0;
    const double u = w / step;
    const std::size_t i = std::min(static_cast<std::size_t>(u), v.size() - 2);
    const double t = u - static_cast<double>(i);
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * v[i] + (t3 - 2 * t2 + t) * step * dv[i] + (-2 * t3 + 3 * t2) * v[i + 1] +
           (t3 - t2) * step * dv[i + 1];
}

Autocorrelation make_autocorrelation(const Window& win) {
    const int n = win.n;
    const double d0 = win.delta0;
    // P(k) = ghat^2 (n = 1) or its projection onto one axis (n = 2), k in [0, d0]
    const auto& gl = quad::gauss_legendre(16);
    const int panels = 64;
    std::vector<double> kn, pw;
    for (int p = 0; p < panels; ++p) {
        const double a = d0 * p / panels, h = d0 / panels;
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            const double k = a + 0.5 * h * (gl.x[i] + 1.0);
            double P;
            if (n == 1) {
                P = std::pow(win.ghat_radial(k), 2);
            } else {
                const double L = std::sqrt(std::max(0.0, d0 * d0 - k * k));
                P = 0.0;
                // int_{-L}^{L} ghat^2(hypot(k, k2)) dk2, even in k2
                const int sub = 8;
                for (int q = 0; q < sub; ++q) {
                    const double b = L * q / sub, hb = L / sub;
                    for (std::size_t j = 0; j < gl.x.size(); ++j) {
                        const double k2 = b + 0.5 * hb * (gl.x[j] + 1.0);
                        P += 0.5 * hb * gl.w[j] * std::pow(win.ghat_radial(std::hypot(k, k2)), 2);
                    }
                }
                P *= 2.0;
            }
            kn.push_back(k);
            pw.push_back(0.5 * h * gl.w[i] * P * 2.0 * std::pow(kTwoPi, -n));
        }
    }
    Autocorrelation ac;
    ac.n = n;
    ac.delta0 = d0;
    ac.step = 0.03 / d0;
    const double wend = 400.0 / d0;
    const std::size_t m = static_cast<std::size_t>(wend / ac.step) + 2;
    ac.v.resize(m);
    ac.dv.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const double w = ac.step * static_cast<double>(i);
        double s = 0.0, ds = 0.0;
        for (std::size_t j = 0; j < kn.size(); ++j) {
            s += pw[j] * std::cos(kn[j] * w);
            ds -= pw[j] * kn[j] * std::sin(kn[j] * w);
        }
        ac.v[i] = s;
        ac.dv[i] = ds;
    }
    std::size_t last = 0;
    for (std::size_t i = 0; i < m; ++i)
        if (std::fabs(ac.v[i]) >= 1e-13 * ac.v[0]) last = i;
    last = std::min(m - 1, last + 2);
    ac.v.resize(last + 1);
    ac.dv.resize(last + 1);
    ac.w_max = ac.step * static_cast<double>(last);
    return ac;
}

// ---------------------------------------------------------------- kernel

PacketKernel::PacketKernel(const Window& w, const SymbolModel& sym, double theta, KernelOptions opt)
    : ac_(make_autocorrelation(w)), mu_(sym.mu), theta_(theta), opt_(opt) {
    if (sym.n != 2 || w.n != 2) throw std::invalid_argument("packet_kernel: n must be 2");
    if (sym.c0 != 0.0) throw std::invalid_argument("packet_kernel: only the free symbol (c0 = 0) is supported");
    if (!(mu_ >= 16.0 && mu_ <= 128.0)) throw std::invalid_argument("packet_kernel: mu must lie in [16, 128]");
    if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("packet_kernel: theta must lie in (0, 1]");
    if (!(opt.points_per_oscillation >= 6.0)) throw std::invalid_argument("packet_kernel: need >= 6 points per oscillation");
}

cd PacketKernel::operator()(double r, const Vec& x, double t, const Vec& y) const {
    const double s = t - r;
    if (std::fabs(s) > opt_.eps * (1.0 + 1e-12)) throw std::invalid_argument("packet_kernel: |t - r| exceeds the slab length");
    const double mu = mu_, sm = std::sqrt(mu), mt = mu * theta_;
    const double d[2] = {y[0] - x[0], y[1] - x[1]};
    nodes_ = 0;

    // zeta boxes before clipping
    const double c = kN1 * mt;
    const double rin0 = kRin0 * mu, rout1 = kRout1 * mu;
    const double a = std::sqrt(std::max(0.0, rin0 * rin0 - c * c));
    double lo2 = -c, hi2 = c;
    double box1[2][2] = {{a, rout1}, {-rout1, -a}};
    // clip to the disc |w| <= w_max
    if (s == 0.0) {
        if (sm * std::hypot(d[0], d[1]) >= ac_.w_max) return 0.0;
    } else {
        const double rho = ac_.w_max * sm / (2.0 * std::fabs(s));
        const double z0 = mu * d[0] / (2.0 * s), z1 = mu * d[1] / (2.0 * s);
        lo2 = std::max(lo2, z1 - rho);
        hi2 = std::min(hi2, z1 + rho);
        for (auto& b : box1) {
            b[0] = std::max(b[0], z0 - rho);
            b[1] = std::min(b[1], z0 + rho);
        }
    }
    if (hi2 <= lo2) return 0.0;

    const double ppo = opt_.points_per_oscillation;
    auto wvec = [&](double z0, double z1) {
        return std::hypot(sm * d[0] - 2.0 * s * z0 / sm, sm * d[1] - 2.0 * s * z1 / sm);
    };

    cd total = 0.0;
    long nodes = 0;
    struct Lobe {
        Nodes n1, n2;
    };
    std::vector<Lobe> lobes;
    for (const auto& b : box1) {
        if (b[1] <= b[0]) continue;
        double wmax = 0.0;
        for (double z0 : {b[0], b[1]})
            for (double z1 : {lo2, hi2}) wmax = std::max(wmax, wvec(z0, z1));
        wmax = std::min(wmax, ac_.w_max);
        // phase gradient is |w| / mu^{1/2}; G(|w|) has frequencies up to delta0
        // in w, and w moves by 2 |s| / mu^{1/2} per unit zeta
        const double omega = wmax / sm + 2.0 * std::fabs(s) * ac_.delta0 / sm + 1e-300;
        const double wosc = 16.0 * (kTwoPi / omega) / ppo;
        // zeta_1 zones in |zeta_1|: inner ramp, plateau, outer ramp
        const double fin = 0.5 * (kRin - kRin0) * mu, fout = 0.5 * (kRout1 - kRout) * mu;
        const double pl = 0.25 * mu;
        const double sgn = b[0] >= 0.0 ? 1.0 : -1.0;
        const double alo = sgn > 0 ? b[0] : -b[1], ahi = sgn > 0 ? b[1] : -b[0];
        auto bp = breakpoints(alo, ahi,
                              {{1.05 * kRin * mu, std::min(fin, wosc)},
                               {0.97 * kRout * mu, std::min(pl, wosc)},
                               {ahi, std::min(fout, wosc)}});
        Lobe L;
        L.n1 = gl_nodes(bp);
        if (sgn < 0)
            for (auto& v : L.n1.x) v = -v;
        const double f2 = 0.5 * (kN1 - 1.0) * mt, pl2 = 0.25 * mt;
        std::vector<double> bp2;
        {
            // symmetric zones: [-c, -mt] ramp, plateau, [mt, c] ramp, clipped to [lo2, hi2]
            std::vector<double> cuts{-c, -mt, mt, c};
            std::vector<double> widths{std::min(f2, wosc), std::min(pl2, wosc), std::min(f2, wosc)};
            bp2.push_back(lo2);
            for (int z = 0; z < 3; ++z) {
                const double za = std::max(lo2, cuts[z]), zb = std::min(hi2, cuts[z + 1]);
                if (zb <= za) continue;
                if (bp2.back() < za) bp2.push_back(za);
                const int k = std::max(1, static_cast<int>(std::ceil((zb - za) / widths[z])));
                for (int i = 1; i <= k; ++i) bp2.push_back(za + (zb - za) * i / k);
            }
        }
        L.n2 = gl_nodes(bp2);
        nodes += static_cast<long>(L.n1.x.size() * L.n2.x.size());
        lobes.push_back(std::move(L));
    }
    if (static_cast<double>(nodes) > opt_.budget)
        throw CostError("packet_kernel: " + std::to_string(nodes) + " nodes exceed the budget");
    nodes_ = nodes;

    for (const auto& L : lobes) {
        const std::size_t n2 = L.n2.x.size();
        std::vector<cd> e2(n2);
        std::vector<double> a2(n2), w2(n2);
        for (std::size_t j = 0; j < n2; ++j) {
            const double z = L.n2.x[j];
            e2[j] = L.n2.w[j] * normal_profile(std::fabs(z) / mt) * std::polar(1.0, -z * d[1] + s * z * z / mu);
            w2[j] = sm * d[1] - 2.0 * s * z / sm;
        }
        for (std::size_t i = 0; i < L.n1.x.size(); ++i) {
            const double z = L.n1.x[i];
            const double w1 = sm * d[0] - 2.0 * s * z / sm;
            cd acc = 0.0;
            for (std::size_t j = 0; j < n2; ++j) {
                if (e2[j] == 0.0) continue;
                const double rad = radial_profile(std::hypot(z, L.n2.x[j]) / mu);
                if (rad == 0.0) continue;
                const double g = ac_(std::hypot(w1, w2[j]));
                acc += (rad * g) * e2[j];
            }
            total += L.n1.w[i] * std::polar(1.0, -z * d[0] + s * z * z / mu) * acc;
        }
    }
    return total;
}

cd packet_kernel(const SymbolModel& sym, double mu, double theta, double r, const Vec& x, double t, const Vec& y) {
    if (sym.mu != mu) throw std::invalid_argument("packet_kernel: symbol and mu disagree");
    const PacketKernel k(make_window(2), sym, theta);
    return k(r, x, t, y);
}

// ---------------------------------------------------------------- decay scan

namespace {

// Local maxima of the free-propagator envelope |int Upsilon e^{i(s|zeta|^2/mu - zeta.d)}|
// on an FFT grid of d, refined by a parabola per axis.
std::vector<Vec> envelope_peaks(double mu, double theta, double s, int count) {
    const int N1 = 2048, N2 = 512;
    const double A1 = 2.0 * kRout1 * mu * 1.03, A2 = 4.0 * kN1 * mu * theta;
    const double h1 = 2.0 * A1 / N1, h2 = 2.0 * A2 / N2;
    std::vector<cd> a(static_cast<std::size_t>(N1) * N2);
    for (int i = 0; i < N1; ++i) {
        const double z1 = -A1 + i * h1;
        for (int j = 0; j < N2; ++j) {
            const double z2 = -A2 + j * h2;
            const double u = upsilon(mu, theta, {z1, z2});
            a[static_cast<std::size_t>(i) * N2 + j] = u == 0.0 ? cd(0.0) : u * std::polar(1.0, s * (z1 * z1 + z2 * z2) / mu);
        }
    }
    fft::two_d(a, N1, N2, -1);
    auto at = [&](int i, int j) { return std::abs(a[static_cast<std::size_t>((i + N1) % N1) * N2 + (j + N2) % N2]); };
    struct Pk {
        double v;
        int i, j;
    };
    std::vector<Pk> pk;
    for (int i = 0; i < N1; ++i)
        for (int j = 0; j < N2; ++j) {
            const double v = at(i, j);
            bool top = true;
            for (int di = -1; di <= 1 && top; ++di)
                for (int dj = -1; dj <= 1; ++dj)
                    if ((di || dj) && at(i + di, j + dj) > v) {
                        top = false;
                        break;
                    }
            if (top) pk.push_back({v, i, j});
        }
    std::stable_sort(pk.begin(), pk.end(), [](const Pk& p, const Pk& q) { return p.v > q.v; });
    std::vector<Vec> out;
    for (std::size_t k = 0; k < pk.size() && static_cast<int>(k) < count; ++k) {
        const int i = pk[k].i, j = pk[k].j;
        auto vert = [](double m, double c0, double p) {
            const double den = m - 2.0 * c0 + p;
            return den < 0.0 ? 0.5 * (m - p) / den : 0.0;
        };
        const double fi = i + vert(at(i - 1, j), at(i, j), at(i + 1, j));
        const double fj = j + vert(at(i, j - 1), at(i, j), at(i, j + 1));
        const double ki = fi < N1 / 2 ? fi : fi - N1, kj = fj < N2 / 2 ? fj : fj - N2;
        out.push_back({kTwoPi * ki / (N1 * h1), kTwoPi * kj / (N2 * h2)});
    }
    return out;
}

}  // namespace

DecayScan kernel_decay_scan(const Window& w, const SymbolModel& sym, double theta, const ScanOptions& opt) {
    if (opt.times < 3) throw std::invalid_argument("kernel_decay_scan: need at least 3 time samples");
    if (opt.pairs < 0) throw std::invalid_argument("kernel_decay_scan: pairs must be >= 0");
    const PacketKernel K(w, sym, theta, opt.kernel);
    const double mu = sym.mu;
    const double lo = opt.dt_min / mu, hi = opt.kernel.eps;
    if (!(lo > 0.0 && lo < hi)) throw std::invalid_argument("kernel_decay_scan: empty time range");

    DecayScan out;
    out.mu = mu;
    out.theta = theta;
    out.rows.resize(static_cast<std::size_t>(opt.times));
    parallel_for(out.rows.size(), opt.threads, [&](std::size_t k) {
        const double dt = lo * std::pow(hi / lo, static_cast<double>(k) / (opt.times - 1));
        CounterRng rng(opt.seed, 0x4b00 + k);
        const Vec x{rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        std::vector<Vec> ys{x};
        // packet centres carried by the flow from frequencies in the cutoff's plateau
        for (int p = 0; p < opt.pairs; ++p) {
            const double rr = rng.uniform(kRin, kRout) * mu;
            const double z2 = std::clamp(rng.uniform(-1.0, 1.0) * mu * theta, -0.95 * rr, 0.95 * rr);
            const double z1 = (rng.uniform() < 0.5 ? -1.0 : 1.0) * std::sqrt(rr * rr - z2 * z2);
            ys.push_back(flow_map(sym, dt, 0.0, x, {z1, z2}, 1e-10).x);
        }
        for (const Vec& d : envelope_peaks(mu, theta, dt, 4)) ys.push_back({x[0] + d[0], x[1] + d[1]});
        double sup = 0.0;
        for (const Vec& y : ys) sup = std::max(sup, std::abs(K(0.0, x, dt, y)));
        int regime = 2;
        if (dt <= 1.0 / mu) regime = 0;
        else if (dt <= 1.0 / (mu * theta * theta)) regime = 1;
        out.rows[k] = {dt, sup, regime};
    });
    for (int g = 0; g < 3; ++g) {
        std::vector<double> lx, ly;
        for (const auto& r : out.rows)
            if (r.regime == g) {
                lx.push_back(std::log(r.dt));
                ly.push_back(std::log(r.sup_k));
            }
        out.has_fit[g] = lx.size() >= 3;
        if (out.has_fit[g]) out.fit[g] = verify::ols(lx, ly);
    }
    double inner = 0.0;
    for (const auto& r : out.rows)
        if (r.regime == 0) inner = std::max(inner, r.sup_k);
    out.inner_level = inner / (mu * mu * theta);
    return out;
}

}  // namespace glancing::wavepacket
