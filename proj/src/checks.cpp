// Measurement helpers shared by the CLI validation suites and the bindings.
#include <algorithm>
#include <cmath>
#include <numbers>

#include "glancing/rng.hpp"
#include "glancing/specfun.hpp"
#include "glancing/wavepacket.hpp"

namespace glancing {

namespace specfun {

double path_agreement(double nu, double z) {
    const double x = nu * z;
    const BesselLog s = detail::series_path(nu, x);
    const BesselLog u = detail::uniform_path(nu, x);
    if (z < 1.0) {
        // no zeros below the turning point; compare mantissas in a common scale
        const double fj = std::exp(u.ej - s.ej), fy = std::exp(u.ey - s.ey);
        return std::max({std::fabs(u.j * fj - s.j) / std::fabs(s.j), std::fabs(u.jp * fj - s.jp) / std::fabs(s.jp),
                         std::fabs(u.y * fy - s.y) / std::fabs(s.y), std::fabs(u.yp * fy - s.yp) / std::fabs(s.yp)});
    }
    const double sj = s.j * std::exp(s.ej), sjp = s.jp * std::exp(s.ej);
    const double sy = s.y * std::exp(s.ey), syp = s.yp * std::exp(s.ey);
    const double uj = u.j * std::exp(u.ej), ujp = u.jp * std::exp(u.ej);
    const double uy = u.y * std::exp(u.ey), uyp = u.yp * std::exp(u.ey);
    const double h = std::hypot(sj, sy), hp = std::hypot(sjp, syp);
    return std::max({std::fabs(uj - sj) / h, std::fabs(uy - sy) / h, std::fabs(ujp - sjp) / hp, std::fabs(uyp - syp) / hp});
}

}  // namespace specfun

namespace wavepacket {

TransformCheck transform_check(int n, double mu, std::uint64_t seed, int threads) {
    if (n != 1 && n != 2) throw std::invalid_argument("transform_check: n must be 1 or 2");
    const double d0 = n == 1 ? 0.125 : 0.25;
    const int q = n == 1 ? 8 : 5;
    const Window w = make_window(n, d0);
    const double P = torus_period(w, mu, q);
    const double kmax = n == 1 ? 2.0 * mu : 1.2 * mu;
    int N = 16;
    while (N * 3 / 8 < kmax * P / (2.0 * std::numbers::pi) + 2) N *= 2;
    const Vec c = n == 1 ? Vec{1.25 * mu, 0.0} : Vec{mu, 0.0};
    const double rad = n == 1 ? 0.75 * mu : 3.0 * std::numbers::pi / P;
    const SpatialField f = random_band_limited(n, P, N, c, rad, seed);

    TransformOptions o;
    o.xi_per_radius = q;
    o.threads = threads;
    const PhaseSpaceField F = wp_transform(w, f, mu, o);
    const SpatialField g = wp_adjoint(w, F, N, o);
    double e = 0.0;
    for (std::size_t i = 0; i < g.v.size(); ++i) e += std::norm(g.v[i] - f.v[i]);
    const double fn = f.l2_norm();
    TransformCheck r;
    r.isometry = std::fabs(F.l2_norm() / fn - 1.0);
    r.reconstruction = std::sqrt(e * std::pow(P / N, n)) / fn;
    return r;
}

FlowCheck flow_check(const SymbolModel& sym, std::uint64_t seed, std::uint64_t stream, double tol) {
    CounterRng rng(seed, stream);
    const int n = sym.n;
    Vec x{}, xi{};
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-1.0, 1.0);
    const double r = rng.uniform(0.5 * sym.mu, 2.0 * sym.mu);
    if (n == 1) {
        xi[0] = rng.uniform() < 0.5 ? -r : r;
    } else {
        const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
        xi = {r * std::cos(a), r * std::sin(a)};
    }
    FlowCheck out;
    const Trajectory tr = hamiltonian_flow(sym, x, xi, 0.0, 1.0, tol, true);
    const PhasePoint e = tr.at(1.0);
    const double q0 = sym.q(x, xi);
    out.energy_drift = std::fabs(sym.q(e.x, e.xi) - q0) / q0;
    out.det_defect = std::fabs(tr.jacobian_det(1.0) - 1.0);

    const PhasePoint a = flow_map(sym, 0.3, 1.1, x, xi, tol);
    const PhasePoint b = flow_map(sym, 0.0, 0.8, x, xi, tol);
    for (int i = 0; i < n; ++i) {
        out.translation = std::max(out.translation, std::fabs(a.x[i] - b.x[i]));
        out.translation = std::max(out.translation, std::fabs(a.xi[i] - b.xi[i]) / sym.mu);
    }
    return out;
}

}  // namespace wavepacket

}  // namespace glancing
