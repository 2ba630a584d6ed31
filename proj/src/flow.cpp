// Model symbol, Hamiltonian flow with variational equations, action phase
// and the transported parametrix.
#include <algorithm>
#include <cmath>
#include <numbers>

#include "glancing/parallel.hpp"
#include "glancing/quadrature.hpp"
#include "glancing/wavepacket.hpp"
#include "detail/wp_coef.hpp"

namespace glancing::wavepacket {

// ---------------------------------------------------------------- symbol

namespace {
struct Mk {
    double m, d1, d2;  // m_kappa and its first two derivatives
};
Mk mollified_abs(double t, double k) {
    const double r = std::sqrt(t * t + k * k);
    return {r - k, t / r, k * k / (r * r * r)};
}
}  // namespace

SymbolModel make_symbol(int n, double mu, double c0) {
    if (n != 1 && n != 2) throw std::invalid_argument("make_symbol: n must be 1 or 2");
    if (!(mu > 0.0)) throw std::invalid_argument("make_symbol: mu must be positive");
    if (!(c0 >= 0.0 && c0 <= 0.05)) throw std::invalid_argument("make_symbol: c0 must lie in [0, 0.05]");
    return {n, mu, c0, 1.0 / std::sqrt(mu)};
}

double SymbolModel::q(const Vec& x, const Vec& xi) const {
    if (n == 1) return xi[0] * xi[0] / mu;
    const Mk m = mollified_abs(x[1], kappa);
    return ((1.0 + c0 * m.m) * xi[0] * xi[0] + xi[1] * xi[1]) / mu;
}

Vec SymbolModel::dq_dx(const Vec& x, const Vec& xi) const {
    if (n == 1) return {0.0, 0.0};
    const Mk m = mollified_abs(x[1], kappa);
    return {0.0, c0 * m.d1 * xi[0] * xi[0] / mu};
}

Vec SymbolModel::dq_dxi(const Vec& x, const Vec& xi) const {
    if (n == 1) return {2.0 * xi[0] / mu, 0.0};
    const Mk m = mollified_abs(x[1], kappa);
    return {2.0 * (1.0 + c0 * m.m) * xi[0] / mu, 2.0 * xi[1] / mu};
}

void SymbolModel::hessian(const Vec& x, const Vec& xi, std::array<double, 4>& qxx, std::array<double, 4>& qxxi,
                          std::array<double, 4>& qxixi) const {
    qxx.fill(0.0);
    qxxi.fill(0.0);
    qxixi.fill(0.0);
    if (n == 1) {
        qxixi[0] = 2.0 / mu;
        return;
    }
    const Mk m = mollified_abs(x[1], kappa);
    // index (i, j) -> 2 i + j
    qxx[3] = c0 * m.d2 * xi[0] * xi[0] / mu;
    qxxi[2] = 2.0 * c0 * m.d1 * xi[0] / mu;  // d_{x_2} d_{xi_1}
    qxixi[0] = 2.0 * (1.0 + c0 * m.m) / mu;
    qxixi[3] = 2.0 / mu;
}

// ---------------------------------------------------------------- DOPRI5

namespace {

constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

// state: x (n), xi (n), then the 2n x 2n matrix row-major when carried
void rhs(const SymbolModel& s, bool jac, const std::vector<double>& y, std::vector<double>& f) {
    const int n = s.n;
    Vec x{}, xi{};
    for (int i = 0; i < n; ++i) {
        x[i] = y[i];
        xi[i] = y[n + i];
    }
    const Vec gx = s.dq_dx(x, xi), gxi = s.dq_dxi(x, xi);
    for (int i = 0; i < n; ++i) {
        f[i] = gxi[i];
        f[n + i] = -gx[i];
    }
    if (!jac) return;
    std::array<double, 4> qxx, qxxi, qxixi;
    s.hessian(x, xi, qxx, qxxi, qxixi);
    const int d = 2 * n;
    // A = [[q_xi x, q_xi xi], [-q_xx, -q_x xi]]
    double A[4][4] = {};
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            A[i][j] = qxxi[2 * j + i];
            A[i][n + j] = qxixi[2 * i + j];
            A[n + i][j] = -qxx[2 * i + j];
            A[n + i][n + j] = -qxxi[2 * i + j];
        }
    const double* M = y.data() + d;
    double* F = f.data() + d;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double acc = 0.0;
            for (int k = 0; k < d; ++k) acc += A[i][k] * M[k * d + j];
            F[i * d + j] = acc;
        }
}

double det(std::vector<double> a, int d) {
    double r = 1.0;
    for (int c = 0; c < d; ++c) {
        int p = c;
        for (int i = c + 1; i < d; ++i)
            if (std::fabs(a[i * d + c]) > std::fabs(a[p * d + c])) p = i;
        if (a[p * d + c] == 0.0) return 0.0;
        if (p != c) {
            for (int j = 0; j < d; ++j) std::swap(a[p * d + j], a[c * d + j]);
            r = -r;
        }
        r *= a[c * d + c];
        for (int i = c + 1; i < d; ++i) {
            const double f = a[i * d + c] / a[c * d + c];
            for (int j = c; j < d; ++j) a[i * d + j] -= f * a[c * d + j];
        }
    }
    return r;
}

}  // namespace

Trajectory hamiltonian_flow(const SymbolModel& sym, const Vec& x0, const Vec& xi0, double t0, double t1, double tol,
                            bool jacobian) {
    if (!(tol >= 1e-12 && tol <= 1e-6)) throw std::invalid_argument("hamiltonian_flow: tol must lie in [1e-12, 1e-6]");
    const int n = sym.n, d = 2 * n;
    Trajectory tr;
    tr.n_ = n;
    tr.t0_ = t0;
    tr.t1_ = t1;
    tr.jac_ = jacobian;
    tr.dim_ = d + (jacobian ? d * d : 0);
    const int D = tr.dim_;
    std::vector<double> y(D, 0.0);
    for (int i = 0; i < n; ++i) {
        y[i] = x0[i];
        y[n + i] = xi0[i];
    }
    if (jacobian)
        for (int i = 0; i < d; ++i) y[d + i * d + i] = 1.0;
    tr.ts_.push_back(t0);
    tr.ys_.push_back(y);
    if (t1 == t0) return tr;

    const double dir = t1 > t0 ? 1.0 : -1.0;
    const double span = std::fabs(t1 - t0);
    std::vector<double> k1(D), k2(D), k3(D), k4(D), k5(D), k6(D), k7(D), yt(D), y1(D);
    rhs(sym, jacobian, y, k1);
    // initial step from the size of the derivative
    double fn = 0.0, yn = 0.0;
    for (int i = 0; i < D; ++i) {
        const double sc = tol + tol * std::fabs(y[i]);
        fn += (k1[i] / sc) * (k1[i] / sc);
        yn += (y[i] / sc) * (y[i] / sc);
    }
    double h = (fn < 1e-10 || yn < 1e-10) ? 1e-6 : 0.01 * std::sqrt(yn / fn);
    h = std::min(h, span);
    double t = t0;
    int steps = 0;
    while (dir * (t1 - t) > 0.0) {
        if (++steps > 1000000) throw StepUnderflow("hamiltonian_flow: step limit reached");
        if (h < 1e-14 * std::max(1.0, std::fabs(t))) throw StepUnderflow("hamiltonian_flow: step size underflow");
        const bool last = h >= std::fabs(t1 - t);
        if (last) h = std::fabs(t1 - t);
        const double hs = dir * h;
        for (int i = 0; i < D; ++i) yt[i] = y[i] + hs * a21 * k1[i];
        rhs(sym, jacobian, yt, k2);
        for (int i = 0; i < D; ++i) yt[i] = y[i] + hs * (a31 * k1[i] + a32 * k2[i]);
        rhs(sym, jacobian, yt, k3);
        for (int i = 0; i < D; ++i) yt[i] = y[i] + hs * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        rhs(sym, jacobian, yt, k4);
        for (int i = 0; i < D; ++i) yt[i] = y[i] + hs * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        rhs(sym, jacobian, yt, k5);
        for (int i = 0; i < D; ++i)
            yt[i] = y[i] + hs * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        rhs(sym, jacobian, yt, k6);
        for (int i = 0; i < D; ++i)
            y1[i] = y[i] + hs * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        rhs(sym, jacobian, y1, k7);
        double err = 0.0;
        for (int i = 0; i < D; ++i) {
            const double e = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = tol + tol * std::max(std::fabs(y[i]), std::fabs(y1[i]));
            err += (e / sc) * (e / sc);
        }
        err = std::sqrt(err / D);
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-300), -0.2), 0.2, 10.0);
        if (err <= 1.0) {
            std::vector<double> rc(5 * D);
            for (int i = 0; i < D; ++i) {
                const double dy = y1[i] - y[i], bspl = hs * k1[i] - dy;
                rc[i] = y[i];
                rc[D + i] = dy;
                rc[2 * D + i] = bspl;
                rc[3 * D + i] = dy - hs * k7[i] - bspl;
                rc[4 * D + i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            tr.rc_.push_back(std::move(rc));
            t = last ? t1 : t + hs;
            y = y1;
            k1 = k7;
            tr.ts_.push_back(t);
            tr.ys_.push_back(y);
            h *= std::min(fac, 10.0);
        } else {
            h *= std::min(fac, 1.0);
        }
    }
    return tr;
}

std::vector<double> Trajectory::dense(double t) const {
    const double lo = std::min(t0_, t1_), hi = std::max(t0_, t1_);
    if (t < lo - 1e-14 * (1 + std::fabs(lo)) || t > hi + 1e-14 * (1 + std::fabs(hi)))
        throw std::out_of_range("Trajectory: time outside the integrated span");
    if (ts_.size() == 1) return ys_[0];
    // ts_ is monotone in the direction of integration
    const bool fwd = t1_ > t0_;
    std::size_t k;
    if (fwd)
        k = static_cast<std::size_t>(std::upper_bound(ts_.begin(), ts_.end(), t) - ts_.begin());
    else
        k = static_cast<std::size_t>(std::upper_bound(ts_.begin(), ts_.end(), t, std::greater<double>()) - ts_.begin());
    k = std::clamp<std::size_t>(k, 1, ts_.size() - 1) - 1;
    const double h = ts_[k + 1] - ts_[k];
    const double th = (t - ts_[k]) / h, th1 = 1.0 - th;
    const int D = dim_;
    const auto& rc = rc_[k];
    std::vector<double> y(D);
    for (int i = 0; i < D; ++i)
        y[i] = rc[i] + th * (rc[D + i] + th1 * (rc[2 * D + i] + th * (rc[3 * D + i] + th1 * rc[4 * D + i])));
    return y;
}

PhasePoint Trajectory::at(double t) const {
    const auto y = dense(t);
    PhasePoint p;
    for (int i = 0; i < n_; ++i) {
        p.x[i] = y[i];
        p.xi[i] = y[n_ + i];
    }
    return p;
}

std::vector<double> Trajectory::jacobian(double t) const {
    if (!jac_) throw std::logic_error("Trajectory: variational equations were not integrated");
    const auto y = dense(t);
    return std::vector<double>(y.begin() + 2 * n_, y.end());
}

double Trajectory::jacobian_det(double t) const { return det(jacobian(t), 2 * n_); }

PhasePoint flow_map(const SymbolModel& sym, double r, double t, const Vec& x, const Vec& xi, double tol) {
    return hamiltonian_flow(sym, x, xi, t, r, tol, false).at(r);
}

double action_phase(const Trajectory& tr, const SymbolModel& sym, int refine) {
    if (refine < 1) throw std::invalid_argument("action_phase: refine must be >= 1");
    const auto& gl = quad::gauss_legendre(8);
    const auto& ts = tr.times();
    double s = 0.0;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double a = ts[k], h = (ts[k + 1] - ts[k]) / refine;
        for (int p = 0; p < refine; ++p) {
            const double lo = a + p * h;
            double acc = 0.0;
            for (std::size_t i = 0; i < gl.x.size(); ++i) {
                const PhasePoint z = tr.at(lo + 0.5 * h * (gl.x[i] + 1.0));
                const Vec g = sym.dq_dxi(z.x, z.xi);
                double dot = 0.0;
                for (int d = 0; d < sym.n; ++d) dot += z.xi[d] * g[d];
                acc += gl.w[i] * (sym.q(z.x, z.xi) - dot);
            }
            s += 0.5 * h * acc;
        }
    }
    return -s;  // oriented from t1 to t0
}

// ---------------------------------------------------------------- parametrix

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ParametrixResult parametrix_evolve(const Window& w, const SpatialField& f, const SymbolModel& sym, double t,
                                   const ParametrixOptions& opt) {
    if (sym.n != f.n) throw std::invalid_argument("parametrix_evolve: dimension mismatch");
    const double mu = sym.mu;
    PhaseSpaceField F = wp_transform(w, f, mu, opt.transform);
    const int n = f.n, N = f.N;
    const double P = f.period, dk = kTwoPi / P, sm = std::sqrt(mu);

    // coefficients of f for off-lattice evaluation of T f
    const std::vector<cd> coef = detail::fourier_coefficients(f);
    const double R = w.delta0 * sm / dk;
    const int r = static_cast<int>(std::ceil(R));
    const double pre = std::pow(mu, -0.25 * n);
    auto Tf = [&](const Vec& x, const Vec& xi) -> cd {
        // sum over k with |eta_k - xi| < delta0 mu^{1/2}
        cd s = 0.0;
        const long c1 = n == 1 ? 0 : std::lround(xi[0] / dk), c2 = std::lround((n == 1 ? xi[0] : xi[1]) / dk);
        for (long k1 = (n == 1 ? 0 : c1 - r - 1); k1 <= (n == 1 ? 0 : c1 + r + 1); ++k1)
            for (long k2 = c2 - r - 1; k2 <= c2 + r + 1; ++k2) {
                if (std::labs(k1) >= N / 2 || std::labs(k2) >= N / 2) continue;
                const double dist = n == 1 ? std::fabs(xi[0] - k2 * dk) : std::hypot(xi[0] - k1 * dk, xi[1] - k2 * dk);
                const double gh = w.ghat_radial(dist / sm);
                if (gh == 0.0) continue;
                const long i1 = k1 < 0 ? k1 + N : k1, i2 = k2 < 0 ? k2 + N : k2;
                const cd ak = coef[static_cast<std::size_t>(i1) * (n == 1 ? 0 : N) + i2];
                if (ak == 0.0) continue;
                const double ph = n == 1 ? k2 * dk * x[0] : k1 * dk * x[0] + k2 * dk * x[1];
                s += ak * gh * std::polar(1.0, ph);
            }
        return pre * s;
    };

    const std::size_t cells = F.cells();
    const int nx = F.nx;
    parallel_for(F.m.size(), opt.transform.threads, [&](std::size_t im) {
        Vec xi{};
        for (int d = 0; d < n; ++d) xi[d] = F.m[im][n == 1 ? 1 : d] * dk;
        for (std::size_t j = 0; j < cells; ++j) {
            Vec x{};
            if (n == 1) {
                x[0] = F.x(static_cast<int>(j));
            } else {
                x[0] = F.x(static_cast<int>(j / nx));
                x[1] = F.x(static_cast<int>(j % nx));
            }
            const Trajectory tr = hamiltonian_flow(sym, x, xi, t, 0.0, opt.tol, false);
            const PhasePoint z = tr.at(0.0);
            const double psi = action_phase(tr, sym);
            F.v[im * cells + j] = std::polar(1.0, -psi) * Tf(z.x, z.xi);
        }
    });
    ParametrixResult out;
    // energy of the transported field on the stored lattice vs. the input
    const double e_in = f.l2_norm();
    const double e_lat = F.l2_norm();
    out.lost_fraction = std::max(0.0, 1.0 - (e_lat * e_lat) / (e_in * e_in));
    out.support_warning = out.lost_fraction > opt.lost_warn;
    out.u = wp_adjoint(w, F, N, opt.transform);
    out.norm_ratio = out.u.l2_norm() / e_in;
    return out;
}

}  // namespace glancing::wavepacket
