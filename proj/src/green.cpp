// Outgoing Green kernel of the radial Helmholtz mode problem outside the unit
// ball, its collar norms, and the solution operator it defines.
//
// With F = J_nu(lambda s) - kappa H_nu(lambda s) chosen to satisfy the
// boundary condition at r = 1 and H = H_nu^{(1)} outgoing, variation of
// parameters gives, for r >= s,
//     G(r, s) = (i pi / 2) (r s)^{1 - n/2} F(lambda s) H(lambda r),
// because r^{n-1} W[s^{1-n/2} F, r^{1-n/2} H] = 2i / pi.
#include "glancing/green.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "glancing/quadrature.hpp"
#include "glancing/specfun.hpp"

namespace glancing::green {

using std::numbers::pi;

BC parse_bc(const std::string& s) {
    if (s == "neumann" || s == "Neumann") return BC::Neumann;
    if (s == "dirichlet" || s == "Dirichlet") return BC::Dirichlet;
    throw std::invalid_argument("unknown boundary condition '" + s + "'");
}

std::string to_string(BC bc) { return bc == BC::Neumann ? "neumann" : "dirichlet"; }

double mode_order(int n, int l) {
    if (l < 0) throw std::invalid_argument("mode index must be non-negative");
    if (n == 2) return static_cast<double>(l);
    if (n == 3) return l + 0.5;
    throw std::invalid_argument("mode_order: only n = 2, 3 are supported");
}

Collar Collar::make(int j) {
    if (j < 0) throw std::invalid_argument("collar index must be non-negative");
    return {j, 1.0, 1.0 + std::ldexp(1.0, 2 - j)};
}

// ---------------------------------------------------------------- LogC

cd LogC::value() const {
    if (m == cd(0.0, 0.0)) return m;
    return m * std::exp(e);
}

LogC operator+(const LogC& a, const LogC& b) {
    if (a.m == cd(0.0, 0.0)) return b;
    if (b.m == cd(0.0, 0.0)) return a;
    const double E = std::max(a.e, b.e);
    return {a.m * std::exp(a.e - E) + b.m * std::exp(b.e - E), E};
}

LogC operator-(const LogC& a, const LogC& b) { return a + LogC{-b.m, b.e}; }

namespace {
LogC norm_log(cd m, double e) {
    const double a = std::abs(m);
    if (a == 0.0 || (a < 1e150 && a > 1e-150)) return {m, e};
    const double l = std::log(a);
    return {m / a, e + l};
}
}  // namespace

LogC operator*(const LogC& a, const LogC& b) { return norm_log(a.m * b.m, a.e + b.e); }
LogC operator/(const LogC& a, const LogC& b) { return norm_log(a.m / b.m, a.e - b.e); }

// ---------------------------------------------------------------- kernel

namespace {

struct BesselC {
    LogC J, Jp, H, Hp;
};

BesselC bessel_c(double nu, double x) {
    const specfun::BesselLog b = specfun::bessel_log(nu, x);
    BesselC r;
    r.J = {cd(b.j, 0.0), b.ej};
    r.Jp = {cd(b.jp, 0.0), b.ej};
    r.H = r.J + LogC{cd(0.0, b.y), b.ey};
    r.Hp = r.Jp + LogC{cd(0.0, b.yp), b.ey};
    return r;
}

void check_problem(const ModeProblem& p) {
    if (p.n < 2) throw std::invalid_argument("dimension must be >= 2");
    if (!(p.lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
    if (!(p.nu >= 0.0)) throw std::invalid_argument("nu must be non-negative");
}

}  // namespace

GreenKernel::GreenKernel(const ModeProblem& p) : p_(p) {
    check_problem(p);
    const BesselC b = bessel_c(p.nu, p.lambda);
    if (p.bc == BC::Neumann) {
        const LogC c{cd((1.0 - 0.5 * p.n) / p.lambda, 0.0), 0.0};
        const LogC num = c * b.J + b.Jp;
        const LogC den = c * b.H + b.Hp;
        if (std::abs(den.m) == 0.0) throw std::runtime_error("degenerate boundary denominator");
        kappa_ = num / den;
        refl_ = std::conj(den.m) / den.m;
    } else {
        if (std::abs(b.H.m) == 0.0) throw std::runtime_error("degenerate boundary denominator");
        kappa_ = b.J / b.H;
        refl_ = std::conj(b.H.m) / b.H.m;
    }
}

Factors GreenKernel::factors(double s) const {
    const BesselC b = bessel_c(p_.nu, p_.lambda * s);
    Factors f;
    f.F = b.J - kappa_ * b.H;
    f.Fp = b.Jp - kappa_ * b.Hp;
    f.H = b.H;
    f.Hp = b.Hp;
    return f;
}

LogC GreenKernel::eval_log(double r, double s) const {
    if (r < s) std::swap(r, s);
    const Factors fs = factors(s), fr = factors(r);
    const double pre = std::pow(r * s, 1.0 - 0.5 * p_.n);
    return LogC{cd(0.0, 0.5 * pi * pre), 0.0} * fs.F * fr.H;
}

cd GreenKernel::eval(double r, double s) const { return eval_log(r, s).value(); }

cd bc_coefficient(const ModeProblem& p) { return GreenKernel(p).refl(); }

cd green_eval(const ModeProblem& p, double r, double s) {
    if (r < 1.0 || s < 1.0) throw std::domain_error("green_eval: r, s must be >= 1");
    return GreenKernel(p).eval(r, s);
}

// ---------------------------------------------------------------- grids

RadialGrid make_grid(int n, double a, double b, double lambda, double scale) {
    if (!(b > a)) throw std::invalid_argument("make_grid: empty interval");
    const double hmax = scale * 2.0 * pi / lambda;
    const int np = std::max(1, static_cast<int>(std::ceil((b - a) / hmax - 1e-12)));
    const double h = (b - a) / np;
    const auto& gl = quad::gauss_legendre(16);
    RadialGrid g;
    g.n = n;
    g.lambda = lambda;
    g.max_panel = h;
    for (int k = 0; k < np; ++k) {
        const double lo = a + k * h;
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            const double r = lo + 0.5 * h * (gl.x[i] + 1.0);
            g.r.push_back(r);
            g.w.push_back(0.5 * h * gl.w[i] * std::pow(r, n - 1));
        }
    }
    return g;
}

namespace {

// Panel breakpoints on [a, b] adapted to the mode: oscillatory stretches get
// panels of one wavelength, the evanescent stretch is graded geometrically
// away from the boundary layer at r = 1 and toward the turning point.
void layout(double a, double b, double lambda, double nu, double scale, std::vector<double>& cuts) {
    const double hosc = scale * 2.0 * pi / lambda;
    const double rt = nu / lambda;
    const double k1 = std::sqrt(std::max(nu * nu - lambda * lambda, 0.0));
    const double hmin = k1 > 0.0 ? std::min(hosc, scale * 0.5 / k1) : hosc;
    double r = a;
    cuts.push_back(a);
    while (r < b) {
        double h;
        if (r < rt) {
            const double d1 = r - 1.0 + hmin / scale;
            const double dt = rt - r;
            h = std::max(hmin, scale * 0.5 * std::min(d1, dt));
            if (r + h > rt && rt - r > hmin) h = rt - r;  // land on the turning point
        } else {
            h = hosc;
        }
        if (b - (r + h) < 0.25 * h) h = b - r;
        r += h;
        if (r > b) r = b;
        cuts.push_back(r);
    }
}

struct LogR {
    double m = 0.0, e = 0.0;
};

LogR sub(const LogR& a, const LogR& b) {
    if (b.m == 0.0) return a;
    if (a.m == 0.0) return {-b.m, b.e};
    const double E = std::max(a.e, b.e);
    return {a.m * std::exp(a.e - E) - b.m * std::exp(b.e - E), E};
}

// Phi(x) = (x^2 - nu^2)|F|^2 + x^2 |F'|^2, whose increment is 2 int x |F|^2 dx.
LogR lommel(const Factors& f, double x, double nu) {
    const double t1 = (x * x - nu * nu) * std::norm(f.F.m), e1 = 2.0 * f.F.e;
    const double t2 = x * x * std::norm(f.Fp.m), e2 = 2.0 * f.Fp.e;
    const double E = std::max(e1, e2);
    return {t1 * std::exp(e1 - E) + t2 * std::exp(e2 - E), E};
}

// Integrand of ||G||^2 in r, per unit dr, with the (pi^2/2) factor left out:
//   r |H(lambda r)|^2 int_1^r s |F(lambda s)|^2 ds.
double hs_integrand(const GreenKernel& K, const LogR& phi1, double r) {
    const ModeProblem& p = K.problem();
    const double x = p.lambda * r;
    const Factors f = K.factors(r);
    LogR I = sub(lommel(f, x, p.nu), phi1);
    I.m /= 2.0 * p.lambda * p.lambda;
    if (I.m <= 0.0) return 0.0;  // only at r = 1 up to rounding
    return r * std::norm(f.H.m) * I.m * std::exp(2.0 * f.H.e + I.e);
}

}  // namespace

std::vector<double> green_hs_norms_nested(const ModeProblem& p, int jmax, double panel_scale) {
    if (jmax < 0) throw std::invalid_argument("jmax must be non-negative");
    const GreenKernel K(p);
    const Factors f1 = K.factors(1.0);
    const LogR phi1 = lommel(f1, p.lambda, p.nu);
    std::vector<double> bps;  // ascending collar ends
    for (int j = jmax; j >= 0; --j) bps.push_back(Collar::make(j).a_hi);
    const auto& gl = quad::gauss_legendre(16);
    std::vector<double> acc(jmax + 1, 0.0);
    double total = 0.0, lo = 1.0;
    std::vector<double> cuts;
    for (std::size_t seg = 0; seg < bps.size(); ++seg) {
        cuts.clear();
        layout(lo, bps[seg], p.lambda, p.nu, panel_scale, cuts);
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double a = cuts[k], b = cuts[k + 1], hw = 0.5 * (b - a);
            double s = 0.0;
            for (std::size_t i = 0; i < gl.x.size(); ++i)
                s += gl.w[i] * hs_integrand(K, phi1, a + hw * (gl.x[i] + 1.0));
            total += hw * s;
        }
        acc[jmax - seg] = total;
        lo = bps[seg];
    }
    std::vector<double> out(jmax + 1);
    for (int j = 0; j <= jmax; ++j) out[j] = std::sqrt(0.5 * pi * pi * acc[j]);
    return out;
}

double green_hs_norm(const ModeProblem& p, const Collar& c, double panel_scale) {
    const auto v = green_hs_norms_nested(p, c.j, panel_scale);
    return v[c.j];
}

double green_hs_norm(const ModeProblem& p, const Collar& c, const RadialGrid& grid) {
    if (grid.r.empty()) throw ResolutionError("empty radial grid");
    // at least 10 nodes per wavelength 2 pi / lambda
    if (grid.max_panel > 1.6 * 2.0 * pi / p.lambda + 1e-15)
        throw ResolutionError("radial grid does not resolve the wavelength");
    const GreenKernel K(p);
    const LogR phi1 = lommel(K.factors(1.0), p.lambda, p.nu);
    double s = 0.0;
    for (std::size_t k = 0; k < grid.r.size(); ++k) {
        const double r = grid.r[k];
        if (r < c.a_lo - 1e-14 || r > c.a_hi + 1e-14)
            throw ResolutionError("grid node outside the collar");
        s += grid.w[k] / std::pow(r, grid.n - 1) * hs_integrand(K, phi1, r);
    }
    return std::sqrt(0.5 * pi * pi * s);
}

// ---------------------------------------------------------------- solve

RadialSamples mode_solve(const ModeProblem& p, const Collar& c, const std::function<cd(double)>& g,
                         double h) {
    if (!(h > 0.0)) throw std::invalid_argument("mode_solve: grid step must be positive");
    if (h > 2.0 * pi / p.lambda / 10.0 + 1e-15) throw ResolutionError("mode_solve: grid step too coarse");
    const GreenKernel K(p);
    const double rmax = c.a_hi + 1.0;
    const std::size_t N = static_cast<std::size_t>(std::llround((rmax - 1.0) / h));
    const double hn = (rmax - 1.0) / static_cast<double>(N);
    const auto& gl = quad::gauss_legendre(8);
    const double half = 0.5 * p.n;

    std::vector<Factors> node(N + 1);
    for (std::size_t k = 0; k <= N; ++k) node[k] = K.factors(1.0 + hn * k);

    // cell integrals of s^{n/2} F g and s^{n/2} H g over the part inside A_j
    std::vector<LogC> cf(N), ch(N);
    for (std::size_t k = 0; k < N; ++k) {
        const double a = 1.0 + hn * k;
        const double b = std::min(a + hn, c.a_hi);
        if (b <= a) continue;
        const double hw = 0.5 * (b - a);
        LogC sf, sh;
        for (std::size_t i = 0; i < gl.x.size(); ++i) {
            const double s = a + hw * (gl.x[i] + 1.0);
            const cd gv = g(s);
            if (gv == cd(0.0, 0.0)) continue;
            const Factors f = K.factors(s);
            const LogC wt{gv * (hw * gl.w[i] * std::pow(s, half)), 0.0};
            sf = sf + wt * f.F;
            sh = sh + wt * f.H;
        }
        cf[k] = sf;
        ch[k] = sh;
    }
    // A_k = int_1^{r_k} (forward), B_k = int_{r_k}^{a_hi} (backward)
    std::vector<LogC> A(N + 1), B(N + 1);
    for (std::size_t k = 0; k < N; ++k) A[k + 1] = A[k] + cf[k];
    for (std::size_t k = N; k-- > 0;) B[k] = B[k + 1] + ch[k];

    RadialSamples w;
    w.r0 = 1.0;
    w.h = hn;
    w.v.resize(N + 1);
    const LogC ipi2{cd(0.0, 0.5 * pi), 0.0};
    for (std::size_t k = 0; k <= N; ++k) {
        const double r = 1.0 + hn * k;
        const LogC pre{cd(std::pow(r, 1.0 - half), 0.0), 0.0};
        w.v[k] = (ipi2 * pre * (node[k].H * A[k] + node[k].F * B[k])).value();
    }
    return w;
}

RadialSamples mode_solve(const ModeProblem& p, const Collar& c, const RadialSamples& g) {
    if (g.v.size() < 8) throw std::invalid_argument("mode_solve: too few samples");
    // local degree-7 Lagrange interpolation of the samples
    auto interp = [&g](double s) -> cd {
        const double t = (s - g.r0) / g.h;
        long i0 = static_cast<long>(std::floor(t)) - 3;
        i0 = std::clamp<long>(i0, 0, static_cast<long>(g.v.size()) - 8);
        cd acc(0.0, 0.0);
        for (int a = 0; a < 8; ++a) {
            double l = 1.0;
            for (int b = 0; b < 8; ++b)
                if (b != a) l *= (t - (i0 + b)) / static_cast<double>(a - b);
            acc += l * g.v[i0 + a];
        }
        return acc;
    };
    auto gf = [&](double s) -> cd {
        if (s < g.r0 || s > g.r(g.v.size() - 1)) return {0.0, 0.0};
        return interp(s);
    };
    return mode_solve(p, c, gf, g.h);
}

RadialSamples apply_L_nu(const ModeProblem& p, const RadialSamples& w) {
    const std::size_t N = w.v.size();
    if (N < 6) throw std::invalid_argument("apply_L_nu: need at least 6 samples");
    const auto& v = w.v;
    const double h = w.h;
    RadialSamples out = w;
    auto d1 = [&](std::size_t k) -> cd {
        if (k >= 2 && k + 2 < N) return (-v[k + 2] + 8.0 * v[k + 1] - 8.0 * v[k - 1] + v[k - 2]) / (12.0 * h);
        if (k == 0) return (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * h);
        if (k == 1) return (-3.0 * v[0] - 10.0 * v[1] + 18.0 * v[2] - 6.0 * v[3] + v[4]) / (12.0 * h);
        const std::size_t m = N - 1;
        if (k == m) return (25.0 * v[m] - 48.0 * v[m - 1] + 36.0 * v[m - 2] - 16.0 * v[m - 3] + 3.0 * v[m - 4]) / (12.0 * h);
        return (3.0 * v[m] + 10.0 * v[m - 1] - 18.0 * v[m - 2] + 6.0 * v[m - 3] - v[m - 4]) / (12.0 * h);
    };
    auto d2 = [&](std::size_t k) -> cd {
        const double h2 = 12.0 * h * h;
        if (k >= 2 && k + 2 < N) return (-v[k + 2] + 16.0 * v[k + 1] - 30.0 * v[k] + 16.0 * v[k - 1] - v[k - 2]) / h2;
        if (k == 0) return (45.0 * v[0] - 154.0 * v[1] + 214.0 * v[2] - 156.0 * v[3] + 61.0 * v[4] - 10.0 * v[5]) / h2;
        if (k == 1) return (10.0 * v[0] - 15.0 * v[1] - 4.0 * v[2] + 14.0 * v[3] - 6.0 * v[4] + v[5]) / h2;
        const std::size_t m = N - 1;
        if (k == m) return (45.0 * v[m] - 154.0 * v[m - 1] + 214.0 * v[m - 2] - 156.0 * v[m - 3] + 61.0 * v[m - 4] - 10.0 * v[m - 5]) / h2;
        return (10.0 * v[m] - 15.0 * v[m - 1] - 4.0 * v[m - 2] + 14.0 * v[m - 3] - 6.0 * v[m - 4] + v[m - 5]) / h2;
    };
    // angular eigenvalue mu_l = nu^2 - (n-2)^2/4: the potential that r^{1-n/2} Z_nu(lambda r) solves
    const double ang = p.nu * p.nu - 0.25 * (p.n - 2.0) * (p.n - 2.0);
    for (std::size_t k = 0; k < N; ++k) {
        const double r = w.r(k);
        out.v[k] = -d2(k) - ((p.n - 1.0) / r) * d1(k) + (ang / (r * r) - p.lambda * p.lambda) * v[k];
    }
    return out;
}

// ---------------------------------------------------------------- bounds

double pointwise_bound_ratio(const ModeProblem& p, double r, double s) {
    if (p.nu < 1.0) throw std::domain_error("pointwise_bound_ratio needs nu >= 1");
    const double floor = std::pow(p.nu, -2.0 / 3.0);
    auto dist = [&](double t) {
        const double z = p.lambda * t / p.nu;
        return std::max(std::fabs(z * z - 1.0), floor);
    };
    const double bound = 1.0 / (p.nu * std::sqrt(dist(r)) * std::sqrt(dist(s)));
    const LogC g = GreenKernel(p).eval_log(r, s);
    return std::norm(g.m) * std::exp(2.0 * g.e) / bound;
}

double aj_integral(const ModeProblem& p, const Collar& c) {
    if (p.nu < 1.0) throw std::domain_error("aj_integral needs nu >= 1");
    const double sing = p.nu / p.lambda;
    auto below = [&](double s) { return std::asin(std::min(1.0, p.lambda * s / p.nu)); };
    auto above = [&](double s) { return std::acosh(std::max(1.0, p.lambda * s / p.nu)); };
    double v = 0.0;
    if (sing >= c.a_hi) {
        v = below(c.a_hi) - below(c.a_lo);
    } else if (sing <= c.a_lo) {
        v = above(c.a_hi) - above(c.a_lo);
    } else {
        v = (0.5 * pi - below(c.a_lo)) + above(c.a_hi);
    }
    return v / p.lambda;
}

double collar_norm(int n, const Collar& c, const RadialSamples& f) {
    if (f.v.size() < 3) throw std::invalid_argument("collar_norm: too few samples");
    auto val = [&](std::size_t k) { return std::norm(f.v[k]) * std::pow(f.r(k), n - 1); };
    std::size_t last = 0;
    while (last + 1 < f.v.size() && f.r(last + 1) <= c.a_hi + 1e-12 * c.a_hi) ++last;
    if (f.r(0) < c.a_lo - 1e-12 || last < 2) throw std::invalid_argument("collar_norm: grid must start at a_lo");
    double s = 0.0;
    std::size_t m = last;
    if (m % 2) {
        // trailing interval by the 3-point rule on the last three nodes
        const double f0 = val(m - 2), f1 = val(m - 1), f2 = val(m);
        s += f.h * (-f0 + 8.0 * f1 + 5.0 * f2) / 12.0;
        --m;
    }
    for (std::size_t k = 0; k + 2 <= m; k += 2) s += f.h / 3.0 * (val(k) + 4.0 * val(k + 1) + val(k + 2));
    if (c.a_hi - f.r(last) > 1e-9 * f.h) throw std::invalid_argument("collar_norm: grid must have a node at a_hi");
    return std::sqrt(s);
}

}  // namespace glancing::green
