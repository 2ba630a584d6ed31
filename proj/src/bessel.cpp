// J, Y of real order by continued fractions (Steed / Temme), plus dispatch,
// scaled evaluation, envelopes and the Wronskian check.
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

#include "glancing/specfun.hpp"

namespace glancing::specfun {

Method parse_method(const std::string& s) {
    if (s == "auto") return Method::Auto;
    if (s == "series") return Method::Series;
    if (s == "uniform") return Method::Uniform;
    throw std::invalid_argument("unknown method '" + s + "'");
}

namespace detail {
namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIt = 2000000;
constexpr double kBig = 1e200;
const double kLogBig = std::log(kBig);

// 1/Gamma(1 -+ mu) and the smooth combinations used by Temme's series.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
    const double gp = boost::math::tgamma1pm1(mu);   // Gamma(1+mu) - 1
    const double gm = boost::math::tgamma1pm1(-mu);  // Gamma(1-mu) - 1
    gampl = 1.0 / (1.0 + gp);
    gammi = 1.0 / (1.0 + gm);
    if (std::fabs(mu) < 1e-300) {
        gam1 = -std::numbers::egamma;
    } else {
        gam1 = (gp - gm) * gampl * gammi / (2.0 * mu);
    }
    gam2 = 0.5 * (gammi + gampl);
}

void renorm(double& m, double& mp, double& e) {
    const double a = std::max(std::fabs(m), std::fabs(mp));
    if (a == 0.0 || (a < 1e100 && a > 1e-100)) return;
    const double l = std::log(a);
    const double s = std::exp(-l);
    m *= s;
    mp *= s;
    e += l;
}

}  // namespace

BesselLog series_path(double nu, double x) {
    const double xmin = 2.0;
    const int nl = x < xmin ? static_cast<int>(nu + 0.5) : std::max(0, static_cast<int>(nu - x + 1.5));
    const double xmu = nu - nl, xmu2 = xmu * xmu;
    const double xi = 1.0 / x, xi2 = 2.0 * xi, w = xi2 / std::numbers::pi;

    // CF1: h = J'_nu / J_nu
    int isign = 1;
    double h = nu * xi;
    if (h < kTiny) h = kTiny;
    double b = xi2 * nu, d = 0.0, c = h;
    int it = 0;
    for (; it < kMaxIt; ++it) {
        b += xi2;
        d = b - d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b - 1.0 / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = c * d;
        h *= del;
        if (d < 0.0) isign = -isign;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    if (it >= kMaxIt) throw std::runtime_error("series path: CF1 did not converge");

    // downward recurrence to order mu, rescaled as it grows
    double rjl = isign, rjpl = h * rjl;
    const double rjl1 = rjl, rjp1 = rjpl;
    double fact = nu * xi, lsc = 0.0;
    for (int l = nl; l >= 1; --l) {
        const double tmp = fact * rjl + rjpl;
        fact -= xi;
        rjpl = fact * tmp - rjl;
        rjl = tmp;
        if (std::fabs(rjl) > kBig) {
            rjl /= kBig;
            rjpl /= kBig;
            lsc += kLogBig;
        }
    }
    if (rjl == 0.0) rjl = kEps;
    const double f = rjpl / rjl;

    double rjmu, rymu, rymup, ry1;
    if (x < xmin) {
        const double x2 = 0.5 * x, pimu = std::numbers::pi * xmu;
        const double fct = std::fabs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
        double dd = -std::log(x2);
        double e = xmu * dd;
        const double fct2 = std::fabs(e) < kEps ? 1.0 : std::sinh(e) / e;
        double gam1, gam2, gampl, gammi;
        temme_gammas(xmu, gam1, gam2, gampl, gammi);
        double ff = 2.0 / std::numbers::pi * fct * (gam1 * std::cosh(e) + gam2 * fct2 * dd);
        e = std::exp(e);
        double p = e / (gampl * std::numbers::pi);
        double q = 1.0 / (e * std::numbers::pi * gammi);
        const double pimu2 = 0.5 * pimu;
        const double fct3 = std::fabs(pimu2) < kEps ? 1.0 : std::sin(pimu2) / pimu2;
        const double r = std::numbers::pi * pimu2 * fct3 * fct3;
        double cc = 1.0;
        dd = -x2 * x2;
        double sum = ff + r * q, sum1 = p;
        int i = 1;
        for (; i < 10000; ++i) {
            ff = (i * ff + p + q) / (i * i - xmu2);
            cc *= dd / i;
            p /= (i - xmu);
            q /= (i + xmu);
            const double del = cc * (ff + r * q);
            sum += del;
            const double del1 = cc * p - i * del;
            sum1 += del1;
            if (std::fabs(del) < (1.0 + std::fabs(sum)) * kEps) break;
        }
        rymu = -sum;
        ry1 = -sum1 * xi2;
        rymup = xmu * xi * rymu - ry1;
        rjmu = w / (rymup - f * rymu);
    } else {
        // CF2 (Steed): p + i q = (J' + i Y') / (J + i Y) at order mu
        double a = 0.25 - xmu2;
        double p = -0.5 * xi, q = 1.0;
        double br = 2.0 * x, bi = 2.0;
        double fctr = a * xi / (p * p + q * q);
        double cr = br + q * fctr, ci = bi + p * fctr;
        double den = br * br + bi * bi;
        double dr = br / den, di = -bi / den;
        double dlr = cr * dr - ci * di, dli = cr * di + ci * dr;
        double temp = p * dlr - q * dli;
        q = p * dli + q * dlr;
        p = temp;
        int i = 2;
        for (; i < kMaxIt; ++i) {
            a += 2 * (i - 1);
            bi += 2.0;
            dr = a * dr + br;
            di = a * di + bi;
            if (std::fabs(dr) + std::fabs(di) < kTiny) dr = kTiny;
            fctr = a / (cr * cr + ci * ci);
            cr = br + cr * fctr;
            ci = bi - ci * fctr;
            if (std::fabs(cr) + std::fabs(ci) < kTiny) cr = kTiny;
            den = dr * dr + di * di;
            dr /= den;
            di /= -den;
            dlr = cr * dr - ci * di;
            dli = cr * di + ci * dr;
            temp = p * dlr - q * dli;
            q = p * dli + q * dlr;
            p = temp;
            if (std::fabs(dlr - 1.0) + std::fabs(dli) < kEps) break;
        }
        if (i >= kMaxIt) throw std::runtime_error("series path: CF2 did not converge");
        const double gam = (p - f) / q;
        rjmu = std::sqrt(w / ((p - f) * gam + q));
        rjmu = std::copysign(rjmu, rjl);
        rymu = rjmu * gam;
        rymup = rymu * (p + q / gam);
        ry1 = xmu * xi * rymu - rymup;
    }

    BesselLog out;
    const double fc = rjmu / rjl;
    out.j = rjl1 * fc;
    out.jp = rjp1 * fc;
    out.ej = -lsc;
    renorm(out.j, out.jp, out.ej);

    double lsy = 0.0;
    for (int i = 1; i <= nl; ++i) {
        const double tmp = (xmu + i) * xi2 * ry1 - rymu;
        rymu = ry1;
        ry1 = tmp;
        if (std::fabs(ry1) > kBig) {
            ry1 /= kBig;
            rymu /= kBig;
            lsy += kLogBig;
        }
    }
    out.y = rymu;
    out.yp = nu * xi * rymu - ry1;
    out.ey = lsy;
    renorm(out.y, out.yp, out.ey);
    return out;
}

}  // namespace detail

BesselLog bessel_log(double nu, double x, Method m) {
    if (!(x > 0.0)) throw std::domain_error("Bessel argument must be positive");
    if (!(nu >= 0.0)) throw std::domain_error("Bessel order must be non-negative");
    if (m == Method::Auto) m = nu >= NU_UNIFORM_MIN ? Method::Uniform : Method::Series;
    if (m == Method::Uniform) {
        if (nu < NU_UNIFORM_FLOOR) throw std::domain_error("uniform path needs nu >= 10");
        return detail::uniform_path(nu, x);
    }
    return detail::series_path(nu, x);
}

CylinderPair eval_bessel_pair(double nu, double x, Method m) {
    const BesselLog b = bessel_log(nu, x, m);
    if (b.ey > 700.0 || b.ej > 700.0) throw OverflowError("Bessel value exceeds double range; use eval_bessel_scaled");
    const double ej = std::exp(b.ej), ey = std::exp(b.ey);
    CylinderPair c{nu, x, b.j * ej, b.jp * ej, b.y * ey, b.yp * ey};
    if (!std::isfinite(c.y) || !std::isfinite(c.yp)) throw OverflowError("Bessel value exceeds double range");
    return c;
}

namespace {
double scale_exponent(double nu, double z) {
    if (z >= 1.0 - std::pow(nu, -2.0 / 3.0)) return 0.0;
    return nu * detail::turning_phase(z);
}
}  // namespace

ScaledPair eval_bessel_scaled(double nu, double z) {
    if (!(z > 0.0)) throw std::domain_error("eval_bessel_scaled: z must be positive");
    if (!(nu >= 1.0)) throw std::domain_error("eval_bessel_scaled: nu must be >= 1");
    const BesselLog b = bessel_log(nu, nu * z);
    const double L = scale_exponent(nu, z);
    const double fj = std::exp(b.ej + L), fy = std::exp(b.ey - L);
    return {nu, z, b.j * fj, b.jp * fj, b.y * fy, b.yp * fy, L};
}

double wronskian_defect(double nu, double x) {
    const BesselLog b = bessel_log(nu, x);
    const double f = std::exp(b.ej + b.ey);
    const double w = x * (b.j * b.yp - b.jp * b.y) * f * std::numbers::pi / 2.0;
    return std::fabs(w - 1.0);
}

Envelope envelope_bounds(double nu, double z, double c_lo, double c_hi) {
    if (nu < NU_UNIFORM_MIN) throw std::domain_error("envelope_bounds: nu below the uniform regime");
    if (!(z > 0.0)) throw std::domain_error("envelope_bounds: z must be positive");
    Envelope e{};
    e.nu = nu;
    e.z = z;
    const double band = std::pow(nu, -2.0 / 3.0);
    e.L = scale_exponent(nu, z);
    if (z < 1.0 - band) {
        const double v = 1.0 / (std::sqrt(nu) * std::pow(1.0 - z * z, 0.25));
        e.envJ = e.envY = e.envH = v;
        e.lowJ = c_lo * v;
        e.lowY = c_lo * v;
        e.lowH = c_lo * v;
    } else if (z <= 1.0 + band) {
        const double v = std::pow(nu, -1.0 / 3.0);
        e.envJ = e.envY = e.envH = v;
        e.lowJ = c_lo * v;
        e.lowY = 0.0;  // Y_nu has its first zero inside the band
        e.lowH = c_lo * v;
    } else {
        const double v = 1.0 / (std::sqrt(nu) * std::pow(z * z - 1.0, 0.25));
        e.envJ = e.envY = e.envH = v;
        e.lowJ = e.lowY = 0.0;  // oscillatory: J and Y have zeros
        e.lowH = c_lo * v;
    }
    e.highJ = c_hi * e.envJ;
    e.highY = c_hi * e.envY;
    e.highH = c_hi * e.envH;
    return e;
}

}  // namespace glancing::specfun
