// Airy functions: asymptotic expansions for |t| >= 8, otherwise a local
// Taylor expansion of y'' = t y from a tabulated node at spacing 1/8.
#include <array>
#include <cmath>
#include <numbers>

#include "glancing/specfun.hpp"

namespace glancing::specfun {
namespace {

constexpr double kT = 8.0;
constexpr int kPerUnit = 8;
constexpr int kNodes = 2 * 8 * kPerUnit + 1;

struct Node {
    long double ai, aip, bi, bip;
};

struct AsymCoeffs {
    std::array<double, 40> u, v;
    AsymCoeffs() {
        u[0] = v[0] = 1.0;
        for (int k = 1; k < 40; ++k) {
            u[k] = u[k - 1] * (6.0 * k - 5) * (6.0 * k - 3) * (6.0 * k - 1) / ((2.0 * k - 1) * 216.0 * k);
            v[k] = -(6.0 * k + 1) / (6.0 * k - 1) * u[k];
        }
    }
};

const AsymCoeffs& asym() {
    static const AsymCoeffs c;
    return c;
}

// Advance (y, y') of y'' = t y from t0 to t0 + h by a Taylor polynomial.
void step(long double t0, long double h, long double& y, long double& yp) {
    // coefficients c_m of y(t0 + s) = sum c_m s^m
    long double c[48];
    c[0] = y;
    c[1] = yp;
    c[2] = t0 * c[0] / 2.0L;
    for (int m = 3; m < 48; ++m) c[m] = (t0 * c[m - 2] + c[m - 3]) / (m * (m - 1.0L));
    long double v = 0.0L, d = 0.0L;
    for (int m = 47; m >= 1; --m) {
        v = v * h + c[m];
        d = d * h + m * c[m];
    }
    v = v * h + c[0];
    y = v;
    yp = d;
}

struct Table {
    std::array<Node, kNodes> n{};
    Table() {
        const long double h = 1.0L / kPerUnit;
        const long double ai0 = 0.355028053887817239260063186004L;
        const long double aip0 = -0.258819403792806798405183560189L;
        const long double bi0 = 0.614926627446000735150922369094L;
        const long double bip0 = 0.448288357353826357914823710399L;
        const int i0 = 8 * kPerUnit;
        n[i0] = {ai0, aip0, bi0, bip0};
        // Bi forward on t > 0 (dominant, stable)
        long double y = bi0, yp = bip0;
        for (int i = i0; i < kNodes - 1; ++i) {
            step((i - i0) * h, h, y, yp);
            n[i + 1].bi = y;
            n[i + 1].bip = yp;
        }
        // Ai on t > 0 backward from an asymptotic start at t = 12
        {
            const double ts = 12.0;
            AiryPair a = eval_airy(ts);
            long double ya = a.ai, ypa = a.aip;
            long double t = ts;
            while (t > kT + 1e-12L) {
                step(t, -h, ya, ypa);
                t -= h;
            }
            for (int i = kNodes - 1; i > i0; --i) {
                n[i].ai = ya;
                n[i].aip = ypa;
                step((i - i0) * h, -h, ya, ypa);
            }
        }
        // t < 0: both oscillate, march from the exact values at zero
        long double ya = ai0, ypa = aip0, yb = bi0, ypb = bip0;
        for (int i = i0; i > 0; --i) {
            long double t = (i - i0) * h;
            step(t, -h, ya, ypa);
            step(t, -h, yb, ypb);
            n[i - 1] = {ya, ypa, yb, ypb};
        }
    }
};

const Table& table() {
    static const Table t;
    return t;
}

AiryPair asym_positive_scaled(double t) {
    const auto& c = asym();
    const double z = 2.0 / 3.0 * t * std::sqrt(t);
    const double t14 = std::sqrt(std::sqrt(t));
    double sa = 0, sap = 0, sb = 0, sbp = 0, zk = 1.0, last = 1e300;
    for (int k = 0; k < 40; ++k) {
        double tu = c.u[k] / zk, tv = c.v[k] / zk;
        if (std::fabs(tu) > last) break;
        last = std::fabs(tu);
        double sg = (k % 2) ? -1.0 : 1.0;
        sa += sg * tu;
        sap += sg * tv;
        sb += tu;
        sbp += tv;
        if (last < 1e-17) break;
        zk *= z;
    }
    const double rpi = 1.0 / std::sqrt(std::numbers::pi);
    return {t, 0.5 * rpi / t14 * sa, -0.5 * rpi * t14 * sap, rpi / t14 * sb, rpi * t14 * sbp};
}

AiryPair asym_negative(double t) {
    const auto& c = asym();
    const double x = -t;
    const double z = 2.0 / 3.0 * x * std::sqrt(x);
    const double x14 = std::sqrt(std::sqrt(x));
    double ue = 0, uo = 0, ve = 0, vo = 0, zk = 1.0, last = 1e300;
    for (int k = 0; k < 40; ++k) {
        double tu = c.u[k] / zk;
        if (std::fabs(tu) > last) break;
        last = std::fabs(tu);
        double tv = c.v[k] / zk;
        int m = k / 2;
        double sg = (m % 2) ? -1.0 : 1.0;
        if (k % 2 == 0) {
            ue += sg * tu;
            ve += sg * tv;
        } else {
            uo += sg * tu;
            vo += sg * tv;
        }
        if (last < 1e-17) break;
        zk *= z;
    }
    const double ph = z - 0.25 * std::numbers::pi;
    const double cs = std::cos(ph), sn = std::sin(ph);
    const double rpi = 1.0 / std::sqrt(std::numbers::pi);
    AiryPair r;
    r.t = t;
    r.ai = rpi / x14 * (cs * ue + sn * uo);
    r.aip = rpi * x14 * (sn * ve - cs * vo);
    r.bi = rpi / x14 * (-sn * ue + cs * uo);
    r.bip = rpi * x14 * (cs * ve + sn * vo);
    return r;
}

AiryPair from_table(double t) {
    const auto& tb = table();
    int i = static_cast<int>(std::lround((t + kT) * kPerUnit));
    if (i < 0) i = 0;
    if (i > kNodes - 1) i = kNodes - 1;
    const long double ti = -kT + static_cast<long double>(i) / kPerUnit;
    const long double h = static_cast<long double>(t) - ti;
    long double a = tb.n[i].ai, ap = tb.n[i].aip, b = tb.n[i].bi, bp = tb.n[i].bip;
    step(ti, h, a, ap);
    step(ti, h, b, bp);
    return {t, static_cast<double>(a), static_cast<double>(ap), static_cast<double>(b),
            static_cast<double>(bp)};
}

}  // namespace

AiryPair eval_airy_scaled(double t) {
    if (t >= kT) return asym_positive_scaled(t);
    if (t <= -kT) return asym_negative(t);
    AiryPair r = from_table(t);
    if (t > 0) {
        const double z = 2.0 / 3.0 * t * std::sqrt(t);
        const double e = std::exp(z);
        r.ai *= e;
        r.aip *= e;
        r.bi /= e;
        r.bip /= e;
    }
    return r;
}

AiryPair eval_airy(double t) {
    if (t <= -kT) return asym_negative(t);
    if (t < kT) return from_table(t);
    AiryPair r = asym_positive_scaled(t);
    const double z = 2.0 / 3.0 * t * std::sqrt(t);
    if (z > 709.0) throw OverflowError("Bi overflows beyond t ~ 104");
    const double e = std::exp(z);
    r.ai /= e;
    r.aip /= e;
    r.bi *= e;
    r.bip *= e;
    return r;
}

}  // namespace glancing::specfun
