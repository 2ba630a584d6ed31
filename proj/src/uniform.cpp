// Uniform large-order expansion of J, Y and their derivatives in terms of
// Airy functions of nu^{2/3} zeta, carried to four terms (k = 0..3).
//
// The coefficient functions A_k, B_k, C_k, D_k are built from the Debye
// polynomials.  Their closed forms cancel catastrophically near z = 1, so on
// [ZLO, ZHI] they are replaced by Chebyshev interpolants computed once in
// 50-digit arithmetic.
#include <array>
#include <cmath>
#include <mutex>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "detail/turning_impl.hpp"
#include "glancing/specfun.hpp"

namespace glancing::specfun::detail {
namespace {

using mp = boost::multiprecision::cpp_bin_float_50;

constexpr int kDeg = 8;     // Debye polynomials U_0..U_7, V_0..V_7
constexpr int kPow = 3 * kDeg;
constexpr double ZLO = 0.5, ZHI = 1.6;
constexpr int kCheb = 44;

template <class T>
struct Debye {
    // U[k][m] is the coefficient of p^m in U_k(p)
    std::array<std::array<T, kPow>, kDeg> U{}, V{};
    std::array<T, kDeg> u{}, v{};

    Debye() {
        for (auto& row : U) row.fill(T(0));
        for (auto& row : V) row.fill(T(0));
        U[0][0] = T(1);
        V[0][0] = T(1);
        for (int k = 0; k + 1 < kDeg; ++k) {
            std::array<T, kPow> d{}, a{}, b{};
            d.fill(T(0));
            a.fill(T(0));
            b.fill(T(0));
            for (int m = 1; m < kPow; ++m) d[m - 1] = T(m) * U[k][m];  // U_k'
            // 1/2 p^2 (1 - p^2) U_k'
            for (int m = 0; m + 4 < kPow; ++m) {
                a[m + 2] += T(0.5) * d[m];
                a[m + 4] -= T(0.5) * d[m];
            }
            // 1/8 int_0^p (1 - 5 t^2) U_k
            for (int m = 0; m + 3 < kPow; ++m) {
                a[m + 1] += U[k][m] / (T(8) * T(m + 1));
                a[m + 3] -= T(5) * U[k][m] / (T(8) * T(m + 3));
            }
            U[k + 1] = a;
            // V_{k+1} = U_{k+1} - 1/2 p (1 - p^2) U_k - p^2 (1 - p^2) U_k'
            b = a;
            for (int m = 0; m + 3 < kPow; ++m) {
                b[m + 1] -= T(0.5) * U[k][m];
                b[m + 3] += T(0.5) * U[k][m];
            }
            for (int m = 0; m + 4 < kPow; ++m) {
                b[m + 2] -= d[m];
                b[m + 4] += d[m];
            }
            V[k + 1] = b;
        }
        u[0] = v[0] = T(1);
        for (int k = 1; k < kDeg; ++k) {
            u[k] = u[k - 1] * T((6 * k - 5) * (6 * k - 3) * (6 * k - 1)) / T((2 * k - 1) * 216 * k);
            v[k] = -T(6 * k + 1) / T(6 * k - 1) * u[k];
        }
    }

    // P_m(p) for z < 1, or the real form sum c_i (-1)^i q^{m+2i} for z > 1
    T eval(const std::array<T, kPow>& c, int m, const T& x, bool alternate) const {
        T x2 = x * x, acc(0);
        for (int e = 3 * m; e >= m; e -= 2) {
            T ce = c[e];
            if (alternate && ((e - m) / 2) % 2) ce = -ce;
            acc = acc * x2 + ce;
        }
        for (int e = 0; e < m; ++e) acc *= x;
        return acc;
    }
};

template <class T>
const Debye<T>& debye() {
    static const Debye<T> d;
    return d;
}

template <class T>
void coeffs_generic(const T& z, T A[4], T B[4], T C[4], T D[4]) {
    using std::pow;
    using std::sqrt;
    const auto& P = debye<T>();
    auto tg = turning_generic<T>(z);
    const T one(1);
    const bool outer = z > one;
    const T x = outer ? one / sqrt((z - one) * (z + one)) : one / sqrt((one - z) * (one + z));
    const T a = outer ? -tg.zeta : tg.zeta;  // |zeta|
    const T ra = sqrt(a);
    const T a32 = a * ra;
    std::array<T, 2 * kDeg> Uv, Vv;
    for (int m = 0; m < kDeg; ++m) {
        Uv[m] = P.eval(P.U[m], m, x, outer);
        Vv[m] = P.eval(P.V[m], m, x, outer);
    }
    std::array<T, kDeg> w;  // (3/2)^j |zeta|^{-3j/2}
    w[0] = one;
    for (int j = 1; j < kDeg; ++j) w[j] = w[j - 1] * T(1.5) / a32;
    for (int k = 0; k < 4; ++k) {
        T sa(0), sb(0), sc(0), sd(0);
        for (int j = 0; j <= 2 * k + 1; ++j) {
            const T sg = (outer && ((j + k) % 2)) ? -one : one;
            if (j <= 2 * k) {
                sa += sg * w[j] * P.v[j] * Uv[2 * k - j];
                sd += sg * w[j] * P.u[j] * Vv[2 * k - j];
            }
            sb += sg * w[j] * P.u[j] * Uv[2 * k - j + 1];
            sc += sg * w[j] * P.v[j] * Vv[2 * k - j + 1];
        }
        A[k] = sa;
        D[k] = sd;
        if (outer) {
            B[k] = sb / ra;
            C[k] = -sc * ra;
        } else {
            B[k] = -sb / ra;
            C[k] = -sc * ra;
        }
    }
}

// Chebyshev interpolants of the 16 coefficient functions on [ZLO, ZHI].
struct ChebFits {
    std::array<std::array<double, kCheb>, 16> c{};

    ChebFits() {
        std::array<std::array<mp, kCheb>, 16> f;
        const mp pi = boost::math::constants::pi<mp>();
        for (int i = 0; i < kCheb; ++i) {
            mp th = pi * (mp(i) + mp(0.5)) / mp(kCheb);
            mp zz = mp(0.5) * (ZHI + ZLO) + mp(0.5) * (ZHI - ZLO) * cos(th);
            mp A[4], B[4], C[4], D[4];
            coeffs_generic<mp>(zz, A, B, C, D);
            for (int k = 0; k < 4; ++k) {
                f[k][i] = A[k];
                f[4 + k][i] = B[k];
                f[8 + k][i] = C[k];
                f[12 + k][i] = D[k];
            }
        }
        for (int s = 0; s < 16; ++s) {
            for (int n = 0; n < kCheb; ++n) {
                mp acc(0);
                for (int i = 0; i < kCheb; ++i) {
                    mp th = pi * (mp(i) + mp(0.5)) / mp(kCheb);
                    acc += f[s][i] * cos(mp(n) * th);
                }
                acc *= mp(2) / mp(kCheb);
                if (n == 0) acc /= 2;
                c[s][n] = static_cast<double>(acc);
            }
        }
    }

    double eval(int s, double z) const {
        const double t = (2.0 * z - (ZHI + ZLO)) / (ZHI - ZLO);
        double b1 = 0, b2 = 0;
        for (int n = kCheb - 1; n >= 1; --n) {
            double b0 = 2.0 * t * b1 - b2 + c[s][n];
            b2 = b1;
            b1 = b0;
        }
        return t * b1 - b2 + c[s][0];
    }
};

const ChebFits& cheb() {
    static const ChebFits f;
    return f;
}

}  // namespace

void uniform_coeffs_direct(double z, double A[4], double B[4], double C[4], double D[4]) {
    coeffs_generic<double>(z, A, B, C, D);
}

void uniform_coeffs(double z, double A[4], double B[4], double C[4], double D[4]) {
    if (z < ZLO || z > ZHI) {
        coeffs_generic<double>(z, A, B, C, D);
        return;
    }
    const auto& f = cheb();
    for (int k = 0; k < 4; ++k) {
        A[k] = f.eval(k, z);
        B[k] = f.eval(4 + k, z);
        C[k] = f.eval(8 + k, z);
        D[k] = f.eval(12 + k, z);
    }
    A[0] = 1.0;
    D[0] = 1.0;
}

UniformSums uniform_sums(double nu, double z) {
    double A[4], B[4], C[4], D[4];
    uniform_coeffs(z, A, B, C, D);
    const double r = 1.0 / (nu * nu);
    UniformSums s{};
    s.A = A[0] + r * (A[1] + r * (A[2] + r * A[3]));
    s.B = B[0] + r * (B[1] + r * (B[2] + r * B[3]));
    s.C = C[0] + r * (C[1] + r * (C[2] + r * C[3]));
    s.D = D[0] + r * (D[1] + r * (D[2] + r * D[3]));
    return s;
}

BesselLog uniform_path(double nu, double x) {
    const double z = x / nu;
    const Turning tm = turning(z);
    const double n13 = std::cbrt(nu);
    const double n23 = n13 * n13;
    const double t = n23 * tm.zeta;
    const AiryPair ai = eval_airy_scaled(t);
    double L = 0.0;
    if (t > 0) L = nu * turning_phase(z);
    const UniformSums s = uniform_sums(nu, z);
    const double phi = std::sqrt(std::sqrt(4.0 * tm.ratio));
    const double i13 = 1.0 / n13, i23 = 1.0 / n23;
    const double i43 = i13 / nu, i53 = i23 / nu;
    BesselLog r;
    r.j = phi * (ai.ai * i13 * s.A + ai.aip * i53 * s.B);
    r.y = -phi * (ai.bi * i13 * s.A + ai.bip * i53 * s.B);
    const double g = 2.0 / (z * phi);
    r.jp = -g * (ai.ai * i43 * s.C + ai.aip * i23 * s.D);
    r.yp = g * (ai.bi * i43 * s.C + ai.bip * i23 * s.D);
    r.ej = -L;
    r.ey = L;
    return r;
}

}  // namespace glancing::specfun::detail
