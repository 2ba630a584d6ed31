#pragma once

// zeta(z) for the uniform Bessel expansion, generic in the real type so the
// coefficient fits can run in extended precision.

#include <cmath>
#include <limits>

namespace glancing::specfun::detail {

template <class T>
struct TurningT {
    T zeta;   // signed, positive for z < 1
    T ratio;  // zeta / (1 - z^2) > 0, smooth through z = 1
    T phase;  // (2/3)|zeta|^{3/2}
};

template <class T>
TurningT<T> turning_generic(const T& z) {
    using std::abs;
    using std::atan;
    using std::log;
    using std::pow;
    using std::sqrt;
    const T one(1);
    const T eps = std::numeric_limits<T>::epsilon();
    const T threshold(0.125);
    TurningT<T> r;
    if (z == one) {
        r.zeta = T(0);
        r.ratio = pow(T(0.5), T(2) / T(3));
        r.phase = T(0);
        return r;
    }
    if (z < one) {
        const T s2 = (one - z) * (one + z);
        const T s = sqrt(s2);
        T P;  // phase / s^3
        if (s < threshold) {
            // atanh(s) - s = s^3/3 + s^5/5 + ...
            P = T(0);
            T sk(1);
            for (int k = 1; k < 200; ++k) {
                T term = sk / T(2 * k + 1);
                P += term;
                if (term < eps * P) break;
                sk *= s2;
            }
            r.phase = P * s2 * s;
        } else {
            r.phase = log((one + s) / z) - s;
            P = r.phase / (s2 * s);
        }
        r.ratio = pow(T(1.5) * P, T(2) / T(3));
        r.zeta = r.ratio * s2;
    } else {
        const T w2 = (z - one) * (z + one);
        const T w = sqrt(w2);
        T P;
        if (w < threshold) {
            // w - atan(w) = w^3/3 - w^5/5 + ...
            P = T(0);
            T wk(1);
            for (int k = 1; k < 200; ++k) {
                T term = wk / T(2 * k + 1);
                if (k % 2 == 0) term = -term;
                P += term;
                if (abs(term) < eps * P) break;
                wk *= w2;
            }
            r.phase = P * w2 * w;
        } else {
            r.phase = w - atan(w);
            P = r.phase / (w2 * w);
        }
        r.ratio = pow(T(1.5) * P, T(2) / T(3));
        r.zeta = -r.ratio * w2;
    }
    return r;
}

}  // namespace glancing::specfun::detail
