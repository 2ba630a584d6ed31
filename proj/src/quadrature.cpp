#include "glancing/quadrature.hpp"

#include <stdexcept>

#include <boost/math/quadrature/gauss.hpp>

namespace glancing::quad {
namespace {

template <unsigned N>
Rule build() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    Rule r;
    // boost stores the non-negative half
    for (std::size_t i = a.size(); i-- > 0;) {
        if (a[i] == 0.0) continue;
        r.x.push_back(-a[i]);
        r.w.push_back(w[i]);
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
        r.x.push_back(a[i]);
        r.w.push_back(w[i]);
    }
    return r;
}

}  // namespace

const Rule& gauss_legendre(int n) {
    static const Rule r4 = build<4>(), r8 = build<8>(), r16 = build<16>(), r20 = build<20>(), r32 = build<32>();
    switch (n) {
        case 4: return r4;
        case 8: return r8;
        case 16: return r16;
        case 20: return r20;
        case 32: return r32;
        default: throw std::invalid_argument("unsupported Gauss-Legendre order");
    }
}

}  // namespace glancing::quad
