#include <cmath>
#include <stdexcept>

#include "detail/turning_impl.hpp"
#include "glancing/specfun.hpp"

namespace glancing::specfun {

namespace detail {

Turning turning(double z) {
    auto t = turning_generic<double>(z);
    return {t.zeta, t.ratio, -1.0 / (z * std::sqrt(t.ratio))};
}

double turning_phase(double z) { return turning_generic<double>(z).phase; }

}  // namespace detail

TurningMap turning_map(double z) {
    if (!(z > 0.0)) throw std::domain_error("turning_map: z must be positive");
    if (!(z < Z_MAX)) throw std::domain_error("turning_map: z beyond Z_MAX");
    auto t = detail::turning(z);
    return {z, t.zeta, t.dzeta};
}

}  // namespace glancing::specfun
