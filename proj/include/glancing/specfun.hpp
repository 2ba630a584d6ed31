#pragma once

#include <stdexcept>
#include <string>

namespace glancing::specfun {

// Raised when an unscaled value would leave the double range.  Callers are
// expected to retry through eval_bessel_scaled.
struct OverflowError : std::overflow_error {
    using std::overflow_error::overflow_error;
};

enum class Method { Auto, Series, Uniform };

Method parse_method(const std::string& s);

inline constexpr double NU_UNIFORM_MIN = 30.0;   // auto switches to the uniform path here
inline constexpr double NU_UNIFORM_FLOOR = 10.0; // explicit method=uniform accepted from here
inline constexpr double Z_MAX = 10.0;

struct CylinderPair {
    double nu, x;
    double j, jp, y, yp;
};

// J_nu(nu z) = mj * exp(-L), J'_nu(nu z) = mjp * exp(-L),
// Y_nu(nu z) = my * exp(+L), Y'_nu(nu z) = myp * exp(+L).
// L = (2/3) nu zeta^{3/2} for z < 1 - nu^{-2/3}, zero otherwise.
struct ScaledPair {
    double nu, z;
    double mj, mjp, my, myp;
    double L;
};

struct TurningMap {
    double z, zeta, dzeta;
};

struct AiryPair {
    double t, ai, aip, bi, bip;
};

struct Envelope {
    double nu, z, L;           // the envelopes refer to the scaled mantissas
    double envJ, envY, envH;   // the bound shapes without constants
    double lowJ, highJ, lowY, highY, lowH, highH;
};

CylinderPair eval_bessel_pair(double nu, double x, Method m = Method::Auto);
ScaledPair eval_bessel_scaled(double nu, double z);
TurningMap turning_map(double z);
AiryPair eval_airy(double t);
Envelope envelope_bounds(double nu, double z, double c_lo = 0.1, double c_hi = 10.0);
double wronskian_defect(double nu, double x);

// Largest relative difference between the series and the uniform path at
// x = nu z.  Below the turning point J, J', Y, Y' are compared one by one;
// above it the J and Y parts are measured against |H| and the derivatives
// against |H'|, since J and Y have zeros there.
double path_agreement(double nu, double z);

// Lower-level access used by the Green kernel: values in log-scaled form for
// an arbitrary argument.  J = j * exp(ej), Y = y * exp(ey), derivatives share
// the exponent of their function.
struct BesselLog {
    double j, jp, ej;
    double y, yp, ey;
};
BesselLog bessel_log(double nu, double x, Method m = Method::Auto);

// Airy functions with the exponential factor removed for t > 0:
// ai, aip carry exp(+(2/3) t^{3/2}) and bi, bip carry exp(-(2/3) t^{3/2}).
// For t <= 0 the values are unscaled.
AiryPair eval_airy_scaled(double t);

namespace detail {
// The two independent evaluation paths, in log-scaled form.
BesselLog series_path(double nu, double x);
BesselLog uniform_path(double nu, double x);

// zeta(z) together with the smooth ratio zeta / (1 - z^2); valid for any z > 0.
struct Turning {
    double zeta, ratio, dzeta;
};
Turning turning(double z);
// (2/3)|zeta|^{3/2}
double turning_phase(double z);

// Uniform-expansion coefficient sums at z, k = 0..3, already weighted by nu^{-2k}.
struct UniformSums {
    double A, B, C, D;
};
UniformSums uniform_sums(double nu, double z);
// Individual coefficient functions A_k, B_k, C_k, D_k (k = 0..3) at z.
void uniform_coeffs(double z, double A[4], double B[4], double C[4], double D[4]);
void uniform_coeffs_direct(double z, double A[4], double B[4], double C[4], double D[4]);
}  // namespace detail

}  // namespace glancing::specfun
