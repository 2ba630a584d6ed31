#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "glancing/verify.hpp"

namespace glancing::wavepacket {

using cd = std::complex<double>;
using Vec = std::array<double, 2>;  // only the first n entries are used

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct AliasingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct CostError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StepUnderflow : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------- window

// ghat(xi) = c exp(-1 / (1 - |xi/delta0|^2)) inside the ball, normalized so
// that ||ghat||_2 = 1, i.e. ||g||_2 = (2 pi)^{-n/2}.  g is sampled on a
// centered lattice x_k = (k - N/2) h by an inverse FFT of ghat.
struct Window {
    int n = 1;
    double delta0 = 0.125;
    double c = 0.0;
    int N = 0;           // points per axis
    double h = 0.0;      // x spacing
    double dxi = 0.0;    // frequency spacing 2 pi / (N h)
    std::vector<double> g, ghat;  // N^n samples, row-major
    double x(int k) const { return (k - N / 2) * h; }
    double ghat_radial(double r) const;
    double l2_norm() const;  // lattice norm of the g samples
};

Window make_window(int n, double delta0 = 0.125);

// ---------------------------------------------------------------- transform

// Samples of a period-P function on x_k = -P/2 + k P / N (each axis).
struct SpatialField {
    int n = 1;
    double period = 1.0;
    int N = 0;
    std::vector<cd> v;
    double x(int k) const { return -0.5 * period + period * k / N; }
    double l2_norm() const;
};

// Lattice values of T f.  xi lies on the dual lattice 2 pi m / period; only
// the indices m where the field can be nonzero are stored.  x is the full
// torus lattice with nx points per axis.
struct PhaseSpaceField {
    int n = 1;
    double mu = 0.0;
    double period = 1.0;
    int nx = 0;
    std::vector<std::array<int, 2>> m;
    std::vector<cd> v;  // [m][x], x row-major
    double hx() const { return period / nx; }
    double dxi() const;
    double x(int j) const { return -0.5 * period + hx() * j; }
    std::size_t cells() const;  // nx^n
    double l2_norm() const;
};

struct TransformOptions {
    int xi_per_radius = 8;  // xi-lattice points per window radius delta0 mu^{1/2}; >= 4
    int threads = 1;
};

// Torus period whose dual step is delta0 mu^{1/2} / xi_per_radius.
double torus_period(const Window& w, double mu, int xi_per_radius = 8);
// Smallest 2^a 3^b 5^c point count with period / N <= mu^{-1/2} / 4.
int x_points(double period, double mu);

PhaseSpaceField wp_transform(const Window& w, const SpatialField& f, double mu, const TransformOptions& opt = {});
// Adjoint of wp_transform for the lattice inner product, returned on n_out points per axis.
SpatialField wp_adjoint(const Window& w, const PhaseSpaceField& F, int n_out, const TransformOptions& opt = {});

// Lattice inner product sum hx^n dxi^n F conj(G).
cd field_dot(const PhaseSpaceField& F, const PhaseSpaceField& G);

// Random input whose Fourier coefficients are iid complex normal on the
// lattice points inside the ball |xi - center| <= radius, zero elsewhere.
SpatialField random_band_limited(int n, double period, int N, const Vec& center, double radius, std::uint64_t seed);

// ---------------------------------------------------------------- symbol

// q = (1 + c0 m(x_n)) |xi'|^2 / mu + xi_n^2 / mu with m(t) = sqrt(t^2 + k^2) - k,
// k = mu^{-1/2}.  For n = 1 there is no xi' and q is free.
struct SymbolModel {
    int n = 2;
    double mu = 64.0;
    double c0 = 0.0;
    double kappa = 0.125;

    double q(const Vec& x, const Vec& xi) const;
    Vec dq_dx(const Vec& x, const Vec& xi) const;
    Vec dq_dxi(const Vec& x, const Vec& xi) const;
    // Second derivatives, blocks [xx, xxi, xixi] each n x n row-major in a 2x2 array.
    void hessian(const Vec& x, const Vec& xi, std::array<double, 4>& qxx, std::array<double, 4>& qxxi,
                 std::array<double, 4>& qxixi) const;
};

SymbolModel make_symbol(int n, double mu, double c0);

// ---------------------------------------------------------------- flow

struct PhasePoint {
    Vec x{}, xi{};
};

// Dormand-Prince 5(4) solution with the standard continuous extension.
// The state optionally carries the 2n x 2n variational matrix.
class Trajectory {
public:
    int n() const { return n_; }
    double t0() const { return t0_; }
    double t1() const { return t1_; }
    bool has_jacobian() const { return jac_; }
    std::size_t steps() const { return ts_.size() - 1; }
    const std::vector<double>& times() const { return ts_; }

    PhasePoint at(double t) const;
    // d(state at t) / d(initial state), row-major 2n x 2n
    std::vector<double> jacobian(double t) const;
    double jacobian_det(double t) const;

private:
    friend Trajectory hamiltonian_flow(const SymbolModel&, const Vec&, const Vec&, double, double, double, bool);
    std::vector<double> dense(double t) const;
    int n_ = 2, dim_ = 0;
    double t0_ = 0, t1_ = 0;
    bool jac_ = false;
    std::vector<double> ts_;
    std::vector<std::vector<double>> ys_;
    std::vector<std::vector<double>> rc_;  // per step: 5 * dim continuous-extension coefficients
};

// Integrates Hamilton's equations from (x0, xi0) at time t0 to time t1 (either direction).
Trajectory hamiltonian_flow(const SymbolModel& sym, const Vec& x0, const Vec& xi0, double t0, double t1, double tol,
                            bool jacobian = true);

// Theta_{r,t}(x, xi): the time-r point of the trajectory through (x, xi) at time t.
PhasePoint flow_map(const SymbolModel& sym, double r, double t, const Vec& x, const Vec& xi, double tol);

// psi = integral over [t1, t0] of q - xi . d_xi q along the trajectory, by
// 8-point Gauss-Legendre on every step split into `refine` pieces.  For a
// trajectory started at (x, xi) at time t and run to 0 this is psi(t, x, xi).
double action_phase(const Trajectory& tr, const SymbolModel& sym, int refine = 1);

// ---------------------------------------------------------------- parametrix

struct ParametrixResult {
    SpatialField u;
    double norm_ratio = 0.0;     // ||u|| / ||f||
    double lost_fraction = 0.0;  // energy of the transported field outside the stored xi set
    bool support_warning = false;
};

struct ParametrixOptions {
    TransformOptions transform{};
    double tol = 1e-10;
    double lost_warn = 1e-6;
};

// T*[exp(-i psi(t)) (T f) o Theta_{0,t}] on the lattice of T f.
ParametrixResult parametrix_evolve(const Window& w, const SpatialField& f, const SymbolModel& sym, double t,
                                   const ParametrixOptions& opt = {});

// ---------------------------------------------------------------- kernel

// Autocorrelation g * g as a radial table, with cubic Hermite lookup.
struct Autocorrelation {
    int n = 2;
    double delta0 = 0.125;
    double step = 0.0, w_max = 0.0;
    std::vector<double> v, dv;
    double operator()(double w) const;
};
Autocorrelation make_autocorrelation(const Window& w);

// Frequency cutoff for the kernel: 1 on 2^{-1/2} mu <= |zeta| <= 2^{3/2} mu,
// |zeta_n| <= mu theta, falling to 0 across a 10% smooth margin outside each edge.
double upsilon(double mu, double theta, const Vec& zeta);

struct KernelOptions {
    double eps = 0.5;                    // slab length, |t - r| <= eps
    double points_per_oscillation = 6.0;
    double budget = 4e7;                 // maximum quadrature nodes per evaluation
};

// K(r, x; t, y) for n = 2.  The z integral is done in closed form through g * g,
// which is exact when the flow is a translation in z, i.e. for the free symbol.
class PacketKernel {
public:
    PacketKernel(const Window& w, const SymbolModel& sym, double theta, KernelOptions opt = {});
    cd operator()(double r, const Vec& x, double t, const Vec& y) const;
    long last_nodes() const { return nodes_; }
    double mu() const { return mu_; }
    double theta() const { return theta_; }

private:
    Autocorrelation ac_;
    double mu_, theta_;
    KernelOptions opt_;
    mutable long nodes_ = 0;
};

cd packet_kernel(const SymbolModel& sym, double mu, double theta, double r, const Vec& x, double t, const Vec& y);

struct DecayRow {
    double dt = 0.0;
    double sup_k = 0.0;
    int regime = 0;  // 0: dt <= 1/mu, 1: up to 1/(mu theta^2), 2: beyond
};

struct DecayScan {
    double mu = 0.0, theta = 0.0;
    std::vector<DecayRow> rows;
    std::array<verify::FitResult, 3> fit{};
    std::array<bool, 3> has_fit{};  // fewer than 3 samples in a regime leaves it unfitted
    double inner_level = 0.0;       // max sup_k over regime 0, divided by mu^2 theta
};

struct ScanOptions {
    int times = 24;
    int pairs = 6;          // random packet centres per time, besides y = x and the envelope peaks
    std::uint64_t seed = 1;
    int threads = 1;
    double dt_min = 0.1;    // in units of 1/mu
    KernelOptions kernel{};
};

DecayScan kernel_decay_scan(const Window& w, const SymbolModel& sym, double theta, const ScanOptions& opt = {});

// ---------------------------------------------------------------- checks

// T then T* on one seeded band-limited input.  The lattice per n is the one
// the validation suite uses (n = 1: delta0 = 1/8, 8 xi points per radius;
// n = 2: delta0 = 1/4, 5 per radius).
struct TransformCheck {
    double isometry = 0.0;        // | ||T f|| / ||f|| - 1 |
    double reconstruction = 0.0;  // ||T* T f - f|| / ||f||
};
TransformCheck transform_check(int n, double mu, std::uint64_t seed, int threads = 1);

// One seeded trajectory of sym from t = 0 to t = 1: x uniform in [-1, 1]^n,
// |xi| uniform in [mu/2, 2 mu] with a uniform direction.
struct FlowCheck {
    double energy_drift = 0.0;  // |q(end) - q(start)| / q(start)
    double det_defect = 0.0;    // |det D Theta - 1| at t = 1
    double translation = 0.0;   // |Theta_{r,t} - Theta_{0,t-r}| with (r, t) = (0.3, 1.1), x and xi / mu
};
FlowCheck flow_check(const SymbolModel& sym, std::uint64_t seed, std::uint64_t stream, double tol = 1e-10);

}  // namespace glancing::wavepacket
