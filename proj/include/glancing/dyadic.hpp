#pragma once

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace glancing::dyadic {

using cd = std::complex<double>;

struct AliasingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// C-infinity step: 0 for u <= 0, 1 for u >= 1.
double smooth_step(double u);

// Master profile: 1 on [0, PHI_IN], 0 on [PHI_OUT, inf).
inline constexpr double PHI_IN = 0.75;
inline constexpr double PHI_OUT = 1.375;
double phi(double zeta);

// Coefficient low-pass: same step, 1 on [0, 1/2], 0 beyond 2 (in units of the cutoff).
// The wider transition keeps the kernel's polynomial tail constant small.
inline constexpr double LOWPASS_IN = 0.5;
inline constexpr double LOWPASS_OUT = 2.0;
double lowpass(double zeta);

struct LPSequence {
    double beta0(double zeta) const;
    double beta1(double zeta) const;
    double beta(int l, double zeta) const;  // beta_1(2^{1-l} zeta) for l >= 1
    // largest l whose beta_l can be nonzero at zeta
    int last_index(double zeta) const;
};

double lp_partition_defect(const LPSequence& seq, const std::vector<double>& zetas);

class CutoffLadder {
public:
    CutoffLadder(double lambda, double alpha);
    double lambda() const { return lambda_; }
    double alpha() const { return alpha_; }
    int J() const { return J_; }

    double chi(int j, double xn) const;   // 1 on |x_n| <= 2^{-j}, 0 off |x_n| <= 2^{1-j}
    double psi(int j, double xn) const;   // chi_j - chi_{j+1}
    double Phi(int j, double xin) const;  // phi(2^{j/2} |xi_n| / lambda); Phi_0 is taken as 1
    double Gamma(int j, double xin) const;        // 1 <= j <= J
    double Gamma_tilde(int j, double xin) const;  // sum_{l > j} Gamma_l = Phi_j

    // |xi_n| window outside which Gamma_j vanishes: [lo, hi]
    std::pair<double, double> gamma_window(int j) const;

private:
    double lambda_, alpha_;
    int J_;
};

// ---------------------------------------------------------------- lattice

// Periodic lattice; the last axis is x_n in [-period_n/2, period_n/2).
// dim = 1: only x_n.  dim = 2: (x', x_n) with x' of period period_t.
struct Lattice {
    int dim = 1;
    int nt = 1;  // points along x' (1 when dim = 1)
    int nn = 0;  // points along x_n
    double period_t = 1.0;
    double period_n = 8.0;
    double hn() const { return period_n / nn; }
    double xn(int k) const { return -0.5 * period_n + hn() * k; }
    // angular frequency of FFT bin k along x_n
    double xin(int k) const;
    double xit(int k) const;
    std::size_t size() const { return static_cast<std::size_t>(nt) * static_cast<std::size_t>(nn); }
};

// Smallest power-of-two lattice whose x_n Nyquist frequency is >= oversample * 2 lambda.
Lattice make_lattice(int dim, double lambda, double period_n = 8.0, double oversample = 1.25);

struct Field {
    Lattice lat;
    std::vector<cd> v;  // index = it * nn + k
};

// Random field with Fourier support in 0.75 lambda <= |xi| <= 1.25 lambda.
Field random_band_limited(const Lattice& lat, double lambda, unsigned long long seed);

double l2_norm(const Field& f);

struct Decomposition {
    // v[0] = psi_0 u; v[j] = Phi_j(D_n)(psi_j u) for 1 <= j < J; v[J] = Gamma_J(D_n)(chi_J u)
    std::vector<Field> v;
    // w[j] = Gamma_j(D_n)(chi_j u) for 1 <= j < J; w[0] unused
    std::vector<Field> w;
    double recomposition_defect = 0.0;   // ||chi_0 u - sum w - sum v|| / ||u||
    std::vector<double> leakage_v, leakage_w;  // relative energy outside the declared |xi_n| windows
};

Decomposition decompose(const Field& u, const CutoffLadder& ladder);

// ------------------------------------------------------- coefficient model

// g(x) = 1 + c0 |sin(x/2)| on a 2 pi periodic lattice, i.e. 1 + c0 eta(x)|x|
// near the kink with eta(x) = sin(x/2)/x analytic.
struct CoeffModel {
    double c0 = 0.05;
    int n = 1 << 15;
    double x(int k) const;  // in [-pi, pi)
    double g(double x) const;
    double dg(double x) const;  // 0 at the kink
};

struct TruncationReport {
    double cutoff = 0.0;
    double sup_diff = 0.0, sup_d1 = 0.0, sup_d2 = 0.0;
    // normalized constants (0 when c0 = 0)
    double c_diff = 0.0;   // sup|g - g_K| K / c0
    double c_d1 = 0.0;     // sup|g_K'| / c0
    double c_d2 = 0.0;     // sup|g_K''| / (c0 K)
    double c_wdiff = 0.0;  // sup|g - g_K| K <Kx>^M / c0
    double c_wd1 = 0.0;    // sup|(g - g_K)'| <Kx>^M / c0
    double c_wd2 = 0.0;    // sup|g_K''| / (c0 (1 + K <Kx>^{-M}))
    std::vector<double> gk;
};

TruncationReport truncate_coeff(const CoeffModel& m, double cutoff, int M = 3);

enum class Parity { Even, Odd };
struct ParityError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct Samples {
    double x0 = 0.0, h = 0.0;
    std::vector<double> v;
};

// f sampled at x_n = k h, k >= 0  ->  samples at x_n = k h, -K <= k <= K.
Samples even_extend(const std::vector<double>& f, double h, Parity parity);

// --------------------------------------------------------- exponent calculus

enum class PairClass { Subcritical, Critical, Inadmissible };
std::string to_string(PairClass c);

inline constexpr double P_INF = std::numeric_limits<double>::infinity();

struct ExponentBook {
    int n = 3;
    double p = 4, q = 4;
    double s = 0.0;      // from 2/p + n/q = n/2 - s
    double sigma = 0.0;
    double alpha = 0.6;
    double delta = 0.0;  // 1 - 3 alpha / 2
    PairClass cls = PairClass::Subcritical;
    bool alpha_condition = false;  // 1/(3 alpha) - 1/2 < sigma
};

ExponentBook exponent_book(int n, double p, double q, double alpha);

// theta_j = 2^{-j/2}, margin_j = lambda theta_j^3 / lambda^delta
double theta(int j);

struct ThetaCheck {
    bool ok = false;
    double min_margin = 0.0;
    std::vector<double> margins;  // j = 0..J
};
ThetaCheck theta_calculus_check(double lambda, double alpha);

}  // namespace glancing::dyadic
