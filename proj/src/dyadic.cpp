#include "glancing/dyadic.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "detail/fft.hpp"
#include "glancing/rng.hpp"

namespace glancing::dyadic {

using std::numbers::pi;

double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u), b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

double phi(double zeta) { return smooth_step((PHI_OUT - std::fabs(zeta)) / (PHI_OUT - PHI_IN)); }
double lowpass(double zeta) { return smooth_step((LOWPASS_OUT - std::fabs(zeta)) / (LOWPASS_OUT - LOWPASS_IN)); }

double LPSequence::beta0(double zeta) const { return phi(zeta); }
double LPSequence::beta1(double zeta) const { return phi(0.5 * zeta) - phi(zeta); }
double LPSequence::beta(int l, double zeta) const {
    if (l < 0) throw std::invalid_argument("beta: negative index");
    if (l == 0) return beta0(zeta);
    return beta1(std::ldexp(zeta, 1 - l));
}
int LPSequence::last_index(double zeta) const {
    // beta_l(zeta) != 0 needs 2^{1-l} zeta > PHI_IN
    if (zeta <= PHI_IN) return 0;
    return static_cast<int>(std::floor(std::log2(zeta / PHI_IN))) + 2;
}

double lp_partition_defect(const LPSequence& seq, const std::vector<double>& zetas) {
    double worst = 0.0;
    for (double z : zetas) {
        if (z < 0.0) throw std::domain_error("lp_partition_defect: zeta must be >= 0");
        double s = 0.0;
        const int L = seq.last_index(z);
        for (int l = 0; l <= L; ++l) s += seq.beta(l, z);
        worst = std::max(worst, std::fabs(s - 1.0));
    }
    return worst;
}

// ------------------------------------------------------------------ ladder

CutoffLadder::CutoffLadder(double lambda, double alpha) : lambda_(lambda), alpha_(alpha) {
    if (!(lambda >= 4.0)) throw std::domain_error("build_ladder: lambda must be >= 4");
    if (!(alpha > 0.0 && alpha < 2.0 / 3.0)) throw std::domain_error("build_ladder: alpha must lie in (0, 2/3)");
    J_ = static_cast<int>(std::floor(alpha * std::log2(lambda) + 1e-12));
    if (J_ < 1) throw std::domain_error("build_ladder: J_alpha must be >= 1");
}

double CutoffLadder::chi(int j, double xn) const { return smooth_step(2.0 - std::fabs(std::ldexp(xn, j))); }
double CutoffLadder::psi(int j, double xn) const { return chi(j, xn) - chi(j + 1, xn); }

double CutoffLadder::Phi(int j, double xin) const {
    if (j <= 0) return 1.0;
    return phi(std::exp2(0.5 * j) * std::fabs(xin) / lambda_);
}

double CutoffLadder::Gamma(int j, double xin) const {
    if (j < 1 || j > J_) throw std::out_of_range("Gamma: index outside 1..J");
    if (j == J_) return Phi(J_ - 1, xin);
    return Phi(j - 1, xin) - Phi(j, xin);
}

double CutoffLadder::Gamma_tilde(int j, double xin) const {
    if (j < 0 || j > J_) throw std::out_of_range("Gamma_tilde: index outside 0..J");
    if (j == J_) return 0.0;
    return Phi(j, xin);
}

std::pair<double, double> CutoffLadder::gamma_window(int j) const {
    const double hi = j <= 1 ? std::numeric_limits<double>::infinity() : PHI_OUT * lambda_ * std::exp2(-0.5 * (j - 1));
    const double lo = j == J_ ? 0.0 : PHI_IN * lambda_ * std::exp2(-0.5 * j);
    return {lo, hi};
}

// ----------------------------------------------------------------- lattice

namespace {
double bin_freq(int k, int n, double period) {
    const int kk = k < n / 2 ? k : k - n;
    return 2.0 * pi * kk / period;
}
int pow2_at_least(double v) {
    int n = 16;
    while (n < v) n *= 2;
    return n;
}
}  // namespace

double Lattice::xin(int k) const { return bin_freq(k, nn, period_n); }
double Lattice::xit(int k) const { return bin_freq(k, nt, period_t); }

Lattice make_lattice(int dim, double lambda, double period_n, double oversample) {
    if (dim != 1 && dim != 2) throw std::domain_error("make_lattice: dim must be 1 or 2");
    Lattice L;
    L.dim = dim;
    L.period_n = period_n;
    L.period_t = period_n;
    // Nyquist pi / h >= oversample * 2 lambda
    L.nn = pow2_at_least(oversample * 2.0 * lambda * period_n / pi);
    L.nt = dim == 2 ? pow2_at_least(oversample * 2.0 * lambda * L.period_t / pi) : 1;
    return L;
}

double l2_norm(const Field& f) {
    double s = 0.0;
    for (const cd& z : f.v) s += std::norm(z);
    const double cell = f.lat.hn() * (f.lat.dim == 2 ? f.lat.period_t / f.lat.nt : 1.0);
    return std::sqrt(s * cell);
}

Field random_band_limited(const Lattice& lat, double lambda, unsigned long long seed) {
    Field f{lat, std::vector<cd>(lat.size())};
    CounterRng rng(seed, 0x6c70);
    const double lo = 0.75 * lambda, hi = 1.25 * lambda, ramp = 0.1 * lambda;
    for (int it = 0; it < lat.nt; ++it) {
        const double xt = lat.dim == 2 ? lat.xit(it) : 0.0;
        for (int k = 0; k < lat.nn; ++k) {
            const double r = std::hypot(xt, lat.xin(k));
            const double taper = smooth_step((r - lo) / ramp) * smooth_step((hi - r) / ramp);
            // draw for every bin so the stream does not depend on the taper
            const double a = rng.normal(), b = rng.normal();
            f.v[static_cast<std::size_t>(it) * lat.nn + k] = taper * cd(a, b);
        }
    }
    if (lat.dim == 2)
        fft::two_d(f.v, lat.nt, lat.nn, +1);
    else
        fft::one_d(f.v, +1);
    const double nrm = l2_norm(f);
    if (nrm == 0.0) throw AliasingError("random_band_limited: band not resolved by the lattice");
    for (cd& z : f.v) z /= nrm;
    return f;
}

namespace {

Field spatial_multiply(const Field& u, const std::function<double(double)>& m) {
    Field out = u;
    for (int it = 0; it < u.lat.nt; ++it)
        for (int k = 0; k < u.lat.nn; ++k) out.v[static_cast<std::size_t>(it) * u.lat.nn + k] *= m(u.lat.xn(k));
    return out;
}

Field fourier_multiply(const Field& u, const std::function<double(double)>& m) {
    Field out = u;
    fft::rows(out.v, u.lat.nt, u.lat.nn, -1);
    const double inv = 1.0 / u.lat.nn;
    for (int k = 0; k < u.lat.nn; ++k) {
        const double mk = m(u.lat.xin(k)) * inv;
        for (int it = 0; it < u.lat.nt; ++it) out.v[static_cast<std::size_t>(it) * u.lat.nn + k] *= mk;
    }
    fft::rows(out.v, u.lat.nt, u.lat.nn, +1);
    return out;
}

// energy fraction of f outside lo <= |xi_n| <= hi
double leakage(const Field& f, double lo, double hi) {
    std::vector<cd> a = f.v;
    fft::rows(a, f.lat.nt, f.lat.nn, -1);
    double in = 0.0, out = 0.0;
    for (int it = 0; it < f.lat.nt; ++it)
        for (int k = 0; k < f.lat.nn; ++k) {
            const double x = std::fabs(f.lat.xin(k));
            const double e = std::norm(a[static_cast<std::size_t>(it) * f.lat.nn + k]);
            (x >= lo && x <= hi ? in : out) += e;
        }
    const double tot = in + out;
    return tot > 0.0 ? std::sqrt(out / tot) : 0.0;
}

}  // namespace

Decomposition decompose(const Field& u, const CutoffLadder& L) {
    const Lattice& lat = u.lat;
    if (lat.size() != u.v.size() || lat.nn < 16) throw std::invalid_argument("decompose: field does not match its lattice");
    if (lat.period_n < 4.0) throw std::invalid_argument("decompose: x_n period must cover |x_n| <= 2");
    if (pi / lat.hn() < 2.0 * L.lambda()) throw AliasingError("decompose: lattice does not resolve |xi_n| <= 2 lambda");
    const int J = L.J();
    const Field chi0u = spatial_multiply(u, [&](double x) { return L.chi(0, x); });
    const Field chiJu = spatial_multiply(u, [&](double x) { return L.chi(J, x); });
    // the input itself must live below 2 lambda; cutoff products are not band-limited (their
    // Gevrey-class tails are real) but every identity below is exact on the lattice
    if (leakage(u, 0.0, 2.0 * L.lambda()) > 1e-12) throw AliasingError("decompose: input has spectrum above 2 lambda");

    Decomposition d;
    d.v.resize(J + 1);
    d.w.resize(J);
    d.leakage_v.assign(J + 1, 0.0);
    d.leakage_w.assign(J, 0.0);
    d.v[0] = spatial_multiply(u, [&](double x) { return L.psi(0, x); });
    for (int j = 1; j < J; ++j) {
        const Field pj = spatial_multiply(u, [&](double x) { return L.psi(j, x); });
        d.v[j] = fourier_multiply(pj, [&](double xi) { return L.Phi(j, xi); });
        d.leakage_v[j] = leakage(d.v[j], 0.0, PHI_OUT * L.lambda() * std::exp2(-0.5 * j));
        const Field cj = spatial_multiply(u, [&](double x) { return L.chi(j, x); });
        d.w[j] = fourier_multiply(cj, [&](double xi) { return L.Gamma(j, xi); });
        const auto win = L.gamma_window(j);
        d.leakage_w[j] = leakage(d.w[j], win.first, win.second);
    }
    d.v[J] = fourier_multiply(chiJu, [&](double xi) { return L.Gamma(J, xi); });
    const auto winJ = L.gamma_window(J);
    d.leakage_v[J] = leakage(d.v[J], winJ.first, winJ.second);

    Field res = chi0u;
    for (const auto& f : d.v)
        for (std::size_t i = 0; i < res.v.size(); ++i) res.v[i] -= f.v[i];
    for (int j = 1; j < J; ++j)
        for (std::size_t i = 0; i < res.v.size(); ++i) res.v[i] -= d.w[j].v[i];
    d.recomposition_defect = l2_norm(res) / l2_norm(u);
    return d;
}

// ------------------------------------------------------- coefficient model

double CoeffModel::x(int k) const { return -pi + 2.0 * pi * k / n; }
double CoeffModel::g(double x) const { return 1.0 + c0 * std::fabs(std::sin(0.5 * x)); }
double CoeffModel::dg(double x) const {
    const double s = std::sin(0.5 * x);
    if (s == 0.0) return 0.0;
    return 0.5 * c0 * std::cos(0.5 * x) * (s > 0 ? 1.0 : -1.0);
}

TruncationReport truncate_coeff(const CoeffModel& m, double K, int M) {
    if (!(K > 0.0)) throw std::invalid_argument("truncate_coeff: cutoff must be positive");
    if (m.n / 2 < 4.0 * LOWPASS_OUT * K) throw AliasingError("truncate_coeff: lattice does not oversample the cutoff 4x");
    if (m.c0 < 0.0) throw std::invalid_argument("truncate_coeff: c0 must be >= 0");
    const int n = m.n;
    // filter only the perturbation so c0 = 0 is reproduced exactly
    std::vector<cd> p(n);
    for (int k = 0; k < n; ++k) p[k] = m.g(m.x(k)) - 1.0;
    fft::one_d(p, -1);
    std::vector<cd> f0(n), f1(n), f2(n);
    for (int k = 0; k < n; ++k) {
        const int kk = k < n / 2 ? k : k - n;
        const double w = (k == n / 2 ? 0.0 : lowpass(kk / K)) / n;
        f0[k] = p[k] * w;
        f1[k] = p[k] * w * cd(0.0, kk);
        f2[k] = p[k] * w * static_cast<double>(-kk * kk);
    }
    fft::one_d(f0, +1);
    fft::one_d(f1, +1);
    fft::one_d(f2, +1);

    TruncationReport r;
    r.cutoff = K;
    r.gk.resize(n);
    const double ic0 = m.c0 > 0.0 ? 1.0 / m.c0 : 0.0;
    for (int k = 0; k < n; ++k) {
        const double x = m.x(k);
        const double gk = 1.0 + f0[k].real();
        r.gk[k] = gk;
        const double diff = std::fabs(m.g(x) - gk);
        const double d1 = std::fabs(f1[k].real());
        const double dd1 = std::fabs(m.dg(x) - f1[k].real());
        const double d2 = std::fabs(f2[k].real());
        const double wt = std::pow(1.0 + (K * x) * (K * x), 0.5 * M);
        r.sup_diff = std::max(r.sup_diff, diff);
        r.sup_d1 = std::max(r.sup_d1, d1);
        r.sup_d2 = std::max(r.sup_d2, d2);
        r.c_diff = std::max(r.c_diff, diff * K * ic0);
        r.c_d1 = std::max(r.c_d1, d1 * ic0);
        r.c_d2 = std::max(r.c_d2, d2 * ic0 / K);
        r.c_wdiff = std::max(r.c_wdiff, diff * K * wt * ic0);
        r.c_wd1 = std::max(r.c_wd1, dd1 * wt * ic0);
        r.c_wd2 = std::max(r.c_wd2, d2 * ic0 / (1.0 + K / wt));
    }
    return r;
}

Samples even_extend(const std::vector<double>& f, double h, Parity parity) {
    if (f.empty()) throw std::invalid_argument("even_extend: no samples");
    if (!(h > 0.0)) throw std::invalid_argument("even_extend: step must be positive");
    if (!std::isfinite(f[0])) throw std::invalid_argument("even_extend: f(0) must be finite");
    if (parity == Parity::Odd && f[0] != 0.0) throw ParityError("even_extend: odd extension needs f(0) = 0");
    const int K = static_cast<int>(f.size()) - 1;
    Samples s;
    s.h = h;
    s.x0 = -K * h;
    s.v.resize(2 * static_cast<std::size_t>(K) + 1);
    for (int k = -K; k <= K; ++k) {
        const double v = f[std::abs(k)];
        s.v[k + K] = (parity == Parity::Odd && k < 0) ? -v : v;
    }
    return s;
}

// ------------------------------------------------------- exponent calculus

std::string to_string(PairClass c) {
    switch (c) {
        case PairClass::Subcritical: return "subcritical";
        case PairClass::Critical: return "critical";
        case PairClass::Inadmissible: return "inadmissible";
    }
    return "?";
}

ExponentBook exponent_book(int n, double p, double q, double alpha) {
    if (n < 1) throw std::domain_error("exponent_book: n must be >= 1");
    if (!(p > 2.0)) throw std::domain_error("exponent_book: need 2 < p <= inf");
    if (!(q >= 2.0 && std::isfinite(q))) throw std::domain_error("exponent_book: need 2 <= q < inf");
    if (!(alpha > 0.0 && alpha < 2.0 / 3.0)) throw std::domain_error("exponent_book: alpha must lie in (0, 2/3)");
    ExponentBook b;
    b.n = n;
    b.p = p;
    b.q = q;
    b.alpha = alpha;
    b.delta = 1.0 - 1.5 * alpha;
    const double tp = std::isinf(p) ? 0.0 : 2.0 / p;
    const double d = 0.5 * n - n / q - tp;
    b.s = d;
    const double tol = 1e-12;
    b.cls = d > tol ? PairClass::Subcritical : (d < -tol ? PairClass::Inadmissible : PairClass::Critical);
    if (tp <= 0.5 * (n - 1) * (1.0 - 2.0 / q))
        b.sigma = 0.5 - 1.0 / q;
    else
        b.sigma = b.cls == PairClass::Critical ? 0.0 : d;
    if (b.cls == PairClass::Critical) b.s = 0.0;
    b.alpha_condition = 1.0 / (3.0 * alpha) - 0.5 < b.sigma;
    return b;
}

double theta(int j) { return std::exp2(-0.5 * j); }

ThetaCheck theta_calculus_check(double lambda, double alpha) {
    const CutoffLadder L(lambda, alpha);
    ThetaCheck c;
    c.min_margin = std::numeric_limits<double>::infinity();
    for (int j = 0; j <= L.J(); ++j) {
        // lambda theta^3 / lambda^delta = 2^{(3/2)(alpha log2 lambda - j)}; this form is exact at the
        // equality case theta = lambda^{-alpha/2}
        const double m = std::exp2(1.5 * (alpha * std::log2(lambda) - j));
        c.margins.push_back(m);
        c.min_margin = std::min(c.min_margin, m);
    }
    c.ok = c.min_margin >= 1.0;
    return c;
}

}  // namespace glancing::dyadic
