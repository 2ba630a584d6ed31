#include "glancing/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "glancing/parallel.hpp"
#include "glancing/rng.hpp"

namespace glancing::verify {

using green::Collar;
using green::ModeProblem;

int j_alpha(double lambda, double alpha) {
    if (!(lambda >= 1.0)) throw std::domain_error("j_alpha: lambda must be >= 1");
    // the defining inequality 2^{-j} >= lambda^{-alpha} tested exactly at the boundary
    int j = static_cast<int>(std::floor(alpha * std::log2(lambda) + 1e-12));
    return std::max(j, 0);
}

std::vector<double> nu_ladder(int n, int l_max) {
    if (n != 2 && n != 3) throw std::domain_error("nu_ladder: only n = 2, 3 are supported");
    if (l_max < 0) return {};
    std::vector<double> v(static_cast<std::size_t>(l_max) + 1);
    for (int l = 0; l <= l_max; ++l) v[l] = green::mode_order(n, l);
    return v;
}

namespace {

struct TailState {
    double tail_start = 0.0, cap = 0.0;
    double prev = 0.0;
    int run = 0;
    bool done = false;
    ModeSweep best;
};

}  // namespace

std::vector<ModeSweep> sweep_collars(int n, double lambda, int jmax, BC bc, const SweepConfig& opts) {
    if (jmax < 0) throw std::invalid_argument("sweep_collars: jmax must be >= 0");
    std::vector<TailState> st(static_cast<std::size_t>(jmax) + 1);
    for (int j = 0; j <= jmax; ++j) {
        const double a_hi = Collar::make(j).a_hi;
        st[j].tail_start = 2.0 * lambda * a_hi;
        st[j].cap = 4.0 * lambda * a_hi + 4.0 * opts.tail_run;
    }
    const int threads = std::max(1, opts.threads);
    const std::size_t batch = std::max<std::size_t>(16, 8 * static_cast<std::size_t>(threads));
    std::vector<std::vector<double>> norms;
    int remaining = jmax + 1;
    for (long l0 = 0; remaining > 0; l0 += static_cast<long>(batch)) {
        norms.assign(batch, {});
        parallel_for(batch, threads, [&](std::size_t i) {
            const ModeProblem p{n, lambda, green::mode_order(n, static_cast<int>(l0 + static_cast<long>(i))), bc};
            norms[i] = green::green_hs_norms_nested(p, jmax, opts.panel_scale);
        });
        // ordered fold: identical for any thread count or batch size
        for (std::size_t i = 0; i < batch && remaining > 0; ++i) {
            const double nu = green::mode_order(n, static_cast<int>(l0 + static_cast<long>(i)));
            for (int j = 0; j <= jmax; ++j) {
                TailState& s = st[j];
                if (s.done) continue;
                const double v = norms[i][j];
                if (!std::isfinite(v)) throw std::runtime_error("sweep: non-finite norm");
                ++s.best.modes_scanned;
                if (v > s.best.sup_norm) {
                    s.best.sup_norm = v;
                    s.best.nu_star = nu;
                }
                if (nu > s.tail_start) {
                    const bool decaying = v < opts.nu_cutoff_rel * s.best.sup_norm || v < s.prev;
                    s.run = decaying ? s.run + 1 : 0;
                    if (s.run >= opts.tail_run) {
                        s.done = true;
                        --remaining;
                    } else if (nu > s.cap) {
                        throw NonDecayError("sweep: norm tail did not decay (lambda=" + std::to_string(lambda) +
                                            ", j=" + std::to_string(j) + ")");
                    }
                }
                s.prev = v;
            }
        }
    }
    std::vector<ModeSweep> out;
    out.reserve(st.size());
    for (const auto& s : st) out.push_back(s.best);
    return out;
}

ModeSweep sweep_modes(int n, double lambda, int j, BC bc, const SweepConfig& opts) {
    if (j < 0) throw std::invalid_argument("sweep_modes: j must be >= 0");
    return sweep_collars(n, lambda, j, bc, opts).back();
}

std::vector<SweepRecord> sweep_grid(const SweepConfig& cfg) {
    if (cfg.lambdas.empty()) throw std::invalid_argument("sweep_grid: empty lambda list");
    if (!(cfg.alpha > 0.0 && cfg.alpha < 2.0 / 3.0)) throw std::invalid_argument("sweep_grid: alpha must lie in (0, 2/3)");
    std::vector<double> lams = cfg.lambdas;
    std::sort(lams.begin(), lams.end());
    std::vector<SweepRecord> out;
    for (double lam : lams) {
        const int J = j_alpha(lam, cfg.alpha);
        const auto t0 = std::chrono::steady_clock::now();
        const auto sups = sweep_collars(cfg.n, lam, J, cfg.bc, cfg);
        const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        for (int j = 0; j <= J; ++j) {
            SweepRecord r;
            r.n = cfg.n;
            r.lambda = lam;
            r.j = j;
            r.bc = cfg.bc;
            r.nu_star = sups[j].nu_star;
            r.hs_norm = sups[j].sup_norm;
            r.constant = r.hs_norm * lam * std::exp2(0.5 * j);
            r.modes_scanned = sups[j].modes_scanned;
            r.wall_ms = ms;
            out.push_back(r);
        }
    }
    return out;
}

FitResult ols(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("ols: size mismatch");
    const std::size_t m = x.size();
    if (m < 3) throw std::invalid_argument("fit: need at least 3 points");
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < m; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= m;
    my /= m;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < m; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit: degenerate abscissae");
    FitResult f;
    f.points = static_cast<int>(m);
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ssr += e * e;
        f.residual_max = std::max(f.residual_max, std::fabs(e));
    }
    f.r_squared = syy > 0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    return f;
}

FitResult fit_scaling(const std::vector<SweepRecord>& records, Axis axis, double fixed) {
    std::vector<double> x, y;
    for (const auto& r : records) {
        if (axis == Axis::LambdaAtFixedJ && r.j == static_cast<int>(fixed)) {
            x.push_back(std::log(r.lambda));
            y.push_back(std::log(r.hs_norm));
        } else if (axis == Axis::JAtFixedLambda && r.lambda == fixed) {
            x.push_back(-r.j * std::numbers::ln2);
            y.push_back(std::log(r.hs_norm));
        }
    }
    if (x.size() < 3) throw std::invalid_argument("fit_scaling: fewer than 3 points on the requested axis");
    return ols(x, y);
}

green::cd RandomRhs::operator()(double s) const {
    if (s <= a_lo || s >= a_hi) return {0.0, 0.0};
    const double u = (s - a_lo) / (a_hi - a_lo);
    const double b = std::exp(4.0 - 1.0 / (u * (1.0 - u)));
    green::cd acc(0.0, 0.0);
    for (std::size_t k = 0; k < omega.size(); ++k) acc += amp[k] * std::polar(1.0, omega[k] * s);
    return b * acc;
}

RandomRhs random_rhs(double lambda, const Collar& c, std::uint64_t seed, std::uint64_t stream) {
    CounterRng rng(seed, stream);
    RandomRhs g;
    g.a_lo = c.a_lo;
    g.a_hi = c.a_hi;
    const int waves = 6;
    for (int k = 0; k < waves; ++k) {
        g.omega.push_back(rng.uniform(-2.0 * lambda, 2.0 * lambda));
        const double re = rng.normal(), im = rng.normal();
        g.amp.emplace_back(re / std::sqrt(2.0 * waves), im / std::sqrt(2.0 * waves));
    }
    return g;
}

TrialResult mode_inequality_trial(int n, double lambda, int j, BC bc, std::uint64_t seed, double ppw) {
    const Collar c = Collar::make(j);
    CounterRng rng(seed, 0);
    // orders up to 2 lambda
    int lmax = 0;
    while (green::mode_order(n, lmax + 1) <= 2.0 * lambda) ++lmax;
    const int l = static_cast<int>(rng.below(static_cast<std::uint64_t>(lmax) + 1));
    const ModeProblem p{n, lambda, green::mode_order(n, l), bc};
    const RandomRhs g = random_rhs(lambda, c, seed, 1);

    // step 1/q with a node on a_hi
    const double q0 = std::ceil(ppw * lambda / (2.0 * std::numbers::pi));
    const double unit = std::exp2(std::max(0, j - 2));
    const double q = std::ceil(q0 / unit) * unit;
    const green::RadialSamples w = green::mode_solve(p, c, g, 1.0 / q);
    green::RadialSamples gs = w;
    for (std::size_t k = 0; k < gs.v.size(); ++k) gs.v[k] = g(gs.r(k));

    TrialResult t;
    t.nu = p.nu;
    t.ratio = green::collar_norm(n, c, w) / green::collar_norm(n, c, gs);
    t.hs_norm = green::green_hs_norm(p, c);
    return t;
}

}  // namespace glancing::verify
