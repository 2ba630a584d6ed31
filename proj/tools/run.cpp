#include "run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "glancing/dyadic.hpp"
#include "glancing/green.hpp"
#include "glancing/parallel.hpp"
#include "glancing/rng.hpp"
#include "glancing/specfun.hpp"
#include "glancing/verify.hpp"
#include "glancing/wavepacket.hpp"

namespace glancing::cli {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Band upper(std::string name, double v, double hi) {
    Band b;
    b.name = std::move(name);
    b.value = v;
    b.hi = hi;
    return b;
}

Band range(std::string name, double v, double lo, double hi) {
    Band b = upper(std::move(name), v, hi);
    b.lo = lo;
    return b;
}

Band skipped(std::string name, std::string why) {
    Band b;
    b.name = std::move(name);
    b.value = std::numeric_limits<double>::quiet_NaN();
    b.enabled = false;
    b.note = std::move(why);
    return b;
}

// max that keeps a NaN, so a broken measurement fails its band instead of vanishing
double nan_max(double a, double b) { return std::isnan(a) || std::isnan(b) ? std::nan("") : std::max(a, b); }

double max_of(const std::vector<double>& v) {
    double m = -kInf;
    for (double x : v) m = nan_max(m, x);
    return m;
}

// max/min over positive values; infinite if any is not positive
double spread(const std::vector<double>& v) {
    double lo = kInf, hi = 0.0;
    for (double x : v) {
        if (!(x > 0.0) || !std::isfinite(x)) return kInf;
        lo = std::min(lo, x);
        hi = nan_max(hi, x);
    }
    return v.empty() ? kInf : hi / lo;
}

// Per-trial seed derived from the run seed (splitmix64 finalizer).
std::uint64_t mix(std::uint64_t seed, std::uint64_t i) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (i + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

Json fit_json(const verify::FitResult& f) {
    Json o = Json::object();
    o["slope"] = f.slope;
    o["intercept"] = f.intercept;
    o["r_squared"] = f.r_squared;
    o["residual_max"] = f.residual_max;
    o["points"] = f.points;
    return o;
}

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
}

}  // namespace

bool ModuleResult::pass() const {
    return std::all_of(bands.begin(), bands.end(), [](const Band& b) { return b.pass(); });
}

// ---------------------------------------------------------------- specfun

ModuleResult run_specfun(const RunConfig& cfg) {
    const auto& P = cfg.specfun;
    ModuleResult m;
    m.module = "specfun";
    m.table.columns = {"check", "nu", "x", "value"};

    struct Item {
        const char* check;
        double nu, x;
    };
    std::vector<Item> items;
    for (double nu : P.nus) {
        const double hi = 4.0 * nu + 20.0;
        for (int i = 0; i < P.points; ++i) {
            const double x = P.points == 1 ? P.x_min : P.x_min * std::pow(hi / P.x_min, double(i) / (P.points - 1));
            items.push_back({"wronskian", nu, x});
        }
    }
    const std::size_t n_wr = items.size();
    for (double nu : P.path_nus) {
        for (double z : linspace(0.2, 0.9, P.path_points)) items.push_back({"paths", nu, nu * z});
        for (double z : linspace(1.1, 3.0, P.path_points)) items.push_back({"paths", nu, nu * z});
    }
    std::vector<double> val(items.size());
    parallel_for(items.size(), cfg.threads, [&](std::size_t i) {
        const auto& it = items[i];
        val[i] = i < n_wr ? specfun::wronskian_defect(it.nu, it.x) : specfun::path_agreement(it.nu, it.x / it.nu);
    });
    std::vector<double> airy;
    for (double t : {-5.0, 0.0, 5.0}) {
        const auto a = specfun::eval_airy(t);
        airy.push_back(std::fabs(a.ai * a.bip - a.aip * a.bi - 1.0 / std::numbers::pi) * std::numbers::pi);
        items.push_back({"airy_wronskian", 0.0, t});
    }
    val.insert(val.end(), airy.begin(), airy.end());
    for (std::size_t i = 0; i < items.size(); ++i) m.table.add({std::string(items[i].check), items[i].nu, items[i].x, val[i]});

    const std::vector<double> wr(val.begin(), val.begin() + n_wr), pa(val.begin() + n_wr, val.end() - 3);
    m.fits["wronskian_points"] = n_wr;
    m.fits["path_points"] = pa.size();
    m.bands.push_back(n_wr ? upper("wronskian_defect_max", max_of(wr), 1e-8) : skipped("wronskian_defect_max", "no orders"));
    m.bands.push_back(pa.empty() ? skipped("path_agreement_max", "no path orders")
                                 : upper("path_agreement_max", max_of(pa), 1e-4));
    m.bands.push_back(upper("airy_wronskian_rel_max", max_of(airy), 1e-10));
    return m;
}

// ---------------------------------------------------------------- green

ModuleResult run_green(const RunConfig& cfg) {
    const auto& P = cfg.green;
    ModuleResult m;
    m.module = "green";
    m.table.columns = {"check", "n", "bc", "lambda", "j", "nu", "value"};

    // reflection coefficient over a grid of orders around the glancing band
    std::vector<green::ModeProblem> refl;
    for (int n : {2, 3})
        for (double lam : P.refl_lambdas)
            for (double f : {0.0, 0.25, 0.5, 0.9, 1.0, 1.1, 2.0, 4.0})
                for (auto bc : {green::BC::Neumann, green::BC::Dirichlet}) {
                    const int l = static_cast<int>(std::lround(f * lam));
                    refl.push_back({n, lam, green::mode_order(n, l), bc});
                }
    std::vector<double> rv(refl.size());
    parallel_for(refl.size(), cfg.threads, [&](std::size_t i) {
        rv[i] = std::fabs(std::abs(green::GreenKernel(refl[i]).refl()) - 1.0);
    });
    for (std::size_t i = 0; i < refl.size(); ++i)
        m.table.add({std::string("refl"), std::int64_t(refl[i].n), green::to_string(refl[i].bc), refl[i].lambda,
                     std::int64_t(0), refl[i].nu, rv[i]});
    m.bands.push_back(upper("refl_modulus_defect_max", max_of(rv), 1e-10));

    // mode_solve on seeded right-hand sides
    struct Trial {
        green::ModeProblem p;
        int j = 0;
        double residual = 0, neumann = 0, cs = 0;
    };
    std::vector<Trial> trials(static_cast<std::size_t>(P.trials));
    parallel_for(trials.size(), cfg.threads, [&](std::size_t i) {
        CounterRng rng(cfg.seed, 0x4700 + i);
        const int n = 2 + static_cast<int>(i % 2);
        const double lam = P.trial_lambdas[rng.below(P.trial_lambdas.size())];
        const int j = static_cast<int>(rng.below(static_cast<std::uint64_t>(P.trial_jmax) + 1));
        int lmax = 0;
        while (green::mode_order(n, lmax + 1) <= 2.0 * lam) ++lmax;
        const int l = static_cast<int>(rng.below(static_cast<std::uint64_t>(lmax) + 1));
        Trial& t = trials[i];
        t.p = {n, lam, green::mode_order(n, l), green::BC::Neumann};
        t.j = j;
        const auto c = green::Collar::make(j);
        const auto g = verify::random_rhs(lam, c, cfg.seed, 0x4800 + i);
        // step 1/q with a node on a_hi
        const double unit = std::exp2(std::max(0, j - 2));
        const double q = std::ceil(std::ceil(P.points_per_wavelength * lam / (2.0 * std::numbers::pi)) / unit) * unit;
        const auto w = green::mode_solve(t.p, c, g, 1.0 / q);
        const auto Lw = green::apply_L_nu(t.p, w);
        double num = 0, den = 0, wmax = 0;
        for (std::size_t k = 0; k < w.v.size(); ++k) {
            wmax = nan_max(wmax, std::abs(w.v[k]));
            if (k < 3 || k + 3 >= w.v.size()) continue;
            const double r = w.r(k), wt = std::pow(r, n - 1);
            num += std::norm(Lw.v[k] - g(r)) * wt;
            den += std::norm(g(r)) * wt;
        }
        t.residual = std::sqrt(num / den);
        const auto& v = w.v;
        const green::cd d = (-25.0 * v[0] + 48.0 * v[1] - 36.0 * v[2] + 16.0 * v[3] - 3.0 * v[4]) / (12.0 * w.h);
        t.neumann = std::abs(d) / wmax;
        auto gs = w;
        for (std::size_t k = 0; k < gs.v.size(); ++k) gs.v[k] = g(gs.r(k));
        t.cs = green::collar_norm(n, c, w) / (green::green_hs_norm(t.p, c) * green::collar_norm(n, c, gs));
    });
    std::vector<double> res, neu, cs;
    for (const auto& t : trials) {
        for (auto [name, v] : {std::pair{"residual", t.residual}, {"neumann", t.neumann}, {"cauchy_schwarz", t.cs}})
            m.table.add({std::string(name), std::int64_t(t.p.n), green::to_string(t.p.bc), t.p.lambda, std::int64_t(t.j),
                         t.p.nu, v});
        res.push_back(t.residual);
        neu.push_back(t.neumann);
        cs.push_back(t.cs);
    }
    if (trials.empty()) {
        m.bands.push_back(skipped("mode_solve_residual_max", "no trials"));
    } else {
        m.bands.push_back(upper("mode_solve_residual_max", max_of(res), 1e-3));
        m.bands.push_back(upper("neumann_defect_max", max_of(neu), 1e-3));
        m.bands.push_back(upper("cauchy_schwarz_ratio_max", max_of(cs), 1.0 + 1e-12));
    }

    // collar integral: sup over integer orders nu >= 1 of value * lambda * 2^{j/2}
    struct Aj {
        double lambda;
        int j;
        double nu = 0, c = 0;
    };
    std::vector<Aj> aj;
    for (double lam : P.aj_lambdas)
        for (int j = 0; j <= verify::j_alpha(lam, P.alpha); ++j) aj.push_back({lam, j});
    parallel_for(aj.size(), cfg.threads, [&](std::size_t i) {
        auto& a = aj[i];
        const auto c = green::Collar::make(a.j);
        const int top = static_cast<int>(std::ceil(4.0 * a.lambda * c.a_hi));
        for (int nu = 1; nu <= top; ++nu) {
            const double v = green::aj_integral({2, a.lambda, double(nu), green::BC::Neumann}, c) * a.lambda *
                             std::exp2(0.5 * a.j);
            if (v > a.c) {
                a.c = v;
                a.nu = nu;
            }
        }
    });
    std::vector<double> ajc;
    for (const auto& a : aj) {
        m.table.add({std::string("aj_constant"), std::int64_t(2), std::string("neumann"), a.lambda, std::int64_t(a.j), a.nu,
                     a.c});
        ajc.push_back(a.c);
    }
    m.bands.push_back(aj.size() > 1 ? upper("aj_constant_spread", spread(ajc), 10.0)
                                    : skipped("aj_constant_spread", "fewer than two grid points"));
    return m;
}

// ---------------------------------------------------------------- sweep

ModuleResult run_sweep(const RunConfig& cfg) {
    const auto& P = cfg.sweep;
    ModuleResult m;
    m.module = "sweep";
    m.table.columns = {"n", "lambda", "j", "bc", "nu_star", "hs_norm", "constant", "modes_scanned", "wall_ms"};
    auto recs = verify::sweep_grid(P.grid);
    if (!P.timings)
        for (auto& r : recs) r.wall_ms = 0.0;

    std::vector<double> consts;
    PlotData plot;
    plot.figure = "sweep";
    plot.comments = {"collar sweep: sup over nu of the Hilbert-Schmidt norm on A_j x A_j",
                     "constant = hs_norm * lambda * 2^(j/2)"};
    plot.columns = {"log2_lambda", "j", "log2_hs_norm", "constant"};
    plot.blocks.resize(1);
    for (const auto& r : recs) {
        m.table.add({std::int64_t(r.n), r.lambda, std::int64_t(r.j), green::to_string(r.bc), r.nu_star, r.hs_norm, r.constant,
                     std::int64_t(r.modes_scanned), r.wall_ms});
        consts.push_back(r.constant);
        plot.blocks[0].rows.push_back({std::log2(r.lambda), double(r.j), std::log2(r.hs_norm), r.constant});
    }
    if (!recs.empty()) m.plots.push_back(plot);
    m.bands.push_back(recs.empty() ? skipped("constant_spread", "no records")
                                   : upper("constant_spread", spread(consts), 20.0));

    auto fit_band = [&](const char* name, verify::Axis axis, double fixed, double lo, double hi, const char* key) {
        try {
            const auto f = verify::fit_scaling(recs, axis, fixed);
            m.fits[key] = fit_json(f);
            m.fits[key]["at"] = fixed;
            m.bands.push_back(range(name, f.slope, lo, hi));
        } catch (const std::invalid_argument& e) {
            m.bands.push_back(skipped(name, e.what()));
        }
    };
    fit_band("lambda_slope", verify::Axis::LambdaAtFixedJ, P.lambda_fit_j, -1.15, -0.85, "lambda_axis");
    fit_band("j_slope", verify::Axis::JAtFixedLambda, P.j_fit_lambda, 0.35, 0.65, "j_axis");

    if (P.trials > 0) {
        std::vector<verify::TrialResult> tr(static_cast<std::size_t>(P.trials));
        parallel_for(tr.size(), cfg.threads, [&](std::size_t i) {
            tr[i] = verify::mode_inequality_trial(P.grid.n, P.trial_lambda, P.trial_j, P.grid.bc, mix(cfg.seed, i));
        });
        double cs = 0, cmax = 0;
        for (const auto& t : tr) {
            cs = nan_max(cs, t.ratio / t.hs_norm);
            cmax = nan_max(cmax, t.ratio * P.trial_lambda * std::exp2(0.5 * P.trial_j));
        }
        m.fits["trials"] = {{"count", P.trials}, {"lambda", P.trial_lambda}, {"j", P.trial_j}};
        m.bands.push_back(upper("trial_cauchy_schwarz_max", cs, 1.0 + 1e-12));
        if (recs.empty())
            m.bands.push_back(skipped("trial_constant_max", "no sweep records to compare against"));
        else
            m.bands.push_back(upper("trial_constant_max", cmax, max_of(consts)));
    }
    return m;
}

// ---------------------------------------------------------------- packet

ModuleResult run_packet(const RunConfig& cfg) {
    const auto& P = cfg.packet;
    ModuleResult m;
    m.module = "packet";
    m.table.columns = {"check", "n", "mu", "theta", "dt", "value", "regime"};

    // dispersive kernel scans
    const auto w2 = wavepacket::make_window(2);
    PlotData plot;
    plot.figure = "kernel";
    plot.comments = {"packet kernel decay: sup over sampled (x, y) of |K(0, x; dt, y)|",
                     "regime 0: dt <= 1/mu, 1: dt <= 1/(mu theta^2), 2: beyond"};
    plot.columns = {"log_dt", "log_supK", "regime_id"};
    std::map<std::string, std::vector<double>> inner;  // theta spec -> levels across mu
    static const char* regime_name[3] = {"inner", "middle", "outer"};
    for (double mu : P.mus) {
        const auto sym = wavepacket::make_symbol(2, mu, 0.0);
        for (const auto& ts : P.thetas) {
            const double th = resolve_theta(ts, mu);
            wavepacket::ScanOptions so;
            so.times = P.times;
            so.pairs = P.pairs;
            so.seed = cfg.seed;
            so.threads = cfg.threads;
            so.dt_min = P.dt_min;
            so.kernel.eps = P.eps;
            so.kernel.points_per_oscillation = P.points_per_oscillation;
            const auto sc = wavepacket::kernel_decay_scan(w2, sym, th, so);
            std::ostringstream label;
            label << "mu=" << mu << " theta=" << ts;
            PlotData::Block blk;
            blk.label = label.str();
            for (const auto& r : sc.rows) {
                m.table.add({std::string("kernel"), std::int64_t(2), mu, th, r.dt, r.sup_k, std::int64_t(r.regime)});
                blk.rows.push_back({std::log(r.dt), std::log(r.sup_k), double(r.regime)});
            }
            plot.blocks.push_back(std::move(blk));
            Json fj = Json::object();
            fj["mu"] = mu;
            fj["theta"] = th;
            fj["theta_spec"] = ts;
            fj["inner_level"] = sc.inner_level;
            for (int g = 0; g < 3; ++g)
                if (sc.has_fit[g]) fj[regime_name[g]] = fit_json(sc.fit[g]);
            m.fits["kernel"].push_back(fj);
            const std::string tag = " mu=" + label.str().substr(3);
            if (sc.has_fit[1])
                m.bands.push_back(range("middle_slope" + tag, sc.fit[1].slope, -0.7, -0.3));
            else
                m.bands.push_back(skipped("middle_slope" + tag, "fewer than 3 samples in the regime"));
            if (sc.has_fit[2])
                m.bands.push_back(range("outer_slope" + tag, sc.fit[2].slope, -1.2, -0.8));
            else
                m.bands.push_back(skipped("outer_slope" + tag, "regime empty: 1/(mu theta^2) exceeds the slab"));
            inner[ts].push_back(sc.inner_level);
        }
    }
    if (plot.size()) m.plots.push_back(plot);
    for (const auto& [ts, lv] : inner) {
        if (lv.size() > 1)
            m.bands.push_back(upper("inner_level_spread theta=" + ts, spread(lv), 10.0));
        else
            m.bands.push_back(skipped("inner_level_spread theta=" + ts, "needs two or more mu values"));
    }

    // transform isometry and reconstruction
    std::vector<double> iso, rec;
    for (int n : {1, 2})
        for (double mu : P.transform_mus)
            for (int s = 0; s < P.transform_inputs; ++s) {
                const auto c = wavepacket::transform_check(n, mu, mix(cfg.seed, 0x7100 + s), cfg.threads);
                m.table.add({std::string("isometry"), std::int64_t(n), mu, 0.0, 0.0, c.isometry, std::int64_t(-1)});
                m.table.add({std::string("reconstruction"), std::int64_t(n), mu, 0.0, 0.0, c.reconstruction, std::int64_t(-1)});
                iso.push_back(c.isometry);
                rec.push_back(c.reconstruction);
            }
    if (iso.empty()) {
        m.bands.push_back(skipped("transform_isometry_max", "no inputs"));
    } else {
        m.bands.push_back(upper("transform_isometry_max", max_of(iso), 1e-3));
        m.bands.push_back(upper("transform_reconstruction_max", max_of(rec), 1e-3));
    }

    // flow invariants
    if (P.flow_trajectories > 0) {
        const auto sym = wavepacket::make_symbol(2, P.flow_mu, P.flow_c0);
        std::vector<wavepacket::FlowCheck> fc(static_cast<std::size_t>(P.flow_trajectories));
        parallel_for(fc.size(), cfg.threads,
                     [&](std::size_t k) { fc[k] = wavepacket::flow_check(sym, cfg.seed, 0x5100 + k, P.flow_tol); });
        std::vector<double> e, d, t;
        for (const auto& c : fc) {
            for (auto [name, v] : {std::pair{"energy_drift", c.energy_drift}, {"det_defect", c.det_defect},
                                   {"translation", c.translation}})
                m.table.add({std::string(name), std::int64_t(2), P.flow_mu, 0.0, 1.0, v, std::int64_t(-1)});
            e.push_back(c.energy_drift);
            d.push_back(c.det_defect);
            t.push_back(c.translation);
        }
        m.bands.push_back(upper("flow_energy_drift_max", max_of(e), 1e-8));
        m.bands.push_back(upper("flow_det_defect_max", max_of(d), 1e-6));
        m.bands.push_back(upper("flow_translation_max", max_of(t), 10.0 * P.flow_tol));
    }
    return m;
}

// ---------------------------------------------------------------- dyadic

ModuleResult run_dyadic(const RunConfig& cfg) {
    const auto& P = cfg.dyadic;
    ModuleResult m;
    m.module = "dyadic";
    m.table.columns = {"check", "lambda", "param", "value"};
    auto row = [&](const char* check, double lam, double param, double v) {
        m.table.add({std::string(check), lam, param, v});
    };

    // Littlewood-Paley partition of unity
    std::vector<double> z;
    for (int i = 0; i < 10000; ++i) z.push_back(std::pow(10.0, -2.0 + 8.0 * i / 9999.0));
    const double lp = dyadic::lp_partition_defect(dyadic::LPSequence{}, z);
    row("lp_partition", 0.0, double(z.size()), lp);
    m.bands.push_back(upper("lp_partition_defect", lp, 1e-12));

    // cutoff ladder: telescoping in x_n and the Gamma partition in xi_n
    const dyadic::CutoffLadder L(P.lambda, P.alpha);
    m.fits["J_alpha"] = L.J();
    double tele = 0.0;
    for (int l = 1; l <= L.J(); ++l) {
        double worst = 0.0;
        for (int k = 0; k <= 4000; ++k) {
            const double x = -3.0 + 6.0 * k / 4000.0;
            double s = L.chi(l, x);
            for (int j = 0; j < l; ++j) s += L.psi(j, x);
            worst = nan_max(worst, std::fabs(L.chi(0, x) - s));
        }
        row("telescoping", P.lambda, l, worst);
        tele = nan_max(tele, worst);
    }
    m.bands.push_back(L.J() >= 1 ? upper("telescoping_defect", tele, 1e-12) : skipped("telescoping_defect", "J = 0"));
    double gsum = 0.0;
    if (L.J() >= 1) {
        // Gamma_1 has no upper edge; 4 lambda covers the decomposition band twice over
        const double top = 4.0 * P.lambda;
        for (int k = 0; k <= 20000; ++k) {
            const double xi = top * k / 20000.0;
            double s = 0.0;
            for (int j = 1; j <= L.J(); ++j) s += L.Gamma(j, xi);
            gsum = nan_max(gsum, std::fabs(s - 1.0));
        }
        row("gamma_partition", P.lambda, L.J(), gsum);
        m.bands.push_back(upper("gamma_partition_defect", gsum, 1e-12));
    }

    // decomposition on seeded band-limited inputs
    std::vector<double> recd, leak;
    for (std::size_t i = 0; i < P.decompose_lambdas.size(); ++i) {
        const double lam = P.decompose_lambdas[i];
        const dyadic::CutoffLadder Ld(lam, P.alpha);
        const auto lat = dyadic::make_lattice(1, lam);
        const auto u = dyadic::random_band_limited(lat, lam, mix(cfg.seed, 0x6400 + i));
        const auto d = dyadic::decompose(u, Ld);
        double lk = 0.0;
        for (double x : d.leakage_v) lk = nan_max(lk, x);
        for (double x : d.leakage_w) lk = nan_max(lk, x);
        row("recomposition", lam, Ld.J(), d.recomposition_defect);
        row("leakage", lam, Ld.J(), lk);
        recd.push_back(d.recomposition_defect);
        leak.push_back(lk);
    }
    if (!recd.empty()) {
        m.bands.push_back(upper("recomposition_defect_max", max_of(recd), 1e-10));
        m.bands.push_back(upper("leakage_max", max_of(leak), 1e-8));
    }

    // coefficient truncation constants across cutoffs 2^l
    dyadic::CoeffModel cm;
    cm.c0 = P.c0;
    std::map<std::string, std::vector<double>> consts;
    for (int l = P.cutoff_min; l <= P.cutoff_max; ++l) {
        const auto r = dyadic::truncate_coeff(cm, std::ldexp(1.0, l));
        for (auto [name, v] : {std::pair{"c_diff", r.c_diff}, {"c_d1", r.c_d1}, {"c_d2", r.c_d2}, {"c_wdiff", r.c_wdiff},
                               {"c_wd1", r.c_wd1}, {"c_wd2", r.c_wd2}}) {
            m.table.add({std::string("truncation_") + name, 0.0, double(l), v});
            consts[name].push_back(v);
        }
    }
    for (const auto& [name, v] : consts) {
        if (P.c0 == 0.0)
            m.bands.push_back(skipped(std::string("truncation_spread_") + name, "c0 = 0: truncation is exact"));
        else if (v.size() < 2)
            m.bands.push_back(skipped(std::string("truncation_spread_") + name, "fewer than two cutoffs"));
        else
            m.bands.push_back(upper(std::string("truncation_spread_") + name, spread(v), 10.0));
    }

    // exponent calculus: the hand table and the admissibility grid
    const double tbl = std::max({std::fabs(dyadic::exponent_book(3, 4, 4, P.alpha).sigma - 0.25),
                                 std::fabs(dyadic::exponent_book(3, dyadic::P_INF, 4, P.alpha).sigma - 0.25),
                                 std::fabs(dyadic::exponent_book(3, 4, 3, P.alpha).sigma),
                                 std::fabs(dyadic::exponent_book(3, 8, 2.4, P.alpha).sigma)});
    row("exponent_table", 0.0, 4.0, tbl);
    m.bands.push_back(upper("exponent_table_defect", tbl, 0.0));
    int mismatches = 0;
    const int g = P.grid_points;
    for (int a = 0; a < g; ++a)
        for (int b = 0; b < g; ++b) {
            // 1/p over [0, 1/2), q over [2, 12]
            const double inv_p = 0.5 * a / g;
            const double p = a == 0 ? dyadic::P_INF : 1.0 / inv_p;
            const double q = 2.0 + 10.0 * b / std::max(1, g - 1);
            const auto bk = dyadic::exponent_book(3, p, q, P.alpha);
            const double d = 1.5 - 3.0 / q - (std::isinf(p) ? 0.0 : 2.0 / p);
            const auto expect = d > 1e-12 ? dyadic::PairClass::Subcritical
                                          : (d < -1e-12 ? dyadic::PairClass::Inadmissible : dyadic::PairClass::Critical);
            if (bk.cls != expect || ((bk.sigma > 0.0) != (expect == dyadic::PairClass::Subcritical))) ++mismatches;
        }
    row("admissibility_mismatches", 0.0, double(g * g), mismatches);
    m.bands.push_back(upper("admissibility_mismatches", mismatches, 0.0));

    const auto th = dyadic::theta_calculus_check(P.lambda, P.alpha);
    for (std::size_t j = 0; j < th.margins.size(); ++j) row("theta_margin", P.lambda, double(j), th.margins[j]);
    Band b;
    b.name = "theta_margin_min";
    b.value = th.min_margin;
    b.lo = 1.0;
    m.bands.push_back(b);
    return m;
}

// ---------------------------------------------------------------- driver

std::string OutputPaths::table(const std::string& module, bool all) const {
    return all ? stem + "_" + module + ext : stem + ext;
}

std::string OutputPaths::plot(const std::string& module, const std::string& figure, bool all) const {
    return (all ? stem + "_" + module : stem) + "." + figure + ".dat";
}

std::string OutputPaths::summary() const { return stem + ".summary.json"; }

OutputPaths output_paths(const std::string& out_path) {
    const std::filesystem::path p(out_path);
    OutputPaths o;
    o.ext = p.extension().string();
    o.stem = o.ext.empty() ? out_path : out_path.substr(0, out_path.size() - o.ext.size());
    return o;
}

int run(const RunConfig& cfg, std::ostream& log) {
    const bool all = cfg.subcommand == "all";
    std::vector<std::string> mods;
    if (all)
        mods = {"specfun", "green", "sweep", "packet", "dyadic"};
    else
        mods = {cfg.subcommand};

    const OutputPaths paths = output_paths(cfg.out_path);
    Json summary = Json::object();
    summary["subcommand"] = cfg.subcommand;
    summary["seed"] = cfg.seed;
    summary["modules"] = Json::array();
    Json failed = Json::array();
    bool ok = true;
    for (const auto& mod : mods) {
        ModuleResult r;
        if (mod == "specfun") r = run_specfun(cfg);
        else if (mod == "green") r = run_green(cfg);
        else if (mod == "sweep") r = run_sweep(cfg);
        else if (mod == "packet") r = run_packet(cfg);
        else r = run_dyadic(cfg);

        const std::string tpath = paths.table(mod, all);
        std::ostringstream body;
        if (cfg.format == Format::Csv)
            write_csv(body, r.table);
        else
            body << table_json(r.table).dump(1) << '\n';
        write_file(tpath, body.str());

        Json ms = Json::object();
        ms["module"] = mod;
        ms["output"] = std::filesystem::path(tpath).filename().string();
        ms["rows"] = r.table.rows.size();
        ms["fits"] = r.fits;
        ms["bands"] = Json::array();
        for (const auto& b : r.bands) {
            ms["bands"].push_back(band_json(b));
            if (!b.pass()) {
                failed.push_back(mod + ": " + b.name);
                log << "FAIL " << mod << ": " << b.name << " = " << format_double(b.value) << '\n';
            }
        }
        ms["plots"] = Json::array();
        for (const auto& p : r.plots) {
            const std::string pp = paths.plot(mod, p.figure, all);
            emit_plotdata(p, pp);
            ms["plots"].push_back(std::filesystem::path(pp).filename().string());
        }
        ms["pass"] = r.pass();
        ok = ok && r.pass();
        summary["modules"].push_back(std::move(ms));
    }
    summary["failed"] = failed;
    summary["pass"] = ok;
    write_file(paths.summary(), summary.dump(1) + "\n");
    return ok ? 0 : 1;
}

}  // namespace glancing::cli
