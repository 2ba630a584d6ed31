// Python module: thin wrappers returning plain numbers, tuples and dicts.
#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <fstream>
#include <sstream>

#include "config.hpp"
#include "glancing/dyadic.hpp"
#include "glancing/green.hpp"
#include "glancing/specfun.hpp"
#include "glancing/verify.hpp"
#include "glancing/wavepacket.hpp"
#include "run.hpp"

namespace py = pybind11;
using namespace glancing;

namespace {

green::ModeProblem problem(int n, double lambda, double nu, const std::string& bc) {
    return {n, lambda, nu, green::parse_bc(bc)};
}

py::dict fit_dict(const verify::FitResult& f) {
    py::dict d;
    d["slope"] = f.slope;
    d["intercept"] = f.intercept;
    d["r_squared"] = f.r_squared;
    d["residual_max"] = f.residual_max;
    d["points"] = f.points;
    return d;
}

// Summary of one or all suites, without touching the filesystem unless an
// output path was given.
std::string run_suite(const std::string& text, const std::string& sub, const py::dict& kw) {
    cli::RunConfig cfg = cli::parse_config_text(text, "<python>");
    cli::Overrides o;
    o.subcommand = sub;
    for (auto [k, v] : kw) {
        const auto key = py::cast<std::string>(k);
        if (key == "threads")
            o.threads = py::cast<long long>(v);
        else if (key == "seed") {
            o.has_seed = true;
            o.seed = py::cast<std::uint64_t>(v);
        } else if (key == "out_path")
            o.out_path = py::cast<std::string>(v);
        else
            throw cli::ConfigError("unknown override '" + key + "'");
    }
    if (o.threads == 0) throw cli::ConfigError("threads must be at least 1");
    cli::apply_overrides(cfg, o);
    cli::validate(cfg);

    py::gil_scoped_release nogil;
    if (!o.out_path.empty()) {
        std::ostringstream log;
        cli::run(cfg, log);
        std::ifstream in(cli::output_paths(cfg.out_path).summary());
        std::ostringstream s;
        s << in.rdbuf();
        return s.str();
    }
    std::vector<std::string> mods{cfg.subcommand};
    if (cfg.subcommand == "all") mods = {"specfun", "green", "sweep", "packet", "dyadic"};
    cli::Json summary = cli::Json::object();
    summary["subcommand"] = cfg.subcommand;
    summary["seed"] = cfg.seed;
    summary["modules"] = cli::Json::array();
    bool ok = true;
    for (const auto& mod : mods) {
        cli::ModuleResult r;
        if (mod == "specfun") r = cli::run_specfun(cfg);
        else if (mod == "green") r = cli::run_green(cfg);
        else if (mod == "sweep") r = cli::run_sweep(cfg);
        else if (mod == "packet") r = cli::run_packet(cfg);
        else r = cli::run_dyadic(cfg);
        cli::Json ms = cli::Json::object();
        ms["module"] = mod;
        ms["rows"] = r.table.rows.size();
        ms["fits"] = r.fits;
        ms["bands"] = cli::Json::array();
        for (const auto& b : r.bands) ms["bands"].push_back(cli::band_json(b));
        ms["pass"] = r.pass();
        ok = ok && r.pass();
        summary["modules"].push_back(ms);
    }
    summary["pass"] = ok;
    return summary.dump();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Glancing-region numerics: Bessel functions, radial Green functions, wave packets, dyadic cutoffs";

    py::register_exception<specfun::OverflowError>(m, "OverflowError", PyExc_OverflowError);
    py::register_exception<green::ResolutionError>(m, "ResolutionError", PyExc_RuntimeError);
    py::register_exception<wavepacket::AliasingError>(m, "AliasingError", PyExc_RuntimeError);
    py::register_exception<cli::ConfigError>(m, "ConfigError", PyExc_ValueError);

    // specfun
    m.def(
        "bessel_pair",
        [](double nu, double x, const std::string& method) {
            const auto p = specfun::eval_bessel_pair(nu, x, specfun::parse_method(method));
            return py::make_tuple(p.j, p.jp, p.y, p.yp);
        },
        py::arg("nu"), py::arg("x"), py::arg("method") = "auto", "(J, J', Y, Y') of order nu at x");
    m.def(
        "bessel_scaled",
        [](double nu, double z) {
            const auto p = specfun::eval_bessel_scaled(nu, z);
            py::dict d;
            d["mj"] = p.mj;
            d["mjp"] = p.mjp;
            d["my"] = p.my;
            d["myp"] = p.myp;
            d["L"] = p.L;
            return d;
        },
        py::arg("nu"), py::arg("z"), "mantissas and exponent L of J, J', Y, Y' at nu z");
    m.def(
        "turning_map",
        [](double z) {
            const auto t = specfun::turning_map(z);
            return py::make_tuple(t.zeta, t.dzeta);
        },
        py::arg("z"), "(zeta, dzeta/dz)");
    m.def("wronskian_defect", &specfun::wronskian_defect, py::arg("nu"), py::arg("x"));
    m.def("path_agreement", &specfun::path_agreement, py::arg("nu"), py::arg("z"));

    // green
    m.def("mode_order", &green::mode_order, py::arg("n"), py::arg("l"));
    m.def(
        "bc_coefficient",
        [](int n, double lambda, double nu, const std::string& bc) {
            return green::bc_coefficient(problem(n, lambda, nu, bc));
        },
        py::arg("n"), py::arg("lam"), py::arg("nu"), py::arg("bc") = "neumann");
    m.def(
        "green_eval",
        [](int n, double lambda, double nu, double r, double s, const std::string& bc) {
            return green::green_eval(problem(n, lambda, nu, bc), r, s);
        },
        py::arg("n"), py::arg("lam"), py::arg("nu"), py::arg("r"), py::arg("s"), py::arg("bc") = "neumann");
    m.def(
        "green_hs_norm",
        [](int n, double lambda, double nu, int j, const std::string& bc) {
            py::gil_scoped_release nogil;
            return green::green_hs_norm(problem(n, lambda, nu, bc), green::Collar::make(j));
        },
        py::arg("n"), py::arg("lam"), py::arg("nu"), py::arg("j"), py::arg("bc") = "neumann");
    m.def(
        "aj_integral",
        [](double lambda, double nu, int j) {
            return green::aj_integral(problem(2, lambda, nu, "neumann"), green::Collar::make(j));
        },
        py::arg("lam"), py::arg("nu"), py::arg("j"));

    // verify
    m.def("j_alpha", &verify::j_alpha, py::arg("lam"), py::arg("alpha"));
    m.def(
        "ols", [](const std::vector<double>& x, const std::vector<double>& y) { return fit_dict(verify::ols(x, y)); },
        py::arg("x"), py::arg("y"));
    m.def(
        "sweep_grid",
        [](int n, const std::vector<double>& lambdas, double alpha, const std::string& bc, int threads) {
            verify::SweepConfig c;
            c.n = n;
            c.lambdas = lambdas;
            c.alpha = alpha;
            c.bc = green::parse_bc(bc);
            c.threads = threads;
            std::vector<verify::SweepRecord> recs;
            {
                py::gil_scoped_release nogil;
                recs = verify::sweep_grid(c);
            }
            py::list out;
            for (const auto& r : recs) {
                py::dict d;
                d["lam"] = r.lambda;
                d["j"] = r.j;
                d["nu_star"] = r.nu_star;
                d["hs_norm"] = r.hs_norm;
                d["constant"] = r.constant;
                d["modes_scanned"] = r.modes_scanned;
                out.append(d);
            }
            return out;
        },
        py::arg("n"), py::arg("lambdas"), py::arg("alpha") = 0.6, py::arg("bc") = "neumann", py::arg("threads") = 1,
        "sup over modes of the collar Hilbert-Schmidt norm for every (lambda, j <= J)");

    // wavepacket
    m.def(
        "transform_check",
        [](int n, double mu, std::uint64_t seed, int threads) {
            py::gil_scoped_release nogil;
            const auto c = wavepacket::transform_check(n, mu, seed, threads);
            return std::make_pair(c.isometry, c.reconstruction);
        },
        py::arg("n"), py::arg("mu"), py::arg("seed") = 1, py::arg("threads") = 1,
        "(isometry defect, reconstruction defect) for one seeded input");
    m.def(
        "flow_check",
        [](int n, double mu, double c0, std::uint64_t seed, std::uint64_t stream) {
            const auto c = wavepacket::flow_check(wavepacket::make_symbol(n, mu, c0), seed, stream);
            py::dict d;
            d["energy_drift"] = c.energy_drift;
            d["det_defect"] = c.det_defect;
            d["translation"] = c.translation;
            return d;
        },
        py::arg("n"), py::arg("mu"), py::arg("c0") = 0.0, py::arg("seed") = 1, py::arg("stream") = 0);
    m.def(
        "packet_kernel",
        [](double mu, double theta, double r, wavepacket::Vec x, double t, wavepacket::Vec y, double c0) {
            py::gil_scoped_release nogil;
            return wavepacket::packet_kernel(wavepacket::make_symbol(2, mu, c0), mu, theta, r, x, t, y);
        },
        py::arg("mu"), py::arg("theta"), py::arg("r"), py::arg("x"), py::arg("t"), py::arg("y"), py::arg("c0") = 0.0,
        "K(r, x; t, y) for n = 2");
    m.def(
        "kernel_decay_scan",
        [](double mu, double theta, int times, int pairs, std::uint64_t seed, int threads) {
            wavepacket::ScanOptions o;
            o.times = times;
            o.pairs = pairs;
            o.seed = seed;
            o.threads = threads;
            wavepacket::DecayScan s;
            {
                py::gil_scoped_release nogil;
                s = wavepacket::kernel_decay_scan(wavepacket::make_window(2), wavepacket::make_symbol(2, mu, 0.0),
                                                  theta, o);
            }
            py::list rows, fits;
            for (const auto& r : s.rows) rows.append(py::make_tuple(r.dt, r.sup_k, r.regime));
            for (int k = 0; k < 3; ++k) fits.append(s.has_fit[k] ? py::object(fit_dict(s.fit[k])) : py::none());
            py::dict d;
            d["rows"] = rows;
            d["fits"] = fits;
            d["inner_level"] = s.inner_level;
            return d;
        },
        py::arg("mu"), py::arg("theta"), py::arg("times") = 24, py::arg("pairs") = 6, py::arg("seed") = 1,
        py::arg("threads") = 1, "sup |K| against |t - r| with log-log fits per regime");

    // dyadic
    m.def(
        "exponent_book",
        [](int n, double p, double q, double alpha) {
            const auto b = dyadic::exponent_book(n, p, q, alpha);
            py::dict d;
            d["s"] = b.s;
            d["sigma"] = b.sigma;
            d["delta"] = b.delta;
            d["class"] = dyadic::to_string(b.cls);
            d["alpha_condition"] = b.alpha_condition;
            return d;
        },
        py::arg("n"), py::arg("p"), py::arg("q"), py::arg("alpha") = 0.6);
    m.def(
        "theta_calculus_check",
        [](double lambda, double alpha) {
            const auto c = dyadic::theta_calculus_check(lambda, alpha);
            return py::make_tuple(c.ok, c.min_margin, c.margins);
        },
        py::arg("lam"), py::arg("alpha") = 0.6, "(ok, min margin, margins for j = 0..J)");

    m.def("_run_suite", &run_suite);
}
