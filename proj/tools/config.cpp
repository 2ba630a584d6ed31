#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "glancing/parallel.hpp"
#include "glancing/specfun.hpp"

namespace glancing::cli {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

// Thrown by value converters; the caller adds origin, line and key.
struct BadValue : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// a number, "a/b" or "mu^e" (e < 0); throws BadValue
double theta_value(const std::string& spec, double mu);

double to_double(const std::string& v) {
    double d = 0.0;
    const auto* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), e, d);
    if (ec != std::errc() || p != e || !std::isfinite(d)) throw BadValue("expected a number, got '" + v + "'");
    return d;
}

long long to_int(const std::string& v) {
    long long i = 0;
    const auto* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), e, i);
    if (ec != std::errc() || p != e) throw BadValue("expected an integer, got '" + v + "'");
    return i;
}

std::uint64_t to_u64(const std::string& v) {
    std::uint64_t i = 0;
    const auto* e = v.data() + v.size();
    auto [p, ec] = std::from_chars(v.data(), e, i);
    if (ec != std::errc() || p != e) throw BadValue("expected an unsigned 64-bit integer, got '" + v + "'");
    return i;
}

bool to_bool(const std::string& v) {
    const std::string l = lower(v);
    if (l == "true" || l == "yes" || l == "on" || l == "1") return true;
    if (l == "false" || l == "no" || l == "off" || l == "0") return false;
    throw BadValue("expected true or false, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw BadValue("empty list entry in '" + v + "'");
        out.push_back(item);
    }
    if (out.empty()) throw BadValue("empty list");
    return out;
}

std::vector<double> to_doubles(const std::string& v) {
    std::vector<double> out;
    for (const auto& s : split_list(v)) out.push_back(to_double(s));
    return out;
}

int positive_int(const std::string& v) {
    const long long i = to_int(v);
    if (i < 1 || i > 1'000'000'000) throw BadValue("must be a positive integer, got '" + v + "'");
    return static_cast<int>(i);
}

int nonnegative_int(const std::string& v) {
    const long long i = to_int(v);
    if (i < 0 || i > 1'000'000'000) throw BadValue("must be a nonnegative integer, got '" + v + "'");
    return static_cast<int>(i);
}

double positive(const std::string& v) {
    const double d = to_double(v);
    if (!(d > 0.0)) throw BadValue("must be positive, got '" + v + "'");
    return d;
}

std::vector<double> positives(const std::string& v) {
    auto l = to_doubles(v);
    for (double d : l)
        if (!(d > 0.0)) throw BadValue("entries must be positive");
    return l;
}

// The model needs 0 < alpha < 2/3 strictly.
double alpha_value(const std::string& v) {
    const double a = to_double(v);
    if (!(a > 0.0 && a < 2.0 / 3.0)) throw BadValue("alpha must lie strictly between 0 and 2/3, got '" + v + "'");
    return a;
}

Format to_format(const std::string& v) {
    const std::string l = lower(v);
    if (l == "csv") return Format::Csv;
    if (l == "json") return Format::Json;
    throw BadValue("format must be csv or json, got '" + v + "'");
}

std::string to_subcommand(const std::string& v) {
    const auto& s = subcommands();
    if (std::find(s.begin(), s.end(), v) == s.end())
        throw BadValue("unknown subcommand '" + v + "' (specfun, green, sweep, packet, dyadic, all)");
    return v;
}

int threads_value(const std::string& v) {
    const long long i = to_int(v);
    if (i < 1 || i > 4096) throw BadValue("threads must be between 1 and 4096, got '" + v + "'");
    return static_cast<int>(i);
}

using Setter = std::function<void(RunConfig&, const std::string&)>;
using Section = std::map<std::string, Setter>;

const std::map<std::string, Section>& schema() {
    static const std::map<std::string, Section> s = {
        {"run",
         {
             {"subcommand", [](RunConfig& c, const std::string& v) { c.subcommand = to_subcommand(v); }},
             {"out_path", [](RunConfig& c, const std::string& v) { c.out_path = v; }},
             {"format", [](RunConfig& c, const std::string& v) { c.format = to_format(v); }},
             {"threads", [](RunConfig& c, const std::string& v) { c.threads = threads_value(v); }},
             {"seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); }},
         }},
        {"specfun",
         {
             {"nus", [](RunConfig& c, const std::string& v) {
                  auto l = to_doubles(v);
                  for (double d : l)
                      if (d < 0) throw BadValue("orders must be nonnegative");
                  c.specfun.nus = l;
              }},
             {"points", [](RunConfig& c, const std::string& v) { c.specfun.points = positive_int(v); }},
             {"x_min", [](RunConfig& c, const std::string& v) { c.specfun.x_min = positive(v); }},
             {"path_nus", [](RunConfig& c, const std::string& v) {
                  auto l = to_doubles(v);
                  for (double d : l)
                      if (d < specfun::NU_UNIFORM_FLOOR) throw BadValue("path orders must be at least 10");
                  c.specfun.path_nus = l;
              }},
             {"path_points", [](RunConfig& c, const std::string& v) { c.specfun.path_points = positive_int(v); }},
         }},
        {"green",
         {
             {"refl_lambdas", [](RunConfig& c, const std::string& v) { c.green.refl_lambdas = positives(v); }},
             {"trials", [](RunConfig& c, const std::string& v) { c.green.trials = nonnegative_int(v); }},
             {"trial_lambdas", [](RunConfig& c, const std::string& v) { c.green.trial_lambdas = positives(v); }},
             {"trial_jmax", [](RunConfig& c, const std::string& v) { c.green.trial_jmax = nonnegative_int(v); }},
             {"points_per_wavelength", [](RunConfig& c, const std::string& v) {
                  const double d = to_double(v);
                  if (!(d >= 10.0)) throw BadValue("points_per_wavelength must be at least 10");
                  c.green.points_per_wavelength = d;
              }},
             {"aj_lambdas", [](RunConfig& c, const std::string& v) { c.green.aj_lambdas = positives(v); }},
             {"alpha", [](RunConfig& c, const std::string& v) { c.green.alpha = alpha_value(v); }},
         }},
        {"sweep",
         {
             {"n", [](RunConfig& c, const std::string& v) {
                  const long long n = to_int(v);
                  if (n != 2 && n != 3) throw BadValue("n must be 2 or 3");
                  c.sweep.grid.n = static_cast<int>(n);
              }},
             {"lambdas", [](RunConfig& c, const std::string& v) { c.sweep.grid.lambdas = positives(v); }},
             {"alpha", [](RunConfig& c, const std::string& v) { c.sweep.grid.alpha = alpha_value(v); }},
             {"bc", [](RunConfig& c, const std::string& v) {
                  try {
                      c.sweep.grid.bc = green::parse_bc(lower(v));
                  } catch (const std::exception&) {
                      throw BadValue("bc must be neumann or dirichlet, got '" + v + "'");
                  }
              }},
             {"nu_cutoff_rel", [](RunConfig& c, const std::string& v) { c.sweep.grid.nu_cutoff_rel = positive(v); }},
             {"tail_run", [](RunConfig& c, const std::string& v) { c.sweep.grid.tail_run = positive_int(v); }},
             {"panel_scale", [](RunConfig& c, const std::string& v) {
                  const double d = positive(v);
                  if (d > 1.0) throw BadValue("panel_scale must not exceed 1");
                  c.sweep.grid.panel_scale = d;
              }},
             {"timings", [](RunConfig& c, const std::string& v) { c.sweep.timings = to_bool(v); }},
             {"lambda_fit_j", [](RunConfig& c, const std::string& v) { c.sweep.lambda_fit_j = nonnegative_int(v); }},
             {"j_fit_lambda", [](RunConfig& c, const std::string& v) { c.sweep.j_fit_lambda = positive(v); }},
             {"trials", [](RunConfig& c, const std::string& v) { c.sweep.trials = nonnegative_int(v); }},
             {"trial_lambda", [](RunConfig& c, const std::string& v) { c.sweep.trial_lambda = positive(v); }},
             {"trial_j", [](RunConfig& c, const std::string& v) { c.sweep.trial_j = nonnegative_int(v); }},
         }},
        {"packet",
         {
             {"mus", [](RunConfig& c, const std::string& v) { c.packet.mus = positives(v); }},
             {"thetas", [](RunConfig& c, const std::string& v) {
                  auto l = split_list(v);
                  for (const auto& t : l) theta_value(t, 64.0);  // syntax check
                  c.packet.thetas = l;
              }},
             {"times", [](RunConfig& c, const std::string& v) { c.packet.times = positive_int(v); }},
             {"pairs", [](RunConfig& c, const std::string& v) { c.packet.pairs = nonnegative_int(v); }},
             {"dt_min", [](RunConfig& c, const std::string& v) { c.packet.dt_min = positive(v); }},
             {"eps", [](RunConfig& c, const std::string& v) { c.packet.eps = positive(v); }},
             {"points_per_oscillation", [](RunConfig& c, const std::string& v) {
                  const double d = to_double(v);
                  if (!(d >= 6.0)) throw BadValue("points_per_oscillation must be at least 6");
                  c.packet.points_per_oscillation = d;
              }},
             {"transform_mus", [](RunConfig& c, const std::string& v) { c.packet.transform_mus = positives(v); }},
             {"transform_inputs", [](RunConfig& c, const std::string& v) { c.packet.transform_inputs = nonnegative_int(v); }},
             {"flow_trajectories", [](RunConfig& c, const std::string& v) { c.packet.flow_trajectories = nonnegative_int(v); }},
             {"flow_mu", [](RunConfig& c, const std::string& v) { c.packet.flow_mu = positive(v); }},
             {"flow_c0", [](RunConfig& c, const std::string& v) {
                  const double d = to_double(v);
                  if (!(d >= 0.0 && d <= 0.05)) throw BadValue("flow_c0 must lie in [0, 0.05]");
                  c.packet.flow_c0 = d;
              }},
             {"flow_tol", [](RunConfig& c, const std::string& v) {
                  const double d = to_double(v);
                  if (!(d >= 1e-12 && d <= 1e-6)) throw BadValue("flow_tol must lie in [1e-12, 1e-6]");
                  c.packet.flow_tol = d;
              }},
         }},
        {"dyadic",
         {
             {"lambda", [](RunConfig& c, const std::string& v) { c.dyadic.lambda = positive(v); }},
             {"alpha", [](RunConfig& c, const std::string& v) { c.dyadic.alpha = alpha_value(v); }},
             {"decompose_lambdas", [](RunConfig& c, const std::string& v) { c.dyadic.decompose_lambdas = positives(v); }},
             {"cutoff_min", [](RunConfig& c, const std::string& v) { c.dyadic.cutoff_min = positive_int(v); }},
             {"cutoff_max", [](RunConfig& c, const std::string& v) { c.dyadic.cutoff_max = positive_int(v); }},
             {"c0", [](RunConfig& c, const std::string& v) {
                  const double d = to_double(v);
                  if (!(d >= 0.0 && d <= 0.05)) throw BadValue("c0 must lie in [0, 0.05]");
                  c.dyadic.c0 = d;
              }},
             {"grid_points", [](RunConfig& c, const std::string& v) { c.dyadic.grid_points = positive_int(v); }},
         }},
    };
    return s;
}

}  // namespace

namespace {

double theta_value(const std::string& spec, double mu) {
    const std::string s = lower(trim(spec));
    auto number = [](const std::string& t) {
        const auto slash = t.find('/');
        if (slash == std::string::npos) return to_double(t);
        const double den = to_double(trim(t.substr(slash + 1)));
        if (den == 0.0) throw BadValue("zero denominator in '" + t + "'");
        return to_double(trim(t.substr(0, slash))) / den;
    };
    double v = 0.0;
    if (s.rfind("mu^", 0) == 0) {
        const double e = number(s.substr(3));
        if (!(e < 0.0)) throw BadValue("theta exponent must be negative in '" + spec + "'");
        v = std::pow(mu, e);
    } else {
        v = number(s);
    }
    if (!(v > 0.0 && v <= 1.0)) throw BadValue("theta must lie in (0, 1], got '" + spec + "'");
    return v;
}

}  // namespace

double resolve_theta(const std::string& spec, double mu) {
    try {
        return theta_value(spec, mu);
    } catch (const BadValue& e) {
        throw ConfigError(std::string("theta: ") + e.what());
    }
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    RunConfig cfg;
    cfg.threads = 0;  // resolved in validate unless given
    std::istringstream in(text);
    std::string raw, section = "run";
    std::set<std::string> seen;
    int line = 0;
    auto fail = [&](const std::string& what) {
        throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
    };
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find_first_of("#;");
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail("malformed section header '" + s + "'");
            section = lower(trim(s.substr(1, s.size() - 2)));
            if (!schema().count(section)) fail("unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail("expected 'key = value', got '" + s + "'");
        const std::string key = lower(trim(s.substr(0, eq)));
        const std::string val = trim(s.substr(eq + 1));
        const auto& sec = schema().at(section);
        const auto it = sec.find(key);
        if (it == sec.end()) fail("[" + section + "] " + key + ": unknown key");
        if (!seen.insert(section + "." + key).second) fail("[" + section + "] " + key + ": duplicate key");
        if (val.empty()) fail("[" + section + "] " + key + ": missing value");
        try {
            it->second(cfg, val);
        } catch (const BadValue& e) {
            fail("[" + section + "] " + key + ": " + e.what());
        }
    }
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError(path + ": cannot open config file");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str(), path);
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
    try {
        if (!o.subcommand.empty()) cfg.subcommand = to_subcommand(o.subcommand);
        if (!o.out_path.empty()) cfg.out_path = o.out_path;
        if (!o.format.empty()) cfg.format = to_format(o.format);
        if (o.threads >= 0) cfg.threads = threads_value(std::to_string(o.threads));
        if (o.has_seed) cfg.seed = o.seed;
    } catch (const BadValue& e) {
        throw ConfigError(std::string("command line: ") + e.what());
    }
}

void validate(RunConfig& cfg) {
    if (cfg.subcommand.empty()) throw ConfigError("no subcommand given");
    try {
        cfg.threads = resolve_threads(cfg.threads);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (cfg.out_path.empty())
        cfg.out_path = "glancing_" + cfg.subcommand + (cfg.format == Format::Csv ? ".csv" : ".json");
    cfg.sweep.grid.threads = cfg.threads;

    const auto& p = cfg.packet;
    for (double mu : p.mus) {
        if (mu < 16.0 || mu > 128.0) throw ConfigError("[packet] mus: entries must lie in [16, 128]");
        for (const auto& t : p.thetas) {
            try {
                theta_value(t, mu);
            } catch (const BadValue& e) {
                throw ConfigError(std::string("[packet] thetas: ") + e.what());
            }
        }
    }
    for (double mu : p.transform_mus)
        if (mu < 8.0 || mu > 512.0) throw ConfigError("[packet] transform_mus: entries must lie in [8, 512]");
    if (p.dt_min >= p.eps * *std::min_element(p.mus.begin(), p.mus.end())) throw ConfigError("[packet] dt_min: must be below eps * mu");
    if (cfg.dyadic.cutoff_min > cfg.dyadic.cutoff_max)
        throw ConfigError("[dyadic] cutoff_min: must not exceed cutoff_max");
    if (cfg.dyadic.cutoff_max > 14) throw ConfigError("[dyadic] cutoff_max: at most 14 (lattice of 2^15 points)");
}

}  // namespace glancing::cli
