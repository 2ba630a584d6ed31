#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "glancing/verify.hpp"

namespace glancing::cli {

// Parse or validation failure; the message carries "<origin>:<line>: <key>: ..."
// when the problem can be pinned to a line.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };

struct SpecfunParams {
    std::vector<double> nus{0, 0.5, 1, 3, 10, 30, 50.5, 100, 300};
    int points = 40;          // log-spaced x in [x_min, 4 nu + 20] per order
    double x_min = 0.05;
    std::vector<double> path_nus{30, 50, 100};
    int path_points = 12;     // per interval of z: [0.2, 0.9] and [1.1, 3]
};

struct GreenParams {
    std::vector<double> refl_lambdas{16, 64, 100, 256, 1024};
    int trials = 100;                 // seeded right-hand sides for mode_solve
    std::vector<double> trial_lambdas{16, 32, 64};
    int trial_jmax = 2;
    double points_per_wavelength = 100;
    std::vector<double> aj_lambdas{64, 128, 256, 512, 1024};
    double alpha = 0.6;
};

struct SweepParams {
    verify::SweepConfig grid{};
    bool timings = false;             // wall_ms stays 0 unless set
    double lambda_fit_j = 0;
    double j_fit_lambda = 512;
    int trials = 100;
    double trial_lambda = 256;
    int trial_j = 2;
};

// theta entries are kept as text: a number, a fraction "a/b", or "mu^e"
struct PacketParams {
    std::vector<double> mus{32, 64};
    std::vector<std::string> thetas{"1/2", "mu^-1/4", "mu^-1/2"};
    int times = 24;
    int pairs = 6;
    double dt_min = 0.1;
    double eps = 0.5;
    double points_per_oscillation = 6;
    std::vector<double> transform_mus{32, 64, 128};
    int transform_inputs = 20;
    int flow_trajectories = 50;
    double flow_mu = 64;
    double flow_c0 = 0.05;
    double flow_tol = 1e-10;
};

struct DyadicParams {
    double lambda = 1024;
    double alpha = 0.6;
    std::vector<double> decompose_lambdas{64, 256, 1024};
    int cutoff_min = 4, cutoff_max = 10;  // truncation cutoffs 2^l
    double c0 = 0.05;
    int grid_points = 10;                  // (p, q) admissibility grid is grid_points^2
};

struct RunConfig {
    std::string subcommand;
    std::string out_path;
    Format format = Format::Csv;
    int threads = 1;
    std::uint64_t seed = 1;
    SpecfunParams specfun;
    GreenParams green;
    SweepParams sweep;
    PacketParams packet;
    DyadicParams dyadic;
};

inline const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s{"specfun", "green", "sweep", "packet", "dyadic", "all"};
    return s;
}

// Sectioned key = value text.  Keys before the first section header belong
// to [run].  '#' and ';' start comments.  Lists are comma separated.
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");
RunConfig parse_config(const std::string& path);

// Flag overrides applied after the file; empty strings and negative numbers
// mean "not given".
struct Overrides {
    std::string subcommand, out_path, format;
    long long threads = -1;
    bool has_seed = false;
    std::uint64_t seed = 0;
};
void apply_overrides(RunConfig& cfg, const Overrides& o);

// Fills defaults that depend on other fields and checks cross-field rules.
void validate(RunConfig& cfg);

// theta value for a packet scan at frequency mu
double resolve_theta(const std::string& spec, double mu);

}  // namespace glancing::cli
