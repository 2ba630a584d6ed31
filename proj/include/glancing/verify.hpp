#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "glancing/green.hpp"

namespace glancing::verify {

using green::BC;

struct SweepConfig {
    int n = 2;
    std::vector<double> lambdas{64, 128, 256, 512, 1024};
    double alpha = 0.6;
    BC bc = BC::Neumann;
    double nu_cutoff_rel = 1e-3;
    int tail_run = 10;          // consecutive decaying modes required to stop
    double panel_scale = 1.0;   // radial panel width in units of 2 pi / lambda
    int threads = 1;
};

struct SweepRecord {
    int n = 2;
    double lambda = 0.0;
    int j = 0;
    BC bc = BC::Neumann;
    double nu_star = 0.0;
    double hs_norm = 0.0;
    double constant = 0.0;      // hs_norm * lambda * 2^{j/2}
    long modes_scanned = 0;
    double wall_ms = 0.0;
};

struct FitResult {
    double slope = 0.0, intercept = 0.0, r_squared = 0.0, residual_max = 0.0;
    int points = 0;
};

struct ModeSweep {
    double nu_star = 0.0;
    double sup_norm = 0.0;
    long modes_scanned = 0;
};

struct NonDecayError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// floor(alpha log2 lambda), the largest j with 2^{-j} >= lambda^{-alpha}
int j_alpha(double lambda, double alpha);

std::vector<double> nu_ladder(int n, int l_max);

ModeSweep sweep_modes(int n, double lambda, int j, BC bc, const SweepConfig& opts = {});

// All collars 0..jmax of one lambda from a single scan over the ladder.
std::vector<ModeSweep> sweep_collars(int n, double lambda, int jmax, BC bc, const SweepConfig& opts);

std::vector<SweepRecord> sweep_grid(const SweepConfig& cfg);

enum class Axis { LambdaAtFixedJ, JAtFixedLambda };

// log(hs_norm) against log(lambda) at j == fixed, or against -j log 2 at
// lambda == fixed.
FitResult fit_scaling(const std::vector<SweepRecord>& records, Axis axis, double fixed);
FitResult ols(const std::vector<double>& x, const std::vector<double>& y);

// Smooth random right-hand side supported in A_j: a C-infinity bump times a
// few plane waves with frequencies up to 2 lambda.
struct RandomRhs {
    double a_lo = 1.0, a_hi = 5.0;
    std::vector<double> omega;
    std::vector<green::cd> amp;
    green::cd operator()(double s) const;
};
RandomRhs random_rhs(double lambda, const green::Collar& c, std::uint64_t seed, std::uint64_t stream);

struct TrialResult {
    double ratio = 0.0;    // ||chi_j w|| / ||chi_j g||
    double nu = 0.0;
    double hs_norm = 0.0;  // green_hs_norm at that nu
};

TrialResult mode_inequality_trial(int n, double lambda, int j, BC bc, std::uint64_t seed,
                                  double points_per_wavelength = 40.0);

}  // namespace glancing::verify
