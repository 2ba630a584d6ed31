#pragma once

#include <complex>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace glancing::green {

using cd = std::complex<double>;

enum class BC { Neumann, Dirichlet };
BC parse_bc(const std::string& s);
std::string to_string(BC bc);

struct ModeProblem {
    int n = 2;
    double lambda = 1.0;
    double nu = 0.0;
    BC bc = BC::Neumann;
};

// nu_l = (mu_l + (n-2)^2/4)^{1/2}; mu_l = l^2 (n = 2), l(l+1) (n = 3)
double mode_order(int n, int l);

struct Collar {
    int j = 0;
    double a_lo = 1.0;
    double a_hi = 5.0;
    static Collar make(int j);
};

// Quadrature for integrals against d rho = r^{n-1} dr.
struct RadialGrid {
    int n = 2;
    std::vector<double> r, w;
    double lambda = 0.0;          // frequency the panels were sized for (0 if none)
    double max_panel = 0.0;       // widest panel
};

// Gauss-Legendre panels of 16 nodes on [a, b], panel width <= scale * 2 pi / lambda.
RadialGrid make_grid(int n, double a, double b, double lambda, double scale = 1.0);

struct ResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Number like a * exp(e) with complex mantissa; keeps products of
// exponentially large and small Bessel factors representable.
struct LogC {
    cd m{0.0, 0.0};
    double e = 0.0;
    cd value() const;
};
LogC operator+(const LogC& a, const LogC& b);
LogC operator-(const LogC& a, const LogC& b);
LogC operator*(const LogC& a, const LogC& b);
LogC operator/(const LogC& a, const LogC& b);

// Values of the two separable factors at a point s (argument lambda s):
// F = J - kappa H obeys the boundary condition at r = 1, H is outgoing.
struct Factors {
    LogC F, Fp, H, Hp;  // Fp, Hp: derivatives with respect to the argument lambda s
};

class GreenKernel {
public:
    explicit GreenKernel(const ModeProblem& p);
    const ModeProblem& problem() const { return p_; }
    cd refl() const { return refl_; }       // conj(D)/D form of the boundary coefficient
    LogC kappa() const { return kappa_; }    // F = J - kappa H
    Factors factors(double s) const;
    // G(r, s); symmetric by construction
    cd eval(double r, double s) const;
    LogC eval_log(double r, double s) const;

private:
    ModeProblem p_;
    LogC kappa_;
    cd refl_;
};

cd bc_coefficient(const ModeProblem& p);
cd green_eval(const ModeProblem& p, double r, double s);

// Hilbert-Schmidt norm on A_j x A_j via the separable structure.  When
// `grid` is provided it must cover the collar; otherwise the adaptive panel
// layout below is used.
double green_hs_norm(const ModeProblem& p, const Collar& c, const RadialGrid& grid);
double green_hs_norm(const ModeProblem& p, const Collar& c, double panel_scale = 1.0);

// HS norms on every nested collar A_0 ... A_jmax from a single radial pass.
// Returns a vector indexed by j.
std::vector<double> green_hs_norms_nested(const ModeProblem& p, int jmax, double panel_scale = 1.0);

// Uniformly sampled radial function.
struct RadialSamples {
    double r0 = 1.0, h = 0.0;
    std::vector<cd> v;
    double r(std::size_t k) const { return r0 + h * static_cast<double>(k); }
};

// w(r) = int_{A_j} G(r, s) g(s) s^{n-1} ds sampled on `out_grid` nodes.
RadialSamples mode_solve(const ModeProblem& p, const Collar& c, const std::function<cd(double)>& g,
                         double h);
RadialSamples mode_solve(const ModeProblem& p, const Collar& c, const RadialSamples& g);

// Finite-difference image of L_nu w (fourth order, one-sided closures).  The
// angular term is mu_l / r^2 = (nu^2 - (n-2)^2/4) / r^2, the operator the
// kernel inverts; for n = 2 this is nu^2 / r^2.
RadialSamples apply_L_nu(const ModeProblem& p, const RadialSamples& w);

double pointwise_bound_ratio(const ModeProblem& p, double r, double s);
double aj_integral(const ModeProblem& p, const Collar& c);

// L^2(A_j, d rho) norm of samples (composite Simpson on the nodes inside A_j).
double collar_norm(int n, const Collar& c, const RadialSamples& f);

}  // namespace glancing::green
