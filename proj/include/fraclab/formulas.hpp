#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "fraclab/process.hpp"
#include "fraclab/rng.hpp"

namespace fraclab::formulas {

// a_H = Gamma(H+1/2) * (1/(2H) + int_{-inf}^0 ((1-s)^{H-1/2} - (-s)^{H-1/2})^2 ds)^{-1/2},
// the improper integral mapped to (0,1) by u = -s/(1-s).
double a_h(double H, double tol = 1e-12);

// Var{W_lambda(1)} = 1 / (2 lambda Gamma^2(lambda + 1/2)).
double sigma2_w(double lambda);

// sigma^2_{B,0,0,gamma} as the unit-square double integral
// (1/Gamma^2(g)) int int x^{2H+1} [(1-x)(1-xy)]^{g-1} [1 + y^{2H} - (1-y)^{2H}] dx dy.
double sigma2_b0(double H, double gamma, double tol = 1e-9);

struct Sigma2Options {
    std::size_t grid_n = 2048;  // push-through quadrature grid on [0,1]
    bool mc_check = true;       // cross-validate against Monte Carlo
    std::size_t mc_paths = 20000;
    std::size_t mc_grid = 2049;
    SeedSpec seed{0x5EED5EEDULL, 9001};
    unsigned workers = 0;  // 0 -> hardware
};

struct Sigma2Result {
    double value = 0;     // covariance push-through at grid_n
    double quad_gap = 0;  // |value(n) - value(n/2)|
    double mc_value = std::numeric_limits<double>::quiet_NaN();
    double mc_se = std::numeric_limits<double>::quiet_NaN();
    bool within_3se = true;
};

// Var{J_{m,alpha}(X)(1)} two ways: discrete covariance push-through through
// the operator chain, cross-validated against the Monte Carlo variance of
// the simulated process.  Disagreement beyond 5 SE throws inconsistency_error.
Sigma2Result sigma2_general(const ProcessSpec& spec, const Sigma2Options& opts = {});

// r_lambda(h) = e^{-lambda h} / Gamma^2(lambda+1/2) * int_0^1 (e^h - x)^{l-1/2} (1-x)^{l-1/2} dx,
// extended evenly to h < 0.
double r_lambda(double lambda, double h, double tol = 1e-12);

// Stationary covariance of U(t) = X(e^t)/e^{tau t} with a certified
// exponential tail bound r(h) <= decay_coef * exp(-decay_rate * |h|).
class StationaryCov {
public:
    double operator()(double h) const;
    double r0() const;
    double decay_rate() const;
    double decay_coef() const;
    // 2 int_0^inf r(h) dh, truncation certified below tol by the tail bound.
    double long_run_variance(double tol = 1e-8) const;

    struct Impl;
    explicit StationaryCov(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

private:
    std::shared_ptr<const Impl> impl_;
};

// Covariance of the log-time transform of J_{m,alpha}(I_gamma B_H) (fBm
// branch; gamma = 0 reduces to the fBm base case).  Recursion depth m <= 3.
StationaryCov r_rec_cov(std::size_t m, std::span<const double> alphas, double gamma, double H,
                        double tol = 1e-9);

double r_rec(std::size_t m, std::span<const double> alphas, double gamma, double H, double h,
             double tol = 1e-9);

// Same construction for an arbitrary ProcessSpec (either branch).
StationaryCov stationary_cov(const ProcessSpec& spec, double tol = 1e-9);

// sigma~^2 = 2 beta(2H,1-H) Gamma^2(H+1)/Gamma^2(H+1+gamma) / prod_i (H+gamma+i-a_1-...-a_i)^2.
double sigma_tilde2_b(std::size_t m, std::span<const double> alphas, double gamma, double H);

// sigma~ = Gamma(1/2)/Gamma(lambda+1) / prod_i (lambda+i-a_1-...-a_i); returns sigma~^2.
double sigma_tilde2_w(std::size_t m, std::span<const double> alphas, double lambda);

// kappa / (1 - alpha/tau); pole at alpha = tau.
double chung_constant(double tau, double alpha, double kappa);

// factor * (kappa / (1 - alpha/tau))^tau.
double lil_constant(double tau, double alpha, double kappa, double a_factor);

struct KappaInfo {
    enum class Kind { exact, bounds, unknown };
    Kind kind = Kind::unknown;
    double value = std::numeric_limits<double>::quiet_NaN();
    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = std::numeric_limits<double>::quiet_NaN();
};

// lambda = 1/2 -> pi^2/8 exactly; lambda = 3/2 -> the Chen-Li bounds;
// anything else -> unknown (never fabricated).
KappaInfo kappa_known(double lambda);

// Weight function: dense piecewise-linear tabulation, zero outside the
// tabulated support, plus an optional exact power-law descriptor used for
// analytic block norms when present.
struct Weight {
    std::vector<double> t, v;
    struct PowerLaw {
        double coef = 1, expo = 0, lo = 0, hi = 1;
    };
    std::optional<PowerLaw> power;

    static Weight indicator(double lo, double hi, double coef = 1.0);
    static Weight power_law(double coef, double expo, double lo, double hi);
    static Weight tabulated(std::vector<double> t, std::vector<double> v);

    double operator()(double x) const;
    double support_lo() const;
    double support_hi() const;
    Weight scaled(double c) const;
};

// plain L^r norm over (0, inf).
double lr_norm(const Weight& w, double r);

// ||w||_{r,tau,q} = (sum_k 2^{k r tau} ||w||^r_{L^q(2^{k-1},2^k]})^{1/r};
// q = infinity() selects the sup norm on blocks.  May return +inf.
double w_norm(const Weight& w, double r, double tau, double q, double tol = 1e-12);

enum class LqMode { direct, integrated };
// direct:     1/r = tau + 1/q,     constant kappa * ||w||_{L^r}^{1/tau}
// integrated: 1/r = tau + 1 + 1/q, constant kappa * ||w||_{L^r}^{1/(tau+1)}
// Returns the positive decay constant.
double lq_constant(double tau, double q, double kappa_tau_q, const Weight& w, LqMode mode);

// P(sup_{[0,1]} |B| < eps) by the classical reflection series.
double brownian_sup_smallball_exact(double eps);

inline double infinity() { return std::numeric_limits<double>::infinity(); }

}  // namespace fraclab::formulas
