#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fraclab/formulas.hpp"
#include "fraclab/grid.hpp"
#include "fraclab/process.hpp"
#include "fraclab/rng.hpp"

namespace fraclab::smallball {

// Functional applied to a sampled trajectory.  alpha / the weight follow the
// theorem conventions: for weighted_sup the event is
//   sup_{t in [lo,hi]} |J(X)(t) / t^{alpha - sum(alpha_i)}| < a eps,
// for lq it is
//   || w(t) t^{sum(alpha_i)} J(X)(t) ||_{L^q(lo,hi)} < a eps,
// and with integrate_first the weighted path is integrated before the norm
//   || int_0^t w(s) s^{sum(alpha_i)} J(X)(s) ds ||_{L^q(lo,hi)} < a eps,
// where a = a_H on the fBm branch and 1 on the RL branch.
struct NormSpec {
    enum class Kind { weighted_sup, lq };
    Kind kind = Kind::weighted_sup;
    double alpha = 0;
    double q = formulas::infinity();
    formulas::Weight weight;
    double lo = 0, hi = 1;
    bool integrate_first = false;

    static NormSpec sup(double alpha = 0, double lo = 0, double hi = 1) {
        NormSpec n;
        n.kind = Kind::weighted_sup;
        n.alpha = alpha;
        n.lo = lo;
        n.hi = hi;
        return n;
    }
    static NormSpec lq_norm(double q, formulas::Weight w, double lo, double hi,
                            bool integrate_first = false) {
        NormSpec n;
        n.kind = Kind::lq;
        n.q = q;
        n.weight = std::move(w);
        n.lo = lo;
        n.hi = hi;
        n.integrate_first = integrate_first;
        return n;
    }
};

// Norm of one path under the spec'd functional (exponent conventions above;
// weight_sum is the process's sum of alpha_i).
double evaluate_norm(const GridPath& path, const NormSpec& norm, double weight_sum);

struct GridRule {
    std::size_t floor_n = 4096;  // 2^12
    double coef = 1.0;
    std::size_t cap = 1u << 16;

    std::size_t n_points(double eps, double tau) const;
};

struct ProbEstimate {
    double epsilon = 0;
    double p_hat = 0, stderr_ = 0;
    double wilson_lo = 0, wilson_hi = 0;  // z = 1.96
    std::size_t successes = 0, n_paths = 0, grid_n = 0;
    // refinement pair at twice the grid resolution
    double p_hat_refined = 0, stderr_refined = 0;
    std::size_t successes_refined = 0, n_paths_refined = 0, grid_n_refined = 0;
    double refinement_gap = 0;
    bool zero_successes = false;
    bool design_range_ok = true;  // p_hat within [1e-4, 0.9]
};

struct EstimateOptions {
    std::size_t n_paths = 100000;
    GridRule rule{};
    SeedSpec seed{};
    unsigned workers = 0;          // 0 -> hardware
    double refine_fraction = 0.25; // share of n_paths spent on the 2n grid
};

ProbEstimate estimate_prob(const ProcessSpec& spec, const NormSpec& norm, double eps,
                           const EstimateOptions& opts);

struct SmallBallResult {
    double tau = 0;
    std::vector<ProbEstimate> points;
    std::size_t n_paths = 0;
    double kappa_hat = 0, kappa_se = 0;
    double kappa_lo = 0, kappa_hi = 0;  // 95% CI (delta method over binomial errors)
    double fit_intercept = 0;
    double fit_r2 = 0;
    bool fit_warning = false;  // R^2 < 0.98
};

// Fits -log p_hat(eps) = kappa * eps^{-1/tau} + c over the ladder.
SmallBallResult estimate_kappa(const ProcessSpec& spec, const NormSpec& norm,
                               std::span<const double> eps_ladder, const EstimateOptions& opts);

struct ScalingRow {
    double alpha = 0;
    double kappa_hat = 0, kappa_se = 0;
    double ratio = 0;       // kappa_hat(alpha) / kappa_hat(0)
    double target = 0;      // 1 / (1 - alpha/tau)
    double rel_error = 0;
    bool pass = false;      // within 15%
};

// kappa ratios across alpha weightings, all evaluated on shared path batches
// so systematic bias cancels.
std::vector<ScalingRow> scaling_check(const ProcessSpec& spec, std::span<const double> alphas,
                                      std::span<const double> eps_ladder,
                                      const EstimateOptions& opts);

// Theorem 3.2-type check: kappa estimate for || int_0^t w s^{sum a} J(X) ds ||_{L^q}.
SmallBallResult lq_check(const ProcessSpec& spec, double q, const formulas::Weight& w,
                         std::span<const double> eps_ladder, const EstimateOptions& opts);

struct LqRatioRow {
    double kappa_1 = 0, kappa_2 = 0;
    double ratio = 0;   // kappa_1 / kappa_2
    double target = 0;  // (||w1||_r / ||w2||_r)^{1/(tau+1)}
    double rel_error = 0;
    bool pass = false;  // within 15%
};

LqRatioRow lq_ratio_check(const ProcessSpec& spec, double q, const formulas::Weight& w1,
                          const formulas::Weight& w2, std::span<const double> eps_ladder,
                          const EstimateOptions& opts);

}  // namespace fraclab::smallball
