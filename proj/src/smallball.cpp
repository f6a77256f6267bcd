#include "fraclab/smallball.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "fraclab/errors.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/process_sampler.hpp"
#include "fraclab/stats.hpp"

namespace fraclab::smallball {

namespace {

struct NormEvaluator {
    NormSpec::Kind kind;
    std::vector<double> factor;  // per-point multiplier (t^{-e} or w(t) t^p)
    std::size_t i_lo = 0, i_hi = 0;
    double q = 0;
    bool q_is_inf = false;
    bool integrate_first = false;
    const std::vector<double>* t = nullptr;

    double eval(const std::vector<double>& x, std::vector<double>& scratch) const {
        if (kind == NormSpec::Kind::weighted_sup) {
            double mx = 0;
            for (std::size_t i = i_lo; i <= i_hi; ++i) {
                const double v = factor[i] * std::abs(x[i]);
                if (v > mx) mx = v;
            }
            return mx;
        }
        const auto& tt = *t;
        const std::size_t n = x.size();
        scratch.resize(n);
        if (integrate_first) {
            double acc = 0, prev = factor[0] * x[0];
            scratch[0] = 0;
            for (std::size_t i = 1; i < n; ++i) {
                const double cur = factor[i] * x[i];
                acc += 0.5 * (prev + cur) * (tt[i] - tt[i - 1]);
                scratch[i] = acc;
                prev = cur;
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) scratch[i] = factor[i] * x[i];
        }
        if (q_is_inf) {
            double mx = 0;
            for (std::size_t i = i_lo; i <= i_hi; ++i) mx = std::max(mx, std::abs(scratch[i]));
            return mx;
        }
        double integral = 0;
        double prev = std::pow(std::abs(scratch[i_lo]), q);
        for (std::size_t i = i_lo; i < i_hi; ++i) {
            const double cur = q == 2.0 ? scratch[i + 1] * scratch[i + 1]
                                        : std::pow(std::abs(scratch[i + 1]), q);
            integral += 0.5 * (prev + cur) * (tt[i + 1] - tt[i]);
            prev = cur;
        }
        return std::pow(integral, 1.0 / q);
    }
};

NormEvaluator make_evaluator(const NormSpec& norm, const TimeGrid& grid, double weight_sum) {
    NormEvaluator ev;
    ev.kind = norm.kind;
    ev.t = &grid.points();
    const auto& t = grid.points();
    const std::size_t n = t.size();
    ev.factor.resize(n);
    // window
    ev.i_lo = 0;
    while (ev.i_lo + 1 < n && t[ev.i_lo] < norm.lo - 1e-12) ++ev.i_lo;
    ev.i_hi = n - 1;
    while (ev.i_hi > 0 && t[ev.i_hi] > norm.hi + 1e-12) --ev.i_hi;
    if (ev.i_hi < ev.i_lo) throw parameter_error("smallball: empty norm window");

    if (norm.kind == NormSpec::Kind::weighted_sup) {
        const double e = norm.alpha - weight_sum;
        for (std::size_t i = 0; i < n; ++i)
            ev.factor[i] = t[i] == 0 ? (e >= 0 ? 0.0 : 0.0) : std::pow(t[i], -e);
        if (t[0] == 0 && e < 0) ev.factor[0] = 0.0;  // limit value
    } else {
        if (!(norm.q >= 1)) throw parameter_error("smallball: Lq norm needs q >= 1");
        ev.q = norm.q;
        ev.q_is_inf = std::isinf(norm.q);
        ev.integrate_first = norm.integrate_first;
        for (std::size_t i = 0; i < n; ++i) {
            const double w = norm.weight(t[i]);
            const double p = weight_sum == 0 ? 1.0 : (t[i] == 0 ? (weight_sum > 0 ? 0.0 : 0.0)
                                                                : std::pow(t[i], weight_sum));
            ev.factor[i] = w * p;
        }
    }
    return ev;
}

// One batch: sample n_paths trajectories, evaluate every norm on each path,
// count thresholds.  counts[norm][threshold].
std::vector<std::vector<std::size_t>> count_batch(const ProcessSpec& spec, std::size_t grid_n,
                                                  std::size_t n_paths, SeedSpec seed,
                                                  unsigned workers,
                                                  const std::vector<NormSpec>& norms,
                                                  const std::vector<std::vector<double>>& thr,
                                                  double weight_sum) {
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, grid_n);
    ProcessSampler sampler(spec, grid);
    std::vector<NormEvaluator> evals;
    evals.reserve(norms.size());
    for (const auto& nm : norms) evals.push_back(make_evaluator(nm, grid, weight_sum));

    workers = workers ? workers : default_workers();
    const std::size_t nchunks = std::min<std::size_t>(std::max<std::size_t>(n_paths, 1), workers);
    std::vector<std::vector<std::vector<std::size_t>>> partial(
        nchunks, std::vector<std::vector<std::size_t>>(norms.size()));
    for (auto& per_norm : partial)
        for (std::size_t k = 0; k < norms.size(); ++k) per_norm[k].assign(thr[k].size(), 0);

    parallel_for(n_paths, unsigned(nchunks), [&](std::size_t begin, std::size_t end) {
        // identify chunk from the fixed partition
        const std::size_t base = n_paths / nchunks, rem = n_paths % nchunks;
        std::size_t c = 0, b = 0;
        while (c < nchunks) {
            const std::size_t len = base + (c < rem ? 1 : 0);
            if (b == begin) break;
            b += len;
            ++c;
        }
        auto& counts = partial[c];
        std::vector<double> scratch;
        for (std::size_t k = begin; k < end; ++k) {
            const GridPath p = sampler.sample(seed, k);
            for (std::size_t j = 0; j < evals.size(); ++j) {
                const double v = evals[j].eval(p.values, scratch);
                const auto& ts = thr[j];
                for (std::size_t q = 0; q < ts.size(); ++q)
                    if (v < ts[q]) ++counts[j][q];
            }
        }
    });

    std::vector<std::vector<std::size_t>> total(norms.size());
    for (std::size_t j = 0; j < norms.size(); ++j) {
        total[j].assign(thr[j].size(), 0);
        for (std::size_t c = 0; c < nchunks; ++c)
            for (std::size_t q = 0; q < thr[j].size(); ++q) total[j][q] += partial[c][j][q];
    }
    return total;
}

void check_norm(const ProcessSpec& spec, const NormSpec& norm) {
    if (norm.kind == NormSpec::Kind::weighted_sup && norm.lo == 0) {
        const double tau = spec.base_index() + double(spec.m());
        if (!(norm.alpha < tau))
            throw parameter_error(
                "smallball: weighted-sup exponent must satisfy alpha < process index when the "
                "window touches 0");
    }
}

double norm_scale(const ProcessSpec& spec) {
    return spec.fbm_branch() ? formulas::a_h(spec.hurst) : 1.0;
}

ProbEstimate make_estimate(double eps, std::size_t succ, std::size_t n, std::size_t grid_n,
                           std::size_t succ_r, std::size_t n_r, std::size_t grid_r) {
    ProbEstimate pe;
    pe.epsilon = eps;
    pe.successes = succ;
    pe.n_paths = n;
    pe.grid_n = grid_n;
    pe.p_hat = double(succ) / double(n);
    pe.stderr_ = std::sqrt(pe.p_hat * (1 - pe.p_hat) / double(n));
    const auto wi = stats::wilson_interval(succ, n, 1.96);
    pe.wilson_lo = wi.lo;
    pe.wilson_hi = wi.hi;
    pe.successes_refined = succ_r;
    pe.n_paths_refined = n_r;
    pe.grid_n_refined = grid_r;
    pe.p_hat_refined = n_r ? double(succ_r) / double(n_r) : 0.0;
    pe.stderr_refined = n_r ? std::sqrt(pe.p_hat_refined * (1 - pe.p_hat_refined) / double(n_r)) : 0.0;
    pe.refinement_gap = std::abs(pe.p_hat - pe.p_hat_refined);
    pe.zero_successes = succ == 0;
    pe.design_range_ok = pe.p_hat >= 1e-4 && pe.p_hat <= 0.9;
    return pe;
}

struct LadderData {
    std::vector<ProbEstimate> points;  // per ladder epsilon, per norm flattened [norm][eps]
};

// Shared-batch ladder estimation for several norms at once.
std::vector<std::vector<ProbEstimate>> run_ladders(const ProcessSpec& spec,
                                                   const std::vector<NormSpec>& norms,
                                                   std::span<const double> ladder,
                                                   const EstimateOptions& opts) {
    spec.validate();
    for (const auto& nm : norms) check_norm(spec, nm);
    const double tau = spec.base_index() + double(spec.m());
    const double scale = norm_scale(spec);

    // group ladder points by grid size
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < ladder.size(); ++i)
        groups[opts.rule.n_points(ladder[i], tau)].push_back(i);

    std::vector<std::vector<ProbEstimate>> out(norms.size(),
                                               std::vector<ProbEstimate>(ladder.size()));
    const std::size_t n_ref = std::max<std::size_t>(std::size_t(double(opts.n_paths) * opts.refine_fraction), 1000);
    for (const auto& [grid_n, idxs] : groups) {
        std::vector<std::vector<double>> thr(norms.size());
        for (auto& tv : thr) {
            tv.reserve(idxs.size());
            for (std::size_t i : idxs) tv.push_back(scale * ladder[i]);
        }
        const auto counts =
            count_batch(spec, grid_n, opts.n_paths, substream(opts.seed, 0xC0A5 ^ grid_n),
                        opts.workers, norms, thr, spec.weight_sum());
        const auto counts_ref =
            count_batch(spec, 2 * grid_n, n_ref, substream(opts.seed, 0xF14E ^ grid_n),
                        opts.workers, norms, thr, spec.weight_sum());
        for (std::size_t j = 0; j < norms.size(); ++j)
            for (std::size_t q = 0; q < idxs.size(); ++q)
                out[j][idxs[q]] =
                    make_estimate(ladder[idxs[q]], counts[j][q], opts.n_paths, grid_n,
                                  counts_ref[j][q], n_ref, 2 * grid_n);
    }
    return out;
}

SmallBallResult fit_kappa(double tau, std::vector<ProbEstimate> points, std::size_t n_paths) {
    SmallBallResult res;
    res.tau = tau;
    res.n_paths = n_paths;
    std::vector<double> xs, ys, vars;
    for (const auto& pe : points) {
        if (pe.successes == 0 || pe.successes == pe.n_paths) continue;
        xs.push_back(std::pow(pe.epsilon, -1.0 / tau));
        ys.push_back(-std::log(pe.p_hat));
        vars.push_back((1.0 - pe.p_hat) / (double(pe.n_paths) * pe.p_hat));
    }
    res.points = std::move(points);
    if (xs.size() < 4)
        throw parameter_error("estimate_kappa: need at least 4 usable ladder points");
    const auto fit = stats::weighted_linfit(xs, ys, vars);
    res.kappa_hat = fit.slope;
    res.kappa_se = fit.slope_se;
    res.kappa_lo = fit.slope - 1.96 * fit.slope_se;
    res.kappa_hi = fit.slope + 1.96 * fit.slope_se;
    res.fit_intercept = fit.intercept;
    res.fit_r2 = fit.r2;
    res.fit_warning = fit.r2 < 0.98;
    return res;
}

}  // namespace

std::size_t GridRule::n_points(double eps, double tau) const {
    const double suggested = 64.0 * std::round(coef * std::pow(eps, -1.0 / tau));
    std::size_t n = std::max<double>(double(floor_n), suggested) > double(cap)
                        ? cap
                        : std::size_t(std::max<double>(double(floor_n), suggested));
    return n;
}

double evaluate_norm(const GridPath& path, const NormSpec& norm, double weight_sum) {
    auto ev = make_evaluator(norm, path.grid, weight_sum);
    std::vector<double> scratch;
    return ev.eval(path.values, scratch);
}

ProbEstimate estimate_prob(const ProcessSpec& spec, const NormSpec& norm, double eps,
                           const EstimateOptions& opts) {
    auto ladders = run_ladders(spec, {norm}, std::vector<double>{eps}, opts);
    return ladders[0][0];
}

SmallBallResult estimate_kappa(const ProcessSpec& spec, const NormSpec& norm,
                               std::span<const double> eps_ladder, const EstimateOptions& opts) {
    if (eps_ladder.size() < 4)
        throw parameter_error("estimate_kappa: need at least 4 ladder points");
    auto ladders = run_ladders(spec, {norm}, eps_ladder, opts);
    const double tau = spec.base_index() + double(spec.m());
    return fit_kappa(tau, std::move(ladders[0]), opts.n_paths);
}

std::vector<ScalingRow> scaling_check(const ProcessSpec& spec, std::span<const double> alphas,
                                      std::span<const double> eps_ladder,
                                      const EstimateOptions& opts) {
    const double tau = spec.base_index() + double(spec.m());
    for (double a : alphas)
        if (!(a < tau)) throw parameter_error("scaling_check: every alpha must be < tau");
    std::vector<NormSpec> norms{NormSpec::sup(0.0)};
    for (double a : alphas) norms.push_back(NormSpec::sup(a));
    auto ladders = run_ladders(spec, norms, eps_ladder, opts);
    auto base_fit = fit_kappa(tau, std::move(ladders[0]), opts.n_paths);
    std::vector<ScalingRow> rows;
    for (std::size_t j = 0; j < alphas.size(); ++j) {
        auto fit = fit_kappa(tau, std::move(ladders[j + 1]), opts.n_paths);
        ScalingRow row;
        row.alpha = alphas[j];
        row.kappa_hat = fit.kappa_hat;
        row.kappa_se = fit.kappa_se;
        row.ratio = fit.kappa_hat / base_fit.kappa_hat;
        row.target = 1.0 / (1.0 - alphas[j] / tau);
        row.rel_error = std::abs(row.ratio - row.target) / row.target;
        row.pass = row.rel_error <= 0.15;
        rows.push_back(row);
    }
    return rows;
}

SmallBallResult lq_check(const ProcessSpec& spec, double q, const formulas::Weight& w,
                         std::span<const double> eps_ladder, const EstimateOptions& opts) {
    NormSpec norm = NormSpec::lq_norm(q, w, w.support_lo(), w.support_hi(), true);
    auto ladders = run_ladders(spec, {norm}, eps_ladder, opts);
    // integrated functional: small-ball exponent is tau + 1
    const double tau = spec.base_index() + double(spec.m()) + 1.0;
    return fit_kappa(tau, std::move(ladders[0]), opts.n_paths);
}

LqRatioRow lq_ratio_check(const ProcessSpec& spec, double q, const formulas::Weight& w1,
                          const formulas::Weight& w2, std::span<const double> eps_ladder,
                          const EstimateOptions& opts) {
    NormSpec n1 = NormSpec::lq_norm(q, w1, w1.support_lo(), w1.support_hi(), true);
    NormSpec n2 = NormSpec::lq_norm(q, w2, w2.support_lo(), w2.support_hi(), true);
    auto ladders = run_ladders(spec, {n1, n2}, eps_ladder, opts);
    const double tau = spec.base_index() + double(spec.m()) + 1.0;
    auto f1 = fit_kappa(tau, std::move(ladders[0]), opts.n_paths);
    auto f2 = fit_kappa(tau, std::move(ladders[1]), opts.n_paths);
    LqRatioRow row;
    row.kappa_1 = f1.kappa_hat;
    row.kappa_2 = f2.kappa_hat;
    row.ratio = f1.kappa_hat / f2.kappa_hat;
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double r = 1.0 / (tau + inv_q);
    row.target = std::pow(formulas::lr_norm(w1, r) / formulas::lr_norm(w2, r), 1.0 / tau);
    row.rel_error = std::abs(row.ratio - row.target) / row.target;
    row.pass = row.rel_error <= 0.15;
    return row;
}

}  // namespace fraclab::smallball
