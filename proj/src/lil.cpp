#include "fraclab/lil.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclab/errors.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/paths.hpp"
#include "fraclab/stats.hpp"

namespace fraclab::lil {

namespace {

void finalize_medians(LilReport& rep) {
    const std::size_t nh = rep.horizons.size();
    rep.median_statistic.resize(nh);
    rep.median_ratio.resize(nh);
    const double ref = std::isnan(rep.theory_constant)
                           ? 0.5 * (rep.theory_lo + rep.theory_hi)
                           : rep.theory_constant;
    for (std::size_t k = 0; k < nh; ++k) {
        std::vector<double> col;
        col.reserve(rep.statistic.size());
        for (const auto& row : rep.statistic) col.push_back(row[k]);
        rep.median_statistic[k] = stats::median(std::move(col));
        rep.median_ratio[k] = rep.median_statistic[k] / ref;
    }
}

}  // namespace

void LilExperiment::validate() const {
    spec.validate();
    if (horizons.empty()) throw parameter_error("LilExperiment: need at least one horizon");
    for (std::size_t i = 0; i + 1 < horizons.size(); ++i)
        if (!(horizons[i] < horizons[i + 1]))
            throw parameter_error("LilExperiment: horizons must increase");
    const double min_h = theorem == Theorem::integral_liminf ? 3.0 : std::exp(1.0) * 1.001;
    if (horizons.front() <= min_h)
        throw parameter_error("LilExperiment: horizons too small for an iterated logarithm");
    if (n_replicas == 0) throw parameter_error("LilExperiment: need replicas");
    if (!(log_spacing > 0 && log_spacing <= 0.05))
        throw parameter_error("LilExperiment: log spacing must lie in (0, 0.05]");
}

LilReport run_sup_lil(const LilExperiment& exp) {
    exp.validate();
    const auto cov = formulas::stationary_cov(exp.spec);
    formulas::Sigma2Options s2opts;
    s2opts.mc_check = false;
    const double sigma = std::sqrt(formulas::sigma2_general(exp.spec, s2opts).value);

    const double s_max = std::log(exp.horizons.back());
    const double h = exp.log_spacing;
    const std::size_t n = std::size_t(std::ceil(s_max / h)) + 2;
    const TimeGrid grid = TimeGrid::uniform(0.0, double(n - 1) * h, n);
    paths::StationarySampler sampler([&cov](double lag) { return cov(lag); }, grid);

    LilReport rep;
    rep.horizons = exp.horizons;
    rep.theory_constant = sigma;
    rep.theory_lo = rep.theory_hi = sigma;
    rep.provenance = "formulas.sigma2_general";
    rep.statistic.assign(exp.n_replicas, std::vector<double>(exp.horizons.size(), 0.0));

    const unsigned workers = exp.workers ? exp.workers : default_workers();
    parallel_for(exp.n_replicas, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            const GridPath u = sampler.sample(exp.seed, r);
            double run_max = 0;
            std::size_t j = 0;
            for (std::size_t k = 0; k < exp.horizons.size(); ++k) {
                const double s_k = std::log(exp.horizons[k]);
                for (; j < n && double(j) * h <= s_k + 1e-12; ++j)
                    run_max = std::max(run_max, std::abs(u.values[j]));
                rep.statistic[r][k] = run_max / std::sqrt(2.0 * std::log(s_k));
            }
        }
    });
    finalize_medians(rep);
    return rep;
}

LilReport run_chung_liminf(const LilExperiment& exp, const formulas::KappaInfo& kappa) {
    exp.validate();
    const double tau = exp.spec.base_index() + double(exp.spec.m());
    const double alpha = exp.alpha;
    if (!(alpha < tau)) throw parameter_error("run_chung_liminf: alpha must be < tau");
    const double decay = tau - alpha;
    const double a_factor = exp.spec.fbm_branch() ? formulas::a_h(exp.spec.hurst) : 1.0;

    LilReport rep;
    rep.horizons = exp.horizons;
    if (kappa.kind == formulas::KappaInfo::Kind::exact) {
        rep.theory_constant = formulas::lil_constant(tau, alpha, kappa.value, a_factor);
        rep.theory_lo = rep.theory_hi = rep.theory_constant;
        rep.provenance = "formulas.lil_constant(kappa_known)";
    } else if (kappa.kind == formulas::KappaInfo::Kind::bounds) {
        rep.theory_constant = std::numeric_limits<double>::quiet_NaN();
        rep.theory_lo = formulas::lil_constant(tau, alpha, kappa.lo, a_factor);
        rep.theory_hi = formulas::lil_constant(tau, alpha, kappa.hi, a_factor);
        rep.provenance = "formulas.lil_constant(kappa bounds)";
    } else {
        throw parameter_error("run_chung_liminf: kappa unknown; supply a band or estimate");
    }

    const auto cov = formulas::stationary_cov(exp.spec);
    const double h = exp.log_spacing;
    const double s_pre = 15.0 / decay;  // window below t = 1; dropped weight <= e^{-15}
    const double s_max = std::log(exp.horizons.back());
    const std::size_t n = std::size_t(std::ceil((s_pre + s_max) / h)) + 2;
    const TimeGrid grid = TimeGrid::uniform(0.0, double(n - 1) * h, n);
    paths::StationarySampler sampler([&cov](double lag) { return cov(lag); }, grid);

    rep.statistic.assign(exp.n_replicas, std::vector<double>(exp.horizons.size(), 0.0));
    const unsigned workers = exp.workers ? exp.workers : default_workers();
    parallel_for(exp.n_replicas, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            const GridPath u = sampler.sample(exp.seed, r);
            double run_min = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < exp.horizons.size(); ++k) {
                const double log_t = std::log(exp.horizons[k]);
                const double loglog = std::log(log_t);
                // only the ~40/decay window below log T carries weight
                const double s_lo = std::max(0.0, s_pre + log_t - 40.0 / decay);
                const std::size_t j_lo = std::size_t(s_lo / h);
                const std::size_t j_hi = std::min(n - 1, std::size_t((s_pre + log_t) / h));
                double wsup = 0;
                for (std::size_t j = j_lo; j <= j_hi; ++j) {
                    const double s = double(j) * h - s_pre;  // actual log time
                    const double v = std::exp(decay * (s - log_t)) * std::abs(u.values[j]);
                    if (v > wsup) wsup = v;
                }
                const double stat = std::pow(loglog, tau) * wsup;
                run_min = std::min(run_min, stat);
                rep.statistic[r][k] = run_min;
            }
        }
    });
    finalize_medians(rep);
    return rep;
}

LilReport run_integral_liminf(const LilExperiment& exp) {
    exp.validate();
    const auto& spec = exp.spec;
    double sigma_tilde2;
    if (spec.fbm_branch())
        sigma_tilde2 = formulas::sigma_tilde2_b(spec.m(), spec.weights, spec.gamma, spec.hurst);
    else
        sigma_tilde2 = formulas::sigma_tilde2_w(spec.m(), spec.weights, spec.lambda);
    const double sigma_tilde = std::sqrt(sigma_tilde2);

    LilReport rep;
    rep.horizons = exp.horizons;
    rep.theory_constant = std::numbers::pi / std::sqrt(8.0) * sigma_tilde;
    rep.theory_lo = rep.theory_hi = rep.theory_constant;
    rep.provenance = "formulas.sigma_tilde2";

    const auto cov = formulas::stationary_cov(spec);
    const double h = exp.log_spacing;
    const double s_max = exp.horizons.back();
    const std::size_t n = std::size_t(std::ceil(s_max / h)) + 2;
    const TimeGrid grid = TimeGrid::uniform(0.0, double(n - 1) * h, n);
    paths::StationarySampler sampler([&cov](double lag) { return cov(lag); }, grid);

    rep.statistic.assign(exp.n_replicas, std::vector<double>(exp.horizons.size(), 0.0));
    rep.endpoint_over_sqrt.assign(exp.n_replicas, std::vector<double>(exp.horizons.size(), 0.0));
    const unsigned workers = exp.workers ? exp.workers : default_workers();
    parallel_for(exp.n_replicas, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            const GridPath u = sampler.sample(exp.seed, r);
            double v = 0, vsup = 0, run_min = std::numeric_limits<double>::infinity();
            std::size_t j = 0;
            for (std::size_t k = 0; k < exp.horizons.size(); ++k) {
                const double s_k = exp.horizons[k];
                for (; double(j + 1) * h <= s_k + 1e-12 && j + 1 < n; ++j) {
                    v += 0.5 * (u.values[j] + u.values[j + 1]) * h;
                    vsup = std::max(vsup, std::abs(v));
                }
                const double stat = std::sqrt(std::log(std::log(s_k)) / s_k) * vsup;
                run_min = std::min(run_min, stat);
                rep.statistic[r][k] = run_min;
                rep.endpoint_over_sqrt[r][k] = v / std::sqrt(s_k);
            }
        }
    });
    finalize_medians(rep);
    return rep;
}

}  // namespace fraclab::lil
