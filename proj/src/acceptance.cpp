#include "fraclab/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>

#include "fraclab/errors.hpp"
#include "fraclab/formulas.hpp"
#include "fraclab/io.hpp"
#include "fraclab/lil.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/paths.hpp"
#include "fraclab/process_sampler.hpp"
#include "fraclab/smallball.hpp"
#include "fraclab/stats.hpp"
#include "fraclab/urn.hpp"

namespace fraclab::acceptance {

namespace {

namespace fm = fraclab::formulas;
namespace sb = fraclab::smallball;

struct Ctx {
    const Options& opts;
    unsigned workers;
    std::vector<CriterionResult> results;

    void save(const std::string& rel, const std::string& content) const {
        if (!opts.out_dir.empty()) io::write_file(opts.out_dir + "/" + rel, content);
    }
};

std::string fmtd(double v, int prec = 6) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    return buf;
}

void run_criterion(Ctx& ctx, int id, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
    if (!ctx.opts.only.empty() &&
        std::find(ctx.opts.only.begin(), ctx.opts.only.end(), id) == ctx.opts.only.end())
        return;
    CriterionResult r;
    r.id = id;
    r.name = name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        auto [pass, detail] = body();
        r.pass = pass;
        r.detail = std::move(detail);
    } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    ctx.results.push_back(std::move(r));
}

// --- criterion 1 -----------------------------------------------------------

std::pair<bool, std::string> c1_ah(Ctx&) {
    const double v = fm::a_h(0.5);
    const double err = std::abs(v - 1.0);
    return {err <= 1e-8, "a_H(0.5) = " + fmtd(v, 12) + ", |err| = " + fmtd(err, 3)};
}

// --- criterion 2 -----------------------------------------------------------

std::pair<bool, std::string> c2_sigma2w_mc(Ctx& ctx) {
    const std::size_t n_paths = ctx.opts.quick ? 20000 : 100000;
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 1025);
    std::ostringstream detail;
    bool pass = true;
    for (double lambda : {0.5, 1.0, 1.5}) {
        paths::RlSampler sampler(lambda, grid, paths::RlMethod::kernel_convolution);
        const SeedSpec seed = substream(ctx.opts.seed, 0x0200 + std::uint64_t(lambda * 10));
        std::vector<double> endvals(n_paths);
        parallel_for(n_paths, ctx.workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) endvals[k] = sampler.sample(seed, k).values.back();
        });
        const double var = stats::variance(endvals);
        const double se = var * std::sqrt(2.0 / double(n_paths - 1));
        const double want = fm::sigma2_w(lambda);
        const bool ok = std::abs(var - want) <= 3.0 * se;
        pass = pass && ok;
        detail << "lambda=" << lambda << ": mc " << fmtd(var) << " vs " << fmtd(want) << " (3se "
               << fmtd(3 * se, 3) << (ok ? ", ok) " : ", FAIL) ");
    }
    return {pass, detail.str()};
}

// --- criterion 3 -----------------------------------------------------------

std::pair<bool, std::string> c3_brownian_smallball(Ctx& ctx) {
    const std::vector<double> ladder{0.3, 0.38, 0.44, 0.5, 0.58, 0.68, 0.8};
    sb::EstimateOptions opts;
    opts.n_paths = ctx.opts.quick ? 150000 : 1500000;
    opts.seed = substream(ctx.opts.seed, 0x0300);
    opts.workers = ctx.workers;
    const auto spec = ProcessSpec::brownian();
    auto res = sb::estimate_kappa(spec, sb::NormSpec::sup(), ladder, opts);

    bool pass = true;
    std::ostringstream detail;
    for (const auto& p : res.points) {
        if (p.epsilon != 0.3 && p.epsilon != 0.5 && p.epsilon != 0.8) continue;
        const double exact = fm::brownian_sup_smallball_exact(p.epsilon);
        const auto w3 = stats::wilson_interval(p.successes, p.n_paths, 3.0);
        const bool ok = exact >= w3.lo - p.refinement_gap && exact <= w3.hi + p.refinement_gap;
        pass = pass && ok;
        detail << "eps=" << p.epsilon << ": p^ " << fmtd(p.p_hat, 4) << " vs exact "
               << fmtd(exact, 4) << (ok ? " ok; " : " FAIL; ");
    }
    const double kappa_true = std::numbers::pi * std::numbers::pi / 8.0;
    const double rel = std::abs(res.kappa_hat - kappa_true) / kappa_true;
    const bool kappa_ok = rel <= 0.10;
    pass = pass && kappa_ok;
    detail << "kappa^ " << fmtd(res.kappa_hat, 5) << " vs pi^2/8 " << fmtd(kappa_true, 5)
           << " (rel " << fmtd(rel, 3) << (kappa_ok ? ", ok)" : ", FAIL)");
    ctx.save("c3_brownian_smallball.csv", io::smallball_csv(res));
    auto j = io::to_json(res);
    ctx.save("c3_brownian_smallball.json", j.dump(2) + "\n");
    return {pass, detail.str()};
}

// --- criterion 4 -----------------------------------------------------------

std::pair<bool, std::string> c4_integrated_brownian(Ctx& ctx) {
    const std::vector<double> ladder{0.05, 0.075, 0.11, 0.17, 0.25, 0.38};
    sb::EstimateOptions opts;
    opts.n_paths = ctx.opts.quick ? 80000 : 400000;
    opts.seed = substream(ctx.opts.seed, 0x0400);
    opts.workers = ctx.workers;
    const auto spec = ProcessSpec::brownian({0.0});  // J_{1,(0)}(B) = integrated BM

    auto res = sb::estimate_kappa(spec, sb::NormSpec::sup(), ladder, opts);
    const bool band_ok = res.kappa_hat >= 0.30 && res.kappa_hat <= 1.53;
    std::ostringstream detail;
    detail << "kappa^ " << fmtd(res.kappa_hat, 4) << " in [0.30,1.53]"
           << (band_ok ? " ok; " : " FAIL; ");

    const std::vector<double> alphas{0.5, 0.75};
    auto rows = sb::scaling_check(spec, alphas, ladder, opts);
    bool scaling_ok = true;
    for (const auto& row : rows) {
        scaling_ok = scaling_ok && row.pass;
        detail << "alpha=" << row.alpha << ": ratio " << fmtd(row.ratio, 4) << " vs "
               << fmtd(row.target, 4) << " (rel " << fmtd(row.rel_error, 3)
               << (row.pass ? ", ok) " : ", FAIL) ");
    }
    ctx.save("c4_integrated_brownian.csv", io::smallball_csv(res));
    return {band_ok && scaling_ok, detail.str()};
}

// --- criterion 5 -----------------------------------------------------------

std::pair<bool, std::string> c5_long_run_variance(Ctx&) {
    struct Case {
        std::size_t m;
        std::vector<double> alphas;
        double gamma, H;
    };
    const std::vector<Case> cases{
        {0, {}, 0.0, 0.5}, {0, {}, 0.0, 0.7}, {1, {0.0}, 0.0, 0.5}, {1, {0.5}, 0.0, 0.5}};
    bool pass = true;
    std::ostringstream detail;
    for (const auto& cs : cases) {
        const auto cov = fm::r_rec_cov(cs.m, cs.alphas, cs.gamma, cs.H);
        const double got = cov.long_run_variance(1e-7);
        const double want = fm::sigma_tilde2_b(cs.m, cs.alphas, cs.gamma, cs.H);
        const double rel = std::abs(got - want) / want;
        const bool ok = rel <= 1e-4;
        pass = pass && ok;
        detail << "(m=" << cs.m << ",H=" << cs.H
               << (cs.m ? ",a=" + fmtd(cs.alphas[0], 3) : std::string()) << "): " << fmtd(got, 8)
               << " vs " << fmtd(want, 8) << " rel " << fmtd(rel, 2) << (ok ? " ok; " : " FAIL; ");
    }
    return {pass, detail.str()};
}

// --- criterion 6 -----------------------------------------------------------

std::pair<bool, std::string> c6_special_values(Ctx& ctx) {
    bool pass = true;
    std::ostringstream detail;
    for (double alpha : {0.0, 0.5, 1.0}) {
        fm::Sigma2Options o;
        o.workers = ctx.workers;
        o.seed = substream(ctx.opts.seed, 0x0600 + std::uint64_t(alpha * 10));
        const auto res = fm::sigma2_general(ProcessSpec::brownian({alpha}), o);
        const double want = 2.0 / ((2.0 - alpha) * (3.0 - 2.0 * alpha));
        const double rel = std::abs(res.value - want) / want;
        const bool ok = rel <= 1e-3 && res.within_3se;
        pass = pass && ok;
        detail << "alpha=" << alpha << ": " << fmtd(res.value, 7) << " vs " << fmtd(want, 7)
               << " rel " << fmtd(rel, 2) << (res.within_3se ? " mc-ok" : " mc-FAIL")
               << (ok ? "; " : " FAIL; ");
    }
    for (double h : {0.0, 1.0, 5.0}) {
        const double got = fm::r_lambda(0.5, h);
        const double err = std::abs(got - std::exp(-h / 2.0));
        const bool ok = err <= 1e-10;
        pass = pass && ok;
        detail << "r_1/2(" << h << ") err " << fmtd(err, 2) << (ok ? " ok; " : " FAIL; ");
    }
    return {pass, detail.str()};
}

// --- criterion 7 -----------------------------------------------------------

std::pair<bool, std::string> c7_integral_liminf(Ctx& ctx) {
    lil::LilExperiment exp;
    exp.spec = ProcessSpec::brownian();
    exp.theorem = lil::Theorem::integral_liminf;
    exp.horizons = {10, 31.6, 100, 316, 1000, 3162, 10000};
    exp.n_replicas = ctx.opts.quick ? 16 : 50;
    exp.seed = substream(ctx.opts.seed, 0x0700);
    exp.workers = ctx.workers;
    const auto rep = lil::run_integral_liminf(exp);

    const double target = std::numbers::pi / std::sqrt(2.0);
    const double median_last = rep.median_statistic.back();
    const double rel = std::abs(median_last - target) / target;
    const bool band_ok = rel <= 0.25;
    bool trend_ok = true;
    for (std::size_t k = 0; k + 1 < rep.median_statistic.size(); ++k)
        trend_ok = trend_ok && rep.median_statistic[k + 1] <= rep.median_statistic[k] + 1e-12;
    ctx.save("c7_integral_liminf.csv", io::lil_csv(rep));
    std::ostringstream detail;
    detail << "median running-min " << fmtd(median_last, 4) << " vs pi/sqrt2 " << fmtd(target, 4)
           << " (rel " << fmtd(rel, 3) << (band_ok ? ", ok)" : ", FAIL)")
           << "; running-min trend " << (trend_ok ? "nonincreasing" : "VIOLATED");
    return {band_ok && trend_ok, detail.str()};
}

// --- criterion 8 -----------------------------------------------------------

std::pair<bool, std::string> c8_sup_lil(Ctx& ctx) {
    bool pass = true;
    std::ostringstream detail;
    const std::vector<std::pair<std::string, ProcessSpec>> cases{
        {"brownian", ProcessSpec::brownian()},
        {"m1-alpha0.5", ProcessSpec::brownian({0.5})},
    };
    for (const auto& [label, spec] : cases) {
        lil::LilExperiment exp;
        exp.spec = spec;
        exp.theorem = lil::Theorem::sup_lil;
        for (double u : {1.0, 1.75, 2.5, 3.25, 4.0, 4.5}) exp.horizons.push_back(std::exp(std::exp(u)));
        exp.n_replicas = ctx.opts.quick ? 16 : 50;
        exp.seed = substream(ctx.opts.seed, 0x0800 + io::fnv1a(label));
        exp.workers = ctx.workers;
        const auto rep = lil::run_sup_lil(exp);
        const double ratio = rep.median_ratio.back();
        const bool band_ok = ratio >= 0.8 && ratio <= 1.1;
        // pooled trend across replicas and horizons
        std::vector<double> xs, ys;
        for (std::size_t r = 0; r < rep.statistic.size(); ++r)
            for (std::size_t k = 0; k < rep.horizons.size(); ++k) {
                xs.push_back(double(k));
                ys.push_back(rep.statistic[r][k]);
            }
        const double rho = stats::spearman_rho(xs, ys);
        const double pval = stats::spearman_pvalue_positive(rho, xs.size());
        const bool trend_ok = rho > 0 && pval < 0.01;
        pass = pass && band_ok && trend_ok;
        detail << label << ": ratio " << fmtd(ratio, 4) << " in [0.8,1.1]"
               << (band_ok ? " ok" : " FAIL") << ", trend rho " << fmtd(rho, 3) << " p "
               << fmtd(pval, 2) << (trend_ok ? " ok; " : " FAIL; ");
        ctx.save("c8_sup_lil_" + label + ".csv", io::lil_csv(rep));
    }
    return {pass, detail.str()};
}

// --- criterion 9 -----------------------------------------------------------

std::pair<bool, std::string> c9_urn(Ctx& ctx) {
    bool pass = true;
    std::ostringstream detail;
    // identity sweep
    double max_dev = 0;
    for (int i = 1; i <= 10; ++i) {
        for (int j = 1; j <= 10; ++j) {
            urn::UrnParams p{0.05 + 0.09 * i, 0.05 + 0.09 * j, 1.0, 1.0};
            const auto c = urn::rpw_params(p);
            max_dev = std::max(max_dev,
                               std::abs(c.rho * c.rho * c.sigma1_sq + c.sigma2_sq - c.sigma1_sq));
        }
    }
    const bool identity_ok = max_dev <= 1e-12;
    pass = pass && identity_ok;
    detail << "identity sweep max dev " << fmtd(max_dev, 2) << (identity_ok ? " ok; " : " FAIL; ");

    const std::uint64_t n = ctx.opts.quick ? (1u << 17) : 1048576;  // 2^20
    const std::size_t replicas = ctx.opts.quick ? 30 : 100;
    for (const auto& [label, p] : std::vector<std::pair<std::string, urn::UrnParams>>{
             {"symmetric", {0.5, 0.5, 1.0, 1.0}}, {"pw0.7-pb0.4", {0.7, 0.4, 1.0, 1.0}}}) {
        const auto d = urn::lil_diagnostics(p, n, replicas,
                                            substream(ctx.opts.seed, 0x0900 + io::fnv1a(label)),
                                            ctx.workers);
        const double mean_frac = stats::mean(d.y_over_n);
        const double se = std::sqrt(stats::variance(d.y_over_n) / double(replicas));
        const bool mean_ok = std::abs(mean_frac - d.consts.v) <= 3.0 * se;
        pass = pass && mean_ok;
        detail << label << ": Y_n/n " << fmtd(mean_frac, 5) << " vs v " << fmtd(d.consts.v, 5)
               << (mean_ok ? " ok" : " FAIL");
        if (label == "symmetric") {
            std::vector<double> finals;
            for (const auto& row : d.chung_y) finals.push_back(row.back());
            const double med = stats::median(finals);
            const double rel = std::abs(med - d.chung_theory) / d.chung_theory;
            const bool chung_ok = rel <= 0.30;
            pass = pass && chung_ok;
            detail << ", chung median " << fmtd(med, 4) << " vs " << fmtd(d.chung_theory, 4)
                   << " (rel " << fmtd(rel, 3) << (chung_ok ? ", ok)" : ", FAIL)");
            ctx.save("c9_urn_symmetric.json", io::to_json(d).dump(2) + "\n");
        }
        detail << "; ";
    }
    return {pass, detail.str()};
}

// --- criterion 10 ----------------------------------------------------------

std::pair<bool, std::string> c10_operator_laws(Ctx&) {
    const std::size_t n = 16385;  // 2^14 + 1 points on [0,1]
    const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = grid[i];
    const GridPath path(grid, w, 1.0);

    const auto i_compose = ops::riemann_liouville(ops::riemann_liouville(path, 0.7), 0.5);
    const auto i_direct = ops::riemann_liouville(path, 1.2);
    double sup1 = 0;
    for (std::size_t i = 0; i < n; ++i)
        sup1 = std::max(sup1, std::abs(i_compose.values[i] - i_direct.values[i]));

    // J_{2,0} vs I_2 on a curved analytic input
    std::vector<double> w2(n);
    for (std::size_t i = 0; i < n; ++i) w2[i] = std::sin(grid[i]);
    const GridPath path2(grid, w2, 1.0);
    const std::vector<double> zeros{0.0, 0.0};
    const auto j20 = ops::compose_weighted(path2, zeros);
    const auto i2 = ops::integrate(ops::integrate(path2));
    double sup2 = 0;
    for (std::size_t i = 0; i < n; ++i)
        sup2 = std::max(sup2, std::abs(j20.values[i] - i2.values[i]));

    const bool ok = sup1 <= 1e-4 && sup2 <= 1e-4;
    return {ok, "semigroup sup-err " + fmtd(sup1, 3) + ", J_{2,0} vs I_2 sup-err " + fmtd(sup2, 3)};
}

// --- criterion 11 ----------------------------------------------------------

struct Artifacts {
    std::map<std::string, std::string> files;
};

Artifacts representative_run(const Ctx& ctx, unsigned workers) {
    Artifacts a;
    const SeedSpec seed = substream(ctx.opts.seed, 0x0B00);

    // sample
    {
        const TimeGrid grid = TimeGrid::uniform(0.0, 1.0, 257);
        paths::FbmSampler sampler(0.7, grid, paths::FbmMethod::circulant);
        std::vector<GridPath> ps(4);
        parallel_for(ps.size(), workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) ps[k] = sampler.sample(seed, k);
        });
        std::string csv = "t,path0,path1,path2,path3\n";
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv += io::format_double(grid[i]);
            for (const auto& p : ps) {
                csv += ',';
                csv += io::format_double(p.values[i]);
            }
            csv += '\n';
        }
        a.files["sample.csv"] = std::move(csv);
    }
    // smallball
    {
        sb::EstimateOptions o;
        o.n_paths = 20000;
        o.rule.floor_n = 512;
        o.seed = substream(seed, 1);
        o.workers = workers;
        const auto pe = sb::estimate_prob(ProcessSpec::brownian(), sb::NormSpec::sup(), 0.8, o);
        sb::SmallBallResult r;
        r.points = {pe};
        a.files["smallball.csv"] = io::smallball_csv(r);
    }
    // lil
    {
        lil::LilExperiment exp;
        exp.spec = ProcessSpec::brownian();
        exp.theorem = lil::Theorem::integral_liminf;
        exp.horizons = {10, 100};
        exp.n_replicas = 8;
        exp.seed = substream(seed, 2);
        exp.workers = workers;
        a.files["lil.csv"] = io::lil_csv(lil::run_integral_liminf(exp));
    }
    // urn
    {
        std::vector<urn::UrnTrajectory> ts;
        std::vector<std::uint64_t> cps{0, 1024, 4096};
        for (std::uint64_t r = 0; r < 8; ++r)
            ts.push_back(urn::simulate({0.7, 0.4, 1.0, 1.0}, 4096, substream(seed, 3), r, cps));
        a.files["urn.csv"] = io::urn_csv(ts);
    }
    return a;
}

std::pair<bool, std::string> c11_determinism(Ctx& ctx) {
    const auto a1 = representative_run(ctx, 1);
    const auto a2 = representative_run(ctx, std::max(2u, ctx.workers));
    const auto a3 = representative_run(ctx, std::max(2u, ctx.workers));  // repeat run
    bool pass = true;
    std::ostringstream detail;
    for (const auto& [name, content] : a1.files) {
        const bool same = a2.files.at(name) == content && a3.files.at(name) == content;
        pass = pass && same;
        detail << name << (same ? " identical; " : " DIFFERS; ");
        if (!ctx.opts.out_dir.empty()) ctx.save("c11_" + name, content);
    }
    return {pass, detail.str()};
}

}  // namespace

std::vector<CriterionResult> run_all(const Options& opts) {
    Ctx ctx{opts, opts.workers ? opts.workers : default_workers(), {}};
    run_criterion(ctx, 1, "a_H(1/2) = 1", [&] { return c1_ah(ctx); });
    run_criterion(ctx, 2, "sigma2_W vs MC variance", [&] { return c2_sigma2w_mc(ctx); });
    run_criterion(ctx, 3, "brownian sup small-ball + kappa(1/2)", [&] { return c3_brownian_smallball(ctx); });
    run_criterion(ctx, 4, "integrated-brownian kappa band + alpha scaling", [&] { return c4_integrated_brownian(ctx); });
    run_criterion(ctx, 5, "2 int r_rec = sigma~^2", [&] { return c5_long_run_variance(ctx); });
    run_criterion(ctx, 6, "closed-form special values", [&] { return c6_special_values(ctx); });
    run_criterion(ctx, 7, "integral liminf (pi/sqrt 2)", [&] { return c7_integral_liminf(ctx); });
    run_criterion(ctx, 8, "sup-LIL band + trend", [&] { return c8_sup_lil(ctx); });
    run_criterion(ctx, 9, "urn identities, means, chung", [&] { return c9_urn(ctx); });
    run_criterion(ctx, 10, "operator laws", [&] { return c10_operator_laws(ctx); });
    run_criterion(ctx, 11, "determinism across workers", [&] { return c11_determinism(ctx); });
    return ctx.results;
}

std::string format_line(const CriterionResult& r) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "[%6.1fs] ", r.seconds);
    return std::string(r.pass ? "PASS " : "FAIL ") + std::to_string(r.id) + "  " + r.name + "  " +
           buf + r.detail;
}

}  // namespace fraclab::acceptance
