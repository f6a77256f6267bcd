// fraclab: batch experiment runner for the fractional-process laboratory.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <numbers>

#include "fraclab/acceptance.hpp"
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
#include "fraclab/version.hpp"

namespace {

using namespace fraclab;

struct ProcessFlags {
    std::string process = "brownian";
    double H = 0.5, lambda = 0.5, gamma = 0.0;
    std::vector<double> alphas;

    void attach(CLI::App* cmd) {
        cmd->add_option("--process", process, "brownian|fbm|rl|fbm_frac")
            ->check(CLI::IsMember({"brownian", "fbm", "rl", "fbm_frac"}))
            ->capture_default_str();
        cmd->add_option("--H", H, "Hurst index (fbm branches)")->capture_default_str();
        cmd->add_option("--lambda", lambda, "RL exponent")->capture_default_str();
        cmd->add_option("--gamma", gamma, "fractional integration order")->capture_default_str();
        cmd->add_option("--alphas", alphas, "weighted-integral exponents alpha_1..alpha_m");
    }

    ProcessSpec spec() const {
        if (process == "brownian") return ProcessSpec::brownian(alphas);
        if (process == "fbm") return ProcessSpec::fbm(H, alphas);
        if (process == "rl") return ProcessSpec::rl(lambda, alphas);
        return ProcessSpec::fbm_frac(H, gamma, alphas);
    }
};

struct SeedFlags {
    std::uint64_t seed = 20260810;
    std::uint64_t stream = 0;

    void attach(CLI::App* cmd) {
        cmd->add_option("--seed", seed, "master seed")->capture_default_str();
        cmd->add_option("--stream", stream, "stream id")->capture_default_str();
    }
    SeedSpec seedspec() const { return {seed, stream}; }
};

std::string config_hash(CLI::App& app) {
    return std::to_string(io::fnv1a(app.config_to_str(true, false)));
}

void write_gnuplot(const std::string& dir, const std::string& name, const std::string& script) {
    io::write_file(dir + "/" + name, script);
}

int cmd_sample(CLI::App& app, const ProcessFlags& pf, const SeedFlags& sf, std::size_t grid_n,
               double t_max, std::size_t n_paths, const std::string& method,
               const std::string& out_dir, unsigned workers) {
    const TimeGrid grid = TimeGrid::uniform(0.0, t_max, grid_n);
    const ProcessSpec spec = pf.spec();
    if (spec.base == BaseKind::fbm && spec.m() == 0 && method == "cholesky") {
        // direct exercise of the dense-covariance sampler
        paths::FbmSampler sampler(spec.hurst, grid, paths::FbmMethod::cholesky);
        std::vector<GridPath> ps;
        for (std::size_t k = 0; k < n_paths; ++k) ps.push_back(sampler.sample(sf.seedspec(), k));
        std::string csv = "t";
        for (std::size_t k = 0; k < n_paths; ++k) csv += ",path" + std::to_string(k);
        csv += '\n';
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv += io::format_double(grid[i]);
            for (const auto& p : ps) csv += "," + io::format_double(p.values[i]);
            csv += '\n';
        }
        io::write_file(out_dir + "/sample.csv", csv);
    } else {
        ProcessSampler sampler(spec, grid);
        std::vector<GridPath> ps(n_paths);
        parallel_for(n_paths, workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) ps[k] = sampler.sample(sf.seedspec(), k);
        });
        std::string csv = "t";
        for (std::size_t k = 0; k < n_paths; ++k) csv += ",path" + std::to_string(k);
        csv += '\n';
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv += io::format_double(grid[i]);
            for (const auto& p : ps) csv += "," + io::format_double(p.values[i]);
            csv += '\n';
        }
        io::write_file(out_dir + "/sample.csv", csv);
    }
    auto j = io::meta(config_hash(app));
    j["subcommand"] = "sample";
    j["n_paths"] = n_paths;
    j["grid_n"] = grid_n;
    io::write_file(out_dir + "/sample.json", j.dump(2) + "\n");
    write_gnuplot(out_dir, "sample.gnuplot",
                  "set datafile separator ','\nset key autotitle columnhead\n"
                  "plot for [i=2:" + std::to_string(n_paths + 1) + "] 'sample.csv' using 1:i with lines\n");
    std::cout << "wrote " << out_dir << "/sample.csv (" << n_paths << " paths, " << grid_n
              << " points)\n";
    return 0;
}

int cmd_formulas(CLI::App& app, const std::string& which, const ProcessFlags& pf, double alpha,
                 double q, double tau, double kappa, double h, double eps, double weight_lo,
                 double weight_hi, const std::string& out_dir) {
    io::ordered_json params;
    io::ordered_json record;
    double value = 0;
    std::string method = "closed form";
    if (which == "a_H") {
        value = formulas::a_h(pf.H);
        params["H"] = pf.H;
        method = "adaptive quadrature";
    } else if (which == "sigma2_W") {
        value = formulas::sigma2_w(pf.lambda);
        params["lambda"] = pf.lambda;
    } else if (which == "sigma2_B0") {
        value = formulas::sigma2_b0(pf.H, pf.gamma);
        params["H"] = pf.H;
        params["gamma"] = pf.gamma;
        method = "2-d adaptive quadrature";
    } else if (which == "sigma2_general") {
        const auto res = formulas::sigma2_general(pf.spec());
        value = res.value;
        params["process"] = pf.process;
        params["H"] = pf.H;
        params["lambda"] = pf.lambda;
        params["gamma"] = pf.gamma;
        params["alphas"] = pf.alphas;
        method = "covariance push-through + MC cross-check";
    } else if (which == "r_lambda") {
        value = formulas::r_lambda(pf.lambda, h);
        params["lambda"] = pf.lambda;
        params["h"] = h;
        method = "adaptive quadrature";
    } else if (which == "r_rec") {
        value = formulas::r_rec(pf.alphas.size(), pf.alphas, pf.gamma, pf.H, h);
        params["m"] = pf.alphas.size();
        params["alphas"] = pf.alphas;
        params["gamma"] = pf.gamma;
        params["H"] = pf.H;
        params["h"] = h;
        method = "laplace-kernel convolution recursion";
    } else if (which == "sigma_tilde2_B") {
        value = formulas::sigma_tilde2_b(pf.alphas.size(), pf.alphas, pf.gamma, pf.H);
        params["m"] = pf.alphas.size();
        params["alphas"] = pf.alphas;
        params["gamma"] = pf.gamma;
        params["H"] = pf.H;
    } else if (which == "sigma_tilde2_W") {
        value = formulas::sigma_tilde2_w(pf.alphas.size(), pf.alphas, pf.lambda);
        params["m"] = pf.alphas.size();
        params["alphas"] = pf.alphas;
        params["lambda"] = pf.lambda;
    } else if (which == "chung_constant") {
        value = formulas::chung_constant(tau, alpha, kappa);
        params["tau"] = tau;
        params["alpha"] = alpha;
        params["kappa"] = kappa;
    } else if (which == "lil_constant") {
        const double af = pf.process == "rl" ? 1.0 : formulas::a_h(pf.H);
        value = formulas::lil_constant(tau, alpha, kappa, af);
        params["tau"] = tau;
        params["alpha"] = alpha;
        params["kappa"] = kappa;
        params["a_factor"] = af;
    } else if (which == "kappa_known") {
        const auto info = formulas::kappa_known(pf.lambda);
        params["lambda"] = pf.lambda;
        record = io::constant_record("kappa_known", params, info, 0.0, "tabulated");
        if (info.kind == formulas::KappaInfo::Kind::exact)
            std::cout << io::format_double(info.value) << "\n";
        else if (info.kind == formulas::KappaInfo::Kind::bounds)
            std::cout << "[" << io::format_double(info.lo) << ", " << io::format_double(info.hi)
                      << "]\n";
        else
            std::cout << "unknown\n";
    } else if (which == "w_norm") {
        const auto w = formulas::Weight::indicator(weight_lo, weight_hi);
        const double r = 1.0 / (tau + (std::isinf(q) ? 0.0 : 1.0 / q));
        value = formulas::w_norm(w, r, tau, q);
        params["weight"] = "indicator(" + std::to_string(weight_lo) + "," +
                           std::to_string(weight_hi) + "]";
        params["r"] = r;
        params["tau"] = tau;
        params["q"] = std::isinf(q) ? io::ordered_json("inf") : io::ordered_json(q);
        method = "dyadic block sum";
    } else if (which == "lq_constant") {
        const auto w = formulas::Weight::indicator(weight_lo, weight_hi);
        value = formulas::lq_constant(tau, q, kappa, w, formulas::LqMode::integrated);
        params["tau"] = tau;
        params["q"] = std::isinf(q) ? io::ordered_json("inf") : io::ordered_json(q);
        params["kappa"] = kappa;
    } else if (which == "brownian_exact") {
        value = formulas::brownian_sup_smallball_exact(eps);
        params["eps"] = eps;
        method = "reflection series";
    } else {
        throw parameter_error("formulas: unknown constant `" + which + "`");
    }
    if (record.is_null()) {
        record = io::constant_record(which, params, value, 1e-10, method);
        std::cout << io::format_double(value) << "\n";
    }
    record["meta"] = io::meta(config_hash(app));
    if (!out_dir.empty()) io::write_file(out_dir + "/formulas_" + which + ".json", record.dump(2) + "\n");
    return 0;
}

int cmd_smallball(CLI::App& app, const ProcessFlags& pf, const SeedFlags& sf,
                  const std::string& norm_kind, double alpha, double q,
                  std::vector<double> ladder, double eps, std::size_t n_paths,
                  const std::string& out_dir, unsigned workers, double weight_lo,
                  double weight_hi) {
    const ProcessSpec spec = pf.spec();
    smallball::EstimateOptions opts;
    opts.n_paths = n_paths;
    opts.seed = sf.seedspec();
    opts.workers = workers;
    smallball::NormSpec norm;
    if (norm_kind == "sup") {
        norm = smallball::NormSpec::sup(alpha);
    } else {
        norm = smallball::NormSpec::lq_norm(q, formulas::Weight::indicator(weight_lo, weight_hi),
                                            weight_lo, weight_hi, norm_kind == "lq_integrated");
    }
    smallball::SmallBallResult result;
    if (!ladder.empty()) {
        result = smallball::estimate_kappa(spec, norm, ladder, opts);
        std::cout << "kappa_hat " << io::format_double(result.kappa_hat) << "  ci ["
                  << io::format_double(result.kappa_lo) << ", "
                  << io::format_double(result.kappa_hi) << "]  r2 "
                  << io::format_double(result.fit_r2) << "\n";
    } else {
        const auto pe = smallball::estimate_prob(spec, norm, eps, opts);
        result.points = {pe};
        result.tau = spec.base_index() + double(spec.m());
        result.n_paths = n_paths;
        std::cout << "p_hat " << io::format_double(pe.p_hat) << " +- "
                  << io::format_double(pe.stderr_) << " (grid " << pe.grid_n << ", refined "
                  << io::format_double(pe.p_hat_refined) << ")\n";
    }
    io::write_file(out_dir + "/smallball.csv", io::smallball_csv(result));
    auto j = io::to_json(result);
    j["meta"] = io::meta(config_hash(app));
    io::write_file(out_dir + "/smallball.json", j.dump(2) + "\n");
    write_gnuplot(out_dir, "smallball.gnuplot",
                  "set datafile separator ','\nset key autotitle columnhead\nset logscale xy\n"
                  "plot 'smallball.csv' using 1:2 with linespoints\n");
    return 0;
}

int cmd_lil(CLI::App& app, const ProcessFlags& pf, const SeedFlags& sf,
            const std::string& experiment, std::vector<double> horizons, std::size_t replicas,
            double spacing, double alpha, const std::string& kappa_source,
            const std::string& out_dir, unsigned workers) {
    lil::LilExperiment exp;
    exp.spec = pf.spec();
    exp.horizons = std::move(horizons);
    exp.n_replicas = replicas;
    exp.seed = sf.seedspec();
    exp.log_spacing = spacing;
    exp.alpha = alpha;
    exp.workers = workers;
    lil::LilReport rep;
    if (experiment == "sup_lil") {
        exp.theorem = lil::Theorem::sup_lil;
        rep = lil::run_sup_lil(exp);
    } else if (experiment == "chung") {
        exp.theorem = lil::Theorem::chung_liminf;
        const double tau = exp.spec.base_index() + double(exp.spec.m());
        formulas::KappaInfo kappa = formulas::kappa_known(tau);
        if (kappa_source == "estimated" || kappa.kind == formulas::KappaInfo::Kind::unknown) {
            smallball::EstimateOptions sopts;
            sopts.n_paths = 200000;
            sopts.seed = substream(sf.seedspec(), 0xE5711);
            sopts.workers = workers;
            std::vector<double> ladder;
            for (int i = 0; i < 6; ++i)
                ladder.push_back(0.3 * std::pow(2.0, double(i) / 2.5) * std::pow(tau, 1.5));
            const auto fit = smallball::estimate_kappa(exp.spec, smallball::NormSpec::sup(alpha),
                                                       ladder, sopts);
            kappa.kind = formulas::KappaInfo::Kind::exact;
            kappa.value = fit.kappa_hat * (1.0 - alpha / tau);  // undo the alpha weighting
            kappa.lo = kappa.hi = kappa.value;
        }
        rep = lil::run_chung_liminf(exp, kappa);
    } else {
        exp.theorem = lil::Theorem::integral_liminf;
        rep = lil::run_integral_liminf(exp);
    }
    io::write_file(out_dir + "/lil.csv", io::lil_csv(rep));
    auto j = io::to_json(rep);
    j["meta"] = io::meta(config_hash(app));
    io::write_file(out_dir + "/lil.json", j.dump(2) + "\n");
    write_gnuplot(out_dir, "lil.gnuplot",
                  "set datafile separator ','\nset key autotitle columnhead\nset logscale x\n"
                  "plot 'lil.csv' using 1:3 with points, '' using 1:4 with lines\n");
    std::cout << "median statistic at largest horizon: "
              << io::format_double(rep.median_statistic.back()) << " (theory "
              << io::format_double(std::isnan(rep.theory_constant)
                                       ? 0.5 * (rep.theory_lo + rep.theory_hi)
                                       : rep.theory_constant)
              << ")\n";
    return 0;
}

int cmd_urn(CLI::App& app, const SeedFlags& sf, double pw, double pb, double w0, double b0,
            std::uint64_t n, std::size_t replicas, const std::string& out_dir, unsigned workers) {
    urn::UrnParams params{pw, pb, w0, b0};
    const auto d = urn::lil_diagnostics(params, n, replicas, sf.seedspec(), workers);
    std::vector<urn::UrnTrajectory> ts;
    std::vector<std::uint64_t> cps;
    for (std::uint64_t c = 1024; c <= n; c *= 2) cps.push_back(c);
    if (cps.empty() || cps.back() != n) cps.push_back(n);
    for (std::size_t r = 0; r < replicas; ++r)
        ts.push_back(urn::simulate(params, n, sf.seedspec(), r, cps));
    io::write_file(out_dir + "/urn.csv", io::urn_csv(ts));
    auto j = io::to_json(d);
    j["meta"] = io::meta(config_hash(app));
    io::write_file(out_dir + "/urn.json", j.dump(2) + "\n");
    write_gnuplot(out_dir, "urn.gnuplot",
                  "set datafile separator ','\nset key autotitle columnhead\nset logscale x\n"
                  "plot 'urn.csv' using 1:($3/$1) with points\n");
    const auto c = d.consts;
    std::cout << "rho " << io::format_double(c.rho) << "  v " << io::format_double(c.v)
              << "  sigma1^2 " << io::format_double(c.sigma1_sq) << "  sigma2^2 "
              << io::format_double(c.sigma2_sq) << "\n";
    std::cout << "mean Y_n/n " << io::format_double(stats::mean(d.y_over_n)) << "\n";
    return 0;
}

int cmd_verify_all(const std::string& out_dir, unsigned workers, bool quick,
                   std::vector<int> only) {
    acceptance::Options opts;
    opts.out_dir = out_dir;
    opts.workers = workers;
    opts.quick = quick;
    opts.only = std::move(only);
    const auto results = acceptance::run_all(opts);
    bool all = true;
    std::string summary;
    for (const auto& r : results) {
        const std::string line = acceptance::format_line(r);
        std::cout << line << "\n";
        summary += line + "\n";
        all = all && r.pass;
    }
    summary += all ? "ALL PASS\n" : "FAILURES PRESENT\n";
    if (!out_dir.empty()) io::write_file(out_dir + "/verify_summary.txt", summary);
    std::cout << (all ? "ALL PASS" : "FAILURES PRESENT") << "\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fraclab: fractional-process simulation and limit-theorem laboratory"};
    app.require_subcommand(0, 1);
    app.set_config("--config", "", "flat key = value config file with [subcommand] sections");
    app.set_version_flag("--version", std::string(kVersion));

    unsigned workers = 0;
    app.add_option("--workers", workers, "worker threads (0 = hardware)")->capture_default_str();
    std::string out_dir = io::default_out_dir();
    app.add_option("--out", out_dir, "output directory (default $FRACLAB_OUT or ./out)")
        ->capture_default_str();

    // ---- sample
    auto* sample = app.add_subcommand("sample", "sample process trajectories to CSV");
    ProcessFlags sample_pf;
    SeedFlags sample_sf;
    sample_pf.attach(sample);
    sample_sf.attach(sample);
    std::size_t sample_grid = 1025, sample_paths = 4;
    double sample_tmax = 1.0;
    std::string sample_method = "circulant";
    sample->add_option("--grid-n", sample_grid, "grid points")->capture_default_str();
    sample->add_option("--t-max", sample_tmax, "time horizon")->capture_default_str();
    sample->add_option("--paths", sample_paths, "number of paths")->capture_default_str();
    sample->add_option("--method", sample_method, "circulant|cholesky")
        ->check(CLI::IsMember({"circulant", "cholesky"}))
        ->capture_default_str();

    // ---- formulas
    auto* formulas_cmd = app.add_subcommand("formulas", "evaluate closed-form constants");
    ProcessFlags f_pf;
    f_pf.attach(formulas_cmd);
    std::string which = "a_H";
    double f_alpha = 0, f_q = formulas::infinity(), f_tau = 0.5, f_kappa = 1.0, f_h = 0,
           f_eps = 0.5, f_wlo = 0, f_whi = 1;
    formulas_cmd->add_option("--which", which,
                             "a_H|sigma2_W|sigma2_B0|sigma2_general|r_lambda|r_rec|sigma_tilde2_B|"
                             "sigma_tilde2_W|chung_constant|lil_constant|kappa_known|w_norm|"
                             "lq_constant|brownian_exact")
        ->capture_default_str();
    formulas_cmd->add_option("--alpha", f_alpha)->capture_default_str();
    formulas_cmd->add_option("--q", f_q)->capture_default_str();
    formulas_cmd->add_option("--tau", f_tau)->capture_default_str();
    formulas_cmd->add_option("--kappa", f_kappa)->capture_default_str();
    formulas_cmd->add_option("--h", f_h)->capture_default_str();
    formulas_cmd->add_option("--eps", f_eps)->capture_default_str();
    formulas_cmd->add_option("--weight-lo", f_wlo)->capture_default_str();
    formulas_cmd->add_option("--weight-hi", f_whi)->capture_default_str();

    // ---- smallball
    auto* sb_cmd = app.add_subcommand("smallball", "Monte Carlo small-ball estimation");
    ProcessFlags sb_pf;
    SeedFlags sb_sf;
    sb_pf.attach(sb_cmd);
    sb_sf.attach(sb_cmd);
    std::string sb_norm = "sup";
    double sb_alpha = 0, sb_q = 2, sb_eps = 0.5, sb_wlo = 0, sb_whi = 1;
    std::vector<double> sb_ladder;
    std::size_t sb_paths = 100000;
    sb_cmd->add_option("--norm", sb_norm, "sup|lq|lq_integrated")
        ->check(CLI::IsMember({"sup", "lq", "lq_integrated"}))
        ->capture_default_str();
    sb_cmd->add_option("--alpha", sb_alpha, "weighted-sup exponent")->capture_default_str();
    sb_cmd->add_option("--q", sb_q)->capture_default_str();
    sb_cmd->add_option("--eps", sb_eps, "single epsilon")->capture_default_str();
    sb_cmd->add_option("--eps-ladder", sb_ladder, "epsilon ladder for kappa estimation");
    sb_cmd->add_option("--paths", sb_paths)->capture_default_str();
    sb_cmd->add_option("--weight-lo", sb_wlo)->capture_default_str();
    sb_cmd->add_option("--weight-hi", sb_whi)->capture_default_str();

    // ---- lil
    auto* lil_cmd = app.add_subcommand("lil", "law-of-the-iterated-logarithm experiments");
    ProcessFlags lil_pf;
    SeedFlags lil_sf;
    lil_pf.attach(lil_cmd);
    lil_sf.attach(lil_cmd);
    std::string lil_exp = "integral";
    std::vector<double> lil_horizons{10, 100, 1000, 10000};
    std::size_t lil_replicas = 50;
    double lil_spacing = 0.02, lil_alpha = 0;
    std::string lil_kappa = "known";
    lil_cmd->add_option("--experiment", lil_exp, "sup_lil|chung|integral")
        ->check(CLI::IsMember({"sup_lil", "chung", "integral"}))
        ->capture_default_str();
    lil_cmd->add_option("--horizons", lil_horizons, "T values (sup_lil/chung) or S values (integral)");
    lil_cmd->add_option("--replicas", lil_replicas)->capture_default_str();
    lil_cmd->add_option("--spacing", lil_spacing, "log-time grid spacing")->capture_default_str();
    lil_cmd->add_option("--alpha", lil_alpha, "chung weight exponent")->capture_default_str();
    lil_cmd->add_option("--kappa-source", lil_kappa, "known|estimated")
        ->check(CLI::IsMember({"known", "estimated"}))
        ->capture_default_str();

    // ---- urn
    auto* urn_cmd = app.add_subcommand("urn", "randomized play-the-winner urn");
    SeedFlags urn_sf;
    urn_sf.attach(urn_cmd);
    double urn_pw = 0.5, urn_pb = 0.5, urn_w0 = 1, urn_b0 = 1;
    std::uint64_t urn_n = 1u << 20;
    std::size_t urn_replicas = 100;
    urn_cmd->add_option("--pw", urn_pw)->capture_default_str();
    urn_cmd->add_option("--pb", urn_pb)->capture_default_str();
    urn_cmd->add_option("--w0", urn_w0)->capture_default_str();
    urn_cmd->add_option("--b0", urn_b0)->capture_default_str();
    urn_cmd->add_option("--n", urn_n, "stages")->capture_default_str();
    urn_cmd->add_option("--replicas", urn_replicas)->capture_default_str();

    // ---- verify-all
    auto* verify = app.add_subcommand("verify-all", "run the acceptance criteria");
    bool quick = false;
    std::vector<int> only;
    verify->add_flag("--quick", quick, "reduced sampling sizes (smoke run)");
    verify->add_option("--only", only, "criteria subset");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (app.get_subcommands().empty()) {
        std::cerr << app.help() << std::flush;
        return 2;
    }

    try {
        if (sample->parsed())
            return cmd_sample(app, sample_pf, sample_sf, sample_grid, sample_tmax, sample_paths,
                              sample_method, out_dir, workers);
        if (formulas_cmd->parsed())
            return cmd_formulas(app, which, f_pf, f_alpha, f_q, f_tau, f_kappa, f_h, f_eps, f_wlo,
                                f_whi, out_dir);
        if (sb_cmd->parsed())
            return cmd_smallball(app, sb_pf, sb_sf, sb_norm, sb_alpha, sb_q, sb_ladder, sb_eps,
                                 sb_paths, out_dir, workers, sb_wlo, sb_whi);
        if (lil_cmd->parsed())
            return cmd_lil(app, lil_pf, lil_sf, lil_exp, lil_horizons, lil_replicas, lil_spacing,
                           lil_alpha, lil_kappa, out_dir, workers);
        if (urn_cmd->parsed())
            return cmd_urn(app, urn_sf, urn_pw, urn_pb, urn_w0, urn_b0, urn_n, urn_replicas,
                           out_dir, workers);
        if (verify->parsed()) return cmd_verify_all(out_dir, workers, quick, only);
    } catch (const parameter_error& e) {
        std::cerr << "parameter error: " << e.what() << "\n";
        return 2;
    } catch (const grid_error& e) {
        std::cerr << "grid error: " << e.what() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 3;
    } catch (const inconsistency_error& e) {
        std::cerr << "inconsistency: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
