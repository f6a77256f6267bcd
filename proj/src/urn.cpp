#include "fraclab/urn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fraclab/errors.hpp"
#include "fraclab/parallel.hpp"

namespace fraclab::urn {

void UrnParams::validate() const {
    if (!(p_w > 0 && p_w < 1 && p_b > 0 && p_b < 1))
        throw parameter_error("UrnParams: need 0 < p_w, p_b < 1");
    if (!(w0 > 0 && b0 > 0)) throw parameter_error("UrnParams: need positive initial ball counts");
}

UrnConstants rpw_params(const UrnParams& p) {
    p.validate();
    const double q_w = 1.0 - p.p_w, q_b = 1.0 - p.p_b;
    UrnConstants c;
    c.rho = p.p_w + p.p_b - 1.0;
    c.v = q_b / (q_w + q_b);
    c.sigma1_sq = q_w * q_b / ((q_w + q_b) * (q_w + q_b));
    c.sigma2_sq = q_w * q_b * (p.p_w + p.p_b) / (q_w + q_b);
    return c;
}

UrnTrajectory simulate(const UrnParams& p, std::uint64_t n, SeedSpec seed, std::uint64_t replica,
                       std::span<const std::uint64_t> checkpoints) {
    p.validate();
    UrnTrajectory traj;
    traj.params = p;
    std::vector<std::uint64_t> cps;
    if (checkpoints.empty()) {
        cps.resize(n + 1);
        for (std::uint64_t k = 0; k <= n; ++k) cps[k] = k;
    } else {
        cps.assign(checkpoints.begin(), checkpoints.end());
        for (std::size_t i = 0; i + 1 < cps.size(); ++i)
            if (!(cps[i] < cps[i + 1])) throw parameter_error("simulate: checkpoints must increase");
        if (cps.back() > n) throw parameter_error("simulate: checkpoint beyond n");
    }

    PathRng rng(seed, replica);
    double y = p.w0;
    double total = p.w0 + p.b0;
    std::uint64_t n_white = 0;
    std::size_t next_cp = 0;
    auto record = [&](std::uint64_t stage) {
        while (next_cp < cps.size() && cps[next_cp] == stage) {
            traj.stages.push_back(stage);
            traj.y.push_back(y);
            traj.n_draws.push_back(double(n_white));
            ++next_cp;
        }
    };
    record(0);
    for (std::uint64_t stage = 1; stage <= n; ++stage) {
        const bool drew_white = rng.uniform01() < y / total;
        const double u_add = rng.uniform01();
        bool add_white;
        if (drew_white) {
            ++n_white;
            add_white = u_add < p.p_w;
        } else {
            add_white = !(u_add < p.p_b);
        }
        if (add_white) y += 1.0;
        total += 1.0;
        record(stage);
    }
    return traj;
}

UrnDiagnostics lil_diagnostics(const UrnParams& p, std::uint64_t n, std::size_t replicas,
                               SeedSpec seed, unsigned workers) {
    p.validate();
    const UrnConstants c = rpw_params(p);
    if (!(c.rho < 0.5))
        throw parameter_error("lil_diagnostics: LIL constants require rho < 1/2");

    UrnDiagnostics d;
    d.params = p;
    d.consts = c;
    for (std::uint64_t cp = 1024; cp <= n; cp *= 2) d.checkpoints.push_back(cp);
    if (d.checkpoints.empty() || d.checkpoints.back() != n) d.checkpoints.push_back(n);
    const std::size_t ncp = d.checkpoints.size();

    d.limsup_y.assign(replicas, std::vector<double>(ncp, 0.0));
    d.limsup_n.assign(replicas, std::vector<double>(ncp, 0.0));
    d.chung_y.assign(replicas, std::vector<double>(ncp, 0.0));
    d.chung_n.assign(replicas, std::vector<double>(ncp, 0.0));
    d.y_over_n.assign(replicas, 0.0);
    d.limsup_theory_y = std::sqrt(c.sigma1_sq / (1.0 - 2.0 * c.rho));
    d.limsup_theory_n = std::sqrt(c.sigma1_sq * (1.0 + 2.0 * (p.p_w + p.p_b)) / (1.0 - 2.0 * c.rho));
    d.chung_theory = std::sqrt(c.sigma1_sq) * std::numbers::pi / std::sqrt(8.0);

    const double v = c.v;
    workers = workers ? workers : default_workers();
    parallel_for(replicas, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t r = b; r < e; ++r) {
            PathRng rng(seed, r);
            double y = p.w0;
            double total = p.w0 + p.b0;
            std::uint64_t n_white = 0;
            double sup_y = 0, sup_n = 0;       // sup_m |.|
            double max_ls_y = 0, max_ls_n = 0; // running limsup statistics
            double min_ch_y = std::numeric_limits<double>::infinity();
            double min_ch_n = std::numeric_limits<double>::infinity();
            std::size_t cp = 0;
            for (std::uint64_t stage = 1; stage <= n; ++stage) {
                const bool drew_white = rng.uniform01() < y / total;
                const double u_add = rng.uniform01();
                bool add_white;
                if (drew_white) {
                    ++n_white;
                    add_white = u_add < p.p_w;
                } else {
                    add_white = !(u_add < p.p_b);
                }
                if (add_white) y += 1.0;
                total += 1.0;

                const double m = double(stage);
                const double dev_y = std::abs(y - m * v);
                const double dev_n = std::abs(double(n_white) - m * v);
                sup_y = std::max(sup_y, dev_y);
                sup_n = std::max(sup_n, dev_n);
                if (stage >= 16) {
                    const double norm = std::sqrt(2.0 * m * std::log(std::log(m)));
                    max_ls_y = std::max(max_ls_y, dev_y / norm);
                    max_ls_n = std::max(max_ls_n, dev_n / norm);
                }
                if (cp < ncp && stage == d.checkpoints[cp]) {
                    const double chn = std::sqrt(std::log(std::log(m)) / m);
                    min_ch_y = std::min(min_ch_y, chn * sup_y);
                    min_ch_n = std::min(min_ch_n, chn * sup_n);
                    d.limsup_y[r][cp] = max_ls_y;
                    d.limsup_n[r][cp] = max_ls_n;
                    d.chung_y[r][cp] = min_ch_y;
                    d.chung_n[r][cp] = min_ch_n;
                    ++cp;
                }
            }
            d.y_over_n[r] = y / double(n);
        }
    });
    return d;
}

}  // namespace fraclab::urn
