#include "fraclab/operators.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab::ops {

GridPath integrate(const GridPath& path) {
    const auto& t = path.grid.points();
    const auto& w = path.values;
    std::vector<double> out(w.size(), 0.0);
    double acc = 0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
        acc += 0.5 * (w[i] + w[i + 1]) * (t[i + 1] - t[i]);
        out[i + 1] = acc;
    }
    std::optional<double> idx;
    if (path.index) idx = *path.index + 1.0;
    return GridPath(path.grid, std::move(out), idx);
}

GridPath weighted_integral(const GridPath& path, double alpha, std::optional<double> tau_opt) {
    const auto& t = path.grid.points();
    const auto& w = path.values;
    std::optional<double> tau = tau_opt ? tau_opt : path.index;
    std::vector<double> out(w.size(), 0.0);
    if (w.empty()) return GridPath(path.grid, std::move(out));

    double acc = 0;
    std::size_t start = 0;
    if (t[0] == 0.0 && w.size() > 1) {
        if (tau) {
            if (!(alpha < *tau + 1.0))
                throw parameter_error("weighted_integral: alpha >= tau + 1, integral diverges at 0");
            // local power model on [0, t_1]
            acc = w[1] * std::pow(t[1], 1.0 - alpha) / (*tau - alpha + 1.0);
        } else {
            if (alpha >= 1.0)
                throw parameter_error(
                    "weighted_integral: local exponent unknown and alpha >= 1; cannot handle the "
                    "singular first cell");
            // integrable singularity, w(0) = 0: the s -> 0 limit of the
            // integrand is taken as 0.
            acc = 0.5 * w[1] * std::pow(t[1], -alpha) * t[1];
        }
        out[1] = acc;
        start = 1;
    }
    double f_prev = t[start] > 0 ? std::pow(t[start], -alpha) * w[start] : 0.0;
    for (std::size_t i = start; i + 1 < w.size(); ++i) {
        const double f_next = std::pow(t[i + 1], -alpha) * w[i + 1];
        acc += 0.5 * (f_prev + f_next) * (t[i + 1] - t[i]);
        out[i + 1] = acc;
        f_prev = f_next;
    }
    std::optional<double> idx;
    if (tau) idx = *tau + 1.0 - alpha;
    return GridPath(path.grid, std::move(out), idx);
}

GridPath compose_weighted(const GridPath& path, std::span<const double> alphas) {
    GridPath cur = path;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (cur.index && !(alphas[i] < *cur.index + 1.0))
            throw parameter_error("compose_weighted: admissibility fails at stage " +
                                  std::to_string(i + 1) + " (alpha_i >= index + 1)");
        cur = weighted_integral(cur, alphas[i]);
    }
    return cur;
}

GridPath riemann_liouville(const GridPath& path, double gamma) {
    if (!(gamma > 0)) throw parameter_error("riemann_liouville: gamma must be > 0");
    const auto& t = path.grid.points();
    const auto& w = path.values;
    const std::size_t n = w.size();
    std::vector<double> out(n, 0.0);
    if (n < 2) return GridPath(path.grid, std::move(out), path.index ? std::optional<double>(*path.index + gamma) : std::nullopt);

    const double inv_g = 1.0 / std::tgamma(gamma);
    const bool freeze_last = gamma < 1.0;
    const bool uniform = path.grid.is_uniform();

    // (t_j - t_i)^gamma and ^(gamma+1); on uniform grids these depend only
    // on j - i and are precomputed.
    std::vector<double> pg, pg1;
    double dt = 0;
    if (uniform) {
        dt = path.grid.spacing();
        pg.resize(n);
        pg1.resize(n);
        pg[0] = pg1[0] = 0.0;
        for (std::size_t k = 1; k < n; ++k) {
            const double u = double(k) * dt;
            pg[k] = std::pow(u, gamma);
            pg1[k] = std::pow(u, gamma + 1.0);
        }
    }

    for (std::size_t j = 1; j < n; ++j) {
        double acc = 0;
        const double tj = t[j];
        const std::size_t last = j - 1;
        for (std::size_t i = 0; i < j; ++i) {
            const double big = uniform ? pg[j - i] : std::pow(tj - t[i], gamma);
            if (i == last && freeze_last) {
                acc += w[j] * big / gamma;  // w frozen at the endpoint, kernel exact
                continue;
            }
            const double small = uniform ? pg[j - i - 1] : std::pow(tj - t[i + 1], gamma);
            const double big1 = uniform ? pg1[j - i] : std::pow(tj - t[i], gamma + 1.0);
            const double small1 = uniform ? pg1[j - i - 1] : std::pow(tj - t[i + 1], gamma + 1.0);
            const double h = t[i + 1] - t[i];
            const double slope = (w[i + 1] - w[i]) / h;
            const double c0 = w[i] + slope * (tj - t[i]);
            acc += c0 * (big - small) / gamma - slope * (big1 - small1) / (gamma + 1.0);
        }
        out[j] = acc * inv_g;
    }
    std::optional<double> idx;
    if (path.index) idx = *path.index + gamma;
    return GridPath(path.grid, std::move(out), idx);
}

GridPath normalize_self_similar(const GridPath& path, double exponent) {
    const auto& t = path.grid.points();
    const auto& w = path.values;
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (t[i] == 0.0) {
            if (path.index && !(exponent < *path.index))
                throw parameter_error(
                    "normalize_self_similar: exponent >= self-similarity index with t = 0 on the "
                    "grid");
            out[i] = 0.0;
        } else {
            out[i] = w[i] / std::pow(t[i], exponent);
        }
    }
    std::optional<double> idx;
    if (path.index) idx = *path.index - exponent;
    return GridPath(path.grid, std::move(out), idx);
}

GridPath stationary_transform(const GridPath& path, double tau) {
    if (!path.grid.is_geometric())
        throw grid_error("stationary_transform: input grid must be geometric");
    const auto& t = path.grid.points();
    const auto& w = path.values;
    const double s0 = std::log(t.front());
    const double ds = std::log(path.grid.ratio());
    const double shift = s0 < 0 ? -s0 : 0.0;
    std::vector<double> out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] / std::pow(t[i], tau);
    TimeGrid lg = w.size() > 1
                      ? TimeGrid::uniform(s0 + shift, s0 + shift + ds * double(w.size() - 1), w.size())
                      : TimeGrid::from_points({s0 + shift});
    return GridPath(std::move(lg), std::move(out));
}

}  // namespace fraclab::ops
