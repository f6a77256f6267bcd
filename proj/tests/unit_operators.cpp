#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "fraclab/operators.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/paths.hpp"
#include "fraclab/stats.hpp"

using namespace fraclab;

namespace {

GridPath make_path(std::size_t n, double (*f)(double), double index) {
    const auto grid = TimeGrid::uniform(0.0, 1.0, n);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = f(grid[i]);
    return GridPath(grid, std::move(v), index);
}

double sup_diff(const GridPath& a, const GridPath& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s = std::max(s, std::abs(a.values[i] - b.values[i]));
    return s;
}

double sup_diff_fn(const GridPath& a, double (*f)(double)) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s = std::max(s, std::abs(a.values[i] - f(a.grid[i])));
    return s;
}

}  // namespace

TEST_CASE("integrate: constants and linear functions are exact") {
    auto ones = make_path(101, [](double) { return 1.0; }, 0.0);
    auto out = ops::integrate(ones);
    CHECK(out.values[0] == 0.0);
    CHECK(sup_diff_fn(out, [](double t) { return t; }) < 1e-14);

    auto lin = make_path(101, [](double t) { return t; }, 1.0);
    CHECK(std::abs(ops::integrate(lin).values.back() - 0.5) < 1e-12);
}

TEST_CASE("iterated integrate: t^m/m! within trapezoid error") {
    auto p = make_path(1 << 12, [](double) { return 1.0; }, 0.0);
    auto i3 = ops::integrate(ops::integrate(ops::integrate(p)));
    CHECK(sup_diff_fn(i3, [](double t) { return t * t * t / 6.0; }) < 1e-7);
    CHECK(i3.index.value() == doctest::Approx(3.0));
}

TEST_CASE("weighted integral analytic oracles") {
    // w(s) = s, alpha = 0 -> t^2/2
    auto lin = make_path(257, [](double t) { return t; }, 1.0);
    CHECK(sup_diff_fn(ops::weighted_integral(lin, 0.0),
                      [](double t) { return t * t / 2.0; }) < 1e-5);

    // w(s) = s^{1.5}, alpha = 1 -> t^{1.5}/1.5 on a 2^14 grid
    auto p = make_path((1 << 14) + 1, [](double t) { return std::pow(t, 1.5); }, 1.5);
    auto out = ops::weighted_integral(p, 1.0);
    CHECK(sup_diff_fn(out, [](double t) { return std::pow(t, 1.5) / 1.5; }) < 1e-6);
    CHECK(out.index.value() == doctest::Approx(1.5));

    CHECK_THROWS_AS(ops::weighted_integral(lin, 2.5), parameter_error);  // alpha >= tau+1
    GridPath no_index = lin;
    no_index.index.reset();
    CHECK_THROWS_AS(ops::weighted_integral(no_index, 1.2), parameter_error);
}

TEST_CASE("weighted integral: grid-refinement against a sampled Brownian path") {
    const std::size_t n_hi = (1 << 18) + 1;
    const auto grid_hi = TimeGrid::uniform(0.0, 1.0, n_hi);
    const auto b = paths::sample_fbm(0.5, grid_hi, SeedSpec{77, 0}, 0);
    // restriction to a 2^14 grid shares the driving noise exactly
    const std::size_t stride = (n_hi - 1) / (1 << 14);
    std::vector<double> v_lo;
    std::vector<double> t_lo;
    for (std::size_t i = 0; i < n_hi; i += stride) {
        t_lo.push_back(grid_hi[i]);
        v_lo.push_back(b.values[i]);
    }
    GridPath lo(TimeGrid::from_points(t_lo), v_lo, 0.5);
    const double hi_val = ops::weighted_integral(b, 0.5).values.back();
    const double lo_val = ops::weighted_integral(lo, 0.5).values.back();
    CHECK(std::abs(hi_val - lo_val) < 1e-3 * std::max(1.0, std::abs(hi_val)));
}

TEST_CASE("compose_weighted oracles and chain errors") {
    // alpha = (1) on w = s^2 -> t^2/2
    auto sq = make_path(513, [](double t) { return t * t; }, 2.0);
    CHECK(sup_diff_fn(ops::compose_weighted(sq, std::vector<double>{1.0}),
                      [](double t) { return t * t / 2.0; }) < 2e-5);

    // alpha = (0.5, -1) on w = s -> t^{3.5}/(1.5*3.5)
    auto lin = make_path((1 << 12) + 1, [](double t) { return t; }, 1.0);
    auto out = ops::compose_weighted(lin, std::vector<double>{0.5, -1.0});
    CHECK(sup_diff_fn(out, [](double t) { return std::pow(t, 3.5) / (1.5 * 3.5); }) < 1e-6);

    // chain violation names the stage
    try {
        ops::compose_weighted(lin, std::vector<double>{0.5, 3.0});
        CHECK(false);
    } catch (const parameter_error& e) {
        CHECK(std::string(e.what()).find("stage 2") != std::string::npos);
    }
}

TEST_CASE("riemann_liouville oracles") {
    // gamma = 1 equals integrate exactly
    auto p = make_path(257, [](double t) { return std::cos(3 * t); }, 0.0);
    CHECK(sup_diff(ops::riemann_liouville(p, 1.0), ops::integrate(p)) < 1e-13);

    // gamma = 0.5 on w = 1: 2 sqrt(t/pi)
    auto ones = make_path((1 << 14) + 1, [](double) { return 1.0; }, 0.0);
    auto half = ops::riemann_liouville(ones, 0.5);
    CHECK(sup_diff_fn(half, [](double t) { return 2.0 * std::sqrt(t / std::numbers::pi); }) < 1e-4);

    CHECK_THROWS_AS(ops::riemann_liouville(p, 0.0), parameter_error);
}

TEST_CASE("semigroup law I_{g1} I_{g2} = I_{g1+g2}") {
    auto lin = make_path((1 << 12) + 1, [](double t) { return t; }, 1.0);
    auto lhs = ops::riemann_liouville(ops::riemann_liouville(lin, 0.6), 0.9);
    auto rhs = ops::riemann_liouville(lin, 1.5);
    CHECK(sup_diff(lhs, rhs) < 1e-4);
}

TEST_CASE("operators are linear") {
    auto a = make_path(257, [](double t) { return std::sin(2 * t); }, 1.0);
    auto b = make_path(257, [](double t) { return t * t; }, 2.0);
    std::vector<double> combo(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) combo[i] = 2.0 * a.values[i] - 3.0 * b.values[i];
    GridPath c(a.grid, combo, 1.0);

    auto apply = [](const GridPath& p) { return ops::riemann_liouville(p, 0.7); };
    auto lhs = apply(c);
    auto ra = apply(a), rb = apply(b);
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst,
                         std::abs(lhs.values[i] - (2.0 * ra.values[i] - 3.0 * rb.values[i])));
    CHECK(worst < 1e-12);
}

TEST_CASE("grid refinement improves singular-cell and trapezoid accuracy at the expected order") {
    // product integration is exact for constants; a linear input exposes the
    // frozen singular cell, whose error shrinks like h^{1+gamma}
    auto err_rl = [](std::size_t n) {
        auto lin = make_path(n, [](double t) { return t; }, 1.0);
        auto out = ops::riemann_liouville(lin, 0.5);
        return std::abs(out.values.back() - 1.0 / std::tgamma(2.5));
    };
    CHECK(err_rl(1025) / err_rl(2049) > 1.9);  // at least first order at the singular cell

    auto err_trap = [](std::size_t n) {
        auto p = make_path(n, [](double t) { return std::exp(t); }, 0.0);
        return std::abs(ops::integrate(p).values.back() - (std::exp(1.0) - 1.0));
    };
    CHECK(err_trap(1025) / err_trap(2049) > 3.6);  // second order
}

TEST_CASE("normalize_self_similar") {
    auto sq = make_path(65, [](double t) { return t * t; }, 2.0);
    auto out = ops::normalize_self_similar(sq, 1.0);
    CHECK(out.values[0] == 0.0);
    CHECK(sup_diff_fn(out, [](double t) { return t; }) < 1e-14);
    CHECK(out.index.value() == doctest::Approx(1.0));

    CHECK(sup_diff(ops::normalize_self_similar(sq, 0.0), sq) == 0.0);
    CHECK_THROWS_AS(ops::normalize_self_similar(sq, 2.0), parameter_error);
}

TEST_CASE("normalized fbm paths stay finite over many seeds") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 257);
    paths::FbmSampler sampler(0.6, grid, paths::FbmMethod::circulant);
    for (std::uint64_t k = 0; k < 200; ++k) {
        auto p = sampler.sample(SeedSpec{3141, 0}, k);
        auto norm = ops::normalize_self_similar(p, 0.3);
        for (double v : norm.values) CHECK(std::isfinite(v));
    }
}

TEST_CASE("stationary transform: deterministic power becomes the constant 1") {
    const auto grid = TimeGrid::geometric(1.0, 1.1, 40);
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = std::pow(grid[i], 0.8);
    auto u = ops::stationary_transform(GridPath(grid, v, 0.8), 0.8);
    CHECK(u.grid.is_uniform());
    CHECK(u.grid.front() == doctest::Approx(0.0));
    for (double x : u.values) CHECK(x == doctest::Approx(1.0));
    CHECK_THROWS_AS(
        ops::stationary_transform(GridPath(TimeGrid::uniform(0, 1, 5), {0, 1, 2, 3, 4}), 1.0),
        grid_error);
}

TEST_CASE("stationary transform of fBm has flat unit variance (H = 0.7)") {
    const std::size_t reps = 20000;
    const auto grid = TimeGrid::geometric(1.0, 1.35, 12);
    paths::FbmSampler sampler(0.7, grid, paths::FbmMethod::cholesky);
    std::vector<double> first(reps), last(reps);
    parallel_for(reps, 2, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            auto u = ops::stationary_transform(sampler.sample(SeedSpec{555, 0}, k), 0.7);
            first[k] = u.values.front();
            last[k] = u.values.back();
        }
    });
    const double se = 4.0 * std::sqrt(2.0 / double(reps - 1));
    CHECK(std::abs(stats::variance(first) - 1.0) < se);
    CHECK(std::abs(stats::variance(last) - 1.0) < se);
}

TEST_CASE("self-similarity propagation through the weighted chain") {
    // slope of log SD against log t ~ index within 0.02
    const auto grid = TimeGrid::uniform(0.0, 1.0, 257);
    paths::FbmSampler sampler(0.5, grid, paths::FbmMethod::circulant);
    const std::size_t n = 100000;
    const std::vector<std::size_t> probe{32, 64, 128, 192, 256};
    std::vector<double> sums(probe.size(), 0.0);
    parallel_for(n, 2, [&](std::size_t b, std::size_t e) {
        std::vector<double> local(probe.size(), 0.0);
        for (std::size_t k = b; k < e; ++k) {
            auto p = sampler.sample(SeedSpec{808, 0}, k);
            auto j = ops::compose_weighted(p, std::vector<double>{0.5});
            for (std::size_t i = 0; i < probe.size(); ++i)
                local[i] += j.values[probe[i]] * j.values[probe[i]];
        }
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        for (std::size_t i = 0; i < probe.size(); ++i) sums[i] += local[i];
    });
    std::vector<double> xs, ys, var(probe.size(), 1.0);
    for (std::size_t i = 0; i < probe.size(); ++i) {
        xs.push_back(std::log(grid[probe[i]]));
        ys.push_back(0.5 * std::log(sums[i] / double(n)));
    }
    const auto fit = stats::weighted_linfit(xs, ys, var);
    CHECK(std::abs(fit.slope - 1.0) < 0.02);  // index 0.5 + 1 - 0.5
}
