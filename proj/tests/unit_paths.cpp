#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "fraclab/parallel.hpp"
#include "fraclab/paths.hpp"
#include "fraclab/stats.hpp"

using namespace fraclab;

namespace {

const SeedSpec kSeed{0xABCDEF, 11};

// independent oracle: raw quadrature of the RL kernel product on the
// untransformed domain (tanh_sinh soaks up the endpoint singularity)
double rl_cov_oracle(double lambda, double t, double s) {
    if (t < s) std::swap(t, s);
    if (s == 0) return 0;
    boost::math::quadrature::tanh_sinh<double> q;
    auto f = [&](double u) {
        return std::pow(t - u, lambda - 0.5) * std::pow(s - u, lambda - 0.5);
    };
    const double g = std::tgamma(lambda + 0.5);
    return q.integrate(f, 0.0, s) / (g * g);
}

std::vector<double> sample_endpoints(const paths::RlSampler& sampler, std::size_t n) {
    std::vector<double> out(n);
    parallel_for(n, 2, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) out[k] = sampler.sample(kSeed, k).values.back();
    });
    return out;
}

}  // namespace

TEST_CASE("fbm covariance closed form") {
    CHECK(paths::fbm_cov(0.5, 1, 1) == doctest::Approx(1.0));
    CHECK(paths::fbm_cov(0.5, 2, 3) == doctest::Approx(2.0));  // min(t,s) for BM
    CHECK(paths::fbm_cov(0.7, 1, 1) == doctest::Approx(1.0));
    CHECK(paths::fbm_cov(0.3, 2, 5) == doctest::Approx(paths::fbm_cov(0.3, 5, 2)));
    CHECK_THROWS_AS(paths::fbm_cov(1.2, 1, 1), parameter_error);
}

TEST_CASE("rl covariance against quadrature oracle and closed diagonal") {
    // closed form on the diagonal: t^{2l} / (2l Gamma^2(l+1/2))
    CHECK(paths::rl_cov(0.5, 1, 1) == doctest::Approx(1.0));
    CHECK(paths::rl_cov(1.0, 1, 1) == doctest::Approx(2.0 / std::numbers::pi));
    CHECK(paths::rl_cov(1.5, 1, 1) == doctest::Approx(1.0 / 3.0));  // Gamma(2) = 1
    for (double lambda : {0.3, 0.75, 1.5}) {
        for (auto [t, s] : std::vector<std::pair<double, double>>{{1.0, 0.4}, {2.0, 1.7}}) {
            CHECK(paths::rl_cov(lambda, t, s) ==
                  doctest::Approx(rl_cov_oracle(lambda, t, s)).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(paths::rl_cov(-1.0, 1, 1), parameter_error);
}

TEST_CASE("fbm sampler: Brownian increments are iid with variance = spacing") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 65);
    paths::FbmSampler sampler(0.5, grid, paths::FbmMethod::circulant);
    const std::size_t n_paths = 20000;
    std::vector<double> inc1(n_paths), inc2(n_paths);
    for (std::size_t k = 0; k < n_paths; ++k) {
        const auto p = sampler.sample(kSeed, k);
        inc1[k] = p.values[1] - p.values[0];
        inc2[k] = p.values[33] - p.values[32];
    }
    const double dt = 1.0 / 64.0;
    const double se = dt * std::sqrt(2.0 / double(n_paths - 1));
    CHECK(std::abs(stats::variance(inc1) - dt) < 4 * se);
    CHECK(std::abs(stats::variance(inc2) - dt) < 4 * se);
    double cross = 0;
    for (std::size_t k = 0; k < n_paths; ++k) cross += inc1[k] * inc2[k];
    CHECK(std::abs(cross / double(n_paths)) < 4 * dt / std::sqrt(double(n_paths)));
}

TEST_CASE("fbm sampler: single-point grid at 0 gives the zero path") {
    const auto grid = TimeGrid::from_points({0.0});
    const auto p = paths::sample_fbm(0.37, grid, kSeed, 0, paths::FbmMethod::cholesky);
    CHECK(p.values[0] == 0.0);
}

TEST_CASE("fbm sampler: empirical covariance matches fbm_cov (H = 0.7)") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 33);
    paths::FbmSampler sampler(0.7, grid, paths::FbmMethod::circulant);
    const std::size_t n_paths = 30000;
    std::vector<std::vector<double>> vals(n_paths);
    parallel_for(n_paths, 2, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) vals[k] = sampler.sample(kSeed, k).values;
    });
    for (auto [i, j] : std::vector<std::pair<std::size_t, std::size_t>>{
             {32, 32}, {16, 32}, {8, 24}, {1, 32}}) {
        double acc = 0;
        for (const auto& v : vals) acc += v[i] * v[j];
        const double got = acc / double(n_paths);
        const double want = paths::fbm_cov(0.7, grid[i], grid[j]);
        // MC error of a product moment: sd ~ sqrt((C_ii C_jj + C_ij^2)/n)
        const double se = std::sqrt((paths::fbm_cov(0.7, grid[i], grid[i]) *
                                         paths::fbm_cov(0.7, grid[j], grid[j]) +
                                     want * want) /
                                    double(n_paths));
        CHECK(std::abs(got - want) < 4 * se);
    }
}

TEST_CASE("cholesky and circulant fbm samplers agree in distribution") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 129);
    paths::FbmSampler chol(0.6, grid, paths::FbmMethod::cholesky);
    paths::FbmSampler circ(0.6, grid, paths::FbmMethod::circulant);
    const std::size_t n = 10000;
    std::vector<double> sup_a(n), sup_b(n);
    parallel_for(n, 2, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto pa = chol.sample(substream(kSeed, 1), k);
            const auto pb = circ.sample(substream(kSeed, 2), k);
            double ma = 0, mb = 0;
            for (double v : pa.values) ma = std::max(ma, std::abs(v));
            for (double v : pb.values) mb = std::max(mb, std::abs(v));
            sup_a[k] = ma;
            sup_b[k] = mb;
        }
    });
    CHECK(stats::ks_two_sample_pvalue(sup_a, sup_b) > 1e-3);
}

TEST_CASE("gaussian marginal passes a normality test") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 17);
    paths::FbmSampler sampler(0.4, grid, paths::FbmMethod::circulant);
    const std::size_t n = 100000;
    const double sd = std::sqrt(paths::fbm_cov(0.4, 1.0, 1.0));
    std::vector<double> x(n);
    parallel_for(n, 2, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) x[k] = sampler.sample(kSeed, k).values.back() / sd;
    });
    CHECK(stats::ks_normal_pvalue(x) > 1e-3);
}

TEST_CASE("rl sampler: lambda = 1/2 is Brownian motion; variance telescopes exactly") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 257);
    paths::RlSampler half(0.5, grid, paths::RlMethod::kernel_convolution);
    const auto vals = sample_endpoints(half, 20000);
    const double var = stats::variance(vals);
    CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / 19999.0));

    paths::RlSampler s15(1.5, grid, paths::RlMethod::kernel_convolution);
    const auto v15 = sample_endpoints(s15, 20000);
    const double want = 1.0 / 3.0;  // Var W_{3/2}(1)
    CHECK(std::abs(stats::variance(v15) - want) < 4.0 * want * std::sqrt(2.0 / 19999.0));
}

TEST_CASE("rl sampler: value at t = 0 is zero") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 9);
    const auto p = paths::sample_rl(1.0, grid, kSeed, 0);
    CHECK(p.values[0] == 0.0);
}

TEST_CASE("rl sampler: cholesky route matches the exact covariance") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 33);
    paths::RlSampler sampler(0.75, grid, paths::RlMethod::cholesky);
    const std::size_t n = 20000;
    std::vector<double> end(n), mid(n);
    parallel_for(n, 2, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto p = sampler.sample(kSeed, k);
            end[k] = p.values.back();
            mid[k] = p.values[16];
        }
    });
    const double want_end = paths::rl_cov(0.75, 1.0, 1.0);
    CHECK(std::abs(stats::variance(end) - want_end) <
          4.0 * want_end * std::sqrt(2.0 / double(n - 1)));
    double cross = 0;
    for (std::size_t k = 0; k < n; ++k) cross += end[k] * mid[k];
    const double want_cross = paths::rl_cov(0.75, 1.0, 0.5);
    const double se = std::sqrt((want_end * paths::rl_cov(0.75, 0.5, 0.5) +
                                 want_cross * want_cross) / double(n));
    CHECK(std::abs(cross / double(n) - want_cross) < 4 * se);
}

TEST_CASE("z_h: H = 1/2 kernel vanishes identically") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 17);
    const auto p = paths::sample_zh(0.5, grid, kSeed, 0, 4.0, 64);
    for (double v : p.values) CHECK(v == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("z_h: variance stable under doubling the truncation") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 9);
    const std::size_t n = 20000;
    double var32 = 0, var64 = 0;
    for (double m : {32.0, 64.0}) {
        paths::ZhSampler sampler(0.6, grid, m, 256, 1e-2);
        std::vector<double> end(n);
        parallel_for(n, 2, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) end[k] = sampler.sample(kSeed, k).values.back();
        });
        (m == 32.0 ? var32 : var64) = stats::variance(end);
    }
    // the shift is at most the certified tail bound at the smaller M plus MC noise
    CHECK(std::abs(var32 - var64) <
          paths::zh_tail_variance_bound(0.6, 1.0, 32.0) +
              4.0 * std::max(var64, 0.01) * std::sqrt(2.0 / double(n - 1)));
}

TEST_CASE("z_h: truncation below the certified bound is rejected with the required M") {
    const auto grid = TimeGrid::uniform(0.0, 2.0, 9);
    CHECK(paths::zh_tail_variance_bound(0.75, 2.0, 8.0) >
          paths::zh_tail_variance_bound(0.75, 2.0, 16.0));
    const double need = paths::zh_required_truncation(0.75, 2.0, 1e-6);
    CHECK(paths::zh_tail_variance_bound(0.75, 2.0, need) == doctest::Approx(1e-6).epsilon(1e-6));
    CHECK_THROWS_AS(paths::ZhSampler(0.75, grid, 0.5, 64, 1e-9), parameter_error);
}

TEST_CASE("representation B_H = a_H (W_H + Z_H): unit variance at t = 1") {
    const double H = 0.6;
    const double a = std::tgamma(H + 0.5) /
                     std::sqrt(1.0 / (2 * H) +
                               [] {
                                   // crude reference integral for the test only
                                   double acc = 0;
                                   const int n = 400000;
                                   const double up = 400.0;
                                   for (int i = 0; i < n; ++i) {
                                       const double u = (i + 0.5) * up / n;
                                       const double d = std::pow(1 + u, 0.1) - std::pow(u, 0.1);
                                       acc += d * d * up / n;
                                   }
                                   return acc;
                               }());
    const auto grid = TimeGrid::uniform(0.0, 1.0, 65);
    paths::RlSampler w(H, grid, paths::RlMethod::kernel_convolution);
    paths::ZhSampler z(H, grid, 64.0, 512, 2e-3);
    const std::size_t n = 30000;
    std::vector<double> end(n);
    parallel_for(n, 2, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto pw = w.sample(substream(kSeed, 100), k);
            const auto pz = z.sample(substream(kSeed, 200), k);
            end[k] = a * (pw.values.back() + pz.values.back());
        }
    });
    CHECK(std::abs(stats::variance(end) - 1.0) < 4.0 * std::sqrt(2.0 / double(n - 1)) + 5e-3);
}

TEST_CASE("stationary sampler reproduces the requested covariance") {
    const auto grid = TimeGrid::uniform(0.0, 10.0, 501);
    const double dt = grid.spacing();
    paths::StationarySampler ou([](double h) { return std::exp(-std::abs(h) / 2); }, grid);
    const std::size_t n = 20000;
    double lag0 = 0, lag1 = 0;
    std::vector<double> l0(n), l1(n);
    parallel_for(n, 2, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto p = ou.sample(kSeed, k);
            double s0 = 0, s1 = 0;
            for (std::size_t i = 0; i + 1 < p.size(); ++i) {
                s0 += p.values[i] * p.values[i];
                s1 += p.values[i] * p.values[i + 1];
            }
            l0[k] = s0 / double(p.size() - 1);
            l1[k] = s1 / double(p.size() - 1);
        }
    });
    lag0 = stats::mean(l0);
    lag1 = stats::mean(l1);
    CHECK(lag0 == doctest::Approx(1.0).epsilon(0.02));
    CHECK(lag1 == doctest::Approx(std::exp(-dt / 2)).epsilon(0.02));
}

TEST_CASE("stationary sampler: white covariance gives iid normals") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 129);
    const double dt = grid.spacing();
    paths::StationarySampler white(
        [dt](double h) { return std::abs(h) < dt / 2 ? 1.0 : 0.0; }, grid);
    const auto p = white.sample(kSeed, 0);
    std::vector<double> x = p.values;
    CHECK(stats::ks_normal_pvalue(x) > 1e-4);
}

TEST_CASE("sampling is bit-reproducible for any worker count") {
    const auto grid = TimeGrid::uniform(0.0, 1.0, 129);
    paths::FbmSampler sampler(0.7, grid, paths::FbmMethod::circulant);
    std::vector<std::vector<double>> a(8), b(8);
    parallel_for(8, 1, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) a[k] = sampler.sample(kSeed, k).values;
    });
    parallel_for(8, 4, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) b[k] = sampler.sample(kSeed, k).values;
    });
    CHECK(a == b);
}

TEST_CASE("self-similarity: W_lambda(ct)/c^lambda matches W_lambda(t) moments") {
    const double lambda = 0.8, c = 2.0, t = 0.5;
    const auto grid = TimeGrid::uniform(0.0, 1.0, 129);
    paths::RlSampler sampler(lambda, grid, paths::RlMethod::kernel_convolution);
    const std::size_t n = 20000;
    std::vector<double> at_t(n), at_ct(n);
    parallel_for(n, 2, [&](std::size_t b, std::size_t e) {
        for (std::size_t k = b; k < e; ++k) {
            const auto p = sampler.sample(kSeed, k);
            at_t[k] = p.values[64];                              // t = 0.5
            at_ct[k] = p.values[128] / std::pow(c, lambda);      // ct = 1.0
        }
    });
    const double v1 = stats::variance(at_t), v2 = stats::variance(at_ct);
    CHECK(std::abs(v1 - v2) < 4.0 * v1 * 2.0 * std::sqrt(2.0 / double(n - 1)));
    CHECK(std::abs(stats::mean(at_t)) < 4.0 * std::sqrt(v1 / double(n)));
    CHECK(std::abs(stats::mean(at_ct)) < 4.0 * std::sqrt(v2 / double(n)));
}
