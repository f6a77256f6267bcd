#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fraclab/lil.hpp"
#include "fraclab/stats.hpp"

using namespace fraclab;

namespace {

lil::LilExperiment base_exp(lil::Theorem theorem, std::uint64_t tag) {
    lil::LilExperiment exp;
    exp.spec = ProcessSpec::brownian();
    exp.theorem = theorem;
    exp.seed = substream(SeedSpec{0x111, 0}, tag);
    exp.workers = 2;
    return exp;
}

}  // namespace

TEST_CASE("experiment validation") {
    auto exp = base_exp(lil::Theorem::sup_lil, 1);
    exp.horizons = {100, 50};
    CHECK_THROWS_AS(exp.validate(), parameter_error);
    exp.horizons = {2.0};  // log log undefined
    CHECK_THROWS_AS(exp.validate(), parameter_error);
    exp.horizons = {100, 1000};
    exp.log_spacing = 0.2;
    CHECK_THROWS_AS(exp.validate(), parameter_error);
}

TEST_CASE("sup-LIL: Brownian median ratio near 1 with an upward trend") {
    auto exp = base_exp(lil::Theorem::sup_lil, 2);
    for (double u : {1.0, 2.0, 3.0, 4.0}) exp.horizons.push_back(std::exp(std::exp(u)));
    exp.n_replicas = 40;
    const auto rep = lil::run_sup_lil(exp);
    CHECK(rep.theory_constant == doctest::Approx(1.0));  // sigma_W(1/2)
    CHECK(rep.median_ratio.back() > 0.85);
    CHECK(rep.median_ratio.back() < 1.1);
    CHECK(rep.median_ratio.front() < rep.median_ratio.back());

    // the constant-path arithmetic: a flat statistic sigma/sqrt(2 log log T) shrinks
    const double sigma = 1.0;
    CHECK(sigma / std::sqrt(2.0 * std::log(std::log(exp.horizons.back()))) < 0.4);
}

TEST_CASE("sup-LIL: m = 1, alpha = 0.5 targets sigma^2 = 2/3") {
    auto exp = base_exp(lil::Theorem::sup_lil, 3);
    exp.spec = ProcessSpec::brownian({0.5});
    for (double u : {2.0, 3.0, 4.0, 4.5}) exp.horizons.push_back(std::exp(std::exp(u)));
    exp.n_replicas = 24;
    const auto rep = lil::run_sup_lil(exp);
    CHECK(rep.theory_constant == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(2e-3));
    CHECK(rep.median_ratio.back() > 0.7);
    CHECK(rep.median_ratio.back() < 1.15);
}

TEST_CASE("stationarity of U inside the sup-LIL window") {
    auto exp = base_exp(lil::Theorem::sup_lil, 4);
    exp.spec = ProcessSpec::brownian({0.0});
    exp.horizons = {std::exp(std::exp(2.0))};
    exp.n_replicas = 1;
    // sample many replicas through the public report: statistic at one horizon
    // reflects sup over the window; stationarity checked through formulas
    const auto cov = formulas::stationary_cov(exp.spec);
    CHECK(cov(0.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-6));
    CHECK(cov(2.0) == doctest::Approx(cov(-2.0)));
}

TEST_CASE("chung liminf: Brownian running minimum brackets (pi^2/8)^{1/2}") {
    auto exp = base_exp(lil::Theorem::chung_liminf, 5);
    for (double u : {1.0, 1.75, 2.5, 3.25, 4.0}) exp.horizons.push_back(std::exp(std::exp(u)));
    exp.n_replicas = 30;
    const auto rep = lil::run_chung_liminf(exp, formulas::kappa_known(0.5));
    const double target = std::sqrt(std::numbers::pi * std::numbers::pi / 8.0);
    CHECK(rep.theory_constant == doctest::Approx(target));
    // running minimum is nonincreasing by construction
    for (const auto& row : rep.statistic)
        for (std::size_t k = 0; k + 1 < row.size(); ++k) CHECK(row[k + 1] <= row[k] + 1e-12);
    const double med = rep.median_statistic.back();
    CHECK(med > 0.70 * target);
    CHECK(med < 1.30 * target);
}

TEST_CASE("chung liminf: integrated Brownian stays inside the widened kappa band") {
    auto exp = base_exp(lil::Theorem::chung_liminf, 6);
    exp.spec = ProcessSpec::brownian({0.0});
    for (double u : {1.5, 2.5, 3.5, 4.0}) exp.horizons.push_back(std::exp(std::exp(u)));
    exp.n_replicas = 20;
    const auto rep = lil::run_chung_liminf(exp, formulas::kappa_known(1.5));
    CHECK(std::isnan(rep.theory_constant));
    const double lo = std::pow(0.375, 1.5) * 0.6;
    const double hi = std::pow(std::pow(2 * std::numbers::pi, 2.0 / 3.0) * 0.375, 1.5) * 1.5;
    const double med = rep.median_statistic.back();
    CHECK(med > lo);
    CHECK(med < hi);
    CHECK(rep.theory_lo == doctest::Approx(std::pow(0.375, 1.5)));
}

TEST_CASE("chung liminf: alpha scaling of the constants") {
    // two runs differing only in alpha: constants with ratio (1/(1-alpha/tau))^tau
    auto exp = base_exp(lil::Theorem::chung_liminf, 7);
    for (double u : {2.0, 3.0, 4.0}) exp.horizons.push_back(std::exp(std::exp(u)));
    exp.n_replicas = 40;
    const auto rep0 = lil::run_chung_liminf(exp, formulas::kappa_known(0.5));
    exp.alpha = 0.25;
    const auto rep1 = lil::run_chung_liminf(exp, formulas::kappa_known(0.5));
    const double got = rep1.median_statistic.back() / rep0.median_statistic.back();
    const double want = std::pow(1.0 / (1.0 - 0.25 / 0.5), 0.5);
    CHECK(std::abs(got - want) / want < 0.25);
    CHECK(rep1.theory_constant / rep0.theory_constant == doctest::Approx(want));
    CHECK_THROWS_AS(lil::run_chung_liminf(exp, formulas::kappa_known(1.0)), parameter_error);
}

TEST_CASE("integral liminf: Brownian case pi/sqrt(2) with nonincreasing trend") {
    auto exp = base_exp(lil::Theorem::integral_liminf, 8);
    exp.horizons = {10, 100, 1000, 10000};
    exp.n_replicas = 24;
    const auto rep = lil::run_integral_liminf(exp);
    const double target = std::numbers::pi / std::sqrt(2.0);
    CHECK(rep.theory_constant == doctest::Approx(target));
    for (std::size_t k = 0; k + 1 < rep.median_statistic.size(); ++k)
        CHECK(rep.median_statistic[k + 1] <= rep.median_statistic[k] + 1e-12);
    CHECK(std::abs(rep.median_statistic.back() - target) / target < 0.30);
}

TEST_CASE("integral liminf: general H constant pi/2 sqrt(beta(2H,1-H))") {
    auto exp = base_exp(lil::Theorem::integral_liminf, 9);
    exp.spec = ProcessSpec::fbm(0.7);
    exp.horizons = {10, 100, 1000};
    exp.n_replicas = 12;
    const auto rep = lil::run_integral_liminf(exp);
    const double H = 0.7;
    const double beta = std::exp(std::lgamma(2 * H) + std::lgamma(1 - H) - std::lgamma(1 + H));
    CHECK(rep.theory_constant == doctest::Approx(std::numbers::pi / 2.0 * std::sqrt(beta)));
}

TEST_CASE("long-run variance of V matches sigma~^2 and stabilizes across horizons") {
    auto exp = base_exp(lil::Theorem::integral_liminf, 10);
    exp.horizons = {2500, 5000, 10000};
    exp.n_replicas = 400;
    const auto rep = lil::run_integral_liminf(exp);
    const double want = 4.0;  // sigma~^2 for Brownian
    // pool endpoint and increment samples for degrees of freedom
    std::vector<double> samples;
    for (const auto& row : rep.endpoint_over_sqrt) {
        samples.push_back(row[1]);  // V(5000)/sqrt(5000)
        samples.push_back((row[2] * std::sqrt(10000.0) - row[1] * std::sqrt(5000.0)) /
                          std::sqrt(5000.0));
    }
    const double var = stats::variance(samples);
    CHECK(std::abs(var - want) / want < 0.10);

    // successive-horizon estimates differ by < 10% beyond S = 10^3
    std::vector<double> v1, v2;
    for (const auto& row : rep.endpoint_over_sqrt) {
        v1.push_back(row[1]);
        v2.push_back(row[2]);
    }
    const double e1 = stats::variance(v1), e2 = stats::variance(v2);
    CHECK(std::abs(e1 - e2) / e2 < 0.10 + 4.0 * std::sqrt(2.0 / double(v1.size())) *
                                              std::sqrt(2.0));
}
