#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "fraclab/errors.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/stats.hpp"
#include "fraclab/urn.hpp"

using namespace fraclab;

TEST_CASE("rpw constants: worked examples") {
    const auto sym = urn::rpw_params({0.5, 0.5, 1, 1});
    CHECK(sym.rho == doctest::Approx(0.0));
    CHECK(sym.v == doctest::Approx(0.5));
    CHECK(sym.sigma1_sq == doctest::Approx(0.25));
    CHECK(sym.sigma2_sq == doctest::Approx(0.25));

    const auto c = urn::rpw_params({0.7, 0.4, 1, 1});
    CHECK(c.rho == doctest::Approx(0.1));
    CHECK(c.v == doctest::Approx(2.0 / 3.0));
    CHECK(c.sigma1_sq == doctest::Approx(2.0 / 9.0));
    CHECK(c.sigma2_sq == doctest::Approx(0.22));
    CHECK(c.rho * c.rho * c.sigma1_sq + c.sigma2_sq == doctest::Approx(c.sigma1_sq).epsilon(1e-14));

    // p_w = p_b always gives v = 1/2
    for (double p : {0.2, 0.5, 0.9})
        CHECK(urn::rpw_params({p, p, 1, 1}).v == doctest::Approx(0.5));

    CHECK_THROWS_AS(urn::rpw_params({0.0, 0.5, 1, 1}), parameter_error);
    CHECK_THROWS_AS(urn::rpw_params({0.5, 0.5, 0, 1}), parameter_error);
}

TEST_CASE("identity rho^2 sigma1^2 + sigma2^2 = sigma1^2 across a parameter sweep") {
    for (int i = 1; i <= 10; ++i) {
        for (int j = 1; j <= 10; ++j) {
            const auto c = urn::rpw_params({i / 11.0, j / 11.0, 2, 3});
            CHECK(std::abs(c.rho * c.rho * c.sigma1_sq + c.sigma2_sq - c.sigma1_sq) < 1e-12);
        }
    }
}

TEST_CASE("simulate: n = 0 and trajectory invariants") {
    const auto t0 = urn::simulate({0.6, 0.3, 2.0, 1.0}, 0, SeedSpec{1, 1});
    REQUIRE(t0.stages.size() == 1);
    CHECK(t0.y[0] == 2.0);
    CHECK(t0.n_draws[0] == 0.0);

    const auto t = urn::simulate({0.6, 0.3, 2.0, 1.0}, 500, SeedSpec{1, 1});
    REQUIRE(t.stages.size() == 501);
    for (std::size_t i = 1; i < t.stages.size(); ++i) {
        const double dy = t.y[i] - t.y[i - 1];
        CHECK(dy >= 0.0);
        CHECK(dy <= 1.0);
        const double dn = t.n_draws[i] - t.n_draws[i - 1];
        CHECK(dn >= 0.0);
        CHECK(dn <= 1.0);
        // ball conservation: white + black = w0 + b0 + stage, so Y <= total
        CHECK(t.y[i] <= 2.0 + 1.0 + double(t.stages[i]));
    }
}

TEST_CASE("one-step law: P(white added) = p_W W0/(W0+B0) + q_B B0/(W0+B0)") {
    const urn::UrnParams p{0.7, 0.4, 2.0, 1.0};
    const double want = 0.7 * (2.0 / 3.0) + 0.6 * (1.0 / 3.0);
    const std::size_t n = 1000000;
    std::vector<std::size_t> counts(2, 0);
    parallel_for(n, 2, [&](std::size_t b, std::size_t e) {
        std::size_t local = 0;
        for (std::size_t k = b; k < e; ++k) {
            const auto t = urn::simulate(p, 1, SeedSpec{0xF00D, 0}, k);
            if (t.y[1] > t.y[0]) ++local;
        }
        static std::mutex mu;
        std::lock_guard<std::mutex> lock(mu);
        counts[0] += local;
    });
    const double p_hat = double(counts[0]) / double(n);
    const double expected = want * double(n);
    const double chi2 = (double(counts[0]) - expected) * (double(counts[0]) - expected) /
                            expected +
                        (double(n - counts[0]) - (n - expected)) *
                            (double(n - counts[0]) - (n - expected)) / (n - expected);
    CHECK(stats::chi_square1_pvalue(chi2) > 1e-3);
    CHECK(p_hat == doctest::Approx(want).epsilon(0.01));
}

TEST_CASE("law of large numbers: Y_n/n approaches v") {
    for (const auto& p : {urn::UrnParams{0.5, 0.5, 1, 1}, urn::UrnParams{0.7, 0.4, 1, 1}}) {
        const auto d = urn::lil_diagnostics(p, 100000, 50, SeedSpec{0xBEEF, 0}, 2);
        const double mean = stats::mean(d.y_over_n);
        const double se = std::sqrt(stats::variance(d.y_over_n) / 50.0);
        CHECK(std::abs(mean - d.consts.v) <= 3.0 * se);
    }
}

TEST_CASE("variance of Y_n - nv trends to sigma1^2/(1-2rho)") {
    const urn::UrnParams p{0.7, 0.4, 1, 1};  // rho = 0.1
    const auto c = urn::rpw_params(p);
    const std::size_t n = 100000, reps = 200;
    std::vector<double> dev(reps);
    const auto d = urn::lil_diagnostics(p, n, reps, SeedSpec{0xCAFE, 0}, 2);
    for (std::size_t r = 0; r < reps; ++r) dev[r] = (d.y_over_n[r] - c.v) * std::sqrt(double(n));
    const double want = c.sigma1_sq / (1 - 2 * c.rho);
    CHECK(std::abs(stats::variance(dev) - want) / want < 0.20);
}

TEST_CASE("lil diagnostics: chung and limsup statistics near their constants") {
    const urn::UrnParams p{0.5, 0.5, 1, 1};
    const std::uint64_t n = 1 << 17;
    const std::size_t reps = 60;
    const auto d = urn::lil_diagnostics(p, n, reps, SeedSpec{0xD06, 0}, 2);
    CHECK(d.chung_theory == doctest::Approx(0.5 * std::numbers::pi / std::sqrt(8.0)));
    CHECK(d.limsup_theory_y == doctest::Approx(0.5));
    CHECK(d.limsup_theory_n == doctest::Approx(std::sqrt(3.0) / 2.0));

    std::vector<double> chung_final, limsup_final, limsup_n_final;
    for (std::size_t r = 0; r < reps; ++r) {
        chung_final.push_back(d.chung_y[r].back());
        limsup_final.push_back(d.limsup_y[r].back());
        limsup_n_final.push_back(d.limsup_n[r].back());
        // running-min / running-max structure
        for (std::size_t k = 0; k + 1 < d.checkpoints.size(); ++k) {
            CHECK(d.chung_y[r][k + 1] <= d.chung_y[r][k] + 1e-12);
            CHECK(d.limsup_y[r][k + 1] >= d.limsup_y[r][k] - 1e-12);
        }
    }
    const double med = stats::median(chung_final);
    CHECK(med > 0.6 * d.chung_theory);
    CHECK(med < 1.5 * d.chung_theory);
    // limsup statistics live below their constants at desk scale but same order
    const double med_ls = stats::median(limsup_final);
    CHECK(med_ls > 0.35 * d.limsup_theory_y);
    CHECK(med_ls < 1.3 * d.limsup_theory_y);
    const double med_ls_n = stats::median(limsup_n_final);
    CHECK(med_ls_n > 0.35 * d.limsup_theory_n);
    CHECK(med_ls_n < 1.3 * d.limsup_theory_n);
    CHECK_THROWS_AS(urn::lil_diagnostics({0.9, 0.8, 1, 1}, 1000, 2, SeedSpec{1, 1}, 1),
                    parameter_error);  // rho >= 1/2
}

TEST_CASE("simulation is reproducible per replica regardless of worker count") {
    const urn::UrnParams p{0.6, 0.45, 1, 2};
    const auto d1 = urn::lil_diagnostics(p, 1 << 12, 8, SeedSpec{42, 42}, 1);
    const auto d2 = urn::lil_diagnostics(p, 1 << 12, 8, SeedSpec{42, 42}, 4);
    CHECK(d1.y_over_n == d2.y_over_n);
    CHECK(d1.chung_y == d2.chung_y);
}
