// Acceptance gate: every criterion runs at its stated tolerance and prints
// one PASS/FAIL line.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>

#include "fraclab/acceptance.hpp"

TEST_CASE("acceptance criteria") {
    fraclab::acceptance::Options opts;
    opts.seed = fraclab::SeedSpec{20260810u, 1};
    if (const char* dir = std::getenv("FRACLAB_ACCEPTANCE_OUT")) opts.out_dir = dir;
    if (const char* quick = std::getenv("FRACLAB_ACCEPTANCE_QUICK"); quick && quick[0] == '1')
        opts.quick = true;

    const auto results = fraclab::acceptance::run_all(opts);
    REQUIRE(results.size() == 11);
    for (const auto& r : results) {
        std::printf("%s\n", fraclab::acceptance::format_line(r).c_str());
        std::fflush(stdout);
        CHECK_MESSAGE(r.pass, r.name, ": ", r.detail);
    }
}
