#pragma once

#include <string>
#include <vector>

#include "fraclab/rng.hpp"

namespace fraclab::acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0;
};

struct Options {
    std::string out_dir;  // empty: no artifacts written
    SeedSpec seed{20260810u, 1};
    unsigned workers = 0;  // 0 -> hardware
    bool quick = false;    // reduced sampling sizes (smoke runs; the gate is the full mode)
    std::vector<int> only; // empty = all criteria
};

std::vector<CriterionResult> run_all(const Options& opts);

// One line per criterion: "PASS  3  brownian-smallball ..." etc.
std::string format_line(const CriterionResult& r);

}  // namespace fraclab::acceptance
