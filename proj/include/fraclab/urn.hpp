#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fraclab/rng.hpp"

namespace fraclab::urn {

// Randomized play-the-winner urn.  A drawn white ball adds white with
// probability p_w (else black); a drawn black ball adds black with
// probability p_b (else white).
struct UrnParams {
    double p_w = 0.5, p_b = 0.5;
    double w0 = 1.0, b0 = 1.0;

    void validate() const;
};

struct UrnConstants {
    double rho = 0;        // p_w + p_b - 1
    double v = 0;          // q_b / (q_w + q_b)
    double sigma1_sq = 0;  // q_w q_b / (q_w + q_b)^2
    double sigma2_sq = 0;  // q_w q_b (p_w + p_b) / (q_w + q_b)
};

// Derived constants; rho^2 sigma1^2 + sigma2^2 = sigma1^2 holds exactly.
UrnConstants rpw_params(const UrnParams& p);

struct UrnTrajectory {
    UrnParams params;
    std::vector<std::uint64_t> stages;  // checkpoint stage numbers
    std::vector<double> y;              // white-ball counts Y_n
    std::vector<double> n_draws;        // white draws N_n
};

// Exact dynamics, two uniforms per stage in fixed order (draw, addition).
// With empty checkpoints every stage 0..n is recorded.
UrnTrajectory simulate(const UrnParams& p, std::uint64_t n, SeedSpec seed,
                       std::uint64_t replica = 0,
                       std::span<const std::uint64_t> checkpoints = {});

struct UrnDiagnostics {
    UrnParams params;
    UrnConstants consts;
    std::vector<std::uint64_t> checkpoints;
    // per replica x checkpoint; limsup statistics are running maxima,
    // chung statistics running minima.
    std::vector<std::vector<double>> limsup_y;  // max_m |Y_m - m v| / sqrt(2 m loglog m)
    std::vector<std::vector<double>> limsup_n;
    std::vector<std::vector<double>> chung_y;   // min over checkpoints of sqrt(loglog n / n) sup_m |Y_m - m v|
    std::vector<std::vector<double>> chung_n;
    std::vector<double> y_over_n;  // Y_n / n at the final stage, per replica
    double limsup_theory_y = 0;    // sigma1 / sqrt(1 - 2 rho)
    double limsup_theory_n = 0;    // sqrt(sigma1^2 (1 + 2(p_w+p_b)) / (1 - 2 rho))
    double chung_theory = 0;       // sigma1 pi / sqrt(8)
};

// Streaming diagnostics on dyadic checkpoints (memory O(#checkpoints)).
UrnDiagnostics lil_diagnostics(const UrnParams& p, std::uint64_t n, std::size_t replicas,
                               SeedSpec seed, unsigned workers = 0);

}  // namespace fraclab::urn
