#pragma once

#include <string>
#include <vector>

#include "fraclab/formulas.hpp"
#include "fraclab/process.hpp"
#include "fraclab/rng.hpp"

namespace fraclab::lil {

enum class Theorem { sup_lil, chung_liminf, integral_liminf };

struct LilExperiment {
    ProcessSpec spec;
    Theorem theorem = Theorem::sup_lil;
    // T values for sup_lil / chung_liminf; S = log T values for integral_liminf.
    std::vector<double> horizons;
    std::size_t n_replicas = 50;
    SeedSpec seed{};
    double log_spacing = 0.02;  // grid step in log time
    double alpha = 0;           // chung_liminf weight exponent
    unsigned workers = 0;

    void validate() const;
};

struct LilReport {
    std::vector<double> horizons;
    // statistic[r][k]: replica r at horizon k.  For the liminf experiments
    // this is the running minimum over horizons (nonincreasing in k).
    std::vector<std::vector<double>> statistic;
    double theory_constant = 0;  // NaN when only a band is known
    double theory_lo = 0, theory_hi = 0;
    std::string provenance;
    std::vector<double> median_statistic;  // per horizon
    std::vector<double> median_ratio;      // median_statistic / theory (or band midpoint)
    // integral_liminf only: V(S_k)/sqrt(S_k) per replica/horizon, for the
    // long-run variance cross-check.
    std::vector<std::vector<double>> endpoint_over_sqrt;
};

// sup_{1<=t<=T} |X(t)/t^index| / sqrt(2 log log T), via the stationary
// transform (horizon T costs log T grid points); trends to sigma.
LilReport run_sup_lil(const LilExperiment& exp);

// (log log T)^tau / T^{tau-alpha} * sup_{0<=t<=T} |X(t)/t^{alpha-sum a_i}|
// as a running minimum; compares against a_H (kappa/(1-alpha/tau))^tau,
// with kappa exact, banded, or estimated upstream.
LilReport run_chung_liminf(const LilExperiment& exp, const formulas::KappaInfo& kappa);

// sqrt(log log S / S) * sup_{[0,S]} |V|, V(t) = int_0^t U, horizons in S;
// running minimum compared against (pi/sqrt 8) * sigma~.
LilReport run_integral_liminf(const LilExperiment& exp);

}  // namespace fraclab::lil
