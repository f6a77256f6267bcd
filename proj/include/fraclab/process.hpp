#pragma once

#include <numeric>
#include <string>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab {

// Which Gaussian process to build: fBm B_H, Riemann-Liouville W_lambda, or
// the fractionally integrated fBm I_gamma(B_H), each optionally pushed
// through the m-fold weighted integral chain with exponents alpha_1..alpha_m.
enum class BaseKind { fbm, rl, fbm_frac };

struct ProcessSpec {
    BaseKind base = BaseKind::fbm;
    double hurst = 0.5;   // H in (0,1), fbm / fbm_frac
    double lambda = 0.5;  // RL exponent, > 0
    double gamma = 0.0;   // fractional-integration order, >= 0 (fbm_frac)
    std::vector<double> weights;  // alpha_1..alpha_m (possibly empty)

    double base_index() const {
        switch (base) {
            case BaseKind::fbm: return hurst;
            case BaseKind::rl: return lambda;
            case BaseKind::fbm_frac: return hurst + gamma;
        }
        return 0;
    }

    double weight_sum() const {
        return std::accumulate(weights.begin(), weights.end(), 0.0);
    }

    std::size_t m() const { return weights.size(); }

    // tau = base + m - sum(alpha); any real, must be finite.
    double self_similarity_index() const {
        return base_index() + double(m()) - weight_sum();
    }

    bool fbm_branch() const { return base != BaseKind::rl; }

    // Theorem hypothesis: alpha_1 + ... + alpha_i < tau_base + i for every i.
    void validate() const {
        if (base != BaseKind::rl) {
            if (!(hurst > 0 && hurst < 1)) throw parameter_error("ProcessSpec: H must lie in (0,1)");
            if (gamma < 0) throw parameter_error("ProcessSpec: gamma must be >= 0");
            if (base == BaseKind::fbm && gamma != 0)
                throw parameter_error("ProcessSpec: fbm base takes gamma = 0 (use fbm_frac)");
        } else {
            if (!(lambda > 0)) throw parameter_error("ProcessSpec: lambda must be > 0");
        }
        const double tau0 = base_index();
        double partial = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            partial += weights[i];
            if (!(partial < tau0 + double(i + 1)))
                throw parameter_error("ProcessSpec: admissibility fails at weight stage " +
                                      std::to_string(i + 1) +
                                      " (alpha_1+...+alpha_i must be < base_index + i)");
        }
        if (!std::isfinite(self_similarity_index()))
            throw parameter_error("ProcessSpec: self-similarity index is not finite");
    }

    static ProcessSpec fbm(double H, std::vector<double> alphas = {}) {
        ProcessSpec s;
        s.base = BaseKind::fbm;
        s.hurst = H;
        s.weights = std::move(alphas);
        s.validate();
        return s;
    }

    static ProcessSpec brownian(std::vector<double> alphas = {}) { return fbm(0.5, std::move(alphas)); }

    static ProcessSpec rl(double lambda, std::vector<double> alphas = {}) {
        ProcessSpec s;
        s.base = BaseKind::rl;
        s.lambda = lambda;
        s.weights = std::move(alphas);
        s.validate();
        return s;
    }

    static ProcessSpec fbm_frac(double H, double gamma, std::vector<double> alphas = {}) {
        ProcessSpec s;
        s.base = BaseKind::fbm_frac;
        s.hurst = H;
        s.gamma = gamma;
        s.weights = std::move(alphas);
        s.validate();
        return s;
    }
};

}  // namespace fraclab
