#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fraclab::stats {

double mean(std::span<const double> x);
double variance(std::span<const double> x);  // unbiased
double median(std::vector<double> x);        // by copy

struct Interval {
    double lo = 0, hi = 0;
};

// Wilson score interval for a binomial proportion.
Interval wilson_interval(std::size_t successes, std::size_t n, double z);

double normal_cdf(double x);

// Kolmogorov limit distribution Q(t) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2).
double kolmogorov_q(double t);

// One-sample KS p-value of x against the standard normal (asymptotic).
double ks_normal_pvalue(std::vector<double> x);

// Two-sample KS p-value (asymptotic).
double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b);

// Upper-tail p-value of a chi-square statistic with 1 degree of freedom.
double chi_square1_pvalue(double stat);

struct LinFit {
    double slope = 0, intercept = 0;
    double slope_se = 0;
    double r2 = 0;
};

// Weighted least squares y ~ intercept + slope * x with weights 1/var_i.
LinFit weighted_linfit(std::span<const double> x, std::span<const double> y,
                       std::span<const double> var);

double spearman_rho(std::span<const double> x, std::span<const double> y);
// One-sided p-value for rho > 0 (t approximation).
double spearman_pvalue_positive(double rho, std::size_t n);

}  // namespace fraclab::stats
