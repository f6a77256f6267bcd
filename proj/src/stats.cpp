#include "fraclab/stats.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fraclab/errors.hpp"

namespace fraclab::stats {

double mean(std::span<const double> x) {
    if (x.empty()) throw parameter_error("stats::mean: empty sample");
    return std::accumulate(x.begin(), x.end(), 0.0) / double(x.size());
}

double variance(std::span<const double> x) {
    if (x.size() < 2) throw parameter_error("stats::variance: need at least two points");
    const double m = mean(x);
    double acc = 0;
    for (double v : x) acc += (v - m) * (v - m);
    return acc / double(x.size() - 1);
}

double median(std::vector<double> x) {
    if (x.empty()) throw parameter_error("stats::median: empty sample");
    const std::size_t mid = x.size() / 2;
    std::nth_element(x.begin(), x.begin() + mid, x.end());
    double hi = x[mid];
    if (x.size() % 2 == 1) return hi;
    double lo = *std::max_element(x.begin(), x.begin() + mid);
    return 0.5 * (lo + hi);
}

Interval wilson_interval(std::size_t successes, std::size_t n, double z) {
    if (n == 0) throw parameter_error("wilson_interval: n must be positive");
    const double p = double(successes) / double(n);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / double(n);
    const double center = (p + z2 / (2.0 * double(n))) / denom;
    const double half =
        z * std::sqrt(p * (1 - p) / double(n) + z2 / (4.0 * double(n) * double(n))) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double kolmogorov_q(double t) {
    if (t <= 0) return 1.0;
    double sum = 0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * sum, 0.0, 1.0);
}

double ks_normal_pvalue(std::vector<double> x) {
    std::sort(x.begin(), x.end());
    const std::size_t n = x.size();
    double d = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = normal_cdf(x[i]);
        d = std::max(d, std::abs(f - double(i) / double(n)));
        d = std::max(d, std::abs(double(i + 1) / double(n) - f));
    }
    return kolmogorov_q(std::sqrt(double(n)) * d);
}

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const std::size_t n = a.size(), m = b.size();
    std::size_t i = 0, j = 0;
    double d = 0;
    while (i < n && j < m) {
        if (a[i] <= b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(double(i) / double(n) - double(j) / double(m)));
    }
    const double ne = double(n) * double(m) / double(n + m);
    return kolmogorov_q(std::sqrt(ne) * d);
}

double chi_square1_pvalue(double stat) {
    return stat <= 0 ? 1.0 : std::erfc(std::sqrt(stat / 2.0));
}

LinFit weighted_linfit(std::span<const double> x, std::span<const double> y,
                       std::span<const double> var) {
    const std::size_t n = x.size();
    if (n < 2 || y.size() != n || var.size() != n)
        throw parameter_error("weighted_linfit: need matching samples, n >= 2");
    double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 1.0 / std::max(var[i], 1e-300);
        sw += w;
        swx += w * x[i];
        swy += w * y[i];
        swxx += w * x[i] * x[i];
        swxy += w * x[i] * y[i];
    }
    const double det = sw * swxx - swx * swx;
    LinFit fit;
    fit.slope = (sw * swxy - swx * swy) / det;
    fit.intercept = (swxx * swy - swx * swxy) / det;
    fit.slope_se = std::sqrt(sw / det);
    const double ybar = swy / sw;
    double ss_res = 0, ss_tot = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = 1.0 / std::max(var[i], 1e-300);
        const double fit_i = fit.intercept + fit.slope * x[i];
        ss_res += w * (y[i] - fit_i) * (y[i] - fit_i);
        ss_tot += w * (y[i] - ybar) * (y[i] - ybar);
    }
    fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
    return fit;
}

namespace {

std::vector<double> ranks(std::span<const double> x) {
    const std::size_t n = x.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && x[order[j + 1]] == x[order[i]]) ++j;
        const double avg = 0.5 * (double(i) + double(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
        i = j + 1;
    }
    return r;
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 3)
        throw parameter_error("spearman_rho: need matching samples, n >= 3");
    const auto rx = ranks(x), ry = ranks(y);
    const double mx = mean(rx), my = mean(ry);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

double spearman_pvalue_positive(double rho, std::size_t n) {
    if (n < 4) return 1.0;
    if (rho >= 1.0) return 0.0;
    const double t = rho * std::sqrt(double(n - 2) / (1.0 - rho * rho));
    boost::math::students_t dist(double(n - 2));
    return 1.0 - boost::math::cdf(dist, t);
}

}  // namespace fraclab::stats
