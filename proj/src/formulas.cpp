#include "fraclab/formulas.hpp"

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fraclab/errors.hpp"
#include "fraclab/operators.hpp"
#include "fraclab/parallel.hpp"
#include "fraclab/process_sampler.hpp"
#include "fraclab/stats.hpp"

namespace fraclab::formulas {

namespace {

using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::tanh_sinh;

double beta_fn(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// deep tanh_sinh refinement can underflow the endpoint distance to exact 0;
// clamping at the smallest normal keeps singular integrands finite there
inline double clamp_tiny(double x) {
    return std::max(x, std::numeric_limits<double>::min());
}

// Integrands with endpoint singularities take (x, xc) so the distance to the
// nearest endpoint arrives exactly (no 1-x cancellation at deep refinement).
template <typename F>
double integrate_ts(const F& f, double a, double b, double tol, const char* what) {
    thread_local tanh_sinh<double> integrator(15);
    double err = 0, l1 = 0;
    const double val = integrator.integrate(f, a, b, tol, &err, &l1);
    if (!std::isfinite(val))
        throw numeric_error(std::string(what) + ": quadrature returned a non-finite value");
    if (err > 1e-4)
        throw numeric_error(std::string(what) + ": quadrature did not converge (residual " +
                            std::to_string(err) + ")");
    return val;
}

template <typename F>
double integrate_gk(const F& f, double a, double b, double tol) {
    double err = 0;
    return gauss_kronrod<double, 31>::integrate(f, a, b, 12, tol, &err);
}

}  // namespace

// ---------------------------------------------------------------------------
// closed forms and one-dimensional quadratures

double a_h(double H, double tol) {
    if (!(H > 0 && H < 1)) throw parameter_error("a_h: H must lie in (0,1)");
    // u = -s/(1-s) maps (-inf,0] to [0,1); the integrand becomes
    // (1-u)^{-1-2H} (1 - u^{H-1/2})^2, integrable at both endpoints.
    const double e = H - 0.5;
    auto f = [&](double u, double uc) {
        if (u < 0.5) {
            const double uu = clamp_tiny(std::abs(uc));  // near 0: exact distance
            const double d = 1.0 - std::pow(uu, e);
            return std::pow(1.0 - u, -1.0 - 2.0 * H) * d * d;
        }
        const double omu = clamp_tiny(std::abs(uc));  // near 1: exact 1 - u
        const double q = -std::expm1(e * std::log1p(-omu)) / omu;
        return std::pow(omu, 1.0 - 2.0 * H) * q * q;
    };
    const double integral = H == 0.5 ? 0.0 : integrate_ts(f, 0.0, 1.0, tol, "a_h");
    return std::tgamma(H + 0.5) / std::sqrt(1.0 / (2.0 * H) + integral);
}

double sigma2_w(double lambda) {
    if (!(lambda > 0)) throw parameter_error("sigma2_w: lambda must be > 0");
    const double g = std::tgamma(lambda + 0.5);
    return 1.0 / (2.0 * lambda * g * g);
}

double sigma2_b0(double H, double gamma, double tol) {
    if (!(H > 0 && H < 1)) throw parameter_error("sigma2_b0: H must lie in (0,1)");
    if (gamma == 0) return 1.0;  // Var B_H(1)
    if (!(gamma > 0)) throw parameter_error("sigma2_b0: gamma must be >= 0");
    const double g = std::tgamma(gamma);
    auto outer = [&](double y, double yc) {
        const double omy = clamp_tiny(y > 0.5 ? std::abs(yc) : 1.0 - y);
        const double bracket = 1.0 + std::pow(y, 2 * H) - std::pow(omy, 2 * H);
        const double in_tol = std::max(tol * 0.1, 1e-13);
        // (1-x)(1-xy) = omx (omy + y omx): the integrand changes character at
        // omx ~ omy, so the inner integral is split at that knee; each piece
        // then has a single endpoint singularity.
        auto f_of_omx = [&](double omx, double x) {
            return std::pow(x, 2 * H + 1) *
                   std::pow(clamp_tiny(omx * (omy + y * omx)), gamma - 1.0);
        };
        const double split = std::min(0.5, omy);
        const double x_star = 1.0 - split;
        auto left = [&](double x, double xc) {
            const double omx = x > 0.5 * x_star ? split + std::abs(xc) : 1.0 - x;
            return f_of_omx(omx, x);
        };
        auto right = [&](double x, double xc) {
            const double omx = clamp_tiny(x > 0.5 * (x_star + 1.0) ? std::abs(xc) : 1.0 - x);
            return f_of_omx(omx, x);
        };
        double inner = integrate_ts(left, 0.0, x_star, in_tol, "sigma2_b0 inner");
        inner += integrate_ts(right, x_star, 1.0, in_tol, "sigma2_b0 inner");
        return bracket * inner;
    };
    return integrate_ts(outer, 0.0, 1.0, tol, "sigma2_b0") / (g * g);
}

double r_lambda(double lambda, double h, double tol) {
    if (!(lambda > 0)) throw parameter_error("r_lambda: lambda must be > 0");
    h = std::abs(h);
    const double g = std::tgamma(lambda + 0.5);
    const double ehm1 = std::expm1(h);
    auto f = [&](double x, double xc) {
        // e^h - x = (e^h - 1) + (1 - x)
        const double omx = clamp_tiny(x > 0.5 ? std::abs(xc) : 1.0 - x);
        return std::pow(ehm1 + omx, lambda - 0.5) * std::pow(omx, lambda - 0.5);
    };
    const double integral = integrate_ts(f, 0.0, 1.0, std::min(tol, 1e-13), "r_lambda");
    return std::exp(-lambda * h) * integral / (g * g);
}

double sigma_tilde2_b(std::size_t m, std::span<const double> alphas, double gamma, double H) {
    if (!(H > 0 && H < 1)) throw parameter_error("sigma_tilde2_b: H must lie in (0,1)");
    if (gamma < 0) throw parameter_error("sigma_tilde2_b: gamma must be >= 0");
    if (alphas.size() != m) throw parameter_error("sigma_tilde2_b: alphas must have length m");
    double value = 2.0 * beta_fn(2 * H, 1 - H);
    const double gratio = std::tgamma(H + 1.0) / std::tgamma(H + 1.0 + gamma);
    value *= gratio * gratio;
    double partial = 0;
    for (std::size_t i = 0; i < m; ++i) {
        partial += alphas[i];
        const double tau_i = H + gamma + double(i + 1) - partial;
        if (!(tau_i > 0))
            throw parameter_error("sigma_tilde2_b: admissibility fails at stage " +
                                  std::to_string(i + 1));
        value /= tau_i * tau_i;
    }
    return value;
}

double sigma_tilde2_w(std::size_t m, std::span<const double> alphas, double lambda) {
    if (!(lambda > 0)) throw parameter_error("sigma_tilde2_w: lambda must be > 0");
    if (alphas.size() != m) throw parameter_error("sigma_tilde2_w: alphas must have length m");
    double sigma = std::tgamma(0.5) / std::tgamma(lambda + 1.0);
    double partial = 0;
    for (std::size_t i = 0; i < m; ++i) {
        partial += alphas[i];
        const double tau_i = lambda + double(i + 1) - partial;
        if (!(tau_i > 0))
            throw parameter_error("sigma_tilde2_w: admissibility fails at stage " +
                                  std::to_string(i + 1));
        sigma /= tau_i;
    }
    return sigma * sigma;
}

double chung_constant(double tau, double alpha, double kappa) {
    if (!(tau > 0)) throw parameter_error("chung_constant: tau must be > 0");
    if (!(kappa > 0)) throw parameter_error("chung_constant: kappa must be > 0");
    if (!(alpha < tau)) throw parameter_error("chung_constant: alpha must be < tau (pole at alpha = tau)");
    return kappa / (1.0 - alpha / tau);
}

double lil_constant(double tau, double alpha, double kappa, double a_factor) {
    return a_factor * std::pow(chung_constant(tau, alpha, kappa), tau);
}

KappaInfo kappa_known(double lambda) {
    KappaInfo info;
    if (lambda == 0.5) {
        info.kind = KappaInfo::Kind::exact;
        info.value = std::numbers::pi * std::numbers::pi / 8.0;
        info.lo = info.hi = info.value;
    } else if (lambda == 1.5) {
        info.kind = KappaInfo::Kind::bounds;
        info.lo = 3.0 / 8.0;
        info.hi = std::pow(2.0 * std::numbers::pi, 2.0 / 3.0) * 3.0 / 8.0;
    }
    return info;
}

double brownian_sup_smallball_exact(double eps) {
    if (!(eps > 0)) throw parameter_error("brownian_sup_smallball_exact: eps must be > 0");
    const double pi = std::numbers::pi;
    const double a = pi * pi / (8.0 * eps * eps);
    double sum = 0;
    for (int k = 0; k < 100000; ++k) {
        const double odd = 2.0 * k + 1.0;
        const double term = std::exp(-odd * odd * a) / odd;
        sum += (k % 2 == 0) ? term : -term;
        if (term < 1e-16) break;
    }
    return std::clamp(4.0 / pi * sum, 0.0, 1.0);
}

// ---------------------------------------------------------------------------
// stationary covariances

struct StationaryCov::Impl {
    std::function<double(double)> raw;  // h >= 0
    double C = 1, c = 1;                // certified r(h) <= C exp(-c h)
    double r0v = 0;
    // optional spline acceleration on [0, xmax]
    bool has_table = false;
    double dx = 0, xmax = 0, tail_val = 0;
    std::optional<boost::math::interpolators::cardinal_cubic_b_spline<double>> spline;

    double eval(double h) const {
        h = std::abs(h);
        if (has_table) {
            if (h <= xmax) return (*spline)(h);
            return tail_val * std::exp(-c * (h - xmax));
        }
        return raw(h);
    }
};

double StationaryCov::operator()(double h) const { return impl_->eval(h); }
double StationaryCov::r0() const { return impl_->r0v; }
double StationaryCov::decay_rate() const { return impl_->c; }
double StationaryCov::decay_coef() const { return impl_->C; }

double StationaryCov::long_run_variance(double tol) const {
    const auto& im = *impl_;
    // certified cut: remaining mass below tol/2
    const double X = std::max(1.0, std::log(std::max(2.0 * im.C / (im.c * tol), 1.0)) / im.c);
    auto f = [&](double h) { return im.eval(h); };
    double integral = integrate_gk(f, 0.0, std::min(2.0, X), tol * 0.1);
    if (X > 2.0) integral += integrate_gk(f, 2.0, X, tol * 0.1);
    integral += im.eval(X) / im.c;  // modeled tail, itself below the certified bound
    return 2.0 * integral;
}

namespace {

using CovImpl = StationaryCov::Impl;

std::shared_ptr<CovImpl> make_base_fbm(double H) {
    auto im = std::make_shared<CovImpl>();
    // r0(h) = (e^{Hh} + e^{-Hh} - |e^{h/2} - e^{-h/2}|^{2H})/2, rewritten as
    // (e^{-Hh} + e^{Hh}(1 - (1-e^{-h})^{2H}))/2 and evaluated through
    // expm1/log1p so the two e^{Hh}-scale terms never cancel.
    im->raw = [H](double h) {
        if (h < 1e-12) return 1.0;
        const double t = 2.0 * H * std::log1p(-std::exp(-h));
        const double big = std::exp(H * h + std::log(-std::expm1(t)));
        return 0.5 * (std::exp(-H * h) + big);
    };
    im->C = 0.5 * (1.0 + std::max(1.0, 2 * H));
    im->c = std::min(H, 1 - H);
    im->r0v = 1.0;
    return im;
}

std::shared_ptr<CovImpl> make_base_rl(double lambda, double tol) {
    auto im = std::make_shared<CovImpl>();
    im->raw = [lambda, tol](double h) { return r_lambda(lambda, h, tol); };
    const double g = std::tgamma(lambda + 0.5);
    im->C = std::max(sigma2_w(lambda), 1.0 / ((lambda + 0.5) * g * g));
    im->c = std::min(lambda, 0.5);
    im->r0v = sigma2_w(lambda);
    return im;
}

void tabulate(CovImpl& im, double tol) {
    if (im.r0v == 0.0) im.r0v = im.raw(0.0);
    const double scale = std::max(im.r0v, 1e-300);
    const double xmax = std::min(
        400.0 / im.c,
        std::max(4.0, std::log(std::max(im.C / (tol * scale * im.c), 1.0)) / im.c));
    const double dx = 0.05;
    const std::size_t n = std::size_t(std::ceil(xmax / dx)) + 1;
    std::vector<double> vals(n);
    for (std::size_t i = 0; i < n; ++i) vals[i] = im.raw(double(i) * dx);
    im.spline.emplace(vals.data(), vals.size(), 0.0, dx);
    im.dx = dx;
    im.xmax = double(n - 1) * dx;
    im.tail_val = vals.back();
    im.has_table = true;
}

std::shared_ptr<CovImpl> make_base_fbm_gamma(double H, double gamma, double tol) {
    auto fbm = make_base_fbm(H);
    auto im = std::make_shared<CovImpl>();
    const double g = std::tgamma(gamma);
    const double cc = fbm->c;
    // beta(gamma, H+1-c) absorbs the e^{c|u|} factor in the paper's bound.
    im->C = fbm->C * std::pow(beta_fn(gamma, H + 1.0 - cc) / g, 2.0);
    im->c = cc;
    im->raw = [fbm, H, gamma, g, tol](double h) {
        auto outer = [&](double y, double yc) {
            const double omy = clamp_tiny(y > 0.5 ? std::abs(yc) : 1.0 - y);
            const double wy = std::pow(omy, gamma - 1.0) * std::pow(y, H);
            auto inner = [&](double x, double xc) {
                const double omx = clamp_tiny(x > 0.5 ? std::abs(xc) : 1.0 - x);
                return fbm->eval(h + std::log(x) - std::log(y)) *
                       std::pow(omx, gamma - 1.0) * std::pow(x, H);
            };
            return wy * integrate_ts(inner, 0.0, 1.0, std::max(tol, 1e-12),
                                     "r_rec gamma base inner");
        };
        return integrate_ts(outer, 0.0, 1.0, std::max(tol * 10, 1e-11), "r_rec gamma base") /
               (g * g);
    };
    tabulate(*im, tol);
    im->r0v = im->eval(0.0);
    return im;
}

// One convolution stage: r_new(h) = (1/2tau) int r_prev(|x|) e^{-tau|h-x|} dx.
std::shared_ptr<CovImpl> make_conv(std::shared_ptr<CovImpl> prev, double tau, double tol) {
    if (!(tau > 0)) throw parameter_error("stationary covariance: stage index must be > 0");
    auto im = std::make_shared<CovImpl>();
    const double c_new = 0.9 * std::min(prev->c, tau);
    im->c = c_new;
    im->C = prev->C / (tau * (prev->c - c_new));
    im->raw = [prev, tau, tol](double h) {
        const double scale = std::max(prev->r0v, 1e-300);
        const double tol_abs = tol * scale * 1e-2;
        const double L = std::max(h + 8.0 / tau,
                                  std::log(std::max(prev->C / (tau * prev->c * tol_abs), 1.0)) /
                                      prev->c);
        auto f = [&](double x) { return prev->eval(x) * std::exp(-tau * std::abs(h - x)); };
        // kinks at x = 0 (evenness) and x = h
        double total = integrate_gk([&](double x) { return prev->eval(x) * std::exp(-tau * (h + x)); },
                                    0.0, L, tol);
        if (h < L) {
            total += integrate_gk(f, 0.0, h, tol);
            total += integrate_gk(f, h, L, tol);
        } else {
            total += integrate_gk(f, 0.0, L, tol);
        }
        return total / (2.0 * tau);
    };
    im->r0v = im->raw(0.0);
    return im;
}

std::shared_ptr<CovImpl> build_cov(double base_index, bool fbm_branch, double H, double gamma,
                                   std::span<const double> alphas, double tol) {
    std::shared_ptr<CovImpl> cur;
    if (fbm_branch) {
        cur = (gamma == 0) ? make_base_fbm(H) : make_base_fbm_gamma(H, gamma, tol);
    } else {
        cur = make_base_rl(base_index, tol);
    }
    double partial = 0;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        partial += alphas[i];
        const double tau_i = base_index + double(i + 1) - partial;
        if (!(tau_i > 0))
            throw parameter_error("stationary covariance: index must stay positive at stage " +
                                  std::to_string(i + 1));
        // materialize all but the last stage so evaluation cost stays flat in m
        if (i > 0 && !cur->has_table) tabulate(*cur, tol);
        cur = make_conv(std::move(cur), tau_i, tol);
    }
    return cur;
}

}  // namespace

StationaryCov r_rec_cov(std::size_t m, std::span<const double> alphas, double gamma, double H,
                        double tol) {
    if (m > 3) throw parameter_error("r_rec: recursion depth m <= 3 supported");
    if (alphas.size() != m) throw parameter_error("r_rec: alphas must have length m");
    if (!(H > 0 && H < 1)) throw parameter_error("r_rec: H must lie in (0,1)");
    if (gamma < 0) throw parameter_error("r_rec: gamma must be >= 0");
    double partial = 0;
    for (std::size_t i = 0; i < m; ++i) {
        partial += alphas[i];
        if (!(partial < H + gamma + double(i + 1)))
            throw parameter_error("r_rec: admissibility fails at stage " + std::to_string(i + 1));
    }
    return StationaryCov(build_cov(H + gamma, true, H, gamma, alphas, tol));
}

double r_rec(std::size_t m, std::span<const double> alphas, double gamma, double H, double h,
             double tol) {
    return r_rec_cov(m, alphas, gamma, H, tol)(h);
}

StationaryCov stationary_cov(const ProcessSpec& spec, double tol) {
    spec.validate();
    if (spec.m() > 3) throw parameter_error("stationary_cov: recursion depth m <= 3 supported");
    return StationaryCov(build_cov(spec.base_index(), spec.fbm_branch(), spec.hurst, spec.gamma,
                                   spec.weights, tol));
}

// ---------------------------------------------------------------------------
// sigma2_general: covariance push-through + Monte Carlo cross-check

namespace {

// J_alpha applied to a covariance row f (values at grid s) whose local
// exponent at 0 is rho; in-place cumulative result.
void weighted_row(double* f, std::size_t n, const std::vector<double>& s, double alpha,
                  double rho) {
    double acc = f[1] * std::pow(s[1], 1.0 - alpha) / (rho - alpha + 1.0);
    double f_prev = std::pow(s[1], -alpha) * f[1];
    f[0] = 0.0;
    f[1] = acc;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double f_next = std::pow(s[i + 1], -alpha) * f[i + 1];
        acc += 0.5 * (f_prev + f_next) * (s[i + 1] - s[i]);
        f_prev = f_next;
        f[i + 1] = acc;
    }
}

void transpose(std::vector<double>& m, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) std::swap(m[i * n + j], m[j * n + i]);
}

double pushthrough_variance(const ProcessSpec& spec, std::size_t n, unsigned workers) {
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) s[i] = double(i) / double(n - 1);
    std::vector<double> cov(n * n);

    double rho;  // local exponent of covariance rows at 0
    if (spec.base == BaseKind::rl) {
        // self-similar: C(u,v) = v^{2l} phi(u/v) for v <= u, phi from a log-ratio table
        const double lambda = spec.lambda;
        const std::size_t tab_n = 1024;
        const double max_log = std::log(double(n));
        std::vector<double> tab(tab_n);
        const double dlr = max_log / double(tab_n - 1);
        parallel_for(tab_n, workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k)
                tab[k] = paths::rl_cov(lambda, std::exp(double(k) * dlr), 1.0, 1e-11);
        });
        boost::math::interpolators::cardinal_cubic_b_spline<double> phi(tab.data(), tab.size(),
                                                                        0.0, dlr);
        const double diag = sigma2_w(lambda);
        parallel_for(n, workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) {
                for (std::size_t j = 0; j <= i; ++j) {
                    double v;
                    if (j == 0)
                        v = 0.0;
                    else if (i == j)
                        v = diag * std::pow(s[i], 2 * lambda);
                    else
                        v = std::pow(s[j], 2 * lambda) * phi(std::log(s[i] / s[j]));
                    cov[i * n + j] = cov[j * n + i] = v;
                }
            }
        });
        rho = lambda + 0.5;
    } else {
        const double H = spec.hurst;
        parallel_for(n, workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i)
                for (std::size_t j = 0; j <= i; ++j)
                    cov[i * n + j] = cov[j * n + i] = paths::fbm_cov(H, s[i], s[j]);
        });
        rho = std::min(2 * H, 1.0);
    }

    TimeGrid grid = TimeGrid::uniform(0.0, 1.0, n);
    auto apply_stage_rows = [&](auto&& row_op) {
        parallel_for(n, workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) row_op(&cov[i * n]);
        });
        transpose(cov, n);
        parallel_for(n, workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t i = b; i < e; ++i) row_op(&cov[i * n]);
        });
        transpose(cov, n);
    };

    if (spec.base == BaseKind::fbm_frac && spec.gamma > 0) {
        const double gamma = spec.gamma;
        apply_stage_rows([&](double* row) {
            GridPath p(grid, std::vector<double>(row, row + n));
            GridPath out = ops::riemann_liouville(p, gamma);
            std::copy(out.values.begin(), out.values.end(), row);
        });
        rho += gamma;
    }
    for (double alpha : spec.weights) {
        if (!(alpha < rho + 1.0))
            throw parameter_error("sigma2_general: weight stage not integrable against covariance rows");
        apply_stage_rows([&](double* row) { weighted_row(row, n, s, alpha, rho); });
        rho += 1.0 - alpha;
    }
    return cov[n * n - 1];
}

}  // namespace

Sigma2Result sigma2_general(const ProcessSpec& spec, const Sigma2Options& opts) {
    spec.validate();
    Sigma2Result res;

    if (spec.m() == 0) {
        // dispatch to the closed/quadrature m = 0 forms
        if (spec.base == BaseKind::rl)
            res.value = sigma2_w(spec.lambda);
        else if (spec.base == BaseKind::fbm)
            res.value = 1.0;
        else {
            const double ah = a_h(spec.hurst);
            res.value = ah * ah * sigma2_b0(spec.hurst, spec.gamma);
        }
        res.quad_gap = 0.0;
    } else {
        std::size_t n = opts.grid_n;
        if (spec.base == BaseKind::fbm_frac && n > 512) n = 512;  // gamma stage is O(n^2) per row
        const unsigned workers = opts.workers ? opts.workers : default_workers();
        const double fine = pushthrough_variance(spec, n, workers);
        const double coarse = pushthrough_variance(spec, n / 2, workers);
        res.value = fine;
        res.quad_gap = std::abs(fine - coarse);
    }

    if (opts.mc_check) {
        const unsigned workers = opts.workers ? opts.workers : default_workers();
        std::size_t mc_grid = opts.mc_grid;
        std::size_t mc_paths = opts.mc_paths;
        if (spec.base == BaseKind::fbm_frac) {
            mc_grid = std::min<std::size_t>(mc_grid, 513);
            mc_paths = std::min<std::size_t>(mc_paths, 5000);
        }
        ProcessSampler sampler(spec, TimeGrid::uniform(0.0, 1.0, mc_grid));
        std::vector<double> endvals(mc_paths);
        parallel_for(mc_paths, workers, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k)
                endvals[k] = sampler.sample(opts.seed, k).values.back();
        });
        res.mc_value = stats::variance(endvals);
        res.mc_se = res.mc_value * std::sqrt(2.0 / double(mc_paths - 1));
        const double dev = std::abs(res.mc_value - res.value);
        res.within_3se = dev <= 3.0 * res.mc_se;
        if (dev > 5.0 * res.mc_se)
            throw inconsistency_error(
                "sigma2_general: quadrature and Monte Carlo routes disagree by more than 5 SE "
                "(quad " + std::to_string(res.value) + ", mc " + std::to_string(res.mc_value) +
                ", se " + std::to_string(res.mc_se) + ")");
    }
    return res;
}

// ---------------------------------------------------------------------------
// weights and L^q norms

Weight Weight::indicator(double lo, double hi, double coef) {
    return power_law(coef, 0.0, lo, hi);
}

Weight Weight::power_law(double coef, double expo, double lo, double hi) {
    if (!(hi > lo) || lo < 0) throw parameter_error("Weight: need 0 <= lo < hi");
    Weight w;
    w.power = PowerLaw{coef, expo, lo, hi};
    // sparse tabulation for callers that want pointwise values
    const std::size_t n = 129;
    w.t.resize(n);
    w.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * double(i) / double(n - 1);
        w.t[i] = x;
        w.v[i] = x > 0 ? coef * std::pow(x, expo) : (expo == 0 ? coef : 0.0);
    }
    return w;
}

Weight Weight::tabulated(std::vector<double> t, std::vector<double> v) {
    if (t.size() != v.size() || t.size() < 2)
        throw parameter_error("Weight: tabulation needs matching arrays, n >= 2");
    for (std::size_t i = 0; i + 1 < t.size(); ++i)
        if (!(t[i] < t[i + 1])) throw parameter_error("Weight: nodes must increase");
    if (t.front() < 0) throw parameter_error("Weight: support must lie in [0, inf)");
    Weight w;
    w.t = std::move(t);
    w.v = std::move(v);
    return w;
}

double Weight::operator()(double x) const {
    if (power) {
        if (x <= power->lo || x > power->hi) return 0.0;
        return power->coef * std::pow(x, power->expo);
    }
    if (x < t.front() || x > t.back()) return 0.0;
    const auto it = std::upper_bound(t.begin(), t.end(), x);
    if (it == t.begin()) return v.front();
    if (it == t.end()) return v.back();
    const std::size_t j = std::size_t(it - t.begin());
    const double w1 = (x - t[j - 1]) / (t[j] - t[j - 1]);
    return v[j - 1] * (1.0 - w1) + v[j] * w1;
}

double Weight::support_lo() const { return power ? power->lo : t.front(); }
double Weight::support_hi() const { return power ? power->hi : t.back(); }

Weight Weight::scaled(double c) const {
    Weight w = *this;
    for (double& x : w.v) x *= c;
    if (w.power) w.power->coef *= c;
    return w;
}

namespace {

// ||w||_{L^q(a,b]} for a block; q may be +inf.
double block_lq(const Weight& w, double a, double b, double q) {
    a = std::max(a, w.support_lo());
    b = std::min(b, w.support_hi());
    if (!(b > a)) return 0.0;
    if (w.power) {
        const double c = std::abs(w.power->coef), p = w.power->expo;
        if (c == 0) return 0.0;
        if (std::isinf(q)) return c * std::max(std::pow(a, p), std::pow(b, p));
        const double pq = p * q;
        double integral;
        if (std::abs(pq + 1.0) < 1e-12)
            integral = std::pow(c, q) * std::log(b / a);
        else
            integral = std::pow(c, q) * (std::pow(b, pq + 1.0) - std::pow(a, pq + 1.0)) / (pq + 1.0);
        return std::pow(integral, 1.0 / q);
    }
    // tabulated: nodes within (a,b] plus the boundaries
    std::vector<double> xs{a};
    for (double x : w.t)
        if (x > a && x < b) xs.push_back(x);
    xs.push_back(b);
    if (std::isinf(q)) {
        double mx = 0;
        for (double x : xs) mx = std::max(mx, std::abs(w(x)));
        return mx;
    }
    double integral = 0;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
        const double fa = std::pow(std::abs(w(xs[i])), q);
        const double fb = std::pow(std::abs(w(xs[i + 1])), q);
        integral += 0.5 * (fa + fb) * (xs[i + 1] - xs[i]);
    }
    return std::pow(integral, 1.0 / q);
}

}  // namespace

double lr_norm(const Weight& w, double r) {
    if (!(r > 0)) throw parameter_error("lr_norm: r must be > 0");
    if (w.power) {
        const double c = std::abs(w.power->coef), p = w.power->expo;
        const double a = w.power->lo, b = w.power->hi;
        if (c == 0) return 0.0;
        const double pr = p * r;
        double integral;
        if (std::abs(pr + 1.0) < 1e-12) {
            if (a == 0) return infinity();
            integral = std::pow(c, r) * std::log(b / a);
        } else {
            if (a == 0 && pr + 1.0 < 0) return infinity();
            integral =
                std::pow(c, r) * (std::pow(b, pr + 1.0) - (a > 0 ? std::pow(a, pr + 1.0) : 0.0)) /
                (pr + 1.0);
        }
        return std::pow(integral, 1.0 / r);
    }
    double integral = 0;
    for (std::size_t i = 0; i + 1 < w.t.size(); ++i) {
        const double fa = std::pow(std::abs(w.v[i]), r);
        const double fb = std::pow(std::abs(w.v[i + 1]), r);
        integral += 0.5 * (fa + fb) * (w.t[i + 1] - w.t[i]);
    }
    return std::pow(integral, 1.0 / r);
}

double w_norm(const Weight& w, double r, double tau, double q, double tol) {
    if (!(r > 0) || !(tau > 0)) throw parameter_error("w_norm: need r > 0, tau > 0");
    if (!(q >= 1)) throw parameter_error("w_norm: need q >= 1 (or infinity)");
    const double hi = w.support_hi();
    if (!(hi > 0)) return 0.0;
    const int k_hi = int(std::ceil(std::log2(hi)));
    double sum = 0;
    // downward until blocks stop contributing (support bounded away from 0
    // terminates immediately; support touching 0 converges geometrically)
    for (int k = k_hi; k > -1100; --k) {
        const double a = std::pow(2.0, k - 1), b = std::pow(2.0, k);
        const double nq = block_lq(w, a, b, q);
        const double term = std::pow(2.0, double(k) * r * tau) * std::pow(nq, r);
        if (!std::isfinite(term)) return infinity();
        sum += term;
        if (b <= w.support_lo()) break;
        if (sum > 0 && term < tol * sum && b < hi) break;
    }
    return std::pow(sum, 1.0 / r);
}

double lq_constant(double tau, double q, double kappa_tau_q, const Weight& w, LqMode mode) {
    if (!(tau > 0)) throw parameter_error("lq_constant: tau must be > 0");
    if (!(q >= 1)) throw parameter_error("lq_constant: q must be >= 1 (or infinity)");
    if (kappa_tau_q < 0) throw parameter_error("lq_constant: kappa must be >= 0");
    const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
    const double r = mode == LqMode::direct ? 1.0 / (tau + inv_q) : 1.0 / (tau + 1.0 + inv_q);
    const double dyadic_tau = mode == LqMode::direct ? tau : tau + 1.0;
    if (!std::isfinite(w_norm(w, r, dyadic_tau, q)))
        throw parameter_error("lq_constant: ||w||_{r,tau,q} is infinite");
    const double expo = mode == LqMode::direct ? 1.0 / tau : 1.0 / (tau + 1.0);
    return kappa_tau_q * std::pow(lr_norm(w, r), expo);
}

}  // namespace fraclab::formulas
