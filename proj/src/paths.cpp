#include "fraclab/paths.hpp"

#include <Eigen/Dense>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fraclab/errors.hpp"
#include "fraclab/fft.hpp"

namespace fraclab::paths {

namespace {

constexpr double kEigClampRel = 1e-8;  // |negative eigenvalue| tolerated relative to max

// Eigenvalues of the circulant extension of a Toeplitz first column.
// row(j) must be valid for j = 0..M/2.  Returns empty on failure.
std::vector<double> circulant_eigenvalues(const std::function<double(std::size_t)>& row, std::size_t m) {
    std::vector<std::complex<double>> c(m);
    for (std::size_t j = 0; j <= m / 2; ++j) c[j] = row(j);
    for (std::size_t j = m / 2 + 1; j < m; ++j) c[j] = c[m - j];
    detail::dft(c, -1);
    std::vector<double> lam(m);
    double max_lam = 0;
    for (std::size_t k = 0; k < m; ++k) {
        lam[k] = c[k].real();
        max_lam = std::max(max_lam, lam[k]);
    }
    for (double& l : lam) {
        if (l < 0) {
            if (l < -kEigClampRel * max_lam) return {};
            l = 0;
        }
    }
    return lam;
}

// Exact-in-distribution synthesis of one stationary Gaussian block of
// length m from the circulant eigenvalues; returns the real field.
// Draw order is fixed: a_0, a_{m/2}, then (a_k, b_k) for k = 1..m/2-1.
std::vector<double> circulant_draw(const std::vector<double>& lam, PathRng& rng) {
    const std::size_t m = lam.size();
    std::vector<std::complex<double>> w(m);
    const double inv_m = 1.0 / double(m);
    w[0] = std::sqrt(lam[0] * inv_m) * rng.normal();
    w[m / 2] = std::sqrt(lam[m / 2] * inv_m) * rng.normal();
    for (std::size_t k = 1; k < m / 2; ++k) {
        const double scale = std::sqrt(0.5 * lam[k] * inv_m);
        const double a = rng.normal(), b = rng.normal();
        w[k] = {scale * a, scale * b};
        w[m - k] = std::conj(w[k]);
    }
    detail::dft(w, -1);
    std::vector<double> out(m);
    for (std::size_t j = 0; j < m; ++j) out[j] = w[j].real();
    return out;
}

Eigen::MatrixXd cholesky_factor(const Eigen::MatrixXd& cov, const char* what) {
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success)
        throw numeric_error(std::string(what) + ": Cholesky failed (covariance near-singular?)");
    return llt.matrixL();
}

constexpr std::size_t kCholeskyMaxPoints = 4096;

}  // namespace

double fbm_cov(double H, double t, double s) {
    if (!(H > 0 && H < 1)) throw parameter_error("fbm_cov: H must lie in (0,1)");
    if (t < 0 || s < 0) throw parameter_error("fbm_cov: times must be >= 0");
    return 0.5 * (std::pow(t, 2 * H) + std::pow(s, 2 * H) - std::pow(std::abs(t - s), 2 * H));
}

double rl_cov(double lambda, double t, double s, double tol) {
    if (!(lambda > 0)) throw parameter_error("rl_cov: lambda must be > 0");
    if (t < 0 || s < 0) throw parameter_error("rl_cov: times must be >= 0");
    if (!(tol > 0)) throw parameter_error("rl_cov: tol must be > 0");
    if (t < s) std::swap(t, s);
    if (s == 0) return 0;
    const double g = std::tgamma(lambda + 0.5);
    if (t == s) return std::pow(t, 2 * lambda) / (2 * lambda * g * g);
    // v = s - u, then v = s * x^{1/q} with q = lambda + 1/2 flattens the
    // endpoint singularity exactly: integrand becomes smooth on [0,1].
    const double q = lambda + 0.5;
    const double d = t - s;
    auto f = [&](double x) { return std::pow(d + s * std::pow(x, 1.0 / q), lambda - 0.5); };
    boost::math::quadrature::tanh_sinh<double> integrator;
    double err = 0, l1 = 0;
    const double val = integrator.integrate(f, 0.0, 1.0, tol, &err, &l1);
    if (!(std::isfinite(val)) || (l1 > 0 && err > 10 * tol * l1 + 1e-300))
        throw numeric_error("rl_cov: quadrature did not converge (residual " + std::to_string(err) + ")");
    return val * std::pow(s, q) / (q * g * g);
}

// ---------------------------------------------------------------------------
// fBm

struct FbmSampler::Impl {
    double H;
    TimeGrid grid;
    FbmMethod method;
    // circulant
    std::vector<double> lam;
    std::size_t m = 0;
    // cholesky
    Eigen::MatrixXd chol;  // factor over the nonzero grid times
    bool starts_at_zero = false;
};

FbmSampler::FbmSampler(double H, TimeGrid grid, FbmMethod method) : impl_(new Impl) {
    if (!(H > 0 && H < 1)) throw parameter_error("sample_fbm: H must lie in (0,1)");
    impl_->H = H;
    impl_->grid = std::move(grid);
    impl_->method = method;
    const auto& g = impl_->grid;
    impl_->starts_at_zero = g.front() == 0.0;

    if (method == FbmMethod::circulant) {
        if (!g.is_uniform()) throw grid_error("sample_fbm(circulant): grid must be uniform");
        if (!impl_->starts_at_zero) throw grid_error("sample_fbm(circulant): grid must start at t = 0");
        const std::size_t n_inc = g.size() - 1;
        if (n_inc == 0) return;  // single point {0}
        const double dt = g.spacing();
        auto gamma_k = [&](std::size_t k) {
            const double kk = double(k);
            return 0.5 * std::pow(dt, 2 * H) *
                   (std::pow(kk + 1, 2 * H) - 2 * std::pow(kk, 2 * H) +
                    std::pow(std::abs(kk - 1), 2 * H));
        };
        std::size_t m = std::max<std::size_t>(2, detail::next_pow2(2 * n_inc));
        auto lam = circulant_eigenvalues(gamma_k, m);
        if (lam.empty()) {
            m *= 2;  // double the padding once, then give up
            lam = circulant_eigenvalues(gamma_k, m);
            if (lam.empty())
                throw numeric_error(
                    "sample_fbm(circulant): embedding not nonnegative-definite after padding; "
                    "fall back to the cholesky method");
        }
        impl_->m = m;
        impl_->lam = std::move(lam);
    } else {
        const std::size_t n0 = impl_->starts_at_zero ? 1 : 0;
        const std::size_t n = g.size() - n0;
        if (g.size() > kCholeskyMaxPoints)
            throw grid_error("sample_fbm(cholesky): grid too large (max 4096 points)");
        if (n == 0) return;
        Eigen::MatrixXd cov(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                cov(i, j) = cov(j, i) = fbm_cov(H, g[i + n0], g[j + n0]);
        impl_->chol = cholesky_factor(cov, "sample_fbm(cholesky)");
    }
}

FbmSampler::~FbmSampler() = default;
FbmSampler::FbmSampler(FbmSampler&&) noexcept = default;
FbmSampler& FbmSampler::operator=(FbmSampler&&) noexcept = default;
const TimeGrid& FbmSampler::grid() const { return impl_->grid; }

GridPath FbmSampler::sample(SeedSpec seed, std::uint64_t path_index) const {
    const auto& g = impl_->grid;
    std::vector<double> values(g.size(), 0.0);
    PathRng rng(seed, path_index);
    if (impl_->method == FbmMethod::circulant) {
        if (g.size() > 1) {
            const auto field = circulant_draw(impl_->lam, rng);
            double acc = 0;
            for (std::size_t j = 0; j + 1 < g.size(); ++j) {
                acc += field[j];
                values[j + 1] = acc;
            }
        }
    } else {
        const std::size_t n0 = impl_->starts_at_zero ? 1 : 0;
        const std::size_t n = g.size() - n0;
        if (n > 0) {
            Eigen::VectorXd z(n);
            for (std::size_t i = 0; i < n; ++i) z(i) = rng.normal();
            Eigen::VectorXd x = impl_->chol.triangularView<Eigen::Lower>() * z;
            for (std::size_t i = 0; i < n; ++i) values[i + n0] = x(i);
        }
    }
    return GridPath(g, std::move(values), impl_->H);
}

// ---------------------------------------------------------------------------
// Riemann-Liouville

struct RlSampler::Impl {
    double lambda;
    TimeGrid grid;
    RlMethod method;
    // kernel_convolution: DFT of the kernel weights, padded to size m
    std::vector<std::complex<double>> kernel_hat;
    std::size_t m = 0;
    double sqrt_dt = 0;
    // cholesky
    Eigen::MatrixXd chol;
    bool starts_at_zero = false;
};

RlSampler::RlSampler(double lambda, TimeGrid grid, RlMethod method) : impl_(new Impl) {
    if (!(lambda > 0)) throw parameter_error("sample_rl: lambda must be > 0");
    impl_->lambda = lambda;
    impl_->grid = std::move(grid);
    impl_->method = method;
    const auto& g = impl_->grid;
    impl_->starts_at_zero = g.front() == 0.0;

    if (method == RlMethod::kernel_convolution) {
        if (!g.is_uniform()) throw grid_error("sample_rl(kernel_convolution): grid must be uniform");
        if (!impl_->starts_at_zero)
            throw grid_error("sample_rl(kernel_convolution): grid must start at t = 0");
        const std::size_t n = g.size();
        if (n == 1) return;
        const double dt = g.spacing();
        const double gam = std::tgamma(lambda + 0.5);
        // c_k^2 * dt = cell variance = int over cell of (t_j - u)^{2l-1} du / Gamma^2,
        // which telescopes to the exact Var W(t_j) at every grid point.
        std::vector<double> c(n, 0.0);
        for (std::size_t k = 1; k < n; ++k) {
            const double cell = (std::pow(double(k) * dt, 2 * lambda) -
                                 std::pow(double(k - 1) * dt, 2 * lambda)) /
                                (2 * lambda);
            c[k] = std::sqrt(cell / dt) / gam;
        }
        const std::size_t m = detail::next_pow2(2 * n);
        std::vector<std::complex<double>> khat(m);
        for (std::size_t k = 0; k < n; ++k) khat[k] = c[k];
        detail::dft(khat, -1);
        impl_->m = m;
        impl_->kernel_hat = std::move(khat);
        impl_->sqrt_dt = std::sqrt(dt);
    } else {
        const std::size_t n0 = impl_->starts_at_zero ? 1 : 0;
        const std::size_t n = g.size() - n0;
        if (g.size() > kCholeskyMaxPoints)
            throw grid_error("sample_rl(cholesky): grid too large (max 4096 points)");
        if (n == 0) return;
        Eigen::MatrixXd cov(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j <= i; ++j)
                cov(i, j) = cov(j, i) = rl_cov(lambda, g[i + n0], g[j + n0], 1e-11);
        impl_->chol = cholesky_factor(cov, "sample_rl(cholesky)");
    }
}

RlSampler::~RlSampler() = default;
RlSampler::RlSampler(RlSampler&&) noexcept = default;
RlSampler& RlSampler::operator=(RlSampler&&) noexcept = default;
const TimeGrid& RlSampler::grid() const { return impl_->grid; }

GridPath RlSampler::sample(SeedSpec seed, std::uint64_t path_index) const {
    const auto& g = impl_->grid;
    std::vector<double> values(g.size(), 0.0);
    PathRng rng(seed, path_index);
    if (impl_->method == RlMethod::kernel_convolution) {
        const std::size_t n = g.size();
        if (n > 1) {
            const std::size_t m = impl_->m;
            std::vector<std::complex<double>> b(m);
            for (std::size_t i = 0; i + 1 < n; ++i) b[i] = impl_->sqrt_dt * rng.normal();
            detail::dft(b, -1);
            for (std::size_t k = 0; k < m; ++k) b[k] *= impl_->kernel_hat[k];
            detail::dft(b, +1);
            const double inv_m = 1.0 / double(m);
            for (std::size_t j = 1; j < n; ++j) values[j] = b[j].real() * inv_m;
        }
    } else {
        const std::size_t n0 = impl_->starts_at_zero ? 1 : 0;
        const std::size_t n = g.size() - n0;
        if (n > 0) {
            Eigen::VectorXd z(n);
            for (std::size_t i = 0; i < n; ++i) z(i) = rng.normal();
            Eigen::VectorXd x = impl_->chol.triangularView<Eigen::Lower>() * z;
            for (std::size_t i = 0; i < n; ++i) values[i + n0] = x(i);
        }
    }
    return GridPath(g, std::move(values), impl_->lambda);
}

// ---------------------------------------------------------------------------
// Z_H

double zh_tail_variance_bound(double H, double t_max, double M) {
    if (!(H > 0 && H < 1)) throw parameter_error("zh_tail_variance_bound: H must lie in (0,1)");
    if (!(M > 0)) throw parameter_error("zh_tail_variance_bound: M must be > 0");
    const double g = std::tgamma(H + 0.5);
    const double c = (H - 0.5) * (H - 0.5) / ((2 - 2 * H) * g * g);
    return c * t_max * t_max * std::pow(M, 2 * H - 2);
}

double zh_required_truncation(double H, double t_max, double tol) {
    if (!(tol > 0)) throw parameter_error("zh_required_truncation: tol must be > 0");
    if (H == 0.5) return 1.0;  // kernel vanishes identically
    const double g = std::tgamma(H + 0.5);
    const double c = (H - 0.5) * (H - 0.5) / ((2 - 2 * H) * g * g);
    return std::pow(c * t_max * t_max / tol, 1.0 / (2 - 2 * H));
}

struct ZhSampler::Impl {
    TimeGrid grid;
    std::size_t mesh = 0;
    // kern(j, i): projection of the kernel for grid time j onto mesh cell i,
    // scaled so that Z(t_j) = sum_i kern(j,i) * eta_i with eta iid N(0,1).
    Eigen::MatrixXd kern;
};

ZhSampler::ZhSampler(double H, TimeGrid grid, double truncation, std::size_t mesh, double tail_tol)
    : impl_(new Impl) {
    if (!(H > 0 && H < 1)) throw parameter_error("sample_zh: H must lie in (0,1)");
    if (!(truncation > 0)) throw parameter_error("sample_zh: truncation must be > 0");
    if (mesh == 0) throw parameter_error("sample_zh: mesh must be positive");
    impl_->grid = std::move(grid);
    const auto& g = impl_->grid;
    const double bound = zh_tail_variance_bound(H, std::max(g.back(), 1e-300), truncation);
    if (bound > tail_tol) {
        throw parameter_error("sample_zh: tail variance bound " + std::to_string(bound) +
                              " exceeds tolerance; need truncation >= " +
                              std::to_string(zh_required_truncation(H, g.back(), tail_tol)));
    }
    impl_->mesh = mesh;
    // Mesh on [-M, 0], graded cubically toward 0 where (-s)^{H-1/2} is steep.
    std::vector<double> b(mesh + 1);
    for (std::size_t k = 0; k <= mesh; ++k) {
        const double u = double(mesh - k) / double(mesh);
        b[k] = -truncation * u * u * u;
    }
    b[mesh] = 0.0;
    const double p = H + 0.5;
    const double gam = std::tgamma(p);
    const std::size_t n = g.size();
    impl_->kern.resize(n, mesh);
    for (std::size_t i = 0; i < mesh; ++i) {
        const double lo = b[i], hi = b[i + 1];
        const double dlen = hi - lo;
        const double base_part = std::pow(-lo, p) - std::pow(-hi, p);
        for (std::size_t j = 0; j < n; ++j) {
            const double t = g[j];
            const double a_ij =
                ((std::pow(t - lo, p) - std::pow(t - hi, p)) - base_part) / (p * gam);
            impl_->kern(j, i) = a_ij / std::sqrt(dlen);
        }
    }
}

ZhSampler::~ZhSampler() = default;
ZhSampler::ZhSampler(ZhSampler&&) noexcept = default;
ZhSampler& ZhSampler::operator=(ZhSampler&&) noexcept = default;

GridPath ZhSampler::sample(SeedSpec seed, std::uint64_t path_index) const {
    PathRng rng(seed, path_index);
    Eigen::VectorXd eta(impl_->mesh);
    for (std::size_t i = 0; i < impl_->mesh; ++i) eta(i) = rng.normal();
    Eigen::VectorXd z = impl_->kern * eta;
    std::vector<double> values(z.data(), z.data() + z.size());
    return GridPath(impl_->grid, std::move(values));
}

// ---------------------------------------------------------------------------
// Generic stationary process

struct StationarySampler::Impl {
    TimeGrid grid;
    std::vector<double> lam;
    std::size_t m = 0;
    double r0 = 0;
};

StationarySampler::StationarySampler(std::function<double(double)> cov, TimeGrid grid)
    : impl_(new Impl) {
    impl_->grid = std::move(grid);
    const auto& g = impl_->grid;
    if (!g.is_uniform()) throw grid_error("sample_stationary: grid must be uniform");
    impl_->r0 = cov(0.0);
    if (!(impl_->r0 > 0)) throw parameter_error("sample_stationary: need r(0) > 0");
    if (g.size() == 1) return;
    const double dt = g.spacing();
    const std::size_t n = g.size();
    std::size_t m = std::max<std::size_t>(2, detail::next_pow2(2 * (n - 1)));
    auto row = [&](std::size_t j) { return cov(double(j) * dt); };
    auto lam = circulant_eigenvalues(row, m);
    if (lam.empty()) {
        m *= 2;
        lam = circulant_eigenvalues(row, m);
        if (lam.empty())
            throw numeric_error(
                "sample_stationary: circulant embedding not nonnegative-definite after padding");
    }
    impl_->m = m;
    impl_->lam = std::move(lam);
}

StationarySampler::~StationarySampler() = default;
StationarySampler::StationarySampler(StationarySampler&&) noexcept = default;
StationarySampler& StationarySampler::operator=(StationarySampler&&) noexcept = default;
const TimeGrid& StationarySampler::grid() const { return impl_->grid; }

GridPath StationarySampler::sample(SeedSpec seed, std::uint64_t path_index) const {
    const auto& g = impl_->grid;
    PathRng rng(seed, path_index);
    std::vector<double> values(g.size());
    if (g.size() == 1) {
        values[0] = std::sqrt(impl_->r0) * rng.normal();
    } else {
        const auto field = circulant_draw(impl_->lam, rng);
        std::copy(field.begin(), field.begin() + g.size(), values.begin());
    }
    return GridPath(g, std::move(values));
}

// ---------------------------------------------------------------------------

GridPath sample_fbm(double H, const TimeGrid& grid, SeedSpec seed, std::uint64_t path_index,
                    FbmMethod method) {
    return FbmSampler(H, grid, method).sample(seed, path_index);
}

GridPath sample_rl(double lambda, const TimeGrid& grid, SeedSpec seed, std::uint64_t path_index,
                   RlMethod method) {
    return RlSampler(lambda, grid, method).sample(seed, path_index);
}

GridPath sample_zh(double H, const TimeGrid& grid, SeedSpec seed, std::uint64_t path_index,
                   double truncation, std::size_t mesh, double tail_tol) {
    return ZhSampler(H, grid, truncation, mesh, tail_tol).sample(seed, path_index);
}

GridPath sample_stationary(const std::function<double(double)>& cov, const TimeGrid& grid,
                           SeedSpec seed, std::uint64_t path_index) {
    return StationarySampler(cov, grid).sample(seed, path_index);
}

}  // namespace fraclab::paths
