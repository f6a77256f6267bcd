#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "fraclab/grid.hpp"
#include "fraclab/rng.hpp"

namespace fraclab::paths {

// E[B_H(t)B_H(s)] = (t^{2H} + s^{2H} - |t-s|^{2H}) / 2.
double fbm_cov(double H, double t, double s);

// Cov[W_l(t)W_l(s)] = (1/Gamma^2(l+1/2)) * int_0^{t^s} (t-u)^{l-1/2}(s-u)^{l-1/2} du,
// adaptive quadrature after a substitution that absorbs the u = t^s singularity.
double rl_cov(double lambda, double t, double s, double tol = 1e-10);

enum class FbmMethod { cholesky, circulant };
enum class RlMethod { cholesky, kernel_convolution };

// Samplers precompute factorizations once; sample() is const, thread-safe,
// and path k under a given SeedSpec is bit-reproducible for any worker count.

class FbmSampler {
public:
    FbmSampler(double H, TimeGrid grid, FbmMethod method);
    ~FbmSampler();
    FbmSampler(FbmSampler&&) noexcept;
    FbmSampler& operator=(FbmSampler&&) noexcept;

    GridPath sample(SeedSpec seed, std::uint64_t path_index) const;
    const TimeGrid& grid() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class RlSampler {
public:
    RlSampler(double lambda, TimeGrid grid, RlMethod method);
    ~RlSampler();
    RlSampler(RlSampler&&) noexcept;
    RlSampler& operator=(RlSampler&&) noexcept;

    GridPath sample(SeedSpec seed, std::uint64_t path_index) const;
    const TimeGrid& grid() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class ZhSampler {
public:
    // Truncates the driving integral to [-truncation, 0] on a mesh graded
    // toward 0; the neglected tail variance must satisfy the analytic bound.
    ZhSampler(double H, TimeGrid grid, double truncation, std::size_t mesh, double tail_tol = 1e-4);
    ~ZhSampler();
    ZhSampler(ZhSampler&&) noexcept;
    ZhSampler& operator=(ZhSampler&&) noexcept;

    GridPath sample(SeedSpec seed, std::uint64_t path_index) const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class StationarySampler {
public:
    // Circulant embedding of the Toeplitz covariance r(|i-j| * spacing).
    // r must satisfy r(0) > 0 and be even (only h >= 0 is ever queried).
    StationarySampler(std::function<double(double)> cov, TimeGrid grid);
    ~StationarySampler();
    StationarySampler(StationarySampler&&) noexcept;
    StationarySampler& operator=(StationarySampler&&) noexcept;

    GridPath sample(SeedSpec seed, std::uint64_t path_index) const;
    const TimeGrid& grid() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// One-shot wrappers.
GridPath sample_fbm(double H, const TimeGrid& grid, SeedSpec seed, std::uint64_t path_index = 0,
                    FbmMethod method = FbmMethod::circulant);
GridPath sample_rl(double lambda, const TimeGrid& grid, SeedSpec seed, std::uint64_t path_index = 0,
                   RlMethod method = RlMethod::kernel_convolution);
GridPath sample_zh(double H, const TimeGrid& grid, SeedSpec seed, std::uint64_t path_index,
                   double truncation, std::size_t mesh, double tail_tol = 1e-4);
GridPath sample_stationary(const std::function<double(double)>& cov, const TimeGrid& grid,
                           SeedSpec seed, std::uint64_t path_index = 0);

// Variance of the neglected part of the Z_H integral over (-inf, -M], for
// all t <= t_max:  (H-1/2)^2 t^2 M^{2H-2} / ((2-2H) Gamma^2(H+1/2)).
double zh_tail_variance_bound(double H, double t_max, double M);
double zh_required_truncation(double H, double t_max, double tol);

}  // namespace fraclab::paths
