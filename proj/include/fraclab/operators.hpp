#pragma once

#include <optional>
#include <span>

#include "fraclab/grid.hpp"

namespace fraclab::ops {

// I(w)(t) = int_0^t w ds, cumulative trapezoid; exact for piecewise-linear
// inputs.  output[0] = 0; if the grid starts after 0 the integral runs from
// the first grid time.
GridPath integrate(const GridPath& path);

// J_alpha(w)(t) = int_0^t s^{-alpha} w(s) ds.  The first cell [0, t_1] uses
// the local power model w(s) ~= w(t_1) (s/t_1)^tau integrated analytically
// against s^{-alpha}; remaining cells are trapezoid on s^{-alpha} w(s).
// tau defaults to the path's declared index.
GridPath weighted_integral(const GridPath& path, double alpha,
                           std::optional<double> tau = std::nullopt);

// J_{alpha_m} o ... o J_{alpha_1}; each stage raises the local exponent by
// 1 - alpha_i and must satisfy alpha_i < current index + 1.
GridPath compose_weighted(const GridPath& path, std::span<const double> alphas);

// I_gamma(w)(t) = (1/Gamma(gamma)) int_0^t (t-s)^{gamma-1} w(s) ds by
// product integration (piecewise-linear w, kernel moments exact); for
// gamma < 1 the singular cell at s ~ t freezes w at its endpoint value.
GridPath riemann_liouville(const GridPath& path, double gamma);

// output(t) = path(t) / t^exponent, with the value at t = 0 set to 0
// (requires exponent < declared index when 0 is on the grid).
GridPath normalize_self_similar(const GridPath& path, double exponent);

// U(log t_k) = X(t_k) / t_k^tau on the uniform log-time grid.  When the
// geometric grid starts below t = 1 the output grid is shifted to start at
// 0 (a time relabeling; U is stationary).
GridPath stationary_transform(const GridPath& path, double tau);

}  // namespace fraclab::ops
