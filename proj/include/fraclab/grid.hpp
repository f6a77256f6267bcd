#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "fraclab/errors.hpp"

namespace fraclab {

enum class GridKind { uniform, geometric, explicit_points };

// Strictly increasing time grid, first point >= 0.
class TimeGrid {
public:
    TimeGrid() = default;

    static TimeGrid uniform(double t0, double t1, std::size_t n) {
        if (n < 1) throw grid_error("TimeGrid::uniform: need at least one point");
        if (t0 < 0 || (n > 1 && t1 <= t0)) throw grid_error("TimeGrid::uniform: bad endpoints");
        std::vector<double> pts(n);
        const double dt = n > 1 ? (t1 - t0) / double(n - 1) : 0.0;
        for (std::size_t i = 0; i < n; ++i) pts[i] = t0 + dt * double(i);
        if (n > 1) pts[n - 1] = t1;
        return TimeGrid(std::move(pts), GridKind::uniform);
    }

    static TimeGrid geometric(double t0, double ratio, std::size_t n) {
        if (n < 1 || t0 <= 0 || ratio <= 1) throw grid_error("TimeGrid::geometric: need t0>0, ratio>1");
        std::vector<double> pts(n);
        double t = t0;
        for (std::size_t i = 0; i < n; ++i, t *= ratio) pts[i] = t;
        return TimeGrid(std::move(pts), GridKind::geometric);
    }

    static TimeGrid from_points(std::vector<double> pts) {
        return TimeGrid(std::move(pts), GridKind::explicit_points);
    }

    const std::vector<double>& points() const { return pts_; }
    std::size_t size() const { return pts_.size(); }
    double operator[](std::size_t i) const { return pts_[i]; }
    double front() const { return pts_.front(); }
    double back() const { return pts_.back(); }
    GridKind kind() const { return kind_; }

    bool is_uniform(double rel_tol = 1e-9) const {
        if (pts_.size() < 2) return true;
        const double dt = pts_[1] - pts_[0];
        for (std::size_t i = 1; i + 1 < pts_.size(); ++i)
            if (std::abs((pts_[i + 1] - pts_[i]) - dt) > rel_tol * std::abs(dt)) return false;
        return true;
    }

    bool is_geometric(double rel_tol = 1e-9) const {
        if (pts_.size() < 2) return true;
        if (pts_[0] <= 0) return false;
        const double q = pts_[1] / pts_[0];
        for (std::size_t i = 1; i + 1 < pts_.size(); ++i)
            if (std::abs(pts_[i + 1] / pts_[i] - q) > rel_tol * q) return false;
        return true;
    }

    double spacing() const {
        if (pts_.size() < 2) throw grid_error("TimeGrid::spacing: fewer than two points");
        if (!is_uniform()) throw grid_error("TimeGrid::spacing: grid is not uniform");
        return (pts_.back() - pts_.front()) / double(pts_.size() - 1);
    }

    double ratio() const {
        if (pts_.size() < 2) throw grid_error("TimeGrid::ratio: fewer than two points");
        if (!is_geometric()) throw grid_error("TimeGrid::ratio: grid is not geometric");
        return pts_[1] / pts_[0];
    }

private:
    TimeGrid(std::vector<double> pts, GridKind kind) : pts_(std::move(pts)), kind_(kind) {
        if (pts_.empty()) throw grid_error("TimeGrid: empty");
        if (pts_.front() < 0) throw grid_error("TimeGrid: first point must be >= 0");
        for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
            if (!(pts_[i] < pts_[i + 1])) throw grid_error("TimeGrid: points must be strictly increasing");
        if (kind_ == GridKind::uniform && !is_uniform())
            throw grid_error("TimeGrid: declared uniform but spacing varies");
        if (kind_ == GridKind::geometric && !is_geometric())
            throw grid_error("TimeGrid: declared geometric but ratio varies");
    }

    std::vector<double> pts_;
    GridKind kind_ = GridKind::explicit_points;
};

// A sampled trajectory: one value per grid point.  `index` is the declared
// self-similarity index (local exponent at 0), updated by every operator
// so Theorem-style admissibility preconditions stay machine-checkable.
struct GridPath {
    TimeGrid grid;
    std::vector<double> values;
    std::optional<double> index;

    GridPath() = default;
    GridPath(TimeGrid g, std::vector<double> v, std::optional<double> idx = std::nullopt)
        : grid(std::move(g)), values(std::move(v)), index(idx) {
        if (values.size() != grid.size())
            throw grid_error("GridPath: values.size() != grid.size()");
    }

    std::size_t size() const { return values.size(); }
};

}  // namespace fraclab
