#pragma once

#include <stdexcept>
#include <string>

namespace fraclab {

// Bad parameter values (domain violations, inadmissible exponent chains).
class parameter_error : public std::invalid_argument {
public:
    explicit parameter_error(const std::string& what) : std::invalid_argument(what) {}
};

// Numerical failure: quadrature non-convergence, Cholesky breakdown,
// circulant embedding not nonnegative-definite after padding.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or unsuitable time grid (non-uniform where uniform is required, ...).
class grid_error : public std::invalid_argument {
public:
    explicit grid_error(const std::string& what) : std::invalid_argument(what) {}
};

// Two independent computation routes disagree beyond statistical tolerance.
class inconsistency_error : public std::runtime_error {
public:
    explicit inconsistency_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace fraclab
