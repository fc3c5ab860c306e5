#pragma once

// Internal finite-difference stencils shared by the entropy and curvature
// modules. Central differences in the interior, second-order one-sided at
// the boundary for first derivatives; second derivatives fall back to the
// nearest interior stencil at the edge (callers exclude the boundary ring
// wherever accuracy matters).

#include <cstddef>
#include <span>
#include <vector>

#include "entroflow/model.hpp"

namespace entroflow::detail {

inline double first_derivative_1d(std::span<const double> f, std::size_t i, std::size_t n, double h) {
    if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    if (i == n - 1) return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return (f[i + 1] - f[i - 1]) / (2.0 * h);
}

inline double second_derivative_1d(std::span<const double> f, std::size_t i, std::size_t n, double h) {
    std::size_t c = i;
    if (c == 0) c = 1;
    if (c == n - 1) c = n - 2;
    return (f[c + 1] - 2.0 * f[c] + f[c - 1]) / (h * h);
}

/// Per-cell gradient along `axis`.
std::vector<double> axis_gradient(std::span<const double> f, const SpatialGrid& grid, int axis);

/// Per-cell second derivative along `axis`.
std::vector<double> axis_second_derivative(std::span<const double> f, const SpatialGrid& grid, int axis);

/// Per-cell mixed derivative d2f/dx dy (2D only).
std::vector<double> cross_derivative(std::span<const double> f, const SpatialGrid& grid);

}  // namespace entroflow::detail
