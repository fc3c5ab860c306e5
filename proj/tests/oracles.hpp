#pragma once

// Test-only oracles: dense quadrature and tiny statistics helpers that stay
// independent of the library code paths they are used to check.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

// Composite Simpson with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, std::size_t n) {
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    double acc = f(a) + f(b);
    for (std::size_t k = 1; k < n; ++k) acc += f(a + h * static_cast<double>(k)) * (k % 2 ? 4.0 : 2.0);
    return acc * h / 3.0;
}

inline double gauss_pdf(double x, double mean, double variance) {
    return std::exp(-(x - mean) * (x - mean) / (2.0 * variance)) /
           std::sqrt(2.0 * std::numbers::pi * variance);
}

// Least-squares slope of y against x.
inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace oracle
