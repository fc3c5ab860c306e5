#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace entroflow {

/// Spatial point in dimension 1 or 2; component [1] is ignored in 1D.
using Point = std::array<double, 2>;

/// Dense 2x2 matrix; in 1D only entry (0,0) is meaningful.
struct Mat2 {
    double a[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

    double& operator()(int i, int j) { return a[i][j]; }
    double operator()(int i, int j) const { return a[i][j]; }

    static Mat2 identity(double scale = 1.0) {
        Mat2 m;
        m.a[0][0] = scale;
        m.a[1][1] = scale;
        return m;
    }

    Mat2 symmetric_part() const {
        Mat2 s;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                s.a[i][j] = 0.5 * (a[i][j] + a[j][i]);
        return s;
    }
};

inline Point point1(double x) { return Point{x, 0.0}; }
inline Point point2(double x, double y) { return Point{x, y}; }

inline Point sub(const Point& x, const Point& y) { return Point{x[0] - y[0], x[1] - y[1]}; }

inline double squared_distance(const Point& x, const Point& y, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) {
        const double d = x[i] - y[i];
        s += d * d;
    }
    return s;
}

inline double max_abs_component(const Point& x, int dim) {
    double m = 0.0;
    for (int i = 0; i < dim; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

/// Largest eigenvalue of the symmetric part of m, restricted to `dim`.
inline double max_symmetric_eigenvalue(const Mat2& m, int dim) {
    if (dim == 1) return m(0, 0);
    const double p = m(0, 0);
    const double r = m(1, 1);
    const double q = 0.5 * (m(0, 1) + m(1, 0));
    const double mid = 0.5 * (p + r);
    const double rad = std::sqrt(0.25 * (p - r) * (p - r) + q * q);
    return mid + rad;
}

/// Quadratic form g . (sym(m)) g over the first `dim` components.
inline double quadratic_form(const Mat2& m, const Point& g, int dim) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s += g[i] * m(i, j) * g[j];
    return s;
}

}  // namespace entroflow
