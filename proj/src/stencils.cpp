#include "stencils.hpp"

namespace entroflow::detail {

std::vector<double> axis_gradient(std::span<const double> f, const SpatialGrid& grid, int axis) {
    std::vector<double> out(f.size());
    if (grid.dimension == 1) {
        const std::size_t n = grid.n[0];
        const double h = grid.spacing(0);
        for (std::size_t i = 0; i < n; ++i) out[i] = first_derivative_1d(f, i, n, h);
        return out;
    }
    const std::size_t nx = grid.n[0], ny = grid.n[1];
    const double h = grid.spacing(axis);
    if (axis == 0) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            for (std::size_t ix = 0; ix < nx; ++ix) {
                const auto at = [&](std::size_t i) { return f[i * ny + iy]; };
                double v;
                if (ix == 0)
                    v = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h);
                else if (ix == nx - 1)
                    v = (3.0 * at(nx - 1) - 4.0 * at(nx - 2) + at(nx - 3)) / (2.0 * h);
                else
                    v = (at(ix + 1) - at(ix - 1)) / (2.0 * h);
                out[ix * ny + iy] = v;
            }
        }
    } else {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double* row = f.data() + ix * ny;
            for (std::size_t iy = 0; iy < ny; ++iy) {
                out[ix * ny + iy] = first_derivative_1d(std::span<const double>(row, ny), iy, ny, h);
            }
        }
    }
    return out;
}

std::vector<double> axis_second_derivative(std::span<const double> f, const SpatialGrid& grid, int axis) {
    std::vector<double> out(f.size());
    if (grid.dimension == 1) {
        const std::size_t n = grid.n[0];
        const double h = grid.spacing(0);
        for (std::size_t i = 0; i < n; ++i) out[i] = second_derivative_1d(f, i, n, h);
        return out;
    }
    const std::size_t nx = grid.n[0], ny = grid.n[1];
    const double h = grid.spacing(axis);
    if (axis == 0) {
        for (std::size_t iy = 0; iy < ny; ++iy) {
            for (std::size_t ix = 0; ix < nx; ++ix) {
                std::size_t c = ix;
                if (c == 0) c = 1;
                if (c == nx - 1) c = nx - 2;
                out[ix * ny + iy] =
                    (f[(c + 1) * ny + iy] - 2.0 * f[c * ny + iy] + f[(c - 1) * ny + iy]) / (h * h);
            }
        }
    } else {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double* row = f.data() + ix * ny;
            for (std::size_t iy = 0; iy < ny; ++iy) {
                out[ix * ny + iy] = second_derivative_1d(std::span<const double>(row, ny), iy, ny, h);
            }
        }
    }
    return out;
}

std::vector<double> cross_derivative(std::span<const double> f, const SpatialGrid& grid) {
    const std::size_t nx = grid.n[0], ny = grid.n[1];
    const double hx = grid.spacing(0), hy = grid.spacing(1);
    std::vector<double> out(f.size());
    const auto clamp = [](std::size_t i, std::size_t n) {
        if (i == 0) return std::size_t{1};
        if (i == n - 1) return n - 2;
        return i;
    };
    for (std::size_t ix = 0; ix < nx; ++ix) {
        const std::size_t cx = clamp(ix, nx);
        for (std::size_t iy = 0; iy < ny; ++iy) {
            const std::size_t cy = clamp(iy, ny);
            const double v = (f[(cx + 1) * ny + cy + 1] - f[(cx + 1) * ny + cy - 1] -
                              f[(cx - 1) * ny + cy + 1] + f[(cx - 1) * ny + cy - 1]) /
                             (4.0 * hx * hy);
            out[ix * ny + iy] = v;
        }
    }
    return out;
}

}  // namespace entroflow::detail
