#include "entroflow/test_functions.hpp"

#include <cmath>
#include <random>

namespace entroflow {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

GridFunction make_smooth_function(const SpatialGrid& grid, std::uint64_t seed, std::size_t index,
                                  const SmoothFunctionOptions& options) {
    const int dim = grid.dimension;
    double center[2], half[2];
    for (int a = 0; a < dim; ++a) {
        center[a] = 0.5 * (grid.min[a] + grid.max[a]);
        half[a] = 0.5 * (grid.max[a] - grid.min[a]);
    }
    const auto normalized = [&](const Point& x, int a) { return (x[a] - center[a]) / half[a]; };

    std::mt19937_64 rng(mix_seed(seed, index));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };

    GridFunction f(grid.cell_count());

    if (options.include_pure_affine && index == 0) {
        // affine member: the equality case of the linear-drift presets
        for (std::size_t i = 0; i < f.size(); ++i) {
            const Point x = grid.center(i);
            double v = options.positive ? 1.0 + 0.3 * normalized(x, 0) : x[0];
            if (dim == 2 && options.positive) v += 0.2 * normalized(x, 1);
            f[i] = v;
        }
        return f;
    }

    if (options.allow_polynomials && index % 3 != 2) {
        const bool quadratic = (index % 3 == 1);
        double c0 = uniform(-0.5, 0.5);
        double lin[2] = {uniform(-1.0, 1.0), dim == 2 ? uniform(-1.0, 1.0) : 0.0};
        double quad[3] = {0.0, 0.0, 0.0};  // xx, yy, xy in normalized coordinates
        if (quadratic) {
            quad[0] = uniform(-1.0, 1.0);
            if (dim == 2) {
                quad[1] = uniform(-1.0, 1.0);
                quad[2] = uniform(-0.5, 0.5);
            }
        }
        for (std::size_t i = 0; i < f.size(); ++i) {
            const Point x = grid.center(i);
            const double u = normalized(x, 0);
            const double w = dim == 2 ? normalized(x, 1) : 0.0;
            f[i] = c0 + lin[0] * u + lin[1] * w + quad[0] * u * u + quad[1] * w * w + quad[2] * u * w;
        }
        return f;
    }

    const double offset = options.positive ? uniform(1.3, 1.8) : uniform(-0.5, 0.5);
    double slope[2] = {0.0, 0.0};
    for (int a = 0; a < dim; ++a)
        slope[a] = options.slope_scale * (options.positive ? uniform(-0.1, 0.1) : uniform(-0.4, 0.4));

    const int bumps = 1 + static_cast<int>(unit(rng) * options.max_bumps) % options.max_bumps;
    struct Bump {
        Point c;
        double w, a;
    };
    std::vector<Bump> bump(bumps);
    for (auto& b : bump) {
        for (int a = 0; a < dim; ++a)
            b.c[a] = center[a] + uniform(-options.center_fraction, options.center_fraction) * half[a];
        const double w_lo = std::max(options.width_lo_fraction * half[0], 4.5 * grid.min_spacing());
        const double w_hi = std::max(options.width_hi_fraction * half[0], 1.2 * w_lo);
        b.w = uniform(w_lo, w_hi);
        const double mag = options.positive ? uniform(0.08, 0.2) : uniform(0.2, 0.8);
        b.a = unit(rng) < 0.5 ? -mag : mag;
    }

    for (std::size_t i = 0; i < f.size(); ++i) {
        const Point x = grid.center(i);
        double v = offset;
        for (int a = 0; a < dim; ++a) v += slope[a] * normalized(x, a);
        for (const auto& b : bump) {
            v += b.a * std::exp(-squared_distance(x, b.c, dim) / (2.0 * b.w * b.w));
        }
        f[i] = v;
    }
    return f;
}

}  // namespace entroflow
