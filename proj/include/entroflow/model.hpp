#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "entroflow/errors.hpp"
#include "entroflow/geometry.hpp"

namespace entroflow {

/// Grid function: one value per cell of a SpatialGrid, row-major in 2D.
using GridFunction = std::vector<double>;

/// Drift coefficient b(t,x). The Jacobian is optional; when absent it is
/// approximated by central finite differences with a component-wise step
/// max(1e-5, 1e-5*|x_j|).
struct DriftField {
    std::function<Point(double, const Point&)> eval;
    std::function<Mat2(double, const Point&)> jacobian;  // may be empty
    bool time_dependent = true;

    Mat2 jacobian_at(double t, const Point& x, int dim) const;
};

/// Scalar diffusion kappa(t); the diffusion matrix is always kappa(t)*Id.
struct DiffusionSpec {
    std::function<double(double)> kappa;
    std::function<double(double)> kappa_dot;  // may be empty -> finite differences

    double kappa_at(double t) const;
    double kappa_dot_at(double t) const;
};

/// Uniform cell-centered grid on a box, dimension 1 or 2.
struct SpatialGrid {
    int dimension = 1;
    std::array<double, 2> min{0.0, 0.0};
    std::array<double, 2> max{1.0, 1.0};
    std::array<std::size_t, 2> n{1, 1};  // cells per axis; n[1] == 1 in 1D

    static constexpr std::size_t kDefaultCellCap = std::size_t{1} << 22;

    static SpatialGrid make_1d(double x_min, double x_max, std::size_t cells);
    static SpatialGrid make_2d(double x_min, double x_max, double y_min, double y_max,
                               std::size_t cells_x, std::size_t cells_y);

    double spacing(int axis) const { return (max[axis] - min[axis]) / static_cast<double>(n[axis]); }
    double min_spacing() const;
    double cell_volume() const;
    std::size_t cell_count() const { return dimension == 1 ? n[0] : n[0] * n[1]; }

    std::size_t index(std::size_t ix, std::size_t iy = 0) const { return dimension == 1 ? ix : ix * n[1] + iy; }
    std::pair<std::size_t, std::size_t> unflatten(std::size_t flat) const {
        return dimension == 1 ? std::pair<std::size_t, std::size_t>{flat, 0}
                              : std::pair<std::size_t, std::size_t>{flat / n[1], flat % n[1]};
    }
    double coordinate(int axis, std::size_t i) const {
        return min[axis] + (static_cast<double>(i) + 0.5) * spacing(axis);
    }
    Point center(std::size_t flat) const;
    bool contains(const Point& x) const;
    bool same_layout(const SpatialGrid& other) const;

    void validate(std::size_t cell_cap = kDefaultCellCap) const;
};

struct TimeHorizon {
    double start = 0.0;
    double end = 1.0;
    double length() const { return end - start; }
};

/// Full problem definition shared by every solver and estimator.
struct ProblemSpec {
    std::string name;
    DriftField drift;
    DiffusionSpec diffusion;
    SpatialGrid grid;
    TimeHorizon horizon;

    void validate() const;
};

// Named presets. Bounds are sized so the Gaussian mass lost to truncation
// stays below 1e-12 over the default horizon.
ProblemSpec make_ou(double lambda, double t_end = 5.0, std::size_t cells = 512);
ProblemSpec make_heat(double t_end = 5.0, std::size_t cells = 512);
ProblemSpec make_rotating_drift(double t_end = 5.0, std::size_t cells_per_axis = 128);
ProblemSpec make_time_varying_ou(std::function<double(double)> lambda, double t_end = 5.0,
                                 std::size_t cells = 1024);

/// Build a preset by name ("ou", "heat", "rotating_drift", "time_varying_ou").
/// For "ou" the parameter is lambda; for "time_varying_ou" the drift is
/// -(lambda + lambda_slope*t)*x. Unknown names raise ConfigError.
ProblemSpec make_preset(const std::string& name, double lambda = 1.0, double lambda_slope = 0.0,
                        double t_end = 5.0, std::size_t cells = 0);

/// Deterministic low-discrepancy sample of the space-time box
/// (horizon x grid bounds). count == 1 yields the box center.
std::vector<std::pair<double, Point>> sample_points(const ProblemSpec& spec, std::size_t count,
                                                    std::uint64_t seed = 0);

}  // namespace entroflow
