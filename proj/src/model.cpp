#include "entroflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace entroflow {

namespace {

double finite_or_throw(double v, const char* what) {
    if (!std::isfinite(v)) throw EvaluationError(what);
    return v;
}

// Halton radical inverse in the given base.
double radical_inverse(std::uint64_t i, std::uint64_t base) {
    double inv = 1.0 / static_cast<double>(base);
    double f = inv;
    double r = 0.0;
    while (i > 0) {
        r += f * static_cast<double>(i % base);
        i /= base;
        f *= inv;
    }
    return r;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double unit_double(std::uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

}  // namespace

Mat2 DriftField::jacobian_at(double t, const Point& x, int dim) const {
    if (jacobian) return jacobian(t, x);
    Mat2 J;
    for (int j = 0; j < dim; ++j) {
        const double hj = std::max(1e-5, 1e-5 * std::abs(x[j]));
        Point xp = x, xm = x;
        xp[j] += hj;
        xm[j] -= hj;
        const Point fp = eval(t, xp);
        const Point fm = eval(t, xm);
        for (int i = 0; i < dim; ++i) {
            J(i, j) = finite_or_throw((fp[i] - fm[i]) / (2.0 * hj), "non-finite drift Jacobian entry");
        }
    }
    return J;
}

double DiffusionSpec::kappa_at(double t) const {
    const double k = finite_or_throw(kappa(t), "non-finite kappa(t)");
    if (k <= 0.0) throw EvaluationError("kappa(t) must be positive");
    return k;
}

double DiffusionSpec::kappa_dot_at(double t) const {
    if (kappa_dot) return finite_or_throw(kappa_dot(t), "non-finite kappa_dot(t)");
    const double ht = 1e-6 * std::max(1.0, std::abs(t));
    return (kappa(t + ht) - kappa(t - ht)) / (2.0 * ht);
}

SpatialGrid SpatialGrid::make_1d(double x_min, double x_max, std::size_t cells) {
    SpatialGrid g;
    g.dimension = 1;
    g.min = {x_min, 0.0};
    g.max = {x_max, 1.0};
    g.n = {cells, 1};
    g.validate();
    return g;
}

SpatialGrid SpatialGrid::make_2d(double x_min, double x_max, double y_min, double y_max,
                                 std::size_t cells_x, std::size_t cells_y) {
    SpatialGrid g;
    g.dimension = 2;
    g.min = {x_min, y_min};
    g.max = {x_max, y_max};
    g.n = {cells_x, cells_y};
    g.validate();
    return g;
}

double SpatialGrid::min_spacing() const {
    double h = spacing(0);
    if (dimension == 2) h = std::min(h, spacing(1));
    return h;
}

double SpatialGrid::cell_volume() const {
    return dimension == 1 ? spacing(0) : spacing(0) * spacing(1);
}

Point SpatialGrid::center(std::size_t flat) const {
    const auto [ix, iy] = unflatten(flat);
    Point p{coordinate(0, ix), 0.0};
    if (dimension == 2) p[1] = coordinate(1, iy);
    return p;
}

bool SpatialGrid::contains(const Point& x) const {
    for (int a = 0; a < dimension; ++a) {
        if (x[a] < min[a] || x[a] > max[a]) return false;
    }
    return true;
}

bool SpatialGrid::same_layout(const SpatialGrid& other) const {
    if (dimension != other.dimension) return false;
    for (int a = 0; a < dimension; ++a) {
        if (n[a] != other.n[a] || min[a] != other.min[a] || max[a] != other.max[a]) return false;
    }
    return true;
}

void SpatialGrid::validate(std::size_t cell_cap) const {
    if (dimension != 1 && dimension != 2) throw ConfigError("grid dimension must be 1 or 2");
    for (int a = 0; a < dimension; ++a) {
        if (n[a] < 8) throw ConfigError("grid needs at least 8 cells per axis");
        if (!(max[a] > min[a])) throw ConfigError("grid bounds must satisfy min < max");
    }
    if (dimension == 1 && n[1] != 1) throw ConfigError("1D grid must have n[1] == 1");
    if (cell_count() > cell_cap) throw ConfigError("grid exceeds the configured cell cap");
}

void ProblemSpec::validate() const {
    grid.validate();
    if (!(horizon.start < horizon.end)) throw ConfigError("horizon must satisfy t_start < t_end");
    if (!drift.eval) throw ConfigError("drift.eval must be set");
    if (!diffusion.kappa) throw ConfigError("diffusion.kappa must be set");
    diffusion.kappa_at(horizon.start);
    diffusion.kappa_at(horizon.end);
}

namespace {

DiffusionSpec constant_kappa(double value) {
    DiffusionSpec d;
    d.kappa = [value](double) { return value; };
    d.kappa_dot = [](double) { return 0.0; };
    return d;
}

// Half-width so that an N(center<=|mean_margin|, sigma^2) keeps mass < 1e-12
// outside the box: 8 sigma plus a margin for off-center means.
double gaussian_half_width(double sigma_max, double mean_margin = 2.0) {
    return 8.0 * sigma_max + mean_margin;
}

}  // namespace

ProblemSpec make_ou(double lambda, double t_end, std::size_t cells) {
    if (!std::isfinite(lambda)) throw ConfigError("ou preset: lambda must be finite");
    ProblemSpec spec;
    spec.name = "ou";
    spec.drift.eval = [lambda](double, const Point& x) { return Point{-lambda * x[0], -lambda * x[1]}; };
    spec.drift.jacobian = [lambda](double, const Point&) {
        Mat2 J;
        J(0, 0) = -lambda;
        J(1, 1) = -lambda;
        return J;
    };
    spec.drift.time_dependent = false;
    spec.diffusion = constant_kappa(1.0);

    double sigma_max = 1.0;
    if (lambda > 0.0) {
        sigma_max = std::max(1.0, 1.0 / std::sqrt(lambda));
    } else if (lambda == 0.0) {
        sigma_max = std::sqrt(1.0 + 2.0 * t_end);
    } else {
        // variance solves v' = -2 lambda v + 2, growing from 1
        const double a = -2.0 * lambda;
        sigma_max = std::sqrt((1.0 + 2.0 / a) * std::exp(a * t_end));
    }
    const double half = gaussian_half_width(sigma_max);
    spec.grid = SpatialGrid::make_1d(-half, half, cells);
    spec.horizon = {0.0, t_end};
    spec.validate();
    return spec;
}

ProblemSpec make_heat(double t_end, std::size_t cells) {
    ProblemSpec spec;
    spec.name = "heat";
    spec.drift.eval = [](double, const Point&) { return Point{0.0, 0.0}; };
    spec.drift.jacobian = [](double, const Point&) { return Mat2{}; };
    spec.drift.time_dependent = false;
    spec.diffusion = constant_kappa(0.5);

    const double sigma_max = std::sqrt(1.0 + 2.0 * 0.5 * t_end);
    const double half = gaussian_half_width(sigma_max);
    spec.grid = SpatialGrid::make_1d(-half, half, cells);
    spec.horizon = {0.0, t_end};
    spec.validate();
    return spec;
}

ProblemSpec make_rotating_drift(double t_end, std::size_t cells_per_axis) {
    ProblemSpec spec;
    spec.name = "rotating_drift";
    // M = [[1,1],[-1,1]]: symmetric part is the identity, antisymmetric part rotates.
    spec.drift.eval = [](double, const Point& x) { return Point{-(x[0] + x[1]), -(-x[0] + x[1])}; };
    spec.drift.jacobian = [](double, const Point&) {
        Mat2 J;
        J(0, 0) = -1.0;
        J(0, 1) = -1.0;
        J(1, 0) = 1.0;
        J(1, 1) = -1.0;
        return J;
    };
    spec.drift.time_dependent = false;
    spec.diffusion = constant_kappa(1.0);

    const double half = gaussian_half_width(1.0);
    spec.grid = SpatialGrid::make_2d(-half, half, -half, half, cells_per_axis, cells_per_axis);
    spec.horizon = {0.0, t_end};
    spec.validate();
    return spec;
}

ProblemSpec make_time_varying_ou(std::function<double(double)> lambda, double t_end, std::size_t cells) {
    if (!lambda) throw ConfigError("time_varying_ou preset: lambda(t) must be set");
    ProblemSpec spec;
    spec.name = "time_varying_ou";
    spec.drift.eval = [lambda](double t, const Point& x) {
        const double l = lambda(t);
        return Point{-l * x[0], -l * x[1]};
    };
    spec.drift.jacobian = [lambda](double t, const Point&) {
        Mat2 J;
        const double l = lambda(t);
        J(0, 0) = -l;
        J(1, 1) = -l;
        return J;
    };
    spec.drift.time_dependent = true;
    spec.diffusion = constant_kappa(1.0);

    double lambda_min = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 64; ++k) {
        const double t = t_end * static_cast<double>(k) / 64.0;
        lambda_min = std::min(lambda_min, finite_or_throw(lambda(t), "non-finite lambda(t)"));
    }
    const double sigma_max =
        lambda_min > 0.0 ? std::max(1.0, 1.0 / std::sqrt(lambda_min)) : std::sqrt(1.0 + 2.0 * t_end);
    const double half = gaussian_half_width(sigma_max);
    spec.grid = SpatialGrid::make_1d(-half, half, cells);
    spec.horizon = {0.0, t_end};
    spec.validate();
    return spec;
}

ProblemSpec make_preset(const std::string& name, double lambda, double lambda_slope, double t_end,
                        std::size_t cells) {
    if (name == "ou") return make_ou(lambda, t_end, cells ? cells : 512);
    if (name == "heat") return make_heat(t_end, cells ? cells : 512);
    if (name == "rotating_drift") return make_rotating_drift(t_end, cells ? cells : 128);
    if (name == "time_varying_ou") {
        auto l = [lambda, lambda_slope](double t) { return lambda + lambda_slope * t; };
        return make_time_varying_ou(l, t_end, cells ? cells : 1024);
    }
    throw ConfigError("unknown preset name: " + name);
}

std::vector<std::pair<double, Point>> sample_points(const ProblemSpec& spec, std::size_t count,
                                                    std::uint64_t seed) {
    if (count < 1) throw InputError("sample_points: count must be >= 1");
    const int dim = spec.grid.dimension;
    std::vector<std::pair<double, Point>> out;
    out.reserve(count);

    const double t_mid = 0.5 * (spec.horizon.start + spec.horizon.end);
    Point center{};
    for (int a = 0; a < dim; ++a) center[a] = 0.5 * (spec.grid.min[a] + spec.grid.max[a]);
    if (count == 1) {
        out.emplace_back(t_mid, center);
        return out;
    }

    // Halton sequence with a seed-derived Cranley-Patterson rotation.
    std::uint64_t state = seed ^ 0xA24BAED4963EE407ULL;
    double offset[3];
    for (double& o : offset) o = unit_double(splitmix64(state));
    const std::uint64_t bases[3] = {2, 3, 5};

    for (std::size_t k = 0; k < count; ++k) {
        double u[3];
        for (int c = 0; c < 3; ++c) {
            double v = radical_inverse(k + 1, bases[c]) + offset[c];
            if (v >= 1.0) v -= 1.0;
            u[c] = v;
        }
        const double t = spec.horizon.start + u[0] * spec.horizon.length();
        Point x{};
        for (int a = 0; a < dim; ++a) x[a] = spec.grid.min[a] + u[1 + a] * (spec.grid.max[a] - spec.grid.min[a]);
        out.emplace_back(t, x);
    }
    return out;
}

}  // namespace entroflow
