#include "entroflow/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "entroflow/errors.hpp"
#include "entroflow/test_functions.hpp"
#include "stencils.hpp"

namespace entroflow {

CurvatureProfile::CurvatureProfile(std::vector<double> times, std::vector<double> rhos, Method method)
    : times_(std::move(times)), rhos_(std::move(rhos)), method_(method) {
    if (times_.size() != rhos_.size() || times_.size() < 2)
        throw InputError("CurvatureProfile: need at least two (t, rho) samples");
    for (std::size_t k = 1; k < times_.size(); ++k) {
        if (!(times_[k] > times_[k - 1])) throw InputError("CurvatureProfile: times must increase");
    }
    prefix_.resize(times_.size(), 0.0);
    for (std::size_t k = 1; k < times_.size(); ++k) {
        const double dt = times_[k] - times_[k - 1];
        prefix_[k] = prefix_[k - 1] + 0.5 * (rhos_[k] + rhos_[k - 1]) * dt;
    }
}

CurvatureProfile CurvatureProfile::constant(double rho, double t_start, double t_end) {
    return CurvatureProfile({t_start, t_end}, {rho, rho}, Method::analytic);
}

double CurvatureProfile::rho(double t) const {
    if (t <= times_.front()) return rhos_.front();
    if (t >= times_.back()) return rhos_.back();
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times_.begin());
    const double w = (t - times_[k - 1]) / (times_[k] - times_[k - 1]);
    return rhos_[k - 1] + w * (rhos_[k] - rhos_[k - 1]);
}

double CurvatureProfile::integral(double t) const {
    if (t <= times_.front()) return rhos_.front() * (t - times_.front());
    if (t >= times_.back()) return prefix_.back() + rhos_.back() * (t - times_.back());
    const auto it = std::upper_bound(times_.begin(), times_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - times_.begin());
    const double dt = t - times_[k - 1];
    return prefix_[k - 1] + 0.5 * (rhos_[k - 1] + rho(t)) * dt;
}

double CurvatureProfile::max_abs_rho() const {
    double m = 0.0;
    for (double r : rhos_) m = std::max(m, std::abs(r));
    return m;
}

CurvatureProfile CurvatureProfile::shifted(double delta) const {
    std::vector<double> r = rhos_;
    for (double& v : r) v += delta;
    CurvatureProfile p(times_, std::move(r), method_);
    p.maximizers_ = maximizers_;
    return p;
}

std::vector<double> gamma_field(std::span<const double> f, double t, const ProblemSpec& spec) {
    const double kappa = spec.diffusion.kappa_at(t);
    std::vector<double> out(f.size(), 0.0);
    for (int axis = 0; axis < spec.grid.dimension; ++axis) {
        const auto g = detail::axis_gradient(f, spec.grid, axis);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += g[i] * g[i];
    }
    for (double& v : out) v *= kappa;
    return out;
}

std::vector<double> gamma2_field(std::span<const double> f, double t, const ProblemSpec& spec) {
    const SpatialGrid& grid = spec.grid;
    const int dim = grid.dimension;
    const double kappa = spec.diffusion.kappa_at(t);

    std::vector<double> hess_sq(f.size(), 0.0);
    for (int axis = 0; axis < dim; ++axis) {
        const auto d2 = detail::axis_second_derivative(f, grid, axis);
        for (std::size_t i = 0; i < f.size(); ++i) hess_sq[i] += d2[i] * d2[i];
    }
    if (dim == 2) {
        const auto dxy = detail::cross_derivative(f, grid);
        for (std::size_t i = 0; i < f.size(); ++i) hess_sq[i] += 2.0 * dxy[i] * dxy[i];
    }

    std::vector<std::vector<double>> grad(dim);
    for (int axis = 0; axis < dim; ++axis) grad[axis] = detail::axis_gradient(f, grid, axis);

    std::vector<double> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const Point x = grid.center(i);
        const Mat2 s = sjac(t, x, spec);
        Point g{grad[0][i], dim == 2 ? grad[1][i] : 0.0};
        out[i] = kappa * kappa * hess_sq[i] - kappa * quadratic_form(s, g, dim);
    }
    return out;
}

Mat2 sjac(double t, const Point& x, const ProblemSpec& spec) {
    return spec.drift.jacobian_at(t, x, spec.grid.dimension).symmetric_part();
}

CurvatureProfile estimate_rho(const ProblemSpec& spec, std::size_t samples) {
    if (samples < 16) throw InputError("estimate_rho: needs at least 16 time samples");
    const int dim = spec.grid.dimension;

    // 64-per-axis lattice plus the corners
    std::vector<Point> lattice;
    constexpr std::size_t kPerAxis = 64;
    if (dim == 1) {
        lattice.reserve(kPerAxis + 2);
        const double lo = spec.grid.min[0], hi = spec.grid.max[0];
        for (std::size_t j = 0; j < kPerAxis; ++j)
            lattice.push_back(point1(lo + (static_cast<double>(j) + 0.5) * (hi - lo) / kPerAxis));
        lattice.push_back(point1(lo));
        lattice.push_back(point1(hi));
    } else {
        lattice.reserve(kPerAxis * kPerAxis + 4);
        for (std::size_t jx = 0; jx < kPerAxis; ++jx) {
            for (std::size_t jy = 0; jy < kPerAxis; ++jy) {
                const double x = spec.grid.min[0] +
                                 (static_cast<double>(jx) + 0.5) * (spec.grid.max[0] - spec.grid.min[0]) / kPerAxis;
                const double y = spec.grid.min[1] +
                                 (static_cast<double>(jy) + 0.5) * (spec.grid.max[1] - spec.grid.min[1]) / kPerAxis;
                lattice.push_back(point2(x, y));
            }
        }
        lattice.push_back(point2(spec.grid.min[0], spec.grid.min[1]));
        lattice.push_back(point2(spec.grid.min[0], spec.grid.max[1]));
        lattice.push_back(point2(spec.grid.max[0], spec.grid.min[1]));
        lattice.push_back(point2(spec.grid.max[0], spec.grid.max[1]));
    }

    std::vector<double> times(samples), rhos(samples);
    std::vector<Point> maximizers(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double t = spec.horizon.start +
                         spec.horizon.length() * static_cast<double>(k) / static_cast<double>(samples - 1);
        double worst = -std::numeric_limits<double>::infinity();
        Point arg{0.0, 0.0};
        for (const Point& x : lattice) {
            const double lam = max_symmetric_eigenvalue(sjac(t, x, spec), dim);
            if (!std::isfinite(lam))
                throw EvaluationError("estimate_rho: non-finite drift Jacobian eigenvalue at t=" +
                                      std::to_string(t) + ", x=(" + std::to_string(x[0]) +
                                      (dim == 2 ? ", " + std::to_string(x[1]) : "") + ")");
            if (lam > worst) {
                worst = lam;
                arg = x;
            }
        }
        times[k] = t;
        rhos[k] = spec.diffusion.kappa_dot_at(t) / (2.0 * spec.diffusion.kappa_at(t)) - worst;
        maximizers[k] = arg;
    }
    CurvatureProfile profile(std::move(times), std::move(rhos), CurvatureProfile::Method::sjac_grid_inf);
    profile.set_maximizers(std::move(maximizers));
    return profile;
}

CriterionReport verify_criterion(const CurvatureProfile& profile, const ProblemSpec& spec,
                                 std::size_t trials, std::uint64_t seed) {
    if (trials < 1) throw InputError("verify_criterion: trials must be >= 1");
    const SpatialGrid& grid = spec.grid;
    const int dim = grid.dimension;

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    CriterionReport report;
    report.trials = trials;
    report.worst_residual = std::numeric_limits<double>::infinity();

    SmoothFunctionOptions fam;
    fam.allow_polynomials = true;
    fam.include_pure_affine = true;

    for (std::size_t trial = 0; trial < trials; ++trial) {
        const GridFunction f = make_smooth_function(grid, seed, trial, fam);
        double max_abs_f = 0.0;
        for (double v : f) max_abs_f = std::max(max_abs_f, std::abs(v));
        const double tol = 1e-5 * (1.0 + max_abs_f);

        // three times per trial, spread over the horizon
        for (int rep = 0; rep < 3; ++rep) {
            const double t = spec.horizon.start + unit(rng) * spec.horizon.length();
            const double kappa_dot = spec.diffusion.kappa_dot_at(t);
            const double kappa = spec.diffusion.kappa_at(t);
            const double rho_t = profile.rho(t);

            const auto g2 = gamma2_field(f, t, spec);
            const auto g1 = gamma_field(f, t, spec);

            // skip the boundary ring where one-sided stencils live
            const std::size_t nx = grid.n[0];
            const std::size_t ny = dim == 2 ? grid.n[1] : 1;
            for (std::size_t ix = 1; ix + 1 < nx; ++ix) {
                for (std::size_t iy = dim == 2 ? 1 : 0; dim == 2 ? iy + 1 < ny : iy < 1; ++iy) {
                    const std::size_t i = grid.index(ix, iy);
                    // dt Gamma(f) = kappa_dot |grad f|^2 = (kappa_dot / kappa) Gamma(f)
                    const double residual = g2[i] + 0.5 * (kappa_dot / kappa) * g1[i] - rho_t * g1[i];
                    if (residual < report.worst_residual) {
                        report.worst_residual = residual;
                        report.tolerance = tol;
                        report.witness_trial = trial;
                        report.witness_time = t;
                        report.witness_point = grid.center(i);
                    }
                }
            }
        }
    }
    return report;
}

}  // namespace entroflow
