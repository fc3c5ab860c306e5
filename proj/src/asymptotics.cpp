#include "entroflow/asymptotics.hpp"

#include <cmath>
#include <numbers>

#include "entroflow/closed_forms.hpp"
#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

// linear interpolation of a cell-centered 1D grid function
double interpolate(const DensityGrid& u, double x) {
    const SpatialGrid& g = u.grid();
    const double h = g.spacing(0);
    const double rel = (x - g.min[0]) / h - 0.5;
    if (rel <= 0.0) return u.values().front();
    const auto n = g.n[0];
    if (rel >= static_cast<double>(n - 1)) return u.values().back();
    const auto i = static_cast<std::size_t>(rel);
    const double w = rel - static_cast<double>(i);
    return (1.0 - w) * u.values()[i] + w * u.values()[i + 1];
}

void require_heat_like(const ProblemSpec& spec) {
    if (spec.grid.dimension != 1) throw InputError("asymptotics: 1D heat flow only");
    for (const double x : {spec.grid.min[0], 0.0, spec.grid.max[0]}) {
        for (const double t : {spec.horizon.start, spec.horizon.end}) {
            if (std::abs(spec.drift.eval(t, point1(x))[0]) > 1e-14)
                throw InputError("asymptotics: spec must have zero drift");
        }
    }
}

}  // namespace

double RescaledSnapshot::l1_to_gaussian() const {
    const double h = y_grid.spacing(0);
    double acc = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double y = y_grid.coordinate(0, i);
        acc += std::abs(values[i] - c_constant * std::exp(-0.5 * y * y));
    }
    return acc * h;
}

RescaledSnapshot rescale(const DensityGrid& u, double t, const SpatialGrid& y_grid) {
    if (!(t > 0.0)) throw InputError("rescale: t must be positive");
    if (u.grid().dimension != 1 || y_grid.dimension != 1)
        throw InputError("rescale: 1D grids only");
    const double root_t = std::sqrt(t);
    if (y_grid.min[0] * root_t < u.grid().min[0] - 1e-12 ||
        y_grid.max[0] * root_t > u.grid().max[0] + 1e-12)
        throw CoverageError("rescale: y-range exceeds the source grid after scaling");

    RescaledSnapshot snap;
    snap.y_grid = y_grid;
    snap.source_time = t;
    snap.values.resize(y_grid.cell_count());
    for (std::size_t j = 0; j < snap.values.size(); ++j) {
        const double y = y_grid.coordinate(0, j);
        snap.values[j] = root_t * interpolate(u, y * root_t);
    }
    double mass = 0.0;
    for (double v : snap.values) mass += v;
    snap.mass = mass * y_grid.spacing(0);
    snap.c_constant = snap.mass / std::sqrt(2.0 * std::numbers::pi);
    return snap;
}

RescaledSnapshot rescale(const DensityGrid& u, double t) {
    return rescale(u, t, SpatialGrid::make_1d(-8.0, 8.0, u.grid().n[0]));
}

double entropy_vs_fundamental(const DensityGrid& u, double t, double kappa) {
    if (!u.is_probability(1e-6))
        throw InputError("entropy_vs_fundamental: u must be a probability density");
    const GaussianLaw fundamental = heat_kernel(t, kappa, 1);
    // mass-matched discretization of the fundamental solution
    DensityGrid v = DensityGrid::gaussian(u.grid(), fundamental.mean, fundamental.variance, false);
    const double scale = u.mass() / v.mass();
    for (double& x : v.mutable_values()) x *= scale;
    return relative_entropy(u, v, PhiFunction::kl());
}

AsymptoticsReport intermediate_asymptotics_run(const DensityGrid& u0, const ProblemSpec& heat_spec,
                                               std::span<const double> t_list,
                                               const SolverOptions& options) {
    require_heat_like(heat_spec);
    if (t_list.empty()) throw InputError("intermediate_asymptotics_run: empty time list");
    for (double t : t_list) {
        if (!(t > 0.0)) throw InputError("intermediate_asymptotics_run: times must be positive");
    }
    const double kappa = heat_spec.diffusion.kappa_at(heat_spec.horizon.start);

    AsymptoticsReport report;
    report.snapshots = evolve_density_series(u0, heat_spec, t_list, options);
    for (std::size_t k = 0; k < report.snapshots.size(); ++k) {
        const double t = t_list[k];
        report.times.push_back(t);
        report.entropy_series.push_back(entropy_vs_fundamental(report.snapshots[k], t, kappa));
        report.l1_series.push_back(rescale(report.snapshots[k], t).l1_to_gaussian());
        if (k > 0 && report.entropy_series[k] > report.entropy_series[k - 1] + 1e-12)
            report.entropy_nonincreasing = false;
    }
    report.final_l1 = report.l1_series.back();
    return report;
}

}  // namespace entroflow
