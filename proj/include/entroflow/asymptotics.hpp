#pragma once

#include <span>
#include <vector>

#include "entroflow/entropy.hpp"
#include "entroflow/fokker_planck.hpp"
#include "entroflow/model.hpp"

namespace entroflow {

/// Self-similar view of a 1D heat orbit: v(y) = sqrt(t) u(y sqrt(t), t) on a
/// fixed y-grid, with the Gaussian normalization constant C = mass/sqrt(2 pi).
struct RescaledSnapshot {
    std::vector<double> values;
    SpatialGrid y_grid;
    double source_time = 0.0;
    double mass = 0.0;
    double c_constant = 0.0;

    /// L1 distance to the fixed point C exp(-y^2/2) on the y-grid.
    double l1_to_gaussian() const;
};

/// Sample u at x = y sqrt(t) by linear interpolation and scale by sqrt(t).
/// Raises CoverageError if the y-range maps outside the source grid.
RescaledSnapshot rescale(const DensityGrid& u, double t, const SpatialGrid& y_grid);
RescaledSnapshot rescale(const DensityGrid& u, double t);  // default y-grid [-8, 8]

/// Relative entropy of u against the mass-matched fundamental solution at
/// time t (heat kernel with diffusion kappa).
double entropy_vs_fundamental(const DensityGrid& u, double t, double kappa);

struct AsymptoticsReport {
    std::vector<double> times;
    std::vector<double> entropy_series;  // H(u(t) | fundamental(t))
    std::vector<double> l1_series;       // L1(rescaled, C Gaussian)
    std::vector<DensityGrid> snapshots;
    bool entropy_nonincreasing = true;
    double final_l1 = 0.0;
};

/// Evolve u0 under the (zero-drift) heat spec and record the two convergence
/// diagnostics at each requested time.
AsymptoticsReport intermediate_asymptotics_run(const DensityGrid& u0, const ProblemSpec& heat_spec,
                                               std::span<const double> t_list,
                                               const SolverOptions& options = {});

}  // namespace entroflow
