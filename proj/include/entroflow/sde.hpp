#pragma once

#include <cstdint>
#include <vector>

#include "entroflow/entropy.hpp"
#include "entroflow/model.hpp"

namespace entroflow {

/// Initial law for path simulation: a point mass, an isotropic Gaussian, or
/// a weighted Gaussian mixture.
struct StartLaw {
    struct Component {
        double weight = 1.0;
        Point mean{0.0, 0.0};
        double variance = 0.0;  // 0 -> point mass
    };
    std::vector<Component> components;

    static StartLaw delta(const Point& x);
    static StartLaw gaussian(const Point& mean, double variance);
    static StartLaw mixture(std::vector<Component> components);
};

struct PathEnsemble {
    std::vector<Point> terminal;
    int dimension = 1;
    std::uint64_t seed = 0;
    double dt = 0.0;
    double start_time = 0.0;
    double end_time = 0.0;
    StartLaw start;
};

/// Euler-Maruyama simulation of dX = b(t,X) dt + sqrt(2 kappa(t)) dB from
/// time r to t. Normal increments come from a counter-based generator keyed
/// by (seed, path, step), so results are bit-identical regardless of how the
/// paths are scheduled across threads (ENTROFLOW_THREADS caps the pool).
PathEnsemble simulate(const ProblemSpec& spec, const StartLaw& start, double r, double t,
                      std::size_t count, double dt, std::uint64_t seed);

struct HistogramResult {
    DensityGrid density;
    std::size_t in_box = 0;
    std::size_t out_of_box = 0;
    double out_fraction = 0.0;
    bool coverage_warning = false;  // more than 0.1% of the samples missed the box
};

/// Plain normalized histogram of the terminal positions on `grid`; mass is
/// exactly one over the counted samples.
HistogramResult empirical_density(const PathEnsemble& ensemble, const SpatialGrid& grid);

}  // namespace entroflow
