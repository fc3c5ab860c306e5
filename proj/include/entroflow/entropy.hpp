#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "entroflow/model.hpp"

namespace entroflow {

/// Convex entropy generator Phi with derivatives and its domain interval.
/// bivariate_convex asserts (u,v) -> Phi''(u) v^2 is nonnegative and convex
/// on I x I, the hypothesis the Phi-Sobolev machinery needs.
struct PhiFunction {
    std::string name;
    std::function<double(double)> phi;
    std::function<double(double)> phi_prime;
    std::function<double(double)> phi_second;
    double domain_min = -std::numeric_limits<double>::infinity();
    double domain_max = std::numeric_limits<double>::infinity();
    bool zero_at_one = true;  // Phi(1) == 0 (relative-entropy normalization)
    bool bivariate_convex = false;

    bool contains(double z) const { return z >= domain_min && z <= domain_max; }

    static PhiFunction kl();                 // z log z on [0, inf)
    static PhiFunction variance();           // z^2 on R
    static PhiFunction power(double p);      // (z^p - 1 - p(z-1)) / (p(p-1)), p in (1,2]
    static PhiFunction by_name(const std::string& name, double power_p = 1.5);
};

/// Nonnegative grid function with cell volumes; represents a density u(t,.).
class DensityGrid {
public:
    DensityGrid(SpatialGrid grid, std::vector<double> values);

    static DensityGrid zero(const SpatialGrid& grid);
    /// Isotropic Gaussian discretized at cell centers; normalized to unit
    /// discrete mass by default.
    static DensityGrid gaussian(const SpatialGrid& grid, const Point& mean, double variance,
                                bool normalize = true);
    struct MixtureComponent {
        double weight = 1.0;
        Point mean{0.0, 0.0};
        double variance = 1.0;
    };
    static DensityGrid gaussian_mixture(const SpatialGrid& grid,
                                        const std::vector<MixtureComponent>& components,
                                        bool normalize = true);

    const SpatialGrid& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& mutable_values() { return values_; }
    double cell_volume() const { return grid_.cell_volume(); }

    double mass() const;
    bool is_probability(double tol = 1e-6) const;
    DensityGrid normalized() const;
    double l1_distance(const DensityGrid& other) const;

private:
    SpatialGrid grid_;
    std::vector<double> values_;
};

/// Ent^Phi_mu(f) = Int Phi(f) dmu - Phi(Int f dmu) by cell-sum quadrature.
/// mu must have unit mass and f must map into the Phi domain.
double phi_entropy(const DensityGrid& mu, std::span<const double> f, const PhiFunction& phi);

/// H^Phi(u|v) = Int v Phi(u/v) dx. Nonnegative (>= -1e-12) when Phi(1) = 0
/// and the masses agree.
double relative_entropy(const DensityGrid& u, const DensityGrid& v, const PhiFunction& phi);

struct PinskerGap {
    double kl = 0.0;
    double half_l1_sq = 0.0;
};

/// Both sides of H(u|v) >= 0.5 |u-v|_L1^2.
PinskerGap pinsker_gap(const DensityGrid& u, const DensityGrid& v);

struct DissipationResult {
    double value = 0.0;                  // d/dt H^Phi(u|v), nonpositive
    double floored_mass_fraction = 0.0;  // mass share where the ratio floor engaged
    bool ill_conditioned = false;        // flooring touched > 1% of the mass
};

/// Entropy-production integral -Int Phi''(u/v) grad(u/v) . a grad(u/v) v dx
/// with a = kappa(t) Id; gradients by central differences.
DissipationResult dissipation(const DensityGrid& u, const DensityGrid& v, const PhiFunction& phi,
                              double t, const ProblemSpec& spec);

}  // namespace entroflow
