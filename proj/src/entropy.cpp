#include "entroflow/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "stencils.hpp"

namespace entroflow {

namespace {

constexpr double kRatioFloorV = 1e-300;   // v is floored here before dividing
constexpr double kNegligibleU = 1e-30;    // u below 1e-30 / h^d zeroes the integrand

double gaussian_pdf(const Point& x, const Point& mean, double variance, int dim) {
    const double norm = std::pow(2.0 * std::numbers::pi * variance, -0.5 * dim);
    return norm * std::exp(-squared_distance(x, mean, dim) / (2.0 * variance));
}

void check_same_grid(const DensityGrid& u, const DensityGrid& v, const char* op) {
    if (!u.grid().same_layout(v.grid()))
        throw InputError(std::string(op) + ": densities live on different grids");
}

}  // namespace

PhiFunction PhiFunction::kl() {
    PhiFunction p;
    p.name = "kl";
    p.phi = [](double z) { return z > 0.0 ? z * std::log(z) : 0.0; };
    p.phi_prime = [](double z) { return std::log(z) + 1.0; };
    p.phi_second = [](double z) { return 1.0 / z; };
    p.domain_min = 0.0;
    p.zero_at_one = true;
    p.bivariate_convex = true;
    return p;
}

PhiFunction PhiFunction::variance() {
    PhiFunction p;
    p.name = "variance";
    p.phi = [](double z) { return z * z; };
    p.phi_prime = [](double z) { return 2.0 * z; };
    p.phi_second = [](double) { return 2.0; };
    p.zero_at_one = false;
    p.bivariate_convex = true;
    return p;
}

PhiFunction PhiFunction::power(double pexp) {
    if (!(pexp > 1.0) || !(pexp <= 2.0)) throw ConfigError("power entropy requires p in (1, 2]");
    PhiFunction p;
    p.name = "power";
    const double c = 1.0 / (pexp * (pexp - 1.0));
    p.phi = [pexp, c](double z) { return (std::pow(z, pexp) - 1.0 - pexp * (z - 1.0)) * c; };
    p.phi_prime = [pexp](double z) { return (std::pow(z, pexp - 1.0) - 1.0) / (pexp - 1.0); };
    p.phi_second = [pexp](double z) { return std::pow(z, pexp - 2.0); };
    p.domain_min = 0.0;
    p.zero_at_one = true;
    p.bivariate_convex = true;  // holds exactly for p in (1, 2]
    return p;
}

PhiFunction PhiFunction::by_name(const std::string& name, double power_p) {
    if (name == "kl") return kl();
    if (name == "variance") return variance();
    if (name == "power") return power(power_p);
    throw ConfigError("unknown phi function: " + name);
}

DensityGrid::DensityGrid(SpatialGrid grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.cell_count())
        throw InputError("DensityGrid: value count does not match the grid");
    for (double v : values_) {
        if (!(v >= 0.0)) throw InputError("DensityGrid: values must be nonnegative and finite");
    }
}

DensityGrid DensityGrid::zero(const SpatialGrid& grid) {
    return DensityGrid(grid, std::vector<double>(grid.cell_count(), 0.0));
}

DensityGrid DensityGrid::gaussian(const SpatialGrid& grid, const Point& mean, double variance,
                                  bool normalize) {
    if (!(variance > 0.0)) throw InputError("gaussian density: variance must be positive");
    std::vector<double> vals(grid.cell_count());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        vals[i] = gaussian_pdf(grid.center(i), mean, variance, grid.dimension);
    }
    DensityGrid d(grid, std::move(vals));
    return normalize ? d.normalized() : d;
}

DensityGrid DensityGrid::gaussian_mixture(const SpatialGrid& grid,
                                          const std::vector<MixtureComponent>& components,
                                          bool normalize) {
    if (components.empty()) throw InputError("gaussian_mixture: needs at least one component");
    std::vector<double> vals(grid.cell_count(), 0.0);
    for (const auto& c : components) {
        if (!(c.variance > 0.0) || !(c.weight >= 0.0))
            throw InputError("gaussian_mixture: bad component parameters");
        for (std::size_t i = 0; i < vals.size(); ++i) {
            vals[i] += c.weight * gaussian_pdf(grid.center(i), c.mean, c.variance, grid.dimension);
        }
    }
    DensityGrid d(grid, std::move(vals));
    return normalize ? d.normalized() : d;
}

double DensityGrid::mass() const {
    double s = 0.0;
    for (double v : values_) s += v;
    return s * cell_volume();
}

bool DensityGrid::is_probability(double tol) const { return std::abs(mass() - 1.0) <= tol; }

DensityGrid DensityGrid::normalized() const {
    const double m = mass();
    if (!(m > 0.0)) throw InputError("normalized(): density has no mass");
    std::vector<double> vals = values_;
    for (double& v : vals) v /= m;
    return DensityGrid(grid_, std::move(vals));
}

double DensityGrid::l1_distance(const DensityGrid& other) const {
    check_same_grid(*this, other, "l1_distance");
    double s = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i) s += std::abs(values_[i] - other.values_[i]);
    return s * cell_volume();
}

double phi_entropy(const DensityGrid& mu, std::span<const double> f, const PhiFunction& phi) {
    if (f.size() != mu.values().size()) throw InputError("phi_entropy: f size mismatch");
    if (!mu.is_probability(1e-6)) throw InputError("phi_entropy: mu is not normalized");
    const double vol = mu.cell_volume();
    const double m = mu.mass();
    double int_phi = 0.0;
    double int_f = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double w = mu.values()[i] * vol / m;  // exact discrete probability weights
        if (w == 0.0) continue;
        if (!phi.contains(f[i])) throw DomainViolation("phi_entropy: f leaves the Phi domain");
        int_phi += phi.phi(f[i]) * w;
        int_f += f[i] * w;
    }
    return int_phi - phi.phi(int_f);
}

double relative_entropy(const DensityGrid& u, const DensityGrid& v, const PhiFunction& phi) {
    check_same_grid(u, v, "relative_entropy");
    const double mu = u.mass();
    const double mv = v.mass();
    if (std::abs(mu - mv) > 1e-6 * std::max(1.0, std::abs(mu)))
        throw InputError("relative_entropy: mass mismatch beyond 1e-6");
    const double vol = u.cell_volume();
    const double u_negligible = kNegligibleU / vol;
    double acc = 0.0;
    for (std::size_t i = 0; i < u.values().size(); ++i) {
        const double ui = u.values()[i];
        if (ui < u_negligible) continue;
        const double vi = v.values()[i];
        if (vi < kRatioFloorV)
            throw SingularSupportError("relative_entropy: u has mass where v vanishes");
        const double r = ui / vi;
        if (!phi.contains(r)) throw DomainViolation("relative_entropy: ratio leaves the Phi domain");
        acc += vi * phi.phi(r);
    }
    return acc * vol;
}

PinskerGap pinsker_gap(const DensityGrid& u, const DensityGrid& v) {
    PinskerGap g;
    g.kl = relative_entropy(u, v, PhiFunction::kl());
    const double l1 = u.l1_distance(v);
    g.half_l1_sq = 0.5 * l1 * l1;
    return g;
}

DissipationResult dissipation(const DensityGrid& u, const DensityGrid& v, const PhiFunction& phi,
                              double t, const ProblemSpec& spec) {
    check_same_grid(u, v, "dissipation");
    if (!u.grid().same_layout(spec.grid)) throw InputError("dissipation: spec grid mismatch");
    const SpatialGrid& grid = u.grid();
    const double vol = grid.cell_volume();
    const double u_negligible = kNegligibleU / vol;
    const double kappa = spec.diffusion.kappa_at(t);

    const std::size_t cells = grid.cell_count();
    std::vector<double> ratio(cells);
    std::vector<char> mask(cells);
    double floored_mass = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
        const double ui = u.values()[i];
        const bool negligible = ui < u_negligible;
        const bool v_floored = v.values()[i] < kRatioFloorV;
        // a floored cell carries zero integrand weight; keep its ratio at
        // zero so neighbouring gradients stay bounded
        mask[i] = (negligible || v_floored) ? 0 : 1;
        ratio[i] = mask[i] ? ui / v.values()[i] : 0.0;
        if (negligible || v_floored) floored_mass += ui;
    }

    double acc = 0.0;
    std::vector<double> grad_sq(cells, 0.0);
    for (int axis = 0; axis < grid.dimension; ++axis) {
        const auto g = detail::axis_gradient(ratio, grid, axis);
        for (std::size_t i = 0; i < cells; ++i) grad_sq[i] += g[i] * g[i];
    }
    for (std::size_t i = 0; i < cells; ++i) {
        if (!mask[i]) continue;
        acc += phi.phi_second(ratio[i]) * grad_sq[i] * v.values()[i];
    }

    DissipationResult res;
    res.value = -kappa * acc * vol;
    const double total_u = u.mass();
    res.floored_mass_fraction = total_u > 0.0 ? floored_mass * vol / total_u : 0.0;
    res.ill_conditioned = res.floored_mass_fraction > 0.01;
    return res;
}

}  // namespace entroflow
