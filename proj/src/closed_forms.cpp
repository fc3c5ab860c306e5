#include "entroflow/closed_forms.hpp"

#include <cmath>
#include <numbers>

namespace entroflow {

namespace {

constexpr double kLambdaBranch = 1e-10;

// (1 - e^{-2 lambda t}) / lambda with the small-lambda series branch.
double ou_variance(double t, double lambda) {
    if (std::abs(lambda) < kLambdaBranch) {
        return 2.0 * t - 2.0 * lambda * t * t + (4.0 / 3.0) * lambda * lambda * t * t * t;
    }
    return -std::expm1(-2.0 * lambda * t) / lambda;
}

}  // namespace

double GaussianLaw::density(const Point& x) const {
    const double norm = std::pow(2.0 * std::numbers::pi * variance, -0.5 * dimension);
    return norm * std::exp(-squared_distance(x, mean, dimension) / (2.0 * variance));
}

GaussianLaw ou_transition(const Point& x, double t, double lambda, int dimension) {
    if (!(t > 0.0)) throw InputError("ou_transition: t must be positive");
    GaussianLaw law;
    law.dimension = dimension;
    const double decay = std::exp(-lambda * t);
    for (int i = 0; i < dimension; ++i) law.mean[i] = x[i] * decay;
    law.variance = ou_variance(t, lambda);
    return law;
}

double ou_alpha(const Point& x, const Point& y, double t, double lambda, int dimension) {
    if (!(t > 0.0)) throw InputError("ou_alpha: t must be positive");
    const double d2 = squared_distance(x, y, dimension);
    if (std::abs(lambda) < kLambdaBranch) {
        // same series branch as ou_transition so the KL identity holds bitwise
        const double decay2 = std::exp(-2.0 * lambda * t);
        return d2 * decay2 / (2.0 * ou_variance(t, lambda));
    }
    return lambda * d2 / (2.0 * std::expm1(2.0 * lambda * t));
}

double ou_alpha_limit(const Point& x, const Point& y, double lambda, int dimension) {
    if (lambda >= 0.0) return 0.0;
    return -0.5 * lambda * squared_distance(x, y, dimension);
}

OuRegime regime(double lambda) {
    if (lambda > 0.0) return OuRegime::exponential_to_zero;
    if (lambda == 0.0) return OuRegime::algebraic_to_zero;
    return OuRegime::exponential_to_positive_limit;
}

const char* regime_name(OuRegime r) {
    switch (r) {
        case OuRegime::exponential_to_zero: return "exponential_to_zero";
        case OuRegime::algebraic_to_zero: return "algebraic_to_zero";
        case OuRegime::exponential_to_positive_limit: return "exponential_to_positive_limit";
    }
    return "unknown";
}

double gaussian_kl(const GaussianLaw& p, const GaussianLaw& q) {
    if (p.dimension != q.dimension) throw InputError("gaussian_kl: dimension mismatch");
    if (!(p.variance > 0.0) || !(q.variance > 0.0)) throw InputError("gaussian_kl: variance must be positive");
    const double d = static_cast<double>(p.dimension);
    const double r1 = p.variance / q.variance - 1.0;
    const double gap2 = squared_distance(p.mean, q.mean, p.dimension);
    // mean and variance parts kept separate: summing the O(1) variance terms
    // first would swamp a tiny mean part
    return 0.5 * d * (r1 - std::log1p(r1)) + 0.5 * gap2 / q.variance;
}

GaussianLaw heat_kernel(double t, double kappa, int dimension) {
    if (!(t > 0.0)) throw InputError("heat_kernel: t must be positive");
    if (!(kappa > 0.0)) throw InputError("heat_kernel: kappa must be positive");
    GaussianLaw law;
    law.dimension = dimension;
    law.mean = {0.0, 0.0};
    law.variance = 2.0 * kappa * t;
    return law;
}

}  // namespace entroflow
