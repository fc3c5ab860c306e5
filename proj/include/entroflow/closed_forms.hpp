#pragma once

#include "entroflow/errors.hpp"
#include "entroflow/geometry.hpp"

namespace entroflow {

/// Isotropic Gaussian law N(mean, variance * Id).
struct GaussianLaw {
    Point mean{0.0, 0.0};
    double variance = 1.0;
    int dimension = 1;

    double density(const Point& x) const;
};

/// Law of the Ornstein-Uhlenbeck process dX = sqrt(2) dB - lambda X dt at
/// time t started from x. Mean x e^{-lambda t}, variance (1-e^{-2 lambda t})/lambda,
/// with the lambda -> 0 limit 2t taken by series when |lambda| < 1e-10.
GaussianLaw ou_transition(const Point& x, double t, double lambda, int dimension = 1);

/// Relative entropy H(P_t(.)(y) | P_t(.)(x)) of two OU transition laws.
double ou_alpha(const Point& x, const Point& y, double t, double lambda, int dimension = 1);

/// Large-time limit of ou_alpha: -lambda |x-y|^2 / 2 for lambda < 0, else 0.
double ou_alpha_limit(const Point& x, const Point& y, double lambda, int dimension = 1);

enum class OuRegime { exponential_to_zero, algebraic_to_zero, exponential_to_positive_limit };

OuRegime regime(double lambda);
const char* regime_name(OuRegime r);

/// KL divergence between isotropic Gaussians of the same dimension.
double gaussian_kl(const GaussianLaw& p, const GaussianLaw& q);

/// Fundamental solution of dt u = kappa * Laplace(u): N(0, 2 kappa t).
GaussianLaw heat_kernel(double t, double kappa, int dimension = 1);

}  // namespace entroflow
