#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "entroflow/bounds.hpp"
#include "entroflow/curvature.hpp"
#include "entroflow/entropy.hpp"
#include "entroflow/fokker_planck.hpp"

namespace entroflow {

/// Outcome of one inequality check: worst pointwise residual RHS - LHS over
/// the evaluation window, with the tolerance it was judged against.
struct InequalityReport {
    enum class Kind { commutation, phi_sobolev, lsi, propagated_lsi };

    Kind kind = Kind::commutation;
    double s = 0.0;
    double t = 0.0;
    double worst_residual = 0.0;
    double max_residual = 0.0;  // largest RHS - LHS (slack), for tightness checks
    double tolerance = 0.0;
    double scale = 0.0;  // max |RHS| over the window; tolerance = rel_tol * max(scale, 1e-12)
    std::string witness;
    bool passing() const { return worst_residual >= -tolerance; }
};

const char* inequality_kind_name(InequalityReport::Kind kind);

struct CheckOptions {
    double relative_tolerance = 1e-4;
    /// Residuals are evaluated on this central fraction of the box, shrunk
    /// further by the diffusion length 6 sqrt(kappa (t-s)) so Neumann-wall
    /// artifacts cannot reach the window.
    double interior_fraction = 0.9;
    double causal_margin_factor = 6.0;
    /// eps/sqrt(max Gamma) used to smooth the conical kinks of sqrt(Gamma)
    /// in the commutation check; see check_commutation.
    double commutation_regularization = 0.1;
    SolverOptions solver;
};

/// Gradient-flattening commutation bound
/// sqrt(Gamma(tau)(P_{tau,t} g)) <= exp(-Int_tau^t rho) P_{tau,t}(sqrt(Gamma(t)(g))).
/// Checked in the smoothed form implied by the same bound via Jensen for
/// vector norms: with eps_tau = exp(-Int rho) eps,
///   sqrt(Gamma(tau)(P g) + eps_tau^2) <= exp(-Int rho) P(sqrt(Gamma(t)(g) + eps^2)),
/// which removes the conical kinks of sqrt(Gamma) at critical points of g
/// while keeping the linear-observable equality case exact.
InequalityReport check_commutation(std::span<const double> g, double tau, double t,
                                   const ProblemSpec& spec, const CurvatureProfile& profile,
                                   const CheckOptions& options = {});

/// Local Phi-Sobolev inequality
/// P_{s,t}(Phi(g)) - Phi(P_{s,t} g) <= c(s,t) P_{s,t}(Phi''(g) Gamma(t)(g)).
/// Requires phi.bivariate_convex.
InequalityReport check_phi_sobolev(std::span<const double> g, double s, double t,
                                   const ProblemSpec& spec, const CurvatureProfile& profile,
                                   const PhiFunction& phi, const CheckOptions& options = {});

/// Local log-Sobolev inequality (the Phi = z log z case, Gamma(g)/g form);
/// g must be strictly positive.
InequalityReport check_lsi(std::span<const double> g, double s, double t, const ProblemSpec& spec,
                           const CurvatureProfile& profile, const CheckOptions& options = {});

/// Propagated LSI along the forward flow: for random positive f,
/// Ent_{v(t)}(f) <= d(t) Int (Gamma(t)(f)/f) v(t) dx with d(t) from the
/// envelope machinery seeded by d0.
InequalityReport check_propagated_lsi(const ProblemSpec& spec, const DensityGrid& v0, double d0,
                                      double t, std::size_t trials, std::uint64_t seed = 7,
                                      const CheckOptions& options = {},
                                      const CurvatureProfile* profile = nullptr);

/// d0 for N(mean, variance Id) against Gamma = kappa |grad|^2: variance/(2 kappa),
/// the constant-rho limit 1/(2 rho) evaluated at the matching equilibrium.
double gaussian_lsi_constant(double variance, double kappa);

struct SuiteOptions {
    std::size_t count = 50;
    std::uint64_t seed = 11;
    double min_gap = 0.05;  // shortest (t - s) drawn
    double max_gap = 0.5;
    CheckOptions check;
};

/// Randomized suites over the bump-plus-affine test family; one report per
/// test function, deterministic in the seed.
std::vector<InequalityReport> commutation_suite(const ProblemSpec& spec,
                                                const CurvatureProfile& profile,
                                                const SuiteOptions& options = {});
std::vector<InequalityReport> phi_sobolev_suite(const ProblemSpec& spec,
                                                const CurvatureProfile& profile,
                                                const PhiFunction& phi,
                                                const SuiteOptions& options = {});
std::vector<InequalityReport> lsi_suite(const ProblemSpec& spec, const CurvatureProfile& profile,
                                        const SuiteOptions& options = {});

}  // namespace entroflow
