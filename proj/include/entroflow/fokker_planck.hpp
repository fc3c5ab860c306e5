#pragma once

#include <optional>
#include <span>
#include <vector>

#include "entroflow/curvature.hpp"
#include "entroflow/entropy.hpp"
#include "entroflow/model.hpp"

namespace entroflow {

struct SolverOptions {
    bool van_leer = false;    // MUSCL reconstruction of the advective face values
    double cfl_safety = 0.4;  // dt = safety * min(h^2/(2 d kappa), h/max|b|)
};

/// Largest stable explicit step at time t for this spec.
double stable_dt(const ProblemSpec& spec, double t, const SolverOptions& options = {});

/// One conservative finite-volume step of dt u + div(b u - kappa grad u) = 0
/// with no-flux walls and Heun time stepping. Positivity-preserving and mass
/// conservative under the CFL limit; dt above the limit raises StepSizeError.
DensityGrid step_forward(const DensityGrid& state, double t, double dt, const ProblemSpec& spec,
                         const SolverOptions& options = {});

/// Forward-evolve a single density from horizon.start to each requested time
/// (sorted, within the horizon); returns the recorded snapshots.
std::vector<DensityGrid> evolve_density_series(const DensityGrid& initial, const ProblemSpec& spec,
                                               std::span<const double> times,
                                               const SolverOptions& options = {});

/// Two orbits advanced with shared time steps plus their entropy diagnostics.
struct OrbitPair {
    std::vector<double> times;
    std::vector<DensityGrid> u_series;
    std::vector<DensityGrid> v_series;
    std::vector<double> entropy;              // H^Phi(u(t)|v(t))
    std::vector<double> dissipation_series;   // entropy-production integral
    std::vector<double> envelope;             // H(0) c(t); empty without d0
    std::vector<char> envelope_violation;     // per recorded time
    bool has_envelope = false;
    bool any_envelope_violation = false;
    double h0 = 0.0;
    std::vector<double> mass_u;
    std::vector<double> mass_v;

    // per-step diagnostics accumulated over the whole run
    double max_mass_deviation_u = 0.0;
    double max_mass_deviation_v = 0.0;
    double worst_entropy_increase = 0.0;  // max over steps of H_next - H_prev
    double min_density_value = 0.0;       // most negative cell value seen (0 if none)
};

/// Evolve u0 and v0 together, recording entropy, dissipation and (when d0 is
/// given) the decay envelope H(0) c(t) built from estimate_rho(spec) or from
/// `profile` when supplied. Envelope violations set a flag, they do not throw.
OrbitPair evolve_pair(const DensityGrid& u0, const DensityGrid& v0, const ProblemSpec& spec,
                      const PhiFunction& phi, std::span<const double> output_times,
                      std::optional<double> d0 = std::nullopt, const SolverOptions& options = {},
                      const CurvatureProfile* profile = nullptr);

/// Backward Kolmogorov solve: h(s,.) = P_{s,t} g via d_tau h = -L_tau h with
/// the non-conservative stencil for L = kappa Laplace + b . grad and Neumann
/// walls. Satisfies the discrete maximum principle.
GridFunction backward_solve(std::span<const double> terminal, double s, double t,
                            const ProblemSpec& spec, const SolverOptions& options = {});

}  // namespace entroflow
