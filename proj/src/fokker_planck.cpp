#include "entroflow/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "entroflow/bounds.hpp"
#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

constexpr double kRatioFloorV = 1e-300;
constexpr double kNegligibleU = 1e-30;

double van_leer_slope(double a, double b) {
    const double p = a * b;
    return p > 0.0 ? 2.0 * p / (a + b) : 0.0;
}

// Shared machinery for the conservative forward sweep and the
// non-conservative backward sweep. Face-normal drift components are cached
// once for autonomous drifts.
class Stepper {
public:
    Stepper(const ProblemSpec& spec, const SolverOptions& options, bool forward)
        : spec_(spec), options_(options), forward_(forward), grid_(spec.grid) {
        nx_ = grid_.n[0];
        ny_ = grid_.dimension == 2 ? grid_.n[1] : 1;
        cells_ = nx_ * ny_;
        k1_.resize(cells_);
        k2_.resize(cells_);
        stage_.resize(cells_);
        if (forward_) {
            face_x_.resize((nx_ + 1) * ny_);
            if (grid_.dimension == 2) face_y_.resize(nx_ * (ny_ + 1));
            if (options_.van_leer) slope_.resize(cells_);
        } else {
            cell_b_[0].resize(cells_);
            if (grid_.dimension == 2) cell_b_[1].resize(cells_);
        }
    }

    double max_abs_drift(double t) {
        refresh_drift(t);
        return b_max_;
    }

    double stable_dt(double t) {
        const double kappa = spec_.diffusion.kappa_at(t);
        const double h = grid_.min_spacing();
        const double dt_diff = h * h / (2.0 * grid_.dimension * kappa);
        const double b = max_abs_drift(t);
        const double dt_adv = b > 0.0 ? h / b : std::numeric_limits<double>::infinity();
        return options_.cfl_safety * std::min(dt_diff, dt_adv);
    }

    // Heun step in place; `t` is the physical time of the state. For the
    // backward solver the state lives at physical time t and moves to t - dt.
    void heun(std::vector<double>& u, double t, double dt, std::size_t step_index) {
        const double t2 = forward_ ? t + dt : t - dt;
        derivative(u, t, k1_);
        for (std::size_t i = 0; i < cells_; ++i) stage_[i] = u[i] + dt * k1_[i];
        derivative(stage_, t2, k2_);
        double mn = 0.0, mx = 0.0;
        for (std::size_t i = 0; i < cells_; ++i) {
            u[i] += 0.5 * dt * (k1_[i] + k2_[i]);
            mn = std::min(mn, u[i]);
            mx = std::max(mx, std::abs(u[i]));
        }
        for (std::size_t i = 0; i < cells_; ++i) {
            if (!std::isfinite(u[i]))
                throw DivergenceError("time integration produced a non-finite value", t, step_index);
        }
        min_seen_ = std::min(min_seen_, mn);
        if (forward_ && mn < 0.0) {
            // zero out rounding-level negatives; anything larger is a real
            // positivity violation and is left to surface downstream
            const double fp_floor = -1e-13 * mx;
            for (std::size_t i = 0; i < cells_; ++i) {
                if (u[i] < 0.0 && u[i] >= fp_floor) u[i] = 0.0;
            }
        }
    }

    double min_seen() const { return min_seen_; }

private:
    void refresh_drift(double t) {
        if (drift_cached_ && !spec_.drift.time_dependent) return;
        b_max_ = 0.0;
        if (forward_) {
            // face-normal components; axis-0 faces at (x_edge, y_center)
            const double h0 = grid_.spacing(0);
            for (std::size_t ix = 0; ix <= nx_; ++ix) {
                const double x = grid_.min[0] + static_cast<double>(ix) * h0;
                for (std::size_t iy = 0; iy < ny_; ++iy) {
                    Point p{x, grid_.dimension == 2 ? grid_.coordinate(1, iy) : 0.0};
                    const double b = spec_.drift.eval(t, p)[0];
                    if (!std::isfinite(b)) throw EvaluationError("non-finite drift value");
                    face_x_[ix * ny_ + iy] = b;
                    b_max_ = std::max(b_max_, std::abs(b));
                }
            }
            if (grid_.dimension == 2) {
                const double h1 = grid_.spacing(1);
                for (std::size_t ix = 0; ix < nx_; ++ix) {
                    const double x = grid_.coordinate(0, ix);
                    for (std::size_t iy = 0; iy <= ny_; ++iy) {
                        Point p{x, grid_.min[1] + static_cast<double>(iy) * h1};
                        const double b = spec_.drift.eval(t, p)[1];
                        if (!std::isfinite(b)) throw EvaluationError("non-finite drift value");
                        face_y_[ix * (ny_ + 1) + iy] = b;
                        b_max_ = std::max(b_max_, std::abs(b));
                    }
                }
            }
        } else {
            for (std::size_t i = 0; i < cells_; ++i) {
                const Point b = spec_.drift.eval(t, grid_.center(i));
                for (int a = 0; a < grid_.dimension; ++a) {
                    if (!std::isfinite(b[a])) throw EvaluationError("non-finite drift value");
                    cell_b_[a][i] = b[a];
                    b_max_ = std::max(b_max_, std::abs(b[a]));
                }
            }
        }
        drift_cached_ = true;
    }

    void derivative(const std::vector<double>& u, double t, std::vector<double>& out) {
        refresh_drift(t);
        const double kappa = spec_.diffusion.kappa_at(t);
        std::fill(out.begin(), out.end(), 0.0);
        if (forward_) {
            forward_axis0(u, kappa, out);
            if (grid_.dimension == 2) forward_axis1(u, kappa, out);
        } else {
            backward_all(u, kappa, out);
        }
    }

    // conservative flux sweep along axis 0; no-flux walls
    void forward_axis0(const std::vector<double>& u, double kappa, std::vector<double>& out) {
        const double h = grid_.spacing(0);
        for (std::size_t iy = 0; iy < ny_; ++iy) {
            if (options_.van_leer) {
                for (std::size_t ix = 0; ix < nx_; ++ix) {
                    const std::size_t i = ix * ny_ + iy;
                    slope_[i] = (ix == 0 || ix == nx_ - 1)
                                    ? 0.0
                                    : van_leer_slope(u[i] - u[i - ny_], u[i + ny_] - u[i]);
                }
            }
            double flux_left = 0.0;
            for (std::size_t ix = 1; ix <= nx_; ++ix) {
                double flux_right = 0.0;
                if (ix < nx_) {
                    const std::size_t i = ix * ny_ + iy;
                    const double bf = face_x_[ix * ny_ + iy];
                    double up;
                    if (options_.van_leer) {
                        up = bf >= 0.0 ? u[i - ny_] + 0.5 * slope_[i - ny_] : u[i] - 0.5 * slope_[i];
                    } else {
                        up = bf >= 0.0 ? u[i - ny_] : u[i];
                    }
                    flux_right = bf * up - kappa * (u[i] - u[i - ny_]) / h;
                }
                out[(ix - 1) * ny_ + iy] -= (flux_right - flux_left) / h;
                flux_left = flux_right;
            }
        }
    }

    void forward_axis1(const std::vector<double>& u, double kappa, std::vector<double>& out) {
        const double h = grid_.spacing(1);
        for (std::size_t ix = 0; ix < nx_; ++ix) {
            const std::size_t row = ix * ny_;
            if (options_.van_leer) {
                for (std::size_t iy = 0; iy < ny_; ++iy) {
                    slope_[row + iy] = (iy == 0 || iy == ny_ - 1)
                                           ? 0.0
                                           : van_leer_slope(u[row + iy] - u[row + iy - 1],
                                                            u[row + iy + 1] - u[row + iy]);
                }
            }
            double flux_left = 0.0;
            for (std::size_t iy = 1; iy <= ny_; ++iy) {
                double flux_right = 0.0;
                if (iy < ny_) {
                    const double bf = face_y_[ix * (ny_ + 1) + iy];
                    double up;
                    if (options_.van_leer) {
                        up = bf >= 0.0 ? u[row + iy - 1] + 0.5 * slope_[row + iy - 1]
                                       : u[row + iy] - 0.5 * slope_[row + iy];
                    } else {
                        up = bf >= 0.0 ? u[row + iy - 1] : u[row + iy];
                    }
                    flux_right = bf * up - kappa * (u[row + iy] - u[row + iy - 1]) / h;
                }
                out[row + iy - 1] -= (flux_right - flux_left) / h;
                flux_left = flux_right;
            }
        }
    }

    // kappa Laplace(w) + b . grad(w) with Neumann ghosts; central advection
    // where the cell Peclet number allows it, monotone upwind otherwise
    void backward_all(const std::vector<double>& w, double kappa, std::vector<double>& out) {
        const double h0 = grid_.spacing(0);
        const double pe0 = 2.0 * kappa / h0;
        for (std::size_t ix = 0; ix < nx_; ++ix) {
            for (std::size_t iy = 0; iy < ny_; ++iy) {
                const std::size_t i = ix * ny_ + iy;
                const double wl = ix > 0 ? w[i - ny_] : w[i];
                const double wr = ix + 1 < nx_ ? w[i + ny_] : w[i];
                double acc = kappa * (wl - 2.0 * w[i] + wr) / (h0 * h0);
                const double b = cell_b_[0][i];
                if (std::abs(b) <= pe0) {
                    acc += b * (wr - wl) / (2.0 * h0);
                } else if (b > 0.0) {
                    acc += b * (wr - w[i]) / h0;
                } else {
                    acc += b * (w[i] - wl) / h0;
                }
                out[i] += acc;
            }
        }
        if (grid_.dimension == 2) {
            const double h1 = grid_.spacing(1);
            const double pe1 = 2.0 * kappa / h1;
            for (std::size_t ix = 0; ix < nx_; ++ix) {
                const std::size_t row = ix * ny_;
                for (std::size_t iy = 0; iy < ny_; ++iy) {
                    const std::size_t i = row + iy;
                    const double wd = iy > 0 ? w[i - 1] : w[i];
                    const double wu = iy + 1 < ny_ ? w[i + 1] : w[i];
                    double acc = kappa * (wd - 2.0 * w[i] + wu) / (h1 * h1);
                    const double b = cell_b_[1][i];
                    if (std::abs(b) <= pe1) {
                        acc += b * (wu - wd) / (2.0 * h1);
                    } else if (b > 0.0) {
                        acc += b * (wu - w[i]) / h1;
                    } else {
                        acc += b * (w[i] - wd) / h1;
                    }
                    out[i] += acc;
                }
            }
        }
    }

    const ProblemSpec& spec_;
    SolverOptions options_;
    bool forward_;
    const SpatialGrid& grid_;
    std::size_t nx_ = 0, ny_ = 0, cells_ = 0;
    std::vector<double> face_x_, face_y_;    // forward: face-normal drift
    std::vector<double> cell_b_[2];          // backward: drift at cell centers
    std::vector<double> slope_;              // van Leer slopes
    std::vector<double> k1_, k2_, stage_;
    bool drift_cached_ = false;
    double b_max_ = 0.0;
    double min_seen_ = 0.0;
};

// relative entropy on raw vectors (same flooring as the entropy module)
double relative_entropy_raw(const std::vector<double>& u, const std::vector<double>& v, double vol,
                            const PhiFunction& phi) {
    const double u_negligible = kNegligibleU / vol;
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < u_negligible) continue;
        const double vi = std::max(v[i], kRatioFloorV);
        acc += vi * phi.phi(u[i] / vi);
    }
    return acc * vol;
}

double sum(const std::vector<double>& a) {
    double s = 0.0;
    for (double x : a) s += x;
    return s;
}

void validate_output_times(std::span<const double> times, const TimeHorizon& horizon) {
    if (times.empty()) throw InputError("output times must not be empty");
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : times) {
        if (!(t >= horizon.start - 1e-12) || !(t <= horizon.end + 1e-12))
            throw InputError("output time outside the horizon");
        if (!(t > prev)) throw InputError("output times must be strictly increasing");
        prev = t;
    }
}

}  // namespace

double stable_dt(const ProblemSpec& spec, double t, const SolverOptions& options) {
    Stepper stepper(spec, options, /*forward=*/true);
    return stepper.stable_dt(t);
}

DensityGrid step_forward(const DensityGrid& state, double t, double dt, const ProblemSpec& spec,
                         const SolverOptions& options) {
    if (!state.grid().same_layout(spec.grid)) throw InputError("step_forward: grid mismatch");
    if (!(dt > 0.0)) throw StepSizeError("step_forward: dt must be positive");
    Stepper stepper(spec, options, /*forward=*/true);
    const double limit = stepper.stable_dt(t);
    if (dt > limit * (1.0 + 1e-12))
        throw StepSizeError("step_forward: dt exceeds the CFL limit");
    std::vector<double> u = state.values();
    stepper.heun(u, t, dt, 0);
    return DensityGrid(state.grid(), std::move(u));
}

std::vector<DensityGrid> evolve_density_series(const DensityGrid& initial, const ProblemSpec& spec,
                                               std::span<const double> times,
                                               const SolverOptions& options) {
    if (!initial.grid().same_layout(spec.grid))
        throw InputError("evolve_density_series: grid mismatch");
    validate_output_times(times, spec.horizon);

    Stepper stepper(spec, options, /*forward=*/true);
    std::vector<double> u = initial.values();
    double t = spec.horizon.start;
    std::size_t step_index = 0;

    std::vector<DensityGrid> out;
    out.reserve(times.size());
    for (double target : times) {
        while (target - t > 1e-12 * std::max(1.0, std::abs(t))) {
            const double dt = std::min(stepper.stable_dt(t), target - t);
            stepper.heun(u, t, dt, step_index++);
            t += dt;
        }
        out.emplace_back(spec.grid, u);
    }
    return out;
}

OrbitPair evolve_pair(const DensityGrid& u0, const DensityGrid& v0, const ProblemSpec& spec,
                      const PhiFunction& phi, std::span<const double> output_times,
                      std::optional<double> d0, const SolverOptions& options,
                      const CurvatureProfile* profile) {
    if (!u0.grid().same_layout(spec.grid) || !v0.grid().same_layout(spec.grid))
        throw InputError("evolve_pair: grid mismatch");
    if (!u0.is_probability(1e-6) || !v0.is_probability(1e-6))
        throw InputError("evolve_pair: initial data must be probability densities");
    validate_output_times(output_times, spec.horizon);

    OrbitPair orbit;
    const double vol = spec.grid.cell_volume();

    std::optional<DecayEnvelope> envelope;
    if (d0.has_value()) {
        CurvatureProfile rho = profile ? *profile : estimate_rho(spec);
        envelope.emplace(*d0, std::move(rho));
        orbit.has_envelope = true;
    }

    Stepper stepper(spec, options, /*forward=*/true);
    std::vector<double> u = u0.values();
    std::vector<double> v = v0.values();
    const double mass_u0 = sum(u) * vol;
    const double mass_v0 = sum(v) * vol;
    double t = spec.horizon.start;
    std::size_t step_index = 0;

    orbit.h0 = relative_entropy_raw(u, v, vol, phi);
    double h_prev = orbit.h0;

    const auto record = [&](double at) {
        orbit.times.push_back(at);
        DensityGrid du(spec.grid, u);
        DensityGrid dv(spec.grid, v);
        orbit.entropy.push_back(relative_entropy_raw(u, v, vol, phi));
        orbit.dissipation_series.push_back(dissipation(du, dv, phi, at, spec).value);
        orbit.mass_u.push_back(du.mass());
        orbit.mass_v.push_back(dv.mass());
        if (envelope) {
            const double env = orbit.h0 * envelope->c_envelope(at);
            orbit.envelope.push_back(env);
            const bool violated = orbit.entropy.back() > env + 0.05 * orbit.h0 + 1e-14;
            orbit.envelope_violation.push_back(violated ? 1 : 0);
            orbit.any_envelope_violation = orbit.any_envelope_violation || violated;
        }
        orbit.u_series.push_back(std::move(du));
        orbit.v_series.push_back(std::move(dv));
    };

    for (double target : output_times) {
        while (target - t > 1e-12 * std::max(1.0, std::abs(t))) {
            const double dt = std::min(stepper.stable_dt(t), target - t);
            stepper.heun(u, t, dt, step_index);
            stepper.heun(v, t, dt, step_index);
            ++step_index;
            t += dt;

            orbit.min_density_value = std::min(orbit.min_density_value, stepper.min_seen());
            orbit.max_mass_deviation_u =
                std::max(orbit.max_mass_deviation_u, std::abs(sum(u) * vol - mass_u0));
            orbit.max_mass_deviation_v =
                std::max(orbit.max_mass_deviation_v, std::abs(sum(v) * vol - mass_v0));
            const double h_now = relative_entropy_raw(u, v, vol, phi);
            orbit.worst_entropy_increase = std::max(orbit.worst_entropy_increase, h_now - h_prev);
            h_prev = h_now;
        }
        record(t);
    }
    return orbit;
}

GridFunction backward_solve(std::span<const double> terminal, double s, double t,
                            const ProblemSpec& spec, const SolverOptions& options) {
    if (terminal.size() != spec.grid.cell_count()) throw InputError("backward_solve: size mismatch");
    if (s > t) throw InputError("backward_solve: requires s <= t");
    for (double g : terminal) {
        if (!std::isfinite(g)) throw InputError("backward_solve: terminal data must be bounded");
    }
    GridFunction w(terminal.begin(), terminal.end());
    if (s == t) return w;

    Stepper stepper(spec, options, /*forward=*/false);
    double tau = t;
    std::size_t step_index = 0;
    while (tau - s > 1e-12 * std::max(1.0, std::abs(tau))) {
        const double dt = std::min(stepper.stable_dt(tau), tau - s);
        stepper.heun(w, tau, dt, step_index++);
        tau -= dt;
    }
    return w;
}

}  // namespace entroflow
