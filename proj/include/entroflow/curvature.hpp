#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "entroflow/model.hpp"

namespace entroflow {

/// Sampled lower bound rho(t) for the time-dependent curvature criterion,
/// stored as a piecewise-linear interpolant. Outside the sampled window the
/// boundary values are extended as constants.
class CurvatureProfile {
public:
    enum class Method { analytic, sjac_grid_inf };

    CurvatureProfile(std::vector<double> times, std::vector<double> rhos,
                     Method method = Method::analytic);

    static CurvatureProfile constant(double rho, double t_start, double t_end);

    double rho(double t) const;
    /// Exact integral of the interpolant from t_start() to t.
    double integral(double t) const;
    double integral_between(double s, double t) const { return integral(t) - integral(s); }

    double t_start() const { return times_.front(); }
    double t_end() const { return times_.back(); }
    Method method() const { return method_; }
    const std::vector<double>& sample_times() const { return times_; }
    const std::vector<double>& values() const { return rhos_; }
    double max_abs_rho() const;

    /// Same profile with every value shifted by delta (falsification controls).
    CurvatureProfile shifted(double delta) const;

    /// Maximizing points of the drift-Jacobian sweep, one per sample time
    /// (empty for analytic profiles).
    const std::vector<Point>& maximizers() const { return maximizers_; }
    void set_maximizers(std::vector<Point> m) { maximizers_ = std::move(m); }

private:
    std::vector<double> times_;
    std::vector<double> rhos_;
    std::vector<double> prefix_;  // integral up to times_[k]
    std::vector<Point> maximizers_;
    Method method_;
};

/// Carre du champ Gamma(t)(f) = kappa(t) |grad f|^2, one value per cell.
std::vector<double> gamma_field(std::span<const double> f, double t, const ProblemSpec& spec);

/// Gamma_2(t)(f) = kappa^2 ||Hess f||^2 - kappa grad f . SJac(b) grad f
/// (the kappa Id extension of the identity-diffusion formula).
std::vector<double> gamma2_field(std::span<const double> f, double t, const ProblemSpec& spec);

/// Symmetric part of the drift Jacobian at (t, x).
Mat2 sjac(double t, const Point& x, const ProblemSpec& spec);

/// rho(t) = kappa_dot/(2 kappa) - sup_x lambda_max(SJac(b(t,x))), the
/// Hessian-free sufficient bound, with the sup taken over a 64-per-axis
/// lattice plus the corners.
CurvatureProfile estimate_rho(const ProblemSpec& spec, std::size_t samples = 33);

struct CriterionReport {
    double worst_residual = 0.0;
    double tolerance = 0.0;
    std::size_t trials = 0;
    std::size_t witness_trial = 0;
    double witness_time = 0.0;
    Point witness_point{0.0, 0.0};
    bool passed() const { return worst_residual >= -tolerance; }
};

/// Direct numerical check of Gamma_2 + (1/2) dt Gamma >= rho Gamma on
/// randomized smooth test functions; a negative residual beyond tolerance is
/// a reported falsification, not an exception.
CriterionReport verify_criterion(const CurvatureProfile& profile, const ProblemSpec& spec,
                                 std::size_t trials, std::uint64_t seed = 20240501);

}  // namespace entroflow
