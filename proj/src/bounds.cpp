#include "entroflow/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "entroflow/errors.hpp"

namespace entroflow {

namespace {

constexpr double kRhoBranch = 1e-10;

// Int_0^span e^{2 rho u} du, stable near rho = 0.
double exp_integral_constant(double rho, double span) {
    const double x = 2.0 * rho * span;
    if (std::abs(x) < 1e-12) return span;
    return std::expm1(x) / (2.0 * rho);
}

std::size_t even_panels(double span, double rate_scale) {
    const double h_target = 0.03 / std::max(1.0, rate_scale);
    auto n = static_cast<std::size_t>(std::ceil(span / h_target));
    n = std::clamp<std::size_t>(n, 512, 200000);
    return n + (n % 2);
}

// Composite Simpson of fn over [a, b] with n (even) panels.
template <typename Fn>
double simpson(Fn&& fn, double a, double b, std::size_t n) {
    const double h = (b - a) / static_cast<double>(n);
    double acc = fn(a) + fn(b);
    for (std::size_t k = 1; k < n; ++k) {
        acc += fn(a + h * static_cast<double>(k)) * (k % 2 ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

}  // namespace

double c_st(double s, double t, const CurvatureProfile& profile) {
    if (s > t) throw InputError("c_st: requires s <= t");
    if (s == t) return 0.0;
    const double r_t = profile.integral(t);
    const auto integrand = [&](double tau) { return std::exp(2.0 * (profile.integral(tau) - r_t)); };
    return simpson(integrand, s, t, even_panels(t - s, 2.0 * profile.max_abs_rho()));
}

DecayEnvelope::DecayEnvelope(double d0, CurvatureProfile profile)
    : d0_(d0), profile_(std::move(profile)) {
    if (!(d0_ > 0.0)) throw InputError("DecayEnvelope: d0 must be positive");

    const double t0 = profile_.t_start();
    const double span = profile_.t_end() - t0;
    const std::size_t intervals =
        std::clamp<std::size_t>(static_cast<std::size_t>(std::ceil(span * 512.0)), 512, 65536);
    nodes_.resize(intervals + 1);
    for (std::size_t k = 0; k <= intervals; ++k) {
        nodes_[k] = t0 + span * static_cast<double>(k) / static_cast<double>(intervals);
    }

    g_prefix_.assign(nodes_.size(), 0.0);
    const auto exp2r = [&](double tau) { return std::exp(2.0 * profile_.integral(tau)); };
    for (std::size_t k = 1; k < nodes_.size(); ++k) {
        g_prefix_[k] = g_prefix_[k - 1] + simpson(exp2r, nodes_[k - 1], nodes_[k], 8);
        if (!std::isfinite(g_prefix_[k]))
            throw EvaluationError("DecayEnvelope: exp-moment overflow; rho too large for this horizon");
    }

    f_prefix_.assign(nodes_.size(), 0.0);
    const auto inv_d = [&](double tau) { return 1.0 / d_from_cache(tau); };
    for (std::size_t k = 1; k < nodes_.size(); ++k) {
        f_prefix_[k] = f_prefix_[k - 1] + simpson(inv_d, nodes_[k - 1], nodes_[k], 4);
    }
}

double DecayEnvelope::exp_moment(double t) const {
    const double t0 = profile_.t_start();
    const double te = profile_.t_end();
    if (t <= t0) {
        return -std::exp(2.0 * profile_.integral(t)) *
               exp_integral_constant(profile_.values().front(), t0 - t);
    }
    if (t >= te) {
        return g_prefix_.back() + std::exp(2.0 * profile_.integral(te)) *
                                      exp_integral_constant(profile_.values().back(), t - te);
    }
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
    const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
    const auto exp2r = [&](double tau) { return std::exp(2.0 * profile_.integral(tau)); };
    if (t == nodes_[k]) return g_prefix_[k];
    return g_prefix_[k] + simpson(exp2r, nodes_[k], t, 8);
}

double DecayEnvelope::d_from_cache(double t) const {
    const double r_t = profile_.integral(t);
    const double damp = std::exp(-2.0 * r_t);
    return d0_ * damp + damp * exp_moment(t);
}

double DecayEnvelope::c_st(double s, double t) const {
    if (s > t) throw InputError("c_st: requires s <= t");
    return std::exp(-2.0 * profile_.integral(t)) * (exp_moment(t) - exp_moment(s));
}

double DecayEnvelope::d_t(double t) const {
    const double d = d_from_cache(t);
    if (!(d > 0.0)) throw EvaluationError("d_t: internal invariant violation, d(t) <= 0");
    return d;
}

double DecayEnvelope::c_envelope(double t) const {
    const double t0 = profile_.t_start();
    if (t < t0) throw InputError("c_envelope: t precedes the profile start");
    if (t == t0) return 1.0;
    const auto inv_d = [&](double tau) { return 1.0 / d_from_cache(tau); };
    double f;
    if (t >= nodes_.back()) {
        const double overhang = t - nodes_.back();
        f = f_prefix_.back();
        if (overhang > 0.0) f += simpson(inv_d, nodes_.back(), t, even_panels(overhang, 1.0));
    } else {
        const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
        const std::size_t k = static_cast<std::size_t>(it - nodes_.begin()) - 1;
        f = f_prefix_[k];
        if (t > nodes_[k]) f += simpson(inv_d, nodes_[k], t, 4);
    }
    return std::exp(-f);
}

double constant_rho_c_st(double rho, double s, double t) {
    if (s > t) throw InputError("constant_rho_c_st: requires s <= t");
    if (std::abs(rho) < kRhoBranch) return t - s;
    return -std::expm1(-2.0 * rho * (t - s)) / (2.0 * rho);
}

double constant_rho_d(double rho, double d0, double t) {
    if (std::abs(rho) < kRhoBranch) return d0 + t;
    return d0 * std::exp(-2.0 * rho * t) + constant_rho_c_st(rho, 0.0, t);
}

double constant_rho_envelope(double rho, double d0, double t) {
    if (!(d0 > 0.0)) throw InputError("constant_rho_envelope: d0 must be positive");
    if (std::abs(rho) < kRhoBranch) return 1.0 / (1.0 + t / d0);
    const double e = std::exp(-2.0 * rho * t);
    return 2.0 * rho * d0 * e / (1.0 + (2.0 * rho * d0 - 1.0) * e);
}

}  // namespace entroflow
