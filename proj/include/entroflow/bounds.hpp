#pragma once

#include <vector>

#include "entroflow/curvature.hpp"

namespace entroflow {

/// Local Phi-Sobolev constant c(s,t) = Int_s^t exp(-2 Int_tau^t rho) dtau by
/// composite Simpson quadrature over the profile (relative error <= 1e-6
/// against refinement). Stateless; see DecayEnvelope for cached evaluation.
double c_st(double s, double t, const CurvatureProfile& profile);

/// Propagated LSI constant d(t) and the entropy decay envelope c(t) for a
/// given initial constant d0, with quadrature nodes cached at construction.
class DecayEnvelope {
public:
    DecayEnvelope(double d0, CurvatureProfile profile);

    double d0() const { return d0_; }
    const CurvatureProfile& profile() const { return profile_; }

    double c_st(double s, double t) const;
    /// d(t) = d0 exp(-2 Int_0^t rho) + Int_0^t exp(-2 Int_tau^t rho) dtau,
    /// measured from the profile start.
    double d_t(double t) const;
    /// c(t) = exp(-Int_0^t 1/d(s) ds), in (0, 1], nonincreasing.
    double c_envelope(double t) const;

private:
    double exp_moment(double t) const;      // G(t) = Int_{t0}^t e^{2 R(tau)} dtau
    double d_from_cache(double t) const;

    double d0_;
    CurvatureProfile profile_;
    std::vector<double> nodes_;      // uniform quadrature nodes over the profile window
    std::vector<double> g_prefix_;   // G at nodes
    std::vector<double> f_prefix_;   // Int 1/d at nodes
};

// Closed forms for constant rho (series limit below |rho| = 1e-10).
double constant_rho_c_st(double rho, double s, double t);
double constant_rho_d(double rho, double d0, double t);
double constant_rho_envelope(double rho, double d0, double t);

}  // namespace entroflow
