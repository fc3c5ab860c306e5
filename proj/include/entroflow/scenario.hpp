#pragma once

#include <string>
#include <utility>
#include <vector>

#include "entroflow/config.hpp"

namespace entroflow {

// CLI exit-code contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFalsified = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDiverged = 3;

struct ScenarioResult {
    int exit_code = kExitOk;
    std::vector<std::pair<std::string, std::string>> summary;
};

/// Full pipeline: orbit evolution, curvature profile, bounds table, enabled
/// inequality checks; writes orbit.csv, entropy.csv, curvature.csv,
/// bounds.csv, inequalities.csv and `summary` into the output directory.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// Inequality suite only (inequalities.csv + summary).
ScenarioResult run_check_suite(const ScenarioConfig& config);

/// estimate_rho + verify_criterion only (curvature.csv + summary).
ScenarioResult run_curvature_report(const ScenarioConfig& config);

/// c_st / d_t / c_envelope table over the output times (bounds.csv + summary).
ScenarioResult run_bounds_table(const ScenarioConfig& config);

/// Reference curves for the constant-drift process (ou_reference.csv).
ScenarioResult run_ou_demo(double lambda, const std::string& out_dir);

/// Two-bump heat-flow convergence demo (asymptotics.csv + summary).
ScenarioResult run_heat_demo(const std::string& out_dir, double t_final = 30.0,
                             double l1_target = 0.05);

}  // namespace entroflow
