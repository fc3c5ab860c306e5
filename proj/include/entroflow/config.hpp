#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "entroflow/entropy.hpp"
#include "entroflow/model.hpp"

namespace entroflow {

/// Scenario file contents (JSON, gated by the "schema" field). The parsed
/// form round-trips: serialize(parse(text)) == serialize(parse(serialize(parse(text)))).
struct ScenarioConfig {
    struct Preset {
        std::string name = "ou";
        double lambda = 1.0;
        double lambda_slope = 0.0;  // time_varying_ou drift is -(lambda + slope t) x
        double t_end = 5.0;
        std::size_t cells = 0;  // 0 -> preset default
    };
    struct GridOverride {
        std::vector<std::size_t> cells;                    // per axis
        std::vector<std::array<double, 2>> bounds;         // per axis
    };
    struct Checks {
        std::size_t commutation = 0;
        std::size_t phi_sobolev_kl = 0;
        std::size_t phi_sobolev_variance = 0;
        std::size_t lsi = 0;
        std::size_t propagated_lsi = 0;
        std::vector<double> propagated_lsi_times;
        std::size_t criterion_trials = 0;
    };

    int schema = 1;
    Preset preset;
    std::optional<GridOverride> grid;
    std::string phi_name = "kl";
    double phi_power = 1.5;
    std::vector<DensityGrid::MixtureComponent> u0;
    std::vector<DensityGrid::MixtureComponent> v0;
    std::optional<double> d0;
    std::vector<double> output_times;
    std::uint64_t seed = 0;
    std::string output_dir = ".";
    double rho_shift = 0.0;
    bool van_leer = false;
    bool dump_densities = false;
    std::size_t sde_paths = 0;
    double sde_dt = 1e-3;
    Checks checks;

    static ScenarioConfig parse_text(const std::string& json_text);
    static ScenarioConfig load(const std::string& path);
    std::string serialize() const;
    void save(const std::string& path) const;

    void validate() const;
    ProblemSpec build_spec() const;
    DensityGrid build_u0(const SpatialGrid& grid) const;
    DensityGrid build_v0(const SpatialGrid& grid) const;
    PhiFunction build_phi() const;
};

}  // namespace entroflow
