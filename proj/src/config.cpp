#include "entroflow/config.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace entroflow {

namespace {

using nlohmann::json;

json component_to_json(const DensityGrid::MixtureComponent& c, int dim) {
    json j;
    j["weight"] = c.weight;
    j["mean"] = dim == 2 ? json::array({c.mean[0], c.mean[1]}) : json::array({c.mean[0]});
    j["variance"] = c.variance;
    return j;
}

DensityGrid::MixtureComponent component_from_json(const json& j) {
    DensityGrid::MixtureComponent c;
    c.weight = j.value("weight", 1.0);
    c.variance = j.at("variance").get<double>();
    const auto& mean = j.at("mean");
    if (!mean.is_array() || mean.empty() || mean.size() > 2)
        throw ConfigError("initial data mean must be a 1- or 2-vector");
    c.mean[0] = mean[0].get<double>();
    if (mean.size() == 2) c.mean[1] = mean[1].get<double>();
    return c;
}

std::vector<DensityGrid::MixtureComponent> components_from_json(const json& j, const char* key) {
    if (!j.is_array() || j.empty()) throw ConfigError(std::string(key) + " must be a non-empty array");
    std::vector<DensityGrid::MixtureComponent> out;
    for (const auto& e : j) out.push_back(component_from_json(e));
    return out;
}

}  // namespace

ScenarioConfig ScenarioConfig::parse_text(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        ScenarioConfig c;
        c.schema = j.at("schema").get<int>();
        if (c.schema != 1) throw ConfigError("unsupported config schema version");

        const auto& p = j.at("preset");
        c.preset.name = p.at("name").get<std::string>();
        c.preset.lambda = p.value("lambda", 1.0);
        c.preset.lambda_slope = p.value("lambda_slope", 0.0);
        c.preset.t_end = p.value("t_end", 5.0);
        c.preset.cells = p.value("cells", std::size_t{0});

        if (j.contains("grid")) {
            GridOverride g;
            const auto& jg = j.at("grid");
            if (jg.contains("cells")) g.cells = jg.at("cells").get<std::vector<std::size_t>>();
            if (jg.contains("bounds")) {
                for (const auto& b : jg.at("bounds")) {
                    if (!b.is_array() || b.size() != 2) throw ConfigError("grid bounds entries must be [lo, hi]");
                    g.bounds.push_back({b[0].get<double>(), b[1].get<double>()});
                }
            }
            c.grid = std::move(g);
        }

        if (j.contains("phi")) {
            const auto& jp = j.at("phi");
            if (jp.is_string()) {
                c.phi_name = jp.get<std::string>();
            } else {
                c.phi_name = jp.at("name").get<std::string>();
                c.phi_power = jp.value("p", 1.5);
            }
        }

        if (j.contains("u0")) c.u0 = components_from_json(j.at("u0"), "u0");
        if (j.contains("v0")) c.v0 = components_from_json(j.at("v0"), "v0");
        if (j.contains("d0")) c.d0 = j.at("d0").get<double>();
        if (j.contains("output_times")) c.output_times = j.at("output_times").get<std::vector<double>>();
        c.seed = j.value("seed", std::uint64_t{0});
        c.output_dir = j.value("output_dir", std::string("."));
        c.rho_shift = j.value("rho_shift", 0.0);
        c.van_leer = j.value("van_leer", false);
        c.dump_densities = j.value("dump_densities", false);
        c.sde_paths = j.value("sde_paths", std::size_t{0});
        c.sde_dt = j.value("sde_dt", 1e-3);

        if (j.contains("checks")) {
            const auto& jc = j.at("checks");
            c.checks.commutation = jc.value("commutation", std::size_t{0});
            c.checks.phi_sobolev_kl = jc.value("phi_sobolev_kl", std::size_t{0});
            c.checks.phi_sobolev_variance = jc.value("phi_sobolev_variance", std::size_t{0});
            c.checks.lsi = jc.value("lsi", std::size_t{0});
            c.checks.propagated_lsi = jc.value("propagated_lsi", std::size_t{0});
            if (jc.contains("propagated_lsi_times"))
                c.checks.propagated_lsi_times = jc.at("propagated_lsi_times").get<std::vector<double>>();
            c.checks.criterion_trials = jc.value("criterion_trials", std::size_t{0});
        }
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
}

ScenarioConfig ScenarioConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_text(ss.str());
}

std::string ScenarioConfig::serialize() const {
    const int dim = preset.name == "rotating_drift" ? 2 : 1;
    json j;
    j["schema"] = schema;
    j["preset"] = {{"name", preset.name},
                   {"lambda", preset.lambda},
                   {"lambda_slope", preset.lambda_slope},
                   {"t_end", preset.t_end},
                   {"cells", preset.cells}};
    if (grid) {
        json jg;
        if (!grid->cells.empty()) jg["cells"] = grid->cells;
        if (!grid->bounds.empty()) {
            json jb = json::array();
            for (const auto& b : grid->bounds) jb.push_back(json::array({b[0], b[1]}));
            jg["bounds"] = jb;
        }
        j["grid"] = jg;
    }
    j["phi"] = {{"name", phi_name}, {"p", phi_power}};
    if (!u0.empty()) {
        json ju = json::array();
        for (const auto& c : u0) ju.push_back(component_to_json(c, dim));
        j["u0"] = ju;
    }
    if (!v0.empty()) {
        json jv = json::array();
        for (const auto& c : v0) jv.push_back(component_to_json(c, dim));
        j["v0"] = jv;
    }
    if (d0) j["d0"] = *d0;
    j["output_times"] = output_times;
    j["seed"] = seed;
    j["output_dir"] = output_dir;
    j["rho_shift"] = rho_shift;
    j["van_leer"] = van_leer;
    j["dump_densities"] = dump_densities;
    j["sde_paths"] = sde_paths;
    j["sde_dt"] = sde_dt;
    j["checks"] = {{"commutation", checks.commutation},
                   {"phi_sobolev_kl", checks.phi_sobolev_kl},
                   {"phi_sobolev_variance", checks.phi_sobolev_variance},
                   {"lsi", checks.lsi},
                   {"propagated_lsi", checks.propagated_lsi},
                   {"propagated_lsi_times", checks.propagated_lsi_times},
                   {"criterion_trials", checks.criterion_trials}};
    return j.dump(2) + "\n";
}

void ScenarioConfig::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write config file: " + path);
    out << serialize();
}

void ScenarioConfig::validate() const {
    if (schema != 1) throw ConfigError("unsupported config schema version");
    PhiFunction::by_name(phi_name, phi_power);  // throws on unknown names
    if (preset.name != "ou" && preset.name != "heat" && preset.name != "rotating_drift" &&
        preset.name != "time_varying_ou")
        throw ConfigError("unknown preset name: " + preset.name);
    double prev = -std::numeric_limits<double>::infinity();
    for (double t : output_times) {
        if (!(t > prev)) throw ConfigError("output_times must be strictly increasing");
        prev = t;
    }
    if (d0 && !(*d0 > 0.0)) throw ConfigError("d0 must be positive");
    if (!(sde_dt > 0.0)) throw ConfigError("sde_dt must be positive");
}

ProblemSpec ScenarioConfig::build_spec() const {
    ProblemSpec spec =
        make_preset(preset.name, preset.lambda, preset.lambda_slope, preset.t_end, preset.cells);
    if (grid) {
        SpatialGrid g = spec.grid;
        for (int a = 0; a < g.dimension; ++a) {
            if (!grid->cells.empty())
                g.n[a] = grid->cells.size() > static_cast<std::size_t>(a) ? grid->cells[a]
                                                                          : grid->cells.back();
            if (!grid->bounds.empty()) {
                const auto& b = grid->bounds.size() > static_cast<std::size_t>(a) ? grid->bounds[a]
                                                                                  : grid->bounds.back();
                g.min[a] = b[0];
                g.max[a] = b[1];
            }
        }
        g.validate();
        spec.grid = g;
    }
    return spec;
}

DensityGrid ScenarioConfig::build_u0(const SpatialGrid& grid) const {
    if (u0.empty()) throw ConfigError("config has no u0 initial data");
    return DensityGrid::gaussian_mixture(grid, u0);
}

DensityGrid ScenarioConfig::build_v0(const SpatialGrid& grid) const {
    if (v0.empty()) throw ConfigError("config has no v0 initial data");
    return DensityGrid::gaussian_mixture(grid, v0);
}

PhiFunction ScenarioConfig::build_phi() const { return PhiFunction::by_name(phi_name, phi_power); }

}  // namespace entroflow
