#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "entroflow/scenario.hpp"

namespace {

constexpr const char* kVersion = "entroflow 0.1.0";

entroflow::ScenarioConfig load_config(const std::string& path) {
    auto config = entroflow::ScenarioConfig::load(path);
    config.validate();
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Entropy-decay laboratory for drift-diffusion flows with time-dependent coefficients"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);

    std::string config_path;
    std::string out_dir = ".";
    double lambda = 1.0;
    double t_final = 30.0;
    double l1_target = 0.05;

    auto* cmd_run = app.add_subcommand("run", "full pipeline: orbits, bounds, curvature, checks");
    cmd_run->add_option("config", config_path, "scenario config file")->required();

    auto* cmd_check = app.add_subcommand("check", "inequality suite only");
    cmd_check->add_option("config", config_path, "scenario config file")->required();

    auto* cmd_curv = app.add_subcommand("curvature", "estimate rho and verify the criterion");
    cmd_curv->add_option("config", config_path, "scenario config file")->required();

    auto* cmd_bounds = app.add_subcommand("bounds", "c_st / d_t / c_envelope tables");
    cmd_bounds->add_option("config", config_path, "scenario config file")->required();

    auto* cmd_ou = app.add_subcommand("ou-demo", "constant-drift reference curves");
    cmd_ou->add_option("--lambda", lambda, "drift parameter")->required();
    cmd_ou->add_option("--out", out_dir, "output directory");

    auto* cmd_heat = app.add_subcommand("heat-demo", "two-bump heat-flow convergence demo");
    cmd_heat->add_option("--out", out_dir, "output directory");
    cmd_heat->add_option("--t-final", t_final, "final time");
    cmd_heat->add_option("--l1-target", l1_target, "L1 convergence target");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return entroflow::kExitConfig;
    }

    try {
        if (cmd_run->parsed()) return entroflow::run_scenario(load_config(config_path)).exit_code;
        if (cmd_check->parsed()) return entroflow::run_check_suite(load_config(config_path)).exit_code;
        if (cmd_curv->parsed())
            return entroflow::run_curvature_report(load_config(config_path)).exit_code;
        if (cmd_bounds->parsed()) return entroflow::run_bounds_table(load_config(config_path)).exit_code;
        if (cmd_ou->parsed()) return entroflow::run_ou_demo(lambda, out_dir).exit_code;
        if (cmd_heat->parsed()) return entroflow::run_heat_demo(out_dir, t_final, l1_target).exit_code;
        std::fprintf(stderr, "%s\n", app.help().c_str());
        return entroflow::kExitConfig;
    } catch (const entroflow::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return entroflow::kExitConfig;
    } catch (const entroflow::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return entroflow::kExitConfig;
    } catch (const entroflow::DivergenceError& e) {
        std::fprintf(stderr, "divergence: %s\n", e.what());
        return entroflow::kExitDiverged;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return entroflow::kExitDiverged;
    }
}
