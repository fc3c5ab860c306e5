#include "entroflow/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "entroflow/asymptotics.hpp"
#include "entroflow/bounds.hpp"
#include "entroflow/closed_forms.hpp"
#include "entroflow/curvature.hpp"
#include "entroflow/fokker_planck.hpp"
#include "entroflow/report.hpp"
#include "entroflow/sde.hpp"
#include "entroflow/semigroup.hpp"

namespace entroflow {

namespace {

namespace fs = std::filesystem;

class SummaryBuilder {
public:
    void add(const std::string& key, const std::string& value) { entries_.emplace_back(key, value); }
    void add(const std::string& key, double value) { add(key, format_double(value)); }
    void add(const std::string& key, bool value) { add(key, value ? std::string("true") : std::string("false")); }
    void add(const std::string& key, std::size_t value) { add(key, std::to_string(value)); }

    void write(const std::string& dir) const {
        std::ofstream out(fs::path(dir) / "summary", std::ios::binary);
        if (!out) throw ConfigError("cannot write summary into " + dir);
        for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
    }
    const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
}

void write_curvature_csv(const std::string& dir, const CurvatureProfile& profile) {
    CsvWriter csv((fs::path(dir) / "curvature.csv").string());
    csv.header({"t", "rho"});
    for (std::size_t k = 0; k < profile.sample_times().size(); ++k) {
        csv.row({CsvWriter::cell(profile.sample_times()[k]), CsvWriter::cell(profile.values()[k])});
    }
}

void write_inequalities_csv(const std::string& dir, const std::vector<InequalityReport>& reports) {
    CsvWriter csv((fs::path(dir) / "inequalities.csv").string());
    csv.header({"kind", "s", "t", "worst_residual", "tolerance", "pass"});
    for (const auto& r : reports) {
        csv.row({inequality_kind_name(r.kind), CsvWriter::cell(r.s), CsvWriter::cell(r.t),
                 CsvWriter::cell(r.worst_residual), CsvWriter::cell(r.tolerance),
                 r.passing() ? "1" : "0"});
    }
}

struct SuiteSummary {
    std::size_t count = 0;
    double worst = std::numeric_limits<double>::infinity();
    bool pass = true;
};

SuiteSummary fold(const std::vector<InequalityReport>& reports) {
    SuiteSummary s;
    s.count = reports.size();
    for (const auto& r : reports) {
        s.worst = std::min(s.worst, r.worst_residual);
        s.pass = s.pass && r.passing();
    }
    if (reports.empty()) s.worst = 0.0;
    return s;
}

void add_suite(SummaryBuilder& summary, const std::string& name, const SuiteSummary& s) {
    summary.add("checks." + name + ".count", s.count);
    summary.add("checks." + name + ".worst_residual", s.worst);
    summary.add("checks." + name + ".pass", s.pass);
}

// All enabled inequality suites; appends reports and returns overall pass.
bool run_enabled_checks(const ScenarioConfig& config, const ProblemSpec& spec,
                        const CurvatureProfile& profile, std::vector<InequalityReport>& reports,
                        SummaryBuilder& summary) {
    const auto& counts = config.checks;
    SuiteOptions suite;
    suite.seed = config.seed + 17;
    suite.check.solver.van_leer = config.van_leer;
    bool all_pass = true;

    if (counts.commutation > 0) {
        suite.count = counts.commutation;
        const auto rep = commutation_suite(spec, profile, suite);
        const auto s = fold(rep);
        add_suite(summary, "commutation", s);
        all_pass = all_pass && s.pass;
        reports.insert(reports.end(), rep.begin(), rep.end());
    }
    if (counts.phi_sobolev_kl > 0) {
        suite.count = counts.phi_sobolev_kl;
        const auto rep = phi_sobolev_suite(spec, profile, PhiFunction::kl(), suite);
        const auto s = fold(rep);
        add_suite(summary, "phi_sobolev_kl", s);
        all_pass = all_pass && s.pass;
        reports.insert(reports.end(), rep.begin(), rep.end());
    }
    if (counts.phi_sobolev_variance > 0) {
        suite.count = counts.phi_sobolev_variance;
        const auto rep = phi_sobolev_suite(spec, profile, PhiFunction::variance(), suite);
        const auto s = fold(rep);
        add_suite(summary, "phi_sobolev_variance", s);
        all_pass = all_pass && s.pass;
        reports.insert(reports.end(), rep.begin(), rep.end());
    }
    if (counts.lsi > 0) {
        suite.count = counts.lsi;
        const auto rep = lsi_suite(spec, profile, suite);
        const auto s = fold(rep);
        add_suite(summary, "lsi", s);
        all_pass = all_pass && s.pass;
        reports.insert(reports.end(), rep.begin(), rep.end());
    }
    if (counts.propagated_lsi > 0) {
        if (!config.d0) throw ConfigError("propagated_lsi checks need d0");
        if (counts.propagated_lsi_times.empty())
            throw ConfigError("propagated_lsi checks need propagated_lsi_times");
        const DensityGrid v0 = config.build_v0(spec.grid);
        CheckOptions check;
        check.solver.van_leer = config.van_leer;
        std::vector<InequalityReport> rep;
        for (double t : counts.propagated_lsi_times) {
            rep.push_back(check_propagated_lsi(spec, v0, *config.d0, t, counts.propagated_lsi,
                                               config.seed + 29, check, &profile));
        }
        const auto s = fold(rep);
        add_suite(summary, "propagated_lsi", s);
        all_pass = all_pass && s.pass;
        reports.insert(reports.end(), rep.begin(), rep.end());
    }
    return all_pass;
}

CurvatureProfile build_profile(const ScenarioConfig& config, const ProblemSpec& spec) {
    CurvatureProfile profile = estimate_rho(spec);
    if (config.rho_shift != 0.0) return profile.shifted(config.rho_shift);
    return profile;
}

std::vector<double> default_times(const ProblemSpec& spec, std::size_t count) {
    std::vector<double> t(count);
    for (std::size_t k = 0; k < count; ++k) {
        t[k] = spec.horizon.start +
               spec.horizon.length() * static_cast<double>(k) / static_cast<double>(count - 1);
    }
    return t;
}

int finish(ScenarioResult& result, SummaryBuilder& summary, const std::string& dir, int exit_code) {
    summary.add("exit_code", static_cast<std::size_t>(exit_code));
    summary.write(dir);
    result.exit_code = exit_code;
    result.summary = summary.entries();
    return exit_code;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& config) {
    config.validate();
    const ProblemSpec spec = config.build_spec();
    ensure_dir(config.output_dir);

    ScenarioResult result;
    SummaryBuilder summary;
    summary.add("command", std::string("run"));
    summary.add("schema", static_cast<std::size_t>(config.schema));
    summary.add("preset", spec.name);
    summary.add("phi", config.phi_name);
    summary.add("seed", static_cast<std::size_t>(config.seed));
    summary.add("rho_shift", config.rho_shift);

    try {
        const PhiFunction phi = config.build_phi();
        const DensityGrid u0 = config.build_u0(spec.grid);
        const DensityGrid v0 = config.build_v0(spec.grid);
        const CurvatureProfile profile = build_profile(config, spec);
        write_curvature_csv(config.output_dir, profile);

        bool all_pass = true;

        if (config.checks.criterion_trials > 0) {
            const auto criterion =
                verify_criterion(profile, spec, config.checks.criterion_trials, config.seed + 5);
            summary.add("criterion.worst_residual", criterion.worst_residual);
            summary.add("criterion.tolerance", criterion.tolerance);
            summary.add("criterion.pass", criterion.passed());
            all_pass = all_pass && criterion.passed();
        }

        const std::vector<double> times =
            config.output_times.empty() ? default_times(spec, 21) : config.output_times;
        SolverOptions solver;
        solver.van_leer = config.van_leer;
        const OrbitPair orbit =
            evolve_pair(u0, v0, spec, phi, times, config.d0, solver, &profile);

        {
            CsvWriter csv((fs::path(config.output_dir) / "orbit.csv").string());
            csv.header({"t", "mass_u", "mass_v", "H_phi", "dissipation", "envelope", "violation_flag"});
            for (std::size_t k = 0; k < orbit.times.size(); ++k) {
                csv.row({CsvWriter::cell(orbit.times[k]), CsvWriter::cell(orbit.mass_u[k]),
                         CsvWriter::cell(orbit.mass_v[k]), CsvWriter::cell(orbit.entropy[k]),
                         CsvWriter::cell(orbit.dissipation_series[k]),
                         orbit.has_envelope ? CsvWriter::cell(orbit.envelope[k]) : "nan",
                         orbit.has_envelope && orbit.envelope_violation[k] ? "1" : "0"});
            }
        }
        {
            CsvWriter csv((fs::path(config.output_dir) / "entropy.csv").string());
            csv.header({"t", "H_phi", "dissipation", "pinsker_lhs", "pinsker_rhs"});
            for (std::size_t k = 0; k < orbit.times.size(); ++k) {
                const auto gap = pinsker_gap(orbit.u_series[k], orbit.v_series[k]);
                csv.row({CsvWriter::cell(orbit.times[k]), CsvWriter::cell(orbit.entropy[k]),
                         CsvWriter::cell(orbit.dissipation_series[k]), CsvWriter::cell(gap.kl),
                         CsvWriter::cell(gap.half_l1_sq)});
            }
        }
        if (config.dump_densities) {
            for (std::size_t k = 0; k < orbit.times.size(); ++k) {
                char name[32];
                std::snprintf(name, sizeof(name), "u_%03zu.bin", k);
                write_density_binary(orbit.u_series[k], (fs::path(config.output_dir) / name).string());
                std::snprintf(name, sizeof(name), "v_%03zu.bin", k);
                write_density_binary(orbit.v_series[k], (fs::path(config.output_dir) / name).string());
            }
        }

        summary.add("h0", orbit.h0);
        summary.add("entropy_final", orbit.entropy.back());
        summary.add("mass_deviation_max",
                    std::max(orbit.max_mass_deviation_u, orbit.max_mass_deviation_v));
        summary.add("entropy_increase_max", orbit.worst_entropy_increase);
        summary.add("min_density", orbit.min_density_value);
        summary.add("envelope.enabled", orbit.has_envelope);
        if (orbit.has_envelope) {
            summary.add("envelope.violated", orbit.any_envelope_violation);
            all_pass = all_pass && !orbit.any_envelope_violation;
        }

        if (config.d0) {
            const DecayEnvelope env(*config.d0, profile);
            CsvWriter csv((fs::path(config.output_dir) / "bounds.csv").string());
            csv.header({"t", "c_st_0t", "d_t", "c_envelope"});
            for (double t : times) {
                csv.row({CsvWriter::cell(t), CsvWriter::cell(env.c_st(spec.horizon.start, t)),
                         CsvWriter::cell(env.d_t(t)), CsvWriter::cell(env.c_envelope(t))});
            }
        }

        std::vector<InequalityReport> reports;
        const bool checks_pass = run_enabled_checks(config, spec, profile, reports, summary);
        if (!reports.empty()) write_inequalities_csv(config.output_dir, reports);
        all_pass = all_pass && checks_pass;

        if (config.sde_paths > 0) {
            const StartLaw start = StartLaw::mixture(
                [&] {
                    std::vector<StartLaw::Component> comps;
                    for (const auto& c : config.u0)
                        comps.push_back({c.weight, c.mean, c.variance});
                    return comps;
                }());
            const PathEnsemble ens = simulate(spec, start, spec.horizon.start, times.back(),
                                              config.sde_paths, config.sde_dt, config.seed);
            CsvWriter csv((fs::path(config.output_dir) / "sde_paths.csv").string());
            csv.header(spec.grid.dimension == 2 ? std::vector<std::string>{"path_id", "x1", "x2"}
                                                : std::vector<std::string>{"path_id", "x1"});
            for (std::size_t p = 0; p < ens.terminal.size(); ++p) {
                std::vector<std::string> cells{std::to_string(p), CsvWriter::cell(ens.terminal[p][0])};
                if (spec.grid.dimension == 2) cells.push_back(CsvWriter::cell(ens.terminal[p][1]));
                csv.row(cells);
            }
        }

        summary.add("overall.pass", all_pass);
        finish(result, summary, config.output_dir, all_pass ? kExitOk : kExitFalsified);
    } catch (const DivergenceError& e) {
        summary.add("error", std::string(e.what()));
        summary.add("overall.pass", false);
        finish(result, summary, config.output_dir, kExitDiverged);
    }
    return result;
}

ScenarioResult run_check_suite(const ScenarioConfig& config) {
    config.validate();
    const ProblemSpec spec = config.build_spec();
    ensure_dir(config.output_dir);

    ScenarioResult result;
    SummaryBuilder summary;
    summary.add("command", std::string("check"));
    summary.add("preset", spec.name);
    summary.add("seed", static_cast<std::size_t>(config.seed));
    summary.add("rho_shift", config.rho_shift);

    try {
        const CurvatureProfile profile = build_profile(config, spec);
        write_curvature_csv(config.output_dir, profile);
        std::vector<InequalityReport> reports;
        const bool pass = run_enabled_checks(config, spec, profile, reports, summary);
        write_inequalities_csv(config.output_dir, reports);
        summary.add("overall.pass", pass);
        finish(result, summary, config.output_dir, pass ? kExitOk : kExitFalsified);
    } catch (const DivergenceError& e) {
        summary.add("error", std::string(e.what()));
        summary.add("overall.pass", false);
        finish(result, summary, config.output_dir, kExitDiverged);
    }
    return result;
}

ScenarioResult run_curvature_report(const ScenarioConfig& config) {
    config.validate();
    const ProblemSpec spec = config.build_spec();
    ensure_dir(config.output_dir);

    ScenarioResult result;
    SummaryBuilder summary;
    summary.add("command", std::string("curvature"));
    summary.add("preset", spec.name);

    const CurvatureProfile profile = build_profile(config, spec);
    write_curvature_csv(config.output_dir, profile);
    const std::size_t trials =
        config.checks.criterion_trials > 0 ? config.checks.criterion_trials : 200;
    const auto criterion = verify_criterion(profile, spec, trials, config.seed + 5);
    summary.add("criterion.trials", trials);
    summary.add("criterion.worst_residual", criterion.worst_residual);
    summary.add("criterion.tolerance", criterion.tolerance);
    summary.add("criterion.pass", criterion.passed());
    summary.add("overall.pass", criterion.passed());
    finish(result, summary, config.output_dir, criterion.passed() ? kExitOk : kExitFalsified);
    return result;
}

ScenarioResult run_bounds_table(const ScenarioConfig& config) {
    config.validate();
    if (!config.d0) throw ConfigError("bounds table needs d0");
    const ProblemSpec spec = config.build_spec();
    ensure_dir(config.output_dir);

    ScenarioResult result;
    SummaryBuilder summary;
    summary.add("command", std::string("bounds"));
    summary.add("preset", spec.name);
    summary.add("d0", *config.d0);

    const CurvatureProfile profile = build_profile(config, spec);
    const DecayEnvelope env(*config.d0, profile);
    const std::vector<double> times =
        config.output_times.empty() ? default_times(spec, 101) : config.output_times;
    CsvWriter csv((fs::path(config.output_dir) / "bounds.csv").string());
    csv.header({"t", "c_st_0t", "d_t", "c_envelope"});
    for (double t : times) {
        csv.row({CsvWriter::cell(t), CsvWriter::cell(env.c_st(spec.horizon.start, t)),
                 CsvWriter::cell(env.d_t(t)), CsvWriter::cell(env.c_envelope(t))});
    }
    summary.add("overall.pass", true);
    finish(result, summary, config.output_dir, kExitOk);
    return result;
}

ScenarioResult run_ou_demo(double lambda, const std::string& out_dir) {
    ensure_dir(out_dir);
    ScenarioResult result;
    SummaryBuilder summary;
    summary.add("command", std::string("ou-demo"));
    summary.add("lambda", lambda);

    const Point x = point1(1.0);
    const Point y = point1(0.0);
    CsvWriter csv((fs::path(out_dir) / "ou_reference.csv").string());
    csv.header({"t", "alpha", "regime"});
    const char* name = regime_name(regime(lambda));
    for (int k = 1; k <= 200; ++k) {
        const double t = 0.05 * static_cast<double>(k);
        csv.row({CsvWriter::cell(t), CsvWriter::cell(ou_alpha(x, y, t, lambda)), name});
    }
    summary.add("regime", std::string(name));
    summary.add("alpha_limit", ou_alpha_limit(x, y, lambda));
    summary.add("overall.pass", true);
    finish(result, summary, out_dir, kExitOk);
    return result;
}

ScenarioResult run_heat_demo(const std::string& out_dir, double t_final, double l1_target) {
    if (!(t_final > 4.0)) throw ConfigError("heat-demo needs t_final > 4");
    ensure_dir(out_dir);
    ScenarioResult result;
    SummaryBuilder summary;
    summary.add("command", std::string("heat-demo"));
    summary.add("t_final", t_final);
    summary.add("l1_target", l1_target);

    try {
        const ProblemSpec spec = make_heat(t_final, 2048);
        const DensityGrid u0 = DensityGrid::gaussian_mixture(
            spec.grid, {{0.5, point1(-1.5), 0.1}, {0.5, point1(1.5), 0.1}});

        std::vector<double> t_list;
        for (int k = 0; k <= 14; ++k)
            t_list.push_back(2.0 + (t_final - 2.0) * static_cast<double>(k) / 14.0);

        const auto report = intermediate_asymptotics_run(u0, spec, t_list);
        CsvWriter csv((fs::path(out_dir) / "asymptotics.csv").string());
        csv.header({"t", "H_vs_fundamental", "l1_to_gaussian"});
        for (std::size_t k = 0; k < report.times.size(); ++k) {
            csv.row({CsvWriter::cell(report.times[k]), CsvWriter::cell(report.entropy_series[k]),
                     CsvWriter::cell(report.l1_series[k])});
        }

        // change-of-variable identity at the final time
        const DensityGrid& final_u = report.snapshots.back();
        const auto snap = rescale(final_u, t_final);
        DensityGrid rescaled(snap.y_grid, snap.values);
        std::vector<double> target(snap.y_grid.cell_count());
        for (std::size_t j = 0; j < target.size(); ++j) {
            const double yc = snap.y_grid.coordinate(0, j);
            target[j] = snap.c_constant * std::exp(-0.5 * yc * yc);
        }
        const double h_rescaled =
            relative_entropy(rescaled, DensityGrid(snap.y_grid, std::move(target)), PhiFunction::kl());
        const double h_direct = entropy_vs_fundamental(final_u, t_final, 0.5);
        const double identity_gap = std::abs(h_rescaled - h_direct);

        const bool pass = report.entropy_nonincreasing && report.final_l1 <= l1_target &&
                          identity_gap <= 1e-3;
        summary.add("entropy_nonincreasing", report.entropy_nonincreasing);
        summary.add("final_l1", report.final_l1);
        summary.add("identity_gap", identity_gap);
        summary.add("overall.pass", pass);
        finish(result, summary, out_dir, pass ? kExitOk : kExitFalsified);
    } catch (const DivergenceError& e) {
        summary.add("error", std::string(e.what()));
        summary.add("overall.pass", false);
        finish(result, summary, out_dir, kExitDiverged);
    }
    return result;
}

}  // namespace entroflow
