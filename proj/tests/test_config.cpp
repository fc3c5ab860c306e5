#include "entroflow/config.hpp"

#include <cstdio>
#include <filesystem>

#include "doctest.h"
#include "entroflow/report.hpp"

using namespace entroflow;

namespace {

const char* kSampleConfig = R"json({
  "schema": 1,
  "preset": {"name": "ou", "lambda": 1.0, "t_end": 5.0, "cells": 256},
  "phi": "kl",
  "u0": [{"weight": 1.0, "mean": [1.0], "variance": 1.0}],
  "v0": [{"weight": 1.0, "mean": [0.0], "variance": 1.0}],
  "d0": 0.5,
  "output_times": [0.0, 1.0, 2.0],
  "seed": 42,
  "output_dir": "out",
  "checks": {"commutation": 5, "lsi": 5}
})json";

}  // namespace

TEST_SUITE_BEGIN("config");

TEST_CASE("parse picks up every field") {
    const auto c = ScenarioConfig::parse_text(kSampleConfig);
    CHECK(c.schema == 1);
    CHECK(c.preset.name == "ou");
    CHECK(c.preset.cells == 256);
    CHECK(c.phi_name == "kl");
    REQUIRE(c.u0.size() == 1);
    CHECK(c.u0[0].mean[0] == 1.0);
    CHECK(c.d0.has_value());
    CHECK(*c.d0 == 0.5);
    CHECK(c.output_times.size() == 3);
    CHECK(c.seed == 42);
    CHECK(c.checks.commutation == 5);
    CHECK(c.checks.lsi == 5);
    CHECK(c.checks.phi_sobolev_kl == 0);
    c.validate();
}

TEST_CASE("serialize then parse is the identity on the serialized form") {
    const auto c = ScenarioConfig::parse_text(kSampleConfig);
    const std::string once = c.serialize();
    const auto reparsed = ScenarioConfig::parse_text(once);
    CHECK(reparsed.serialize() == once);
}

TEST_CASE("schema gate and malformed input") {
    CHECK_THROWS_AS(ScenarioConfig::parse_text("{\"schema\": 2, \"preset\": {\"name\": \"ou\"}}"),
                    ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse_text("not json at all"), ConfigError);
    CHECK_THROWS_AS(ScenarioConfig::parse_text("{\"preset\": {\"name\": \"ou\"}}"), ConfigError);

    auto c = ScenarioConfig::parse_text(kSampleConfig);
    c.preset.name = "bogus";
    CHECK_THROWS_AS(c.build_spec(), ConfigError);
    c = ScenarioConfig::parse_text(kSampleConfig);
    c.output_times = {1.0, 1.0};
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("build_spec applies grid overrides") {
    auto c = ScenarioConfig::parse_text(kSampleConfig);
    ScenarioConfig::GridOverride g;
    g.cells = {128};
    g.bounds = {{-5.0, 5.0}};
    c.grid = g;
    const auto spec = c.build_spec();
    CHECK(spec.grid.n[0] == 128);
    CHECK(spec.grid.min[0] == -5.0);
    CHECK(spec.grid.max[0] == 5.0);
}

TEST_CASE("initial data builders produce normalized densities") {
    const auto c = ScenarioConfig::parse_text(kSampleConfig);
    const auto spec = c.build_spec();
    CHECK(c.build_u0(spec.grid).is_probability(1e-9));
    CHECK(c.build_v0(spec.grid).is_probability(1e-9));
}

TEST_CASE("format_double survives a parse round trip") {
    for (double v : {0.1, 1.0 / 3.0, 12345.678901234567, 1e-300, -2.5e17, 0.0}) {
        const std::string s = format_double(v);
        CHECK(std::stod(s) == v);
        CHECK(s.find(',') == std::string::npos);
    }
}

TEST_CASE("density snapshots round-trip through the flat binary format") {
    const auto grid = SpatialGrid::make_2d(-2.0, 2.0, -1.0, 1.0, 16, 8);
    const auto d = DensityGrid::gaussian(grid, point2(0.2, -0.1), 0.5);
    const auto path = std::filesystem::temp_directory_path() / "entroflow_density_test.bin";
    write_density_binary(d, path.string());
    const auto back = read_density_binary(path.string());
    REQUIRE(back.grid().same_layout(grid));
    for (std::size_t i = 0; i < d.values().size(); ++i) CHECK(back.values()[i] == d.values()[i]);
    std::filesystem::remove(path);
}

TEST_SUITE_END();
