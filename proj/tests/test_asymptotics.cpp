#include "entroflow/asymptotics.hpp"

#include <cmath>

#include "doctest.h"
#include "entroflow/closed_forms.hpp"
#include "oracles.hpp"

using namespace entroflow;

TEST_SUITE_BEGIN("asymptotics");

TEST_CASE("rescaling the fundamental solution yields the standard Gaussian profile") {
    const auto spec = make_heat(6.0, 1024);
    const double t = 4.0;
    const auto law = heat_kernel(t, 0.5);
    const auto u = DensityGrid::gaussian(spec.grid, law.mean, law.variance);
    const auto snap = rescale(u, t);
    CHECK(snap.c_constant == doctest::Approx(1.0 / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-6));
    CHECK(snap.l1_to_gaussian() < 1e-4);
    CHECK(snap.mass == doctest::Approx(u.mass()).epsilon(1e-6));
}

TEST_CASE("rescaling zero data gives a zero snapshot") {
    const auto spec = make_heat();
    const auto zero = DensityGrid::zero(spec.grid);
    const auto snap = rescale(zero, 1.0);
    for (double v : snap.values) CHECK(v == 0.0);
    CHECK(snap.mass == 0.0);
}

TEST_CASE("rescale raises CoverageError when the window leaves the source grid") {
    const auto grid = SpatialGrid::make_1d(-4.0, 4.0, 64);
    const auto u = DensityGrid::gaussian(grid, point1(0.0), 0.5);
    CHECK_THROWS_AS(rescale(u, 100.0), CoverageError);
    CHECK_THROWS_AS(rescale(u, -1.0), InputError);
}

TEST_CASE("entropy_vs_fundamental closed forms") {
    const auto spec = make_heat(10.0, 1024);
    const double t = 3.0;

    SUBCASE("the fundamental solution itself scores zero") {
        const auto law = heat_kernel(t, 0.5);
        const auto u = DensityGrid::gaussian(spec.grid, law.mean, law.variance);
        CHECK(std::abs(entropy_vs_fundamental(u, t, 0.5)) < 1e-8);
    }

    SUBCASE("a mean shift scores m^2/(2t) for matched variance") {
        const auto u = DensityGrid::gaussian(spec.grid, point1(1.2), t);  // var = 2 kappa t = t
        CHECK(entropy_vs_fundamental(u, t, 0.5) ==
              doctest::Approx(1.2 * 1.2 / (2.0 * t)).epsilon(1e-4));
    }
}

TEST_CASE("narrow off-center data follows the 9/(2t) entropy tail") {
    const auto spec = make_heat(24.0, 2048);
    const auto u0 = DensityGrid::gaussian(spec.grid, point1(3.0), 0.1);
    const double t_list[] = {8.0, 16.0, 24.0};
    const auto report = intermediate_asymptotics_run(u0, spec, t_list);
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        const double t = report.times[k];
        // H = KL(N(3, 0.1 + t) || N(0, t)) -> 9/(2t) + O(1/t^2)
        const double expected = 9.0 / (2.0 * t);
        CHECK(oracle::rel_err(report.entropy_series[k], expected) < 0.1);
    }
    CHECK(report.entropy_nonincreasing);
}

TEST_CASE("two-bump initial data converges to the self-similar profile") {
    const auto spec = make_heat(30.0, 2048);
    const auto u0 = DensityGrid::gaussian_mixture(
        spec.grid, {{0.5, point1(-1.5), 0.1}, {0.5, point1(1.5), 0.1}});
    std::vector<double> t_list;
    for (int k = 0; k <= 7; ++k) t_list.push_back(2.0 + 4.0 * k);

    const auto report = intermediate_asymptotics_run(u0, spec, t_list);
    CHECK(report.entropy_nonincreasing);
    for (std::size_t k = 1; k < report.entropy_series.size(); ++k) {
        CHECK(report.entropy_series[k] < report.entropy_series[k - 1]);  // strictly decreasing
        CHECK(report.l1_series[k] < report.l1_series[k - 1] + 1e-9);
    }
    CHECK(report.final_l1 < 0.05);

    // mass conservation under rescaling
    const auto snap = rescale(report.snapshots.back(), t_list.back());
    CHECK(snap.mass == doctest::Approx(1.0).epsilon(1e-6));

    // Pinsker bridge: L1(rescaled, Gaussian)^2 <= 2 H + interpolation slack
    for (std::size_t k = 0; k < report.times.size(); ++k) {
        CHECK(report.l1_series[k] * report.l1_series[k] <=
              2.0 * report.entropy_series[k] + 1e-3);
    }

    // change-of-variable identity at the final time
    const auto last = rescale(report.snapshots.back(), t_list.back());
    std::vector<double> target(last.y_grid.cell_count());
    for (std::size_t j = 0; j < target.size(); ++j) {
        const double y = last.y_grid.coordinate(0, j);
        target[j] = last.c_constant * std::exp(-0.5 * y * y);
    }
    const double via_rescaled = relative_entropy(DensityGrid(last.y_grid, last.values),
                                                 DensityGrid(last.y_grid, target), PhiFunction::kl());
    const double direct = entropy_vs_fundamental(report.snapshots.back(), t_list.back(), 0.5);
    CHECK(std::abs(via_rescaled - direct) <= 1e-3);
}

TEST_CASE("starting from the fundamental solution keeps the entropy at zero") {
    const auto spec = make_heat(8.0, 1024);
    const double t0 = 1.0;
    const auto law = heat_kernel(t0, 0.5);
    auto shifted = spec;
    shifted.horizon = {t0, 8.0};
    const auto u0 = DensityGrid::gaussian(shifted.grid, law.mean, law.variance);
    const double t_list[] = {2.0, 4.0, 8.0};
    const auto report = intermediate_asymptotics_run(u0, shifted, t_list);
    for (double h : report.entropy_series) CHECK(std::abs(h) < 1e-5);
}

TEST_CASE("asymptotics run rejects non-heat specs") {
    const auto ou = make_ou(1.0);
    const auto u0 = DensityGrid::gaussian(ou.grid, point1(0.0), 1.0);
    const double t_list[] = {1.0};
    CHECK_THROWS_AS(intermediate_asymptotics_run(u0, ou, t_list), InputError);
}

TEST_SUITE_END();
