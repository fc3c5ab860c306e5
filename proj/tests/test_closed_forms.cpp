#include "entroflow/closed_forms.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

using namespace entroflow;

TEST_SUITE_BEGIN("closed_forms");

TEST_CASE("ou_transition matches the displayed mean and variance") {
    const auto law = ou_transition(point1(2.0), std::log(2.0), 1.0);
    CHECK(law.mean[0] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(law.variance == doctest::Approx(0.75).epsilon(1e-14));
}

TEST_CASE("ou_transition lambda -> 0 limit is 2t") {
    CHECK(ou_transition(point1(0.0), 1.0, 0.0).variance == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(ou_transition(point1(0.0), 1.0, 1e-13).variance == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("ou_transition approaches the invariant law for lambda = 1") {
    const auto law = ou_transition(point1(3.0), 40.0, 1.0);
    CHECK(std::abs(law.mean[0]) < 1e-15);
    CHECK(law.variance == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("ou_transition rejects t <= 0") {
    CHECK_THROWS_AS(ou_transition(point1(0.0), 0.0, 1.0), InputError);
}

TEST_CASE("ou_alpha arithmetic spot checks") {
    // lambda = 1, x - y = 2, t = ln 2: e^{2t} - 1 = 3
    CHECK(ou_alpha(point1(2.0), point1(0.0), std::log(2.0), 1.0) ==
          doctest::Approx(4.0 / 6.0).epsilon(1e-13));
    // lambda = 0 branch: (x-y)^2 / (4t)
    CHECK(ou_alpha(point1(2.0), point1(0.0), 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ou_alpha(point1(0.7), point1(0.7), 2.3, -1.4) == 0.0);
}

TEST_CASE("gaussian_kl equals a dense quadrature of the defining integral") {
    const GaussianLaw p{point1(1.0), 1.0, 1};
    const GaussianLaw q{point1(0.0), 1.0, 1};
    CHECK(gaussian_kl(p, q) == doctest::Approx(0.5).epsilon(1e-13));

    const GaussianLaw a{point1(0.4), 1.7, 1};
    const GaussianLaw b{point1(-0.2), 0.8, 1};
    const double direct = oracle::simpson(
        [&](double x) {
            const double pa = oracle::gauss_pdf(x, a.mean[0], a.variance);
            const double pb = oracle::gauss_pdf(x, b.mean[0], b.variance);
            return pa > 1e-300 ? pa * std::log(pa / pb) : 0.0;
        },
        -30.0, 30.0, 200000);
    CHECK(gaussian_kl(a, b) == doctest::Approx(direct).epsilon(1e-9));
}

TEST_CASE("gaussian_kl of OU transitions reproduces ou_alpha at machine precision") {
    std::mt19937_64 rng(321);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 1000; ++k) {
        const double x = -3.0 + 6.0 * u(rng);
        const double y = -3.0 + 6.0 * u(rng);
        double lambda = -2.0 + 4.0 * u(rng);
        if (k % 7 == 0) lambda = 0.0;
        if (k % 11 == 0) lambda = 5e-11 * (u(rng) - 0.5);
        const double t = 0.05 + 5.0 * u(rng);
        const double via_kl =
            gaussian_kl(ou_transition(point1(y), t, lambda), ou_transition(point1(x), t, lambda));
        const double direct = ou_alpha(point1(x), point1(y), t, lambda);
        CHECK(oracle::rel_err(via_kl, direct) < 1e-12);
    }
}

TEST_CASE("regime classification and limits") {
    CHECK(regime(1.0) == OuRegime::exponential_to_zero);
    CHECK(regime(0.0) == OuRegime::algebraic_to_zero);
    CHECK(regime(-1.0) == OuRegime::exponential_to_positive_limit);

    // lambda < 0: alpha approaches -lambda (x-y)^2 / 2 exponentially fast
    const double limit = ou_alpha_limit(point1(2.0), point1(0.0), -1.0);
    CHECK(limit == doctest::Approx(2.0));
    double prev_gap = 0.0;
    for (int k = 1; k <= 6; ++k) {
        const double t = 2.0 * k;
        const double gap = std::abs(ou_alpha(point1(2.0), point1(0.0), t, -1.0) - limit);
        if (k > 1) CHECK(gap < 0.2 * prev_gap);
        prev_gap = gap;
    }
    CHECK(ou_alpha_limit(point1(2.0), point1(0.0), 1.0) == 0.0);
}

TEST_CASE("ou_alpha is continuous in lambda at zero") {
    const double at_zero = ou_alpha(point1(1.5), point1(-0.5), 2.0, 0.0);
    const double near_zero = ou_alpha(point1(1.5), point1(-0.5), 2.0, 1e-8);
    CHECK(oracle::rel_err(near_zero, at_zero) < 1e-6);
}

TEST_CASE("heat_kernel variance is 2 kappa t") {
    CHECK(heat_kernel(1.0, 0.5).variance == doctest::Approx(1.0));
    CHECK(heat_kernel(4.0, 0.5).variance == doctest::Approx(4.0));
    CHECK(heat_kernel(3.0, 2.0).variance == doctest::Approx(12.0));
    CHECK_THROWS_AS(heat_kernel(0.0, 0.5), InputError);
}

TEST_SUITE_END();
