#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "helpers.hpp"
#include "hkc/influence.hpp"

using namespace hkc;

TEST_CASE("psi evaluation: built-in kinds") {
    const auto rational = InfluenceFunction::rational(1.0);
    CHECK(rational(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rational(1.0) == doctest::Approx(0.5).epsilon(1e-15));

    const auto tab = InfluenceFunction::tabulated({{0.0, 1.0}, {2.0, 0.2}});
    CHECK(tab(1.0) == doctest::Approx(0.6).epsilon(1e-15));
    CHECK(tab(0.0) == doctest::Approx(1.0));
    CHECK(tab(2.0) == doctest::Approx(0.2));
    CHECK(tab(5.0) == doctest::Approx(0.2));  // holds the last value

    const auto gauss = InfluenceFunction::gaussian(2.0, 3.0);
    CHECK(gauss(0.0) == doctest::Approx(2.0));
    CHECK(gauss(3.0) == doctest::Approx(2.0 * std::exp(-1.0)));

    const auto affine = InfluenceFunction::affine_cutoff(1.0, 0.25);
    CHECK(affine(2.0) == doctest::Approx(0.5));
    CHECK(affine(4.0) == doctest::Approx(0.0));
    CHECK(affine(8.0) == doctest::Approx(0.0));
}

TEST_CASE("psi evaluation: domain errors") {
    const auto f = InfluenceFunction::rational(1.0);
    CHECK_THROWS_AS(f(-0.1), std::domain_error);
    CHECK_THROWS_AS(f(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(f(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("construction rejects malformed parameters") {
    CHECK_THROWS_AS(InfluenceFunction::rational(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(InfluenceFunction::rational(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(InfluenceFunction::gaussian(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(InfluenceFunction::tabulated({{0.0, 1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(InfluenceFunction::tabulated({{0.0, 1.0}, {0.0, 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(InfluenceFunction::tabulated({{0.5, 1.0}, {1.0, 0.5}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(InfluenceFunction::tabulated({{0.0, 1.0}, {1.0, -0.5}}),
                    std::invalid_argument);
}

TEST_CASE("Lipschitz constants hold on random pairs") {
    Rng rng(7);
    const InfluenceFunction kernels[] = {
        InfluenceFunction::rational(1.3, 1.0),
        InfluenceFunction::rational(0.8, 2.5),
        InfluenceFunction::gaussian(1.1, 0.7),
        InfluenceFunction::affine_cutoff(2.0, 0.5),
        InfluenceFunction::tabulated({{0.0, 1.0}, {0.5, 0.9}, {2.0, 0.3}, {4.0, 0.25}}),
    };
    for (const auto& f : kernels) {
        const double lip = f.lipschitz_const();
        for (int k = 0; k < 2000; ++k) {
            const double a = rng.uniform(0.0, 6.0);
            const double b = rng.uniform(0.0, 6.0);
            CHECK(std::abs(f(a) - f(b)) <= lip * std::abs(a - b) * (1.0 + 1e-12) + 1e-15);
        }
    }
    // rational beta=1 closed form: 3*sqrt(3)/8
    CHECK(InfluenceFunction::rational(1.0).lipschitz_const() ==
          doctest::Approx(3.0 * std::sqrt(3.0) / 8.0).epsilon(1e-12));
}

TEST_CASE("effective_speed_bound is a certified upper bound") {
    const auto f = InfluenceFunction::rational(1.0);
    const double s = effective_speed_bound(f, 10.0);
    // true sup of r/(1+r^2) is 0.5, attained at r = 1
    CHECK(s >= 0.5);
    CHECK(s <= 0.5 + 1e-5);
    // independent grid search agrees
    const double oracle = testutil::grid_speed_sup(f, 10.0);
    CHECK(s >= oracle);
    CHECK(s - oracle <= 1e-5);

    // zero kernel
    CHECK(effective_speed_bound(InfluenceFunction::rational(0.0), 5.0) == doctest::Approx(0.0));

    // constant psi = 1/2: sup psi(r)*r on [0,1] is 0.5 at r = 1
    const auto half = InfluenceFunction::affine_cutoff(0.5, 0.0);
    const double s_half = effective_speed_bound(half, 1.0);
    CHECK(s_half >= 0.5);
    CHECK(s_half <= 0.5 + 1e-5);
}

TEST_CASE("effective_speed_bound: monotone in r_max, exact for tabulated") {
    const auto f = InfluenceFunction::gaussian(1.0, 2.0);
    double prev = 0.0;
    for (double r_max : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double s = effective_speed_bound(f, r_max);
        // monotone for the true sup; each certified bound carries its own
        // grid slack, so compare up to the certification error
        CHECK(s >= prev - 2e-6);
        prev = s;
    }

    // tabulated: per-segment quadratic maximum, checked against dense search
    const auto tab = InfluenceFunction::tabulated({{0.0, 1.0}, {1.0, 0.8}, {3.0, 0.1}});
    const double s_tab = effective_speed_bound(tab, 3.0);
    const double oracle = testutil::grid_speed_sup(tab, 3.0, 2'000'000);
    CHECK(s_tab == doctest::Approx(oracle).epsilon(1e-9));
    CHECK(s_tab >= oracle - 1e-12);
}

TEST_CASE("validate_influence accepts subluminal kernels") {
    const auto f = InfluenceFunction::rational(1.0);
    const auto v = validate_influence(f, 1.0, 10.0);
    REQUIRE(v.ok);
    CHECK(v.cert.s == doctest::Approx(0.5).epsilon(1e-4));
    CHECK(v.cert.s < 1.0);
    CHECK(v.cert.psi_sup == doctest::Approx(1.0).epsilon(1e-4));
    CHECK(v.cert.r_max == 10.0);

    // accepted kernels satisfy psi(r)*r <= s on the validated range
    for (int k = 0; k <= 1000; ++k) {
        const double r = 10.0 * k / 1000.0;
        CHECK(f(r) * r <= v.cert.s * (1.0 + 1e-12));
    }
}

TEST_CASE("validate_influence rejects superluminal and degenerate kernels") {
    // sup psi(r)r = kappa/2 = 1 >= c
    const auto too_strong = InfluenceFunction::rational(2.0);
    const auto v1 = validate_influence(too_strong, 1.0, 10.0);
    CHECK_FALSE(v1.ok);
    CHECK(v1.reason.find("speed bound") != std::string::npos);
    CHECK(v1.violating_r == doctest::Approx(1.0).epsilon(1e-2));

    // zero kernel breaks positivity
    const auto zero = InfluenceFunction::rational(0.0);
    const auto v2 = validate_influence(zero, 1.0, 10.0);
    CHECK_FALSE(v2.ok);
    CHECK(v2.reason.find("positive") != std::string::npos);

    // cutoff inside the validated range breaks positivity there
    const auto cut = InfluenceFunction::affine_cutoff(1.0, 1.0);
    CHECK_FALSE(validate_influence(cut, 10.0, 2.0).ok);
    CHECK(validate_influence(cut, 10.0, 0.5).ok);

    CHECK_THROWS_AS(validate_influence(zero, -1.0, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(validate_influence(zero, 1.0, 0.0), std::invalid_argument);
}
