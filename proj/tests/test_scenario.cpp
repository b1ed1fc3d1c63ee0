#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "hkc/analysis.hpp"
#include "hkc/scenario.hpp"

using namespace hkc;

TEST_CASE("constant_history: zero-speed paths in C_s") {
    const auto cert = testutil::make_cert(InfluenceFunction::rational(1.0), 1.0, 12.0);

    const auto datum = constant_history({Vec{0.0}, Vec{1.0}}, 1.0, cert);
    CHECK(datum.S0 == doctest::Approx(1.0 / (1.0 - cert.s)).epsilon(1e-9));
    CHECK(datum.trajectories[0].first_sample_time() == doctest::Approx(-datum.S0));
    CHECK(datum.trajectories[0].eval_at(-datum.S0 / 2)[0] == 0.0);

    // single cluster: empty window
    const auto point = constant_history({Vec{2.0}, Vec{2.0}}, 1.0, cert);
    CHECK(point.S0 == 0.0);
    CHECK(point.trajectories[0].size() == 1);

    const auto plane = constant_history({Vec{0.0, 0.0}, Vec{3.0, 4.0}}, 1.0, cert);
    CHECK(plane.S0 == doctest::Approx(5.0 / (1.0 - cert.s)).epsilon(1e-9));
}

TEST_CASE("linear_history: admissible velocities only") {
    const auto cert = testutil::make_cert(InfluenceFunction::rational(1.0), 1.0, 12.0);
    const double s = cert.s;

    const auto still = linear_history({Vec{0.0}, Vec{1.0}}, {Vec{0.0}, Vec{0.0}}, 1.0, cert);
    const auto same = constant_history({Vec{0.0}, Vec{1.0}}, 1.0, cert);
    CHECK(still.trajectories[1].eval_at(-0.5)[0] ==
          doctest::Approx(same.trajectories[1].eval_at(-0.5)[0]));

    // |v| = s is an admissible boundary case
    CHECK_NOTHROW(linear_history({Vec{1.0}, Vec{-1.0}}, {Vec{s}, Vec{-s}}, 1.0, cert));
    CHECK_THROWS_AS(linear_history({Vec{1.0}, Vec{-1.0}}, {Vec{1.1 * s}, Vec{0.0}}, 1.0, cert),
                    std::invalid_argument);
}

TEST_CASE("random_lipschitz_history: reproducible, admissible, bounded") {
    const auto cert = testutil::make_cert(InfluenceFunction::rational(1.0), 1.5, 14.0);

    const auto a = random_lipschitz_history(123, 10, 2, 5.0, 1.5, cert);
    const auto b = random_lipschitz_history(123, 10, 2, 5.0, 1.5, cert);
    REQUIRE(a.trajectories.size() == 10);
    for (std::size_t i = 0; i < 10; ++i) {
        REQUIRE(a.trajectories[i].size() == b.trajectories[i].size());
        for (std::size_t k = 0; k < a.trajectories[i].size(); ++k) {
            CHECK(a.trajectories[i].sample_time(k) == b.trajectories[i].sample_time(k));
            CHECK(dist(a.trajectories[i].sample_value(k), b.trajectories[i].sample_value(k)) ==
                  0.0);
        }
    }

    // construction passes the Lipschitz gate by construction (0.9*s cap),
    // and the excursion bound R_x^0 <= box_radius + 0.9*s*S0 holds
    const double r0 = radius_over_window(a.trajectories);
    CHECK(r0 <= 5.0 + 0.9 * cert.s * a.S0 + 1e-9);
    for (const auto& traj : a.trajectories) CHECK(norm(traj.frontier_value()) <= 5.0);

    const auto c = random_lipschitz_history(124, 10, 2, 5.0, 1.5, cert);
    bool differs = false;
    for (std::size_t i = 0; i < 10 && !differs; ++i)
        differs = dist(c.trajectories[i].frontier_value(), a.trajectories[i].frontier_value()) >
                  1e-12;
    CHECK(differs);
}

TEST_CASE("symmetric_pair_scalar: equilibrium datum stays at zero") {
    const auto cert = testutil::make_cert(InfluenceFunction::rational(1.0), 1.0, 8.0);
    const Trajectory zero(0.0, Vec{0.0}, cert.s);
    const auto result = symmetric_pair_scalar(zero, 1.0, 0.01, 1.0, cert);
    REQUIRE(result.ok);
    for (const auto& step : result.steps) CHECK(step.x == 0.0);
}

TEST_CASE("symmetric_pair_scalar: |x| decays toward zero, sign identity holds") {
    const auto cert = testutil::make_cert(InfluenceFunction::rational(1.0), 2.0, 12.0);
    const double S0 = 2.0 * 1.0 / (2.0 - cert.s);
    const Trajectory datum({-S0, 0.0}, {Vec{1.0}, Vec{1.0}}, cert.s);
    const auto result = symmetric_pair_scalar(datum, 8.0, 0.01, 2.0, cert);
    REQUIRE(result.ok);

    double prev = std::abs(result.steps.front().x);
    CHECK(prev == doctest::Approx(1.0));
    for (std::size_t k = 1; k < result.steps.size(); ++k) {
        const double cur = std::abs(result.steps[k].x);
        CHECK(cur <= prev + 1e-12);
        prev = cur;
    }
    CHECK(std::abs(result.steps.back().x) < 0.05);

    for (const auto& step : result.steps) {
        const double sum = step.x + step.x_retarded;
        if (std::abs(step.x) > 1e-12) CHECK(sum * step.x >= 0.0);
    }
}

TEST_CASE("symmetric_pair_scalar agrees with the full two-agent engine") {
    const auto cert = testutil::make_cert(InfluenceFunction::rational(1.0), 2.0, 12.0);
    const double c = 2.0;
    const double x0 = 0.8;
    const double S0 = 2.0 * x0 / (c - cert.s);
    const Trajectory datum({-S0, 0.0}, {Vec{x0}, Vec{x0}}, cert.s);

    const auto scalar = symmetric_pair_scalar(datum, 1.0, 0.005, c, cert, Scheme::heun);
    REQUIRE(scalar.ok);

    const auto pair_datum = constant_history({Vec{x0}, Vec{-x0}}, c, cert);
    auto state = SystemState::create(pair_datum.trajectories, c, cert);
    IntegrateOptions opts;
    opts.scheme = Scheme::heun;
    const auto full = integrate(state, 1.0, 0.005, opts);
    REQUIRE(full.ok);
    REQUIRE(full.trace.rows() == scalar.trace.rows());

    double gap = 0.0;
    for (std::size_t row = 0; row < full.trace.rows(); ++row)
        gap = std::max(gap, std::abs(full.trace.positions[row][0][0] -
                                     scalar.trace.positions[row][0][0]));
    CHECK(gap <= 1e-12);
}
