#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "hkc/errors.hpp"
#include "hkc/trajectory.hpp"

using namespace hkc;

TEST_CASE("eval_at: interpolation and node exactness") {
    const Trajectory line({0.0, 1.0}, {Vec{0.0}, Vec{1.0}}, 1.0);
    CHECK(line.eval_at(0.5)[0] == doctest::Approx(0.5).epsilon(1e-15));

    const Trajectory plane({0.0, 2.0}, {Vec{0.0, 0.0}, Vec{2.0, 0.0}}, 1.0);
    const Vec end = plane.eval_at(2.0);
    CHECK(end[0] == 2.0);
    CHECK(end[1] == 0.0);

    const Trajectory flat({-1.0, 0.0}, {Vec{3.0}, Vec{3.0}}, 0.5);
    CHECK(flat.eval_at(-0.25)[0] == doctest::Approx(3.0));
}

TEST_CASE("eval_at: out-of-window queries error") {
    const Trajectory traj({-1.0, 0.0}, {Vec{0.0}, Vec{0.5}}, 0.5);
    CHECK_THROWS_AS(traj.eval_at(-2.0), OutOfWindowError);
    CHECK_THROWS_AS(traj.eval_at(0.5), OutOfWindowError);
    CHECK_NOTHROW(traj.eval_at(-1.0));
    CHECK_NOTHROW(traj.eval_at(0.0));
}

TEST_CASE("extrapolate_at: linear extension with slope clamp") {
    const Trajectory traj({0.0, 1.0}, {Vec{-0.3}, Vec{0.0}}, 0.5);
    CHECK(traj.extrapolate_at(1.1, Vec{0.3})[0] == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(traj.extrapolate_at(7.0, Vec{0.0})[0] == doctest::Approx(0.0));

    const Trajectory pt(0.0, Vec{1.0, 1.0}, 0.2);
    const Vec v = pt.extrapolate_at(0.5, Vec{0.1, 0.0});
    CHECK(v[0] == doctest::Approx(1.05));
    CHECK(v[1] == doctest::Approx(1.0));

    CHECK_THROWS_AS(pt.extrapolate_at(0.5, Vec{0.3, 0.0}), ContractViolation);
    CHECK_THROWS_AS(pt.extrapolate_at(0.5, Vec{0.1}), ContractViolation);
}

TEST_CASE("append_segment: extends within the Lipschitz class") {
    Trajectory traj(0.0, Vec{0.0}, 0.5);
    traj.append_segment(1.0, Vec{0.5});
    CHECK(traj.eval_at(1.0)[0] == 0.5);  // exact at the new node
    CHECK(traj.frontier_time() == 1.0);

    CHECK_THROWS_AS(traj.append_segment(2.0, Vec{1.2}), ContractViolation);  // too fast
    CHECK_THROWS_AS(traj.append_segment(0.5, Vec{0.4}), ContractViolation);  // backwards
    CHECK_THROWS_AS(traj.append_segment(2.0, Vec{0.4, 0.0}), ContractViolation);

    // boundary case: exactly at the bound passes
    traj.append_segment(2.0, Vec{1.0});
    CHECK(traj.frontier_value()[0] == 1.0);
}

TEST_CASE("construction validates ordering and the Lipschitz bound") {
    CHECK_THROWS_AS(Trajectory({0.0, 0.0}, {Vec{0.0}, Vec{0.0}}, 1.0), ContractViolation);
    CHECK_THROWS_AS(Trajectory({1.0, 0.0}, {Vec{0.0}, Vec{0.0}}, 1.0), ContractViolation);
    CHECK_THROWS_AS(Trajectory({0.0, 1.0}, {Vec{0.0}, Vec{2.0}}, 1.0), ContractViolation);
    CHECK_THROWS_AS(Trajectory({0.0, 1.0}, {Vec{0.0}, Vec{0.0, 0.0}}, 1.0), ContractViolation);
    CHECK_THROWS_AS(Trajectory({0.0}, {Vec{}}, 1.0), ContractViolation);
}

TEST_CASE("prune_before keeps evaluation intact at and after the cut") {
    Rng rng(42);
    const auto h = testutil::random_history(rng, 2, 0.8, 0.0, 4.0, 32);
    Trajectory traj(h.times, h.points, 0.8);

    Trajectory pruned = traj;
    pruned.prune_before(-1.7);
    CHECK(pruned.window_start() == doctest::Approx(-1.7));
    for (int k = 0; k <= 100; ++k) {
        const double t = -1.7 + 1.7 * k / 100.0;
        const Vec a = traj.eval_at(t);
        const Vec b = pruned.eval_at(t);
        CHECK(dist(a, b) == 0.0);
    }
    CHECK_NOTHROW(pruned.eval_at(-1.7));
    CHECK_THROWS_AS(pruned.eval_at(-2.5), OutOfWindowError);
    CHECK_THROWS_AS(pruned.prune_before(1.0), ContractViolation);
}

TEST_CASE("interpolation stays in the Lipschitz class (random queries)") {
    Rng rng(99);
    for (int rep = 0; rep < 20; ++rep) {
        const double s = rng.uniform(0.1, 2.0);
        const auto h = testutil::random_history(rng, 3, s, 0.0, 5.0, 24);
        const Trajectory traj(h.times, h.points, s);
        for (int k = 0; k < 200; ++k) {
            double a = rng.uniform(-5.0, 0.0);
            double b = rng.uniform(-5.0, 0.0);
            if (a > b) std::swap(a, b);
            const double gap = dist(traj.eval_at(a), traj.eval_at(b));
            CHECK(gap <= s * (b - a) * (1.0 + 1e-9) + 1e-12);
        }
    }
}
