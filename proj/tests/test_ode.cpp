#include "triadic/error.hpp"
#include "triadic/ode.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace triadic;
using Catch::Approx;

TEST_CASE("fixed points are preserved") {
    for (const auto& p : {bistable_params(30), monostable_params(30)}) {
        for (double root : solve_cubic(p).roots) {
            const auto run = integrate(p, root, 100.0, 0.1);
            for (double v : run.trace.values) CHECK(std::fabs(v - root) <= 1e-10);
            const auto mf = mean_field_euler(p, root, 50);
            for (double v : mf.values) CHECK(std::fabs(v - root) <= 1e-10);
        }
    }
}

TEST_CASE("monostable trace converges to the root") {
    const auto p = monostable_params(30);
    const double root = solve_cubic(p).roots.at(0);
    CHECK(root == Approx(0.75).margin(0.01));
    const auto run = integrate(p, 0.2, 200.0, 0.01);
    CHECK(run.trace.values.back() == Approx(root).margin(1e-3));
    CHECK(run.halving_gap <= kOdeHalvingTolerance);
    CHECK(run.trace.times.back() == 200.0);
    for (std::size_t k = 1; k < run.trace.size(); ++k) CHECK(run.trace.values[k] >= run.trace.values[k - 1]);
    const auto mf = mean_field_euler(p, 0.2, 200);
    CHECK(mf.values.back() == Approx(root).margin(1e-3));
    CHECK_FALSE(mf.first_exit.has_value());
}

TEST_CASE("the middle root separates the basins") {
    const auto p = bistable_params(30);
    const auto r = solve_cubic(p);
    CHECK(integrate(p, 0.25, 500.0, 0.01).trace.values.back() == Approx(r.low()).margin(1e-8));
    CHECK(integrate(p, 0.35, 500.0, 0.01).trace.values.back() == Approx(r.high()).margin(1e-8));
    const auto mf = mean_field_euler(p, 0.2, 2000);
    for (double v : mf.values) CHECK(v < r.mid());
    CHECK(mf.values.back() == Approx(r.low()).margin(1e-8));
}

TEST_CASE("traces stay inside the unit interval and are monotone") {
    const auto p = bistable_params(30);
    for (double y0 : {0.0, 0.1, 0.3, 0.5, 0.9, 1.0}) {
        const auto run = integrate(p, y0, 300.0, 0.05, 10);
        const double sign = drift(y0, p) >= 0 ? 1.0 : -1.0;
        for (std::size_t k = 0; k < run.trace.size(); ++k) {
            CHECK((run.trace.values[k] >= 0.0 && run.trace.values[k] <= 1.0));
            if (k) CHECK(sign * (run.trace.values[k] - run.trace.values[k - 1]) >= -1e-15);
        }
    }
}

TEST_CASE("long runs settle on the cubic roots") {
    for (const auto& p : {bistable_params(30), monostable_params(30), ModelParams::make(10, 0.05, 0.4, 2.5)}) {
        const auto roots = solve_cubic(p).roots;
        for (double y0 : {0.01, 0.2, 0.4, 0.6, 0.99}) {
            const double end = integrate(p, y0, 2000.0, 0.05).trace.values.back();
            CHECK(std::fabs(drift(end, p)) <= 1e-8);
            double nearest = 1;
            for (double r : roots) nearest = std::min(nearest, std::fabs(end - r));
            CHECK(nearest <= 1e-7);
        }
    }
}

TEST_CASE("unit-step Euler overshoot is flagged, not clamped") {
    const auto p = ModelParams::make(10, 3.0, 0.5, 0.0);
    const auto run = mean_field_euler(p, 0.0, 5);
    REQUIRE(run.first_exit.has_value());
    CHECK(*run.first_exit == 1);
    CHECK(run.values[1] == 3.0);
}

TEST_CASE("ode argument checks") {
    const auto p = bistable_params(30);
    CHECK_THROWS_AS(integrate(p, 0.2, 10.0, 0.0), Error);
    CHECK_THROWS_AS(integrate(p, 0.2, 10.0, -1.0), Error);
    CHECK_THROWS_AS(integrate(p, 1.5, 10.0, 0.1), Error);
    CHECK_THROWS_AS(mean_field_euler(p, -0.1, 3), Error);
}
