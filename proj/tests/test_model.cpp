#include "triadic/error.hpp"
#include "triadic/model.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <functional>

using namespace triadic;
using Catch::Approx;

namespace {

// Sign-change scan plus bisection, independent of the closed-form solver.
std::vector<double> bracketed_roots(const ModelParams& p) {
    std::vector<double> out;
    const int cells = 100000;
    double prev_x = 0.0;
    double prev_f = drift(prev_x, p);
    for (int k = 1; k <= cells; ++k) {
        const double x = static_cast<double>(k) / cells;
        const double f = drift(x, p);
        if ((prev_f < 0) != (f < 0)) {
            double lo = prev_x;
            double hi = x;
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                if ((drift(mid, p) < 0) == (drift(lo, p) < 0)) lo = mid;
                else hi = mid;
            }
            out.push_back(0.5 * (lo + hi));
        }
        prev_x = x;
        prev_f = f;
    }
    return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::Io;
}

}  // namespace

TEST_CASE("params validation rejects each invalid field") {
    CHECK(code_of([] { ModelParams::make(2, 0.1, 0.1, 0.1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { ModelParams::make(10, 0.0, 0.1, 0.1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { ModelParams::make(10, 0.1, 0.0, 0.1); }) == ErrorCode::InvalidArgument);
    CHECK(code_of([] { ModelParams::make(10, 0.1, 0.1, -0.1); }) == ErrorCode::InvalidArgument);
    CHECK_NOTHROW(ModelParams::make(3, 0.1, 0.1, 0.0));
}

TEST_CASE("derived rate scaling and pair count") {
    const auto p = ModelParams::make(30, 0.025, 0.25, 0.91);
    CHECK(p.c3_hat() == 0.91 / 28.0);
    CHECK(p.pair_count() == 435);
    CHECK(ModelParams::make(3, 1, 1, 1).pair_count() == 3);
}

TEST_CASE("drift and f ratio agree on the fixed points") {
    const auto p = bistable_params(30);
    for (double x : {0.1, 0.3, 0.6, 0.9}) {
        CHECK(drift(x, p) == Approx(p.c2 * x * (f_ratio(x, p) / x - 1.0)).margin(1e-15));
        const double h = 1e-6;
        CHECK(drift_derivative(x, p) == Approx((drift(x + h, p) - drift(x - h, p)) / (2 * h)).epsilon(1e-7));
    }
    CHECK(drift(0.0, p) == p.c1);
    CHECK(drift(1.0, p) == -p.c2);
}

TEST_CASE("bistable roots match the paper values and an independent bisection") {
    const auto roots = solve_cubic(bistable_params(30));
    REQUIRE(roots.regime == Regime::Bistable);
    REQUIRE(roots.roots.size() == 3);
    CHECK(roots.low() == Approx(0.17).margin(0.01));
    CHECK(roots.mid() == Approx(0.31).margin(0.01));
    CHECK(roots.high() == Approx(0.52).margin(0.01));
    const auto oracle = bracketed_roots(bistable_params(30));
    REQUIRE(oracle.size() == 3);
    for (int k = 0; k < 3; ++k) CHECK(roots.roots[static_cast<std::size_t>(k)] == Approx(oracle[static_cast<std::size_t>(k)]).margin(1e-12));
}

TEST_CASE("monostable root near three quarters") {
    const auto roots = solve_cubic(monostable_params(30));
    REQUIRE(roots.regime == Regime::Monostable);
    REQUIRE(roots.roots.size() == 1);
    CHECK(roots.roots[0] == Approx(0.75).margin(0.01));
    CHECK(std::fabs(drift(roots.roots[0], monostable_params(30))) < 1e-14);
}

TEST_CASE("roots agree with bisection over a parameter sweep") {
    for (double c1 : {0.01, 0.025, 0.05, 0.2}) {
        for (double c2 : {0.1, 0.25, 0.5}) {
            for (double c3 : {0.0, 0.3, 0.91, 2.0, 5.0}) {
                const auto p = ModelParams::make(10, c1, c2, c3);
                const auto oracle = bracketed_roots(p);
                const auto roots = solve_cubic(p, DegeneratePolicy::TreatAsMonostable);
                REQUIRE(roots.roots.size() == oracle.size());
                for (std::size_t k = 0; k < oracle.size(); ++k) CHECK(roots.roots[k] == Approx(oracle[k]).margin(1e-10));
                CHECK(roots.regime == (oracle.size() == 3 ? Regime::Bistable : Regime::Monostable));
            }
        }
    }
}

TEST_CASE("c3 = 0 gives the linear fixed point") {
    const auto roots = solve_cubic(ModelParams::make(10, 0.3, 0.7, 0.0));
    REQUIRE(roots.roots.size() == 1);
    CHECK(roots.roots[0] == Approx(0.3).margin(1e-15));
}

TEST_CASE("repeated roots are rejected unless the caller opts in") {
    // drift has a double root at 1/4 and a simple root at 1/2.
    const auto touch_low = ModelParams::make(10, 0.03125, 0.28125, 1.0);
    CHECK(code_of([&] { solve_cubic(touch_low); }) == ErrorCode::DegenerateRegime);
    const auto kept = solve_cubic(touch_low, DegeneratePolicy::TreatAsMonostable);
    REQUIRE(kept.roots.size() == 1);
    CHECK(kept.regime == Regime::Monostable);
    CHECK(kept.roots[0] == Approx(0.5).margin(1e-12));

    // Double root at 3/8 and simple root at 1/4.
    const auto touch_high = ModelParams::make(10, 0.03515625, 0.29296875, 1.0);
    CHECK(code_of([&] { solve_cubic(touch_high); }) == ErrorCode::DegenerateRegime);
    const auto kept2 = solve_cubic(touch_high, DegeneratePolicy::TreatAsMonostable);
    REQUIRE(kept2.roots.size() == 1);
    CHECK(kept2.roots[0] == Approx(0.25).margin(1e-12));
}

TEST_CASE("stability of the bistable fixed points") {
    const auto p = bistable_params(30);
    const auto r = solve_cubic(p);
    CHECK(drift_derivative(r.low(), p) < 0);
    CHECK(drift_derivative(r.mid(), p) > 0);
    CHECK(drift_derivative(r.high(), p) < 0);
    CHECK(drift(0.5 * (r.low() + r.mid()), p) < 0);
    CHECK(drift(0.5 * (r.mid() + r.high()), p) > 0);
}
