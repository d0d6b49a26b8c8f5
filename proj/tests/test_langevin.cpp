#include "triadic/error.hpp"
#include "triadic/langevin.hpp"
#include "triadic/ode.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

using namespace triadic;
using Catch::Approx;

namespace {

// Observed order from errors at h, h/2, h/4.
double observed_order(double e1, double e2) { return std::log2(e1 / e2); }

}  // namespace

TEST_CASE("sde drift is the model drift") {
    const SdeSpec spec{bistable_params(30), true};
    for (int k = 0; k <= 100; ++k) {
        const double y = k / 100.0;
        CHECK(spec.drift(y) == drift(y, spec.params));
    }
}

TEST_CASE("diffusion is the sum of the three channel variances") {
    const auto p = bistable_params(30);
    const SdeSpec spec{p, true};
    for (int k = 0; k <= 20; ++k) {
        const double y = k / 20.0;
        const double channels = p.c1 * (1 - y) / 435 + p.c2 * y / 435 + p.c3 * (1 - y) * y * y / 435;
        CHECK(spec.diffusion_sq(y) == Approx(channels).epsilon(1e-14));
        CHECK(spec.diffusion_sq(y) > 0);
    }
    CHECK(SdeSpec{p, false}.diffusion_sq(0.3) == 0.0);
    CHECK(spec.max_stable_step() == 1.0 / (p.c1 + p.c2 + p.c3));
}

TEST_CASE("per-step increment variance matches sigma^2 dt") {
    const SdeSpec spec{bistable_params(30), true};
    const double y = 0.4, dt = 0.01;
    Rng rng(3);
    const int draws = 1000000;
    double sum = 0, sum_sq = 0;
    for (int k = 0; k < draws; ++k) {
        const double inc = em_increment(spec, y, dt, rng);
        sum += inc;
        sum_sq += inc * inc;
    }
    const double mean = sum / draws;
    const double var = sum_sq / draws - mean * mean;
    CHECK(var == Approx(spec.diffusion_sq(y) * dt).epsilon(0.01));
    CHECK(mean == Approx(spec.drift(y) * dt).margin(4 * std::sqrt(spec.diffusion_sq(y) * dt / draws)));
}

TEST_CASE("folding maps back into the unit interval") {
    CHECK(fold_into_unit(0.3) == 0.3);
    CHECK(fold_into_unit(-0.1) == Approx(0.1));
    CHECK(fold_into_unit(1.2) == Approx(0.8));
    CHECK(fold_into_unit(2.5) == Approx(0.5));
    CHECK(fold_into_unit(-1.7) == Approx(0.3));
}

TEST_CASE("noise-free symmetric case sits at its fixed point") {
    const SdeSpec spec{ModelParams::make(30, 0.3, 0.3, 0.0), false};
    const auto path = em_path(spec, 0.5, 50.0, {}, 1);
    for (double v : path.trace.values) CHECK(v == 0.5);
}

TEST_CASE("em argument checks and step guard") {
    const SdeSpec spec{bistable_params(30), true};
    EmOptions big;
    big.dt = 1.0;
    CHECK_THROWS_AS(em_path(spec, 0.2, 10.0, big, 1), Error);
    big.force_step = true;
    CHECK_NOTHROW(em_path(spec, 0.2, 10.0, big, 1));
    CHECK_THROWS_AS(em_path(spec, 1.2, 10.0, {}, 1), Error);
    EmOptions zero;
    zero.dt = 0.0;
    CHECK_THROWS_AS(em_path(spec, 0.2, 10.0, zero, 1), Error);
}

TEST_CASE("em path recording and determinism") {
    const SdeSpec spec{bistable_params(30), true};
    EmOptions opt;
    opt.record_every = 10;
    const auto a = em_path(spec, 0.2, 5.0, opt, 9);
    const auto b = em_path(spec, 0.2, 5.0, opt, 9);
    CHECK(a.trace.values == b.trace.values);
    REQUIRE(a.trace.size() == 51);
    CHECK(a.trace.times.back() == 5.0);
    CHECK(a.trace.times[1] == Approx(0.1));

    const auto one = em_ensemble_mean(spec, 0.2, 5.0, opt, 40, 4, 1);
    const auto many = em_ensemble_mean(spec, 0.2, 5.0, opt, 40, 4, 3);
    CHECK(one.mean.values == many.mean.values);
    CHECK(one.mean.times == a.trace.times);
}

TEST_CASE("monostable ensemble settles at the root") {
    const SdeSpec spec{monostable_params(100), true};
    const int paths = 1000;
    double sum = 0, sum_sq = 0;
    for (int k = 0; k < paths; ++k) {
        EmOptions opt;
        opt.record_every = 100000;
        const double y = em_path(spec, 0.2, 200.0, opt, stream_seed(5, static_cast<std::uint64_t>(k))).trace.values.back();
        sum += y;
        sum_sq += y * y;
    }
    const double mean = sum / paths;
    const double se = std::sqrt((sum_sq / paths - mean * mean) / (paths - 1));
    const double root = solve_cubic(spec.params).roots[0];
    CHECK(std::fabs(root - 0.75) <= 0.01);
    CHECK(std::fabs(mean - root) <= 3 * se);
}

TEST_CASE("ensemble mean tracks the ODE at short times") {
    const SdeSpec spec{bistable_params(100), true};
    EmOptions opt;
    const auto ens = em_ensemble_mean(spec, 0.25, 1.0, opt, 2000, 12, 4);
    const double ode = integrate(spec.params, 0.25, 1.0, 0.01).trace.values.back();

    // Spread of single paths at t = 1 for the standard error.
    double sum = 0, sum_sq = 0;
    for (int k = 0; k < 2000; ++k) {
        const double y = em_path(spec, 0.25, 1.0, opt, stream_seed(12, static_cast<std::uint64_t>(k))).trace.values.back();
        sum += y;
        sum_sq += y * y;
    }
    const double mean = sum / 2000;
    CHECK(mean == Approx(ens.mean.values.back()).epsilon(1e-12));
    const double se = std::sqrt((sum_sq / 2000 - mean * mean) / 1999);
    // Weak error of EM is O(dt); the mean of a nonlinear drift adds O(sigma^2 t).
    double bias = 0;
    for (int k = 0; k <= 100; ++k) {
        const double y = k / 100.0;
        bias = std::max(bias, std::fabs(spec.drift(y) * drift_derivative(y, spec.params)));
    }
    const double bound = 3 * se + opt.dt * bias + spec.diffusion_sq(0.5) * 2 * spec.params.c3;
    CHECK(std::fabs(mean - ode) <= bound);
}

TEST_CASE("mfpt for pure diffusion") {
    const double s2 = 0.3, b = 0.8;
    auto exact = [&](double x) { return (b * b - x * x) / s2; };
    auto zero = [](double) { return 0.0; };
    auto diff = [&](double) { return s2; };
    const auto sol = solve_mfpt(zero, diff, MfptProblem::reach_upper(b, 2048));
    REQUIRE(sol.x.size() == 2048);
    for (std::size_t k = 0; k + 1 < sol.x.size(); ++k) {
        CHECK(sol.T[k] == Approx(exact(sol.x[k])).epsilon(1e-4));
    }
    CHECK(sol.T.back() == 0.0);

    // Interval count doubles (M = 2^k + 1). The query sits a third of a
    // coarse cell past a node, so it stays at 1/3 or 2/3 of a cell.
    const double q = 0.3 + b / 64 / 3;
    double errors[3];
    for (int k = 0; k < 3; ++k) {
        const std::size_t m = (std::size_t{64} << k) + 1;
        errors[k] = std::fabs(solve_mfpt(zero, diff, MfptProblem::reach_upper(b, m)).at(q) - exact(q));
    }
    CHECK(observed_order(errors[0], errors[1]) >= 1.9);
    CHECK(observed_order(errors[1], errors[2]) >= 1.9);
}

TEST_CASE("mfpt with constant drift against the closed form") {
    const double m = 0.5, s = 0.2, b = 1.0;
    auto exact = [&](double x) { return (b - x) / m - s / (2 * m * m) * (std::exp(-2 * m * x / s) - std::exp(-2 * m * b / s)); };
    auto drift_up = [&](double) { return m; };
    auto diff = [&](double) { return s; };

    double errors[3];
    for (int k = 0; k < 3; ++k) {
        const std::size_t points = (std::size_t{128} << k) + 1;
        const auto sol = solve_mfpt(drift_up, diff, MfptProblem::reach_upper(b, points));
        double worst = 0;
        for (std::size_t j = 0; j < sol.x.size(); ++j) worst = std::max(worst, std::fabs(sol.T[j] - exact(sol.x[j])));
        errors[k] = worst;
    }
    CHECK(errors[2] / exact(0.0) <= 1e-4);
    CHECK(observed_order(errors[0], errors[1]) >= 1.9);
    CHECK(observed_order(errors[1], errors[2]) >= 1.9);

    // Mirror image: drift toward 0, absorb at 0, reflect at 1.
    auto drift_down = [&](double) { return -m; };
    const auto mirror = solve_mfpt(drift_down, diff, {0.0, 1.0, BoundaryKind::AbsorbLeftReflectRight, 2049});
    for (std::size_t j = 0; j < mirror.x.size(); j += 64) {
        CHECK(mirror.T[j] == Approx(exact(1.0 - mirror.x[j])).epsilon(1e-4).margin(1e-9));
    }
}

TEST_CASE("bistable mfpt is positive and decreases toward the absorbing end") {
    const auto roots = solve_cubic(bistable_params(30));
    for (int n : {30, 80}) {
        const SdeSpec spec{bistable_params(n), true};
        const auto up = solve_mfpt(spec, MfptProblem::reach_upper(roots.mid(), 2048));
        for (std::size_t k = 0; k + 1 < up.T.size(); ++k) {
            CHECK(up.T[k] > 0);
            CHECK(up.T[k] >= up.T[k + 1]);
        }
        const auto down = solve_mfpt(spec, MfptProblem::reach_lower(roots.mid(), 2048));
        for (std::size_t k = 1; k < down.T.size(); ++k) {
            CHECK(down.T[k] > 0);
            CHECK(down.T[k] >= down.T[k - 1]);
        }
    }
    const SdeSpec big{bistable_params(80), true};
    CHECK(solve_mfpt(big, MfptProblem::reach_lower(roots.mid(), 2048)).upwinded_nodes > 0);
}

TEST_CASE("mfpt grid refinement changes the answer very little") {
    const auto roots = solve_cubic(bistable_params(30));
    const SdeSpec spec{bistable_params(50), true};
    const double coarse = solve_mfpt(spec, MfptProblem::reach_upper(roots.mid(), 2048)).at(roots.low());
    const double fine = solve_mfpt(spec, MfptProblem::reach_upper(roots.mid(), 4096)).at(roots.low());
    CHECK(std::fabs(coarse - fine) <= 1e-3 * fine);
}

TEST_CASE("mfpt matches Monte Carlo hitting times of the EM scheme") {
    const auto params = bistable_params(30);
    const auto roots = solve_cubic(params);
    const SdeSpec spec{params, true};
    const double predicted = solve_mfpt(spec, MfptProblem::reach_upper(roots.mid(), 2048)).at(roots.low());
    const int paths = 1000;
    const double dt = 0.01;
    double sum = 0, sum_sq = 0;
    for (int k = 0; k < paths; ++k) {
        Rng rng(stream_seed(21, static_cast<std::uint64_t>(k)));
        std::size_t refl = 0;
        double y = roots.low(), t = 0;
        while (y < roots.mid()) {
            y = em_step(spec, y, dt, rng, refl);
            t += dt;
        }
        sum += t;
        sum_sq += t * t;
    }
    const double mean = sum / paths;
    const double se = std::sqrt((sum_sq / paths - mean * mean) / (paths - 1));
    INFO("mfpt " << predicted << " monte carlo " << mean << " +- " << se);
    CHECK(std::fabs(mean - predicted) <= 3 * se);
}

TEST_CASE("mfpt argument checks") {
    auto one = [](double) { return 1.0; };
    CHECK_THROWS_AS(solve_mfpt(one, one, {0.5, 0.4, BoundaryKind::ReflectLeftAbsorbRight, 100}), Error);
    CHECK_THROWS_AS(solve_mfpt(one, one, {0.0, 1.0, BoundaryKind::ReflectLeftAbsorbRight, 2}), Error);
    auto none = [](double) { return 0.0; };
    try {
        solve_mfpt(one, none, MfptProblem::reach_upper(0.5, 100));
        FAIL("expected singular system");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularSystem);
    }
    const auto sol = solve_mfpt(none, one, MfptProblem::reach_upper(0.5, 11));
    CHECK_THROWS_AS(sol.at(0.6), Error);
    CHECK_THROWS_AS(sde_transition_times(monostable_params(30), solve_cubic(monostable_params(30)), 100), Error);
}
