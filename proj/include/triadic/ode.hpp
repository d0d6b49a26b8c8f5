#pragma once

#include "triadic/model.hpp"
#include "triadic/path_record.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace triadic {

/// Reaction-rate ODE dy/dt = drift(y), classical RK4.
struct OdeRun {
    double y0 = 0.0;
    double t_end = 0.0;
    double step = 0.0;       // step actually used
    PathRecord trace;
    double halving_gap = 0.0;  // |y(t_end) - y_half-step(t_end)|
};

/// Terminal agreement required between a run and its half-step rerun.
inline constexpr double kOdeHalvingTolerance = 1e-8;

/// Integrates with `step`, halving it until the terminal value agrees with a
/// half-step rerun to kOdeHalvingTolerance. Records every `record_every`
/// steps plus the terminal point.
OdeRun integrate(const ModelParams& params, double y0, double t_end, double step,
                 std::size_t record_every = 1);

/// y <- y + drift(y) with unit step.
struct MeanFieldRun {
    std::vector<double> values;  // n_steps + 1 entries, never clamped
    /// First iterate that left [0, 1], if any.
    std::optional<std::size_t> first_exit;
};

MeanFieldRun mean_field_euler(const ModelParams& params, double y0, std::size_t n_steps);

}  // namespace triadic
