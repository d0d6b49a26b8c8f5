#pragma once

// Chemical Langevin approximation of the edge density,
//
//   dy = mu(y) dt + sigma(y) dW,
//   mu(y)      = c1 (1 - y) - c2 y + c3 (1 - y) y^2,
//   sigma^2(y) = (c1 (1 - y) + c2 y + c3 (1 - y) y^2) / N,
//
// and the mean-first-passage-time problem mu T' + sigma^2 T'' / 2 = -1.

#include "triadic/model.hpp"
#include "triadic/path_record.hpp"
#include "triadic/rng.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace triadic {

struct SdeSpec {
    ModelParams params;
    /// false drops the noise term (infinite-N limit).
    bool noise = true;

    [[nodiscard]] double drift(double y) const { return triadic::drift(y, params); }
    [[nodiscard]] double diffusion_sq(double y) const;

    /// Largest step accepted without force: 1 / (c1 + c2 + c3).
    [[nodiscard]] double max_stable_step() const;
};

struct EmOptions {
    double dt = 0.01;
    std::size_t record_every = 1;
    /// Accept dt >= max_stable_step().
    bool force_step = false;
};

struct EmPath {
    PathRecord trace;
    std::size_t reflections = 0;
};

/// Maps a point outside [0, 1] back by mirror folding at the ends.
double fold_into_unit(double y);

/// Raw Euler-Maruyama increment mu(y) dt + sqrt(sigma^2(y) dt) Z. The three
/// independent noise channels sum to one Gaussian of variance sigma^2 dt.
double em_increment(const SdeSpec& spec, double y, double dt, Rng& rng);

/// One step including reflection; bumps `reflections` when folding happened.
double em_step(const SdeSpec& spec, double y, double dt, Rng& rng, std::size_t& reflections);

/// Euler-Maruyama path from y0 recorded every `record_every` steps. Throws
/// Error(InvalidArgument) for y0 outside [0,1], dt <= 0, or an unforced dt
/// at or above the stability guard.
EmPath em_path(const SdeSpec& spec, double y0, double t_end, const EmOptions& options, std::uint64_t seed);

/// Mean over n_paths independent paths on the common step grid.
struct EmEnsemble {
    PathRecord mean;
    std::size_t reflections = 0;
};
EmEnsemble em_ensemble_mean(const SdeSpec& spec, double y0, double t_end, const EmOptions& options,
                            std::size_t n_paths, std::uint64_t seed, unsigned threads = 1);

enum class BoundaryKind {
    ReflectLeftAbsorbRight,  // T'(a) = 0, T(b) = 0
    AbsorbLeftReflectRight,  // T(a) = 0, T'(b) = 0
};

struct MfptProblem {
    double a = 0.0;
    double b = 1.0;
    BoundaryKind kind = BoundaryKind::ReflectLeftAbsorbRight;
    std::size_t grid_points = 2048;

    /// Reflect at 0, absorb at b.
    static MfptProblem reach_upper(double b, std::size_t grid_points) {
        return {0.0, b, BoundaryKind::ReflectLeftAbsorbRight, grid_points};
    }
    /// Absorb at a, reflect at 1.
    static MfptProblem reach_lower(double a, std::size_t grid_points) {
        return {a, 1.0, BoundaryKind::AbsorbLeftReflectRight, grid_points};
    }

    void validate() const;
};

struct MfptSolution {
    std::vector<double> x;
    std::vector<double> T;
    /// Nodes where the drift term switched to first-order upwinding.
    std::size_t upwinded_nodes = 0;

    /// Linear interpolation of T between grid nodes.
    [[nodiscard]] double at(double y) const;
};

using Coefficient = std::function<double(double)>;

/// Finite-difference solve on a uniform grid of grid_points nodes spanning
/// [a, b]. Central differences, switching the drift term to upwinding at
/// nodes whose cell Peclet number |mu| h / (sigma^2 / 2) exceeds 2. The
/// reflecting end uses the second-order one-sided stencil.
MfptSolution solve_mfpt(const Coefficient& drift, const Coefficient& diffusion_sq, const MfptProblem& problem);
MfptSolution solve_mfpt(const SdeSpec& spec, const MfptProblem& problem);

/// Mean passage times of the Langevin process between the peaks and the
/// trough, in the same layout as the macroscale transition table.
struct SdeTransitionRow {
    int n = 0;
    double tau_low_to_mid = 0.0;
    double tau_high_to_mid = 0.0;
    double ratio = 0.0;
};
SdeTransitionRow sde_transition_times(const ModelParams& params, const CubicRoots& roots,
                                      std::size_t grid_points);

}  // namespace triadic
