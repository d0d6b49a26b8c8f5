#pragma once

// Model parameters, the drift cubic and its roots.
//
// The drift of the edge density p is
//     drift(p) = (1 - p)(c1 + c3 p^2) - c2 p,
// and its real roots in (0,1) are the fixed points of the reaction-rate ODE
// as well as the peak/trough locations of the macroscale steady state.

#include <cstdint>
#include <vector>

namespace triadic {

/// Rate constants and node count. c1 is the spontaneous birth rate per
/// missing edge, c2 the spontaneous death rate per edge, and c3 the
/// size-independent triadic constant; the per-wedge rate is c3 / (n - 2).
struct ModelParams {
    int n = 3;
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    /// Validating constructor. Throws Error(InvalidArgument) unless n >= 3,
    /// c1 > 0, c2 > 0 and c3 >= 0.
    static ModelParams make(int n, double c1, double c2, double c3);

    /// Throws Error(InvalidArgument) if the invariants do not hold.
    void validate() const;

    /// Per-wedge triadic rate constant.
    [[nodiscard]] double c3_hat() const { return c3 / static_cast<double>(n - 2); }

    /// Number of node pairs N = n(n-1)/2, i.e. the maximum edge count.
    [[nodiscard]] std::int64_t pair_count() const {
        return static_cast<std::int64_t>(n) * (n - 1) / 2;
    }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Standard parameter sets: three fixed points near 0.17, 0.31, 0.52, and a
/// single fixed point near 0.75.
ModelParams bistable_params(int n);
ModelParams monostable_params(int n);

[[nodiscard]] double drift(double p, const ModelParams& params);

/// d drift / dp.
[[nodiscard]] double drift_derivative(double p, const ModelParams& params);

/// f(p) = (1 - p)(c1 + c3 p^2) / c2. Fixed points of f are roots of drift.
[[nodiscard]] double f_ratio(double p, const ModelParams& params);

enum class Regime { Monostable, Bistable };

const char* to_string(Regime regime);

struct CubicRoots {
    std::vector<double> roots;  // strictly increasing, inside (0,1)
    Regime regime = Regime::Monostable;

    /// Low peak, trough and high peak. Only valid in the bistable regime.
    [[nodiscard]] double low() const { return roots.at(0); }
    [[nodiscard]] double mid() const { return roots.at(1); }
    [[nodiscard]] double high() const { return roots.at(2); }
};

enum class DegeneratePolicy {
    Reject,              // throw Error(DegenerateRegime)
    TreatAsMonostable,   // keep only the simple root
};

/// Separation below which two roots count as repeated.
inline constexpr double kRepeatedRootTolerance = 1e-9;

/// All real roots of drift(p) = 0, sorted, with the regime they imply.
/// Closed-form (trigonometric / Cardano) in extended precision followed by
/// damped Newton polishing. A repeated root, real or as a nearly real
/// complex pair, throws unless the caller opts in with TreatAsMonostable.
CubicRoots solve_cubic(const ModelParams& params,
                       DegeneratePolicy policy = DegeneratePolicy::Reject);

}  // namespace triadic
