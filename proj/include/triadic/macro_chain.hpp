#pragma once

// Macroscale birth-death chain on the edge count 0..N.
//
//   birth(i) = N [ c1 (1 - i/N) + c3 (1 - i/N)(i/N)((i-1)/N) ]
//   death(i) = c2 i

#include "triadic/model.hpp"
#include "triadic/path_record.hpp"
#include "triadic/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace triadic {

class BDChain {
public:
    explicit BDChain(const ModelParams& params);

    [[nodiscard]] const ModelParams& params() const { return params_; }

    /// Largest state N; the chain lives on 0..N.
    [[nodiscard]] std::int64_t max_state() const { return max_state_; }

    /// birth(N) and death(0) are zero.
    [[nodiscard]] double birth(std::int64_t i) const { return birth_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] double death(std::int64_t i) const { return death_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] std::span<const double> births() const { return birth_; }
    [[nodiscard]] std::span<const double> deaths() const { return death_; }

private:
    ModelParams params_;
    std::int64_t max_state_;
    std::vector<double> birth_;
    std::vector<double> death_;
};

struct Distribution {
    std::vector<double> probs;
    /// Natural log of probs; finite even where probs underflows to zero.
    std::vector<double> log_probs;
};

/// Product-formula stationary law, accumulated in log space. Throws
/// Error(InvalidArgument) if a rate that enters the product is zero.
Distribution stationary_distribution(const BDChain& chain);

enum class Modality { Unimodal, Bimodal, Other };

const char* to_string(Modality modality);

struct ModalityReport {
    std::vector<std::int64_t> local_maxima;
    std::vector<std::int64_t> local_minima;  // interior only
    Modality classification = Modality::Other;
};

/// Local extrema of the stationary sequence, compared in log space. A run
/// of two equal neighbours counts as one extremum at the lower index.
ModalityReport modality(const Distribution& dist);

/// Probability mass on states 0..last.
double mass_up_to(const Distribution& dist, std::int64_t last);

/// Two-rate SSA on the chain, recording the density i/N.
PathRecord simulate_macro_path(const BDChain& chain, std::int64_t initial_state, double t_end,
                               RecordStride stride, std::uint64_t seed);

/// Time-weighted occupancy of each state over [burn_in, t_end], normalized.
std::vector<double> macro_occupancy(const BDChain& chain, std::int64_t initial_state, double t_end,
                                    double burn_in, std::uint64_t seed);

/// Time to first reach `to` starting from `from`, one simulated path.
double macro_first_passage(const BDChain& chain, std::int64_t from, std::int64_t to, Rng& rng);

/// Mean hitting times of `target` from every state. Entry `target` is 0.
///
/// Solves Q tau = -1 where Q is the generator with row and column `target`
/// removed. The system splits into the blocks below and above the target,
/// each solved in O(N) by elimination on successive differences of tau.
std::vector<double> mean_exit_times(const BDChain& chain, std::int64_t target);

/// Mean switching times between the two peaks and the trough.
struct TransitionRow {
    int n = 0;
    std::int64_t low_state = 0;   // floor(p1* N)
    std::int64_t mid_state = 0;   // floor(p2* N)
    std::int64_t high_state = 0;  // floor(p3* N)
    double tau_low_to_mid = 0.0;
    double tau_high_to_mid = 0.0;
    double ratio = 0.0;
};

/// One row per node count, with rates taken from `rates` (its n is ignored).
/// Throws Error(InvalidArgument) unless `roots` is bistable.
std::vector<TransitionRow> transition_time_curve(const ModelParams& rates, std::span<const int> node_counts,
                                                 const CubicRoots& roots);

}  // namespace triadic
