#pragma once

// Exact stochastic simulation of the edge-level triadic closure network.
//
// Every node pair carries one of two species (edge present / absent) and
// three reaction classes act on them: spontaneous birth (rate c1 per missing
// edge), spontaneous death (rate c2 per edge) and triadic closure (rate
// c3/(n-2) per open wedge closing the pair).

#include "triadic/model.hpp"
#include "triadic/path_record.hpp"
#include "triadic/rng.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace triadic {

/// Symmetric 0/1 adjacency with zero diagonal, plus caches that make every
/// edge flip O(n):
///   - common_neighbors(i, j) = (A^2)_ij for i != j,
///   - the total open-wedge weight sum_{i<j} (A^2)_ij (1 - A_ij),
///   - present / absent pair lists for O(1) uniform selection.
class GraphState {
public:
    /// Empty graph on n >= 3 nodes.
    explicit GraphState(int n);

    /// Graph with the given undirected edges (0-indexed, any order).
    static GraphState from_edges(int n, std::span<const std::pair<int, int>> edges);

    [[nodiscard]] int node_count() const { return n_; }
    [[nodiscard]] std::int64_t pair_count() const { return static_cast<std::int64_t>(pair_i_.size()); }
    [[nodiscard]] std::int64_t edge_count() const { return static_cast<std::int64_t>(present_.size()); }
    [[nodiscard]] double density() const {
        return static_cast<double>(edge_count()) / static_cast<double>(pair_count());
    }

    [[nodiscard]] bool has_edge(int i, int j) const { return adjacency_[index(i, j)] != 0; }
    [[nodiscard]] int common_neighbors(int i, int j) const { return common_[index(i, j)]; }
    [[nodiscard]] std::int64_t open_wedge_total() const { return open_wedges_; }

    /// Upper-triangle pair numbering, row by row.
    [[nodiscard]] std::int64_t pair_id(int i, int j) const;
    [[nodiscard]] std::pair<int, int> pair_nodes(std::int64_t id) const {
        return {pair_i_[static_cast<std::size_t>(id)], pair_j_[static_cast<std::size_t>(id)]};
    }
    [[nodiscard]] std::span<const std::int64_t> present_pairs() const { return present_; }
    [[nodiscard]] std::span<const std::int64_t> absent_pairs() const { return absent_; }

    /// Adds or removes edge (i, j), updating all caches in O(n).
    void add_edge(int i, int j);
    void remove_edge(int i, int j);

    /// Full O(n^3) recomputation of A^2 compared against the cache, plus the
    /// wedge total and pair lists. Used by tests and debug harnesses.
    [[nodiscard]] bool caches_coherent() const;

    /// Edges as 0-indexed (i, j) with i < j, sorted lexicographically.
    [[nodiscard]] std::vector<std::pair<int, int>> edges() const;

private:
    [[nodiscard]] std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) + static_cast<std::size_t>(j);
    }
    [[nodiscard]] std::int64_t wedge_weight_unchecked(int i, int j) const {
        return adjacency_[index(i, j)] ? 0 : common_[index(i, j)];
    }
    void flip(int i, int j, bool present);
    void move_pair(std::int64_t id, std::vector<std::int64_t>& from, std::vector<std::int64_t>& to);

    int n_;
    std::vector<std::uint8_t> adjacency_;
    std::vector<std::int32_t> common_;
    std::int64_t open_wedges_ = 0;
    std::vector<int> pair_i_;
    std::vector<int> pair_j_;
    std::vector<std::int64_t> present_;
    std::vector<std::int64_t> absent_;
    std::vector<std::int64_t> slot_;  // position of each pair in present_/absent_
};

/// Each pair present independently with probability p.
GraphState init_erdos_renyi(int n, double p, std::uint64_t seed);

/// Exactly m edges placed uniformly at random.
GraphState init_edge_count(int n, std::int64_t m, std::uint64_t seed);

/// m = round(N / 2) edges placed uniformly at random.
GraphState init_half_edges(int n, std::uint64_t seed);

/// Number of open wedges that closing (i, j) would complete: (A^2)_ij when
/// the edge is absent, else 0. Throws on i == j.
std::int64_t wedge_weight(const GraphState& state, int i, int j);

struct ClassPropensities {
    double birth = 0.0;
    double death = 0.0;
    double triadic = 0.0;
    double sum = 0.0;
};

ClassPropensities class_propensities(const GraphState& state, const ModelParams& params);

enum class EventKind { Birth, Death, Triadic };

struct Event {
    EventKind kind = EventKind::Birth;
    int i = 0;
    int j = 0;
};

struct StepResult {
    double dt = 0.0;
    Event event;
};

/// One SSA step: exponential waiting time, reaction class, then the pair
/// within the class. Applies the event to the state. Throws
/// Error(StuckState) if the total propensity is zero.
StepResult ssa_step(GraphState& state, const ModelParams& params, Rng& rng);

/// Class and pair selection only (the state is updated). Exposed so path
/// runners can draw the waiting time first and stop at the horizon.
Event fire_event(GraphState& state, const ModelParams& params,
                 const ClassPropensities& props, Rng& rng);

/// Runs the SSA from `initial` until the horizon and records the edge
/// density. The first record is at t = 0; an event whose time would pass
/// t_end is not applied.
PathRecord simulate_path(const GraphState& initial, const ModelParams& params, double t_end,
                         RecordStride stride, std::uint64_t seed);

/// Same as simulate_path but also returns the final state and lets the
/// caller observe the state at requested snapshot times.
struct PathWithSnapshots {
    PathRecord path;
    std::vector<double> snapshot_times;
    std::vector<std::vector<std::pair<int, int>>> snapshots;
    GraphState final_state;
};
PathWithSnapshots simulate_path_with_snapshots(const GraphState& initial, const ModelParams& params,
                                               double t_end, RecordStride stride,
                                               std::span<const double> snapshot_times,
                                               std::uint64_t seed);

/// Time-weighted occupancy of each edge count 0..N over [burn_in, t_end],
/// normalized to sum to one.
std::vector<double> micro_occupancy(const GraphState& initial, const ModelParams& params,
                                    double t_end, double burn_in, std::uint64_t seed);

struct InitialSpec {
    enum class Kind { ErdosRenyi, EdgeCount, HalfEdges };

    Kind kind = Kind::HalfEdges;
    double p = 0.0;
    std::int64_t m = 0;

    [[nodiscard]] GraphState realize(int n, std::uint64_t seed) const;

    friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

/// Monte Carlo estimate of P_ij(t): the fraction of independent SSA paths in
/// which edge (i, j) is present at each grid time.
struct EdgeProbabilities {
    std::vector<double> times;
    int n = 0;
    /// probs[k][pair_id] for grid time k.
    std::vector<std::vector<double>> probs;
    /// Mean over all pairs for each grid time.
    std::vector<double> mean;
};

EdgeProbabilities estimate_edge_probabilities(const ModelParams& params, const InitialSpec& initial,
                                              std::span<const double> t_grid, std::size_t n_paths,
                                              std::uint64_t seed, unsigned threads = 1);

/// Edge list, one "i j" line per edge, 1-indexed with i < j, sorted.
void write_edge_list(std::span<const std::pair<int, int>> edges, std::ostream& out);
void write_edge_list(const GraphState& state, std::ostream& out);

}  // namespace triadic
