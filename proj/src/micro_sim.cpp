#include "triadic/micro_sim.hpp"

#include "triadic/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <exception>
#include <thread>
#include <tuple>

namespace triadic {

GraphState::GraphState(int n) : n_(n) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "graph needs n >= 3 nodes");
    const auto nn = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    adjacency_.assign(nn, 0);
    common_.assign(nn, 0);
    const auto pairs = static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2;
    pair_i_.reserve(pairs);
    pair_j_.reserve(pairs);
    absent_.reserve(pairs);
    present_.reserve(pairs);
    slot_.reserve(pairs);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            slot_.push_back(static_cast<std::int64_t>(absent_.size()));
            absent_.push_back(static_cast<std::int64_t>(pair_i_.size()));
            pair_i_.push_back(i);
            pair_j_.push_back(j);
        }
    }
}

GraphState GraphState::from_edges(int n, std::span<const std::pair<int, int>> edges) {
    GraphState state(n);
    for (auto [i, j] : edges) state.add_edge(i, j);
    return state;
}

std::int64_t GraphState::pair_id(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (i < 0 || j >= n_ || i == j) throw Error(ErrorCode::InvalidArgument, "invalid node pair");
    const auto ii = static_cast<std::int64_t>(i);
    return ii * n_ - ii * (ii + 1) / 2 + (j - i - 1);
}

void GraphState::add_edge(int i, int j) {
    if (i == j) throw Error(ErrorCode::InvalidArgument, "self loops are not allowed");
    if (has_edge(i, j)) throw Error(ErrorCode::InvalidArgument, "edge already present");
    flip(i, j, true);
}

void GraphState::remove_edge(int i, int j) {
    if (i == j) throw Error(ErrorCode::InvalidArgument, "self loops are not allowed");
    if (!has_edge(i, j)) throw Error(ErrorCode::InvalidArgument, "edge not present");
    flip(i, j, false);
}

void GraphState::move_pair(std::int64_t id, std::vector<std::int64_t>& from, std::vector<std::int64_t>& to) {
    const auto pos = static_cast<std::size_t>(slot_[static_cast<std::size_t>(id)]);
    const std::int64_t last = from.back();
    from[pos] = last;
    slot_[static_cast<std::size_t>(last)] = static_cast<std::int64_t>(pos);
    from.pop_back();
    slot_[static_cast<std::size_t>(id)] = static_cast<std::int64_t>(to.size());
    to.push_back(id);
}

void GraphState::flip(int i, int j, bool present) {
    const int sign = present ? 1 : -1;
    std::int64_t delta = 0;

    // Pair (i, j) keeps its common-neighbour count but changes presence.
    const std::int64_t c_ij = common_[index(i, j)];
    delta += present ? -c_ij : c_ij;

    // Paths i-j-k and j-i-k gain or lose their middle edge.
    const std::uint8_t* row_i = &adjacency_[index(i, 0)];
    const std::uint8_t* row_j = &adjacency_[index(j, 0)];
    for (int k = 0; k < n_; ++k) {
        if (k == i || k == j) continue;
        if (row_j[k]) {
            common_[index(i, k)] += sign;
            common_[index(k, i)] += sign;
            if (!row_i[k]) delta += sign;
        }
        if (row_i[k]) {
            common_[index(j, k)] += sign;
            common_[index(k, j)] += sign;
            if (!row_j[k]) delta += sign;
        }
    }
    open_wedges_ += delta;

    adjacency_[index(i, j)] = present ? 1 : 0;
    adjacency_[index(j, i)] = present ? 1 : 0;
    const std::int64_t id = pair_id(i, j);
    if (present) {
        move_pair(id, absent_, present_);
    } else {
        move_pair(id, present_, absent_);
    }
}

bool GraphState::caches_coherent() const {
    std::int64_t wedges = 0;
    std::int64_t edges = 0;
    for (int i = 0; i < n_; ++i) {
        if (adjacency_[index(i, i)] != 0) return false;
        for (int j = 0; j < n_; ++j) {
            if (adjacency_[index(i, j)] != adjacency_[index(j, i)]) return false;
            if (i == j) continue;
            int c = 0;
            for (int k = 0; k < n_; ++k) c += adjacency_[index(i, k)] * adjacency_[index(k, j)];
            if (c != common_[index(i, j)]) return false;
            if (i < j) {
                wedges += adjacency_[index(i, j)] ? 0 : c;
                edges += adjacency_[index(i, j)];
            }
        }
    }
    if (wedges != open_wedges_ || edges != edge_count()) return false;
    for (std::size_t pos = 0; pos < present_.size(); ++pos) {
        const auto id = present_[pos];
        if (slot_[static_cast<std::size_t>(id)] != static_cast<std::int64_t>(pos)) return false;
        if (!has_edge(pair_i_[static_cast<std::size_t>(id)], pair_j_[static_cast<std::size_t>(id)])) return false;
    }
    for (std::size_t pos = 0; pos < absent_.size(); ++pos) {
        const auto id = absent_[pos];
        if (slot_[static_cast<std::size_t>(id)] != static_cast<std::int64_t>(pos)) return false;
        if (has_edge(pair_i_[static_cast<std::size_t>(id)], pair_j_[static_cast<std::size_t>(id)])) return false;
    }
    return true;
}

std::vector<std::pair<int, int>> GraphState::edges() const {
    std::vector<std::pair<int, int>> out;
    out.reserve(present_.size());
    for (int i = 0; i < n_; ++i) {
        for (int j = i + 1; j < n_; ++j) {
            if (has_edge(i, j)) out.emplace_back(i, j);
        }
    }
    return out;
}

GraphState init_erdos_renyi(int n, double p, std::uint64_t seed) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "edge probability must lie in [0,1]");
    GraphState state(n);
    Rng rng(seed);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform() < p) state.add_edge(i, j);
        }
    }
    return state;
}

GraphState init_edge_count(int n, std::int64_t m, std::uint64_t seed) {
    GraphState state(n);
    const std::int64_t pairs = state.pair_count();
    if (m < 0 || m > pairs) throw Error(ErrorCode::InvalidArgument, "edge count must lie in [0, N]");
    std::vector<std::int64_t> ids(static_cast<std::size_t>(pairs));
    std::iota(ids.begin(), ids.end(), std::int64_t{0});
    Rng rng(seed);
    for (std::int64_t k = 0; k < m; ++k) {
        const auto pick = k + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(pairs - k)));
        std::swap(ids[static_cast<std::size_t>(k)], ids[static_cast<std::size_t>(pick)]);
        auto [i, j] = state.pair_nodes(ids[static_cast<std::size_t>(k)]);
        state.add_edge(i, j);
    }
    return state;
}

GraphState init_half_edges(int n, std::uint64_t seed) {
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "graph needs n >= 3 nodes");
    const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
    return init_edge_count(n, static_cast<std::int64_t>(std::llround(static_cast<double>(pairs) / 2.0)), seed);
}

GraphState InitialSpec::realize(int n, std::uint64_t seed) const {
    switch (kind) {
        case Kind::ErdosRenyi: return init_erdos_renyi(n, p, seed);
        case Kind::EdgeCount: return init_edge_count(n, m, seed);
        case Kind::HalfEdges: return init_half_edges(n, seed);
    }
    throw Error(ErrorCode::InvalidArgument, "unknown initial condition");
}

std::int64_t wedge_weight(const GraphState& state, int i, int j) {
    if (i == j) throw Error(ErrorCode::InvalidArgument, "wedge weight needs distinct nodes");
    if (i < 0 || j < 0 || i >= state.node_count() || j >= state.node_count()) {
        throw Error(ErrorCode::InvalidArgument, "node index out of range");
    }
    return state.has_edge(i, j) ? 0 : state.common_neighbors(i, j);
}

ClassPropensities class_propensities(const GraphState& state, const ModelParams& params) {
    ClassPropensities props;
    const auto edges = static_cast<double>(state.edge_count());
    props.birth = params.c1 * (static_cast<double>(state.pair_count()) - edges);
    props.death = params.c2 * edges;
    props.triadic = params.c3_hat() * static_cast<double>(state.open_wedge_total());
    props.sum = props.death + props.birth + props.triadic;
    return props;
}

namespace {

Event pick_triadic(GraphState& state, Rng& rng) {
    const std::int64_t total = state.open_wedge_total();
    auto target = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(total)));
    const int n = state.node_count();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (state.has_edge(i, j)) continue;
            target -= state.common_neighbors(i, j);
            if (target < 0) return {EventKind::Triadic, i, j};
        }
    }
    throw Error(ErrorCode::InvalidArgument, "open wedge total out of sync with adjacency");
}

}  // namespace

Event fire_event(GraphState& state, const ModelParams& params, const ClassPropensities& props, Rng& rng) {
    (void)params;
    const double r = rng.uniform() * props.sum;
    EventKind kind;
    if (r < props.death) {
        kind = EventKind::Death;
    } else if (r < props.death + props.birth) {
        kind = EventKind::Birth;
    } else {
        kind = EventKind::Triadic;
    }
    // Rounding can land r in a class whose propensity is zero.
    if (kind == EventKind::Triadic && state.open_wedge_total() == 0) {
        kind = state.absent_pairs().empty() ? EventKind::Death : EventKind::Birth;
    }
    if (kind == EventKind::Birth && (state.absent_pairs().empty() || props.birth <= 0.0)) kind = EventKind::Death;
    if (kind == EventKind::Death && (state.present_pairs().empty() || props.death <= 0.0)) {
        kind = props.birth > 0.0 && !state.absent_pairs().empty() ? EventKind::Birth : EventKind::Triadic;
    }

    Event event{kind, 0, 0};
    switch (kind) {
        case EventKind::Death: {
            const auto pool = state.present_pairs();
            std::tie(event.i, event.j) = state.pair_nodes(pool[rng.below(pool.size())]);
            state.remove_edge(event.i, event.j);
            break;
        }
        case EventKind::Birth: {
            const auto pool = state.absent_pairs();
            std::tie(event.i, event.j) = state.pair_nodes(pool[rng.below(pool.size())]);
            state.add_edge(event.i, event.j);
            break;
        }
        case EventKind::Triadic:
            event = pick_triadic(state, rng);
            state.add_edge(event.i, event.j);
            break;
    }
    return event;
}

StepResult ssa_step(GraphState& state, const ModelParams& params, Rng& rng) {
    const ClassPropensities props = class_propensities(state, params);
    if (!(props.sum > 0.0)) throw Error(ErrorCode::StuckState, "total propensity is zero; no reaction can fire");
    StepResult result;
    result.dt = rng.exponential(props.sum);
    result.event = fire_event(state, params, props, rng);
    return result;
}

namespace {

// Drives the SSA to t_end. `hold(t0, t1, last)` sees the state that is
// constant on [t0, t1) (closed at t_end when `last`), `after_event(t)` runs
// after each applied event.
template <class Hold, class AfterEvent>
void run_ssa(GraphState& state, const ModelParams& params, double t_end, Rng& rng, Hold&& hold,
             AfterEvent&& after_event) {
    double t = 0.0;
    for (;;) {
        const ClassPropensities props = class_propensities(state, params);
        if (!(props.sum > 0.0)) throw Error(ErrorCode::StuckState, "total propensity is zero; no reaction can fire");
        const double t_next = t + rng.exponential(props.sum);
        if (t_next >= t_end) {
            hold(t, t_end, true);
            return;
        }
        hold(t, t_next, false);
        fire_event(state, params, props, rng);
        t = t_next;
        after_event(t);
    }
}

void check_horizon(double t_end) {
    if (!(t_end > 0.0 && std::isfinite(t_end))) throw Error(ErrorCode::InvalidArgument, "t_end must be > 0");
}

}  // namespace

PathWithSnapshots simulate_path_with_snapshots(const GraphState& initial, const ModelParams& params, double t_end,
                                               RecordStride stride, std::span<const double> snapshot_times,
                                               std::uint64_t seed) {
    params.validate();
    check_horizon(t_end);
    stride.validate();
    if (initial.node_count() != params.n) throw Error(ErrorCode::InvalidArgument, "initial graph size differs from n");

    PathWithSnapshots out{{}, {}, {}, initial};
    GraphState& state = out.final_state;
    PathRecord& path = out.path;
    path.observable = Observable::Density;
    path.push(0.0, state.density());

    std::vector<double> snaps(snapshot_times.begin(), snapshot_times.end());
    std::sort(snaps.begin(), snaps.end());
    std::size_t next_snap = 0;
    std::size_t grid_index = 1;
    std::size_t events = 0;
    Rng rng(seed);

    auto hold = [&](double t0, double t1, bool last) {
        auto inside = [&](double g) { return g < t1 || (last && g <= t1); };
        if (stride.kind == RecordStride::Kind::Time) {
            for (double g = static_cast<double>(grid_index) * stride.every_time; inside(g);
                 g = static_cast<double>(++grid_index) * stride.every_time) {
                path.push(g, state.density());
            }
        }
        while (next_snap < snaps.size() && snaps[next_snap] >= t0 && inside(snaps[next_snap])) {
            out.snapshot_times.push_back(snaps[next_snap]);
            out.snapshots.push_back(state.edges());
            ++next_snap;
        }
        if (last && stride.kind == RecordStride::Kind::Events && path.times.back() < t1) {
            path.push(t1, state.density());
        }
    };
    auto after_event = [&](double t) {
        ++events;
        if (stride.kind == RecordStride::Kind::Events && events % stride.every_events == 0) {
            path.push(t, state.density());
        }
    };
    run_ssa(state, params, t_end, rng, hold, after_event);
    return out;
}

PathRecord simulate_path(const GraphState& initial, const ModelParams& params, double t_end, RecordStride stride,
                         std::uint64_t seed) {
    return simulate_path_with_snapshots(initial, params, t_end, stride, {}, seed).path;
}

std::vector<double> micro_occupancy(const GraphState& initial, const ModelParams& params, double t_end,
                                    double burn_in, std::uint64_t seed) {
    params.validate();
    check_horizon(t_end);
    if (!(burn_in >= 0.0 && burn_in < t_end)) throw Error(ErrorCode::InvalidArgument, "burn-in must lie in [0, t_end)");
    GraphState state = initial;
    std::vector<double> occupancy(static_cast<std::size_t>(state.pair_count()) + 1, 0.0);
    Rng rng(seed);
    auto hold = [&](double t0, double t1, bool) {
        const double lo = std::max(t0, burn_in);
        if (t1 > lo) occupancy[static_cast<std::size_t>(state.edge_count())] += t1 - lo;
    };
    run_ssa(state, params, t_end, rng, hold, [](double) {});
    const double total = t_end - burn_in;
    for (double& v : occupancy) v /= total;
    return occupancy;
}

EdgeProbabilities estimate_edge_probabilities(const ModelParams& params, const InitialSpec& initial,
                                              std::span<const double> t_grid, std::size_t n_paths,
                                              std::uint64_t seed, unsigned threads) {
    params.validate();
    if (n_paths == 0) throw Error(ErrorCode::InvalidArgument, "need at least one path");
    if (t_grid.empty()) throw Error(ErrorCode::InvalidArgument, "time grid is empty");
    for (std::size_t k = 0; k < t_grid.size(); ++k) {
        if (!(t_grid[k] >= 0.0) || (k > 0 && !(t_grid[k] > t_grid[k - 1]))) {
            throw Error(ErrorCode::InvalidArgument, "time grid must be nonnegative and strictly increasing");
        }
    }
    const std::size_t pairs = static_cast<std::size_t>(params.pair_count());
    const std::size_t grid = t_grid.size();
    const double horizon = t_grid.back() > 0.0 ? t_grid.back() : 1.0;

    // Each worker owns a contiguous block of paths and its own counters; the
    // integer reduction at the end is order independent.
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n_paths)));
    std::vector<std::vector<std::uint32_t>> counts(threads, std::vector<std::uint32_t>(grid * pairs, 0));
    std::vector<std::exception_ptr> failures(threads);

    auto worker = [&](unsigned w) {
        try {
            auto& local = counts[w];
            for (std::size_t path = w; path < n_paths; path += threads) {
                GraphState state = initial.realize(params.n, stream_seed(seed, 2 * path));
                Rng rng(stream_seed(seed, 2 * path + 1));
                std::size_t next = 0;
                auto hold = [&](double, double t1, bool last) {
                    while (next < grid && (t_grid[next] < t1 || (last && t_grid[next] <= t1))) {
                        std::uint32_t* row = &local[next * pairs];
                        for (std::int64_t id : state.present_pairs()) ++row[static_cast<std::size_t>(id)];
                        ++next;
                    }
                };
                run_ssa(state, params, horizon, rng, hold, [](double) {});
            }
        } catch (...) {
            failures[w] = std::current_exception();
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    for (auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }

    EdgeProbabilities out;
    out.times.assign(t_grid.begin(), t_grid.end());
    out.n = params.n;
    out.probs.assign(grid, std::vector<double>(pairs, 0.0));
    out.mean.assign(grid, 0.0);
    const auto denom = static_cast<double>(n_paths);
    for (std::size_t k = 0; k < grid; ++k) {
        double sum = 0.0;
        for (std::size_t id = 0; id < pairs; ++id) {
            std::uint64_t c = 0;
            for (const auto& local : counts) c += local[k * pairs + id];
            out.probs[k][id] = static_cast<double>(c) / denom;
            sum += out.probs[k][id];
        }
        out.mean[k] = sum / static_cast<double>(pairs);
    }
    return out;
}

void write_edge_list(std::span<const std::pair<int, int>> edges, std::ostream& out) {
    std::vector<std::pair<int, int>> sorted;
    sorted.reserve(edges.size());
    for (auto [i, j] : edges) sorted.emplace_back(std::min(i, j), std::max(i, j));
    std::sort(sorted.begin(), sorted.end());
    for (auto [i, j] : sorted) out << i + 1 << ' ' << j + 1 << '\n';
}

void write_edge_list(const GraphState& state, std::ostream& out) {
    const auto edges = state.edges();
    write_edge_list(edges, out);
}

}  // namespace triadic
