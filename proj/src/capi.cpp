#include "triadic/triadic.h"

#include "triadic/error.hpp"
#include "triadic/experiment.hpp"
#include "triadic/langevin.hpp"
#include "triadic/macro_chain.hpp"
#include "triadic/micro_sim.hpp"
#include "triadic/model.hpp"
#include "triadic/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <new>
#include <string>

struct triadic_chain {
    triadic::BDChain chain;
};

struct triadic_graph {
    triadic::GraphState state;
};

struct triadic_config {
    triadic::ExperimentConfig config;
};

namespace {

thread_local std::string last_error;

triadic_status status_of(triadic::ErrorCode code) {
    switch (code) {
        case triadic::ErrorCode::InvalidArgument: return TRIADIC_ERR_INVALID_ARGUMENT;
        case triadic::ErrorCode::DegenerateRegime: return TRIADIC_ERR_DEGENERATE_REGIME;
        case triadic::ErrorCode::StuckState: return TRIADIC_ERR_STUCK_STATE;
        case triadic::ErrorCode::SingularSystem: return TRIADIC_ERR_SINGULAR_SYSTEM;
        case triadic::ErrorCode::Io: return TRIADIC_ERR_IO;
    }
    return TRIADIC_ERR_INTERNAL;
}

triadic_status fail(triadic_status status, const std::string& message) {
    last_error = message;
    return status;
}

template <class Fn>
triadic_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        return fn();
    } catch (const triadic::Error& e) {
        return fail(status_of(e.code()), e.what());
    } catch (const std::bad_alloc&) {
        return fail(TRIADIC_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(TRIADIC_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(TRIADIC_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* message) {
    if (!ok) throw triadic::Error(triadic::ErrorCode::InvalidArgument, message);
}

triadic::ModelParams to_params(const triadic_params* p) {
    require(p != nullptr, "params is NULL");
    return triadic::ModelParams::make(p->n, p->c1, p->c2, p->c3);
}

triadic_status copy_text(const std::string& text, char* buffer, size_t capacity, size_t* needed) {
    const size_t size = text.size() + 1;
    if (needed) *needed = size;
    if (!buffer) return TRIADIC_OK;
    if (capacity < size) return fail(TRIADIC_ERR_BUFFER_TOO_SMALL, "buffer too small");
    std::memcpy(buffer, text.c_str(), size);
    return TRIADIC_OK;
}

}  // namespace

extern "C" {

const char* triadic_version(void) { return "1.0.0"; }

const char* triadic_status_string(triadic_status status) {
    switch (status) {
        case TRIADIC_OK: return "ok";
        case TRIADIC_ERR_INVALID_ARGUMENT: return "invalid argument";
        case TRIADIC_ERR_DEGENERATE_REGIME: return "degenerate regime";
        case TRIADIC_ERR_STUCK_STATE: return "stuck state";
        case TRIADIC_ERR_SINGULAR_SYSTEM: return "singular system";
        case TRIADIC_ERR_IO: return "i/o error";
        case TRIADIC_ERR_BUFFER_TOO_SMALL: return "buffer too small";
        case TRIADIC_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* triadic_last_error(void) { return last_error.c_str(); }

triadic_status triadic_params_validate(const triadic_params* params) {
    return guarded([&] {
        to_params(params);
        return TRIADIC_OK;
    });
}

triadic_status triadic_drift(const triadic_params* params, double p, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        *out = triadic::drift(p, to_params(params));
        return TRIADIC_OK;
    });
}

triadic_status triadic_f_ratio(const triadic_params* params, double p, double* out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        *out = triadic::f_ratio(p, to_params(params));
        return TRIADIC_OK;
    });
}

triadic_status triadic_solve_cubic(const triadic_params* params, int accept_degenerate, double* roots, size_t* count,
                                   triadic_regime* regime) {
    return guarded([&] {
        require(roots && count && regime, "output pointer is NULL");
        const auto policy = accept_degenerate ? triadic::DegeneratePolicy::TreatAsMonostable
                                              : triadic::DegeneratePolicy::Reject;
        const auto result = triadic::solve_cubic(to_params(params), policy);
        std::copy(result.roots.begin(), result.roots.end(), roots);
        *count = result.roots.size();
        *regime = result.regime == triadic::Regime::Bistable ? TRIADIC_BISTABLE : TRIADIC_MONOSTABLE;
        return TRIADIC_OK;
    });
}

triadic_status triadic_chain_create(const triadic_params* params, triadic_chain** out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        *out = new triadic_chain{triadic::BDChain(to_params(params))};
        return TRIADIC_OK;
    });
}

void triadic_chain_destroy(triadic_chain* chain) { delete chain; }

size_t triadic_chain_states(const triadic_chain* chain) {
    return chain ? static_cast<size_t>(chain->chain.max_state()) + 1 : 0;
}

triadic_status triadic_chain_rates(const triadic_chain* chain, double* birth, double* death, size_t len) {
    return guarded([&] {
        require(chain != nullptr, "chain is NULL");
        require(len == triadic_chain_states(chain), "len must equal the number of states");
        const auto b = chain->chain.births();
        const auto d = chain->chain.deaths();
        if (birth) std::copy(b.begin(), b.end(), birth);
        if (death) std::copy(d.begin(), d.end(), death);
        return TRIADIC_OK;
    });
}

triadic_status triadic_chain_stationary(const triadic_chain* chain, double* probs, size_t len) {
    return guarded([&] {
        require(chain && probs, "NULL argument");
        require(len == triadic_chain_states(chain), "len must equal the number of states");
        const auto dist = triadic::stationary_distribution(chain->chain);
        std::copy(dist.probs.begin(), dist.probs.end(), probs);
        return TRIADIC_OK;
    });
}

triadic_status triadic_chain_exit_times(const triadic_chain* chain, size_t target, double* tau, size_t len) {
    return guarded([&] {
        require(chain && tau, "NULL argument");
        require(len == triadic_chain_states(chain), "len must equal the number of states");
        require(target < len, "target out of range");
        const auto times = triadic::mean_exit_times(chain->chain, static_cast<std::int64_t>(target));
        std::copy(times.begin(), times.end(), tau);
        return TRIADIC_OK;
    });
}

triadic_status triadic_graph_create(int32_t n, triadic_init_kind kind, double arg, uint64_t seed,
                                    triadic_graph** out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        require(n >= 3, "n >= 3 required");
        triadic::InitialSpec spec;
        switch (kind) {
            case TRIADIC_INIT_ERDOS_RENYI:
                spec.kind = triadic::InitialSpec::Kind::ErdosRenyi;
                spec.p = arg;
                break;
            case TRIADIC_INIT_EDGE_COUNT:
                require(arg >= 0.0 && arg == std::floor(arg), "edge count must be a nonnegative integer");
                spec.kind = triadic::InitialSpec::Kind::EdgeCount;
                spec.m = static_cast<std::int64_t>(arg);
                break;
            case TRIADIC_INIT_HALF_EDGES: spec.kind = triadic::InitialSpec::Kind::HalfEdges; break;
            default: require(false, "unknown init kind");
        }
        *out = new triadic_graph{spec.realize(n, seed)};
        return TRIADIC_OK;
    });
}

void triadic_graph_destroy(triadic_graph* graph) { delete graph; }

triadic_status triadic_graph_edge_count(const triadic_graph* graph, int64_t* out) {
    return guarded([&] {
        require(graph && out, "NULL argument");
        *out = graph->state.edge_count();
        return TRIADIC_OK;
    });
}

triadic_status triadic_graph_open_wedges(const triadic_graph* graph, int64_t* out) {
    return guarded([&] {
        require(graph && out, "NULL argument");
        *out = graph->state.open_wedge_total();
        return TRIADIC_OK;
    });
}

triadic_status triadic_graph_advance(triadic_graph* graph, const triadic_params* params, double duration,
                                     uint64_t seed, uint64_t* events) {
    return guarded([&] {
        require(graph != nullptr, "graph is NULL");
        const auto p = to_params(params);
        require(p.n == graph->state.node_count(), "params.n differs from the graph size");
        require(duration >= 0.0 && std::isfinite(duration), "duration must be >= 0");
        triadic::Rng rng(seed);
        uint64_t fired = 0;
        double t = 0.0;
        for (;;) {
            const auto props = triadic::class_propensities(graph->state, p);
            if (!(props.sum > 0.0)) throw triadic::Error(triadic::ErrorCode::StuckState, "total propensity is zero");
            t += rng.exponential(props.sum);
            if (t > duration) break;
            triadic::fire_event(graph->state, p, props, rng);
            ++fired;
        }
        if (events) *events = fired;
        return TRIADIC_OK;
    });
}

triadic_status triadic_graph_write_edges(const triadic_graph* graph, const char* path) {
    return guarded([&] {
        require(graph && path, "NULL argument");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw triadic::Error(triadic::ErrorCode::Io, std::string("cannot open '") + path + "'");
        triadic::write_edge_list(graph->state, out);
        out.flush();
        if (!out) throw triadic::Error(triadic::ErrorCode::Io, std::string("write failed for '") + path + "'");
        return TRIADIC_OK;
    });
}

triadic_status triadic_mfpt(const triadic_params* params, triadic_boundary kind, double a, double b,
                            size_t grid_points, double* x, double* t) {
    return guarded([&] {
        require(x && t, "NULL argument");
        triadic::MfptProblem problem{a, b,
                                     kind == TRIADIC_ABSORB_LEFT_REFLECT_RIGHT
                                         ? triadic::BoundaryKind::AbsorbLeftReflectRight
                                         : triadic::BoundaryKind::ReflectLeftAbsorbRight,
                                     grid_points};
        const auto sol = triadic::solve_mfpt(triadic::SdeSpec{to_params(params), true}, problem);
        std::copy(sol.x.begin(), sol.x.end(), x);
        std::copy(sol.T.begin(), sol.T.end(), t);
        return TRIADIC_OK;
    });
}

triadic_status triadic_ode_terminal(const triadic_params* params, double y0, double t_end, double step,
                                    double* out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        const auto run = triadic::integrate(to_params(params), y0, t_end, step);
        *out = run.trace.values.back();
        return TRIADIC_OK;
    });
}

triadic_status triadic_config_create(triadic_config** out) {
    return guarded([&] {
        require(out != nullptr, "out is NULL");
        *out = new triadic_config{};
        return TRIADIC_OK;
    });
}

void triadic_config_destroy(triadic_config* config) { delete config; }

triadic_status triadic_config_load(triadic_config* config, const char* path) {
    return guarded([&] {
        require(config && path, "NULL argument");
        config->config = triadic::load_config(path, config->config);
        return TRIADIC_OK;
    });
}

triadic_status triadic_config_set(triadic_config* config, const char* key, const char* value) {
    return guarded([&] {
        require(config && key && value, "NULL argument");
        triadic::apply_setting(config->config, key, value);
        return TRIADIC_OK;
    });
}

triadic_status triadic_config_validate(const triadic_config* config, char* buffer, size_t capacity, size_t* needed,
                                       size_t* count) {
    return guarded([&] {
        require(config != nullptr, "config is NULL");
        const auto violations = triadic::validate(config->config);
        std::string text;
        for (const auto& v : violations) {
            if (!text.empty()) text += '\n';
            text += v;
        }
        if (count) *count = violations.size();
        return copy_text(text, buffer, capacity, needed);
    });
}

triadic_status triadic_config_serialize(const triadic_config* config, char* buffer, size_t capacity,
                                        size_t* needed) {
    return guarded([&] {
        require(config != nullptr, "config is NULL");
        return copy_text(triadic::serialize_config(config->config), buffer, capacity, needed);
    });
}

triadic_status triadic_run(const triadic_config* config, char* buffer, size_t capacity, size_t* needed) {
    return guarded([&] {
        require(config != nullptr, "config is NULL");
        return copy_text(triadic::run(config->config), buffer, capacity, needed);
    });
}

}  // extern "C"
