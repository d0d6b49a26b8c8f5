/* C interface to the triadic closure network model library.
 *
 * Objects are opaque handles created by *_create and released by
 * *_destroy. Every fallible call returns a triadic_status; on failure
 * triadic_last_error() holds a message for the calling thread.
 *
 * Functions that produce text take (buffer, capacity, needed): `needed`
 * receives the full length including the terminating NUL, and
 * TRIADIC_ERR_BUFFER_TOO_SMALL is returned when capacity is short.
 */
#ifndef TRIADIC_TRIADIC_H
#define TRIADIC_TRIADIC_H

#include <stddef.h>
#include <stdint.h>

#if defined(TRIADIC_BUILDING_LIBRARY)
#define TRIADIC_API __attribute__((visibility("default")))
#else
#define TRIADIC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum triadic_status {
    TRIADIC_OK = 0,
    TRIADIC_ERR_INVALID_ARGUMENT = 1,
    TRIADIC_ERR_DEGENERATE_REGIME = 2,
    TRIADIC_ERR_STUCK_STATE = 3,
    TRIADIC_ERR_SINGULAR_SYSTEM = 4,
    TRIADIC_ERR_IO = 5,
    TRIADIC_ERR_BUFFER_TOO_SMALL = 6,
    TRIADIC_ERR_INTERNAL = 7
} triadic_status;

typedef enum triadic_regime {
    TRIADIC_MONOSTABLE = 0,
    TRIADIC_BISTABLE = 1
} triadic_regime;

typedef enum triadic_init_kind {
    TRIADIC_INIT_ERDOS_RENYI = 0, /* arg: edge probability */
    TRIADIC_INIT_EDGE_COUNT = 1,  /* arg: number of edges */
    TRIADIC_INIT_HALF_EDGES = 2   /* arg ignored */
} triadic_init_kind;

typedef enum triadic_boundary {
    TRIADIC_REFLECT_LEFT_ABSORB_RIGHT = 0,
    TRIADIC_ABSORB_LEFT_REFLECT_RIGHT = 1
} triadic_boundary;

typedef struct triadic_params {
    int32_t n;
    double c1;
    double c2;
    double c3;
} triadic_params;

typedef struct triadic_chain triadic_chain;
typedef struct triadic_graph triadic_graph;
typedef struct triadic_config triadic_config;

TRIADIC_API const char* triadic_version(void);
TRIADIC_API const char* triadic_status_string(triadic_status status);
TRIADIC_API const char* triadic_last_error(void);

/* model core */
TRIADIC_API triadic_status triadic_params_validate(const triadic_params* params);
TRIADIC_API triadic_status triadic_drift(const triadic_params* params, double p, double* out);
TRIADIC_API triadic_status triadic_f_ratio(const triadic_params* params, double p, double* out);
/* roots must hold 3 values. accept_degenerate != 0 maps a repeated root to
 * the monostable outcome instead of TRIADIC_ERR_DEGENERATE_REGIME. */
TRIADIC_API triadic_status triadic_solve_cubic(const triadic_params* params, int accept_degenerate,
                                               double* roots, size_t* count, triadic_regime* regime);

/* macroscale birth-death chain */
TRIADIC_API triadic_status triadic_chain_create(const triadic_params* params, triadic_chain** out);
TRIADIC_API void triadic_chain_destroy(triadic_chain* chain);
/* Number of states, N + 1. */
TRIADIC_API size_t triadic_chain_states(const triadic_chain* chain);
TRIADIC_API triadic_status triadic_chain_rates(const triadic_chain* chain, double* birth, double* death,
                                               size_t len);
TRIADIC_API triadic_status triadic_chain_stationary(const triadic_chain* chain, double* probs, size_t len);
/* tau[target] is set to 0. */
TRIADIC_API triadic_status triadic_chain_exit_times(const triadic_chain* chain, size_t target, double* tau,
                                                    size_t len);

/* microscale graph state */
TRIADIC_API triadic_status triadic_graph_create(int32_t n, triadic_init_kind kind, double arg, uint64_t seed,
                                                triadic_graph** out);
TRIADIC_API void triadic_graph_destroy(triadic_graph* graph);
TRIADIC_API triadic_status triadic_graph_edge_count(const triadic_graph* graph, int64_t* out);
TRIADIC_API triadic_status triadic_graph_open_wedges(const triadic_graph* graph, int64_t* out);
/* Runs the SSA for `duration` time units from the current state. */
TRIADIC_API triadic_status triadic_graph_advance(triadic_graph* graph, const triadic_params* params,
                                                 double duration, uint64_t seed, uint64_t* events);
TRIADIC_API triadic_status triadic_graph_write_edges(const triadic_graph* graph, const char* path);

/* Langevin mean first passage time on `grid_points` nodes; x and t must
 * hold grid_points values each. */
TRIADIC_API triadic_status triadic_mfpt(const triadic_params* params, triadic_boundary kind, double a, double b,
                                        size_t grid_points, double* x, double* t);

/* Reaction-rate ODE terminal value. */
TRIADIC_API triadic_status triadic_ode_terminal(const triadic_params* params, double y0, double t_end,
                                                double step, double* out);

/* experiment configuration and runner */
TRIADIC_API triadic_status triadic_config_create(triadic_config** out);
TRIADIC_API void triadic_config_destroy(triadic_config* config);
TRIADIC_API triadic_status triadic_config_load(triadic_config* config, const char* path);
TRIADIC_API triadic_status triadic_config_set(triadic_config* config, const char* key, const char* value);
/* Violations joined by newlines; count receives how many there are. */
TRIADIC_API triadic_status triadic_config_validate(const triadic_config* config, char* buffer, size_t capacity,
                                                   size_t* needed, size_t* count);
TRIADIC_API triadic_status triadic_config_serialize(const triadic_config* config, char* buffer,
                                                    size_t capacity, size_t* needed);
/* Runs the configured experiment; buffer receives the JSON summary. */
TRIADIC_API triadic_status triadic_run(const triadic_config* config, char* buffer, size_t capacity,
                                       size_t* needed);

#ifdef __cplusplus
}
#endif

#endif /* TRIADIC_TRIADIC_H */
