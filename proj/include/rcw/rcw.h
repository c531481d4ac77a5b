/* C interface to the random centrifugal walk library.
 *
 * Every function that can fail returns an rcw_status; on failure the message
 * is available from rcw_last_error() on the same thread. Objects are opaque
 * handles released with the matching *_free function. Strings returned
 * through char** are owned by the caller and released with rcw_string_free.
 */
#ifndef RCW_RCW_H
#define RCW_RCW_H

#include <stddef.h>
#include <stdint.h>

#if defined(RCW_BUILDING_LIBRARY)
#define RCW_API __attribute__((visibility("default")))
#else
#define RCW_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rcw_status {
  RCW_OK = 0,
  RCW_E_INVALID_ARGUMENT = 1,
  RCW_E_NOT_CONNECTED = 2,
  RCW_E_INCONSISTENT_DEGREES = 3,
  RCW_E_DISCONNECTED_RING = 4,
  RCW_E_ROUND_LIMIT_EXCEEDED = 5,
  RCW_E_DEGENERATE_NETWORK = 6,
  RCW_E_MASS_EXHAUSTED = 7,
  RCW_E_NOT_OUTWARD_NEIGHBOR = 8,
  RCW_E_INFEASIBLE_STAY = 9,
  RCW_E_NOT_UNIFORMLY_CONNECTED = 10,
  RCW_E_AAP_FAILURE = 11,
  RCW_E_CYCLIC_HOP_GRAPH = 12,
  RCW_E_INVALID_DISTRIBUTION = 13,
  RCW_E_PARSE = 14,
  RCW_E_IO = 15,
  RCW_E_INTERNAL = 99
} rcw_status;

typedef struct rcw_network rcw_network;
typedef struct rcw_distribution rcw_distribution;
typedef struct rcw_report rcw_report;

RCW_API const char* rcw_last_error(void);
RCW_API const char* rcw_status_name(rcw_status status);
RCW_API void rcw_string_free(char* text);

/* Networks */
RCW_API rcw_status rcw_network_load(const char* path, rcw_network** out);
RCW_API rcw_status rcw_network_parse(const char* text, rcw_network** out);
RCW_API rcw_status rcw_network_grid(int radius, rcw_network** out);
/* gamma holds either ring_count-1 entries (rings 1..R) or ring_count entries. */
RCW_API rcw_status rcw_network_uniform_rings(const size_t* sizes, size_t ring_count, const size_t* delta,
                                             size_t delta_len, const size_t* gamma, size_t gamma_len,
                                             int distance2, rcw_network** out);
RCW_API rcw_status rcw_network_geometric(uint32_t rings, uint32_t per_ring, double beta, uint64_t seed,
                                         rcw_network** out);
/* edges: edge_count (u, v) pairs, flattened. weights may be NULL (unit). */
RCW_API rcw_status rcw_network_edge_list(size_t node_count, const uint32_t* edges, size_t edge_count,
                                         const double* weights, rcw_network** out);
RCW_API void rcw_network_free(rcw_network* net);
RCW_API size_t rcw_network_node_count(const rcw_network* net);
/* 0 for arbitrary graphs. */
RCW_API size_t rcw_network_ring_count(const rcw_network* net);
/* 1 if every ring shares its up and down degrees, 0 if not, -1 for graphs. */
RCW_API int rcw_network_uniformly_connected(const rcw_network* net);

/* Distributions (resolved against a network when a run starts) */
RCW_API rcw_status rcw_distribution_uniform(rcw_distribution** out);
RCW_API rcw_status rcw_distribution_pid(double p0, rcw_distribution** out);
RCW_API rcw_status rcw_distribution_explicit(const double* p, size_t len, rcw_distribution** out);
RCW_API rcw_status rcw_distribution_load(const char* path, rcw_distribution** out);
/* "uni", "pid" (with p0) or a distribution file path. */
RCW_API rcw_status rcw_distribution_from_arg(const char* arg, double p0, rcw_distribution** out);
RCW_API void rcw_distribution_free(rcw_distribution* dist);

/* Hop policy file (s_1..s_{R-1}); *values is released with rcw_array_free. */
RCW_API rcw_status rcw_policy_load(const char* path, double** values, size_t* len);
RCW_API void rcw_array_free(double* values);

/* Runs */
typedef struct rcw_run_options {
  const char* sampler; /* tree, tree-excl, grid, rings-d1, rings-d2, overlay */
  uint64_t samples;
  uint64_t seed;
  uint32_t source; /* tree samplers */
  uint32_t workers;
  int force;       /* rings-d1 on a non-uniform network */
  int source_stay; /* rings-d2 with p_0 > 0 */
  const double* policy; /* s_1..s_{R-1}; NULL for the default policy */
  size_t policy_len;
} rcw_run_options;

RCW_API void rcw_run_options_init(rcw_run_options* options);
/* dist may be NULL for the tree samplers. */
RCW_API rcw_status rcw_run(const rcw_network* net, const rcw_distribution* dist,
                           const rcw_run_options* options, rcw_report** out);
/* Same as rcw_run without drawing samples: target and exact laws only. */
RCW_API rcw_status rcw_oracle(const rcw_network* net, const rcw_distribution* dist,
                              const rcw_run_options* options, rcw_report** out);

typedef struct rcw_row {
  uint32_t node;
  uint32_t ring;
  double expected_p;
  double oracle_p;
  uint64_t count;
  double empirical_p;
  double rel_error; /* NaN when the expected count is below 5 */
} rcw_row;

typedef struct rcw_summary {
  double mean_rel_error;
  double max_rel_error;
  double chi2;
  uint64_t dof;
  double p_value;
  double oracle_chi2;
  double oracle_p_value;
  uint64_t samples;
  uint64_t seed;
  uint32_t max_hops;
  double mean_hops;
  uint32_t hop_bound;
  double max_ring_spread;
} rcw_summary;

enum { RCW_CSV_COMPACT = 0, RCW_CSV_FULL = 1, RCW_CSV_ORACLE = 2 };

RCW_API size_t rcw_report_row_count(const rcw_report* report);
RCW_API rcw_status rcw_report_row(const rcw_report* report, size_t index, rcw_row* out);
RCW_API rcw_status rcw_report_summary(const rcw_report* report, rcw_summary* out);
RCW_API rcw_status rcw_report_csv(const rcw_report* report, int layout, char** out);
RCW_API rcw_status rcw_report_summary_json(const rcw_report* report, char** out);
RCW_API void rcw_report_free(rcw_report* report);

/* Attachment points */
typedef struct rcw_success_row {
  double beta;
  double success_rate;
  double halls_rate;
  uint32_t trials;
} rcw_success_row;

/* Writes beta_count rows into out. */
RCW_API rcw_status rcw_aap_success_rate(const double* betas, size_t beta_count, uint32_t trials,
                                        uint64_t seed, uint32_t rings, uint32_t per_ring,
                                        rcw_success_row* out);
RCW_API rcw_status rcw_success_csv(const rcw_success_row* rows, size_t count, int with_halls, char** out);
/* One AAP run on a ring network. *connected receives 1 on success; *failed
 * receives the number of nodes left with unconnected points. */
RCW_API rcw_status rcw_aap_run(const rcw_network* net, uint64_t seed, int* connected, size_t* failed);

/* Experiment config (JSON). *out receives the summary JSON or the success
 * table CSV; may be NULL. */
RCW_API rcw_status rcw_experiment_run(const char* config_path, char** out);

#ifdef __cplusplus
}
#endif

#endif
