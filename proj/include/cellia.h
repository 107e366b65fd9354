/*
 * cellia - sectored cellular interference alignment toolkit.
 *
 * C interface to the shared library: opaque handles, integer status codes,
 * UTF-8 JSON in and out. Every function is thread-compatible; handles are
 * immutable after creation and may be shared across threads. Error details
 * for the calling thread are available from cellia_last_error().
 */
#ifndef CELLIA_H
#define CELLIA_H

#include <stdint.h>

#if defined(_WIN32)
#define CELLIA_API __declspec(dllexport)
#else
#define CELLIA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef int cellia_status;
enum {
  CELLIA_OK = 0,
  CELLIA_ERR_INVALID_ARGUMENT = 1,
  CELLIA_ERR_DEGENERATE_INPUT = 2,
  CELLIA_ERR_BUDGET_EXCEEDED = 3,
  CELLIA_ERR_INTERNAL = 4,
  /* run completed and a report was produced, but a verdict failed */
  CELLIA_ERR_VERDICT_FAILED = 5
};

typedef struct cellia_graph cellia_graph;
typedef struct cellia_channels cellia_channels;
typedef struct cellia_design cellia_design;

CELLIA_API const char* cellia_version(void);
/* Message for the last failing call on this thread; empty string if none. */
CELLIA_API const char* cellia_last_error(void);
/* Frees any string returned through a char** out-parameter. */
CELLIA_API void cellia_string_free(char* s);

/* --- interference graph ------------------------------------------------ */

CELLIA_API cellia_status cellia_graph_build(int r, int include_intra, cellia_graph** out);
CELLIA_API void cellia_graph_free(cellia_graph* g);
CELLIA_API int cellia_graph_node_count(const cellia_graph* g);
CELLIA_API int cellia_graph_out_edge_count(const cellia_graph* g);
CELLIA_API int cellia_graph_intra_edge_count(const cellia_graph* g);
CELLIA_API int cellia_graph_triangle_count(const cellia_graph* g);
CELLIA_API cellia_status cellia_graph_to_json(const cellia_graph* g, char** out);
/* order: NULL for an undirected drawing, otherwise "pi-star" or "pi-s". */
CELLIA_API cellia_status cellia_graph_to_dot(const cellia_graph* g, const char* order,
                                             char** out);
CELLIA_API cellia_status cellia_order_ranks_json(const cellia_graph* g, const char* order,
                                                 char** out);

/* --- channels and beamformers ------------------------------------------ */

CELLIA_API cellia_status cellia_channels_sample(const cellia_graph* g, int M,
                                                uint64_t seed, cellia_channels** out);
CELLIA_API void cellia_channels_free(cellia_channels* c);

CELLIA_API cellia_status cellia_design_build(const cellia_graph* g,
                                             const cellia_channels* ch, uint64_t seed,
                                             cellia_design** out);
CELLIA_API void cellia_design_free(cellia_design* d);
CELLIA_API double cellia_design_average_streams(const cellia_design* d);
/* Zero-forcing residuals and desired-link conditioning over the
   raster-oriented out-of-cell edges. Either out-pointer may be NULL. */
CELLIA_API cellia_status cellia_design_verify(const cellia_graph* g,
                                              const cellia_channels* ch,
                                              const cellia_design* d,
                                              double* max_residual, double* min_sigma);

/* --- one-call runners (mirror the CLI subcommands) ---------------------- */

typedef struct {
  const char* command; /* graph|design|simulate|bounds|robust|verify|all */
  int r;
  int M;
  uint64_t seed;
  int seeds;
  const char* order; /* NULL/"" = command default, else "pi-star"|"pi-s" */
  const char* mode;  /* "no-intra" | "intra-joint" | "robust" */
  const double* snr_db;
  int n_snr;
  int trials;
  int include_intra;
  int exact_q1;
  int exhaustive_neighborhood;
  int random_states;
  int compound_m_factor;
  int emit_timestamp;
} cellia_run_config;

CELLIA_API void cellia_run_config_init(cellia_run_config* cfg);

/* Runs the command and returns the JSON report; csv/dot receive the
   per-node table and DOT drawing when the command produces them (pass NULL
   to skip). Returns CELLIA_ERR_VERDICT_FAILED when the report was produced
   but a verdict failed. */
CELLIA_API cellia_status cellia_run(const cellia_run_config* cfg, char** report_json,
                                    char** csv, char** dot);

#ifdef __cplusplus
}
#endif

#endif /* CELLIA_H */
