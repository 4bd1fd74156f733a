/* netinfer — networked-dynamical-system simulation and inverse inference.
 *
 * C interface of the shared library. All functions return a status code;
 * results are delivered through out-parameters. Strings returned through
 * char** out-parameters are heap-allocated and must be released with
 * netinfer_string_free(). Handles are opaque and freed with their matching
 * *_free() function. Error details for the most recent failing call on the
 * current thread are available via netinfer_last_error().
 *
 * Matrices cross this interface as JSON arrays of row arrays; trajectories
 * as either the CSV table (header: k,t,node,dim,value) or a JSON envelope
 * with metadata. See the README for the schemas.
 */
#ifndef NETINFER_H
#define NETINFER_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define NETINFER_API __declspec(dllexport)
#elif defined(__GNUC__)
#define NETINFER_API __attribute__((visibility("default")))
#else
#define NETINFER_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum netinfer_status {
  NETINFER_OK = 0,
  NETINFER_ERR_INVALID_ARGUMENT = 1,
  NETINFER_ERR_SINGULAR = 2,
  NETINFER_ERR_DIVERGENT_SERIES = 3,
  NETINFER_ERR_NO_CONVERGENCE = 4,
  NETINFER_ERR_NON_DIAGONALIZABLE = 5,
  NETINFER_ERR_EMPTY_INDEX_SET = 6,
  NETINFER_ERR_OVERFLOW = 7,
  NETINFER_ERR_IO = 8,
  NETINFER_ERR_INTERNAL = 9
} netinfer_status;

typedef struct netinfer_system netinfer_system;
typedef struct netinfer_trajectory netinfer_trajectory;

/* Library version string, e.g. "0.1.0". Static storage; do not free. */
NETINFER_API const char* netinfer_version(void);

/* Message of the most recent error on this thread. Static thread-local
 * storage; valid until the next failing call. */
NETINFER_API const char* netinfer_last_error(void);

NETINFER_API void netinfer_string_free(char* s);

/* ---- systems ------------------------------------------------------- */

/* Parses a system JSON document: keys adjacency, A, B, K (arrays of row
 * arrays), tau (seconds), optional ground-truth Q, P, R. */
NETINFER_API netinfer_status netinfer_system_parse(const char* json_text,
                                                   netinfer_system** out);

/* The built-in six-node demo system. */
NETINFER_API netinfer_status netinfer_system_example(netinfer_system** out);

NETINFER_API void netinfer_system_free(netinfer_system* sys);

/* Consensus-stability report (per-eigenvalue mode analysis) as JSON. */
NETINFER_API netinfer_status netinfer_system_check(const netinfer_system* sys,
                                                   char** report_json);

/* ---- simulation ---------------------------------------------------- */

/* Simulates T steps at period tau. sigma is the per-dimension noise std
 * (length n, may be NULL for noiseless). x0 (length N*n) may be NULL: it is
 * then drawn uniformly from [0, 1000] using the seed. tau <= 0 uses the
 * system's tau. */
NETINFER_API netinfer_status netinfer_simulate(
    const netinfer_system* sys, long T, double tau, const double* sigma,
    size_t sigma_len, const double* x0, size_t x0_len, uint64_t seed,
    netinfer_trajectory** out);

NETINFER_API netinfer_status netinfer_trajectory_parse_json(
    const char* json_text, netinfer_trajectory** out);
NETINFER_API netinfer_status netinfer_trajectory_parse_csv(
    const char* csv_text, netinfer_trajectory** out);
NETINFER_API netinfer_status netinfer_trajectory_to_json(
    const netinfer_trajectory* traj, char** json_text);
NETINFER_API netinfer_status netinfer_trajectory_to_csv(
    const netinfer_trajectory* traj, char** csv_text);
NETINFER_API void netinfer_trajectory_free(netinfer_trajectory* traj);

/* ---- inference ----------------------------------------------------- */

/* Transition-matrix estimation. options_json keys (all optional):
 *   gamma: [per-dimension noise variances] (defaults to the trajectory's
 *          recorded sigma^2)
 *   pattern: "auto" | "constant" | "linear" | "other"
 *   constrained: bool (force the constrained fit)
 *   confit: { max_iters, step_scale, tolerance, dykstra_rounds }
 * Result JSON: Ad, pattern diagnostics (eps1, eps2, threshold), branch,
 * condition number, constrained-fit diagnostics when used. */
NETINFER_API netinfer_status netinfer_infer_ad(
    const netinfer_trajectory* traj, const char* options_json,
    char** result_json);

/* Continuous-matrix recovery from an Ad matrix (JSON array of rows).
 * Result JSON: Ac, terms_used, residual, converged, tau_max,
 * uniqueness_warning. */
NETINFER_API netinfer_status netinfer_infer_ac(const char* ad_json, double tau,
                                               char** result_json);

/* Component decoupling of an Ac matrix (JSON array of rows).
 * options_json keys (optional): eps_z_rel, alpha, k_bar, t_bar,
 * perturb_rel, eps_L. Result JSON: A, W, Z, L_tilde, L, B, K,
 * laplacian_simple. */
NETINFER_API netinfer_status netinfer_decouple(const char* ac_json, int N,
                                               int n, int m, uint64_t seed,
                                               const char* options_json,
                                               char** result_json);

/* Inverse LQ from a factors document {A, B, K, L, N, n, m} (the decouple
 * result is accepted directly). Result JSON: Q, P, R, kernel_residual,
 * cone_violation, rowsum_residual, r_diagnostics. */
NETINFER_API netinfer_status netinfer_inverse_lq(const char* factors_json,
                                                 int symmetric,
                                                 char** result_json);

/* ---- benchmark harness --------------------------------------------- */

/* Runs a sweep described by config_json (see README) and writes
 * results.csv, summary.json, diagnostics.jsonl into out_dir (overrides the
 * config's out_dir when non-NULL). Returns the summary JSON. */
NETINFER_API netinfer_status netinfer_bench(const char* config_json,
                                            const char* out_dir,
                                            char** summary_json);

#ifdef __cplusplus
}
#endif

#endif /* NETINFER_H */
