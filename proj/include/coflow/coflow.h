/* Public C interface of libcoflow.
 *
 * All handles are opaque; every function that can fail returns a
 * coflow_status and leaves a human-readable message in coflow_last_error()
 * (thread local). Structured inputs and outputs travel as JSON strings;
 * strings returned through char** are heap-allocated and must be released
 * with coflow_string_free().
 */
#ifndef COFLOW_COFLOW_H
#define COFLOW_COFLOW_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum coflow_status {
  COFLOW_OK = 0,
  COFLOW_ERR_INVALID = 1,  /* invalid argument or broken invariant */
  COFLOW_ERR_PARSE = 2,    /* malformed JSON or trace input */
  COFLOW_ERR_IO = 3,       /* file not readable/writable */
  COFLOW_ERR_LIMIT = 4,    /* internal iteration cap exceeded */
  COFLOW_ERR_INTERNAL = 5  /* unexpected failure */
} coflow_status;

typedef struct coflow_instance coflow_instance;

/* Last error message for the calling thread; empty string if none. */
const char* coflow_last_error(void);

void coflow_string_free(char* s);

/* --- instances ---------------------------------------------------------- */

/* Parses the canonical instance JSON. */
coflow_status coflow_instance_parse(const char* json_text, coflow_instance** out);
coflow_status coflow_instance_read(const char* path, coflow_instance** out);
coflow_status coflow_instance_to_json(const coflow_instance* instance, char** out_json);
void coflow_instance_free(coflow_instance* instance);

/* Random instance from a generator config JSON:
 *   {"num_ports": L, "num_coflows": n, "size_spec": {...},
 *    "structure": "synthetic"|"trace:<path>", "seed": u64}            */
coflow_status coflow_generate(const char* gen_config_json, coflow_instance** out);

/* --- algorithms --------------------------------------------------------- */

/* Priority order from expected loads, with the primal/dual certificate:
 * {"pi": [coflow ids], "primal_c": [...], "alg1_cost": x,
 *  "dual_objective": x, "dual_feasible": bool}                         */
coflow_status coflow_order(const coflow_instance* instance, char** out_json);

/* LP lower bound: {"clp": x, "num_cuts": m, "iterations": r}. */
coflow_status coflow_lp(const coflow_instance* instance, char** out_json);

/* Simulation. options_json:
 *   {"policy": "cl"|"nc"|"rr"|"ro"|"ph", "realizations": R, "seed": u64,
 *    "events": bool, "realization": {...} (optional explicit volumes),
 *    "ph": {"num_queues":..,"q0_hi":..,"growth":..,"weight_decay":..}}
 * Returns {"policy":.., "mean":.., "std_error":..,
 *          "reps": [{"rep": i, "weighted_cct": v}, ...],
 *          "events": [...] when requested and R == 1}.                 */
coflow_status coflow_simulate(const coflow_instance* instance, const char* options_json,
                              char** out_json);

/* One realization of the instance's flow sizes as realization JSON. */
coflow_status coflow_sample_realization(const coflow_instance* instance,
                                        unsigned long long seed, char** out_json);

/* --- closed-form bounds -------------------------------------------------- */

/* Each writes the alpha bound; multiply by 4 for the ratio bound. */
coflow_status coflow_ub_gamma(unsigned num_ports, double gamma, double* out);
coflow_status coflow_ub_normal(unsigned num_ports, double eta_max, double* out);
coflow_status coflow_ub_general(unsigned num_ports, double p, double m_p, double mu_min,
                                double* out);

/* Empirical growth of the Pareto bottleneck ratio over port counts
 * 2, 4, ..., 2^num_points. Returns {"ports": [...], "mean_ratio": [...],
 * "slope": s, "pareto_shape": zeta}. Diagnostic only.                   */
coflow_status coflow_pareto_scaling_report(double eta, unsigned num_points,
                                           unsigned prefix_len, unsigned samples,
                                           unsigned long long seed, char** out_json);

/* --- experiments --------------------------------------------------------- */

/* Runs a full experiment grid from a config JSON (see README); writes
 * stats.csv / raw.csv / histograms.csv / run_meta.json into the config's
 * out_dir when set, and returns the stats rows as CSV text. */
coflow_status coflow_experiment_run(const char* config_json, char** out_stats_csv);

/* Recomputes the stats CSV from a raw.csv written by a previous run. */
coflow_status coflow_report(const char* raw_csv_path, char** out_stats_csv);

#ifdef __cplusplus
}
#endif

#endif /* COFLOW_COFLOW_H */
