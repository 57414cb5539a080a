/*
 * C interface to the random-walk bandit library.
 *
 * Objects are opaque handles created by rwb_*_create / _load / _parse and
 * released by the matching _free. Every fallible call returns an rwb_status;
 * on failure rwb_last_error() describes the problem (thread-local, valid
 * until the next call on the same thread). Nodes are 0-based.
 */
#ifndef RWBANDIT_H
#define RWBANDIT_H

#include <stddef.h>

#if defined(RWB_BUILDING_LIBRARY)
#define RWB_API __attribute__((visibility("default")))
#else
#define RWB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rwb_status {
    RWB_OK = 0,
    RWB_ERR_CONFIG = 1,
    RWB_ERR_INVALID_INSTANCE = 2,
    RWB_ERR_ARGUMENT = 3,
    RWB_ERR_IO = 4,
    RWB_ERR_INTERNAL = 5
} rwb_status;

typedef struct rwb_chain rwb_chain;
typedef struct rwb_config rwb_config;

typedef struct rwb_validation {
    int ok;
    int nonnegative;
    int norm_ok;
    int primitive;
    int primitivity_waived;
    double inf_norm;
    double rho;
} rwb_validation;

/* Mean and standard deviation across seeds of the final regret of a batch. */
typedef struct rwb_run_summary {
    int runs;
    long long epochs;
    double final_regret_mean;
    double final_regret_std;
} rwb_run_summary;

RWB_API const char* rwb_last_error(void);
RWB_API const char* rwb_version(void);

/* Chains. M is row-major K*K; rho < 0 means "use the infinity norm of M". */
RWB_API rwb_status rwb_chain_create(int K, const double* M, double rho, int allow_non_primitive, rwb_chain** out);
RWB_API rwb_status rwb_chain_from_json(const char* text, rwb_chain** out);
RWB_API rwb_status rwb_chain_load(const char* path, rwb_chain** out);
/* name: "fig1" (uses eps), "exp9" (uses K), "knode" (uses K and T). */
RWB_API rwb_status rwb_chain_builtin(const char* name, double eps, int K, long long T, rwb_chain** out);
RWB_API void rwb_chain_free(rwb_chain* chain);
RWB_API int rwb_chain_size(const rwb_chain* chain);
/* Writes JSON into buf (NUL-terminated) when it fits; *needed gets the full size including NUL. */
RWB_API rwb_status rwb_chain_to_json(const rwb_chain* chain, char* buf, size_t cap, size_t* needed);

/* Validates a serialized chain without constructing it. */
RWB_API rwb_status rwb_validate_json(const char* text, rwb_validation* out);
RWB_API rwb_status rwb_chain_validate(const rwb_chain* chain, rwb_validation* out);

/* lengths: row-major K*(K+1) or NULL for unit lengths. out: K entries. */
RWB_API rwb_status rwb_chain_hitting_times(const rwb_chain* chain, const double* lengths, double* out, int K);
RWB_API rwb_status rwb_chain_first_passage(const rwb_chain* chain, int target, double* out, int K);
RWB_API rwb_status rwb_chain_centrality(const rwb_chain* chain, double* alpha, int K, double* alpha_min);
RWB_API rwb_status rwb_chain_kappa(const rwb_chain* chain, double* out);

RWB_API rwb_status rwb_tail_bound(double rho, long long B, double* out);
RWB_API rwb_status rwb_b_param(int K, long long T, double rho, double eps_prob, long long* out);

/* Experiment configs (JSON). */
RWB_API rwb_status rwb_config_parse(const char* text, rwb_config** out);
RWB_API rwb_status rwb_config_load(const char* path, rwb_config** out);
RWB_API void rwb_config_free(rwb_config* config);
RWB_API rwb_status rwb_config_set_horizon(rwb_config* config, long long T);
RWB_API rwb_status rwb_config_set_seeds(rwb_config* config, const unsigned long long* seeds, int count);

/*
 * Batch runs. For every seed S the directory gets <prefix>_seed<S>.csv
 * (per-epoch rows) and <prefix>_seed<S>_ledger.csv; the batch gets
 * <prefix>_summary.csv (t, regret_mean, regret_std). summary may be NULL.
 */
RWB_API rwb_status rwb_run_ucb(const rwb_config* config, const char* out_dir, rwb_run_summary* summary);
RWB_API rwb_status rwb_run_exp3(const rwb_config* config, const char* out_dir, rwb_run_summary* summary);

/* Two-node table over an eps grid at horizon T. */
RWB_API rwb_status rwb_lowerbound_report(const double* eps, int count, double T, const char* csv_path);

/* figure: "fig-adv" or "fig-sto". config may be NULL for defaults (T, seeds, workers). */
RWB_API rwb_status rwb_reproduce(const char* figure, const rwb_config* config, const char* csv_path,
                                 rwb_run_summary* summary);

RWB_API rwb_status rwb_plot(const char* csv_path, const char* svg_path, const char* title);

#ifdef __cplusplus
}
#endif

#endif /* RWBANDIT_H */
