/* Copyright (c) 2026 mcrand contributors
 * SPDX-License-Identifier: Apache-2.0
 *
 * C interface to mcrand. Every function that can fail returns an
 * mcrand_status; on failure mcrand_last_error() describes the problem for
 * the calling thread. Strings returned through char** are owned by the
 * caller and released with mcrand_free_string().
 */
#ifndef MCRAND_MCRAND_H
#define MCRAND_MCRAND_H

#include <stddef.h>
#include <stdint.h>

#if defined(MCRAND_BUILDING_LIBRARY)
#define MCRAND_API __attribute__((visibility("default")))
#else
#define MCRAND_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mcrand_status {
    MCRAND_OK = 0,
    MCRAND_E_ARGUMENT = 1,
    MCRAND_E_DATA = 2,
    MCRAND_E_NUMERIC = 3,
    MCRAND_E_CONFIG = 4,
    MCRAND_E_CAPACITY = 5,
    MCRAND_E_IO = 6,
    MCRAND_E_INTERNAL = 7
} mcrand_status;

typedef enum mcrand_outcome {
    MCRAND_OUTCOME_AUTO = -1,
    MCRAND_OUTCOME_CONTINUOUS = 0,
    MCRAND_OUTCOME_BINARY = 1,
    MCRAND_OUTCOME_SURVIVAL = 2
} mcrand_outcome;

typedef enum mcrand_score {
    MCRAND_SCORE_DEFAULT = -1, /* natural score of the outcome */
    MCRAND_SCORE_IDENTITY = 0,
    MCRAND_SCORE_BINARY = 1,
    MCRAND_SCORE_LOGRANK = 2,
    MCRAND_SCORE_GEHAN = 3
} mcrand_score;

typedef enum mcrand_mode {
    MCRAND_MODE_CONDITIONAL = 0,
    MCRAND_MODE_UNCONDITIONAL = 1
} mcrand_mode;

typedef enum mcrand_arm { MCRAND_ARM_A = 0, MCRAND_ARM_B = 1, MCRAND_ARM_UNASSIGNED = 2 } mcrand_arm;

typedef struct mcrand_dataset mcrand_dataset;
typedef struct mcrand_gst_plan mcrand_gst_plan;

typedef struct mcrand_patient {
    int institution; /* zero-based */
    int arm;         /* mcrand_arm */
    double value;    /* y, or follow-up time for survival */
    int event;       /* survival only: 1 death, 0 censored */
} mcrand_patient;

typedef struct mcrand_dataset_info {
    int block_size;
    int num_blocks;
    int num_institutions;
    int num_patients;
    int outcome; /* mcrand_outcome */
} mcrand_dataset_info;

typedef struct mcrand_test_result {
    int mode; /* mcrand_mode */
    double statistic;
    double mean;
    double variance;
    double z;
    double p_one_sided;
    double p_two_sided;
    double effect_d;
    int degenerate;
    double unconditional_mean;
    double unconditional_variance;
    int rank_var_n;
} mcrand_test_result;

MCRAND_API const char* mcrand_version(void);
MCRAND_API const char* mcrand_last_error(void);
MCRAND_API const char* mcrand_status_name(mcrand_status status);
MCRAND_API void mcrand_free_string(char* s);

/* Datasets. block_size 0 infers N from block 1. drop_partial discards an
 * incomplete final block instead of rejecting it. */
MCRAND_API mcrand_status mcrand_dataset_read_csv(const char* path, int outcome, int block_size,
                                                 int drop_partial, mcrand_dataset** out);
MCRAND_API mcrand_status mcrand_dataset_parse_csv(const char* text, size_t length, int outcome,
                                                  int block_size, int drop_partial,
                                                  mcrand_dataset** out);
/* Patients are in arrival order; consecutive runs of block_size form blocks. */
MCRAND_API mcrand_status mcrand_dataset_create(int outcome, int block_size, int num_institutions,
                                               const mcrand_patient* patients, size_t count,
                                               mcrand_dataset** out);
/* Permuted-block allocation of an arrival sequence of institution indices.
 * Outcomes are continuous zeros. */
MCRAND_API mcrand_status mcrand_dataset_randomize(int block_size, int num_institutions,
                                                  const int* institutions, size_t count,
                                                  uint64_t seed, uint64_t stream,
                                                  mcrand_dataset** out);
MCRAND_API void mcrand_dataset_free(mcrand_dataset* data);
MCRAND_API mcrand_status mcrand_dataset_info_get(const mcrand_dataset* data, mcrand_dataset_info* out);
MCRAND_API mcrand_status mcrand_dataset_patient(const mcrand_dataset* data, size_t index,
                                                mcrand_patient* out);
/* MCRAND_E_DATA with every violation in mcrand_last_error() when invalid. */
MCRAND_API mcrand_status mcrand_dataset_validate(const mcrand_dataset* data);
MCRAND_API mcrand_status mcrand_dataset_to_csv(const mcrand_dataset* data, char** out);

/* Inference. */
MCRAND_API mcrand_status mcrand_test(const mcrand_dataset* data, int score, int mode,
                                     mcrand_test_result* out);
MCRAND_API mcrand_status mcrand_analyze_json(const mcrand_dataset* data, int score, int mode,
                                             int sided, double alpha, char** out);
/* Exact enumeration; cap bounds the number of assignments visited. */
MCRAND_API mcrand_status mcrand_oracle_json(const mcrand_dataset* data, int score, int conditional,
                                            uint64_t cap, int include_distribution, char** out);
/* counts is P x K row-major (N_jk); n_a may be NULL. */
MCRAND_API mcrand_status mcrand_layout_oracle_json(int block_size, int num_blocks,
                                                   int num_institutions, const int* counts,
                                                   const int* n_a, char** out);

/* Group-sequential monitoring. c_final <= 0 selects the default constant;
 * look_blocks may be NULL for equally spaced looks. */
MCRAND_API mcrand_status mcrand_obf_boundary(int look, int num_looks, double c_final, double* out);
MCRAND_API mcrand_status mcrand_gst_plan_create(int num_looks, int max_blocks, double alpha,
                                                int sided, int direction, double c_final,
                                                const int* look_blocks, mcrand_gst_plan** out);
/* Flat key = value plan file. */
MCRAND_API mcrand_status mcrand_gst_plan_read(const char* path, mcrand_gst_plan** out);
MCRAND_API void mcrand_gst_plan_free(mcrand_gst_plan* plan);
MCRAND_API mcrand_status mcrand_gst_plan_boundary(const mcrand_gst_plan* plan, int look, double* out);
MCRAND_API mcrand_status mcrand_gst_plan_json(const mcrand_gst_plan* plan, char** out);
/* previous_json, when not NULL, is an earlier report to resume from. */
MCRAND_API mcrand_status mcrand_monitor_json(const mcrand_dataset* data, const mcrand_gst_plan* plan,
                                             int score, int mode, const char* previous_json,
                                             char** out);

/* Rerandomization confidence interval for the mortality ratio. */
MCRAND_API mcrand_status mcrand_ci_json(const mcrand_dataset* data, int reps, double level,
                                        uint64_t seed, int workers, char** out);

/* Runs a flat simulate config. Outputs are byte-identical for any workers. */
MCRAND_API mcrand_status mcrand_simulate(const char* config_text, size_t length, uint64_t seed,
                                         int workers, char** csv, char** json, char** manifest);

#ifdef __cplusplus
}
#endif

#endif
