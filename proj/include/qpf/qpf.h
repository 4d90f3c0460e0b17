// Copyright 2026 The qpf-bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/*
 * C interface to qpf-bench. Every object is an opaque handle created by a
 * *_create function and released by the matching *_destroy. Every function
 * that can fail returns a qpf_status; on failure qpf_last_error() describes
 * the problem (per thread, valid until the next failing call).
 */
#ifndef QPF_QPF_H
#define QPF_QPF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QPF_API __declspec(dllexport)
#else
#define QPF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* The values double as CLI exit codes. */
typedef enum qpf_status {
    QPF_OK = 0,
    QPF_ERROR_USAGE = 1,     /* bad argument, index, or configuration */
    QPF_ERROR_DATA = 2,      /* missing, malformed, or unwritable files */
    QPF_ERROR_NUMERICAL = 3, /* non-finite loss during training */
    QPF_ERROR_INTERNAL = 4
} qpf_status;

QPF_API const char *qpf_version(void);
QPF_API const char *qpf_last_error(void);

typedef enum qpf_log_level { QPF_LOG_INFO = 0, QPF_LOG_WARNING = 1, QPF_LOG_ERROR = 2 } qpf_log_level;
typedef void (*qpf_log_fn)(qpf_log_level level, const char *message, void *user);

/* Routes library messages to `fn` (NULL restores the stderr default). */
QPF_API void qpf_set_log_callback(qpf_log_fn fn, void *user);

/* ---- Statevector simulator --------------------------------------------- */

typedef struct qpf_state qpf_state;

/* |0...0> on 1..12 qubits. */
QPF_API qpf_status qpf_state_create(int n_qubits, qpf_state **out);
QPF_API void qpf_state_destroy(qpf_state *state);
QPF_API int qpf_state_qubits(const qpf_state *state);
QPF_API qpf_status qpf_state_apply_ry(qpf_state *state, int qubit, double theta);
QPF_API qpf_status qpf_state_apply_cnot(qpf_state *state, int control, int target);
QPF_API qpf_status qpf_state_expect_z(const qpf_state *state, int qubit, double *out);
/* Copies 2^n interleaved (re, im) pairs; `capacity` counts doubles. */
QPF_API qpf_status qpf_state_amplitudes(const qpf_state *state, double *out, size_t capacity);

/* ---- Pre-processing filter --------------------------------------------- */

typedef struct qpf_filter qpf_filter;

/*
 * circuit:    CNOT list such as "cnot:0,1 cnot:2,3"; NULL for the default.
 * angle_scale: radians per unit pixel; pass 0 for the default (pi).
 * window_map: qubits for TL,TR,BL,BR such as "0,1,2,3"; NULL for the default.
 */
QPF_API qpf_status qpf_filter_create(const char *circuit, double angle_scale, const char *window_map,
                                     qpf_filter **out);
QPF_API void qpf_filter_destroy(qpf_filter *filter);
/* Four pixels in [0, 1] (TL, TR, BL, BR) to four <Z> values. */
QPF_API qpf_status qpf_filter_window(const qpf_filter *filter, const double pixels[4], double out[4]);
/* Same, always by statevector simulation. */
QPF_API qpf_status qpf_filter_window_statevector(const qpf_filter *filter, const double pixels[4], double out[4]);
/* m x m row-major image to 4 x (m/2) x (m/2) channel-major features;
 * `out` must hold m * m doubles. */
QPF_API qpf_status qpf_filter_image(const qpf_filter *filter, const double *image, size_t m, double *out);

/* ---- Experiment configuration ------------------------------------------ */

typedef struct qpf_config qpf_config;

QPF_API qpf_status qpf_config_create(qpf_config **out);
QPF_API void qpf_config_destroy(qpf_config *config);
/* Keys as in the config file (dataset, arms, protocol, trials, pairs,
 * epochs, ...); '-' may replace '_'. */
QPF_API qpf_status qpf_config_set(qpf_config *config, const char *key, const char *value);
QPF_API qpf_status qpf_config_load_file(qpf_config *config, const char *path);
/* Writes the NUL-terminated value into buf; QPF_ERROR_USAGE if it does not fit. */
QPF_API qpf_status qpf_config_get(const qpf_config *config, const char *key, char *buf, size_t size);

/* ---- Commands ------------------------------------------------------------ */

typedef void (*qpf_progress_fn)(size_t done, size_t total, void *user);

typedef struct qpf_run_result {
    double nn_mean;     /* NaN when the arm did not run */
    double qpfnn_mean;  /* NaN when the arm did not run */
    size_t rows;
} qpf_run_result;

/* Runs the configured protocol ("full" sweep or "small-sample" trials) and
 * writes manifest.txt, journal.csv, results.csv, timings.csv and renders into
 * out_dir. `command` is recorded in the manifest. */
QPF_API qpf_status qpf_run(const qpf_config *config, const char *out_dir, const char *command,
                           qpf_progress_fn progress, void *user, qpf_run_result *result);

/* Filters both partitions of the configured dataset into a feature cache. */
QPF_API qpf_status qpf_filter_dataset(const qpf_config *config, const char *out_dir, size_t *train_count,
                                      size_t *test_count);

typedef struct qpf_convert_result {
    size_t train_count;
    size_t test_count;
    int n_classes;
} qpf_convert_result;

/* GTSRB tree to IDX. Annotation lists may be NULL to auto-detect. */
QPF_API qpf_status qpf_convert_gtsrb(const char *src_dir, const char *const *train_annotations, size_t n_train,
                                     const char *const *test_annotations, size_t n_test, const char *out_dir,
                                     qpf_convert_result *result);

/* Aggregates every results.csv under results_dir into summary CSV text and
 * re-renders heatmaps and trial curves. Writes the summary to out_csv unless
 * it is NULL. *cells receives the number of populated cells; an empty
 * directory gives QPF_ERROR_DATA. */
QPF_API qpf_status qpf_report(const char *results_dir, const char *out_csv, size_t *cells);

#ifdef __cplusplus
}
#endif

#endif /* QPF_QPF_H */
