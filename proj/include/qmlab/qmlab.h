/*
 * Copyright 2026 The qmlab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to qmlab. Every call returns a qmlab_status; on failure the
 * message is available from qmlab_last_error() on the calling thread until
 * the next failing call. Handles are opaque and owned by the caller. */

#ifndef QMLAB_QMLAB_H
#define QMLAB_QMLAB_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define QMLAB_API __declspec(dllexport)
#else
#define QMLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qmlab_status {
  QMLAB_OK = 0,
  QMLAB_ERR_INVALID_ARGUMENT = 1,
  QMLAB_ERR_NOT_CONVERGED = 2,
  QMLAB_ERR_NUMERICAL = 3,
  QMLAB_ERR_IO = 4,
  QMLAB_ERR_INTERNAL = 5
} qmlab_status;

typedef enum qmlab_verdict {
  QMLAB_VERDICT_PASS = 0,
  QMLAB_VERDICT_FAIL = 1,
  QMLAB_VERDICT_INCONCLUSIVE = 2
} qmlab_verdict;

typedef struct qmlab_config qmlab_config;
typedef struct qmlab_report qmlab_report;
typedef struct qmlab_field qmlab_field;

/* Field file flags (see qmlab_field_shape). */
#define QMLAB_FIELD_CYLINDER 1u
#define QMLAB_FIELD_PLANE_EXTENT 2u

QMLAB_API const char* qmlab_version(void);
/* Message of the last failure on this thread, "" if none. */
QMLAB_API const char* qmlab_last_error(void);
/* Worker count used for independent runs (QMLAB_THREADS or hardware). */
QMLAB_API int qmlab_thread_count(void);

/* Configuration: INI text with [section] headers and key = value lines. */
QMLAB_API qmlab_status qmlab_config_load(const char* path, qmlab_config** out);
QMLAB_API qmlab_status qmlab_config_parse(const char* text, qmlab_config** out);
/* key is "section.key". */
QMLAB_API qmlab_status qmlab_config_set(qmlab_config* config, const char* key,
                                        const char* value);
QMLAB_API void qmlab_config_free(qmlab_config* config);

/* Runs one command: "ground-state", "cascade", "quasimode",
 * "residual-scaling", "evolve", "geometric-rate", "geometric-blowup" or
 * "projective". config may be NULL (all defaults). */
QMLAB_API qmlab_status qmlab_run(const char* command, const qmlab_config* config,
                                 qmlab_report** out);
QMLAB_API qmlab_status qmlab_report_verdict(const qmlab_report* report,
                                            qmlab_verdict* out);
QMLAB_API qmlab_status qmlab_report_fitted_rate(const qmlab_report* report, double* out);
QMLAB_API size_t qmlab_report_check_count(const qmlab_report* report);
/* Pointers stay valid while the report lives. */
QMLAB_API qmlab_status qmlab_report_check(const qmlab_report* report, size_t index,
                                          const char** name, qmlab_verdict* verdict,
                                          const char** detail);
/* Report as JSON; release with qmlab_string_free. */
QMLAB_API qmlab_status qmlab_report_json(const qmlab_report* report, char** out);
/* Writes report.json, CSV tables and field files under dir. */
QMLAB_API qmlab_status qmlab_report_write(const qmlab_report* report, const char* dir);
QMLAB_API void qmlab_report_free(qmlab_report* report);
QMLAB_API void qmlab_string_free(char* s);

/* Binary field files. */
QMLAB_API qmlab_status qmlab_field_load(const char* path, qmlab_field** out);
QMLAB_API qmlab_status qmlab_field_save(const qmlab_field* field, const char* path);
QMLAB_API qmlab_status qmlab_field_shape(const qmlab_field* field, uint32_t* n0,
                                         uint32_t* n1, uint32_t* flags);
/* 2 * n0 * n1 doubles, (re, im) interleaved, row-major. */
QMLAB_API qmlab_status qmlab_field_data(const qmlab_field* field, const double** data);
QMLAB_API void qmlab_field_free(qmlab_field* field);

#ifdef __cplusplus
}
#endif

#endif /* QMLAB_QMLAB_H */
