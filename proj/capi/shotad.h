// Copyright (c) 2026 The shotad authors
// SPDX-License-Identifier: Apache-2.0
//
// C interface to the shotad pipeline. Opaque run handles, integer status
// codes, no C++ types across the boundary. Status codes double as process
// exit codes: 0 ok, 2 configuration, 3 missing artifact, 4 backend, 1 other.

#ifndef SHOTAD_CAPI_SHOTAD_H_
#define SHOTAD_CAPI_SHOTAD_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SHOTAD_OK 0
#define SHOTAD_ERR_OTHER 1
#define SHOTAD_ERR_CONFIG 2
#define SHOTAD_ERR_MISSING_ARTIFACT 3
#define SHOTAD_ERR_BACKEND 4

typedef struct shotad_run shotad_run;

const char* shotad_version(void);

// Pipeline stage names in dependency order; NULL once index runs past the
// end. Index 0 is "ingest".
const char* shotad_stage_name(int index);

// Parses the JSON config and opens (or reopens) the run directory. On
// failure returns NULL and, when errbuf is non-NULL, writes a NUL-terminated
// message truncated to errlen.
shotad_run* shotad_run_open(const char* config_json, char* errbuf,
                            size_t errlen);

void shotad_run_close(shotad_run* run);

// Runs one stage. `ran` (optional) is set to 1 when the stage executed and
// 0 when its cache key was unchanged and it was skipped.
int shotad_run_stage(shotad_run* run, const char* stage, int* ran);

// All stages in order; the configured mode picks stage2 or assist.
int shotad_run_all(shotad_run* run);

// Message of the last failed call on this handle; empty string when the
// last call succeeded. Owned by the handle.
const char* shotad_run_last_error(const shotad_run* run);

// Loads a stage artifact into a malloc'd NUL-terminated buffer (*out,
// *len excludes the terminator). Free with shotad_free.
int shotad_run_read_artifact(shotad_run* run, const char* stage, char** out,
                             size_t* len);

void shotad_free(void* p);

// Pure kernels, exposed for reuse and cross-language checks.

// cost: row-major N x N volume with N = n_patches entries per side.
double shotad_matching_score(const double* cost, int n_patches, double tau);

// a, b: h*w*c floats, row-major (row, column, channel). Writes the N x N
// volume (N = h*w) into out. Inputs are L2-normalized per patch first.
// Returns a status code; n must be odd and positive.
int shotad_cost_volume(const float* a, const float* b, int h, int w, int c,
                       int n, double* out);

// Factor name for an effective scale value: "facial_expression",
// "key_object", "environment", or "none". Static storage.
const char* shotad_compose_factor(double s_eff);

long long shotad_stage2_word_limit(double duration, double speed_factor);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // SHOTAD_CAPI_SHOTAD_H_
