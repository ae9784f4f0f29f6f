// Copyright 2026 The udfsel Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


/* C interface to the udfsel planner and experiment harness. Every call
 * returns a status code; on failure udfsel_last_error() describes the error
 * for the calling thread. Strings returned through char** are owned by the
 * caller and released with udfsel_string_free. */

#ifndef UDFSEL_H_
#define UDFSEL_H_

#include <stddef.h>

#if defined(UDFSEL_BUILDING_LIBRARY)
#define UDFSEL_API __attribute__((visibility("default")))
#else
#define UDFSEL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum udfsel_status {
  UDFSEL_OK = 0,
  UDFSEL_VALIDATION_ERROR = 1, /* malformed input or configuration */
  UDFSEL_RUNTIME_ERROR = 2     /* infeasible instance or failed execution */
} udfsel_status;

/* Opaque run configuration holding the documented defaults. */
typedef struct udfsel_config udfsel_config;

UDFSEL_API udfsel_status udfsel_config_create(udfsel_config** out);
UDFSEL_API void udfsel_config_destroy(udfsel_config* config);

/* Applies key = value lines from a file or a string over current values. */
UDFSEL_API udfsel_status udfsel_config_load_file(udfsel_config* config,
                                                 const char* path);
UDFSEL_API udfsel_status udfsel_config_parse(udfsel_config* config,
                                             const char* text);
UDFSEL_API udfsel_status udfsel_config_set(udfsel_config* config,
                                           const char* key, const char* value);
UDFSEL_API udfsel_status udfsel_config_validate(const udfsel_config* config);
/* Canonical text form that parses back to the same configuration. */
UDFSEL_API udfsel_status udfsel_config_render(const udfsel_config* config,
                                              char** text_out);

/* Plans once and returns the strategy as JSON. */
UDFSEL_API udfsel_status udfsel_plan(const udfsel_config* config,
                                     char** json_out);
/* Runs the configured trials; returns the report as JSON and a one-line
 * summary. summary_out may be NULL. */
UDFSEL_API udfsel_status udfsel_run(const udfsel_config* config,
                                    char** json_out, char** summary_out);
/* Runs the trials at each grid value of axis (num, c, alpha or beta) and
 * returns CSV. A point that fails at run time gets a row of nan and its
 * message is left in udfsel_last_error() while the call still succeeds. */
UDFSEL_API udfsel_status udfsel_sweep(const udfsel_config* config,
                                      const char* axis, const double* grid,
                                      size_t grid_size, char** csv_out);
/* Applies the column policy and returns the chosen column with per-group
 * estimates as JSON. */
UDFSEL_API udfsel_status udfsel_select_column(const udfsel_config* config,
                                              char** json_out);

/* Message of the last failed call on this thread, or "". */
UDFSEL_API const char* udfsel_last_error(void);
UDFSEL_API void udfsel_string_free(char* text);

#ifdef __cplusplus
}
#endif

#endif /* UDFSEL_H_ */
