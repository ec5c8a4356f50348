// Copyright 2026 The swapqkd Authors.
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

/* C interface to the swapqkd simulator. All handles are opaque; every call
 * that can fail returns a swq_status and leaves a message retrievable with
 * swq_last_error() on the calling thread. */

#ifndef SWAPQKD_SWAPQKD_H_
#define SWAPQKD_SWAPQKD_H_

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define SWQ_API __declspec(dllexport)
#else
#  define SWQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum swq_status {
  SWQ_OK = 0,
  SWQ_ERR_INVALID_ARGUMENT = 1,
  SWQ_ERR_CONFIG = 2,
  SWQ_ERR_PARSE = 3,
  SWQ_ERR_IO = 4,
  SWQ_ERR_INVALID_STATE = 5,
  SWQ_ERR_PROTOCOL = 6,
  SWQ_ERR_KEY_MATERIAL = 7,
  SWQ_ERR_KEY_REUSE = 8,
  SWQ_ERR_INTERNAL = 9
} swq_status;

typedef struct swq_experiment swq_experiment;
typedef struct swq_report swq_report;

SWQ_API const char* swq_version(void);

/* Message for the last failing call on this thread; "" if none. */
SWQ_API const char* swq_last_error(void);

/* Builds an experiment from a JSON config document. */
SWQ_API swq_status swq_experiment_create(const char* config_json, swq_experiment** out);
/* Same, reading the document from a file. A relative "phi_file" is resolved
   against the directory of that file. */
SWQ_API swq_status swq_experiment_load(const char* path, swq_experiment** out);
SWQ_API void swq_experiment_destroy(swq_experiment* exp);

/* Overrides; these take precedence over the document. */
SWQ_API swq_status swq_experiment_set_kind(swq_experiment* exp, const char* kind);
SWQ_API swq_status swq_experiment_set_seed(swq_experiment* exp, uint64_t seed);
SWQ_API swq_status swq_experiment_set_trials(swq_experiment* exp, uint64_t trials);
/* Sets one config key (dotted paths such as "session.k_identify" reach
 * into objects) to a JSON-encoded value. */
SWQ_API swq_status swq_experiment_set_option(swq_experiment* exp, const char* key,
                                             const char* json_value);
/* Effective config as JSON. The string lives as long as the handle. */
SWQ_API swq_status swq_experiment_config_json(swq_experiment* exp, const char** out);

SWQ_API swq_status swq_experiment_run(const swq_experiment* exp, swq_report** out);

/* Report body as pretty-printed JSON, valid until the report is destroyed. */
SWQ_API const char* swq_report_json(const swq_report* report);
/* 1 if every check in the report held, 0 otherwise. */
SWQ_API int swq_report_passed(const swq_report* report);
/* Where the config asked the report to go; "" for stdout. */
SWQ_API const char* swq_report_output_path(const swq_report* report);
/* JSON-lines session transcript; "" for experiments without one. */
SWQ_API const char* swq_report_transcript(const swq_report* report);
SWQ_API const char* swq_report_transcript_path(const swq_report* report);
SWQ_API swq_status swq_report_write(const swq_report* report, const char* path);
SWQ_API void swq_report_destroy(swq_report* report);

#ifdef __cplusplus
}
#endif

#endif /* SWAPQKD_SWAPQKD_H_ */
