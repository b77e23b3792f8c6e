/*
 * Copyright 2026 The mtlcheck Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the mtlcheck bounded model checker. */

#ifndef MTLCHECK_MTLCHECK_H_
#define MTLCHECK_MTLCHECK_H_

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define MTL_API __declspec(dllexport)
#else
#define MTL_API __attribute__((visibility("default")))
#endif

typedef enum {
  MTL_OK = 0,
  MTL_ERR_INPUT = 1,    /* syntax, scoping or other program error */
  MTL_ERR_IO = 2,       /* file could not be read */
  MTL_ERR_ARGUMENT = 3, /* bad option value or null handle */
  MTL_ERR_INTERNAL = 4  /* contract breach inside the checker */
} mtl_status;

typedef enum { MTL_SAFE = 0, MTL_UNSAFE = 1, MTL_UNKNOWN = 2 } mtl_verdict;

typedef struct mtl_options mtl_options;
typedef struct mtl_result mtl_result;

MTL_API const char* mtl_version(void);

/* Message of the last failed call on this thread ("" if none). */
MTL_API const char* mtl_last_error(void);

MTL_API mtl_options* mtl_options_new(void);
MTL_API void mtl_options_free(mtl_options* o);
/* engine: "cegar", "monolithic" or "explicit". */
MTL_API mtl_status mtl_options_set_engine(mtl_options* o, const char* engine);
MTL_API mtl_status mtl_options_set_unwind(mtl_options* o, int depth);
MTL_API mtl_status mtl_options_set_unwinding_assertions(mtl_options* o, int enabled);
MTL_API mtl_status mtl_options_set_int_width(mtl_options* o, int width);
MTL_API mtl_status mtl_options_set_max_iterations(mtl_options* o, uint64_t n);
MTL_API mtl_status mtl_options_set_seed(mtl_options* o, uint64_t seed);
MTL_API mtl_status mtl_options_set_link_pruning(mtl_options* o, int enabled);
MTL_API mtl_status mtl_options_set_check_invariants(mtl_options* o, int enabled);
MTL_API mtl_status mtl_options_set_time_limit_ms(mtl_options* o, uint64_t ms);

/* Verifies a program. `options` may be NULL for defaults. On MTL_OK the
 * caller owns *out and releases it with mtl_result_free. */
MTL_API mtl_status mtl_verify_source(const char* source, const mtl_options* options, mtl_result** out);
MTL_API mtl_status mtl_verify_file(const char* path, const mtl_options* options, mtl_result** out);

MTL_API mtl_verdict mtl_result_verdict(const mtl_result* r);
MTL_API uint64_t mtl_result_iterations(const mtl_result* r);
MTL_API uint64_t mtl_result_fallback_invocations(const mtl_result* r);
/* Strings stay valid until mtl_result_free. */
MTL_API const char* mtl_result_stats_json(const mtl_result* r);
MTL_API const char* mtl_result_witness_json(const mtl_result* r); /* "" unless UNSAFE */
MTL_API const char* mtl_result_unknown_reason(const mtl_result* r);
/* Invariant violations found with check_invariants, one per line. */
MTL_API const char* mtl_result_invariant_failures(const mtl_result* r);
MTL_API void mtl_result_free(mtl_result* r);

/* DIMACS export of the abstraction (plus the scheduling constraint when
 * with_scheduling is nonzero) and a JSON symbol table. Free the strings
 * with mtl_string_free. */
MTL_API mtl_status mtl_export_dimacs(const char* source, const mtl_options* options, int with_scheduling,
                                     char** dimacs, char** symbols);

/* Validates an event order graph given as JSON. Writes 1 to
 * *closure_infeasible if the rule closure finds a cycle and 1 to
 * *exact_feasible if some total order satisfies it. *report receives a
 * JSON object with the refinement clauses and, if feasible, the order. */
MTL_API mtl_status mtl_check_eog(const char* eog_json, int* closure_infeasible, int* exact_feasible, char** report);

MTL_API void mtl_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* MTLCHECK_MTLCHECK_H_ */
