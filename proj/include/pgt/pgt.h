// Copyright 2026 The pgt Authors
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

#ifndef PGT_PGT_H_
#define PGT_PGT_H_

#include <stddef.h>
#include <stdint.h>

#if defined(PGT_BUILDING_LIBRARY)
#define PGT_API __attribute__((visibility("default")))
#else
#define PGT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

// Opaque handles. Every handle returned through an out-parameter must be
// released with the matching *_free function.
typedef struct pgt_game pgt_game;
typedef struct pgt_potential pgt_potential;
typedef struct pgt_report pgt_report;

typedef enum {
  PGT_OK = 0,
  PGT_ERR_INVALID_ARGUMENT = 1,
  PGT_ERR_SCHEMA = 2,
  PGT_ERR_PARSE = 3,
  PGT_ERR_DOMAIN = 4,
  PGT_ERR_INAPPLICABLE = 5,
  PGT_ERR_SIZE_GUARD = 6,
  PGT_ERR_IO = 7,
  PGT_ERR_INTERNAL = 8,
} pgt_status;

typedef enum {
  PGT_VERDICT_PASS = 0,
  PGT_VERDICT_FAIL = 1,
  PGT_VERDICT_INAPPLICABLE = 2,
} pgt_verdict;

typedef struct {
  double tol;       // equality band tol * (1 + scale); default 1e-9
  int64_t samples;  // sample budget; default 500
  uint64_t seed;    // default 0
  double radius;    // sampling radius for unbounded spaces; default 10
} pgt_options;

PGT_API void pgt_options_init(pgt_options* opts);

// Message of the last failed call on this thread ("" if none).
PGT_API const char* pgt_last_error(void);
PGT_API const char* pgt_status_name(pgt_status status);

// Strings returned by the library are released with pgt_string_free.
PGT_API void pgt_string_free(char* s);

// Games.
PGT_API pgt_status pgt_game_load_file(const char* path, pgt_game** out);
PGT_API pgt_status pgt_game_load_json(const char* json, pgt_game** out);
// Normal form of a congestion game with the artificial routes and the
// origin self-loop added (actions -m..m).
PGT_API pgt_status pgt_game_augment(const pgt_game* game, pgt_game** out);
PGT_API pgt_status pgt_game_to_json(const pgt_game* game, char** out);
PGT_API int pgt_game_num_players(const pgt_game* game);
PGT_API void pgt_game_free(pgt_game* game);

// Exact-potential criteria. method: "cycle4", "pairwise", "hp", "hessian",
// "oracle" or "hp-witness".
PGT_API pgt_status pgt_check(const pgt_game* game, const char* method,
                             const pgt_options* opts, pgt_report** out);

// method: "theorem5", "theorem8" or "rosenthal".
PGT_API pgt_status pgt_construct(const pgt_game* game, const char* method,
                                 pgt_potential** out);
PGT_API pgt_status pgt_potential_load_json(const pgt_game* game,
                                           const char* json,
                                           pgt_potential** out);
PGT_API pgt_status pgt_potential_to_json(const pgt_potential* phi, char** out);
PGT_API pgt_status pgt_potential_eval(const pgt_potential* phi,
                                      const char* profile_json, double* out);
PGT_API void pgt_potential_free(pgt_potential* phi);

// mode: "exact", "ordinal", "generalized" or "gradient".
PGT_API pgt_status pgt_verify(const pgt_game* game, const pgt_potential* phi,
                              const char* mode, const pgt_options* opts,
                              pgt_report** out);

// check: "assumption1", "crosssign", "crosssign-critical", "theorem10",
// "theorem11" or "theorem12". candidate_json may be NULL for the first
// three. etas (n_etas values) and lipschitz may be NULL, in which case the
// constants are estimated from samples.
PGT_API pgt_status pgt_ordinal(const pgt_game* game, const char* check,
                               const char* candidate_json, const double* etas,
                               size_t n_etas, const double* lipschitz,
                               const pgt_options* opts, pgt_report** out);

// Verifies profile_json when given; otherwise minimizes phi (or the oracle
// potential of a finite game when phi is NULL) and verifies the minimizer.
PGT_API pgt_status pgt_nash(const pgt_game* game, const char* profile_json,
                            const pgt_potential* phi, const pgt_options* opts,
                            pgt_report** out);

// Better-response dynamics from start_json (first profile when NULL).
PGT_API pgt_status pgt_dynamics(const pgt_game* game, const char* start_json,
                                int64_t max_steps, const pgt_potential* phi,
                                const pgt_options* opts, pgt_report** out);

PGT_API pgt_status pgt_abnormal(const pgt_game* game, const pgt_options* opts,
                                pgt_report** out);

// Reports.
PGT_API pgt_verdict pgt_report_verdict(const pgt_report* report);
PGT_API double pgt_report_residual(const pgt_report* report);
PGT_API int pgt_report_exhaustive(const pgt_report* report);
PGT_API pgt_status pgt_report_json(const pgt_report* report, int include_timing,
                                   char** out);
PGT_API pgt_status pgt_report_text(const pgt_report* report, char** out);
PGT_API void pgt_report_free(pgt_report* report);

#ifdef __cplusplus
}  // extern "C"
#endif

#endif  // PGT_PGT_H_
