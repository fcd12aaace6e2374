// Copyright 2026 The polyvul Authors.
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
#ifndef POLYVUL_POLYVUL_H_
#define POLYVUL_POLYVUL_H_

/* C interface to the polyvul library. Handles are opaque; every call that
 * can fail returns a polyvul_status and leaves a message retrievable with
 * polyvul_last_error() on the calling thread. Strings returned through
 * char** outputs are owned by the caller and released with
 * polyvul_string_free(). */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define POLYVUL_API __declspec(dllexport)
#else
#define POLYVUL_API __attribute__((visibility("default")))
#endif

typedef enum polyvul_status {
  POLYVUL_OK = 0,
  POLYVUL_ERROR_VALIDATION = 1,
  POLYVUL_ERROR_RUNTIME = 2,
  POLYVUL_ERROR_NULL_ARGUMENT = 3
} polyvul_status;

typedef struct polyvul_experiment polyvul_experiment;
typedef struct polyvul_game polyvul_game;

POLYVUL_API const char* polyvul_version(void);
POLYVUL_API const char* polyvul_last_error(void);
POLYVUL_API void polyvul_string_free(char* s);

/* Experiments. config_json uses the keys of the experiment config file;
 * missing keys keep their defaults. */
POLYVUL_API polyvul_status polyvul_experiment_create(const char* config_json,
                                                    polyvul_experiment** out);
POLYVUL_API void polyvul_experiment_destroy(polyvul_experiment* experiment);
POLYVUL_API polyvul_status polyvul_experiment_config(
    const polyvul_experiment* experiment, char** out_json);

/* Pipeline commands. out_json receives a JSON array of written paths. */
POLYVUL_API polyvul_status polyvul_train(const polyvul_experiment* experiment,
                                        char** out_json);
/* mode is "lp-nf", "lp-efg" or "sgd". */
POLYVUL_API polyvul_status polyvul_decompose(
    const polyvul_experiment* experiment, const char* mode, char** out_json);
POLYVUL_API polyvul_status polyvul_gamma(const polyvul_experiment* experiment,
                                        char** out_json);
POLYVUL_API polyvul_status polyvul_vulnerability(
    const polyvul_experiment* experiment, char** out_json);
/* out_csv receives the report CSV; report.csv and report.json are also
 * written to the output directory. */
POLYVUL_API polyvul_status polyvul_report(const polyvul_experiment* experiment,
                                         char** out_csv);

/* Builtin games. players <= 0 selects the game's default. */
POLYVUL_API polyvul_status polyvul_game_create(const char* name, double beta,
                                              int players, polyvul_game** out);
POLYVUL_API void polyvul_game_destroy(polyvul_game* game);
POLYVUL_API int polyvul_game_num_players(const polyvul_game* game);
POLYVUL_API int polyvul_game_num_terminals(const polyvul_game* game);
/* profile_json: array of per-player behavior strategies. */
POLYVUL_API polyvul_status polyvul_game_nash_gap(const polyvul_game* game,
                                                const char* profile_json,
                                                double* out);
/* Exact decomposition; mode is "lp-nf" or "lp-efg". */
POLYVUL_API polyvul_status polyvul_game_min_delta(const polyvul_game* game,
                                                 const char* mode,
                                                 double* out);

#ifdef __cplusplus
}
#endif

#endif /* POLYVUL_POLYVUL_H_ */
