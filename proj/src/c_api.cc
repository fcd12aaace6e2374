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
#include "polyvul/polyvul.h"

#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <variant>

#include "best_response.h"
#include "builtin_games.h"
#include "errors.h"
#include "exact_decomp.h"
#include "json.hpp"
#include "pipeline.h"

struct polyvul_experiment {
  std::unique_ptr<polyvul::Experiment> impl;
};

struct polyvul_game {
  polyvul::ExtensiveFormGame tree;
  std::optional<polyvul::NormalFormGame> normal_form;
};

namespace {

thread_local std::string last_error;

char* Duplicate(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename F>
polyvul_status Guard(F&& body) {
  try {
    body();
    last_error.clear();
    return POLYVUL_OK;
  } catch (const polyvul::ValidationError& e) {
    last_error = e.what();
    return POLYVUL_ERROR_VALIDATION;
  } catch (const nlohmann::json::exception& e) {
    last_error = e.what();
    return POLYVUL_ERROR_VALIDATION;
  } catch (const std::exception& e) {
    last_error = e.what();
    return POLYVUL_ERROR_RUNTIME;
  } catch (...) {
    last_error = "unknown error";
    return POLYVUL_ERROR_RUNTIME;
  }
}

polyvul_status NullArgument(const char* name) {
  last_error = std::string("null argument: ") + name;
  return POLYVUL_ERROR_NULL_ARGUMENT;
}

#define POLYVUL_REQUIRE(ptr) \
  if ((ptr) == nullptr) return NullArgument(#ptr)

char* PathList(const std::vector<std::string>& paths) {
  return Duplicate(nlohmann::json(paths).dump());
}

}  // namespace

extern "C" {

const char* polyvul_version(void) { return "1.0.0"; }

const char* polyvul_last_error(void) { return last_error.c_str(); }

void polyvul_string_free(char* s) { delete[] s; }

polyvul_status polyvul_experiment_create(const char* config_json,
                                         polyvul_experiment** out) {
  POLYVUL_REQUIRE(config_json);
  POLYVUL_REQUIRE(out);
  *out = nullptr;
  return Guard([&] {
    auto e = std::make_unique<polyvul_experiment>();
    e->impl = std::make_unique<polyvul::Experiment>(
        polyvul::ConfigFromJson(config_json));
    *out = e.release();
  });
}

void polyvul_experiment_destroy(polyvul_experiment* experiment) {
  delete experiment;
}

polyvul_status polyvul_experiment_config(const polyvul_experiment* experiment,
                                         char** out_json) {
  POLYVUL_REQUIRE(experiment);
  POLYVUL_REQUIRE(out_json);
  return Guard([&] {
    *out_json = Duplicate(polyvul::ConfigToJson(experiment->impl->config()));
  });
}

polyvul_status polyvul_train(const polyvul_experiment* experiment,
                             char** out_json) {
  POLYVUL_REQUIRE(experiment);
  POLYVUL_REQUIRE(out_json);
  return Guard([&] { *out_json = PathList(experiment->impl->Train()); });
}

polyvul_status polyvul_decompose(const polyvul_experiment* experiment,
                                 const char* mode, char** out_json) {
  POLYVUL_REQUIRE(experiment);
  POLYVUL_REQUIRE(mode);
  POLYVUL_REQUIRE(out_json);
  return Guard(
      [&] { *out_json = PathList(experiment->impl->Decompose(mode)); });
}

polyvul_status polyvul_gamma(const polyvul_experiment* experiment,
                             char** out_json) {
  POLYVUL_REQUIRE(experiment);
  POLYVUL_REQUIRE(out_json);
  return Guard([&] { *out_json = PathList({experiment->impl->Gamma()}); });
}

polyvul_status polyvul_vulnerability(const polyvul_experiment* experiment,
                                     char** out_json) {
  POLYVUL_REQUIRE(experiment);
  POLYVUL_REQUIRE(out_json);
  return Guard(
      [&] { *out_json = PathList(experiment->impl->Vulnerability()); });
}

polyvul_status polyvul_report(const polyvul_experiment* experiment,
                              char** out_csv) {
  POLYVUL_REQUIRE(experiment);
  POLYVUL_REQUIRE(out_csv);
  return Guard([&] {
    experiment->impl->Report();
    *out_csv = Duplicate(polyvul::ReadFile(
        experiment->impl->config().out_dir + "/report.csv"));
  });
}

polyvul_status polyvul_game_create(const char* name, double beta, int players,
                                   polyvul_game** out) {
  POLYVUL_REQUIRE(name);
  POLYVUL_REQUIRE(out);
  *out = nullptr;
  return Guard([&] {
    polyvul::GameParams params;
    params.beta = beta;
    params.players = players > 0 ? players : 0;
    polyvul::AnyGame g = polyvul::BuildBuiltin(name, params);
    auto game = std::make_unique<polyvul_game>();
    if (auto* nf = std::get_if<polyvul::NormalFormGame>(&g)) {
      game->normal_form = *nf;
      game->tree = polyvul::OneShotGame(*nf, name);
    } else {
      game->tree = std::get<polyvul::ExtensiveFormGame>(std::move(g));
    }
    *out = game.release();
  });
}

void polyvul_game_destroy(polyvul_game* game) { delete game; }

int polyvul_game_num_players(const polyvul_game* game) {
  return game ? game->tree.num_players() : -1;
}

int polyvul_game_num_terminals(const polyvul_game* game) {
  return game ? game->tree.num_terminals() : -1;
}

polyvul_status polyvul_game_nash_gap(const polyvul_game* game,
                                     const char* profile_json, double* out) {
  POLYVUL_REQUIRE(game);
  POLYVUL_REQUIRE(profile_json);
  POLYVUL_REQUIRE(out);
  return Guard([&] {
    const auto profile = nlohmann::json::parse(profile_json)
                             .get<polyvul::BehaviorProfile>();
    polyvul::CheckProfile(game->tree, profile);
    *out = polyvul::NashGap(game->tree, profile);
  });
}

polyvul_status polyvul_game_min_delta(const polyvul_game* game,
                                      const char* mode, double* out) {
  POLYVUL_REQUIRE(game);
  POLYVUL_REQUIRE(mode);
  POLYVUL_REQUIRE(out);
  return Guard([&] {
    const std::string m = mode;
    if (m == "lp-nf") {
      *out = polyvul::MinDeltaNormalForm(
                 game->normal_form ? *game->normal_form
                                   : polyvul::InducedNormalForm(game->tree))
                 .delta;
    } else if (m == "lp-efg") {
      *out = polyvul::MinDeltaPerfectInfo(game->tree).delta;
    } else {
      throw polyvul::ValidationError("unknown decomposition mode: " + m);
    }
  });
}

}  // extern "C"
