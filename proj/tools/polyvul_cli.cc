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
// Command-line front end over the C interface.
//
//   polyvul [--config cfg.json] [--seed N] [--out-dir DIR] [--jobs N]
//           train | decompose [--mode M] | gamma | vulnerability | report

#include <cstdio>
#include <cstring>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "polyvul/polyvul.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitValidation = 2;

int ExitCode(polyvul_status status) {
  switch (status) {
    case POLYVUL_OK:
      return kExitOk;
    case POLYVUL_ERROR_VALIDATION:
    case POLYVUL_ERROR_NULL_ARGUMENT:
      return kExitValidation;
    default:
      return kExitRuntime;
  }
}

int Fail(polyvul_status status) {
  std::fprintf(stderr, "polyvul: %s\n", polyvul_last_error());
  return ExitCode(status);
}

// Prints and frees a library-owned string.
void Emit(char* text) {
  std::fputs(text, stdout);
  if (*text && text[std::strlen(text) - 1] != '\n') std::fputc('\n', stdout);
  polyvul_string_free(text);
}

struct Overrides {
  std::optional<std::string> game;
  std::optional<double> beta;
  std::optional<int> players;
  std::optional<std::string> algorithm;
  std::optional<int> runs;
  std::optional<int> strategies;
  std::optional<int> iterations;
  std::optional<uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> jobs;
  std::optional<double> lambda;
  std::optional<int> batch_size;
  std::optional<int> epochs;
  std::optional<double> lr_start;
  std::optional<double> lr_floor;
  std::optional<int> lr_halve_every;
};

template <typename T>
void Apply(nlohmann::json& doc, const std::optional<T>& value,
           const char* key) {
  if (value) doc[key] = *value;
}

nlohmann::json BuildConfig(const std::string& path, const Overrides& o) {
  nlohmann::json doc = nlohmann::json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot read config file " + path);
    std::stringstream text;
    text << in.rdbuf();
    try {
      doc = nlohmann::json::parse(text.str());
    } catch (const nlohmann::json::exception& e) {
      throw std::invalid_argument("malformed config file " + path + ": " +
                                  e.what());
    }
  }
  Apply(doc, o.game, "game");
  Apply(doc, o.algorithm, "algorithm");
  Apply(doc, o.runs, "runs");
  Apply(doc, o.strategies, "strategies_per_run");
  Apply(doc, o.iterations, "iterations");
  Apply(doc, o.seed, "seed");
  Apply(doc, o.out_dir, "out_dir");
  Apply(doc, o.jobs, "jobs");
  if (o.beta || o.players) {
    nlohmann::json& p = doc["params"];
    Apply(p, o.beta, "beta");
    Apply(p, o.players, "players");
  }
  nlohmann::json sgd =
      doc.contains("sgd") ? doc["sgd"] : nlohmann::json::object();
  Apply(sgd, o.lambda, "lambda");
  Apply(sgd, o.batch_size, "batch_size");
  Apply(sgd, o.epochs, "epochs");
  Apply(sgd, o.lr_start, "lr_start");
  Apply(sgd, o.lr_floor, "lr_floor");
  Apply(sgd, o.lr_halve_every, "lr_halve_every");
  Apply(sgd, o.seed, "seed");
  if (!sgd.empty()) doc["sgd"] = sgd;
  return doc;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-play vulnerability and polymatrix decomposition tools"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path;
  Overrides o;
  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--seed", o.seed, "Master seed (also seeds SGDecompose)");
  app.add_option("--out-dir", o.out_dir, "Run directory");
  app.add_option("--jobs", o.jobs, "Worker threads for training");
  app.add_option("--game", o.game, "Builtin game name");
  app.add_option("--beta", o.beta, "Game payoff scale");
  app.add_option("--players", o.players, "Player count (poker games)");
  app.add_option("--algorithm", o.algorithm, "cfr or cfr+");
  app.add_option("--runs", o.runs, "Independent runs");
  app.add_option("--strategies", o.strategies, "Strategies per run");
  app.add_option("--iterations", o.iterations, "Self-play iterations");
  app.add_option("--lambda", o.lambda, "Fit/stability weight");
  app.add_option("--batch-size", o.batch_size, "SGDecompose batch size");
  app.add_option("--epochs", o.epochs, "SGDecompose epochs");
  app.add_option("--lr-start", o.lr_start, "Initial learning rate");
  app.add_option("--lr-floor", o.lr_floor, "Smallest learning rate");
  app.add_option("--lr-halve-every", o.lr_halve_every,
                 "Epochs between learning-rate halvings");

  auto* train = app.add_subcommand("train", "Train self-play profiles");
  auto* decompose =
      app.add_subcommand("decompose", "Fit a constant-sum polymatrix game");
  std::string mode = "sgd";
  decompose->add_option("--mode", mode, "lp-nf, lp-efg or sgd")
      ->check(CLI::IsMember({"lp-nf", "lp-efg", "sgd"}));
  auto* gamma = app.add_subcommand("gamma", "Subgame stability of the LP fit");
  auto* vulnerability =
      app.add_subcommand("vulnerability", "Cross-run vulnerability per run");
  auto* report = app.add_subcommand("report", "CSV and JSON summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  std::string config_json;
  try {
    config_json = BuildConfig(config_path, o).dump();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "polyvul: %s\n", e.what());
    return kExitValidation;
  }

  polyvul_experiment* experiment = nullptr;
  polyvul_status status = polyvul_experiment_create(config_json.c_str(),
                                                    &experiment);
  if (status != POLYVUL_OK) return Fail(status);

  char* out = nullptr;
  if (train->parsed()) {
    status = polyvul_train(experiment, &out);
  } else if (decompose->parsed()) {
    status = polyvul_decompose(experiment, mode.c_str(), &out);
  } else if (gamma->parsed()) {
    status = polyvul_gamma(experiment, &out);
  } else if (vulnerability->parsed()) {
    status = polyvul_vulnerability(experiment, &out);
  } else if (report->parsed()) {
    status = polyvul_report(experiment, &out);
  }
  polyvul_experiment_destroy(experiment);
  if (status != POLYVUL_OK) return Fail(status);
  if (out) Emit(out);
  return kExitOk;
}
