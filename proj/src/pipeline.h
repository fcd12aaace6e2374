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
#ifndef POLYVUL_PIPELINE_H_
#define POLYVUL_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "builtin_games.h"
#include "cfr.h"
#include "efg.h"
#include "sg_decompose.h"

// Multi-seed experiment pipeline over a run directory:
//
//   <out_dir>/runs/<run>/<k>.json           trained average profiles
//   <out_dir>/decompositions/<run>.json     SGDecompose output per run
//   <out_dir>/decompositions/lp-nf.json     exact LP outputs per game
//   <out_dir>/decompositions/lp-efg.json
//   <out_dir>/gamma.json
//   <out_dir>/vulnerability/<run>.json
//   <out_dir>/report.csv, report.json

namespace polyvul {

struct ExperimentConfig {
  std::string game = "kuhn_poker";
  GameParams params;
  std::string algorithm = "cfr+";
  int runs = 1;
  int strategies_per_run = 1;
  int iterations = 1000;
  SgConfig sgd;
  std::string out_dir = "polyvul_out";
  uint64_t seed = 0;
  int jobs = 1;

  void Validate() const;
};

// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig ConfigFromJson(const std::string& text);
std::string ConfigToJson(const ExperimentConfig& config);

// Seed of strategy k in run r.
uint64_t RunSeed(uint64_t master, int run, int k);

struct ProfileArtifact {
  std::string game;
  std::string algorithm;
  uint64_t seed = 0;
  int run = 0;
  int index = 0;
  int iterations = 0;
  double nash_gap = 0;
  BehaviorProfile profile;
};

std::string ProfileToJson(const ProfileArtifact& artifact);
// Validates the strategies against `game`.
ProfileArtifact ProfileFromJson(const std::string& text,
                                const ExtensiveFormGame& game);

struct RunRow {
  int run = 0;
  double delta = 0;
  std::optional<double> gamma;
  std::optional<double> bound;
  double vulnerability = 0;
  std::optional<double> ratio;
  double tv_max = 0;
};

class Experiment {
 public:
  explicit Experiment(ExperimentConfig config);

  const ExperimentConfig& config() const { return config_; }
  const ExtensiveFormGame& tree() const { return *tree_; }

  // Each command returns the paths it wrote.
  std::vector<std::string> Train() const;
  // mode is "lp-nf", "lp-efg" or "sgd".
  std::vector<std::string> Decompose(const std::string& mode) const;
  std::string Gamma() const;
  std::vector<std::string> Vulnerability() const;
  std::vector<RunRow> Report() const;

  std::vector<BehaviorProfile> LoadRun(int run) const;

 private:
  std::string RunDir(int run) const;
  std::string DecompositionPath(const std::string& name) const;

  ExperimentConfig config_;
  std::shared_ptr<const ExtensiveFormGame> tree_;
  std::optional<NormalFormGame> normal_form_;
};

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& text);

}  // namespace polyvul

#endif  // POLYVUL_PIPELINE_H_
