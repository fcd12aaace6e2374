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

#ifndef POLYVUL_CFR_H_
#define POLYVUL_CFR_H_

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "efg.h"

namespace polyvul {

enum class CfrAlgorithm { kCfr, kCfrPlus };

CfrAlgorithm ParseAlgorithm(const std::string& name);
std::string AlgorithmName(CfrAlgorithm algorithm);

// Positive parts normalized, or uniform when none is positive.
void RegretMatch(std::span<const double> regrets, std::span<double> out);
std::vector<double> RegretMatch(const std::vector<double>& regrets);

// Full-tree, simultaneous-update solver.
//
// kCfr: plain regret matching, average strategy weighted uniformly over
// iterations.
// kCfrPlus: regrets are clipped at zero after every update and iteration t
// contributes with weight t to the average strategy.
//
// Both start from cumulative regrets drawn uniformly from [0, 0.001) so that
// different seeds start from different strategies.
class CfrSolver {
 public:
  static constexpr double kInitialRegretScale = 0.001;

  CfrSolver(const ExtensiveFormGame& game, CfrAlgorithm algorithm,
            uint64_t seed);

  void Iterate();
  int iteration() const { return iteration_; }

  // Regret-matching strategy for the next iteration.
  BehaviorProfile CurrentProfile() const;
  // Average strategy; infosets with no accumulated weight are uniform.
  BehaviorProfile AverageProfile() const;

  const std::vector<std::vector<double>>& regrets() const { return regrets_; }
  const std::vector<std::vector<double>>& strategy_sums() const {
    return strategy_sums_;
  }

 private:
  const ExtensiveFormGame& game_;
  CfrAlgorithm algorithm_;
  int iteration_ = 0;
  std::vector<std::vector<double>> regrets_;
  std::vector<std::vector<double>> strategy_sums_;
  // Scratch, sized by nodes.
  std::vector<std::vector<double>> reach_;
  std::vector<std::vector<double>> value_;
};

struct SelfPlayRun {
  CfrAlgorithm algorithm = CfrAlgorithm::kCfrPlus;
  uint64_t seed = 0;
  int iterations = 0;
  BehaviorProfile average;
  // (iteration, nash gap of the average so far), when requested.
  std::vector<std::pair<int, double>> checkpoints;
};

// Checkpoints fall every max(1, T/100) iterations plus the final one.
SelfPlayRun Train(const ExtensiveFormGame& game, CfrAlgorithm algorithm,
                  int iterations, uint64_t seed, bool record_checkpoints = false);

}  // namespace polyvul

#endif  // POLYVUL_CFR_H_
