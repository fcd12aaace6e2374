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

#include "cfr.h"

#include <algorithm>
#include <cmath>

#include "best_response.h"
#include "errors.h"
#include "rng.h"

namespace polyvul {

CfrAlgorithm ParseAlgorithm(const std::string& name) {
  if (name == "cfr" || name == "CFR") return CfrAlgorithm::kCfr;
  if (name == "cfr+" || name == "CFR+" || name == "cfr_plus") {
    return CfrAlgorithm::kCfrPlus;
  }
  throw ValidationError("unknown algorithm: " + name);
}

std::string AlgorithmName(CfrAlgorithm algorithm) {
  return algorithm == CfrAlgorithm::kCfr ? "cfr" : "cfr+";
}

void RegretMatch(std::span<const double> regrets, std::span<double> out) {
  double total = 0;
  for (double r : regrets) total += std::max(r, 0.0);
  const size_t n = regrets.size();
  for (size_t a = 0; a < n; ++a) {
    out[a] = total > 0 ? std::max(regrets[a], 0.0) / total : 1.0 / n;
  }
}

std::vector<double> RegretMatch(const std::vector<double>& regrets) {
  std::vector<double> out(regrets.size());
  RegretMatch(regrets, out);
  return out;
}

CfrSolver::CfrSolver(const ExtensiveFormGame& game, CfrAlgorithm algorithm,
                     uint64_t seed)
    : game_(game), algorithm_(algorithm) {
  POLYVUL_CHECK_ARG(game.has_perfect_recall(),
                    "CFR requires a game with perfect recall");
  Rng rng(seed);
  const int n = game.num_players();
  regrets_.resize(n);
  strategy_sums_.resize(n);
  for (int i = 0; i < n; ++i) {
    regrets_[i].resize(game.strategy_size(i));
    for (double& r : regrets_[i]) r = rng.Uniform() * kInitialRegretScale;
    strategy_sums_[i].assign(game.strategy_size(i), 0.0);
  }
  reach_.assign(n + 1, std::vector<double>(game.num_nodes()));
  value_.assign(n, std::vector<double>(game.num_nodes()));
}

BehaviorProfile CfrSolver::CurrentProfile() const {
  BehaviorProfile pi(game_.num_players());
  for (int i = 0; i < game_.num_players(); ++i) {
    pi[i].resize(game_.strategy_size(i));
    for (int k = 0; k < game_.num_infosets(i); ++k) {
      const Infoset& info = game_.infoset_info(game_.infoset_id(i, k));
      RegretMatch(
          std::span<const double>(regrets_[i].data() + info.offset,
                                  info.num_actions),
          std::span<double>(pi[i].data() + info.offset, info.num_actions));
    }
  }
  return pi;
}

BehaviorProfile CfrSolver::AverageProfile() const {
  BehaviorProfile pi(game_.num_players());
  for (int i = 0; i < game_.num_players(); ++i) {
    pi[i].resize(game_.strategy_size(i));
    for (int k = 0; k < game_.num_infosets(i); ++k) {
      const Infoset& info = game_.infoset_info(game_.infoset_id(i, k));
      double total = 0;
      for (int a = 0; a < info.num_actions; ++a) {
        total += strategy_sums_[i][info.offset + a];
      }
      for (int a = 0; a < info.num_actions; ++a) {
        pi[i][info.offset + a] = total > 0
                                     ? strategy_sums_[i][info.offset + a] / total
                                     : 1.0 / info.num_actions;
      }
    }
  }
  return pi;
}

void CfrSolver::Iterate() {
  ++iteration_;
  const int n = game_.num_players();
  const int num_nodes = game_.num_nodes();
  const BehaviorProfile sigma = CurrentProfile();

  // reach_[i] holds player i's own reach; reach_[n] holds chance's.
  for (int k = 0; k <= n; ++k) reach_[k][0] = 1.0;
  for (int h = 1; h < num_nodes; ++h) {
    const int p = game_.parent(h);
    const int a = game_.action_from_parent(h);
    for (int k = 0; k <= n; ++k) reach_[k][h] = reach_[k][p];
    if (game_.type(p) == NodeType::kChance) {
      reach_[n][h] *= game_.chance_prob(p, a);
    } else {
      const Infoset& info = game_.infoset_info(game_.infoset(p));
      reach_[info.player][h] *= sigma[info.player][info.offset + a];
    }
  }

  // Values bottom-up; preorder ids put every child after its parent.
  for (int h = num_nodes - 1; h >= 0; --h) {
    if (game_.is_terminal(h)) {
      const int z = game_.terminal_index(h);
      for (int i = 0; i < n; ++i) value_[i][h] = game_.utility(z, i);
      continue;
    }
    for (int i = 0; i < n; ++i) value_[i][h] = 0;
    const int owner = game_.player(h);
    const Infoset* info =
        owner >= 0 ? &game_.infoset_info(game_.infoset(h)) : nullptr;
    for (int a = 0; a < game_.num_children(h); ++a) {
      const double p = owner >= 0 ? sigma[owner][info->offset + a]
                                  : game_.chance_prob(h, a);
      const int c = game_.child(h, a);
      for (int i = 0; i < n; ++i) value_[i][h] += p * value_[i][c];
    }
  }

  const double weight =
      algorithm_ == CfrAlgorithm::kCfrPlus ? static_cast<double>(iteration_)
                                           : 1.0;
  for (int id = 0; id < game_.num_infosets(); ++id) {
    const Infoset& info = game_.infoset_info(id);
    const int i = info.player;
    std::vector<double>& reg = regrets_[i];
    for (int h : info.nodes) {
      double cf = reach_[n][h];
      for (int k = 0; k < n && cf != 0.0; ++k) {
        if (k != i) cf *= reach_[k][h];
      }
      if (cf == 0.0) continue;
      const double base = value_[i][h];
      for (int a = 0; a < info.num_actions; ++a) {
        reg[info.offset + a] += cf * (value_[i][game_.child(h, a)] - base);
      }
    }
    if (algorithm_ == CfrAlgorithm::kCfrPlus) {
      for (int a = 0; a < info.num_actions; ++a) {
        reg[info.offset + a] = std::max(reg[info.offset + a], 0.0);
      }
    }
    // Own reach is the same at every node of the infoset under perfect
    // recall.
    const double own = reach_[i][info.nodes.front()];
    if (own == 0.0) continue;
    for (int a = 0; a < info.num_actions; ++a) {
      strategy_sums_[i][info.offset + a] +=
          weight * own * sigma[i][info.offset + a];
    }
  }
}

SelfPlayRun Train(const ExtensiveFormGame& game, CfrAlgorithm algorithm,
                  int iterations, uint64_t seed, bool record_checkpoints) {
  POLYVUL_CHECK_ARG(iterations >= 1, "iterations must be at least 1");
  CfrSolver solver(game, algorithm, seed);
  SelfPlayRun run;
  run.algorithm = algorithm;
  run.seed = seed;
  run.iterations = iterations;
  const int every = std::max(1, iterations / 100);
  for (int t = 1; t <= iterations; ++t) {
    solver.Iterate();
    if (record_checkpoints && (t % every == 0 || t == iterations)) {
      run.checkpoints.emplace_back(t, NashGap(game, solver.AverageProfile()));
    }
  }
  run.average = solver.AverageProfile();
  return run;
}

}  // namespace polyvul
