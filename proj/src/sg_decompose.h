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
#ifndef POLYVUL_SG_DECOMPOSE_H_
#define POLYVUL_SG_DECOMPOSE_H_

#include <cstdint>
#include <memory>
#include <vector>

#include "efg.h"
#include "polymatrix.h"

// Stochastic subgradient fit of a constant-sum poly-EFG to a game in the
// neighborhood of a set of strategy profiles.
//
// Parameters are stacked edge by edge: the per-terminal values of edge e
// followed by its constant, so edge e starts at e * (num_terminals + 1).

namespace polyvul {

struct SgConfig {
  double lambda = 0.5;
  int batch_size = 30;
  int epochs = 200;
  double lr_start = 0x1p-6;
  double lr_floor = 0x1p-17;
  int lr_halve_every = 5;
  uint64_t seed = 0;

  void Validate() const;
};

// max(lr_start * 2^-floor((epoch - 1) / lr_halve_every), lr_floor).
double LearningRate(const SgConfig& config, int epoch);

// A finite set of profiles Pi' and the cross product of their per-player
// components.
class Neighborhood {
 public:
  Neighborhood(const ExtensiveFormGame& game,
               std::vector<BehaviorProfile> profiles);

  int num_players() const { return static_cast<int>(sets_.size()); }
  const std::vector<BehaviorProfile>& profiles() const { return profiles_; }
  const std::vector<BehaviorStrategy>& strategies(int player) const {
    return sets_[player];
  }
  int64_t CrossSize() const;
  // Mixed-radix decode, player 0 most significant.
  std::vector<int> CrossIndices(int64_t index) const;
  BehaviorProfile CrossProfile(int64_t index) const;

 private:
  std::vector<BehaviorProfile> profiles_;
  std::vector<std::vector<BehaviorStrategy>> sets_;
};

// Per-player deviation sets; the deviation profiles are their cross product.
using DeviationSets = std::vector<std::vector<BehaviorStrategy>>;

int64_t NumDeviationProfiles(const DeviationSets& deviations);

std::vector<double> StackParameters(const PolyEfg& pg);
void SetParameters(PolyEfg& pg, const std::vector<double>& params);

// sum_i |u'_i(pi) - u_i(pi)|.
double LossDelta(const PolyEfg& pg, const BehaviorProfile& profile);

// Positive parts of the one-sided deviation advantages in every subgame,
// with each side deviating to its component of `deviation`.
double LossGamma(const PolyEfg& pg, const BehaviorProfile& profile,
                 const BehaviorProfile& deviation);

// lambda / |batch| * sum L_delta + (1 - lambda) / |Pi'| * sum over Pi' and
// the deviation cross product of L_gamma. The cross-product sum is
// evaluated per player, which is exact because each subgame term depends
// on a single deviating player.
double BatchLoss(const PolyEfg& pg, const std::vector<BehaviorProfile>& batch,
                 const std::vector<BehaviorProfile>& profiles,
                 const DeviationSets& deviations, double lambda);

// Subgradient of BatchLoss over the stacked parameters; sign(0) = 0 and a
// max(., 0) at zero contributes nothing.
std::vector<double> Subgradient(const PolyEfg& pg,
                                const std::vector<BehaviorProfile>& batch,
                                const std::vector<BehaviorProfile>& profiles,
                                const DeviationSets& deviations, double lambda);

// For every ordered pair (i, j) and every profile in Pi', the best response
// of i to j's component in subgame (i, j). Exact duplicates are collapsed.
DeviationSets GetBestResponses(const PolyEfg& pg,
                               const std::vector<BehaviorProfile>& profiles);

// Largest subgame best-response advantage over Pi' and ordered pairs.
double SubgameStability(const PolyEfg& pg,
                        const std::vector<BehaviorProfile>& profiles);

// Largest |u_i - u'_i| over players and the cross product.
double NeighborhoodDelta(const PolyEfg& pg, const Neighborhood& neighborhood);

struct SgResult {
  PolyEfg poly_efg;
  double delta = 0;
  double gamma = 0;
  std::vector<double> epoch_loss;  // mean batch loss per epoch
};

SgResult SgDecompose(std::shared_ptr<const ExtensiveFormGame> game,
                     const Neighborhood& neighborhood, const SgConfig& config);

}  // namespace polyvul

#endif  // POLYVUL_SG_DECOMPOSE_H_
