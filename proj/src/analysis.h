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
#ifndef POLYVUL_ANALYSIS_H_
#define POLYVUL_ANALYSIS_H_

#include <optional>
#include <string>
#include <vector>

#include "efg.h"
#include "normal_form.h"
#include "polymatrix.h"

namespace polyvul {

// s_i(a) = sum of mu over profiles where i plays a.
MixedStrategy MarginalStrategy(const NormalFormGame& game,
                               const EmpiricalDistribution& mu, int player);
MixedProfile MarginalProfile(const NormalFormGame& game,
                             const EmpiricalDistribution& mu);

// max_i max_a E_mu[u_i(a, rho_-i)] - E_mu[u_i(rho)].
double CceGap(const NormalFormGame& game, const EmpiricalDistribution& mu);

// Opponent strategies for each player; the entry for the evaluated player
// is ignored.
using OpponentSets = std::vector<std::vector<BehaviorStrategy>>;
using MixedOpponentSets = std::vector<std::vector<MixedStrategy>>;

// u_i(pi) minus the least u_i(pi_i, pi'_-i) over the cross product of the
// other players' lists.
double VulnerabilityFinite(const ExtensiveFormGame& game, int player,
                           const BehaviorProfile& profile,
                           const OpponentSets& opponents);
double VulnerabilityFinite(const NormalFormGame& game, int player,
                           const MixedProfile& profile,
                           const MixedOpponentSets& opponents);

// Worst case over all independent opponents of a pairwise constant-sum
// game: each neighbour separately minimizes the player's subgame value.
double VulnerabilityPolymatrix(const PolymatrixGame& game, int player,
                               const MixedProfile& profile);
double VulnerabilityPolymatrix(const PolyEfg& game, int player,
                               const BehaviorProfile& profile);

inline constexpr int kGridMaxPlayers = 3;
inline constexpr int kGridMaxActions = 4;

// u_i(s) minus the least u_i(s_i, s'_-i) over independent opponent mixed
// strategies on a simplex grid with the given step. A step of 1 or more
// keeps only pure strategies.
double VulnerabilityGridOracle(const NormalFormGame& game, int player,
                               const MixedProfile& profile, double resolution);

struct VulnerabilityBound {
  double edge_bound = 0;   // |E_i| gamma + 2 delta
  double player_bound = 0; // (n - 1) gamma + 2 delta
};
VulnerabilityBound Bound(int degree, int num_players, double gamma,
                         double delta);

// Largest pairwise total variation between profiles.
double MaxPairwiseTotalVariation(const ExtensiveFormGame& game,
                                 const std::vector<BehaviorProfile>& profiles);

struct VulnerabilityReport {
  std::string opponent_model;  // "finite-set", "polymatrix-worst-case", "grid-oracle"
  std::vector<double> vulnerability;  // per player
  std::optional<double> gamma;
  std::optional<double> delta;
  std::optional<double> bound;  // (n - 1) gamma + 2 delta

  // bound / max vulnerability, when both are available and positive.
  std::optional<double> Ratio() const;
  std::string ToJson() const;
  // One "run,player,vulnerability,bound,ratio" line per player.
  std::string ToCsvRows(int run) const;
};

}  // namespace polyvul

#endif  // POLYVUL_ANALYSIS_H_
