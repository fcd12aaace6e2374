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
#ifndef POLYVUL_POLYMATRIX_H_
#define POLYVUL_POLYMATRIX_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "efg.h"
#include "normal_form.h"

namespace polyvul {

// Undirected edge stored with i < j.
struct Edge {
  int i = 0;
  int j = 0;
  bool operator==(const Edge&) const = default;
};

std::vector<Edge> FullyConnectedEdges(int num_players);

// Normal-form game whose payoffs are sums over pairwise subgames.
class PolymatrixGame {
 public:
  static constexpr double kConstantSumTolerance = 1e-10;

  PolymatrixGame() = default;
  PolymatrixGame(std::vector<int> num_actions, std::vector<Edge> edges);

  int num_players() const { return static_cast<int>(num_actions_.size()); }
  int num_actions(int player) const { return num_actions_[player]; }
  const std::vector<int>& num_actions() const { return num_actions_; }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  // Index of the edge joining i and j in either order, or -1.
  int EdgeIndex(int i, int j) const;
  // |E_i|.
  int Degree(int player) const;

  // Payoff to `i` in its subgame with `j` when they play (ai, aj).
  double Payoff(int i, int j, int ai, int aj) const;
  void SetPayoff(int i, int j, int ai, int aj, double value);

  // c_ij when u_ij + u_ji is constant over the edge's entries.
  std::optional<double> Constant(int edge) const;
  bool IsConstantSum() const;

  // Value to i of the subgame with j under mixed strategies.
  double SubgameValue(int i, int j, const MixedStrategy& si,
                      const MixedStrategy& sj) const;

  std::vector<double> Utility(const std::vector<int>& actions) const;
  std::vector<double> ExpectedUtility(const MixedProfile& profile) const;

  NormalFormGame ToNormalForm() const;

 private:
  double& Cell(int edge, int owner, int ai, int aj);
  double CellValue(int edge, int owner, int ai, int aj) const;

  std::vector<int> num_actions_;
  std::vector<Edge> edges_;
  // Per edge, two matrices indexed [a_i * |A_j| + a_j]: payoffs to edge.i
  // then to edge.j.
  std::vector<std::vector<double>> payoffs_;
};

// Offense-Defense as a three-player polymatrix game. Actions: player 0
// {relax, defend}; player 1 {attack 0, attack 2}; player 2 {attack 0,
// attack 1}.
PolymatrixGame OffenseDefensePolymatrix(double beta);

// Distribution at each node that is not owned by the subgame's two players;
// empty rows at their decision nodes and at terminals.
using ChanceStrategy = std::vector<std::vector<double>>;

// Copies the game's chance distributions and plays uniformly at nodes of
// every player other than i and j.
ChanceStrategy DefaultSubgameChance(const ExtensiveFormGame& game, int i,
                                    int j);

// p_c(z, chance) for every terminal.
std::vector<double> SubgameChanceReach(const ExtensiveFormGame& game, int i,
                                       int j, const ChanceStrategy& chance);

// One shared tree plus, for each edge (i, j), terminal utilities for i and a
// constant c_ij; j's utility at z is c_ij minus i's.
class PolyEfg {
 public:
  static constexpr int64_t kMaxInducedStrategies = 1000;

  PolyEfg() = default;
  // Default subgame chance on every edge; all edges when `edges` is empty.
  explicit PolyEfg(std::shared_ptr<const ExtensiveFormGame> game,
                   std::vector<Edge> edges = {});
  PolyEfg(std::shared_ptr<const ExtensiveFormGame> game,
          std::vector<Edge> edges, std::vector<ChanceStrategy> chance);

  const ExtensiveFormGame& game() const { return *game_; }
  const std::shared_ptr<const ExtensiveFormGame>& game_ptr() const {
    return game_;
  }
  int num_players() const { return game_->num_players(); }
  const std::vector<Edge>& edges() const { return edges_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int EdgeIndex(int i, int j) const;
  int Degree(int player) const;

  // Utility of edge.i at each terminal.
  std::vector<double>& values(int edge) { return values_[edge]; }
  const std::vector<double>& values(int edge) const { return values_[edge]; }
  double& constant(int edge) { return constants_[edge]; }
  double constant(int edge) const { return constants_[edge]; }
  const ChanceStrategy& chance(int edge) const { return chance_[edge]; }
  const std::vector<double>& chance_reach(int edge) const {
    return chance_reach_[edge];
  }

  // Utility of `player` (an endpoint of the edge) at terminal z.
  double TerminalValue(int edge, int player, int z) const;

  // (value for edge.i, value for edge.j) given each endpoint's reach.
  std::pair<double, double> SubgameUtilityFromReach(
      int edge, const std::vector<double>& reach_i,
      const std::vector<double>& reach_j) const;
  // Values for (i, j) in the order given.
  std::pair<double, double> SubgameUtility(int i, int j,
                                           const BehaviorStrategy& pi_i,
                                           const BehaviorStrategy& pi_j) const;

  std::vector<double> GlobalUtilityFromReach(
      const std::vector<std::vector<double>>& player_reach) const;
  std::vector<double> GlobalUtility(const BehaviorProfile& profile) const;

  // Normal-form polymatrix game over pure strategies; throws when a player
  // has more than `max_strategies` of them.
  PolymatrixGame InducedNormalFormPolymatrix(
      int64_t max_strategies = kMaxInducedStrategies) const;

 private:
  std::shared_ptr<const ExtensiveFormGame> game_;
  std::vector<Edge> edges_;
  std::vector<ChanceStrategy> chance_;
  std::vector<std::vector<double>> chance_reach_;
  std::vector<std::vector<double>> values_;
  std::vector<double> constants_;
};

// Serialization. Terminal arrays follow the tree's depth-first terminal
// order; loading requires the same tree.
std::string PolymatrixToJson(const PolymatrixGame& game);
PolymatrixGame PolymatrixFromJson(const std::string& text);
std::string PolyEfgToJson(const PolyEfg& game);
PolyEfg PolyEfgFromJson(const std::string& text,
                        std::shared_ptr<const ExtensiveFormGame> game);

}  // namespace polyvul

#endif  // POLYVUL_POLYMATRIX_H_
