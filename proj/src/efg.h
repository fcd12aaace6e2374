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

#ifndef POLYVUL_EFG_H_
#define POLYVUL_EFG_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "normal_form.h"

namespace polyvul {

inline constexpr int kChancePlayer = -1;
inline constexpr int kMaxPlayers = 8;
inline constexpr int kMaxActions = 16;

// Reach products below this are treated as exactly zero.
inline constexpr double kReachEpsilon = 1e-15;

enum class NodeType : uint8_t { kDecision, kChance, kTerminal };

struct Infoset {
  int player = 0;
  int local_index = 0;  // position among the player's infosets
  int num_actions = 0;
  int offset = 0;  // start of this infoset in the player's flat strategy
  std::string key;
  std::vector<int> nodes;
};

// Flat action probabilities for one player, laid out by Infoset::offset.
using BehaviorStrategy = std::vector<double>;
// One BehaviorStrategy per player.
using BehaviorProfile = std::vector<BehaviorStrategy>;
// One action per infoset of a player, indexed by Infoset::local_index.
using PureStrategy = std::vector<int>;

// Immutable game tree. Nodes are numbered in depth-first preorder with the
// root at 0; terminals are numbered in the same traversal order.
class ExtensiveFormGame {
 public:
  ExtensiveFormGame() = default;

  const std::string& name() const { return name_; }
  int num_players() const { return num_players_; }
  int num_nodes() const { return static_cast<int>(type_.size()); }
  int num_terminals() const { return static_cast<int>(terminal_node_.size()); }

  NodeType type(int node) const { return type_[node]; }
  bool is_terminal(int node) const { return type_[node] == NodeType::kTerminal; }
  int player(int node) const { return player_[node]; }
  int infoset(int node) const { return infoset_[node]; }
  int parent(int node) const { return parent_[node]; }
  int action_from_parent(int node) const { return action_from_parent_[node]; }
  int num_children(int node) const { return num_children_[node]; }
  std::span<const int> children(int node) const {
    return {children_.data() + child_offset_[node],
            static_cast<size_t>(num_children_[node])};
  }
  int child(int node, int action) const {
    return children_[child_offset_[node] + action];
  }
  double chance_prob(int node, int action) const {
    return chance_probs_[child_offset_[node] + action];
  }
  int terminal_index(int node) const { return terminal_index_[node]; }
  int terminal_node(int z) const { return terminal_node_[z]; }
  double utility(int z, int player) const {
    return utilities_[static_cast<size_t>(z) * num_players_ + player];
  }
  // Product of chance probabilities on the path to terminal z.
  double chance_reach(int z) const { return chance_reach_[z]; }
  const std::vector<double>& chance_reach() const { return chance_reach_; }

  int num_infosets() const { return static_cast<int>(infosets_.size()); }
  int num_infosets(int player) const {
    return static_cast<int>(player_infosets_[player].size());
  }
  const Infoset& infoset_info(int id) const { return infosets_[id]; }
  // Global infoset id of the player's local_index-th infoset.
  int infoset_id(int player, int local_index) const {
    return player_infosets_[player][local_index];
  }
  int strategy_size(int player) const { return strategy_size_[player]; }
  // Global infoset id for a key, or -1.
  int FindInfoset(std::string_view key) const;

  bool is_perfect_information() const { return perfect_information_; }
  bool has_perfect_recall() const { return perfect_recall_; }

  // Probability of `action` at `node` under the profile (chance nodes use
  // the game's own distribution).
  double ActionProb(int node, int action, const BehaviorProfile& profile) const;

 private:
  friend class EfgBuilder;

  std::string name_;
  int num_players_ = 0;
  std::vector<NodeType> type_;
  std::vector<int> player_;
  std::vector<int> infoset_;
  std::vector<int> parent_;
  std::vector<int> action_from_parent_;
  std::vector<int> child_offset_;
  std::vector<int> num_children_;
  std::vector<int> children_;
  std::vector<double> chance_probs_;
  std::vector<int> terminal_index_;
  std::vector<int> terminal_node_;
  std::vector<double> utilities_;
  std::vector<double> chance_reach_;
  std::vector<Infoset> infosets_;
  std::vector<std::vector<int>> player_infosets_;
  std::vector<int> strategy_size_;
  std::unordered_map<std::string, int> infoset_by_key_;
  bool perfect_information_ = true;
  bool perfect_recall_ = true;
};

// Builds a tree in depth-first preorder: every node must be added after its
// parent and before any node of a later sibling subtree. `parent == -1`
// creates the root.
class EfgBuilder {
 public:
  EfgBuilder(int num_players, std::string name);

  int AddDecision(int parent, int action, int player,
                  std::string_view infoset_key, int num_actions);
  int AddChance(int parent, int action, std::vector<double> probs);
  int AddTerminal(int parent, int action, std::span<const double> utilities);

  ExtensiveFormGame Build() &&;

 private:
  int NewNode(int parent, int action, NodeType type, int num_children);

  ExtensiveFormGame g_;
};

// Sequential rendering of a normal-form game: players move in index order
// and nobody observes earlier moves.
ExtensiveFormGame OneShotGame(const NormalFormGame& game, std::string name);

BehaviorStrategy UniformStrategy(const ExtensiveFormGame& game, int player);
BehaviorProfile UniformProfile(const ExtensiveFormGame& game);
BehaviorStrategy PureToBehavior(const ExtensiveFormGame& game, int player,
                                const PureStrategy& pure);

// Throws ValidationError unless the strategy has the right size and every
// infoset distribution is nonnegative and sums to 1 within 1e-9.
void CheckStrategy(const ExtensiveFormGame& game, int player,
                   const BehaviorStrategy& strategy);
void CheckProfile(const ExtensiveFormGame& game, const BehaviorProfile& profile);

// p_i(z, pi_i) for every terminal z.
std::vector<double> PlayerReach(const ExtensiveFormGame& game, int player,
                                const BehaviorStrategy& strategy);

struct ReachProbabilities {
  std::vector<double> total;                // p(z, pi)
  std::vector<std::vector<double>> player;  // p_i(z, pi_i)
  std::vector<double> chance;               // p_c(z)
};
ReachProbabilities ComputeReach(const ExtensiveFormGame& game,
                                const BehaviorProfile& profile);

// u_i(pi) by summing p(z, pi) u_i(z) over terminals.
std::vector<double> ExpectedUtility(const ExtensiveFormGame& game,
                                    const BehaviorProfile& profile);

// Same, from precomputed per-player reach vectors.
std::vector<double> ExpectedUtilityFromReach(
    const ExtensiveFormGame& game,
    const std::vector<const std::vector<double>*>& player_reach);

// 1/2 sum_z |p(z, pi) - p(z, pi')|.
double TotalVariation(const ExtensiveFormGame& game, const BehaviorProfile& a,
                      const BehaviorProfile& b);

// Number of pure strategies of a player, saturating at INT64_MAX.
int64_t NumPureStrategies(const ExtensiveFormGame& game, int player);
// Mixed-radix decoding with the player's first infoset most significant.
PureStrategy DecodePureStrategy(const ExtensiveFormGame& game, int player,
                                int64_t index);

inline constexpr int kMaxEnumeratedInfosets = 20;
inline constexpr int64_t kMaxInducedProfiles = 1'000'000;

// Realization-equivalent mixed strategy (Kuhn's construction: the weight of
// a pure strategy is the product of its action probabilities).
MixedStrategy BehaviorToMixed(const ExtensiveFormGame& game, int player,
                              const BehaviorStrategy& strategy);

// Normal form with utilities evaluated through the tree, chance
// marginalized.
NormalFormGame InducedNormalForm(const ExtensiveFormGame& game,
                                 int64_t max_profiles = kMaxInducedProfiles);

}  // namespace polyvul

#endif  // POLYVUL_EFG_H_
