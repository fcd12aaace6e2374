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

#include "efg.h"

#include <cmath>
#include <limits>
#include <utility>

#include "errors.h"

namespace polyvul {

int ExtensiveFormGame::FindInfoset(std::string_view key) const {
  auto it = infoset_by_key_.find(std::string(key));
  return it == infoset_by_key_.end() ? -1 : it->second;
}

double ExtensiveFormGame::ActionProb(int node, int action,
                                     const BehaviorProfile& profile) const {
  if (type_[node] == NodeType::kChance) return chance_prob(node, action);
  const Infoset& info = infosets_[infoset_[node]];
  return profile[info.player][info.offset + action];
}

EfgBuilder::EfgBuilder(int num_players, std::string name) {
  POLYVUL_CHECK_ARG(num_players >= 1 && num_players <= kMaxPlayers,
                    "unsupported player count");
  g_.name_ = std::move(name);
  g_.num_players_ = num_players;
  g_.player_infosets_.resize(num_players);
  g_.strategy_size_.assign(num_players, 0);
}

int EfgBuilder::NewNode(int parent, int action, NodeType type,
                        int num_children) {
  const int id = g_.num_nodes();
  if (parent < 0) {
    POLYVUL_CHECK_ARG(id == 0, "only the first node may be the root");
  } else {
    POLYVUL_CHECK_ARG(parent < id && g_.type_[parent] != NodeType::kTerminal,
                      "invalid parent node");
    POLYVUL_CHECK_ARG(action >= 0 && action < g_.num_children_[parent],
                      "action out of range at parent");
    int& slot = g_.children_[g_.child_offset_[parent] + action];
    POLYVUL_CHECK_ARG(slot < 0, "child slot already filled");
    slot = id;
  }
  g_.type_.push_back(type);
  g_.player_.push_back(type == NodeType::kChance ? kChancePlayer : -2);
  g_.infoset_.push_back(-1);
  g_.parent_.push_back(parent);
  g_.action_from_parent_.push_back(parent < 0 ? -1 : action);
  g_.child_offset_.push_back(static_cast<int>(g_.children_.size()));
  g_.num_children_.push_back(num_children);
  g_.children_.insert(g_.children_.end(), num_children, -1);
  g_.chance_probs_.insert(g_.chance_probs_.end(), num_children, 0.0);
  g_.terminal_index_.push_back(-1);
  return id;
}

int EfgBuilder::AddDecision(int parent, int action, int player,
                            std::string_view infoset_key, int num_actions) {
  POLYVUL_CHECK_ARG(player >= 0 && player < g_.num_players_,
                    "decision node player out of range");
  POLYVUL_CHECK_ARG(num_actions >= 1 && num_actions <= kMaxActions,
                    "unsupported action count");
  const int id = NewNode(parent, action, NodeType::kDecision, num_actions);
  g_.player_[id] = player;
  std::string key(infoset_key);
  auto it = g_.infoset_by_key_.find(key);
  int set_id;
  if (it == g_.infoset_by_key_.end()) {
    set_id = static_cast<int>(g_.infosets_.size());
    Infoset info;
    info.player = player;
    info.local_index = static_cast<int>(g_.player_infosets_[player].size());
    info.num_actions = num_actions;
    info.offset = g_.strategy_size_[player];
    info.key = key;
    g_.infosets_.push_back(std::move(info));
    g_.player_infosets_[player].push_back(set_id);
    g_.strategy_size_[player] += num_actions;
    g_.infoset_by_key_.emplace(std::move(key), set_id);
  } else {
    set_id = it->second;
    const Infoset& info = g_.infosets_[set_id];
    POLYVUL_CHECK_ARG(info.player == player,
                      "infoset " + info.key + " shared across players");
    POLYVUL_CHECK_ARG(info.num_actions == num_actions,
                      "infoset " + info.key + " has inconsistent actions");
  }
  g_.infosets_[set_id].nodes.push_back(id);
  g_.infoset_[id] = set_id;
  return id;
}

int EfgBuilder::AddChance(int parent, int action, std::vector<double> probs) {
  POLYVUL_CHECK_ARG(!probs.empty(), "chance node needs outcomes");
  double total = 0;
  for (double p : probs) {
    POLYVUL_CHECK_ARG(std::isfinite(p) && p >= 0,
                      "chance probabilities must be nonnegative");
    total += p;
  }
  POLYVUL_CHECK_ARG(std::abs(total - 1.0) <= 1e-12,
                    "chance probabilities must sum to 1");
  const int id = NewNode(parent, action, NodeType::kChance,
                         static_cast<int>(probs.size()));
  std::copy(probs.begin(), probs.end(),
            g_.chance_probs_.begin() + g_.child_offset_[id]);
  return id;
}

int EfgBuilder::AddTerminal(int parent, int action,
                            std::span<const double> utilities) {
  POLYVUL_CHECK_ARG(static_cast<int>(utilities.size()) == g_.num_players_,
                    "terminal utility vector has the wrong length");
  const int id = NewNode(parent, action, NodeType::kTerminal, 0);
  g_.terminal_index_[id] = static_cast<int>(g_.terminal_node_.size());
  g_.terminal_node_.push_back(id);
  for (double u : utilities) {
    POLYVUL_CHECK_ARG(std::isfinite(u), "terminal utilities must be finite");
    g_.utilities_.push_back(u);
  }
  return id;
}

ExtensiveFormGame EfgBuilder::Build() && {
  ExtensiveFormGame& g = g_;
  POLYVUL_CHECK_ARG(g.num_nodes() > 0, "empty game tree");
  for (int c : g.children_) {
    POLYVUL_CHECK_ARG(c >= 0, "tree has an unfilled child slot");
  }

  // Check that ids follow a depth-first preorder, so that terminal order and
  // node order agree with a recursive traversal.
  {
    std::vector<int> stack = {0};
    int expected = 0;
    while (!stack.empty()) {
      const int h = stack.back();
      stack.pop_back();
      POLYVUL_CHECK_ARG(h == expected, "nodes were not added in preorder");
      ++expected;
      auto kids = g.children(h);
      for (auto it = kids.rbegin(); it != kids.rend(); ++it) stack.push_back(*it);
    }
  }

  g.chance_reach_.assign(g.num_terminals(), 0.0);
  std::vector<double> reach(g.num_nodes(), 1.0);
  for (int h = 1; h < g.num_nodes(); ++h) {
    const int p = g.parent_[h];
    reach[h] = reach[p];
    if (g.type_[p] == NodeType::kChance) {
      reach[h] *= g.chance_prob(p, g.action_from_parent_[h]);
    }
    if (g.type_[h] == NodeType::kTerminal) {
      g.chance_reach_[g.terminal_index_[h]] = reach[h];
    }
  }
  if (g.type_[0] == NodeType::kTerminal) g.chance_reach_[0] = 1.0;

  g.perfect_information_ = true;
  g.perfect_recall_ = true;
  for (const Infoset& info : g.infosets_) {
    if (info.nodes.size() > 1) g.perfect_information_ = false;
    std::vector<std::pair<int, int>> first;
    for (size_t k = 0; k < info.nodes.size(); ++k) {
      std::vector<std::pair<int, int>> seq;
      for (int h = info.nodes[k]; g.parent_[h] >= 0; h = g.parent_[h]) {
        const int p = g.parent_[h];
        if (g.player_[p] == info.player) {
          seq.emplace_back(g.infoset_[p], g.action_from_parent_[h]);
        }
      }
      if (k == 0) {
        first = std::move(seq);
      } else if (seq != first) {
        g.perfect_recall_ = false;
      }
    }
  }
  return std::move(g_);
}

namespace {

void AddOneShot(EfgBuilder& b, const NormalFormGame& nf, int parent, int action,
                int player, std::vector<int>& actions) {
  const int n = nf.num_players();
  if (player == n) {
    const int64_t p = nf.ProfileIndex(actions);
    std::vector<double> u(n);
    for (int i = 0; i < n; ++i) u[i] = nf.utility(p, i);
    b.AddTerminal(parent, action, u);
    return;
  }
  const int h = b.AddDecision(parent, action, player,
                              "p" + std::to_string(player),
                              nf.num_actions(player));
  for (int a = 0; a < nf.num_actions(player); ++a) {
    actions[player] = a;
    AddOneShot(b, nf, h, a, player + 1, actions);
  }
}

}  // namespace

ExtensiveFormGame OneShotGame(const NormalFormGame& game, std::string name) {
  for (int i = 0; i < game.num_players(); ++i) {
    POLYVUL_CHECK_ARG(game.num_actions(i) <= kMaxActions,
                      "too many actions for a one-shot tree");
  }
  EfgBuilder b(game.num_players(), std::move(name));
  std::vector<int> actions(game.num_players(), 0);
  AddOneShot(b, game, -1, 0, 0, actions);
  return std::move(b).Build();
}

BehaviorStrategy UniformStrategy(const ExtensiveFormGame& game, int player) {
  BehaviorStrategy s(game.strategy_size(player));
  for (int k = 0; k < game.num_infosets(player); ++k) {
    const Infoset& info = game.infoset_info(game.infoset_id(player, k));
    for (int a = 0; a < info.num_actions; ++a) {
      s[info.offset + a] = 1.0 / info.num_actions;
    }
  }
  return s;
}

BehaviorProfile UniformProfile(const ExtensiveFormGame& game) {
  BehaviorProfile profile;
  for (int i = 0; i < game.num_players(); ++i) {
    profile.push_back(UniformStrategy(game, i));
  }
  return profile;
}

BehaviorStrategy PureToBehavior(const ExtensiveFormGame& game, int player,
                                const PureStrategy& pure) {
  POLYVUL_CHECK_ARG(static_cast<int>(pure.size()) == game.num_infosets(player),
                    "pure strategy has the wrong number of infosets");
  BehaviorStrategy s(game.strategy_size(player), 0.0);
  for (int k = 0; k < game.num_infosets(player); ++k) {
    const Infoset& info = game.infoset_info(game.infoset_id(player, k));
    POLYVUL_CHECK_ARG(pure[k] >= 0 && pure[k] < info.num_actions,
                      "pure action out of range");
    s[info.offset + pure[k]] = 1.0;
  }
  return s;
}

void CheckStrategy(const ExtensiveFormGame& game, int player,
                   const BehaviorStrategy& strategy) {
  POLYVUL_CHECK_ARG(player >= 0 && player < game.num_players(),
                    "player out of range");
  POLYVUL_CHECK_ARG(
      static_cast<int>(strategy.size()) == game.strategy_size(player),
      "strategy of player " + std::to_string(player) +
          " does not cover its infosets");
  for (int k = 0; k < game.num_infosets(player); ++k) {
    const Infoset& info = game.infoset_info(game.infoset_id(player, k));
    double total = 0;
    for (int a = 0; a < info.num_actions; ++a) {
      const double p = strategy[info.offset + a];
      POLYVUL_CHECK_ARG(std::isfinite(p) && p >= -1e-12,
                        "negative probability at infoset " + info.key);
      total += p;
    }
    POLYVUL_CHECK_ARG(std::abs(total - 1.0) <= 1e-9,
                      "distribution at infoset " + info.key +
                          " does not sum to 1");
  }
}

void CheckProfile(const ExtensiveFormGame& game,
                  const BehaviorProfile& profile) {
  POLYVUL_CHECK_ARG(static_cast<int>(profile.size()) == game.num_players(),
                    "profile does not cover every player");
  for (int i = 0; i < game.num_players(); ++i) {
    CheckStrategy(game, i, profile[i]);
  }
}

std::vector<double> PlayerReach(const ExtensiveFormGame& game, int player,
                                const BehaviorStrategy& strategy) {
  CheckStrategy(game, player, strategy);
  std::vector<double> node_reach(game.num_nodes());
  std::vector<double> out(game.num_terminals());
  node_reach[0] = 1.0;
  for (int h = 1; h < game.num_nodes(); ++h) {
    const int p = game.parent(h);
    double r = node_reach[p];
    if (game.player(p) == player) {
      const Infoset& info = game.infoset_info(game.infoset(p));
      r *= strategy[info.offset + game.action_from_parent(h)];
      if (r < kReachEpsilon) r = 0.0;
    }
    node_reach[h] = r;
    if (game.is_terminal(h)) out[game.terminal_index(h)] = r;
  }
  if (game.num_nodes() == 1) out[0] = 1.0;
  return out;
}

ReachProbabilities ComputeReach(const ExtensiveFormGame& game,
                                const BehaviorProfile& profile) {
  CheckProfile(game, profile);
  ReachProbabilities r;
  r.chance = game.chance_reach();
  r.total = r.chance;
  for (int i = 0; i < game.num_players(); ++i) {
    r.player.push_back(PlayerReach(game, i, profile[i]));
    for (int z = 0; z < game.num_terminals(); ++z) {
      r.total[z] *= r.player[i][z];
      if (r.total[z] < kReachEpsilon) r.total[z] = 0.0;
    }
  }
  return r;
}

std::vector<double> ExpectedUtilityFromReach(
    const ExtensiveFormGame& game,
    const std::vector<const std::vector<double>*>& player_reach) {
  const int n = game.num_players();
  POLYVUL_CHECK_ARG(static_cast<int>(player_reach.size()) == n,
                    "reach vectors must cover every player");
  std::vector<double> values(n, 0.0);
  for (int z = 0; z < game.num_terminals(); ++z) {
    double p = game.chance_reach(z);
    for (int i = 0; i < n && p != 0.0; ++i) p *= (*player_reach[i])[z];
    if (p < kReachEpsilon) continue;
    for (int i = 0; i < n; ++i) values[i] += p * game.utility(z, i);
  }
  return values;
}

std::vector<double> ExpectedUtility(const ExtensiveFormGame& game,
                                    const BehaviorProfile& profile) {
  ReachProbabilities r = ComputeReach(game, profile);
  std::vector<double> values(game.num_players(), 0.0);
  for (int z = 0; z < game.num_terminals(); ++z) {
    if (r.total[z] == 0.0) continue;
    for (int i = 0; i < game.num_players(); ++i) {
      values[i] += r.total[z] * game.utility(z, i);
    }
  }
  return values;
}

double TotalVariation(const ExtensiveFormGame& game, const BehaviorProfile& a,
                      const BehaviorProfile& b) {
  const std::vector<double> pa = ComputeReach(game, a).total;
  const std::vector<double> pb = ComputeReach(game, b).total;
  double tv = 0;
  for (int z = 0; z < game.num_terminals(); ++z) tv += std::abs(pa[z] - pb[z]);
  return 0.5 * tv;
}

int64_t NumPureStrategies(const ExtensiveFormGame& game, int player) {
  constexpr int64_t kMax = std::numeric_limits<int64_t>::max();
  int64_t count = 1;
  for (int k = 0; k < game.num_infosets(player); ++k) {
    const int a = game.infoset_info(game.infoset_id(player, k)).num_actions;
    if (count > kMax / a) return kMax;
    count *= a;
  }
  return count;
}

PureStrategy DecodePureStrategy(const ExtensiveFormGame& game, int player,
                                int64_t index) {
  const int m = game.num_infosets(player);
  PureStrategy pure(m, 0);
  for (int k = m - 1; k >= 0; --k) {
    const int a = game.infoset_info(game.infoset_id(player, k)).num_actions;
    pure[k] = static_cast<int>(index % a);
    index /= a;
  }
  return pure;
}

MixedStrategy BehaviorToMixed(const ExtensiveFormGame& game, int player,
                              const BehaviorStrategy& strategy) {
  POLYVUL_CHECK_ARG(game.has_perfect_recall(),
                    "mixed conversion requires perfect recall");
  POLYVUL_CHECK_ARG(game.num_infosets(player) <= kMaxEnumeratedInfosets,
                    "too many infosets to enumerate pure strategies");
  CheckStrategy(game, player, strategy);
  const int64_t count = NumPureStrategies(game, player);
  POLYVUL_CHECK_ARG(count <= (int64_t{1} << 24),
                    "too many pure strategies to enumerate");
  const int m = game.num_infosets(player);
  MixedStrategy mixed(count, 1.0);
  // Weight of the pure strategy with index s is the product of one factor per
  // infoset; fill the table one radix digit at a time.
  int64_t stride = count;
  for (int k = 0; k < m; ++k) {
    const Infoset& info = game.infoset_info(game.infoset_id(player, k));
    stride /= info.num_actions;
    for (int64_t s = 0; s < count; ++s) {
      const int a = static_cast<int>((s / stride) % info.num_actions);
      mixed[s] *= strategy[info.offset + a];
    }
  }
  return mixed;
}

namespace {

// Sum over terminals of chance-weighted utilities reached by a pure profile.
void PureWalk(const ExtensiveFormGame& game,
              const std::vector<const PureStrategy*>& pure, int node, double prob,
              std::vector<double>& out) {
  switch (game.type(node)) {
    case NodeType::kTerminal: {
      const int z = game.terminal_index(node);
      for (int i = 0; i < game.num_players(); ++i) {
        out[i] += prob * game.utility(z, i);
      }
      return;
    }
    case NodeType::kChance:
      for (int a = 0; a < game.num_children(node); ++a) {
        const double q = game.chance_prob(node, a);
        if (q > 0) PureWalk(game, pure, game.child(node, a), prob * q, out);
      }
      return;
    case NodeType::kDecision: {
      const Infoset& info = game.infoset_info(game.infoset(node));
      PureWalk(game, pure, game.child(node, (*pure[info.player])[info.local_index]),
               prob, out);
      return;
    }
  }
}

}  // namespace

NormalFormGame InducedNormalForm(const ExtensiveFormGame& game,
                                 int64_t max_profiles) {
  const int n = game.num_players();
  std::vector<int> counts(n);
  int64_t total = 1;
  for (int i = 0; i < n; ++i) {
    const int64_t c = NumPureStrategies(game, i);
    POLYVUL_CHECK_ARG(c <= max_profiles && total <= max_profiles / c,
                      "induced normal form exceeds the profile guard");
    counts[i] = static_cast<int>(c);
    total *= c;
  }
  std::vector<double> utils(total * n, 0.0);
  NormalFormGame shape(counts, utils);
  std::vector<std::vector<PureStrategy>> decoded(n);
  for (int i = 0; i < n; ++i) {
    for (int s = 0; s < counts[i]; ++s) {
      decoded[i].push_back(DecodePureStrategy(game, i, s));
    }
  }
  std::vector<const PureStrategy*> pure(n);
  std::vector<double> u(n);
  for (int64_t p = 0; p < total; ++p) {
    for (int i = 0; i < n; ++i) pure[i] = &decoded[i][shape.ActionOf(p, i)];
    std::fill(u.begin(), u.end(), 0.0);
    PureWalk(game, pure, 0, 1.0, u);
    for (int i = 0; i < n; ++i) utils[p * n + i] = u[i];
  }
  return NormalFormGame(std::move(counts), std::move(utils));
}

}  // namespace polyvul
