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
#include "polymatrix.h"

#include <cmath>
#include <utility>

#include "errors.h"
#include "json.hpp"

namespace polyvul {

std::vector<Edge> FullyConnectedEdges(int num_players) {
  std::vector<Edge> edges;
  for (int i = 0; i < num_players; ++i) {
    for (int j = i + 1; j < num_players; ++j) edges.push_back({i, j});
  }
  return edges;
}

namespace {

void CheckEdges(const std::vector<Edge>& edges, int num_players) {
  for (size_t e = 0; e < edges.size(); ++e) {
    const Edge& ed = edges[e];
    POLYVUL_CHECK_ARG(ed.i >= 0 && ed.j < num_players && ed.i < ed.j,
                      "edges must join distinct players with i < j");
    for (size_t f = 0; f < e; ++f) {
      POLYVUL_CHECK_ARG(!(edges[f] == ed), "duplicate edge");
    }
  }
}

int FindEdge(const std::vector<Edge>& edges, int i, int j) {
  if (i > j) std::swap(i, j);
  for (size_t e = 0; e < edges.size(); ++e) {
    if (edges[e].i == i && edges[e].j == j) return static_cast<int>(e);
  }
  return -1;
}

int CountDegree(const std::vector<Edge>& edges, int player) {
  int d = 0;
  for (const Edge& e : edges) d += (e.i == player || e.j == player);
  return d;
}

}  // namespace

PolymatrixGame::PolymatrixGame(std::vector<int> num_actions,
                               std::vector<Edge> edges)
    : num_actions_(std::move(num_actions)), edges_(std::move(edges)) {
  POLYVUL_CHECK_ARG(!num_actions_.empty() &&
                        static_cast<int>(num_actions_.size()) <= kMaxPlayers,
                    "unsupported player count");
  for (int a : num_actions_) {
    POLYVUL_CHECK_ARG(a >= 1, "action counts must be positive");
  }
  CheckEdges(edges_, num_players());
  for (const Edge& e : edges_) {
    payoffs_.emplace_back(2 * static_cast<size_t>(num_actions_[e.i]) *
                              num_actions_[e.j],
                          0.0);
  }
}

int PolymatrixGame::EdgeIndex(int i, int j) const {
  return FindEdge(edges_, i, j);
}

int PolymatrixGame::Degree(int player) const {
  return CountDegree(edges_, player);
}

double& PolymatrixGame::Cell(int edge, int owner, int ai, int aj) {
  const Edge& e = edges_[edge];
  const size_t block = static_cast<size_t>(num_actions_[e.i]) *
                       num_actions_[e.j];
  return payoffs_[edge][owner * block + ai * num_actions_[e.j] + aj];
}

double PolymatrixGame::CellValue(int edge, int owner, int ai, int aj) const {
  return const_cast<PolymatrixGame*>(this)->Cell(edge, owner, ai, aj);
}

double PolymatrixGame::Payoff(int i, int j, int ai, int aj) const {
  const int e = EdgeIndex(i, j);
  POLYVUL_CHECK_ARG(e >= 0, "no edge between the given players");
  return i < j ? CellValue(e, 0, ai, aj) : CellValue(e, 1, aj, ai);
}

void PolymatrixGame::SetPayoff(int i, int j, int ai, int aj, double value) {
  const int e = EdgeIndex(i, j);
  POLYVUL_CHECK_ARG(e >= 0, "no edge between the given players");
  POLYVUL_CHECK_ARG(std::isfinite(value), "payoffs must be finite");
  POLYVUL_CHECK_ARG(ai >= 0 && ai < num_actions_[i] && aj >= 0 &&
                        aj < num_actions_[j],
                    "action out of range");
  if (i < j) {
    Cell(e, 0, ai, aj) = value;
  } else {
    Cell(e, 1, aj, ai) = value;
  }
}

std::optional<double> PolymatrixGame::Constant(int edge) const {
  const Edge& e = edges_[edge];
  const double c = CellValue(edge, 0, 0, 0) + CellValue(edge, 1, 0, 0);
  for (int a = 0; a < num_actions_[e.i]; ++a) {
    for (int b = 0; b < num_actions_[e.j]; ++b) {
      const double s = CellValue(edge, 0, a, b) + CellValue(edge, 1, a, b);
      if (std::abs(s - c) > kConstantSumTolerance) return std::nullopt;
    }
  }
  return c;
}

bool PolymatrixGame::IsConstantSum() const {
  for (int e = 0; e < num_edges(); ++e) {
    if (!Constant(e)) return false;
  }
  return true;
}

double PolymatrixGame::SubgameValue(int i, int j, const MixedStrategy& si,
                                    const MixedStrategy& sj) const {
  POLYVUL_CHECK_ARG(static_cast<int>(si.size()) == num_actions_[i] &&
                        static_cast<int>(sj.size()) == num_actions_[j],
                    "strategy size mismatch");
  double v = 0;
  for (int a = 0; a < num_actions_[i]; ++a) {
    if (si[a] == 0) continue;
    for (int b = 0; b < num_actions_[j]; ++b) {
      v += si[a] * sj[b] * Payoff(i, j, a, b);
    }
  }
  return v;
}

std::vector<double> PolymatrixGame::Utility(
    const std::vector<int>& actions) const {
  POLYVUL_CHECK_ARG(static_cast<int>(actions.size()) == num_players(),
                    "profile has wrong arity");
  std::vector<double> u(num_players(), 0.0);
  for (int e = 0; e < num_edges(); ++e) {
    const int i = edges_[e].i, j = edges_[e].j;
    u[i] += CellValue(e, 0, actions[i], actions[j]);
    u[j] += CellValue(e, 1, actions[i], actions[j]);
  }
  return u;
}

std::vector<double> PolymatrixGame::ExpectedUtility(
    const MixedProfile& profile) const {
  POLYVUL_CHECK_ARG(static_cast<int>(profile.size()) == num_players(),
                    "profile has wrong arity");
  std::vector<double> u(num_players(), 0.0);
  for (const Edge& e : edges_) {
    u[e.i] += SubgameValue(e.i, e.j, profile[e.i], profile[e.j]);
    u[e.j] += SubgameValue(e.j, e.i, profile[e.j], profile[e.i]);
  }
  return u;
}

NormalFormGame PolymatrixGame::ToNormalForm() const {
  int64_t profiles = 1;
  for (int a : num_actions_) profiles *= a;
  const int n = num_players();
  std::vector<double> utils(profiles * n);
  std::vector<int> actions(n, 0);
  for (int64_t p = 0; p < profiles; ++p) {
    int64_t rest = p;
    for (int i = n - 1; i >= 0; --i) {
      actions[i] = static_cast<int>(rest % num_actions_[i]);
      rest /= num_actions_[i];
    }
    const std::vector<double> u = Utility(actions);
    for (int i = 0; i < n; ++i) utils[p * n + i] = u[i];
  }
  return NormalFormGame(num_actions_, std::move(utils));
}

PolymatrixGame OffenseDefensePolymatrix(double beta) {
  POLYVUL_CHECK_ARG(std::isfinite(beta), "beta must be finite");
  PolymatrixGame g({2, 2, 2}, FullyConnectedEdges(3));
  // An attack on a relaxing player 0 wins beta from them.
  for (int attacker : {1, 2}) {
    g.SetPayoff(0, attacker, 0, 0, -beta);
    g.SetPayoff(attacker, 0, 0, 0, beta);
  }
  // Between the attackers, whoever targets the other while the other
  // targets player 0 wins beta.
  g.SetPayoff(1, 2, 1, 0, beta);
  g.SetPayoff(2, 1, 0, 1, -beta);
  g.SetPayoff(1, 2, 0, 1, -beta);
  g.SetPayoff(2, 1, 1, 0, beta);
  return g;
}

ChanceStrategy DefaultSubgameChance(const ExtensiveFormGame& game, int i,
                                    int j) {
  POLYVUL_CHECK_ARG(i != j && i >= 0 && j >= 0 && i < game.num_players() &&
                        j < game.num_players(),
                    "subgame players must be distinct and in range");
  ChanceStrategy chance(game.num_nodes());
  for (int h = 0; h < game.num_nodes(); ++h) {
    const int k = game.num_children(h);
    switch (game.type(h)) {
      case NodeType::kTerminal:
        break;
      case NodeType::kChance:
        chance[h].resize(k);
        for (int a = 0; a < k; ++a) chance[h][a] = game.chance_prob(h, a);
        break;
      case NodeType::kDecision:
        if (game.player(h) != i && game.player(h) != j) {
          chance[h].assign(k, 1.0 / k);
        }
        break;
    }
  }
  return chance;
}

std::vector<double> SubgameChanceReach(const ExtensiveFormGame& game, int i,
                                       int j, const ChanceStrategy& chance) {
  POLYVUL_CHECK_ARG(static_cast<int>(chance.size()) == game.num_nodes(),
                    "chance strategy must cover every node");
  std::vector<double> node_reach(game.num_nodes(), 1.0);
  for (int h = 1; h < game.num_nodes(); ++h) {
    const int parent = game.parent(h);
    double p = node_reach[parent];
    const bool owned = game.type(parent) == NodeType::kDecision &&
                       (game.player(parent) == i || game.player(parent) == j);
    if (!owned) {
      const auto& dist = chance[parent];
      POLYVUL_CHECK_ARG(static_cast<int>(dist.size()) ==
                            game.num_children(parent),
                        "chance strategy missing at a non-subgame node");
      p *= dist[game.action_from_parent(h)];
    }
    node_reach[h] = p;
  }
  std::vector<double> reach(game.num_terminals());
  for (int z = 0; z < game.num_terminals(); ++z) {
    reach[z] = node_reach[game.terminal_node(z)];
  }
  return reach;
}

PolyEfg::PolyEfg(std::shared_ptr<const ExtensiveFormGame> game,
                 std::vector<Edge> edges)
    : PolyEfg(game, edges, {}) {}

PolyEfg::PolyEfg(std::shared_ptr<const ExtensiveFormGame> game,
                 std::vector<Edge> edges, std::vector<ChanceStrategy> chance)
    : game_(std::move(game)), edges_(std::move(edges)),
      chance_(std::move(chance)) {
  POLYVUL_CHECK_ARG(game_ != nullptr, "poly-EFG needs a game");
  const int n = game_->num_players();
  POLYVUL_CHECK_ARG(n >= 2, "poly-EFG needs at least two players");
  if (edges_.empty()) edges_ = FullyConnectedEdges(n);
  CheckEdges(edges_, n);
  if (chance_.empty()) {
    for (const Edge& e : edges_) {
      chance_.push_back(DefaultSubgameChance(*game_, e.i, e.j));
    }
  }
  POLYVUL_CHECK_ARG(chance_.size() == edges_.size(),
                    "one chance strategy per edge required");
  for (size_t e = 0; e < edges_.size(); ++e) {
    chance_reach_.push_back(
        SubgameChanceReach(*game_, edges_[e].i, edges_[e].j, chance_[e]));
  }
  values_.assign(edges_.size(),
                 std::vector<double>(game_->num_terminals(), 0.0));
  constants_.assign(edges_.size(), 0.0);
}

int PolyEfg::EdgeIndex(int i, int j) const { return FindEdge(edges_, i, j); }

int PolyEfg::Degree(int player) const { return CountDegree(edges_, player); }

double PolyEfg::TerminalValue(int edge, int player, int z) const {
  return player == edges_[edge].i ? values_[edge][z]
                                  : constants_[edge] - values_[edge][z];
}

std::pair<double, double> PolyEfg::SubgameUtilityFromReach(
    int edge, const std::vector<double>& reach_i,
    const std::vector<double>& reach_j) const {
  const auto& pc = chance_reach_[edge];
  const auto& u = values_[edge];
  double vi = 0, mass = 0;
  for (size_t z = 0; z < u.size(); ++z) {
    const double w = reach_i[z] * reach_j[z] * pc[z];
    if (w == 0) continue;
    vi += w * u[z];
    mass += w;
  }
  return {vi, constants_[edge] * mass - vi};
}

std::pair<double, double> PolyEfg::SubgameUtility(
    int i, int j, const BehaviorStrategy& pi_i,
    const BehaviorStrategy& pi_j) const {
  const int e = EdgeIndex(i, j);
  POLYVUL_CHECK_ARG(e >= 0, "no edge between the given players");
  CheckStrategy(*game_, i, pi_i);
  CheckStrategy(*game_, j, pi_j);
  const auto ri = PlayerReach(*game_, i, pi_i);
  const auto rj = PlayerReach(*game_, j, pi_j);
  auto [a, b] = i < j ? SubgameUtilityFromReach(e, ri, rj)
                      : SubgameUtilityFromReach(e, rj, ri);
  return i < j ? std::pair{a, b} : std::pair{b, a};
}

std::vector<double> PolyEfg::GlobalUtilityFromReach(
    const std::vector<std::vector<double>>& player_reach) const {
  std::vector<double> u(num_players(), 0.0);
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges_[e];
    auto [a, b] =
        SubgameUtilityFromReach(e, player_reach[ed.i], player_reach[ed.j]);
    u[ed.i] += a;
    u[ed.j] += b;
  }
  return u;
}

std::vector<double> PolyEfg::GlobalUtility(
    const BehaviorProfile& profile) const {
  CheckProfile(*game_, profile);
  std::vector<std::vector<double>> reach;
  for (int i = 0; i < num_players(); ++i) {
    reach.push_back(PlayerReach(*game_, i, profile[i]));
  }
  return GlobalUtilityFromReach(reach);
}

PolymatrixGame PolyEfg::InducedNormalFormPolymatrix(
    int64_t max_strategies) const {
  const int n = num_players();
  std::vector<int> counts(n);
  std::vector<std::vector<std::vector<double>>> reach(n);
  for (int i = 0; i < n; ++i) {
    const int64_t c = NumPureStrategies(*game_, i);
    POLYVUL_CHECK_ARG(c <= max_strategies,
                      "too many pure strategies for the induced polymatrix "
                      "game");
    counts[i] = static_cast<int>(c);
    for (int64_t k = 0; k < c; ++k) {
      reach[i].push_back(PlayerReach(
          *game_, i, PureToBehavior(*game_, i, DecodePureStrategy(*game_, i, k))));
    }
  }
  PolymatrixGame pg(counts, edges_);
  for (int e = 0; e < num_edges(); ++e) {
    const Edge& ed = edges_[e];
    for (int a = 0; a < counts[ed.i]; ++a) {
      for (int b = 0; b < counts[ed.j]; ++b) {
        auto [vi, vj] = SubgameUtilityFromReach(e, reach[ed.i][a], reach[ed.j][b]);
        pg.SetPayoff(ed.i, ed.j, a, b, vi);
        pg.SetPayoff(ed.j, ed.i, b, a, vj);
      }
    }
  }
  return pg;
}

namespace {

nlohmann::json EdgesJson(const std::vector<Edge>& edges) {
  nlohmann::json out = nlohmann::json::array();
  for (const Edge& e : edges) out.push_back({e.i, e.j});
  return out;
}

std::vector<Edge> EdgesFromJson(const nlohmann::json& doc) {
  std::vector<Edge> edges;
  for (const auto& item : doc) {
    auto pair = item.get<std::vector<int>>();
    POLYVUL_CHECK_ARG(pair.size() == 2, "edges must be pairs");
    edges.push_back({pair[0], pair[1]});
  }
  return edges;
}

nlohmann::json ParseJson(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed ") + what + " JSON: " +
                          e.what());
  }
}

}  // namespace

std::string PolymatrixToJson(const PolymatrixGame& game) {
  nlohmann::json doc;
  doc["type"] = "polymatrix";
  doc["actions"] = game.num_actions();
  doc["edges"] = EdgesJson(game.edges());
  nlohmann::json mats = nlohmann::json::array();
  for (int e = 0; e < game.num_edges(); ++e) {
    const Edge& ed = game.edges()[e];
    nlohmann::json ui = nlohmann::json::array(), uj = nlohmann::json::array();
    for (int a = 0; a < game.num_actions(ed.i); ++a) {
      std::vector<double> ri, rj;
      for (int b = 0; b < game.num_actions(ed.j); ++b) {
        ri.push_back(game.Payoff(ed.i, ed.j, a, b));
        rj.push_back(game.Payoff(ed.j, ed.i, b, a));
      }
      ui.push_back(ri);
      uj.push_back(rj);
    }
    nlohmann::json m = {{"u_ij", ui}, {"u_ji", uj}};
    if (auto c = game.Constant(e)) m["constant"] = *c;
    mats.push_back(m);
  }
  doc["subgames"] = mats;
  return doc.dump(2);
}

PolymatrixGame PolymatrixFromJson(const std::string& text) {
  const nlohmann::json doc = ParseJson(text, "polymatrix");
  try {
    PolymatrixGame g(doc.at("actions").get<std::vector<int>>(),
                     EdgesFromJson(doc.at("edges")));
    const auto& mats = doc.at("subgames");
    POLYVUL_CHECK_ARG(static_cast<int>(mats.size()) == g.num_edges(),
                      "one subgame per edge required");
    for (int e = 0; e < g.num_edges(); ++e) {
      const Edge& ed = g.edges()[e];
      auto ui = mats[e].at("u_ij").get<std::vector<std::vector<double>>>();
      auto uj = mats[e].at("u_ji").get<std::vector<std::vector<double>>>();
      POLYVUL_CHECK_ARG(static_cast<int>(ui.size()) == g.num_actions(ed.i) &&
                            ui.size() == uj.size(),
                        "subgame matrix has wrong shape");
      for (int a = 0; a < g.num_actions(ed.i); ++a) {
        POLYVUL_CHECK_ARG(
            static_cast<int>(ui[a].size()) == g.num_actions(ed.j) &&
                ui[a].size() == uj[a].size(),
            "subgame matrix has wrong shape");
        for (int b = 0; b < g.num_actions(ed.j); ++b) {
          g.SetPayoff(ed.i, ed.j, a, b, ui[a][b]);
          g.SetPayoff(ed.j, ed.i, b, a, uj[a][b]);
        }
      }
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed polymatrix JSON: ") +
                          e.what());
  }
}

std::string PolyEfgToJson(const PolyEfg& game) {
  nlohmann::json doc;
  doc["type"] = "poly_efg";
  doc["game"] = game.game().name();
  doc["terminal_order"] = "depth-first";
  doc["num_terminals"] = game.game().num_terminals();
  doc["edges"] = EdgesJson(game.edges());
  nlohmann::json subgames = nlohmann::json::array();
  for (int e = 0; e < game.num_edges(); ++e) {
    subgames.push_back(
        {{"values", game.values(e)}, {"constant", game.constant(e)}});
  }
  doc["subgames"] = subgames;
  return doc.dump(2);
}

PolyEfg PolyEfgFromJson(const std::string& text,
                        std::shared_ptr<const ExtensiveFormGame> game) {
  const nlohmann::json doc = ParseJson(text, "poly-EFG");
  try {
    POLYVUL_CHECK_ARG(game != nullptr, "poly-EFG needs a game");
    POLYVUL_CHECK_ARG(
        doc.at("num_terminals").get<int>() == game->num_terminals(),
        "poly-EFG terminal count does not match the game");
    PolyEfg pg(game, EdgesFromJson(doc.at("edges")));
    const auto& subgames = doc.at("subgames");
    POLYVUL_CHECK_ARG(static_cast<int>(subgames.size()) == pg.num_edges(),
                      "one subgame per edge required");
    for (int e = 0; e < pg.num_edges(); ++e) {
      auto v = subgames[e].at("values").get<std::vector<double>>();
      POLYVUL_CHECK_ARG(static_cast<int>(v.size()) == game->num_terminals(),
                        "terminal array has wrong length");
      pg.values(e) = std::move(v);
      pg.constant(e) = subgames[e].at("constant").get<double>();
    }
    return pg;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed poly-EFG JSON: ") + e.what());
  }
}

}  // namespace polyvul
