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
#include "analysis.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "best_response.h"
#include "errors.h"
#include "json.hpp"

namespace polyvul {

MixedStrategy MarginalStrategy(const NormalFormGame& game,
                               const EmpiricalDistribution& mu, int player) {
  game.CheckDistribution(mu);
  POLYVUL_CHECK_ARG(player >= 0 && player < game.num_players(),
                    "player out of range");
  MixedStrategy s(game.num_actions(player), 0.0);
  for (int64_t p = 0; p < game.num_profiles(); ++p) {
    s[game.ActionOf(p, player)] += mu[p];
  }
  return s;
}

MixedProfile MarginalProfile(const NormalFormGame& game,
                             const EmpiricalDistribution& mu) {
  MixedProfile s;
  for (int i = 0; i < game.num_players(); ++i) {
    s.push_back(MarginalStrategy(game, mu, i));
  }
  return s;
}

double CceGap(const NormalFormGame& game, const EmpiricalDistribution& mu) {
  game.CheckDistribution(mu);
  double gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.num_players(); ++i) {
    for (int t = 0; t < game.num_actions(i); ++t) {
      double adv = 0;
      for (int64_t p = 0; p < game.num_profiles(); ++p) {
        if (mu[p] == 0) continue;
        adv += mu[p] * (game.utility(game.WithAction(p, i, t), i) -
                        game.utility(p, i));
      }
      gap = std::max(gap, adv);
    }
  }
  return gap;
}

namespace {

// Calls visit(choice) for every element of the cross product of the other
// players' lists; choice[i] is left at 0.
template <typename Sets, typename Visit>
void ForEachOpponentProfile(int player, const Sets& sets, Visit visit) {
  const int n = static_cast<int>(sets.size());
  for (int j = 0; j < n; ++j) {
    POLYVUL_CHECK_ARG(j == player || !sets[j].empty(),
                      "opponent sets must be nonempty");
  }
  std::vector<size_t> choice(n, 0);
  while (true) {
    visit(choice);
    int j = n - 1;
    for (; j >= 0; --j) {
      if (j == player) continue;
      if (++choice[j] < sets[j].size()) break;
      choice[j] = 0;
    }
    if (j < 0) return;
  }
}

}  // namespace

double VulnerabilityFinite(const ExtensiveFormGame& game, int player,
                           const BehaviorProfile& profile,
                           const OpponentSets& opponents) {
  CheckProfile(game, profile);
  const int n = game.num_players();
  POLYVUL_CHECK_ARG(player >= 0 && player < n, "player out of range");
  POLYVUL_CHECK_ARG(static_cast<int>(opponents.size()) == n,
                    "need one opponent list per player");
  std::vector<std::vector<std::vector<double>>> reach(n);
  for (int j = 0; j < n; ++j) {
    if (j == player) continue;
    for (const auto& s : opponents[j]) {
      CheckStrategy(game, j, s);
      reach[j].push_back(PlayerReach(game, j, s));
    }
  }
  const std::vector<double> own = PlayerReach(game, player, profile[player]);
  const double base = ExpectedUtility(game, profile)[player];
  double worst = std::numeric_limits<double>::infinity();
  std::vector<const std::vector<double>*> ptrs(n);
  ForEachOpponentProfile(player, opponents, [&](const std::vector<size_t>& c) {
    for (int j = 0; j < n; ++j) ptrs[j] = j == player ? &own : &reach[j][c[j]];
    worst = std::min(worst, ExpectedUtilityFromReach(game, ptrs)[player]);
  });
  return base - worst;
}

double VulnerabilityFinite(const NormalFormGame& game, int player,
                           const MixedProfile& profile,
                           const MixedOpponentSets& opponents) {
  game.CheckProfile(profile);
  const int n = game.num_players();
  POLYVUL_CHECK_ARG(player >= 0 && player < n, "player out of range");
  POLYVUL_CHECK_ARG(static_cast<int>(opponents.size()) == n,
                    "need one opponent list per player");
  const double base = game.ExpectedUtility(profile)[player];
  double worst = std::numeric_limits<double>::infinity();
  MixedProfile s = profile;
  ForEachOpponentProfile(player, opponents, [&](const std::vector<size_t>& c) {
    for (int j = 0; j < n; ++j) {
      if (j != player) s[j] = opponents[j][c[j]];
    }
    game.CheckProfile(s);
    worst = std::min(worst, game.ExpectedUtility(s)[player]);
  });
  return base - worst;
}

double VulnerabilityPolymatrix(const PolymatrixGame& game, int player,
                               const MixedProfile& profile) {
  POLYVUL_CHECK_ARG(game.IsConstantSum(),
                    "worst-case vulnerability needs a constant-sum game");
  POLYVUL_CHECK_ARG(static_cast<int>(profile.size()) == game.num_players(),
                    "profile has wrong arity");
  double vul = 0;
  for (const Edge& e : game.edges()) {
    if (e.i != player && e.j != player) continue;
    const int j = e.i == player ? e.j : e.i;
    const double value = game.SubgameValue(player, j, profile[player],
                                           profile[j]);
    double least = std::numeric_limits<double>::infinity();
    for (int b = 0; b < game.num_actions(j); ++b) {
      least = std::min(least, game.SubgameValue(player, j, profile[player],
                                                PureMixed(game.num_actions(j), b)));
    }
    vul += value - least;
  }
  return vul;
}

double VulnerabilityPolymatrix(const PolyEfg& game, int player,
                               const BehaviorProfile& profile) {
  const ExtensiveFormGame& g = game.game();
  CheckProfile(g, profile);
  POLYVUL_CHECK_ARG(player >= 0 && player < g.num_players(),
                    "player out of range");
  const std::vector<double> own = PlayerReach(g, player, profile[player]);
  double vul = 0;
  for (int e = 0; e < game.num_edges(); ++e) {
    const Edge& ed = game.edges()[e];
    if (ed.i != player && ed.j != player) continue;
    const int j = ed.i == player ? ed.j : ed.i;
    const std::vector<double> theirs = PlayerReach(g, j, profile[j]);
    auto [vi, vj] = ed.i == player
                        ? game.SubgameUtilityFromReach(e, own, theirs)
                        : [&] {
                            auto [a, b] =
                                game.SubgameUtilityFromReach(e, theirs, own);
                            return std::pair{b, a};
                          }();
    (void)vj;
    // j picks the response that minimizes the player's subgame value.
    std::vector<double> weights(g.num_terminals());
    for (int z = 0; z < g.num_terminals(); ++z) {
      weights[z] = -own[z] * game.chance_reach(e)[z] *
                   game.TerminalValue(e, player, z);
    }
    const double least = -BestResponseToWeights(g, j, weights).value;
    vul += vi - least;
  }
  return vul;
}

namespace {

// All points of the probability simplex in k dimensions whose coordinates
// are multiples of 1/steps.
std::vector<MixedStrategy> SimplexGrid(int k, int steps) {
  std::vector<MixedStrategy> out;
  std::vector<int> counts(k, 0);
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == k - 1) {
      counts[pos] = left;
      MixedStrategy s(k);
      for (int a = 0; a < k; ++a) s[a] = static_cast<double>(counts[a]) / steps;
      out.push_back(std::move(s));
      return;
    }
    for (int c = 0; c <= left; ++c) {
      counts[pos] = c;
      self(self, pos + 1, left - c);
    }
  };
  rec(rec, 0, steps);
  return out;
}

}  // namespace

double VulnerabilityGridOracle(const NormalFormGame& game, int player,
                               const MixedProfile& profile,
                               double resolution) {
  const int n = game.num_players();
  POLYVUL_CHECK_ARG(n >= 2 && n <= kGridMaxPlayers,
                    "grid oracle supports two or three players");
  POLYVUL_CHECK_ARG(player >= 0 && player < n, "player out of range");
  POLYVUL_CHECK_ARG(resolution > 0 && std::isfinite(resolution),
                    "grid resolution must be positive");
  game.CheckProfile(profile);
  std::vector<int> opp;
  for (int j = 0; j < n; ++j) {
    if (j == player) continue;
    POLYVUL_CHECK_ARG(game.num_actions(j) <= kGridMaxActions,
                      "grid oracle supports at most four opponent actions");
    opp.push_back(j);
  }
  const int steps =
      std::max(1, static_cast<int>(std::floor(1.0 / resolution + 1e-9)));
  const double base = game.ExpectedUtility(profile)[player];

  // u_i(s_i, b, c) with the player's own mixing folded in; c is a dummy
  // single action for two-player games.
  const int kb = game.num_actions(opp[0]);
  const int kc = opp.size() > 1 ? game.num_actions(opp[1]) : 1;
  std::vector<double> m(static_cast<size_t>(kb) * kc, 0.0);
  for (int64_t p = 0; p < game.num_profiles(); ++p) {
    const double w = profile[player][game.ActionOf(p, player)];
    if (w == 0) continue;
    const int b = game.ActionOf(p, opp[0]);
    const int c = opp.size() > 1 ? game.ActionOf(p, opp[1]) : 0;
    m[b * kc + c] += w * game.utility(p, player);
  }
  const auto grid_b = SimplexGrid(kb, steps);
  const auto grid_c = SimplexGrid(kc, steps);
  double worst = std::numeric_limits<double>::infinity();
  std::vector<double> v(kc);
  for (const auto& x : grid_b) {
    std::fill(v.begin(), v.end(), 0.0);
    for (int b = 0; b < kb; ++b) {
      if (x[b] == 0) continue;
      for (int c = 0; c < kc; ++c) v[c] += x[b] * m[b * kc + c];
    }
    for (const auto& y : grid_c) {
      double u = 0;
      for (int c = 0; c < kc; ++c) u += y[c] * v[c];
      worst = std::min(worst, u);
    }
  }
  return base - worst;
}

VulnerabilityBound Bound(int degree, int num_players, double gamma,
                         double delta) {
  POLYVUL_CHECK_ARG(gamma >= 0 && delta >= 0, "gamma and delta must be >= 0");
  POLYVUL_CHECK_ARG(degree >= 0 && degree < num_players,
                    "degree must be below the player count");
  return {degree * gamma + 2 * delta, (num_players - 1) * gamma + 2 * delta};
}

double MaxPairwiseTotalVariation(const ExtensiveFormGame& game,
                                 const std::vector<BehaviorProfile>& profiles) {
  std::vector<std::vector<double>> reach;
  for (const auto& pi : profiles) reach.push_back(ComputeReach(game, pi).total);
  double best = 0;
  for (size_t a = 0; a < reach.size(); ++a) {
    for (size_t b = a + 1; b < reach.size(); ++b) {
      double tv = 0;
      for (int z = 0; z < game.num_terminals(); ++z) {
        tv += std::abs(reach[a][z] - reach[b][z]);
      }
      best = std::max(best, 0.5 * tv);
    }
  }
  return best;
}

std::optional<double> VulnerabilityReport::Ratio() const {
  if (!bound || vulnerability.empty()) return std::nullopt;
  const double v = *std::max_element(vulnerability.begin(),
                                     vulnerability.end());
  if (v <= 0) return std::nullopt;
  return *bound / v;
}

std::string VulnerabilityReport::ToJson() const {
  auto opt = [](const std::optional<double>& x) {
    return x ? nlohmann::json(*x) : nlohmann::json(nullptr);
  };
  nlohmann::json doc;
  doc["opponent_model"] = opponent_model;
  doc["vulnerability"] = vulnerability;
  doc["gamma"] = opt(gamma);
  doc["delta"] = opt(delta);
  doc["bound"] = opt(bound);
  doc["ratio"] = opt(Ratio());
  return doc.dump(2);
}

std::string VulnerabilityReport::ToCsvRows(int run) const {
  std::ostringstream out;
  out.precision(17);
  for (size_t i = 0; i < vulnerability.size(); ++i) {
    out << run << ',' << i << ',' << vulnerability[i] << ',';
    if (bound) out << *bound;
    out << ',';
    if (bound && vulnerability[i] > 0) out << *bound / vulnerability[i];
    out << '\n';
  }
  return out.str();
}

}  // namespace polyvul
