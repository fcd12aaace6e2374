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
#include <functional>
#include <memory>

#include "builtin_games.h"
#include "errors.h"
#include "gtest/gtest.h"
#include "rng.h"
#include "test_util.h"

namespace polyvul {
namespace {

using testing_util::RandomProfile;

std::shared_ptr<const ExtensiveFormGame> Tree(const std::string& name) {
  return std::make_shared<const ExtensiveFormGame>(BuildBuiltinTree(name));
}

void RandomizeValues(PolyEfg& pg, Rng& rng) {
  for (int e = 0; e < pg.num_edges(); ++e) {
    for (double& v : pg.values(e)) v = rng.Uniform(-2, 2);
    pg.constant(e) = rng.Uniform(-1, 1);
  }
}

// Sum over root-to-leaf paths with each node's probability taken from the
// owning endpoint's strategy or from the subgame chance strategy.
double OracleSubgameValue(const PolyEfg& pg, int e, const BehaviorStrategy& si,
                          const BehaviorStrategy& sj) {
  const ExtensiveFormGame& g = pg.game();
  const Edge& ed = pg.edges()[e];
  std::function<double(int, double)> walk = [&](int h, double p) {
    if (g.is_terminal(h)) return p * pg.values(e)[g.terminal_index(h)];
    double v = 0;
    for (int a = 0; a < g.num_children(h); ++a) {
      double q;
      if (g.type(h) == NodeType::kDecision && g.player(h) == ed.i) {
        q = si[g.infoset_info(g.infoset(h)).offset + a];
      } else if (g.type(h) == NodeType::kDecision && g.player(h) == ed.j) {
        q = sj[g.infoset_info(g.infoset(h)).offset + a];
      } else {
        q = pg.chance(e)[h][a];
      }
      v += walk(g.child(h, a), p * q);
    }
    return v;
  };
  return walk(0, 1.0);
}

TEST(PolymatrixTest, FullyConnected) {
  EXPECT_EQ(FullyConnectedEdges(3),
            (std::vector<Edge>{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_TRUE(FullyConnectedEdges(1).empty());
}

TEST(PolymatrixTest, OffenseDefenseMatchesNormalForm) {
  for (double beta : {1.0, 2.5}) {
    PolymatrixGame pg = OffenseDefensePolymatrix(beta);
    EXPECT_TRUE(pg.IsConstantSum());
    for (int e = 0; e < 3; ++e) EXPECT_EQ(*pg.Constant(e), 0.0);
    NormalFormGame flat = pg.ToNormalForm();
    NormalFormGame ref = OffenseDefenseGame(beta);
    EXPECT_EQ(flat.num_actions(), ref.num_actions());
    EXPECT_EQ(flat.utilities(), ref.utilities());
  }
}

TEST(PolymatrixTest, OffenseDefenseStableProfileIsZero) {
  PolymatrixGame pg = OffenseDefensePolymatrix(1.0);
  EXPECT_EQ(pg.Utility({0, 1, 1}), (std::vector<double>{0, 0, 0}));
  MixedProfile s = {PureMixed(2, 0), PureMixed(2, 1), PureMixed(2, 1)};
  EXPECT_EQ(pg.ExpectedUtility(s), (std::vector<double>{0, 0, 0}));
}

TEST(PolymatrixTest, PayoffOrientation) {
  PolymatrixGame pg({2, 3}, {{0, 1}});
  pg.SetPayoff(0, 1, 1, 2, 5.0);
  pg.SetPayoff(1, 0, 2, 1, -4.0);
  EXPECT_EQ(pg.Payoff(0, 1, 1, 2), 5.0);
  EXPECT_EQ(pg.Payoff(1, 0, 2, 1), -4.0);
  EXPECT_FALSE(pg.Constant(0).has_value());
  EXPECT_EQ(pg.Utility({1, 2}), (std::vector<double>{5.0, -4.0}));
  EXPECT_EQ(pg.Degree(0), 1);
  EXPECT_EQ(pg.EdgeIndex(1, 0), 0);
}

TEST(PolymatrixTest, RejectsBadStructure) {
  EXPECT_THROW(PolymatrixGame({2, 2}, {{1, 1}}), ValidationError);
  EXPECT_THROW(PolymatrixGame({2, 2}, {{0, 1}, {0, 1}}), ValidationError);
  EXPECT_THROW(PolymatrixGame({2, 2}, {{0, 2}}), ValidationError);
  PolymatrixGame pg({2, 2, 2}, {{0, 1}});
  EXPECT_THROW(pg.Payoff(0, 2, 0, 0), ValidationError);
  EXPECT_THROW(pg.SetPayoff(0, 1, 2, 0, 1.0), ValidationError);
}

TEST(PolymatrixTest, JsonRoundTrip) {
  PolymatrixGame pg = OffenseDefensePolymatrix(3.0);
  PolymatrixGame back = PolymatrixFromJson(PolymatrixToJson(pg));
  EXPECT_EQ(back.ToNormalForm().utilities(), pg.ToNormalForm().utilities());
  EXPECT_THROW(PolymatrixFromJson("{"), ValidationError);
}

TEST(SubgameChanceTest, NoThirdPartiesCopiesChance) {
  ExtensiveFormGame g = KuhnPokerGame(2);
  ChanceStrategy c = DefaultSubgameChance(g, 0, 1);
  for (int h = 0; h < g.num_nodes(); ++h) {
    if (g.type(h) == NodeType::kChance) {
      for (int a = 0; a < g.num_children(h); ++a) {
        EXPECT_EQ(c[h][a], g.chance_prob(h, a));
      }
    } else {
      EXPECT_TRUE(c[h].empty());
    }
  }
  EXPECT_EQ(SubgameChanceReach(g, 0, 1, c), g.chance_reach());
}

TEST(SubgameChanceTest, BadCardOutsiderBecomesUniform) {
  ExtensiveFormGame g = BadCardGame(1.0, false);
  ChanceStrategy c = DefaultSubgameChance(g, 0, 1);
  ASSERT_EQ(c[0].size(), 3u);
  for (double p : c[0]) EXPECT_DOUBLE_EQ(p, 1.0 / 3);
  int outsider_nodes = 0;
  for (int h = 0; h < g.num_nodes(); ++h) {
    if (g.type(h) == NodeType::kDecision && g.player(h) == 2) {
      EXPECT_EQ(c[h], (std::vector<double>{0.5, 0.5}));
      ++outsider_nodes;
    }
  }
  EXPECT_GT(outsider_nodes, 0);
  EXPECT_THROW(DefaultSubgameChance(g, 1, 1), ValidationError);
}

TEST(SubgameChanceTest, TinyHanabiSignalsBecomeUniform) {
  ExtensiveFormGame g = TinyHanabiGame();
  ChanceStrategy c = DefaultSubgameChance(g, 1, 2);
  EXPECT_EQ(c[0], (std::vector<double>{0.5, 0.5}));
  for (int h = 0; h < g.num_nodes(); ++h) {
    if (g.type(h) == NodeType::kDecision && g.player(h) == 0) {
      EXPECT_EQ(c[h], (std::vector<double>{0.5, 0.5}));
    }
  }
  double total = 0;
  for (double p : SubgameChanceReach(g, 1, 2, c)) total += p;
  EXPECT_NEAR(total, 4.0, 1e-12);  // two chance-like layers x four actions
}

TEST(PolyEfgTest, ZeroAndConstantValues) {
  PolyEfg pg(Tree("tiny_hanabi"));
  Rng rng(1);
  BehaviorProfile pi = RandomProfile(pg.game(), rng);
  auto [a, b] = pg.SubgameUtility(0, 1, pi[0], pi[1]);
  EXPECT_EQ(a, 0.0);
  EXPECT_EQ(b, 0.0);
  const int e = pg.EdgeIndex(1, 2);
  for (double& v : pg.values(e)) v = 0.7;
  pg.constant(e) = 1.4;
  auto [c, d] = pg.SubgameUtility(2, 1, pi[2], pi[1]);
  EXPECT_NEAR(c, 0.7, 1e-12);
  EXPECT_NEAR(d, 0.7, 1e-12);
}

TEST(PolyEfgTest, MatchesPathEnumeration) {
  for (const char* name : {"tiny_hanabi", "bad_card", "kuhn_poker"}) {
    PolyEfg pg(Tree(name));
    Rng rng(11);
    RandomizeValues(pg, rng);
    for (int trial = 0; trial < 5; ++trial) {
      BehaviorProfile pi = RandomProfile(pg.game(), rng);
      for (int e = 0; e < pg.num_edges(); ++e) {
        const Edge& ed = pg.edges()[e];
        auto [vi, vj] = pg.SubgameUtility(ed.i, ed.j, pi[ed.i], pi[ed.j]);
        EXPECT_NEAR(vi, OracleSubgameValue(pg, e, pi[ed.i], pi[ed.j]), 1e-12)
            << name;
        EXPECT_NEAR(vi + vj, pg.constant(e), 1e-10) << name;
        auto [wj, wi] = pg.SubgameUtility(ed.j, ed.i, pi[ed.j], pi[ed.i]);
        EXPECT_EQ(wi, vi);
        EXPECT_EQ(wj, vj);
      }
    }
  }
}

TEST(PolyEfgTest, GlobalUtilitySumsSubgames) {
  PolyEfg pg(Tree("bad_card"));
  Rng rng(5);
  RandomizeValues(pg, rng);
  BehaviorProfile pi = RandomProfile(pg.game(), rng);
  std::vector<double> expect(3, 0.0);
  for (const Edge& ed : pg.edges()) {
    auto [vi, vj] = pg.SubgameUtility(ed.i, ed.j, pi[ed.i], pi[ed.j]);
    expect[ed.i] += vi;
    expect[ed.j] += vj;
  }
  std::vector<double> got = pg.GlobalUtility(pi);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(got[i], expect[i], 1e-12);
}

TEST(PolyEfgTest, SingleEdgeGlobalEqualsSubgame) {
  PolyEfg pg(Tree("kuhn_poker"));
  Rng rng(8);
  RandomizeValues(pg, rng);
  BehaviorProfile pi = RandomProfile(pg.game(), rng);
  auto [a, b] = pg.SubgameUtility(0, 1, pi[0], pi[1]);
  std::vector<double> u = pg.GlobalUtility(pi);
  EXPECT_EQ(u[0], a);
  EXPECT_EQ(u[1], b);
}

TEST(PolyEfgTest, LinearInValues) {
  auto game = Tree("tiny_hanabi");
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    PolyEfg x(game), y(game), mix(game);
    RandomizeValues(x, rng);
    RandomizeValues(y, rng);
    const double alpha = rng.Uniform(-2, 2), beta = rng.Uniform(-2, 2);
    for (int e = 0; e < mix.num_edges(); ++e) {
      for (size_t z = 0; z < mix.values(e).size(); ++z) {
        mix.values(e)[z] = alpha * x.values(e)[z] + beta * y.values(e)[z];
      }
      mix.constant(e) = alpha * x.constant(e) + beta * y.constant(e);
    }
    BehaviorProfile pi = RandomProfile(*game, rng);
    auto ux = x.GlobalUtility(pi), uy = y.GlobalUtility(pi);
    auto um = mix.GlobalUtility(pi);
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(um[i], alpha * ux[i] + beta * uy[i], 1e-10);
    }
  }
}

TEST(PolyEfgTest, ChanceReweightingPreservesValues) {
  auto game = Tree("bad_card");
  Rng rng(99);
  auto random_chance = [&](int i, int j) {
    ChanceStrategy c = DefaultSubgameChance(*game, i, j);
    for (auto& dist : c) {
      double total = 0;
      for (double& p : dist) total += (p = 0.1 + rng.Uniform());
      for (double& p : dist) p /= total;
    }
    return c;
  };
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<ChanceStrategy> c1, c2;
    for (const Edge& ed : FullyConnectedEdges(3)) {
      c1.push_back(random_chance(ed.i, ed.j));
      c2.push_back(random_chance(ed.i, ed.j));
    }
    PolyEfg a(game, {}, c1), b(game, {}, c2);
    RandomizeValues(a, rng);
    for (int e = 0; e < a.num_edges(); ++e) {
      for (int z = 0; z < game->num_terminals(); ++z) {
        b.values(e)[z] =
            a.values(e)[z] * a.chance_reach(e)[z] / b.chance_reach(e)[z];
      }
      b.constant(e) = a.constant(e);
    }
    BehaviorProfile pi = RandomProfile(*game, rng);
    for (const Edge& ed : a.edges()) {
      EXPECT_NEAR(a.SubgameUtility(ed.i, ed.j, pi[ed.i], pi[ed.j]).first,
                  b.SubgameUtility(ed.i, ed.j, pi[ed.i], pi[ed.j]).first,
                  1e-9);
    }
  }
}

TEST(PolyEfgTest, InducedOneShotEqualsTerminalTable) {
  NormalFormGame nf = OffenseDefenseGame(1.0);
  auto game = std::make_shared<const ExtensiveFormGame>(OneShotGame(nf, "od"));
  PolyEfg pg(game);
  Rng rng(4);
  RandomizeValues(pg, rng);
  PolymatrixGame induced = pg.InducedNormalFormPolymatrix();
  for (int e = 0; e < pg.num_edges(); ++e) {
    const Edge& ed = pg.edges()[e];
    // Terminals follow pure profiles in mixed-radix order; the third
    // player is uniform chance in the subgame.
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        double expect = 0;
        for (int64_t p = 0; p < nf.num_profiles(); ++p) {
          if (nf.ActionOf(p, ed.i) != a || nf.ActionOf(p, ed.j) != b) continue;
          expect += 0.5 * pg.values(e)[p];
        }
        EXPECT_NEAR(induced.Payoff(ed.i, ed.j, a, b), expect, 1e-12);
        EXPECT_NEAR(induced.Payoff(ed.j, ed.i, b, a),
                    pg.constant(e) - expect, 1e-12);
      }
    }
    EXPECT_NEAR(*induced.Constant(e), pg.constant(e), 1e-10);
  }
}

TEST(PolyEfgTest, InducedMatchesPureStrategyEvaluation) {
  auto game = Tree("tiny_hanabi");
  PolyEfg pg(game);
  Rng rng(17);
  RandomizeValues(pg, rng);
  PolymatrixGame induced = pg.InducedNormalFormPolymatrix();
  EXPECT_TRUE(induced.IsConstantSum());
  for (const Edge& ed : pg.edges()) {
    for (int a = 0; a < induced.num_actions(ed.i); ++a) {
      for (int b = 0; b < induced.num_actions(ed.j); ++b) {
        auto si = PureToBehavior(*game, ed.i, DecodePureStrategy(*game, ed.i, a));
        auto sj = PureToBehavior(*game, ed.j, DecodePureStrategy(*game, ed.j, b));
        const int e = pg.EdgeIndex(ed.i, ed.j);
        EXPECT_NEAR(induced.Payoff(ed.i, ed.j, a, b),
                    OracleSubgameValue(pg, e, si, sj), 1e-12);
      }
    }
  }
}

TEST(PolyEfgTest, InducedGuard) {
  PolyEfg pg(Tree("leduc_poker"));
  EXPECT_THROW(pg.InducedNormalFormPolymatrix(), ValidationError);
}

TEST(PolyEfgTest, JsonRoundTrip) {
  auto game = Tree("bad_card");
  PolyEfg pg(game);
  Rng rng(2);
  RandomizeValues(pg, rng);
  PolyEfg back = PolyEfgFromJson(PolyEfgToJson(pg), game);
  for (int e = 0; e < pg.num_edges(); ++e) {
    EXPECT_EQ(back.values(e), pg.values(e));
    EXPECT_EQ(back.constant(e), pg.constant(e));
  }
  EXPECT_THROW(PolyEfgFromJson(PolyEfgToJson(pg), Tree("tiny_hanabi")),
               ValidationError);
}

}  // namespace
}  // namespace polyvul
