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
#include <memory>

#include "best_response.h"
#include "builtin_games.h"
#include "errors.h"
#include "exact_decomp.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "rng.h"
#include "test_util.h"

namespace polyvul {
namespace {

using testing_util::Perturb;
using testing_util::RandomConstantSum2p;
using testing_util::RandomCspGame;
using testing_util::RandomMixed;
using testing_util::RandomProfile;

EmpiricalDistribution RandomDistribution(int64_t size, Rng& rng) {
  EmpiricalDistribution mu(size);
  double sum = 0;
  for (double& p : mu) sum += (p = rng.Uniform());
  for (double& p : mu) p /= sum;
  return mu;
}

MixedOpponentSets PureSets(const NormalFormGame& g) {
  MixedOpponentSets sets(g.num_players());
  for (int j = 0; j < g.num_players(); ++j) {
    for (int a = 0; a < g.num_actions(j); ++a) {
      sets[j].push_back(PureMixed(g.num_actions(j), a));
    }
  }
  return sets;
}

// Action of each player along the path to terminal z of a one-shot tree.
std::vector<int> TerminalActions(const ExtensiveFormGame& g, int z) {
  std::vector<int> actions(g.num_players());
  for (int h = g.terminal_node(z); g.parent(h) >= 0; h = g.parent(h)) {
    actions[g.player(g.parent(h))] = g.action_from_parent(h);
  }
  return actions;
}

TEST(MarginalTest, ProductDistributionGivesFactors) {
  const NormalFormGame g = OffenseDefenseGame(1);
  Rng rng(1);
  MixedProfile s;
  for (int i = 0; i < 3; ++i) s.push_back(RandomMixed(2, rng));
  EmpiricalDistribution mu(g.num_profiles());
  for (int64_t p = 0; p < g.num_profiles(); ++p) {
    mu[p] = 1;
    for (int i = 0; i < 3; ++i) mu[p] *= s[i][g.ActionOf(p, i)];
  }
  const MixedProfile m = MarginalProfile(g, mu);
  for (int i = 0; i < 3; ++i) {
    for (int a = 0; a < 2; ++a) EXPECT_NEAR(m[i][a], s[i][a], 1e-12);
  }
}

TEST(MarginalTest, FixtureMarginalsAreUniform) {
  const MixedProfile m = MarginalProfile(AppendixAGame(), {0.5, 0, 0, 0.5});
  for (const auto& s : m) {
    EXPECT_NEAR(s[0], 0.5, 1e-12);
    EXPECT_NEAR(s[1], 0.5, 1e-12);
  }
}

TEST(MarginalTest, MatchesDirectSummation) {
  Rng rng(2);
  const NormalFormGame g({3, 2, 4}, std::vector<double>(24 * 3, 0.0));
  for (int t = 0; t < 20; ++t) {
    const auto mu = RandomDistribution(g.num_profiles(), rng);
    for (int i = 0; i < 3; ++i) {
      std::vector<double> want(g.num_actions(i), 0.0);
      for (int64_t p = 0; p < g.num_profiles(); ++p) {
        want[g.DecodeProfile(p)[i]] += mu[p];
      }
      const auto got = MarginalStrategy(g, mu, i);
      for (int a = 0; a < g.num_actions(i); ++a) {
        EXPECT_NEAR(got[a], want[a], 1e-12);
      }
    }
  }
}

TEST(CceGapTest, Fixture) {
  const NormalFormGame g = AppendixAGame();
  const EmpiricalDistribution mu = {0.5, 0, 0, 0.5};
  EXPECT_LE(CceGap(g, mu), 1e-9);
  const MixedProfile m = MarginalProfile(g, mu);
  EXPECT_NEAR(g.ExpectedUtility(m)[0], -0.25, 1e-9);
  const MixedProfile dev = {PureMixed(2, 0), m[1]};
  EXPECT_NEAR(g.ExpectedUtility(dev)[0] - g.ExpectedUtility(m)[0], 0.25, 1e-9);
}

TEST(CceGapTest, PointMassOffEquilibrium) {
  const NormalFormGame g = CoordinationGame();
  EXPECT_NEAR(CceGap(g, {0, 1, 0, 0}), 1.0, 1e-12);
}

TEST(CceGapTest, MatchesExhaustiveDeviation) {
  Rng rng(3);
  for (int t = 0; t < 30; ++t) {
    std::vector<double> u;
    for (int k = 0; k < 12 * 3; ++k) u.push_back(rng.Uniform(-1, 1));
    const NormalFormGame g({2, 3, 2}, u);
    const auto mu = RandomDistribution(g.num_profiles(), rng);
    const double base_sum = 0;
    double want = -1e300;
    for (int i = 0; i < 3; ++i) {
      double base = base_sum;
      for (int64_t p = 0; p < g.num_profiles(); ++p) {
        base += mu[p] * g.utility(p, i);
      }
      for (int d = 0; d < g.num_actions(i); ++d) {
        double v = 0;
        for (int64_t p = 0; p < g.num_profiles(); ++p) {
          auto a = g.DecodeProfile(p);
          a[i] = d;
          v += mu[p] * g.utility(g.ProfileIndex(a), i);
        }
        want = std::max(want, v - base);
      }
    }
    EXPECT_NEAR(CceGap(g, mu), want, 1e-12);
  }
}

TEST(VulnerabilityFiniteTest, OwnOpponentsGiveZero) {
  const ExtensiveFormGame g = KuhnPokerGame(3);
  Rng rng(4);
  const BehaviorProfile pi = RandomProfile(g, rng);
  OpponentSets sets(3);
  for (int j = 0; j < 3; ++j) sets[j] = {pi[j]};
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(VulnerabilityFinite(g, i, pi, sets), 0, 1e-12);
  }
}

TEST(VulnerabilityFiniteTest, CoordinationMiscoordination) {
  const NormalFormGame g = CoordinationGame();
  const MixedProfile s = {PureMixed(2, 0), PureMixed(2, 0)};
  EXPECT_NEAR(VulnerabilityFinite(g, 0, s, PureSets(g)), 1.0, 1e-12);
  const ExtensiveFormGame tree = OneShotGame(g, "coordination");
  const BehaviorProfile pi = {{1, 0}, {1, 0}};
  const OpponentSets sets = {{}, {{1, 0}, {0, 1}}};
  EXPECT_NEAR(VulnerabilityFinite(tree, 0, pi, sets), 1.0, 1e-12);
}

TEST(VulnerabilityFiniteTest, TreeAndMatrixAgree) {
  Rng rng(5);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> u;
    for (int k = 0; k < 8 * 3; ++k) u.push_back(rng.Uniform(-1, 1));
    const NormalFormGame g({2, 2, 2}, u);
    const ExtensiveFormGame tree = OneShotGame(g, "random");
    MixedProfile s;
    MixedOpponentSets msets(3);
    OpponentSets bsets(3);
    for (int i = 0; i < 3; ++i) s.push_back(RandomMixed(2, rng));
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) {
        msets[j].push_back(RandomMixed(2, rng));
        bsets[j].push_back(msets[j].back());
      }
    }
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(VulnerabilityFinite(g, i, s, msets),
                  VulnerabilityFinite(tree, i, s, bsets), 1e-12);
    }
  }
}

TEST(VulnerabilityFiniteTest, MonotoneInOpponentSet) {
  const ExtensiveFormGame g = KuhnPokerGame(3);
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    const BehaviorProfile pi = RandomProfile(g, rng);
    OpponentSets sets(3);
    for (int j = 0; j < 3; ++j) sets[j] = {pi[j]};
    double last = VulnerabilityFinite(g, 0, pi, sets);
    EXPECT_GE(last, -1e-12);
    for (int k = 0; k < 4; ++k) {
      const BehaviorProfile extra = RandomProfile(g, rng);
      sets[1 + k % 2].push_back(extra[1 + k % 2]);
      const double v = VulnerabilityFinite(g, 0, pi, sets);
      EXPECT_GE(v, last - 1e-12);
      last = v;
    }
  }
}

TEST(VulnerabilityFiniteTest, RejectsEmptyOpponentSet) {
  const NormalFormGame g = CoordinationGame();
  const MixedProfile s = {PureMixed(2, 0), PureMixed(2, 0)};
  EXPECT_THROW(VulnerabilityFinite(g, 0, s, {{}, {}}), ValidationError);
}

TEST(VulnerabilityPolymatrixTest, OffenseDefense) {
  const PolymatrixGame g = OffenseDefensePolymatrix(1.0);
  const MixedProfile s = {PureMixed(2, 0), PureMixed(2, 1), PureMixed(2, 1)};
  EXPECT_NEAR(VulnerabilityPolymatrix(g, 0, s), 2.0, 1e-9);
  EXPECT_NEAR(NashGap(g.ToNormalForm(), s), 0.0, 1e-9);
}

TEST(VulnerabilityPolymatrixTest, MatchesGridOracle) {
  // The worst case of a polymatrix game is separable across edges, so the
  // minimum sits at a pure profile that every grid contains.
  Rng rng(7);
  for (int t = 0; t < 50; ++t) {
    const PolymatrixGame pg = RandomCspGame(rng, 3, 2 + t % 2);
    const NormalFormGame g = pg.ToNormalForm();
    MixedProfile s;
    for (int i = 0; i < 3; ++i) s.push_back(RandomMixed(pg.num_actions(i), rng));
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(VulnerabilityPolymatrix(pg, i, s),
                  VulnerabilityGridOracle(g, i, s, 0.25), 1e-9);
    }
  }
}

TEST(VulnerabilityPolymatrixTest, PolyEfgMatchesPolymatrix) {
  Rng rng(8);
  for (int t = 0; t < 20; ++t) {
    const PolymatrixGame pg = RandomCspGame(rng, 3, 2);
    auto tree = std::make_shared<const ExtensiveFormGame>(
        OneShotGame(pg.ToNormalForm(), "random"));
    PolyEfg pe(tree);
    for (int e = 0; e < pe.num_edges(); ++e) {
      const Edge ed = pe.edges()[e];
      pe.constant(e) = *pg.Constant(pg.EdgeIndex(ed.i, ed.j));
      for (int z = 0; z < tree->num_terminals(); ++z) {
        const auto a = TerminalActions(*tree, z);
        pe.values(e)[z] = pg.Payoff(ed.i, ed.j, a[ed.i], a[ed.j]);
      }
    }
    MixedProfile s;
    for (int i = 0; i < 3; ++i) s.push_back(RandomMixed(2, rng));
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(VulnerabilityPolymatrix(pe, i, s),
                  VulnerabilityPolymatrix(pg, i, s), 1e-12);
    }
  }
}

TEST(VulnerabilityPolymatrixTest, PolyEfgMatchesPureEnumeration) {
  const auto g = std::make_shared<const ExtensiveFormGame>(TinyHanabiGame());
  Rng rng(9);
  PolyEfg pe(g);
  for (int e = 0; e < pe.num_edges(); ++e) {
    pe.constant(e) = rng.Uniform(-1, 1);
    for (double& v : pe.values(e)) v = rng.Uniform(-2, 2);
  }
  std::vector<std::vector<BehaviorStrategy>> pures(3);
  for (int j = 0; j < 3; ++j) {
    for (int64_t k = 0; k < NumPureStrategies(*g, j); ++k) {
      pures[j].push_back(PureToBehavior(*g, j, DecodePureStrategy(*g, j, k)));
    }
  }
  for (int t = 0; t < 20; ++t) {
    const BehaviorProfile pi = RandomProfile(*g, rng);
    for (int i = 0; i < 3; ++i) {
      double want = 0;
      for (int j = 0; j < 3; ++j) {
        if (j == i) continue;
        const double v = pe.SubgameUtility(i, j, pi[i], pi[j]).first;
        double least = 1e300;
        for (const auto& b : pures[j]) {
          least = std::min(least, pe.SubgameUtility(i, j, pi[i], b).first);
        }
        want += v - least;
      }
      EXPECT_NEAR(VulnerabilityPolymatrix(pe, i, pi), want, 1e-10);
    }
  }
}

TEST(VulnerabilityPolymatrixTest, RejectsNonConstantSum) {
  PolymatrixGame g({2, 2}, FullyConnectedEdges(2));
  g.SetPayoff(0, 1, 0, 0, 1.0);
  EXPECT_THROW(VulnerabilityPolymatrix(g, 0, {{1, 0}, {1, 0}}),
               ValidationError);
}

TEST(GridOracleTest, OffenseDefenseIsExact) {
  const NormalFormGame g = OffenseDefenseGame(1);
  const MixedProfile s = {PureMixed(2, 0), PureMixed(2, 1), PureMixed(2, 1)};
  EXPECT_NEAR(VulnerabilityGridOracle(g, 0, s, 0.25), 2.0, 1e-9);
}

TEST(GridOracleTest, Coordination) {
  const NormalFormGame g = CoordinationGame();
  const MixedProfile s = {PureMixed(2, 0), PureMixed(2, 0)};
  EXPECT_NEAR(VulnerabilityGridOracle(g, 0, s, 0.1), 1.0, 1e-9);
}

TEST(GridOracleTest, CoarsestGridIsPureEnumeration) {
  Rng rng(10);
  for (int t = 0; t < 20; ++t) {
    std::vector<double> u;
    for (int k = 0; k < 18 * 3; ++k) u.push_back(rng.Uniform(-1, 1));
    const NormalFormGame g({2, 3, 3}, u);
    MixedProfile s;
    for (int i = 0; i < 3; ++i) s.push_back(RandomMixed(g.num_actions(i), rng));
    const double coarse = VulnerabilityGridOracle(g, 0, s, 1.0);
    EXPECT_NEAR(coarse, VulnerabilityFinite(g, 0, s, PureSets(g)), 1e-12);
    EXPECT_GE(VulnerabilityGridOracle(g, 0, s, 0.25), coarse - 1e-12);
  }
}

TEST(GridOracleTest, Guards) {
  const NormalFormGame big({5, 2}, std::vector<double>(20, 0.0));
  const MixedProfile s = {UniformMixed(5), UniformMixed(2)};
  EXPECT_THROW(VulnerabilityGridOracle(big, 1, s, 0.5), ValidationError);
  EXPECT_NO_THROW(VulnerabilityGridOracle(big, 0, s, 0.5));
  EXPECT_THROW(VulnerabilityGridOracle(big, 0, s, 0.0), ValidationError);
}

TEST(BoundTest, Values) {
  EXPECT_EQ(Bound(2, 3, 0, 0).player_bound, 0.0);
  EXPECT_NEAR(Bound(2, 3, 0.004, 0.009).player_bound, 0.026, 1e-15);
  EXPECT_NEAR(Bound(1, 3, 0.004, 0.009).edge_bound, 0.022, 1e-15);
  EXPECT_THROW(Bound(2, 3, -1, 0), ValidationError);
}

TEST(TotalVariationTest, MaxOverPairs) {
  const ExtensiveFormGame g = KuhnPokerGame(2);
  Rng rng(12);
  std::vector<BehaviorProfile> profiles;
  for (int k = 0; k < 4; ++k) profiles.push_back(RandomProfile(g, rng));
  double want = 0;
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      want = std::max(want, TotalVariation(g, profiles[a], profiles[b]));
    }
  }
  EXPECT_NEAR(MaxPairwiseTotalVariation(g, profiles), want, 1e-12);
  EXPECT_EQ(MaxPairwiseTotalVariation(g, {profiles[0], profiles[0]}), 0.0);
}

TEST(ReportTest, JsonAndCsv) {
  VulnerabilityReport r;
  r.opponent_model = "finite-set";
  r.vulnerability = {0.5, 0.25};
  r.gamma = 0.1;
  r.delta = 0.2;
  r.bound = 0.6;
  ASSERT_TRUE(r.Ratio().has_value());
  EXPECT_NEAR(*r.Ratio(), 1.2, 1e-12);
  const auto doc = nlohmann::json::parse(r.ToJson());
  EXPECT_EQ(doc["opponent_model"], "finite-set");
  EXPECT_EQ(doc["vulnerability"].size(), 2u);
  const std::string csv = r.ToCsvRows(7);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 2);
  EXPECT_EQ(csv.rfind("7,0,", 0), 0u);
  r.bound.reset();
  EXPECT_FALSE(r.Ratio().has_value());
  EXPECT_TRUE(nlohmann::json::parse(r.ToJson())["bound"].is_null());
}

// Property suites.

TEST(PropertyTest, CceMarginalsOfCspGamesAreNash) {
  Rng rng(100);
  for (int t = 0; t < 200; ++t) {
    const NormalFormGame g = RandomCspGame(rng, 3, 2).ToNormalForm();
    const auto mu = ComputeCce(g);
    const double eps = std::max(0.0, CceGap(g, mu));
    EXPECT_LE(NashGap(g, MarginalProfile(g, mu)), 3 * eps + 1e-6);
  }
}

TEST(PropertyTest, PerturbedCspMarginalsAreApproximatelyNash) {
  Rng rng(101);
  for (int t = 0; t < 100; ++t) {
    const NormalFormGame g =
        Perturb(RandomCspGame(rng, 3, 2).ToNormalForm(), 0.1, rng);
    const double delta = MinDeltaNormalForm(g).delta;
    const auto mu = ComputeCce(g);
    EXPECT_LE(NashGap(g, MarginalProfile(g, mu)), 2 * 4 * delta + 1e-6);
  }
}

TEST(PropertyTest, SubgameStableVulnerabilityBound) {
  Rng rng(102);
  for (int t = 0; t < 100; ++t) {
    const PolymatrixGame pg = RandomCspGame(rng, 3, 2);
    const double gamma = ComputeGamma(pg).gamma;
    const NormalFormGame g = pg.ToNormalForm();
    const MixedProfile s = MarginalProfile(g, ComputeCce(g));
    for (int i = 0; i < 3; ++i) {
      EXPECT_LE(VulnerabilityPolymatrix(pg, i, s),
                pg.Degree(i) * gamma + 1e-6);
    }
  }
}

TEST(PropertyTest, TwoPlayerConstantSumVulnerabilityAtMostNashGap) {
  Rng rng(103);
  for (int t = 0; t < 200; ++t) {
    const NormalFormGame g = RandomConstantSum2p(rng, 2 + t % 3, 3);
    const MixedProfile s = {RandomMixed(g.num_actions(0), rng),
                            RandomMixed(g.num_actions(1), rng)};
    const double eps = NashGap(g, s);
    for (int i = 0; i < 2; ++i) {
      EXPECT_LE(VulnerabilityFinite(g, i, s, PureSets(g)), eps + 1e-9);
    }
  }
}

}  // namespace
}  // namespace polyvul
