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
#include "pipeline.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "analysis.h"
#include "errors.h"
#include "gtest/gtest.h"
#include "json.hpp"
#include "polymatrix.h"
#include "sg_decompose.h"

namespace polyvul {
namespace {

namespace fs = std::filesystem;

std::string FreshDir(const std::string& name) {
  const fs::path p = fs::path(::testing::TempDir()) / ("polyvul_" + name);
  fs::remove_all(p);
  return p.string();
}

ExperimentConfig SmallKuhn(const std::string& dir) {
  ExperimentConfig c;
  c.game = "kuhn_poker";
  c.params.players = 3;
  c.algorithm = "cfr+";
  c.runs = 2;
  c.strategies_per_run = 2;
  c.iterations = 20;
  c.sgd.epochs = 3;
  c.sgd.batch_size = 3;
  c.out_dir = dir;
  c.seed = 5;
  return c;
}

std::vector<std::vector<std::string>> ReadCsv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(ReadFile(path));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(cells);
  }
  return rows;
}

TEST(ConfigTest, RoundTripAndDefaults) {
  ExperimentConfig c = SmallKuhn("x");
  c.sgd.lambda = 0.25;
  const ExperimentConfig d = ConfigFromJson(ConfigToJson(c));
  EXPECT_EQ(ConfigToJson(d), ConfigToJson(c));
  const ExperimentConfig e = ConfigFromJson(R"({"game": "tiny_hanabi"})");
  EXPECT_EQ(e.game, "tiny_hanabi");
  EXPECT_EQ(e.sgd.batch_size, 30);
  EXPECT_EQ(e.sgd.epochs, 200);
}

TEST(ConfigTest, RejectsBadInput) {
  EXPECT_THROW(ConfigFromJson("{"), ValidationError);
  EXPECT_THROW(ConfigFromJson(R"({"gmae": "x"})"), ValidationError);
  EXPECT_THROW(ConfigFromJson(R"({"runs": "three"})"), ValidationError);
  EXPECT_THROW(ConfigFromJson(R"({"sgd": {"eta": 1}})"), ValidationError);
  ExperimentConfig c;
  c.runs = 0;
  EXPECT_THROW(c.Validate(), ValidationError);
  c = ExperimentConfig();
  c.game = "chess";
  EXPECT_THROW(Experiment{c}, ValidationError);
  c = ExperimentConfig();
  c.algorithm = "fictitious";
  EXPECT_THROW(c.Validate(), ValidationError);
}

TEST(SeedTest, DistinctAcrossGrid) {
  std::set<uint64_t> seen;
  for (int r = 0; r < 30; ++r) {
    for (int k = 0; k < 30; ++k) seen.insert(RunSeed(7, r, k));
  }
  EXPECT_EQ(seen.size(), 900u);
  EXPECT_EQ(RunSeed(7, 1, 2), RunSeed(7, 1, 2));
  EXPECT_NE(RunSeed(7, 1, 2), RunSeed(8, 1, 2));
}

TEST(ProfileArtifactTest, RoundTripAndValidation) {
  const ExtensiveFormGame g = KuhnPokerGame(2);
  ProfileArtifact a;
  a.game = "kuhn_poker";
  a.algorithm = "cfr";
  a.seed = 123456789012345ull;
  a.run = 1;
  a.index = 2;
  a.iterations = 10;
  a.nash_gap = 0.125;
  a.profile = UniformProfile(g);
  const ProfileArtifact b = ProfileFromJson(ProfileToJson(a), g);
  EXPECT_EQ(b.seed, a.seed);
  EXPECT_EQ(b.profile, a.profile);
  EXPECT_EQ(b.nash_gap, a.nash_gap);
  a.profile[0][0] = 2;
  EXPECT_THROW(ProfileFromJson(ProfileToJson(a), g), ValidationError);
  EXPECT_THROW(ProfileFromJson(R"({"type": "other"})", g), ValidationError);
}

TEST(TrainTest, SeedIsolationOnKuhn) {
  ExperimentConfig c;
  c.game = "kuhn_poker";
  c.strategies_per_run = 2;
  c.iterations = 10;
  c.out_dir = FreshDir("kuhn2");
  const auto paths = Experiment(c).Train();
  ASSERT_EQ(paths.size(), 2u);
  EXPECT_NE(ReadFile(paths[0]), ReadFile(paths[1]));
  const auto doc = nlohmann::json::parse(ReadFile(paths[0]));
  EXPECT_GE(doc["nash_gap"].get<double>(), 0);
}

TEST(PipelineTest, ReproducibleAndParallelSafe) {
  ExperimentConfig a = SmallKuhn(FreshDir("repro_a"));
  ExperimentConfig b = SmallKuhn(FreshDir("repro_b"));
  b.jobs = 3;
  for (const auto& c : {a, b}) {
    const Experiment e(c);
    e.Train();
    e.Decompose("sgd");
    e.Report();
  }
  EXPECT_EQ(ReadFile(a.out_dir + "/report.csv"),
            ReadFile(b.out_dir + "/report.csv"));
  EXPECT_EQ(ReadFile(a.out_dir + "/runs/1/1.json"),
            ReadFile(b.out_dir + "/runs/1/1.json"));
}

TEST(PipelineTest, ReportIsRecomputableFromArtifacts) {
  const ExperimentConfig c = SmallKuhn(FreshDir("recompute"));
  const Experiment e(c);
  e.Train();
  e.Decompose("sgd");
  const auto vul_paths = e.Vulnerability();
  ASSERT_EQ(vul_paths.size(), 2u);
  e.Report();
  const auto rows = ReadCsv(c.out_dir + "/report.csv");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"run", "delta", "gamma",
                                                "bound", "vulnerability",
                                                "ratio", "tv_max"}));
  auto game = std::make_shared<const ExtensiveFormGame>(e.tree());
  for (int run = 0; run < 2; ++run) {
    const auto& row = rows[run + 1];
    const auto profiles = e.LoadRun(run);
    const Neighborhood nb(*game, profiles);
    const PolyEfg pg = PolyEfgFromJson(
        ReadFile(c.out_dir + "/decompositions/" + std::to_string(run) +
                 ".json"),
        game);
    const double delta = NeighborhoodDelta(pg, nb);
    const double gamma = SubgameStability(pg, profiles);
    EXPECT_NEAR(std::stod(row[1]), delta, 1e-12);
    EXPECT_NEAR(std::stod(row[2]), gamma, 1e-12);
    EXPECT_NEAR(std::stod(row[3]), 2 * gamma + 2 * delta, 1e-12);
    OpponentSets sets(3);
    for (const auto& pi : profiles) {
      for (int i = 0; i < 3; ++i) sets[i].push_back(pi[i]);
    }
    double vul = 0;
    for (const auto& pi : profiles) {
      for (int i = 0; i < 3; ++i) {
        vul = std::max(vul, VulnerabilityFinite(*game, i, pi, sets));
      }
    }
    EXPECT_NEAR(std::stod(row[4]), vul, 1e-12);
    if (vul > 0) EXPECT_NEAR(std::stod(row[5]), (2 * gamma + 2 * delta) / vul, 1e-9);
    EXPECT_NEAR(std::stod(row[6]), MaxPairwiseTotalVariation(*game, profiles),
                1e-12);
    const auto vdoc = nlohmann::json::parse(ReadFile(vul_paths[run]));
    EXPECT_EQ(vdoc["opponent_model"], "finite-set");
    EXPECT_NEAR(vdoc["bound"].get<double>(), 2 * gamma + 2 * delta, 1e-12);
  }
  const auto summary =
      nlohmann::json::parse(ReadFile(c.out_dir + "/report.json"));
  EXPECT_EQ(summary["columns"]["delta"]["count"], 2);
  EXPECT_TRUE(summary["columns"]["tv_max"].contains("stderr"));
}

TEST(PipelineTest, MissingArtifactsAreReported) {
  const ExperimentConfig c = SmallKuhn(FreshDir("missing"));
  const Experiment e(c);
  EXPECT_THROW(e.Report(), RuntimeError);
  EXPECT_THROW(e.Decompose("sgd"), RuntimeError);
  EXPECT_THROW(e.Vulnerability(), RuntimeError);
  EXPECT_THROW(e.Decompose("magic"), ValidationError);
  EXPECT_THROW(e.Decompose("lp-efg"), ValidationError);
}

TEST(PipelineTest, OffenseDefenseGamma) {
  ExperimentConfig c;
  c.game = "offense_defense";
  c.out_dir = FreshDir("od");
  const Experiment e(c);
  const auto doc = nlohmann::json::parse(ReadFile(e.Gamma()));
  EXPECT_GE(doc["gamma"].get<double>(), 1 - 1e-6);
  e.Decompose("lp-nf");
  const auto dec = nlohmann::json::parse(
      ReadFile(c.out_dir + "/decompositions/lp-nf.json"));
  EXPECT_LE(dec["metadata"]["delta"].get<double>(), 1e-7);
}

TEST(PipelineTest, GammaFromLpDecomposition) {
  ExperimentConfig c;
  c.game = "coordination";
  c.out_dir = FreshDir("coord");
  const Experiment e(c);
  EXPECT_THROW(e.Gamma(), RuntimeError);
  e.Decompose("lp-nf");
  const auto doc = nlohmann::json::parse(ReadFile(e.Gamma()));
  EXPECT_GE(doc["gamma"].get<double>(), 0);
}

TEST(PipelineTest, BadCardLpEfg) {
  ExperimentConfig c;
  c.game = "bad_card";
  c.out_dir = FreshDir("badcard");
  const auto paths = Experiment(c).Decompose("lp-efg");
  const auto doc = nlohmann::json::parse(ReadFile(paths[0]));
  const double delta = doc["metadata"]["delta"].get<double>();
  EXPECT_GT(delta, 1e-6);
  EXPECT_LE(delta, 1.0);
  EXPECT_EQ(doc["type"], "poly_efg");
}

}  // namespace
}  // namespace polyvul
