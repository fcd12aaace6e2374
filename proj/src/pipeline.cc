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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "analysis.h"
#include "best_response.h"
#include "errors.h"
#include "exact_decomp.h"
#include "json.hpp"
#include "polymatrix.h"
#include "rng.h"

namespace polyvul {

namespace fs = std::filesystem;
using nlohmann::json;

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeError("missing artifact: " + path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::error_code ec;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent, ec);
  if (ec) throw RuntimeError("cannot create " + parent.string());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw RuntimeError("cannot write " + path);
}

void ExperimentConfig::Validate() const {
  const auto& names = BuiltinNames();
  POLYVUL_CHECK_ARG(std::find(names.begin(), names.end(), game) != names.end(),
                    "unknown game: " + game);
  ParseAlgorithm(algorithm);
  POLYVUL_CHECK_ARG(runs >= 1, "runs must be >= 1");
  POLYVUL_CHECK_ARG(strategies_per_run >= 1, "strategies per run must be >= 1");
  POLYVUL_CHECK_ARG(iterations >= 1, "iterations must be >= 1");
  POLYVUL_CHECK_ARG(jobs >= 1, "jobs must be >= 1");
  POLYVUL_CHECK_ARG(!out_dir.empty(), "output directory is empty");
  sgd.Validate();
}

namespace {

template <typename T>
void Take(const json& doc, const char* key, T& out) {
  if (!doc.contains(key)) return;
  try {
    out = doc.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("config key has wrong type: ") + key);
  }
}

void RejectUnknown(const json& doc, std::initializer_list<const char*> keys,
                   const std::string& where) {
  POLYVUL_CHECK_ARG(doc.is_object(), where + " must be a JSON object");
  for (const auto& item : doc.items()) {
    bool known = false;
    for (const char* k : keys) known = known || item.key() == k;
    POLYVUL_CHECK_ARG(known, "unknown key in " + where + ": " + item.key());
  }
}

json ParseJson(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ValidationError("malformed " + what + ": " + e.what());
  }
}

json ParamsJson(const GameParams& p) {
  return {{"beta", p.beta}, {"players", p.players}};
}

std::string Format(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string Format(const std::optional<double>& x) {
  return x ? Format(*x) : std::string();
}

json Stats(const std::vector<double>& xs) {
  if (xs.empty()) return {{"count", 0}};
  double lo = xs[0], hi = xs[0], sum = 0;
  for (double x : xs) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
  }
  const double mean = sum / xs.size();
  double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  const double stderr_ =
      xs.size() > 1 ? std::sqrt(ss / (xs.size() - 1) / xs.size()) : 0.0;
  return {{"count", xs.size()}, {"min", lo},       {"mean", mean},
          {"max", hi},          {"stderr", stderr_}};
}

}  // namespace

ExperimentConfig ConfigFromJson(const std::string& text) {
  const json doc = ParseJson(text, "config");
  RejectUnknown(doc,
                {"game", "params", "algorithm", "runs", "strategies_per_run",
                 "iterations", "sgd", "out_dir", "seed", "jobs"},
                "config");
  ExperimentConfig c;
  Take(doc, "game", c.game);
  Take(doc, "algorithm", c.algorithm);
  Take(doc, "runs", c.runs);
  Take(doc, "strategies_per_run", c.strategies_per_run);
  Take(doc, "iterations", c.iterations);
  Take(doc, "out_dir", c.out_dir);
  Take(doc, "seed", c.seed);
  Take(doc, "jobs", c.jobs);
  if (doc.contains("params")) {
    const json& p = doc["params"];
    RejectUnknown(p, {"beta", "players"}, "params");
    Take(p, "beta", c.params.beta);
    Take(p, "players", c.params.players);
  }
  if (doc.contains("sgd")) {
    const json& s = doc["sgd"];
    RejectUnknown(s,
                  {"lambda", "batch_size", "epochs", "lr_start", "lr_floor",
                   "lr_halve_every", "seed"},
                  "sgd");
    Take(s, "lambda", c.sgd.lambda);
    Take(s, "batch_size", c.sgd.batch_size);
    Take(s, "epochs", c.sgd.epochs);
    Take(s, "lr_start", c.sgd.lr_start);
    Take(s, "lr_floor", c.sgd.lr_floor);
    Take(s, "lr_halve_every", c.sgd.lr_halve_every);
    Take(s, "seed", c.sgd.seed);
  }
  return c;
}

std::string ConfigToJson(const ExperimentConfig& c) {
  json doc = {{"game", c.game},
              {"params", ParamsJson(c.params)},
              {"algorithm", c.algorithm},
              {"runs", c.runs},
              {"strategies_per_run", c.strategies_per_run},
              {"iterations", c.iterations},
              {"out_dir", c.out_dir},
              {"seed", c.seed},
              {"jobs", c.jobs}};
  doc["sgd"] = {{"lambda", c.sgd.lambda},
                {"batch_size", c.sgd.batch_size},
                {"epochs", c.sgd.epochs},
                {"lr_start", c.sgd.lr_start},
                {"lr_floor", c.sgd.lr_floor},
                {"lr_halve_every", c.sgd.lr_halve_every},
                {"seed", c.sgd.seed}};
  return doc.dump(2);
}

uint64_t RunSeed(uint64_t master, int run, int k) {
  return Hash64({master, static_cast<uint64_t>(run), static_cast<uint64_t>(k)});
}

std::string ProfileToJson(const ProfileArtifact& a) {
  json doc = {{"type", "behavior_profile"},
              {"game", a.game},
              {"algorithm", a.algorithm},
              {"seed", a.seed},
              {"run", a.run},
              {"index", a.index},
              {"iterations", a.iterations},
              {"nash_gap", a.nash_gap},
              {"strategies", a.profile}};
  return doc.dump(1);
}

ProfileArtifact ProfileFromJson(const std::string& text,
                                const ExtensiveFormGame& game) {
  const json doc = ParseJson(text, "profile");
  ProfileArtifact a;
  try {
    POLYVUL_CHECK_ARG(doc.at("type") == "behavior_profile",
                      "not a behavior profile artifact");
    a.game = doc.at("game").get<std::string>();
    a.algorithm = doc.at("algorithm").get<std::string>();
    a.seed = doc.at("seed").get<uint64_t>();
    a.run = doc.at("run").get<int>();
    a.index = doc.at("index").get<int>();
    a.iterations = doc.at("iterations").get<int>();
    a.nash_gap = doc.at("nash_gap").get<double>();
    a.profile = doc.at("strategies").get<BehaviorProfile>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed profile: ") + e.what());
  }
  CheckProfile(game, a.profile);
  return a;
}

Experiment::Experiment(ExperimentConfig config) : config_(std::move(config)) {
  config_.Validate();
  AnyGame g = BuildBuiltin(config_.game, config_.params);
  if (auto* nf = std::get_if<NormalFormGame>(&g)) {
    normal_form_ = *nf;
    tree_ = std::make_shared<const ExtensiveFormGame>(
        OneShotGame(*nf, config_.game));
  } else {
    tree_ = std::make_shared<const ExtensiveFormGame>(
        std::get<ExtensiveFormGame>(std::move(g)));
  }
}

std::string Experiment::RunDir(int run) const {
  return (fs::path(config_.out_dir) / "runs" / std::to_string(run)).string();
}

std::string Experiment::DecompositionPath(const std::string& name) const {
  return (fs::path(config_.out_dir) / "decompositions" / (name + ".json"))
      .string();
}

std::vector<std::string> Experiment::Train() const {
  const CfrAlgorithm algorithm = ParseAlgorithm(config_.algorithm);
  const int total = config_.runs * config_.strategies_per_run;
  std::vector<std::string> paths(total);
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (int t; (t = next++) < total;) {
      try {
        const int run = t / config_.strategies_per_run;
        const int k = t % config_.strategies_per_run;
        ProfileArtifact a;
        a.game = config_.game;
        a.algorithm = AlgorithmName(algorithm);
        a.seed = RunSeed(config_.seed, run, k);
        a.run = run;
        a.index = k;
        a.iterations = config_.iterations;
        a.profile =
            polyvul::Train(*tree_, algorithm, config_.iterations, a.seed)
                .average;
        a.nash_gap = NashGap(*tree_, a.profile);
        paths[t] = (fs::path(RunDir(run)) / (std::to_string(k) + ".json"))
                       .string();
        WriteFile(paths[t], ProfileToJson(a));
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int threads = std::min(config_.jobs, total);
  std::vector<std::thread> pool;
  for (int w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
  return paths;
}

std::vector<BehaviorProfile> Experiment::LoadRun(int run) const {
  std::vector<BehaviorProfile> out;
  for (int k = 0; k < config_.strategies_per_run; ++k) {
    const std::string path =
        (fs::path(RunDir(run)) / (std::to_string(k) + ".json")).string();
    ProfileArtifact a = ProfileFromJson(ReadFile(path), *tree_);
    POLYVUL_CHECK_ARG(a.game == config_.game,
                      path + " was trained on " + a.game);
    out.push_back(std::move(a.profile));
  }
  return out;
}

std::vector<std::string> Experiment::Decompose(const std::string& mode) const {
  const std::string params = ParamsJson(config_.params).dump();
  if (mode == "lp-nf" || mode == "lp-efg") {
    DecompositionResult r =
        mode == "lp-nf"
            ? MinDeltaNormalForm(normal_form_ ? *normal_form_
                                              : InducedNormalForm(*tree_))
            : MinDeltaPerfectInfo(*tree_);
    r.game = config_.game;
    const std::string path = DecompositionPath(mode);
    WriteFile(path, DecompositionToJson(r, params));
    return {path};
  }
  POLYVUL_CHECK_ARG(mode == "sgd", "unknown decomposition mode: " + mode);
  POLYVUL_CHECK_ARG(tree_->has_perfect_recall(),
                    "sgd decomposition needs perfect recall");
  std::vector<std::string> paths;
  for (int run = 0; run < config_.runs; ++run) {
    const Neighborhood nb(*tree_, LoadRun(run));
    SgConfig cfg = config_.sgd;
    cfg.seed = Hash64({config_.sgd.seed, static_cast<uint64_t>(run)});
    SgResult s = SgDecompose(tree_, nb, cfg);
    DecompositionResult r;
    r.method = "sgd";
    r.game = config_.game;
    r.delta = s.delta;
    r.gamma = s.gamma;
    r.poly_efg = std::move(s.poly_efg);
    r.rounds = cfg.epochs;
    paths.push_back(DecompositionPath(std::to_string(run)));
    WriteFile(paths.back(), DecompositionToJson(r, params));
  }
  return paths;
}

std::string Experiment::Gamma() const {
  PolymatrixGame pg;
  std::string source;
  if (config_.game == "offense_defense") {
    pg = OffenseDefensePolymatrix(config_.params.beta);
    source = "builtin";
  } else {
    source = DecompositionPath("lp-nf");
    pg = PolymatrixFromJson(ReadFile(source));
  }
  const GammaResult r = ComputeGamma(pg);
  json doc = {{"gamma", r.gamma},       {"player", r.player},
              {"opponent", r.opponent}, {"target", r.target},
              {"solved", r.solved},     {"infeasible", r.infeasible},
              {"source", source},       {"game", config_.game}};
  const std::string path = (fs::path(config_.out_dir) / "gamma.json").string();
  WriteFile(path, doc.dump(2));
  return path;
}

namespace {

struct StoredDecomposition {
  double delta = 0;
  std::optional<double> gamma;
};

std::optional<StoredDecomposition> TryLoadDecomposition(
    const std::string& path) {
  if (!fs::exists(path)) return std::nullopt;
  const json doc = ParseJson(ReadFile(path), "decomposition");
  StoredDecomposition d;
  try {
    const json& meta = doc.at("metadata");
    d.delta = meta.at("delta").get<double>();
    if (!meta.at("gamma").is_null()) d.gamma = meta.at("gamma").get<double>();
  } catch (const json::exception& e) {
    throw ValidationError("malformed decomposition " + path + ": " + e.what());
  }
  return d;
}

// Largest Vul_i over the run's own profiles, per player.
std::vector<double> RunVulnerability(const ExtensiveFormGame& g,
                                     const std::vector<BehaviorProfile>& run) {
  const int n = g.num_players();
  OpponentSets sets(n);
  for (const auto& pi : run) {
    for (int i = 0; i < n; ++i) sets[i].push_back(pi[i]);
  }
  std::vector<double> vul(n, -std::numeric_limits<double>::infinity());
  for (const auto& pi : run) {
    for (int i = 0; i < n; ++i) {
      vul[i] = std::max(vul[i], VulnerabilityFinite(g, i, pi, sets));
    }
  }
  return vul;
}

}  // namespace

std::vector<std::string> Experiment::Vulnerability() const {
  std::vector<std::string> paths;
  const int n = tree_->num_players();
  for (int run = 0; run < config_.runs; ++run) {
    const auto profiles = LoadRun(run);
    VulnerabilityReport rep;
    rep.opponent_model = "finite-set";
    rep.vulnerability = RunVulnerability(*tree_, profiles);
    if (auto d = TryLoadDecomposition(DecompositionPath(std::to_string(run)))) {
      rep.delta = d->delta;
      rep.gamma = d->gamma;
      if (d->gamma) rep.bound = Bound(n - 1, n, *d->gamma, d->delta).player_bound;
    }
    json doc = json::parse(rep.ToJson());
    doc["run"] = run;
    doc["tv_max"] = MaxPairwiseTotalVariation(*tree_, profiles);
    paths.push_back((fs::path(config_.out_dir) / "vulnerability" /
                     (std::to_string(run) + ".json"))
                        .string());
    WriteFile(paths.back(), doc.dump(2));
  }
  return paths;
}

std::vector<RunRow> Experiment::Report() const {
  const int n = tree_->num_players();
  std::optional<double> lp_gamma;
  const std::string gamma_path =
      (fs::path(config_.out_dir) / "gamma.json").string();
  if (fs::exists(gamma_path)) {
    lp_gamma = ParseJson(ReadFile(gamma_path), "gamma").at("gamma").get<double>();
  }
  std::vector<RunRow> rows;
  for (int run = 0; run < config_.runs; ++run) {
    auto d = TryLoadDecomposition(DecompositionPath(std::to_string(run)));
    if (!d) d = TryLoadDecomposition(DecompositionPath("lp-efg"));
    if (!d) d = TryLoadDecomposition(DecompositionPath("lp-nf"));
    if (!d) {
      throw RuntimeError("missing artifact: no decomposition for run " +
                         std::to_string(run) + " under " +
                         (fs::path(config_.out_dir) / "decompositions").string());
    }
    if (!d->gamma) d->gamma = lp_gamma;
    const auto profiles = LoadRun(run);
    RunRow row;
    row.run = run;
    row.delta = d->delta;
    row.gamma = d->gamma;
    if (row.gamma) row.bound = (n - 1) * *row.gamma + 2 * row.delta;
    const auto vul = RunVulnerability(*tree_, profiles);
    row.vulnerability = *std::max_element(vul.begin(), vul.end());
    if (row.bound && row.vulnerability > 0) {
      row.ratio = *row.bound / row.vulnerability;
    }
    row.tv_max = MaxPairwiseTotalVariation(*tree_, profiles);
    rows.push_back(row);
  }

  std::ostringstream csv;
  csv << "run,delta,gamma,bound,vulnerability,ratio,tv_max\n";
  std::vector<double> cols[6];
  for (const RunRow& r : rows) {
    csv << r.run << ',' << Format(r.delta) << ',' << Format(r.gamma) << ','
        << Format(r.bound) << ',' << Format(r.vulnerability) << ','
        << Format(r.ratio) << ',' << Format(r.tv_max) << '\n';
    cols[0].push_back(r.delta);
    if (r.gamma) cols[1].push_back(*r.gamma);
    if (r.bound) cols[2].push_back(*r.bound);
    cols[3].push_back(r.vulnerability);
    if (r.ratio) cols[4].push_back(*r.ratio);
    cols[5].push_back(r.tv_max);
  }
  const char* names[6] = {"delta",         "gamma", "bound",
                          "vulnerability", "ratio", "tv_max"};
  json summary = {{"game", config_.game}, {"runs", config_.runs}};
  for (int c = 0; c < 6; ++c) summary["columns"][names[c]] = Stats(cols[c]);
  WriteFile((fs::path(config_.out_dir) / "report.csv").string(), csv.str());
  WriteFile((fs::path(config_.out_dir) / "report.json").string(),
            summary.dump(2));
  return rows;
}

}  // namespace polyvul
