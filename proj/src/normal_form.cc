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

#include "normal_form.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.h"
#include "json.hpp"

namespace polyvul {

NormalFormGame::NormalFormGame(std::vector<int> num_actions,
                               std::vector<double> utilities)
    : num_actions_(std::move(num_actions)), utilities_(std::move(utilities)) {
  POLYVUL_CHECK_ARG(!num_actions_.empty(), "game needs at least one player");
  const int n = num_players();
  stride_.assign(n, 1);
  num_profiles_ = 1;
  for (int i = n - 1; i >= 0; --i) {
    POLYVUL_CHECK_ARG(num_actions_[i] >= 1,
                      "every player needs at least one pure strategy");
    stride_[i] = num_profiles_;
    num_profiles_ *= num_actions_[i];
  }
  POLYVUL_CHECK_ARG(
      static_cast<int64_t>(utilities_.size()) == num_profiles_ * n,
      "utility table has " + std::to_string(utilities_.size()) +
          " entries, expected " + std::to_string(num_profiles_ * n));
  for (double u : utilities_) {
    POLYVUL_CHECK_ARG(std::isfinite(u), "utilities must be finite");
  }
}

int64_t NormalFormGame::ProfileIndex(std::span<const int> actions) const {
  POLYVUL_CHECK_ARG(static_cast<int>(actions.size()) == num_players(),
                    "profile size does not match player count");
  int64_t idx = 0;
  for (int i = 0; i < num_players(); ++i) {
    POLYVUL_CHECK_ARG(actions[i] >= 0 && actions[i] < num_actions_[i],
                      "action index out of range");
    idx += actions[i] * stride_[i];
  }
  return idx;
}

void NormalFormGame::DecodeProfile(int64_t profile,
                                   std::span<int> actions) const {
  for (int i = 0; i < num_players(); ++i) actions[i] = ActionOf(profile, i);
}

std::vector<int> NormalFormGame::DecodeProfile(int64_t profile) const {
  std::vector<int> actions(num_players());
  DecodeProfile(profile, actions);
  return actions;
}

int64_t NormalFormGame::WithAction(int64_t profile, int player,
                                   int action) const {
  return profile + (action - ActionOf(profile, player)) * stride_[player];
}

void NormalFormGame::CheckProfile(const MixedProfile& profile) const {
  POLYVUL_CHECK_ARG(static_cast<int>(profile.size()) == num_players(),
                    "profile has " + std::to_string(profile.size()) +
                        " strategies for a " + std::to_string(num_players()) +
                        "-player game");
  for (int i = 0; i < num_players(); ++i) {
    POLYVUL_CHECK_ARG(static_cast<int>(profile[i].size()) == num_actions_[i],
                      "strategy of player " + std::to_string(i) +
                          " has the wrong dimension");
  }
}

void NormalFormGame::CheckDistribution(const EmpiricalDistribution& mu) const {
  POLYVUL_CHECK_ARG(static_cast<int64_t>(mu.size()) == num_profiles_,
                    "distribution size does not match profile count");
  double total = 0;
  for (double w : mu) {
    POLYVUL_CHECK_ARG(w >= -1e-12, "distribution weights must be nonnegative");
    total += w;
  }
  POLYVUL_CHECK_ARG(std::abs(total - 1.0) <= 1e-10,
                    "distribution weights must sum to 1");
}

std::vector<double> NormalFormGame::ExpectedUtility(
    const MixedProfile& profile) const {
  CheckProfile(profile);
  const int n = num_players();
  std::vector<double> values(n, 0.0);
  for (int64_t p = 0; p < num_profiles_; ++p) {
    double w = 1.0;
    for (int i = 0; i < n && w != 0.0; ++i) w *= profile[i][ActionOf(p, i)];
    if (w == 0.0) continue;
    for (int i = 0; i < n; ++i) values[i] += w * utility(p, i);
  }
  return values;
}

std::vector<double> NormalFormGame::ExpectedUtility(
    const EmpiricalDistribution& mu) const {
  POLYVUL_CHECK_ARG(static_cast<int64_t>(mu.size()) == num_profiles_,
                    "distribution size does not match profile count");
  std::vector<double> values(num_players(), 0.0);
  for (int64_t p = 0; p < num_profiles_; ++p) {
    if (mu[p] == 0.0) continue;
    for (int i = 0; i < num_players(); ++i) values[i] += mu[p] * utility(p, i);
  }
  return values;
}

MixedStrategy PureMixed(int num_actions, int action) {
  MixedStrategy s(num_actions, 0.0);
  s.at(action) = 1.0;
  return s;
}

MixedStrategy UniformMixed(int num_actions) {
  return MixedStrategy(num_actions, 1.0 / num_actions);
}

NormalFormGame NormalFormFromJson(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed normal-form JSON: ") +
                          e.what());
  }
  try {
    const int n = doc.at("players").get<int>();
    auto actions = doc.at("actions").get<std::vector<int>>();
    POLYVUL_CHECK_ARG(n >= 1 && static_cast<int>(actions.size()) == n,
                      "\"actions\" must list one count per player");
    int64_t profiles = 1;
    for (int a : actions) {
      POLYVUL_CHECK_ARG(a >= 1, "action counts must be positive");
      profiles *= a;
    }
    std::vector<double> utils(profiles * n, 0.0);
    std::vector<char> seen(profiles, 0);
    NormalFormGame shape(actions, utils);
    for (const auto& [key, value] : doc.at("utilities").items()) {
      std::vector<int> idx;
      std::stringstream ss(key);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        try {
          size_t used = 0;
          idx.push_back(std::stoi(tok, &used));
          POLYVUL_CHECK_ARG(used == tok.size(), "bad profile key: " + key);
        } catch (const std::logic_error&) {
          throw ValidationError("bad profile key: " + key);
        }
      }
      POLYVUL_CHECK_ARG(static_cast<int>(idx.size()) == n,
                        "profile key has wrong arity: " + key);
      const int64_t p = shape.ProfileIndex(idx);
      auto u = value.get<std::vector<double>>();
      POLYVUL_CHECK_ARG(static_cast<int>(u.size()) == n,
                        "payoff vector has wrong length at " + key);
      for (int i = 0; i < n; ++i) utils[p * n + i] = u[i];
      seen[p] = 1;
    }
    for (int64_t p = 0; p < profiles; ++p) {
      POLYVUL_CHECK_ARG(seen[p], "utilities missing for a pure profile");
    }
    return NormalFormGame(std::move(actions), std::move(utils));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed normal-form JSON: ") +
                          e.what());
  }
}

std::string NormalFormToJson(const NormalFormGame& game) {
  nlohmann::json doc;
  doc["players"] = game.num_players();
  doc["actions"] = game.num_actions();
  nlohmann::json utils = nlohmann::json::object();
  for (int64_t p = 0; p < game.num_profiles(); ++p) {
    std::string key;
    std::vector<double> u(game.num_players());
    for (int i = 0; i < game.num_players(); ++i) {
      if (i) key += ',';
      key += std::to_string(game.ActionOf(p, i));
      u[i] = game.utility(p, i);
    }
    utils[key] = u;
  }
  doc["utilities"] = std::move(utils);
  return doc.dump(2);
}

NormalFormGame LoadNormalForm(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open game file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return NormalFormFromJson(buf.str());
}

}  // namespace polyvul
