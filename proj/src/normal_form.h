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

#ifndef POLYVUL_NORMAL_FORM_H_
#define POLYVUL_NORMAL_FORM_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polyvul {

// Distribution over one player's pure strategies, indexed by pure strategy.
using MixedStrategy = std::vector<double>;
using MixedProfile = std::vector<MixedStrategy>;

// Weights over pure profiles, indexed by NormalFormGame::ProfileIndex.
using EmpiricalDistribution = std::vector<double>;

// Dense n-player normal-form game.
//
// Pure profiles are numbered in mixed radix with player 0 most significant,
// so the profile (a0, a1, ..., a_{n-1}) has index
// ((a0 * |P1| + a1) * |P2| + a2) ...
class NormalFormGame {
 public:
  NormalFormGame() = default;

  // `utilities` holds num_profiles * num_players entries, profile-major.
  NormalFormGame(std::vector<int> num_actions, std::vector<double> utilities);

  int num_players() const { return static_cast<int>(num_actions_.size()); }
  int num_actions(int player) const { return num_actions_[player]; }
  const std::vector<int>& num_actions() const { return num_actions_; }
  int64_t num_profiles() const { return num_profiles_; }

  double utility(int64_t profile, int player) const {
    return utilities_[profile * num_players() + player];
  }
  const std::vector<double>& utilities() const { return utilities_; }

  int64_t ProfileIndex(std::span<const int> actions) const;
  void DecodeProfile(int64_t profile, std::span<int> actions) const;
  std::vector<int> DecodeProfile(int64_t profile) const;

  // Index of the profile obtained by replacing `player`'s action.
  int64_t WithAction(int64_t profile, int player, int action) const;
  int ActionOf(int64_t profile, int player) const {
    return static_cast<int>((profile / stride_[player]) % num_actions_[player]);
  }

  // u_i(s) = sum over pure profiles of prod_j s_j(rho_j) u_i(rho).
  std::vector<double> ExpectedUtility(const MixedProfile& profile) const;

  // E_mu[u_i(rho)] for every player.
  std::vector<double> ExpectedUtility(const EmpiricalDistribution& mu) const;

  void CheckProfile(const MixedProfile& profile) const;
  void CheckDistribution(const EmpiricalDistribution& mu) const;

 private:
  std::vector<int> num_actions_;
  std::vector<int64_t> stride_;
  int64_t num_profiles_ = 0;
  std::vector<double> utilities_;
};

MixedStrategy PureMixed(int num_actions, int action);
MixedStrategy UniformMixed(int num_actions);

// JSON document:
//   { "players": n, "actions": [|P_1|, ...],
//     "utilities": { "i,j,k": [u_1, ..., u_n], ... } }
// Every pure profile must be present.
NormalFormGame NormalFormFromJson(const std::string& text);
std::string NormalFormToJson(const NormalFormGame& game);
NormalFormGame LoadNormalForm(const std::string& path);

}  // namespace polyvul

#endif  // POLYVUL_NORMAL_FORM_H_
