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

#include "best_response.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.h"

namespace polyvul {

namespace {

// Relative slack under which two action values count as tied.
constexpr double kTieTolerance = 1e-12;

class BestResponder {
 public:
  BestResponder(const ExtensiveFormGame& game, int player,
                const std::vector<double>& weights)
      : game_(game),
        player_(player),
        weights_(weights),
        value_(game.num_nodes(), 0.0),
        done_(game.num_nodes(), 0),
        choice_(game.num_infosets(player), -1) {}

  BestResponse Run() {
    BestResponse br;
    br.value = Value(0);
    const int m = game_.num_infosets(player_);
    br.pure.resize(m);
    for (int k = 0; k < m; ++k) br.pure[k] = Decide(k);
    br.strategy = PureToBehavior(game_, player_, br.pure);
    return br;
  }

 private:
  double Value(int h) {
    if (done_[h]) return value_[h];
    double v = 0;
    if (game_.is_terminal(h)) {
      v = weights_[game_.terminal_index(h)];
    } else if (game_.player(h) == player_) {
      const Infoset& info = game_.infoset_info(game_.infoset(h));
      v = Value(game_.child(h, Decide(info.local_index)));
    } else {
      for (int c : game_.children(h)) v += Value(c);
    }
    done_[h] = 1;
    value_[h] = v;
    return v;
  }

  int Decide(int local) {
    if (choice_[local] >= 0) return choice_[local];
    const Infoset& info =
        game_.infoset_info(game_.infoset_id(player_, local));
    int best_a = 0;
    double best = -std::numeric_limits<double>::infinity();
    for (int a = 0; a < info.num_actions; ++a) {
      double q = 0;
      for (int h : info.nodes) q += Value(game_.child(h, a));
      if (a == 0 || q > best + kTieTolerance * std::max(1.0, std::abs(best))) {
        best = q;
        best_a = a;
      }
    }
    choice_[local] = best_a;
    return best_a;
  }

  const ExtensiveFormGame& game_;
  int player_;
  const std::vector<double>& weights_;
  std::vector<double> value_;
  std::vector<char> done_;
  std::vector<int> choice_;
};

}  // namespace

BestResponse BestResponseToWeights(const ExtensiveFormGame& game, int player,
                                   const std::vector<double>& weights) {
  POLYVUL_CHECK_ARG(player >= 0 && player < game.num_players(),
                    "player out of range");
  POLYVUL_CHECK_ARG(static_cast<int>(weights.size()) == game.num_terminals(),
                    "terminal weights have the wrong length");
  return BestResponder(game, player, weights).Run();
}

BestResponse ComputeBestResponse(const ExtensiveFormGame& game, int player,
                                 const BehaviorProfile& profile) {
  POLYVUL_CHECK_ARG(static_cast<int>(profile.size()) == game.num_players(),
                    "opponent profile does not cover every player");
  std::vector<double> w = game.chance_reach();
  for (int k = 0; k < game.num_players(); ++k) {
    if (k == player) continue;
    std::vector<double> r = PlayerReach(game, k, profile[k]);
    for (int z = 0; z < game.num_terminals(); ++z) w[z] *= r[z];
  }
  for (int z = 0; z < game.num_terminals(); ++z) w[z] *= game.utility(z, player);
  return BestResponseToWeights(game, player, w);
}

std::vector<double> BestResponseGains(const ExtensiveFormGame& game,
                                      const BehaviorProfile& profile) {
  const std::vector<double> u = ExpectedUtility(game, profile);
  std::vector<double> gains(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    gains[i] = ComputeBestResponse(game, i, profile).value - u[i];
  }
  return gains;
}

double NashGap(const ExtensiveFormGame& game, const BehaviorProfile& profile) {
  const std::vector<double> gains = BestResponseGains(game, profile);
  return *std::max_element(gains.begin(), gains.end());
}

double NashGap(const NormalFormGame& game, const MixedProfile& profile) {
  game.CheckProfile(profile);
  const std::vector<double> u = game.ExpectedUtility(profile);
  double gap = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < game.num_players(); ++i) {
    MixedProfile dev = profile;
    for (int a = 0; a < game.num_actions(i); ++a) {
      dev[i] = PureMixed(game.num_actions(i), a);
      gap = std::max(gap, game.ExpectedUtility(dev)[i] - u[i]);
    }
  }
  return gap;
}

}  // namespace polyvul
