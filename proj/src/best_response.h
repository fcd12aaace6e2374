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

#ifndef POLYVUL_BEST_RESPONSE_H_
#define POLYVUL_BEST_RESPONSE_H_

#include <vector>

#include "efg.h"
#include "normal_form.h"

namespace polyvul {

struct BestResponse {
  double value = 0;
  BehaviorStrategy strategy;  // pure, as a behavior strategy
  PureStrategy pure;          // chosen action per infoset
};

// Best response of `player` when terminal z is worth weights[z] to them,
// where weights already fold in the reach of everyone else (chance and
// opponents). Each infoset picks the action with the largest counterfactual
// value; ties go to the lowest action index.
BestResponse BestResponseToWeights(const ExtensiveFormGame& game, int player,
                                   const std::vector<double>& weights);

// Best response to the other players' strategies in `profile`; the entry
// for `player` itself is ignored and may be empty.
BestResponse ComputeBestResponse(const ExtensiveFormGame& game, int player,
                                 const BehaviorProfile& profile);

// max_i [max_{pi'_i} u_i(pi'_i, pi_-i) - u_i(pi)].
double NashGap(const ExtensiveFormGame& game, const BehaviorProfile& profile);

// Per-player best-response gains.
std::vector<double> BestResponseGains(const ExtensiveFormGame& game,
                                      const BehaviorProfile& profile);

// Normal-form counterpart over pure deviations.
double NashGap(const NormalFormGame& game, const MixedProfile& profile);

}  // namespace polyvul

#endif  // POLYVUL_BEST_RESPONSE_H_
