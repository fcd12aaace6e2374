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
#ifndef POLYVUL_EXACT_DECOMP_H_
#define POLYVUL_EXACT_DECOMP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "efg.h"
#include "normal_form.h"
#include "polymatrix.h"

namespace polyvul {

inline constexpr int64_t kMaxLpProfiles = 100'000;
inline constexpr int kMaxLpTerminals = 100'000;

// Linear functional mu -> E_mu[u_i(target, rho_-i) - u_i(rho)], one
// coefficient per pure profile.
struct DeviationAdvantage {
  int player = 0;
  int target = 0;
  std::vector<double> coefficients;

  double Evaluate(const EmpiricalDistribution& mu) const;
};

DeviationAdvantage MakeDeviationAdvantage(const NormalFormGame& game,
                                          int player, int target);

// Some coarse correlated equilibrium, found as a feasible point of the
// external-deviation constraints.
EmpiricalDistribution ComputeCce(const NormalFormGame& game,
                                 int64_t max_profiles = kMaxLpProfiles);

struct GammaResult {
  double gamma = 0;
  int solved = 0;
  int infeasible = 0;
  // Where the maximum was attained.
  int player = -1;
  int opponent = -1;
  int target = -1;
  EmpiricalDistribution witness;
};

// Largest subgame deviation advantage a_ij(target, mu) over all CCEs mu,
// edges in both orientations and pure targets. Requires a constant-sum
// game.
GammaResult ComputeGamma(const PolymatrixGame& game,
                         int64_t max_profiles = kMaxLpProfiles);

struct DecompositionResult {
  std::string method;  // "lp-nf", "lp-efg" or "sgd"
  std::string game;
  double delta = 0;
  std::optional<double> gamma;
  std::optional<PolymatrixGame> polymatrix;
  std::optional<PolyEfg> poly_efg;
  // LP iterations of the row-generation loop (0 for sgd).
  int rounds = 0;
};

// Polymatrix JSON plus {delta, gamma, method, game, params}.
std::string DecompositionToJson(const DecompositionResult& result,
                                const std::string& params_json = "{}");

// Smallest delta such that the game is within delta of a pairwise
// constant-sum polymatrix game on the complete graph, with that game.
DecompositionResult MinDeltaNormalForm(const NormalFormGame& game,
                                       int64_t max_profiles = kMaxLpProfiles);

// Same for a perfect-information tree, with the decomposition expressed as
// terminal utilities per edge. Utilities are compared profile by profile
// with outsiders replaced by the default subgame chance.
DecompositionResult MinDeltaPerfectInfo(const ExtensiveFormGame& game,
                                        int64_t max_profiles = kMaxLpProfiles);

// Relaxation that only asks each terminal's payoff vector to split into
// pairwise constant-sum parts. Diagnostic; it ignores how outsiders are
// averaged inside each subgame.
double MinDeltaPerTerminal(const ExtensiveFormGame& game);

}  // namespace polyvul

#endif  // POLYVUL_EXACT_DECOMP_H_
