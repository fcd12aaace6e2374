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
#include "exact_decomp.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numeric>
#include <tuple>
#include <utility>

#include "errors.h"
#include "json.hpp"
#include "linprog.h"

namespace polyvul {

double DeviationAdvantage::Evaluate(const EmpiricalDistribution& mu) const {
  double v = 0;
  for (size_t p = 0; p < coefficients.size(); ++p) {
    v += mu[p] * coefficients[p];
  }
  return v;
}

DeviationAdvantage MakeDeviationAdvantage(const NormalFormGame& game,
                                          int player, int target) {
  POLYVUL_CHECK_ARG(player >= 0 && player < game.num_players() &&
                        target >= 0 && target < game.num_actions(player),
                    "deviation out of range");
  DeviationAdvantage adv{player, target, {}};
  adv.coefficients.resize(game.num_profiles());
  for (int64_t p = 0; p < game.num_profiles(); ++p) {
    adv.coefficients[p] = game.utility(game.WithAction(p, player, target),
                                       player) -
                          game.utility(p, player);
  }
  return adv;
}

namespace {

// mu >= 0, sum mu = 1 and every external deviation advantage <= 0.
LinearProgram CceProgram(const NormalFormGame& game, LpSense sense) {
  LinearProgram lp(sense);
  LpRow total;
  for (int64_t p = 0; p < game.num_profiles(); ++p) {
    total.emplace_back(lp.AddVariable(0.0), 1.0);
  }
  lp.AddEqual(std::move(total), 1.0);
  for (int i = 0; i < game.num_players(); ++i) {
    for (int t = 0; t < game.num_actions(i); ++t) {
      DeviationAdvantage adv = MakeDeviationAdvantage(game, i, t);
      LpRow row;
      for (int64_t p = 0; p < game.num_profiles(); ++p) {
        if (adv.coefficients[p] != 0) {
          row.emplace_back(static_cast<int>(p), adv.coefficients[p]);
        }
      }
      lp.AddLessEqual(std::move(row), 0.0);
    }
  }
  return lp;
}

EmpiricalDistribution CleanDistribution(std::vector<double> x) {
  double total = 0;
  for (double& v : x) total += (v = std::max(v, 0.0));
  for (double& v : x) v /= total;
  return x;
}

void CheckProfileCount(int64_t count, int64_t max_profiles) {
  POLYVUL_CHECK_ARG(count <= max_profiles,
                    "too many pure profiles for an exact LP (" +
                        std::to_string(count) + " > " +
                        std::to_string(max_profiles) + ")");
}

// |target - coefficients . x| <= delta.
struct AbsRow {
  LpRow coefficients;
  double target = 0;
};

double Residual(const AbsRow& row, const std::vector<double>& x) {
  double v = row.target;
  for (const auto& [k, c] : row.coefficients) v -= c * x[k];
  return v;
}

struct DeltaFit {
  std::vector<double> x;
  double delta = 0;
  int rounds = 0;
};

constexpr size_t kDirectRows = 400;
constexpr size_t kRowsPerRound = 200;
constexpr double kCutTolerance = 1e-9;

// Minimizes delta over free x by row generation: solve with a subset of the
// rows, add the most violated ones, repeat until none is violated.
DeltaFit FitDelta(int num_vars, std::vector<AbsRow> rows) {
  // Identical rows are common (profiles that reach the same terminals).
  for (auto& r : rows) std::sort(r.coefficients.begin(), r.coefficients.end());
  std::sort(rows.begin(), rows.end(), [](const AbsRow& a, const AbsRow& b) {
    return std::tie(a.target, a.coefficients) <
           std::tie(b.target, b.coefficients);
  });
  rows.erase(std::unique(rows.begin(), rows.end(),
                         [](const AbsRow& a, const AbsRow& b) {
                           return a.target == b.target &&
                                  a.coefficients == b.coefficients;
                         }),
             rows.end());

  std::vector<char> active(rows.size(), 0);
  if (rows.size() <= kDirectRows) {
    std::fill(active.begin(), active.end(), 1);
  } else {
    const size_t stride = rows.size() / kDirectRows + 1;
    for (size_t r = 0; r < rows.size(); r += stride) active[r] = 1;
  }

  SimplexOptions opt;
  opt.pricing = PricingRule::kDantzig;
  DeltaFit fit;
  while (true) {
    ++fit.rounds;
    LinearProgram lp;
    for (int k = 0; k < num_vars; ++k) lp.AddVariable(0.0, -kInfinity, kInfinity);
    const int delta = lp.AddVariable(1.0);
    for (size_t r = 0; r < rows.size(); ++r) {
      if (!active[r]) continue;
      LpRow up = rows[r].coefficients, down;
      for (const auto& [k, c] : up) down.emplace_back(k, -c);
      up.emplace_back(delta, -1.0);
      down.emplace_back(delta, -1.0);
      lp.AddLessEqual(std::move(up), rows[r].target);
      lp.AddLessEqual(std::move(down), -rows[r].target);
    }
    LpSolution sol = Solve(lp, opt);
    if (sol.status != LpStatus::kOptimal) {
      throw RuntimeError("decomposition LP ended " +
                         LpStatusName(sol.status));
    }
    fit.x.assign(sol.x.begin(), sol.x.begin() + num_vars);
    const double level = sol.x[delta];
    std::vector<std::pair<double, size_t>> violated;
    fit.delta = 0;
    for (size_t r = 0; r < rows.size(); ++r) {
      const double res = std::abs(Residual(rows[r], fit.x));
      fit.delta = std::max(fit.delta, res);
      if (!active[r] && res > level + kCutTolerance) {
        violated.emplace_back(-res, r);
      }
    }
    if (violated.empty()) break;
    const size_t take = std::min(violated.size(), kRowsPerRound);
    std::partial_sort(violated.begin(), violated.begin() + take,
                      violated.end());
    for (size_t k = 0; k < take; ++k) active[violated[k].second] = 1;
  }
  return fit;
}

}  // namespace

EmpiricalDistribution ComputeCce(const NormalFormGame& game,
                                 int64_t max_profiles) {
  CheckProfileCount(game.num_profiles(), max_profiles);
  LpSolution sol = Solve(CceProgram(game, LpSense::kMinimize));
  if (sol.status != LpStatus::kOptimal) {
    throw RuntimeError("no coarse correlated equilibrium found");
  }
  return CleanDistribution(std::move(sol.x));
}

GammaResult ComputeGamma(const PolymatrixGame& game, int64_t max_profiles) {
  POLYVUL_CHECK_ARG(game.IsConstantSum(),
                    "subgame stability needs a constant-sum polymatrix game");
  const NormalFormGame flat = game.ToNormalForm();
  CheckProfileCount(flat.num_profiles(), max_profiles);
  GammaResult result;
  double best = -kInfinity;
  for (const Edge& e : game.edges()) {
    for (auto [i, j] : {std::pair{e.i, e.j}, std::pair{e.j, e.i}}) {
      for (int t = 0; t < game.num_actions(i); ++t) {
        LinearProgram lp = CceProgram(flat, LpSense::kMaximize);
        for (int64_t p = 0; p < flat.num_profiles(); ++p) {
          const int ai = flat.ActionOf(p, i), aj = flat.ActionOf(p, j);
          lp.SetObjective(static_cast<int>(p),
                          game.Payoff(i, j, t, aj) - game.Payoff(i, j, ai, aj));
        }
        LpSolution sol = Solve(lp);
        if (sol.status != LpStatus::kOptimal) {
          ++result.infeasible;
          continue;
        }
        ++result.solved;
        if (sol.objective > best) {
          best = sol.objective;
          result.player = i;
          result.opponent = j;
          result.target = t;
          result.witness = CleanDistribution(sol.x);
        }
      }
    }
  }
  result.gamma = result.solved ? std::max(best, 0.0) : 0.0;
  return result;
}

namespace {

// Groups each player's actions into classes of exact duplicates: actions
// that give every player the same payoff against every opposing profile.
// class_of[i][a] is a's class; representative[i][c] is the class's first
// action.
struct DuplicateClasses {
  std::vector<std::vector<int>> class_of;
  std::vector<std::vector<int>> representative;
};

DuplicateClasses FindDuplicateActions(const NormalFormGame& game) {
  const int n = game.num_players();
  DuplicateClasses dc;
  dc.class_of.resize(n);
  dc.representative.resize(n);
  for (int i = 0; i < n; ++i) {
    const int k = game.num_actions(i);
    // Payoff signature of each action, over profiles with that action.
    std::vector<std::vector<double>> sig(k);
    for (int64_t p = 0; p < game.num_profiles(); ++p) {
      auto& row = sig[game.ActionOf(p, i)];
      for (int j = 0; j < n; ++j) row.push_back(game.utility(p, j));
    }
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return sig[a] < sig[b]; });
    dc.class_of[i].assign(k, -1);
    std::vector<int> first_of_class;
    for (size_t t = 0; t < order.size(); ++t) {
      const int a = order[t];
      if (t > 0 && sig[a] == sig[order[t - 1]]) {
        dc.class_of[i][a] = dc.class_of[i][order[t - 1]];
      } else {
        dc.class_of[i][a] = static_cast<int>(first_of_class.size());
        first_of_class.push_back(a);
      }
    }
    // Number classes by their smallest member so the result is stable.
    std::vector<int> rank(first_of_class.size());
    std::vector<int> by_min(first_of_class.size(), k);
    for (int a = 0; a < k; ++a) {
      by_min[dc.class_of[i][a]] = std::min(by_min[dc.class_of[i][a]], a);
    }
    std::vector<int> cls(first_of_class.size());
    std::iota(cls.begin(), cls.end(), 0);
    std::sort(cls.begin(), cls.end(),
              [&](int x, int y) { return by_min[x] < by_min[y]; });
    for (size_t t = 0; t < cls.size(); ++t) rank[cls[t]] = static_cast<int>(t);
    for (int a = 0; a < k; ++a) dc.class_of[i][a] = rank[dc.class_of[i][a]];
    dc.representative[i].resize(cls.size());
    for (size_t t = 0; t < cls.size(); ++t) {
      dc.representative[i][t] = by_min[cls[t]];
    }
  }
  return dc;
}

// The LP on a game whose actions are all distinct.
DecompositionResult MinDeltaReduced(const NormalFormGame& game) {
  const int n = game.num_players();
  const std::vector<Edge> edges = FullyConnectedEdges(n);
  // Per edge: |A_i| x |A_j| payoffs to edge.i, then the constant.
  std::vector<int> base;
  int num_vars = 0;
  for (const Edge& e : edges) {
    base.push_back(num_vars);
    num_vars += game.num_actions(e.i) * game.num_actions(e.j) + 1;
  }
  auto cell = [&](int k, int a, int b) {
    return base[k] + a * game.num_actions(edges[k].j) + b;
  };
  auto constant = [&](int k) {
    return base[k] + game.num_actions(edges[k].i) *
                         game.num_actions(edges[k].j);
  };

  std::vector<AbsRow> rows;
  for (int64_t p = 0; p < game.num_profiles(); ++p) {
    for (int i = 0; i < n; ++i) {
      AbsRow row;
      row.target = game.utility(p, i);
      for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
        const Edge& e = edges[k];
        if (e.i != i && e.j != i) continue;
        const int c = cell(k, game.ActionOf(p, e.i), game.ActionOf(p, e.j));
        if (e.i == i) {
          row.coefficients.emplace_back(c, 1.0);
        } else {
          row.coefficients.emplace_back(c, -1.0);
          row.coefficients.emplace_back(constant(k), 1.0);
        }
      }
      rows.push_back(std::move(row));
    }
  }
  DeltaFit fit = FitDelta(num_vars, std::move(rows));

  PolymatrixGame pg(game.num_actions(), edges);
  for (int k = 0; k < static_cast<int>(edges.size()); ++k) {
    const Edge& e = edges[k];
    const double c = fit.x[constant(k)];
    for (int a = 0; a < game.num_actions(e.i); ++a) {
      for (int b = 0; b < game.num_actions(e.j); ++b) {
        const double v = fit.x[cell(k, a, b)];
        pg.SetPayoff(e.i, e.j, a, b, v);
        pg.SetPayoff(e.j, e.i, b, a, c - v);
      }
    }
  }
  DecompositionResult result;
  result.method = "lp-nf";
  result.delta = fit.delta;
  result.rounds = fit.rounds;
  result.polymatrix = std::move(pg);
  return result;
}

}  // namespace

DecompositionResult MinDeltaNormalForm(const NormalFormGame& game,
                                       int64_t max_profiles) {
  const int n = game.num_players();
  POLYVUL_CHECK_ARG(n >= 2, "decomposition needs at least two players");
  CheckProfileCount(game.num_profiles(), max_profiles);
  // Duplicate actions can share decomposition entries without loss: the
  // LP is convex and symmetric under swapping duplicates, so averaging an
  // optimum over those swaps is still optimal.
  const DuplicateClasses dc = FindDuplicateActions(game);
  std::vector<int> reduced_actions(n);
  bool any_duplicate = false;
  for (int i = 0; i < n; ++i) {
    reduced_actions[i] = static_cast<int>(dc.representative[i].size());
    any_duplicate |= reduced_actions[i] < game.num_actions(i);
  }
  if (!any_duplicate) return MinDeltaReduced(game);

  int64_t reduced_profiles = 1;
  for (int a : reduced_actions) reduced_profiles *= a;
  const NormalFormGame shape(reduced_actions,
                             std::vector<double>(reduced_profiles * n, 0.0));
  std::vector<double> utils(shape.num_profiles() * n);
  std::vector<int> full(n);
  for (int64_t p = 0; p < shape.num_profiles(); ++p) {
    for (int i = 0; i < n; ++i) {
      full[i] = dc.representative[i][shape.ActionOf(p, i)];
    }
    const int64_t q = game.ProfileIndex(full);
    for (int i = 0; i < n; ++i) utils[p * n + i] = game.utility(q, i);
  }
  DecompositionResult reduced =
      MinDeltaReduced(NormalFormGame(reduced_actions, std::move(utils)));

  PolymatrixGame pg(game.num_actions(), FullyConnectedEdges(n));
  for (const Edge& e : pg.edges()) {
    for (int a = 0; a < game.num_actions(e.i); ++a) {
      for (int b = 0; b < game.num_actions(e.j); ++b) {
        const int ca = dc.class_of[e.i][a], cb = dc.class_of[e.j][b];
        pg.SetPayoff(e.i, e.j, a, b,
                     reduced.polymatrix->Payoff(e.i, e.j, ca, cb));
        pg.SetPayoff(e.j, e.i, b, a,
                     reduced.polymatrix->Payoff(e.j, e.i, cb, ca));
      }
    }
  }
  reduced.polymatrix = std::move(pg);
  return reduced;
}

namespace {

void CheckPerfectInformation(const ExtensiveFormGame& game) {
  POLYVUL_CHECK_ARG(game.is_perfect_information(),
                    "this decomposition needs a perfect-information game");
  POLYVUL_CHECK_ARG(game.num_players() >= 2,
                    "decomposition needs at least two players");
  POLYVUL_CHECK_ARG(game.num_terminals() <= kMaxLpTerminals,
                    "too many terminals for an exact LP");
}

}  // namespace

DecompositionResult MinDeltaPerfectInfo(const ExtensiveFormGame& game,
                                        int64_t max_profiles) {
  CheckPerfectInformation(game);
  const int n = game.num_players();
  const int nz = game.num_terminals();
  auto shared = std::make_shared<const ExtensiveFormGame>(game);
  PolyEfg pg(shared);
  const int num_edges = pg.num_edges();
  // Per edge: one value per terminal, then the constant.
  auto value_var = [&](int e, int z) { return e * (nz + 1) + z; };
  auto constant_var = [&](int e) { return e * (nz + 1) + nz; };

  std::vector<int64_t> counts(n);
  int64_t profiles = 1;
  std::vector<std::vector<std::vector<double>>> reach(n);
  for (int i = 0; i < n; ++i) {
    counts[i] = NumPureStrategies(game, i);
    CheckProfileCount(counts[i], max_profiles);
    profiles *= counts[i];
    CheckProfileCount(profiles, max_profiles);
    for (int64_t k = 0; k < counts[i]; ++k) {
      reach[i].push_back(PlayerReach(
          game, i, PureToBehavior(game, i, DecodePureStrategy(game, i, k))));
    }
  }

  std::vector<AbsRow> rows;
  std::vector<int64_t> pure(n, 0);
  for (int64_t p = 0; p < profiles; ++p) {
    int64_t rest = p;
    for (int i = n - 1; i >= 0; --i) {
      pure[i] = rest % counts[i];
      rest /= counts[i];
    }
    for (int i = 0; i < n; ++i) {
      AbsRow row;
      for (int z = 0; z < nz; ++z) {
        double w = game.chance_reach(z);
        for (int k = 0; k < n && w != 0; ++k) w *= reach[k][pure[k]][z];
        row.target += w * game.utility(z, i);
      }
      for (int e = 0; e < num_edges; ++e) {
        const Edge& ed = pg.edges()[e];
        if (ed.i != i && ed.j != i) continue;
        const auto& ri = reach[ed.i][pure[ed.i]];
        const auto& rj = reach[ed.j][pure[ed.j]];
        double mass = 0;
        for (int z = 0; z < nz; ++z) {
          const double w = ri[z] * rj[z] * pg.chance_reach(e)[z];
          if (w == 0) continue;
          mass += w;
          row.coefficients.emplace_back(value_var(e, z), ed.i == i ? w : -w);
        }
        if (ed.j == i) row.coefficients.emplace_back(constant_var(e), mass);
      }
      rows.push_back(std::move(row));
    }
  }
  DeltaFit fit = FitDelta(num_edges * (nz + 1), std::move(rows));

  PolyEfg out(shared);
  for (int e = 0; e < num_edges; ++e) {
    for (int z = 0; z < nz; ++z) out.values(e)[z] = fit.x[value_var(e, z)];
    out.constant(e) = fit.x[constant_var(e)];
  }
  DecompositionResult result;
  result.method = "lp-efg";
  result.game = game.name();
  result.delta = fit.delta;
  result.rounds = fit.rounds;
  result.poly_efg = std::move(out);
  return result;
}

double MinDeltaPerTerminal(const ExtensiveFormGame& game) {
  CheckPerfectInformation(game);
  const int n = game.num_players();
  const int nz = game.num_terminals();
  const std::vector<Edge> edges = FullyConnectedEdges(n);
  const int num_edges = static_cast<int>(edges.size());
  auto value_var = [&](int e, int z) { return e * (nz + 1) + z; };
  auto constant_var = [&](int e) { return e * (nz + 1) + nz; };
  std::vector<AbsRow> rows;
  for (int z = 0; z < nz; ++z) {
    for (int i = 0; i < n; ++i) {
      AbsRow row;
      row.target = game.utility(z, i);
      for (int e = 0; e < num_edges; ++e) {
        if (edges[e].i == i) {
          row.coefficients.emplace_back(value_var(e, z), 1.0);
        } else if (edges[e].j == i) {
          row.coefficients.emplace_back(value_var(e, z), -1.0);
          row.coefficients.emplace_back(constant_var(e), 1.0);
        }
      }
      rows.push_back(std::move(row));
    }
  }
  return FitDelta(num_edges * (nz + 1), std::move(rows)).delta;
}

std::string DecompositionToJson(const DecompositionResult& result,
                                const std::string& params_json) {
  nlohmann::json doc;
  if (result.polymatrix) {
    doc = nlohmann::json::parse(PolymatrixToJson(*result.polymatrix));
  } else if (result.poly_efg) {
    doc = nlohmann::json::parse(PolyEfgToJson(*result.poly_efg));
  }
  nlohmann::json meta;
  meta["delta"] = result.delta;
  meta["gamma"] = result.gamma ? nlohmann::json(*result.gamma)
                               : nlohmann::json(nullptr);
  meta["method"] = result.method;
  meta["game"] = result.game;
  try {
    meta["params"] = nlohmann::json::parse(params_json);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed params JSON: ") + e.what());
  }
  doc["metadata"] = meta;
  return doc.dump(2);
}

}  // namespace polyvul
