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
#include "sg_decompose.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "best_response.h"
#include "errors.h"
#include "rng.h"

namespace polyvul {

void SgConfig::Validate() const {
  POLYVUL_CHECK_ARG(lambda >= 0 && lambda <= 1, "lambda must be in [0, 1]");
  POLYVUL_CHECK_ARG(batch_size >= 1, "batch size must be >= 1");
  POLYVUL_CHECK_ARG(epochs >= 1, "epochs must be >= 1");
  POLYVUL_CHECK_ARG(lr_start > 0 && lr_floor > 0 && lr_floor <= lr_start,
                    "learning rates must satisfy 0 < floor <= start");
  POLYVUL_CHECK_ARG(lr_halve_every >= 1, "halving period must be >= 1");
}

double LearningRate(const SgConfig& config, int epoch) {
  POLYVUL_CHECK_ARG(epoch >= 1, "epochs are numbered from 1");
  const int halvings = (epoch - 1) / config.lr_halve_every;
  return std::max(std::ldexp(config.lr_start, -halvings), config.lr_floor);
}

Neighborhood::Neighborhood(const ExtensiveFormGame& game,
                           std::vector<BehaviorProfile> profiles)
    : profiles_(std::move(profiles)), sets_(game.num_players()) {
  POLYVUL_CHECK_ARG(!profiles_.empty(), "neighborhood needs a profile");
  for (const auto& pi : profiles_) {
    CheckProfile(game, pi);
    for (int i = 0; i < game.num_players(); ++i) sets_[i].push_back(pi[i]);
  }
}

int64_t Neighborhood::CrossSize() const {
  int64_t size = 1;
  for (const auto& s : sets_) size *= static_cast<int64_t>(s.size());
  return size;
}

std::vector<int> Neighborhood::CrossIndices(int64_t index) const {
  POLYVUL_CHECK_ARG(index >= 0 && index < CrossSize(),
                    "cross-product index out of range");
  std::vector<int> out(sets_.size());
  for (int i = num_players() - 1; i >= 0; --i) {
    const auto k = static_cast<int64_t>(sets_[i].size());
    out[i] = static_cast<int>(index % k);
    index /= k;
  }
  return out;
}

BehaviorProfile Neighborhood::CrossProfile(int64_t index) const {
  const auto c = CrossIndices(index);
  BehaviorProfile pi;
  for (int i = 0; i < num_players(); ++i) pi.push_back(sets_[i][c[i]]);
  return pi;
}

int64_t NumDeviationProfiles(const DeviationSets& deviations) {
  int64_t n = 1;
  for (const auto& d : deviations) n *= static_cast<int64_t>(d.size());
  return n;
}

std::vector<double> StackParameters(const PolyEfg& pg) {
  std::vector<double> out;
  for (int e = 0; e < pg.num_edges(); ++e) {
    out.insert(out.end(), pg.values(e).begin(), pg.values(e).end());
    out.push_back(pg.constant(e));
  }
  return out;
}

void SetParameters(PolyEfg& pg, const std::vector<double>& params) {
  const size_t stride = pg.game().num_terminals() + 1;
  POLYVUL_CHECK_ARG(params.size() == stride * pg.num_edges(),
                    "parameter vector has wrong length");
  for (int e = 0; e < pg.num_edges(); ++e) {
    const double* p = params.data() + e * stride;
    std::copy(p, p + stride - 1, pg.values(e).begin());
    pg.constant(e) = p[stride - 1];
  }
}

namespace {

using ReachSet = std::vector<const std::vector<double>*>;

// Evaluation and differentiation of subgame values from reach vectors.
class Objective {
 public:
  explicit Objective(const PolyEfg& pg)
      : pg_(pg), nz_(pg.game().num_terminals()) {}

  int num_params() const { return pg_.num_edges() * (nz_ + 1); }

  // Value to `player` of edge e; ri and rj are the reaches of e.i and e.j.
  double Side(int e, int player, const std::vector<double>& ri,
              const std::vector<double>& rj) const {
    const auto& pc = pg_.chance_reach(e);
    const auto& v = pg_.values(e);
    double acc = 0, mass = 0;
    for (int z = 0; z < nz_; ++z) {
      const double w = ri[z] * rj[z] * pc[z];
      acc += w * v[z];
      mass += w;
    }
    return player == pg_.edges()[e].i ? acc : pg_.constant(e) * mass - acc;
  }

  void AddSideGrad(int e, int player, const std::vector<double>& ri,
                   const std::vector<double>& rj, double coef,
                   std::vector<double>& grad) const {
    if (coef == 0) return;
    const auto& pc = pg_.chance_reach(e);
    double* g = grad.data() + static_cast<size_t>(e) * (nz_ + 1);
    const bool owner = player == pg_.edges()[e].i;
    const double s = owner ? coef : -coef;
    double mass = 0;
    for (int z = 0; z < nz_; ++z) {
      const double w = ri[z] * rj[z] * pc[z];
      g[z] += s * w;
      mass += w;
    }
    if (!owner) g[nz_] += coef * mass;
  }

  // sum_i |u'_i - u_i| at one profile, scaled by coef into grad.
  double DeltaTerm(const ReachSet& r, const std::vector<double>& u,
                   double coef, std::vector<double>* grad) const {
    const int n = pg_.num_players();
    double loss = 0;
    for (int i = 0; i < n; ++i) {
      double v = 0;
      for (int e = 0; e < pg_.num_edges(); ++e) {
        const Edge& ed = pg_.edges()[e];
        if (ed.i == i || ed.j == i) v += Side(e, i, *r[ed.i], *r[ed.j]);
      }
      const double d = v - u[i];
      loss += std::abs(d);
      if (grad == nullptr || d == 0) continue;
      const double s = d > 0 ? coef : -coef;
      for (int e = 0; e < pg_.num_edges(); ++e) {
        const Edge& ed = pg_.edges()[e];
        if (ed.i == i || ed.j == i) {
          AddSideGrad(e, i, *r[ed.i], *r[ed.j], s, *grad);
        }
      }
    }
    return loss;
  }

  // Sum over the deviation cross product of L_gamma at one profile.
  // deviations[p] holds reach vectors of p's deviations.
  double GammaTerm(const ReachSet& r,
                   const std::vector<std::vector<std::vector<double>>>& dev,
                   double coef, std::vector<double>* grad) const {
    double total = 1;
    for (const auto& d : dev) total *= static_cast<double>(d.size());
    if (total == 0) return 0;
    double loss = 0;
    for (int e = 0; e < pg_.num_edges(); ++e) {
      const Edge& ed = pg_.edges()[e];
      for (int p : {ed.i, ed.j}) {
        const double mult = total / static_cast<double>(dev[p].size());
        const double base = Side(e, p, *r[ed.i], *r[ed.j]);
        double active = 0;
        for (const auto& b : dev[p]) {
          const auto& ri = p == ed.i ? b : *r[ed.i];
          const auto& rj = p == ed.j ? b : *r[ed.j];
          const double x = Side(e, p, ri, rj) - base;
          if (x <= 0) continue;
          loss += mult * x;
          active += 1;
          if (grad) AddSideGrad(e, p, ri, rj, coef * mult, *grad);
        }
        if (grad && active > 0) {
          AddSideGrad(e, p, *r[ed.i], *r[ed.j], -coef * mult * active, *grad);
        }
      }
    }
    return loss;
  }

 private:
  const PolyEfg& pg_;
  int nz_;
};

std::vector<std::vector<double>> ProfileReach(const ExtensiveFormGame& game,
                                              const BehaviorProfile& pi) {
  CheckProfile(game, pi);
  std::vector<std::vector<double>> r;
  for (int i = 0; i < game.num_players(); ++i) {
    r.push_back(PlayerReach(game, i, pi[i]));
  }
  return r;
}

ReachSet Pointers(const std::vector<std::vector<double>>& r) {
  ReachSet out;
  for (const auto& x : r) out.push_back(&x);
  return out;
}

std::vector<std::vector<std::vector<double>>> DeviationReach(
    const ExtensiveFormGame& game, const DeviationSets& deviations) {
  POLYVUL_CHECK_ARG(static_cast<int>(deviations.size()) == game.num_players(),
                    "need one deviation set per player");
  std::vector<std::vector<std::vector<double>>> out(deviations.size());
  for (int p = 0; p < game.num_players(); ++p) {
    for (const auto& s : deviations[p]) {
      CheckStrategy(game, p, s);
      out[p].push_back(PlayerReach(game, p, s));
    }
  }
  return out;
}

// Shared body of BatchLoss and Subgradient.
double EvaluateBatch(const PolyEfg& pg,
                     const std::vector<BehaviorProfile>& batch,
                     const std::vector<BehaviorProfile>& profiles,
                     const DeviationSets& deviations, double lambda,
                     std::vector<double>* grad) {
  POLYVUL_CHECK_ARG(lambda >= 0 && lambda <= 1, "lambda must be in [0, 1]");
  POLYVUL_CHECK_ARG(!profiles.empty(), "neighborhood needs a profile");
  const ExtensiveFormGame& g = pg.game();
  const Objective obj(pg);
  if (grad) grad->assign(obj.num_params(), 0.0);
  double loss = 0;
  if (!batch.empty() && lambda > 0) {
    const double coef = lambda / static_cast<double>(batch.size());
    for (const auto& pi : batch) {
      const auto r = ProfileReach(g, pi);
      const auto u = ExpectedUtility(g, pi);
      loss += coef * obj.DeltaTerm(Pointers(r), u, coef, grad);
    }
  }
  if (lambda < 1) {
    const auto dev = DeviationReach(g, deviations);
    const double coef = (1 - lambda) / static_cast<double>(profiles.size());
    for (const auto& pi : profiles) {
      const auto r = ProfileReach(g, pi);
      loss += coef * obj.GammaTerm(Pointers(r), dev, coef, grad);
    }
  }
  return loss;
}

// Weights whose best response is i's best response in subgame e against
// the reach `rj` of the other endpoint.
std::vector<double> SubgameWeights(const PolyEfg& pg, int e, int player,
                                   const std::vector<double>& other) {
  const int nz = pg.game().num_terminals();
  std::vector<double> w(nz);
  const auto& pc = pg.chance_reach(e);
  for (int z = 0; z < nz; ++z) {
    w[z] = other[z] * pc[z] * pg.TerminalValue(e, player, z);
  }
  return w;
}

DeviationSets BestResponsesFromReach(
    const PolyEfg& pg, const std::vector<std::vector<std::vector<double>>>& r) {
  const ExtensiveFormGame& g = pg.game();
  const int n = g.num_players();
  DeviationSets out(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const int e = i == j ? -1 : pg.EdgeIndex(i, j);
      if (e < 0) continue;
      for (const auto& profile_reach : r) {
        BestResponse br = BestResponseToWeights(
            g, i, SubgameWeights(pg, e, i, profile_reach[j]));
        if (std::find(out[i].begin(), out[i].end(), br.strategy) ==
            out[i].end()) {
          out[i].push_back(std::move(br.strategy));
        }
      }
    }
  }
  return out;
}

double StabilityFromReach(
    const PolyEfg& pg, const std::vector<std::vector<std::vector<double>>>& r) {
  const ExtensiveFormGame& g = pg.game();
  const int n = g.num_players();
  const Objective obj(pg);
  double gamma = 0;
  for (const auto& pr : r) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const int e = i == j ? -1 : pg.EdgeIndex(i, j);
        if (e < 0) continue;
        const Edge& ed = pg.edges()[e];
        const double best =
            BestResponseToWeights(g, i, SubgameWeights(pg, e, i, pr[j])).value;
        gamma = std::max(gamma, best - obj.Side(e, i, pr[ed.i], pr[ed.j]));
      }
    }
  }
  return gamma;
}

}  // namespace

double LossDelta(const PolyEfg& pg, const BehaviorProfile& profile) {
  const auto r = ProfileReach(pg.game(), profile);
  return Objective(pg).DeltaTerm(Pointers(r),
                                 ExpectedUtility(pg.game(), profile), 1,
                                 nullptr);
}

double LossGamma(const PolyEfg& pg, const BehaviorProfile& profile,
                 const BehaviorProfile& deviation) {
  const ExtensiveFormGame& g = pg.game();
  const auto r = ProfileReach(g, profile);
  DeviationSets d;
  for (const auto& s : deviation) d.push_back({s});
  return Objective(pg).GammaTerm(Pointers(r), DeviationReach(g, d), 1,
                                 nullptr);
}

double BatchLoss(const PolyEfg& pg, const std::vector<BehaviorProfile>& batch,
                 const std::vector<BehaviorProfile>& profiles,
                 const DeviationSets& deviations, double lambda) {
  return EvaluateBatch(pg, batch, profiles, deviations, lambda, nullptr);
}

std::vector<double> Subgradient(const PolyEfg& pg,
                                const std::vector<BehaviorProfile>& batch,
                                const std::vector<BehaviorProfile>& profiles,
                                const DeviationSets& deviations,
                                double lambda) {
  std::vector<double> grad;
  EvaluateBatch(pg, batch, profiles, deviations, lambda, &grad);
  return grad;
}

DeviationSets GetBestResponses(const PolyEfg& pg,
                               const std::vector<BehaviorProfile>& profiles) {
  POLYVUL_CHECK_ARG(!profiles.empty(), "neighborhood needs a profile");
  std::vector<std::vector<std::vector<double>>> r;
  for (const auto& pi : profiles) r.push_back(ProfileReach(pg.game(), pi));
  return BestResponsesFromReach(pg, r);
}

double SubgameStability(const PolyEfg& pg,
                        const std::vector<BehaviorProfile>& profiles) {
  std::vector<std::vector<std::vector<double>>> r;
  for (const auto& pi : profiles) r.push_back(ProfileReach(pg.game(), pi));
  return StabilityFromReach(pg, r);
}

double NeighborhoodDelta(const PolyEfg& pg, const Neighborhood& neighborhood) {
  double delta = 0;
  for (int64_t k = 0; k < neighborhood.CrossSize(); ++k) {
    const BehaviorProfile pi = neighborhood.CrossProfile(k);
    const auto u = ExpectedUtility(pg.game(), pi);
    const auto v = pg.GlobalUtility(pi);
    for (size_t i = 0; i < u.size(); ++i) {
      delta = std::max(delta, std::abs(u[i] - v[i]));
    }
  }
  return delta;
}

SgResult SgDecompose(std::shared_ptr<const ExtensiveFormGame> game,
                     const Neighborhood& neighborhood, const SgConfig& config) {
  config.Validate();
  POLYVUL_CHECK_ARG(game != nullptr, "game is null");
  POLYVUL_CHECK_ARG(game->has_perfect_recall(), "game needs perfect recall");
  POLYVUL_CHECK_ARG(neighborhood.num_players() == game->num_players(),
                    "neighborhood does not match the game");
  const ExtensiveFormGame& g = *game;
  const int n = g.num_players();
  SgResult result{PolyEfg(game), 0, 0, {}};
  PolyEfg& pg = result.poly_efg;
  const Objective obj(pg);

  // Reach vectors of the neighborhood, indexed [profile][player]; the
  // per-player sets are the profile components.
  const int k = static_cast<int>(neighborhood.profiles().size());
  std::vector<std::vector<std::vector<double>>> reach(k);
  for (int p = 0; p < k; ++p) {
    reach[p] = ProfileReach(g, neighborhood.profiles()[p]);
  }
  const int64_t cross = neighborhood.CrossSize();
  std::vector<std::vector<double>> utility(cross);
  std::vector<ReachSet> cross_reach(cross);
  for (int64_t c = 0; c < cross; ++c) {
    const auto idx = neighborhood.CrossIndices(c);
    for (int i = 0; i < n; ++i) cross_reach[c].push_back(&reach[idx[i]][i]);
    utility[c] = ExpectedUtilityFromReach(g, cross_reach[c]);
  }
  std::vector<ReachSet> base_reach;
  for (const auto& r : reach) base_reach.push_back(Pointers(r));

  Rng rng(config.seed);
  std::vector<int64_t> order(cross);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> params = StackParameters(pg);
  std::vector<double> grad;
  for (int epoch = 1; epoch <= config.epochs; ++epoch) {
    const DeviationSets dev_sets = BestResponsesFromReach(pg, reach);
    const auto dev = DeviationReach(g, dev_sets);
    const double eta = LearningRate(config, epoch);
    rng.Shuffle(order);
    double epoch_loss = 0;
    int batches = 0;
    for (int64_t start = 0; start < cross; start += config.batch_size) {
      const int64_t end = std::min<int64_t>(cross, start + config.batch_size);
      grad.assign(obj.num_params(), 0.0);
      double loss = 0;
      if (config.lambda > 0) {
        const double coef = config.lambda / static_cast<double>(end - start);
        for (int64_t b = start; b < end; ++b) {
          loss += coef * obj.DeltaTerm(cross_reach[order[b]],
                                       utility[order[b]], coef, &grad);
        }
      }
      if (config.lambda < 1) {
        const double coef = (1 - config.lambda) / k;
        for (const auto& r : base_reach) {
          loss += coef * obj.GammaTerm(r, dev, coef, &grad);
        }
      }
      epoch_loss += loss;
      ++batches;
      double norm = 0;
      for (double x : grad) norm += x * x;
      norm = std::sqrt(norm);
      if (norm <= 1e-12) continue;
      for (size_t p = 0; p < params.size(); ++p) {
        params[p] -= eta * grad[p] / norm;
      }
      SetParameters(pg, params);
    }
    result.epoch_loss.push_back(epoch_loss / batches);
  }

  for (int64_t c = 0; c < cross; ++c) {
    for (int i = 0; i < n; ++i) {
      double v = 0;
      for (int e = 0; e < pg.num_edges(); ++e) {
        const Edge& ed = pg.edges()[e];
        if (ed.i == i || ed.j == i) {
          v += obj.Side(e, i, *cross_reach[c][ed.i], *cross_reach[c][ed.j]);
        }
      }
      result.delta = std::max(result.delta, std::abs(v - utility[c][i]));
    }
  }
  result.gamma = StabilityFromReach(pg, reach);
  return result;
}

}  // namespace polyvul
