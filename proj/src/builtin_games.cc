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

#include "builtin_games.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "errors.h"

namespace polyvul {

namespace {

constexpr int kNumLeducRanks = 4;
constexpr int kNumLeducSuits = 2;
constexpr int kLeducAnte = 1;
constexpr int kLeducMaxRaises = 2;
constexpr std::array<int, 2> kLeducRaiseSize = {2, 4};

void CheckBeta(double beta) {
  POLYVUL_CHECK_ARG(std::isfinite(beta) && beta > 0, "beta must be positive");
}

}  // namespace

NormalFormGame CoordinationGame() {
  return NormalFormGame({2, 2}, {1, 1, 0, 0, 0, 0, 1, 1});
}

NormalFormGame OffenseDefenseGame(double beta) {
  CheckBeta(beta);
  // Player 0: 0 = relax, 1 = defend. Player 1: 0 = attack 0, 1 = attack 2.
  // Player 2: 0 = attack 0, 1 = attack 1.
  std::vector<double> utils;
  for (int a0 = 0; a0 < 2; ++a0) {
    for (int a1 = 0; a1 < 2; ++a1) {
      for (int a2 = 0; a2 < 2; ++a2) {
        const double u01 = (a0 == 0 && a1 == 0) ? -beta : 0.0;
        const double u02 = (a0 == 0 && a2 == 0) ? -beta : 0.0;
        // Edge (1, 2): an attacker gains when its target is busy elsewhere.
        double u12 = 0.0;
        if (a1 == 1 && a2 == 0) u12 = beta;
        if (a1 == 0 && a2 == 1) u12 = -beta;
        utils.push_back(u01 + u02);
        utils.push_back(-u01 + u12);
        utils.push_back(-u02 - u12);
      }
    }
  }
  return NormalFormGame({2, 2, 2}, std::move(utils));
}

NormalFormGame AppendixAGame() {
  return NormalFormGame({2, 2}, {1, 1, -1, -1, -1, -1, 0, 0});
}

ExtensiveFormGame BadCardGame(double beta, bool pruned) {
  CheckBeta(beta);
  constexpr int kCall = 0;
  constexpr int kFold = 1;
  EfgBuilder b(3, pruned ? "bad_card_pruned" : "bad_card");
  const int root = b.AddChance(-1, 0, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (int bad = 0; bad < 3; ++bad) {
    int good[2];
    for (int i = 0, k = 0; i < 3; ++i) {
      if (i != bad) good[k++] = i;
    }
    const std::string deal = std::to_string(bad);
    const int h = b.AddDecision(root, bad, bad, "p" + deal + ":bad", 2);
    const int n_good = pruned ? 1 : 2;
    const int h1 = b.AddDecision(h, kCall, good[0],
                                 "p" + std::to_string(good[0]) + ":d" + deal,
                                 n_good);
    for (int a1 = 0; a1 < n_good; ++a1) {
      const int h2 = b.AddDecision(
          h1, a1, good[1],
          "p" + std::to_string(good[1]) + ":d" + deal + (a1 == kCall ? "c" : "f"),
          n_good);
      for (int a2 = 0; a2 < n_good; ++a2) {
        // Fixed table rather than pot accounting: a lone calling good card
        // takes beta, two callers take beta/2 each, the bad card pays beta.
        std::vector<double> u(3, 0.0);
        const bool c1 = a1 == kCall;
        const bool c2 = a2 == kCall;
        if (!c1 && !c2) {
          u[bad] = beta;
          u[good[0]] = -beta / 2;
          u[good[1]] = -beta / 2;
        } else {
          const double share = (c1 && c2) ? beta / 2 : beta;
          u[good[0]] = c1 ? share : 0.0;
          u[good[1]] = c2 ? share : 0.0;
          u[bad] = -beta;
        }
        b.AddTerminal(h2, a2, u);
      }
    }
    b.AddTerminal(h, kFold, std::vector<double>{0, 0, 0});
  }
  return std::move(b).Build();
}

ExtensiveFormGame TinyHanabiGame() {
  EfgBuilder b(3, "tiny_hanabi");
  const char kHand[2] = {'A', 'B'};
  const char kGuess[2] = {'a', 'b'};
  const int root = b.AddChance(-1, 0, {0.5, 0.5});
  for (int hand = 0; hand < 2; ++hand) {
    const int h0 = b.AddDecision(root, hand, 0, std::string("p0:") + kHand[hand], 2);
    for (int sig = 0; sig < 2; ++sig) {
      const std::string s = "s" + std::to_string(sig + 1);
      const int h1 = b.AddDecision(h0, sig, 1, "p1:" + s, 2);
      for (int g1 = 0; g1 < 2; ++g1) {
        const int h2 = b.AddDecision(h1, g1, 2, "p2:" + s + kGuess[g1], 2);
        for (int g2 = 0; g2 < 2; ++g2) {
          const double v = (g1 == hand && g2 == hand) ? 1.0 : 0.0;
          b.AddTerminal(h2, g2, std::vector<double>{v, v, v});
        }
      }
    }
  }
  return std::move(b).Build();
}

namespace {

struct KuhnBuilder {
  int n;
  EfgBuilder* b;
  std::vector<int> cards;

  void Deal(int parent, int action, std::vector<bool>& used) {
    const int k = static_cast<int>(cards.size());
    if (k == n) {
      std::string history;
      Bet(parent, action, history, 0, -1);
      return;
    }
    const int remaining = n + 1 - k;
    const int h = b->AddChance(parent, action,
                               std::vector<double>(remaining, 1.0 / remaining));
    int slot = 0;
    for (int c = 0; c <= n; ++c) {
      if (used[c]) continue;
      used[c] = true;
      cards.push_back(c);
      Deal(h, slot++, used);
      cards.pop_back();
      used[c] = false;
    }
  }

  void Bet(int parent, int action, std::string& history, int player,
           int first_bet) {
    const int len = static_cast<int>(history.size());
    const bool done = (first_bet < 0 && len == n) ||
                      (first_bet >= 0 && len == first_bet + n);
    if (done) {
      std::vector<double> u(n, 0.0);
      int best = -1;
      double pot = 0;
      for (int i = 0; i < n; ++i) {
        bool bet = false;
        for (int t = i; t < len; t += n) bet |= history[t] == 'b';
        const double paid = 1.0 + (bet ? 1.0 : 0.0);
        u[i] = -paid;
        pot += paid;
        const bool contender = first_bet < 0 || bet;
        if (contender && (best < 0 || cards[i] > cards[best])) best = i;
      }
      u[best] += pot;
      b->AddTerminal(parent, action, u);
      return;
    }
    const int h = b->AddDecision(
        parent, action, player,
        "p" + std::to_string(player) + ":" + std::to_string(cards[player]) +
            ":" + history,
        2);
    for (int a = 0; a < 2; ++a) {
      history.push_back(a == 0 ? 'p' : 'b');
      const int fb = (first_bet < 0 && a == 1) ? len : first_bet;
      Bet(h, a, history, (player + 1) % n, fb);
      history.pop_back();
    }
  }
};

struct LeducState {
  std::vector<int> ranks;
  int public_rank = -1;
  int round = 0;
  std::vector<int> contrib;
  std::vector<bool> folded;
  std::string history;  // rounds separated by '/'
};

class LeducBuilder {
 public:
  LeducBuilder(int n, EfgBuilder* b) : n_(n), b_(b) {}

  void Deal(int parent, int action, LeducState& s) {
    std::array<int, kNumLeducRanks> left;
    left.fill(kNumLeducSuits);
    for (int r : s.ranks) --left[r];
    if (s.public_rank >= 0) --left[s.public_rank];
    int total = 0;
    std::vector<double> probs;
    std::vector<int> outcome;
    for (int r = 0; r < kNumLeducRanks; ++r) total += left[r];
    for (int r = 0; r < kNumLeducRanks; ++r) {
      if (left[r] == 0) continue;
      probs.push_back(static_cast<double>(left[r]) / total);
      outcome.push_back(r);
    }
    const int h = b_->AddChance(parent, action, probs);
    for (size_t k = 0; k < outcome.size(); ++k) {
      if (static_cast<int>(s.ranks.size()) < n_) {
        s.ranks.push_back(outcome[k]);
        if (static_cast<int>(s.ranks.size()) < n_) {
          Deal(h, static_cast<int>(k), s);
        } else {
          StartRound(h, static_cast<int>(k), s);
        }
        s.ranks.pop_back();
      } else {
        s.public_rank = outcome[k];
        s.history.push_back('/');
        s.history.push_back(static_cast<char>('0' + outcome[k]));
        s.history.push_back('/');
        StartRound(h, static_cast<int>(k), s);
        s.history.resize(s.history.size() - 3);
        s.public_rank = -1;
      }
    }
  }

 private:
  void StartRound(int parent, int action, LeducState& s) {
    std::vector<bool> to_act(n_);
    for (int i = 0; i < n_; ++i) to_act[i] = !s.folded[i];
    Act(parent, action, s, NextActor(s, -1, to_act), to_act,
        *std::max_element(s.contrib.begin(), s.contrib.end()), 0);
  }

  int NextActor(const LeducState& s, int last,
                const std::vector<bool>& to_act) const {
    for (int k = 1; k <= n_; ++k) {
      const int i = ((last < 0 ? -1 : last) + k + n_) % n_;
      if (!s.folded[i] && to_act[i]) return i;
    }
    return -1;
  }

  void Act(int parent, int action, LeducState& s, int player,
           std::vector<bool> to_act, int max_bet, int raises) {
    int active = 0;
    for (int i = 0; i < n_; ++i) active += !s.folded[i];
    if (active == 1) {
      Terminal(parent, action, s);
      return;
    }
    if (player < 0) {
      if (s.round == 0) {
        s.round = 1;
        Deal(parent, action, s);
        s.round = 0;
      } else {
        Terminal(parent, action, s);
      }
      return;
    }
    std::vector<char> legal;
    if (s.contrib[player] < max_bet) legal.push_back('f');
    legal.push_back('c');
    if (raises < kLeducMaxRaises) legal.push_back('r');

    std::string key = "p" + std::to_string(player) + ":" +
                      std::to_string(s.ranks[player]) + ":" + s.history;
    const int h = b_->AddDecision(parent, action, player, key,
                                  static_cast<int>(legal.size()));
    for (size_t a = 0; a < legal.size(); ++a) {
      const char m = legal[a];
      std::vector<bool> next_to_act = to_act;
      next_to_act[player] = false;
      const int old_contrib = s.contrib[player];
      int next_max = max_bet;
      int next_raises = raises;
      if (m == 'f') {
        s.folded[player] = true;
      } else if (m == 'c') {
        s.contrib[player] = max_bet;
      } else {
        next_max = max_bet + kLeducRaiseSize[s.round];
        s.contrib[player] = next_max;
        ++next_raises;
        for (int i = 0; i < n_; ++i) {
          if (i != player && !s.folded[i]) next_to_act[i] = true;
        }
      }
      s.history.push_back(m);
      Act(h, static_cast<int>(a), s, NextActor(s, player, next_to_act),
          next_to_act, next_max, next_raises);
      s.history.pop_back();
      s.contrib[player] = old_contrib;
      if (m == 'f') s.folded[player] = false;
    }
  }

  void Terminal(int parent, int action, const LeducState& s) {
    std::vector<double> u(n_);
    double pot = 0;
    for (int i = 0; i < n_; ++i) {
      u[i] = -s.contrib[i];
      pot += s.contrib[i];
    }
    std::vector<int> winners;
    int best = -1;
    for (int i = 0; i < n_; ++i) {
      if (s.folded[i]) continue;
      // Pairs outrank every high card.
      const int strength = s.public_rank >= 0 && s.ranks[i] == s.public_rank
                               ? kNumLeducRanks + s.ranks[i]
                               : s.ranks[i];
      if (strength > best) {
        best = strength;
        winners.assign(1, i);
      } else if (strength == best) {
        winners.push_back(i);
      }
    }
    for (int w : winners) u[w] += pot / winners.size();
    b_->AddTerminal(parent, action, u);
  }

  int n_;
  EfgBuilder* b_;
};

}  // namespace

ExtensiveFormGame KuhnPokerGame(int players) {
  POLYVUL_CHECK_ARG(players == 2 || players == 3,
                    "kuhn_poker supports 2 or 3 players");
  EfgBuilder b(players, "kuhn_poker");
  KuhnBuilder kb{players, &b, {}};
  std::vector<bool> used(players + 1, false);
  kb.Deal(-1, 0, used);
  return std::move(b).Build();
}

ExtensiveFormGame LeducPokerGame(int players) {
  POLYVUL_CHECK_ARG(players == 3, "leduc_poker supports 3 players");
  EfgBuilder b(players, "leduc_poker");
  LeducBuilder lb(players, &b);
  LeducState s;
  s.contrib.assign(players, kLeducAnte);
  s.folded.assign(players, false);
  lb.Deal(-1, 0, s);
  return std::move(b).Build();
}

const std::vector<std::string>& BuiltinNames() {
  static const std::vector<std::string> kNames = {
      "coordination", "offense_defense", "bad_card",    "bad_card_pruned",
      "tiny_hanabi",  "kuhn_poker",      "leduc_poker", "appendix_a"};
  return kNames;
}

AnyGame BuildBuiltin(const std::string& name, const GameParams& params) {
  auto fixed_players = [&](int n) {
    POLYVUL_CHECK_ARG(params.players == 0 || params.players == n,
                      name + " is a " + std::to_string(n) + "-player game");
  };
  if (name == "coordination") {
    fixed_players(2);
    return CoordinationGame();
  }
  if (name == "offense_defense") {
    fixed_players(3);
    return OffenseDefenseGame(params.beta);
  }
  if (name == "appendix_a") {
    fixed_players(2);
    return AppendixAGame();
  }
  if (name == "bad_card" || name == "bad_card_pruned") {
    fixed_players(3);
    return BadCardGame(params.beta, name == "bad_card_pruned");
  }
  if (name == "tiny_hanabi") {
    fixed_players(3);
    return TinyHanabiGame();
  }
  if (name == "kuhn_poker") {
    return KuhnPokerGame(params.players == 0 ? 2 : params.players);
  }
  if (name == "leduc_poker") {
    return LeducPokerGame(params.players == 0 ? 3 : params.players);
  }
  throw ValidationError("unknown game: " + name);
}

ExtensiveFormGame BuildBuiltinTree(const std::string& name,
                                   const GameParams& params) {
  AnyGame g = BuildBuiltin(name, params);
  if (auto* nf = std::get_if<NormalFormGame>(&g)) return OneShotGame(*nf, name);
  return std::get<ExtensiveFormGame>(std::move(g));
}

}  // namespace polyvul
