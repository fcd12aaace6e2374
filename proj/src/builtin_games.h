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

#ifndef POLYVUL_BUILTIN_GAMES_H_
#define POLYVUL_BUILTIN_GAMES_H_

#include <string>
#include <variant>
#include <vector>

#include "efg.h"
#include "normal_form.h"

namespace polyvul {

struct GameParams {
  double beta = 1.0;
  int players = 0;  // 0 selects the game's default
};

using AnyGame = std::variant<NormalFormGame, ExtensiveFormGame>;

// Names: coordination, offense_defense, bad_card, bad_card_pruned,
// tiny_hanabi, kuhn_poker, leduc_poker, appendix_a.
AnyGame BuildBuiltin(const std::string& name, const GameParams& params = {});

// Builtin game as a tree; normal-form games become one-shot trees.
ExtensiveFormGame BuildBuiltinTree(const std::string& name,
                                   const GameParams& params = {});

const std::vector<std::string>& BuiltinNames();

// Two players, actions {a, b}; both get 1 on the diagonal and 0 elsewhere.
NormalFormGame CoordinationGame();

// Player 0 chooses {relax, defend}; players 1 and 2 choose whom to attack
// among the other two (player 1: {a0, a2}, player 2: {a0, a1}). Each pair
// plays a zero-sum matrix worth beta to the attacker of an undefended
// target.
NormalFormGame OffenseDefenseGame(double beta);

// 2x2 symmetric fixture: u(a,a)=1, u(a,b)=u(b,a)=-1, u(b,b)=0.
NormalFormGame AppendixAGame();

// Three bettors and a dealer. The dealer (chance) gives one player a bad
// card; that player calls or folds, then the good-card players call or fold
// in seat order, each seeing earlier moves. With `pruned` the good-card
// players can only call.
ExtensiveFormGame BadCardGame(double beta, bool pruned);

// Chance deals hand A or B; player 0 sees it and sends one of two signals;
// player 1 sees the signal and guesses; player 2 sees the signal and player
// 1's guess and guesses. Everyone gets 1 iff both guesses match the hand.
ExtensiveFormGame TinyHanabiGame();

// n-player Kuhn poker with n+1 cards, ante 1, actions {pass, bet}.
ExtensiveFormGame KuhnPokerGame(int players);

// Leduc hold'em with 4 ranks x 2 suits, ante 1, raise sizes 2 then 4, at
// most two raises per round. Suits never matter, so cards are dealt as ranks
// with their multiplicities as chance weights.
ExtensiveFormGame LeducPokerGame(int players);

}  // namespace polyvul

#endif  // POLYVUL_BUILTIN_GAMES_H_
