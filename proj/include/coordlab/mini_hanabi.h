// Copyright 2026 The Coordlab Authors
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

// Two-player Hanabi with a configurable deck. Players see the partner's hand
// but not their own; hints reveal color or rank of every matching card in the
// partner's hand and cost a hint token; misplays cost a life token.

#ifndef COORDLAB_MINI_HANABI_H_
#define COORDLAB_MINI_HANABI_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "coordlab/decpomdp.h"
#include "coordlab/symmetry.h"

namespace coordlab {

enum class RewardScheme {
  // Losing the last life token scores the game as 0.
  kZeroOnBomb,
  // Points already on the fireworks are kept after a bomb-out.
  kKeepOnBomb,
};

std::string RewardSchemeName(RewardScheme scheme);
RewardScheme ParseRewardScheme(const std::string& name);

struct MiniHanabiConfig {
  int colors = 2;
  int ranks = 3;
  int hand_size = 2;
  std::vector<int> copies = {3, 2, 2};
  int hint_tokens = 3;
  int life_tokens = 1;
  RewardScheme reward_scheme = RewardScheme::kZeroOnBomb;

  void Validate() const;
  int DeckSize() const;
  int MaxScore() const { return colors * ranks; }
  std::string ToString() const;
};

struct Card {
  int color = -1;
  int rank = -1;

  bool IsValid() const { return color >= 0 && rank >= 0; }
  auto operator<=>(const Card&) const = default;
  // "0:1" style: color index then rank index (0-based).
  std::string ToString() const;
};

// Hinted facts about one card; -1 when not revealed.
struct CardKnowledge {
  int color = -1;
  int rank = -1;
  auto operator<=>(const CardKnowledge&) const = default;
};

enum class MoveType { kHintColor, kHintRank, kDiscard, kPlay };

struct Move {
  MoveType type;
  int value;  // color, rank, or hand slot
  auto operator<=>(const Move&) const = default;
};

// What one player can see. Never contains the observer's own cards.
struct HanabiObservation {
  int observer = 0;
  int current_player = 0;
  std::vector<CardKnowledge> own_knowledge;
  std::vector<Card> partner_hand;
  std::vector<CardKnowledge> partner_knowledge;
  std::vector<int> fireworks;
  int hint_tokens = 0;
  int life_tokens = 0;
  int deck_size = 0;
  std::vector<Card> discards;
  // Partner's most recent action (kNoAction before their first move) and
  // the card it revealed for plays and discards.
  int partner_last_action = kNoAction;
  Card partner_last_card;
  bool terminal = false;

  bool operator==(const HanabiObservation&) const = default;
  std::string ToString() const;
};

class HanabiState;

class MiniHanabi {
 public:
  explicit MiniHanabi(MiniHanabiConfig config);

  const MiniHanabiConfig& config() const { return config_; }

  // Actions are ordered hints first, then discards, then plays:
  // [hint color 0..C-1][hint rank 0..R-1][discard 0..H-1][play 0..H-1].
  int NumActions() const;
  Move ActionToMove(int action) const;
  int MoveToAction(const Move& move) const;
  // "C1".."CC", "R1".."RR", "D1".."DH", "P1".."PH" (1-based labels).
  std::string ActionName(int action) const;

  std::vector<Card> ShuffledDeck(uint64_t deck_seed) const;
  HanabiState NewGame(uint64_t deck_seed) const;
  // Deals from the front of `deck`, which must be a permutation of the full
  // card multiset of some (possibly relabeled) deck of the right size.
  HanabiState NewGameWithDeck(std::vector<Card> deck) const;

  // Label permutations of colors (and, for testing the rules' asymmetry,
  // ranks), realized as relabelings that also remap hint actions.
  Relabeling ColorRelabeling(const Permutation& colors) const;
  Relabeling RankRelabeling(const Permutation& ranks) const;
  Card RelabelCard(const Relabeling& phi, const Card& card) const;
  HanabiObservation RelabelObservation(const Relabeling& phi,
                                       const HanabiObservation& obs) const;
  Realizer MakeRealizer(const std::string& target) const;

 private:
  MiniHanabiConfig config_;
};

// S_C acting on card colors; generator-free orbit group with uniform sampler.
SymmetryGroup HanabiColorSymmetries(const MiniHanabi& game);
// S_R on ranks. Not a symmetry of the game; used to exercise verification.
SymmetryGroup HanabiRankPermutations(const MiniHanabi& game);

class HanabiState {
 public:
  HanabiState(const MiniHanabi* game, std::vector<Card> deck);

  const MiniHanabi& game() const { return *game_; }
  int current_player() const { return current_player_; }
  bool IsTerminal() const { return terminal_; }
  bool BombedOut() const { return life_tokens_ == 0; }
  int turn() const { return turn_; }
  int hint_tokens() const { return hint_tokens_; }
  int life_tokens() const { return life_tokens_; }
  const std::vector<int>& fireworks() const { return fireworks_; }
  const std::vector<Card>& hand(int player) const { return hands_[player]; }
  const std::vector<CardKnowledge>& knowledge(int player) const {
    return knowledge_[player];
  }
  const std::vector<Card>& deck() const { return deck_; }
  const std::vector<Card>& discards() const { return discards_; }
  const std::vector<Card>& played() const { return played_; }
  int FireworksTotal() const;

  std::vector<bool> LegalMask() const;
  std::vector<int> LegalActions() const;
  bool IsLegal(int action) const;
  // Explains why `action` is illegal, or returns "".
  std::string IllegalReason(int action) const;

  // Applies the current player's action and returns the step reward under
  // the configured reward scheme. Throws on illegal actions.
  double Apply(int action);

  HanabiObservation Observe(int player) const;

  // Card conservation, firework prefixes, token bounds, terminal condition.
  // Returns "" when all hold.
  std::string CheckInvariants() const;

 private:
  void Draw(int player);
  void EndTurn();

  const MiniHanabi* game_;
  std::vector<Card> initial_deck_;
  std::vector<Card> deck_;
  std::array<std::vector<Card>, kNumPlayers> hands_;
  std::array<std::vector<CardKnowledge>, kNumPlayers> knowledge_;
  std::vector<int> fireworks_;
  std::vector<Card> discards_;
  std::vector<Card> played_;
  int hint_tokens_;
  int life_tokens_;
  int current_player_ = 0;
  int turn_ = 0;
  // Turns left once the deck is empty; -1 while cards remain.
  int final_turns_ = -1;
  bool terminal_ = false;
  std::array<int, kNumPlayers> last_action_{kNoAction, kNoAction};
  std::array<Card, kNumPlayers> last_card_{};
};

// Final score of a terminal state: keep-on-bomb is the fireworks total;
// zero-on-bomb is 0 after losing every life token. Throws on non-terminal
// states.
int Score(const HanabiState& state, RewardScheme scheme);

// Runs `episodes` chance-coupled pairs of games: the canonical game on deck D
// and the relabeled game on phi(D), driven by uniform-random canonical actions
// executed as phi(a) in the relabeled game. Passes iff legality, rewards and
// both players' observations of the relabeled run are the phi-images of the
// canonical run at every step.
VerificationReport VerifyEquivalenceSampled(const MiniHanabi& game,
                                            const Relabeling& phi,
                                            int episodes, uint64_t seed);

}  // namespace coordlab

#endif  // COORDLAB_MINI_HANABI_H_
