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

#include "coordlab/mini_hanabi.h"

#include <vector>

#include "coordlab/error.h"
#include "coordlab/rng.h"
#include "doctest.h"

namespace coordlab {
namespace {

// Desk deck in a fixed order: hands are the first 2H cards.
std::vector<Card> Deck(std::vector<Card> front, const MiniHanabi& game) {
  std::vector<Card> rest = game.ShuffledDeck(0);
  for (const Card& c : front) {
    auto it = std::find(rest.begin(), rest.end(), c);
    REQUIRE(it != rest.end());
    rest.erase(it);
  }
  front.insert(front.end(), rest.begin(), rest.end());
  return front;
}

int PlayRandom(HanabiState& state, Rng& rng) {
  const auto legal = state.LegalActions();
  const int a = legal[rng.UniformInt(static_cast<int>(legal.size()))];
  state.Apply(a);
  return a;
}

TEST_CASE("config validation and layout") {
  MiniHanabiConfig config;
  CHECK(config.DeckSize() == 14);
  CHECK(config.MaxScore() == 6);
  const MiniHanabi game(config);
  CHECK(game.NumActions() == 9);
  CHECK(game.ActionName(0) == "C1");
  CHECK(game.ActionName(2) == "R1");
  CHECK(game.ActionName(5) == "D1");
  CHECK(game.ActionName(8) == "P2");
  for (int a = 0; a < game.NumActions(); ++a) {
    CHECK(game.MoveToAction(game.ActionToMove(a)) == a);
  }
  MiniHanabiConfig bad = config;
  bad.copies = {1, 1};
  CHECK_THROWS_AS(MiniHanabi{bad}, CoordError);
  bad = config;
  bad.hint_tokens = 0;
  CHECK_THROWS_AS(MiniHanabi{bad}, CoordError);
  bad = config;
  bad.hand_size = 8;
  CHECK_THROWS_AS(MiniHanabi{bad}, CoordError);
}

TEST_CASE("hints mark exactly the matching cards") {
  const MiniHanabi game{MiniHanabiConfig{}};
  HanabiState state =
      game.NewGameWithDeck(Deck({{0, 0}, {1, 1}, {1, 0}, {0, 2}}, game));
  CHECK(state.hand(1)[0] == Card{1, 0});
  CHECK_FALSE(state.IsLegal(game.MoveToAction({MoveType::kDiscard, 0})));
  state.Apply(game.MoveToAction({MoveType::kHintColor, 1}));
  CHECK(state.knowledge(1)[0].color == 1);
  CHECK(state.knowledge(1)[0].rank == -1);
  CHECK(state.knowledge(1)[1].color == -1);
  CHECK(state.hint_tokens() == 2);
  CHECK(state.Observe(1).own_knowledge == state.knowledge(1));
  // A rank hint matching nothing is illegal.
  CHECK_FALSE(state.IsLegal(game.MoveToAction({MoveType::kHintRank, 2})));
  CHECK(state.IsLegal(game.MoveToAction({MoveType::kHintRank, 0})));
}

TEST_CASE("misplays cost lives and zero the score under zero-on-bomb") {
  MiniHanabiConfig config;
  config.life_tokens = 1;
  for (RewardScheme scheme : {RewardScheme::kZeroOnBomb, RewardScheme::kKeepOnBomb}) {
    config.reward_scheme = scheme;
    const MiniHanabi game(config);
    // p0: (0,0) (1,0); p1: (0,1) (1,2).
    HanabiState state =
        game.NewGameWithDeck(Deck({{0, 0}, {1, 0}, {0, 1}, {1, 2}}, game));
    double total = state.Apply(game.MoveToAction({MoveType::kPlay, 0}));
    total += state.Apply(game.MoveToAction({MoveType::kPlay, 0}));
    CHECK(state.fireworks() == std::vector<int>{2, 0});
    CHECK(total == 2.0);
    CHECK(state.CheckInvariants() == "");
    // p0 plays (1,0), then p1 misplays (1,2).
    total += state.Apply(game.MoveToAction({MoveType::kPlay, 0}));
    CHECK(state.FireworksTotal() == 3);
    CHECK_THROWS_AS(Score(state, scheme), CoordError);
    total += state.Apply(game.MoveToAction({MoveType::kPlay, 0}));
    CHECK(state.life_tokens() == 0);
    CHECK(state.IsTerminal());
    CHECK(Score(state, RewardScheme::kKeepOnBomb) == 3);
    CHECK(Score(state, RewardScheme::kZeroOnBomb) == 0);
    CHECK(total == Score(state, scheme));
    CHECK(state.CheckInvariants() == "");
  }
}

TEST_CASE("immediate bomb-out scores zero") {
  const MiniHanabi game{MiniHanabiConfig{}};
  HanabiState state =
      game.NewGameWithDeck(Deck({{0, 1}, {1, 0}, {0, 0}, {1, 2}}, game));
  state.Apply(game.MoveToAction({MoveType::kPlay, 0}));
  CHECK(state.IsTerminal());
  CHECK(Score(state, RewardScheme::kKeepOnBomb) == 0);
  CHECK(Score(state, RewardScheme::kZeroOnBomb) == 0);
}

TEST_CASE("deck end gives each player one more turn") {
  MiniHanabiConfig config;
  config.life_tokens = 3;
  const MiniHanabi game(config);
  HanabiState state = game.NewGame(4);
  const int discard = game.MoveToAction({MoveType::kDiscard, 0});
  const int hint = game.MoveToAction({MoveType::kHintColor, 0});
  Rng rng(1);
  int turns = 0;
  while (!state.deck().empty()) {
    const bool can_discard = state.IsLegal(discard);
    if (can_discard) {
      state.Apply(discard);
    } else if (state.IsLegal(hint)) {
      state.Apply(hint);
    } else {
      state.Apply(game.MoveToAction({MoveType::kHintColor, 1}));
    }
    ++turns;
  }
  CHECK_FALSE(state.IsTerminal());
  PlayRandom(state, rng);
  if (!state.IsTerminal()) {
    PlayRandom(state, rng);
    CHECK(state.IsTerminal());
  }
}

TEST_CASE("playing every card in order reaches the maximum") {
  MiniHanabiConfig config;
  config.hand_size = 1;
  const MiniHanabi game(config);
  std::vector<Card> order{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {0, 2}, {1, 2}};
  HanabiState state = game.NewGameWithDeck(Deck(order, game));
  double total = 0.0;
  for (int k = 0; k < 6; ++k) {
    REQUIRE_FALSE(state.IsTerminal());
    total += state.Apply(game.MoveToAction({MoveType::kPlay, 0}));
  }
  CHECK(state.IsTerminal());
  CHECK(Score(state, RewardScheme::kZeroOnBomb) == 6);
  CHECK(total == 6.0);
}

TEST_CASE("random play preserves invariants and telescopes rewards") {
  for (RewardScheme scheme : {RewardScheme::kZeroOnBomb, RewardScheme::kKeepOnBomb}) {
    MiniHanabiConfig config;
    config.reward_scheme = scheme;
    const MiniHanabi game(config);
    for (int e = 0; e < 10'000; ++e) {
      HanabiState state = game.NewGame(e);
      Rng rng = Rng::ForEpisode(99, e);
      double total = 0.0;
      int last_total = 0;
      while (!state.IsTerminal()) {
        const auto legal = state.LegalActions();
        REQUIRE_FALSE(legal.empty());
        if (state.hint_tokens() == 0) {
          for (int a : legal) REQUIRE(a >= config.colors + config.ranks);
        }
        total += state.Apply(legal[rng.UniformInt(static_cast<int>(legal.size()))]);
        REQUIRE(state.CheckInvariants() == "");
        REQUIRE(state.FireworksTotal() >= last_total);
        last_total = state.FireworksTotal();
      }
      REQUIRE(total == Score(state, scheme));
    }
  }
}

TEST_CASE("observations hide the observer's own cards") {
  const MiniHanabi game{MiniHanabiConfig{}};
  // Same everything except player 0's hidden cards.
  HanabiState a = game.NewGameWithDeck(Deck({{0, 0}, {0, 1}, {1, 0}, {1, 1}}, game));
  HanabiState b = game.NewGameWithDeck(Deck({{0, 2}, {1, 2}, {1, 0}, {1, 1}}, game));
  CHECK(a.Observe(0) == b.Observe(0));
  CHECK(a.Observe(0).ToString() == b.Observe(0).ToString());
  CHECK_FALSE(a.Observe(1) == b.Observe(1));
}

TEST_CASE("color symmetries") {
  MiniHanabiConfig config;
  const MiniHanabi game(config);
  const SymmetryGroup colors = HanabiColorSymmetries(game);
  CHECK(colors.Size() == 2);
  const Relabeling swap = colors.Realize(Permutation::Transposition(2, 0, 1));
  CHECK(swap.Action(0, 0) == 1);
  CHECK(swap.Action(0, 2) == 2);
  CHECK(VerifyEquivalenceSampled(game, Relabeling::Identity(), 100, 1).passed);
  CHECK(VerifyEquivalenceSampled(game, swap, 100, 1).passed);

  const Relabeling ranks = game.RankRelabeling(Permutation::Transposition(3, 1, 2));
  const VerificationReport bad = VerifyEquivalenceSampled(game, ranks, 100, 1);
  CHECK_FALSE(bad.passed);
  CHECK(bad.condition == "reward");
  const Relabeling low = game.RankRelabeling(Permutation::Transposition(3, 0, 1));
  CHECK_FALSE(VerifyEquivalenceSampled(game, low, 100, 1).passed);

  MiniHanabiConfig one = config;
  one.colors = 1;
  CHECK(HanabiColorSymmetries(MiniHanabi(one)).Size() == 1);
  MiniHanabiConfig three = config;
  three.colors = 3;
  const MiniHanabi game3(three);
  const Relabeling cycle = HanabiColorSymmetries(game3).Realize(
      Permutation(std::vector<int>{1, 2, 0}));
  CHECK(game3.ActionName(cycle.Action(0, game3.MoveToAction({MoveType::kHintColor, 0}))) ==
        "C2");
  CHECK(VerifyEquivalenceSampled(game3, cycle, 50, 2).passed);
  CHECK(CheckGroupAxioms(HanabiColorSymmetries(game3)).passed);
}

TEST_CASE("decks are reproducible from the seed") {
  const MiniHanabi game{MiniHanabiConfig{}};
  CHECK(game.ShuffledDeck(7) == game.ShuffledDeck(7));
  CHECK_FALSE(game.ShuffledDeck(7) == game.ShuffledDeck(8));
}

}  // namespace
}  // namespace coordlab
