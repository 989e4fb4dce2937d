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

#include <algorithm>
#include <numeric>
#include <sstream>

#include "coordlab/error.h"
#include "coordlab/rng.h"
#include "coordlab/text.h"

namespace coordlab {
namespace {

// Separates the deck shuffle from any other stream keyed by the same seed.
constexpr uint64_t kDeckStream = 0x6465636b73687566ULL;

char KnowledgeChar(int value) { return value < 0 ? '?' : char('0' + value); }

std::string CardList(const std::vector<Card>& cards) {
  std::vector<std::string> parts;
  for (const Card& c : cards) parts.push_back(c.ToString());
  return Join(parts, ",");
}

std::string KnowledgeList(const std::vector<CardKnowledge>& knowledge) {
  std::vector<std::string> parts;
  for (const CardKnowledge& k : knowledge) {
    parts.push_back(std::string{KnowledgeChar(k.color), ':',
                                KnowledgeChar(k.rank)});
  }
  return Join(parts, ",");
}

}  // namespace

std::string RewardSchemeName(RewardScheme scheme) {
  return scheme == RewardScheme::kZeroOnBomb ? "zero_on_bomb" : "keep_on_bomb";
}

RewardScheme ParseRewardScheme(const std::string& name) {
  if (name == "zero_on_bomb") return RewardScheme::kZeroOnBomb;
  if (name == "keep_on_bomb") return RewardScheme::kKeepOnBomb;
  Fail("unknown reward scheme '", name,
       "' (expected zero_on_bomb or keep_on_bomb)");
}

void MiniHanabiConfig::Validate() const {
  if (colors < 1 || colors > 9) Fail("colors must be in [1, 9], got ", colors);
  if (ranks < 1 || ranks > 9) Fail("ranks must be in [1, 9], got ", ranks);
  if (hand_size < 1) Fail("hand_size must be positive, got ", hand_size);
  if (static_cast<int>(copies.size()) != ranks) {
    Fail("copies must list one count per rank (", ranks, "), got ",
         copies.size());
  }
  for (int c : copies) {
    if (c < 1) Fail("every rank needs at least one copy");
  }
  if (hint_tokens < 1) Fail("hint_tokens must be at least 1");
  if (life_tokens < 1) Fail("life_tokens must be at least 1");
  if (DeckSize() < 2 * hand_size) {
    Fail("deck of ", DeckSize(), " cards cannot deal two hands of ",
         hand_size);
  }
}

int MiniHanabiConfig::DeckSize() const {
  return colors * std::accumulate(copies.begin(), copies.end(), 0);
}

std::string MiniHanabiConfig::ToString() const {
  std::vector<std::string> counts;
  for (int c : copies) counts.push_back(std::to_string(c));
  return internal::StrCat("mini_hanabi colors=", colors, " ranks=", ranks,
                          " hand_size=", hand_size,
                          " copies=", Join(counts, ","),
                          " hint_tokens=", hint_tokens,
                          " life_tokens=", life_tokens,
                          " reward_scheme=", RewardSchemeName(reward_scheme));
}

std::string Card::ToString() const {
  if (!IsValid()) return "-";
  return internal::StrCat(color, ":", rank);
}

std::string HanabiObservation::ToString() const {
  std::ostringstream out;
  out << "observer=" << observer << " current=" << current_player
      << " own=" << KnowledgeList(own_knowledge)
      << " partner=" << CardList(partner_hand)
      << " partner_knows=" << KnowledgeList(partner_knowledge) << " fireworks=";
  for (size_t c = 0; c < fireworks.size(); ++c) {
    out << (c ? "," : "") << fireworks[c];
  }
  out << " hints=" << hint_tokens << " lives=" << life_tokens
      << " deck=" << deck_size << " discards=" << CardList(discards)
      << " last=" << partner_last_action << "/" << partner_last_card.ToString()
      << (terminal ? " terminal" : "");
  return out.str();
}

// ---------------------------------------------------------------------------
// MiniHanabi

MiniHanabi::MiniHanabi(MiniHanabiConfig config) : config_(std::move(config)) {
  config_.Validate();
}

int MiniHanabi::NumActions() const {
  return config_.colors + config_.ranks + 2 * config_.hand_size;
}

Move MiniHanabi::ActionToMove(int action) const {
  if (action < 0 || action >= NumActions()) {
    Fail("action ", action, " outside [0, ", NumActions(), ")");
  }
  if (action < config_.colors) return {MoveType::kHintColor, action};
  action -= config_.colors;
  if (action < config_.ranks) return {MoveType::kHintRank, action};
  action -= config_.ranks;
  if (action < config_.hand_size) return {MoveType::kDiscard, action};
  return {MoveType::kPlay, action - config_.hand_size};
}

int MiniHanabi::MoveToAction(const Move& move) const {
  const int limit[] = {config_.colors, config_.ranks, config_.hand_size,
                       config_.hand_size};
  const int type = static_cast<int>(move.type);
  if (move.value < 0 || move.value >= limit[type]) {
    Fail("move value ", move.value, " out of range");
  }
  int offset = 0;
  for (int t = 0; t < type; ++t) offset += limit[t];
  return offset + move.value;
}

std::string MiniHanabi::ActionName(int action) const {
  const Move move = ActionToMove(action);
  const char prefix[] = {'C', 'R', 'D', 'P'};
  return prefix[static_cast<int>(move.type)] + std::to_string(move.value + 1);
}

std::vector<Card> MiniHanabi::ShuffledDeck(uint64_t deck_seed) const {
  std::vector<Card> deck;
  for (int c = 0; c < config_.colors; ++c) {
    for (int r = 0; r < config_.ranks; ++r) {
      for (int k = 0; k < config_.copies[r]; ++k) deck.push_back({c, r});
    }
  }
  Rng rng(DeriveSeed(deck_seed, kDeckStream));
  rng.Shuffle(deck);
  return deck;
}

HanabiState MiniHanabi::NewGame(uint64_t deck_seed) const {
  return HanabiState(this, ShuffledDeck(deck_seed));
}

HanabiState MiniHanabi::NewGameWithDeck(std::vector<Card> deck) const {
  return HanabiState(this, std::move(deck));
}

namespace {

Permutation HintPermutation(const MiniHanabiConfig& config, int offset,
                            const Permutation& labels) {
  const int n = config.colors + config.ranks + 2 * config.hand_size;
  std::vector<int> images(n);
  std::iota(images.begin(), images.end(), 0);
  for (int x = 0; x < labels.size(); ++x) images[offset + x] = offset + labels(x);
  return Permutation(std::move(images));
}

}  // namespace

Relabeling MiniHanabi::ColorRelabeling(const Permutation& colors) const {
  if (colors.size() != config_.colors) {
    Fail("color permutation has degree ", colors.size(), ", game has ",
         config_.colors, " colors");
  }
  Relabeling phi = Relabeling::OfActions(HintPermutation(config_, 0, colors));
  phi.labels["color"] = colors;
  return phi.Normalized();
}

Relabeling MiniHanabi::RankRelabeling(const Permutation& ranks) const {
  if (ranks.size() != config_.ranks) {
    Fail("rank permutation has degree ", ranks.size(), ", game has ",
         config_.ranks, " ranks");
  }
  Relabeling phi =
      Relabeling::OfActions(HintPermutation(config_, config_.colors, ranks));
  phi.labels["rank"] = ranks;
  return phi.Normalized();
}

Card MiniHanabi::RelabelCard(const Relabeling& phi, const Card& card) const {
  if (!card.IsValid()) return card;
  return {phi.Label("color", card.color), phi.Label("rank", card.rank)};
}

HanabiObservation MiniHanabi::RelabelObservation(
    const Relabeling& phi, const HanabiObservation& obs) const {
  auto knowledge = [&](CardKnowledge k) {
    if (k.color >= 0) k.color = phi.Label("color", k.color);
    if (k.rank >= 0) k.rank = phi.Label("rank", k.rank);
    return k;
  };
  HanabiObservation out = obs;
  for (auto& k : out.own_knowledge) k = knowledge(k);
  for (auto& k : out.partner_knowledge) k = knowledge(k);
  for (auto& c : out.partner_hand) c = RelabelCard(phi, c);
  for (auto& c : out.discards) c = RelabelCard(phi, c);
  for (int c = 0; c < config_.colors; ++c) {
    out.fireworks[phi.Label("color", c)] = obs.fireworks[c];
  }
  out.partner_last_action = phi.Action(1 - obs.observer, obs.partner_last_action);
  out.partner_last_card = RelabelCard(phi, obs.partner_last_card);
  return out;
}

Realizer MiniHanabi::MakeRealizer(const std::string& target) const {
  if (target == "color") {
    return [self = *this](const Permutation& p) { return self.ColorRelabeling(p); };
  }
  if (target == "rank") {
    return [self = *this](const Permutation& p) { return self.RankRelabeling(p); };
  }
  Fail("mini-Hanabi has no label set '", target, "'");
}

namespace {

SymmetryGroup FullLabelGroup(const MiniHanabi& game, const std::string& target,
                             int degree) {
  OrbitDescriptor orbits;
  orbits.target = target;
  orbits.degree = degree;
  std::vector<int> all(degree);
  std::iota(all.begin(), all.end(), 0);
  orbits.orbits.push_back(all);
  return SymmetryGroup::FromOrbits(std::move(orbits),
                                   game.MakeRealizer(target));
}

}  // namespace

SymmetryGroup HanabiColorSymmetries(const MiniHanabi& game) {
  return FullLabelGroup(game, "color", game.config().colors);
}

SymmetryGroup HanabiRankPermutations(const MiniHanabi& game) {
  return FullLabelGroup(game, "rank", game.config().ranks);
}

// ---------------------------------------------------------------------------
// HanabiState

HanabiState::HanabiState(const MiniHanabi* game, std::vector<Card> deck)
    : game_(game),
      initial_deck_(deck),
      deck_(std::move(deck)),
      hint_tokens_(game->config().hint_tokens),
      life_tokens_(game->config().life_tokens) {
  const MiniHanabiConfig& config = game_->config();
  if (static_cast<int>(deck_.size()) != config.DeckSize()) {
    Fail("deck has ", deck_.size(), " cards, config needs ", config.DeckSize());
  }
  for (const Card& c : deck_) {
    if (c.color < 0 || c.color >= config.colors || c.rank < 0 ||
        c.rank >= config.ranks) {
      Fail("deck card ", c.ToString(), " out of range");
    }
  }
  fireworks_.assign(config.colors, 0);
  for (int p = 0; p < kNumPlayers; ++p) {
    for (int k = 0; k < config.hand_size; ++k) Draw(p);
  }
  if (deck_.empty()) final_turns_ = kNumPlayers;
}

void HanabiState::Draw(int player) {
  if (deck_.empty()) return;
  hands_[player].push_back(deck_.front());
  knowledge_[player].push_back({});
  deck_.erase(deck_.begin());
}

int HanabiState::FireworksTotal() const {
  return std::accumulate(fireworks_.begin(), fireworks_.end(), 0);
}

std::string HanabiState::IllegalReason(int action) const {
  if (terminal_) return "game is over";
  if (action < 0 || action >= game_->NumActions()) {
    return internal::StrCat("action ", action, " outside [0, ",
                            game_->NumActions(), ")");
  }
  const Move move = game_->ActionToMove(action);
  const auto& partner = hands_[1 - current_player_];
  const int own_cards = static_cast<int>(hands_[current_player_].size());
  switch (move.type) {
    case MoveType::kHintColor:
    case MoveType::kHintRank: {
      if (hint_tokens_ == 0) return "no hint tokens left";
      const bool color = move.type == MoveType::kHintColor;
      for (const Card& c : partner) {
        if ((color ? c.color : c.rank) == move.value) return "";
      }
      return "hint matches no card in the partner's hand";
    }
    case MoveType::kDiscard:
      if (hint_tokens_ == game_->config().hint_tokens) {
        return "cannot discard with all hint tokens available";
      }
      [[fallthrough]];
    case MoveType::kPlay:
      if (move.value >= own_cards) {
        return internal::StrCat("no card in slot ", move.value + 1);
      }
      return "";
  }
  return "unknown move";
}

bool HanabiState::IsLegal(int action) const {
  return IllegalReason(action).empty();
}

std::vector<bool> HanabiState::LegalMask() const {
  std::vector<bool> mask(game_->NumActions());
  for (int a = 0; a < game_->NumActions(); ++a) mask[a] = IsLegal(a);
  return mask;
}

std::vector<int> HanabiState::LegalActions() const {
  std::vector<int> legal;
  for (int a = 0; a < game_->NumActions(); ++a) {
    if (IsLegal(a)) legal.push_back(a);
  }
  return legal;
}

double HanabiState::Apply(int action) {
  const std::string reason = IllegalReason(action);
  if (!reason.empty()) {
    Fail("illegal action ", action, " for player ", current_player_, ": ",
         reason);
  }
  const MiniHanabiConfig& config = game_->config();
  const Move move = game_->ActionToMove(action);
  const int me = current_player_;
  double reward = 0.0;
  Card revealed;
  switch (move.type) {
    case MoveType::kHintColor:
    case MoveType::kHintRank: {
      const bool color = move.type == MoveType::kHintColor;
      const int partner = 1 - me;
      for (size_t k = 0; k < hands_[partner].size(); ++k) {
        const Card& c = hands_[partner][k];
        if (color && c.color == move.value) knowledge_[partner][k].color = c.color;
        if (!color && c.rank == move.value) knowledge_[partner][k].rank = c.rank;
      }
      --hint_tokens_;
      break;
    }
    case MoveType::kDiscard:
    case MoveType::kPlay: {
      revealed = hands_[me][move.value];
      hands_[me].erase(hands_[me].begin() + move.value);
      knowledge_[me].erase(knowledge_[me].begin() + move.value);
      if (move.type == MoveType::kDiscard) {
        discards_.push_back(revealed);
        ++hint_tokens_;
      } else if (fireworks_[revealed.color] == revealed.rank) {
        played_.push_back(revealed);
        ++fireworks_[revealed.color];
        reward = 1.0;
        if (fireworks_[revealed.color] == config.ranks &&
            hint_tokens_ < config.hint_tokens) {
          ++hint_tokens_;
        }
      } else {
        discards_.push_back(revealed);
        --life_tokens_;
        if (life_tokens_ == 0 &&
            config.reward_scheme == RewardScheme::kZeroOnBomb) {
          reward = FireworksTotal() > 0 ? -static_cast<double>(FireworksTotal()) : 0.0;
        }
      }
      Draw(me);
      break;
    }
  }
  last_action_[me] = action;
  last_card_[me] = revealed;
  EndTurn();
  return reward;
}

void HanabiState::EndTurn() {
  ++turn_;
  current_player_ = 1 - current_player_;
  if (life_tokens_ == 0 || FireworksTotal() == game_->config().MaxScore()) {
    terminal_ = true;
    return;
  }
  if (final_turns_ > 0) {
    if (--final_turns_ == 0) terminal_ = true;
  } else if (deck_.empty()) {
    final_turns_ = kNumPlayers;
  }
}

HanabiObservation HanabiState::Observe(int player) const {
  COORD_CHECK(player == 0 || player == 1, "player ", player);
  const int partner = 1 - player;
  HanabiObservation obs;
  obs.observer = player;
  obs.current_player = current_player_;
  obs.own_knowledge = knowledge_[player];
  obs.partner_hand = hands_[partner];
  obs.partner_knowledge = knowledge_[partner];
  obs.fireworks = fireworks_;
  obs.hint_tokens = hint_tokens_;
  obs.life_tokens = life_tokens_;
  obs.deck_size = static_cast<int>(deck_.size());
  obs.discards = discards_;
  obs.partner_last_action = last_action_[partner];
  obs.partner_last_card = last_card_[partner];
  obs.terminal = terminal_;
  return obs;
}

std::string HanabiState::CheckInvariants() const {
  const MiniHanabiConfig& config = game_->config();
  std::vector<Card> all = deck_;
  for (const auto& hand : hands_) all.insert(all.end(), hand.begin(), hand.end());
  all.insert(all.end(), discards_.begin(), discards_.end());
  all.insert(all.end(), played_.begin(), played_.end());
  std::vector<Card> expected = initial_deck_;
  std::sort(all.begin(), all.end());
  std::sort(expected.begin(), expected.end());
  if (all != expected) return "card multiset not conserved";
  for (int c = 0; c < config.colors; ++c) {
    std::vector<int> ranks;
    for (const Card& card : played_) {
      if (card.color == c) ranks.push_back(card.rank);
    }
    std::sort(ranks.begin(), ranks.end());
    if (static_cast<int>(ranks.size()) != fireworks_[c]) {
      return internal::StrCat("fireworks height of color ", c,
                              " disagrees with played cards");
    }
    for (int r = 0; r < fireworks_[c]; ++r) {
      if (ranks[r] != r) {
        return internal::StrCat("fireworks of color ", c, " are not a prefix");
      }
    }
  }
  if (hint_tokens_ < 0 || hint_tokens_ > config.hint_tokens) {
    return internal::StrCat("hint tokens ", hint_tokens_, " out of range");
  }
  if (life_tokens_ < 0 || life_tokens_ > config.life_tokens) {
    return internal::StrCat("life tokens ", life_tokens_, " out of range");
  }
  const bool should_end = life_tokens_ == 0 ||
                          FireworksTotal() == config.MaxScore() ||
                          final_turns_ == 0;
  if (should_end != terminal_) return "terminal flag inconsistent";
  for (int p = 0; p < kNumPlayers; ++p) {
    if (hands_[p].size() != knowledge_[p].size()) {
      return "knowledge does not track the hand";
    }
    if (static_cast<int>(hands_[p].size()) > config.hand_size) {
      return "hand too large";
    }
  }
  return "";
}

int Score(const HanabiState& state, RewardScheme scheme) {
  if (!state.IsTerminal()) Fail("score requested for a game still in progress");
  if (scheme == RewardScheme::kZeroOnBomb && state.BombedOut()) return 0;
  return state.FireworksTotal();
}

VerificationReport VerifyEquivalenceSampled(const MiniHanabi& game,
                                            const Relabeling& phi,
                                            int episodes, uint64_t seed) {
  const MiniHanabiConfig& config = game.config();
  for (const auto& [name, p] : phi.labels) {
    const int degree = name == "color" ? config.colors
                       : name == "rank" ? config.ranks
                                        : -1;
    if (degree < 0) Fail("mini-Hanabi has no label set '", name, "'");
    if (p.size() != degree) {
      Fail("relabeling of '", name, "' has degree ", p.size(), ", expected ",
           degree);
    }
  }
  for (const auto& p : phi.actions) {
    if (p.size() != 0 && p.size() != game.NumActions()) {
      Fail("action permutation has degree ", p.size(), ", game has ",
           game.NumActions(), " actions");
    }
  }
  if (phi.states.size() != 0 || phi.observations.size() != 0) {
    Fail("mini-Hanabi relabelings act through labels, not state indices");
  }
  VerificationReport report;
  auto fail = [&](std::string condition, int episode, int turn,
                  std::string detail) {
    report.passed = false;
    report.condition = std::move(condition);
    report.witness = internal::StrCat("episode ", episode, " turn ", turn, ": ",
                                      detail);
    return report;
  };
  for (int e = 0; e < episodes; ++e) {
    const uint64_t deck_seed = DeriveSeed(seed, e);
    std::vector<Card> deck = game.ShuffledDeck(deck_seed);
    std::vector<Card> image;
    for (const Card& c : deck) image.push_back(game.RelabelCard(phi, c));
    HanabiState canonical = game.NewGameWithDeck(deck);
    HanabiState relabeled = game.NewGameWithDeck(image);
    Rng rng = Rng::ForEpisode(seed, e);
    while (true) {
      for (int p = 0; p < kNumPlayers; ++p) {
        const HanabiObservation want =
            game.RelabelObservation(phi, canonical.Observe(p));
        const HanabiObservation got = relabeled.Observe(p);
        if (!(want == got)) {
          return fail("observation", e, canonical.turn(),
                      internal::StrCat("player ", p, " sees [", got.ToString(),
                                       "], expected [", want.ToString(), "]"));
        }
      }
      if (canonical.IsTerminal()) break;
      const int player = canonical.current_player();
      const std::vector<bool> legal = canonical.LegalMask();
      const std::vector<bool> legal_image = relabeled.LegalMask();
      for (int a = 0; a < game.NumActions(); ++a) {
        if (legal[a] != legal_image[phi.Action(player, a)]) {
          return fail("legal_actions", e, canonical.turn(),
                      internal::StrCat("action ", game.ActionName(a),
                                       (legal[a] ? " legal" : " illegal"),
                                       " but its image ",
                                       game.ActionName(phi.Action(player, a)),
                                       " is not"));
        }
      }
      const std::vector<int> actions = canonical.LegalActions();
      const int a = actions[rng.UniformInt(static_cast<int>(actions.size()))];
      const double r = canonical.Apply(a);
      const double r_image = relabeled.Apply(phi.Action(player, a));
      if (r != r_image) {
        return fail("reward", e, canonical.turn() - 1,
                    internal::StrCat("action ", game.ActionName(a),
                                     " pays ", FormatDouble(r),
                                     " but its image pays ",
                                     FormatDouble(r_image)));
      }
    }
  }
  return report;
}

}  // namespace coordlab
