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

#include "coordlab/hanabi_play.h"

#include "coordlab/error.h"

namespace coordlab {

std::string EncodeCompact(const HanabiObservation& obs) {
  auto digit = [](int x) { return x < 0 ? '?' : static_cast<char>('0' + x); };
  std::string key;
  key.reserve(32);
  for (const CardKnowledge& k : obs.own_knowledge) {
    key.push_back(digit(k.color));
    key.push_back(digit(k.rank));
  }
  key.push_back('|');
  for (const Card& c : obs.partner_hand) {
    key.push_back(digit(c.color));
    key.push_back(digit(c.rank));
  }
  key.push_back('|');
  for (int f : obs.fireworks) key.push_back(digit(f));
  key.push_back('|');
  key.push_back(digit(obs.hint_tokens));
  key.push_back(digit(obs.life_tokens));
  key.push_back('|');
  if (obs.partner_last_action == kNoAction) {
    key.push_back('-');
  } else {
    key += std::to_string(obs.partner_last_action);
  }
  return key;
}

FramedView ViewInFrame(const MiniHanabi& game, const HanabiState& state,
                       int player, const Relabeling& phi) {
  FramedView view;
  const std::vector<bool> legal = state.LegalMask();
  if (phi.IsIdentity()) {
    view.key = EncodeCompact(state.Observe(player));
    view.legal = legal;
    return view;
  }
  view.key = EncodeCompact(game.RelabelObservation(phi, state.Observe(player)));
  view.legal.assign(legal.size(), false);
  for (int a = 0; a < static_cast<int>(legal.size()); ++a) {
    if (legal[a]) view.legal[phi.Action(player, a)] = true;
  }
  return view;
}

OtherPlayWrapper::OtherPlayWrapper(const MiniHanabi* game,
                                   const SymmetryGroup& group, Rng& rng)
    : game_(game) {
  for (int i = 0; i < kNumPlayers; ++i) {
    frames_[i] = group.Sample(rng).Normalized();
    inverses_[i] = frames_[i].Inverse();
  }
}

OtherPlayWrapper::OtherPlayWrapper(const MiniHanabi* game,
                                   std::array<Relabeling, kNumPlayers> frames)
    : game_(game), frames_(std::move(frames)) {
  for (int i = 0; i < kNumPlayers; ++i) inverses_[i] = frames_[i].Inverse();
}

FramedView OtherPlayWrapper::View(const HanabiState& state, int player) const {
  return ViewInFrame(*game_, state, player, frames_[player]);
}

HanabiEpisode PlayHanabi(const MiniHanabi& game,
                         const std::array<const Agent*, kNumPlayers>& agents,
                         uint64_t deck_seed, Rng& rng, bool greedy,
                         const std::array<Relabeling, kNumPlayers>& frames) {
  const OtherPlayWrapper wrapper(&game, frames);
  HanabiEpisode episode;
  episode.deck_seed = deck_seed;
  HanabiState state = game.NewGame(deck_seed);
  while (!state.IsTerminal()) {
    const int p = state.current_player();
    const FramedView view = wrapper.View(state, p);
    const int a = wrapper.ToEnv(p, agents[p]->Act(view.key, view.legal, rng, greedy));
    episode.players.push_back(p);
    episode.actions.push_back(a);
    episode.rewards.push_back(state.Apply(a));
  }
  episode.score_keep = Score(state, RewardScheme::kKeepOnBomb);
  episode.score_zero = Score(state, RewardScheme::kZeroOnBomb);
  episode.bombed = state.BombedOut();
  return episode;
}

}  // namespace coordlab
