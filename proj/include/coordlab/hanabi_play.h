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

// Running agents on mini-Hanabi. An agent may act in a relabeled frame phi:
// it sees phi(o), chooses among phi(legal actions), and its action a is
// executed as phi^-1(a).

#ifndef COORDLAB_HANABI_PLAY_H_
#define COORDLAB_HANABI_PLAY_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "coordlab/agent.h"
#include "coordlab/mini_hanabi.h"
#include "coordlab/rng.h"

namespace coordlab {

// Own hinted facts, partner hand, fireworks, hint and life tokens, and the
// partner's last action, e.g. "?1??|0010|10|21|7".
std::string EncodeCompact(const HanabiObservation& obs);

struct FramedView {
  std::string key;
  std::vector<bool> legal;
};

// What player `player` sees of `state` in frame `phi`.
FramedView ViewInFrame(const MiniHanabi& game, const HanabiState& state,
                       int player, const Relabeling& phi);

// Other-play views: one frame per seat drawn iid uniform from the group.
class OtherPlayWrapper {
 public:
  OtherPlayWrapper(const MiniHanabi* game, const SymmetryGroup& group,
                   Rng& rng);
  OtherPlayWrapper(const MiniHanabi* game,
                   std::array<Relabeling, kNumPlayers> frames);

  const Relabeling& frame(int player) const { return frames_[player]; }
  FramedView View(const HanabiState& state, int player) const;
  int ToEnv(int player, int agent_action) const {
    return inverses_[player].Action(player, agent_action);
  }
  int ToAgent(int player, int env_action) const {
    return frames_[player].Action(player, env_action);
  }

 private:
  const MiniHanabi* game_;
  std::array<Relabeling, kNumPlayers> frames_;
  std::array<Relabeling, kNumPlayers> inverses_;
};

struct HanabiEpisode {
  uint64_t deck_seed = 0;
  std::vector<int> players;
  // Canonical (environment-frame) actions.
  std::vector<int> actions;
  std::vector<double> rewards;
  int score_keep = 0;
  int score_zero = 0;
  bool bombed = false;

  int Score(RewardScheme scheme) const {
    return scheme == RewardScheme::kKeepOnBomb ? score_keep : score_zero;
  }
};

// Plays one game from `deck_seed`; `rng` drives stochastic choices and the
// uniform fallback on unseen keys.
HanabiEpisode PlayHanabi(const MiniHanabi& game,
                         const std::array<const Agent*, kNumPlayers>& agents,
                         uint64_t deck_seed, Rng& rng, bool greedy = true,
                         const std::array<Relabeling, kNumPlayers>& frames = {});

}  // namespace coordlab

#endif  // COORDLAB_HANABI_PLAY_H_
