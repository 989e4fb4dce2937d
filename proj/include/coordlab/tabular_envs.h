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

// The lever coordination game and a two-player meet-at-the-goal gridworld.

#ifndef COORDLAB_TABULAR_ENVS_H_
#define COORDLAB_TABULAR_ENVS_H_

#include <string>
#include <vector>

#include "coordlab/decpomdp.h"
#include "coordlab/symmetry.h"

namespace coordlab {

// Both players pull one lever; matching on lever i pays payoffs[i], any
// mismatch pays 0. One state, one dummy observation, horizon 1.
struct LeverGameConfig {
  std::vector<double> payoffs;

  // Nine levers paying 1.0 and a last lever paying 0.9.
  static LeverGameConfig Canonical();
  void Validate() const;
  std::string ToString() const;
};

TabularDecPOMDP LeverGame(const LeverGameConfig& config);

// Every action permutation that preserves the payoff vector, as one orbit
// per class of equal payoffs.
SymmetryGroup LeverSymmetries(const LeverGameConfig& config);

// Realizer for "actions" orbit groups: same permutation for both players.
Realizer ActionRealizer();

struct GridworldConfig {
  int width = 3;
  int height = 3;
  int horizon = 2;

  void Validate() const;
  std::string ToString() const;
};

enum GridMove { kUp = 0, kDown = 1, kLeft = 2, kRight = 3 };

// Both players start on distinct-or-equal non-goal cells (uniformly), move
// in the four cardinal directions (walls block), and each observes only its
// own cell. Reward 1 on the step both first stand on the central goal cell,
// which is then absorbing.
TabularDecPOMDP Gridworld(const GridworldConfig& config);

// Mirror x (left <-> right) and/or y (up <-> down), with the matching action
// swap when `remap_actions` is set.
Relabeling GridReflection(const GridworldConfig& config, bool flip_x,
                          bool flip_y, bool remap_actions = true);
// Quarter turn clockwise on square grids.
Relabeling GridRotation(const GridworldConfig& config, bool remap_actions);

}  // namespace coordlab

#endif  // COORDLAB_TABULAR_ENVS_H_
