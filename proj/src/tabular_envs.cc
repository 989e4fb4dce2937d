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

#include "coordlab/tabular_envs.h"

#include <map>

#include "coordlab/error.h"
#include "coordlab/text.h"

namespace coordlab {

LeverGameConfig LeverGameConfig::Canonical() {
  LeverGameConfig config;
  config.payoffs.assign(9, 1.0);
  config.payoffs.push_back(0.9);
  return config;
}

void LeverGameConfig::Validate() const {
  if (payoffs.size() < 2) Fail("lever game needs at least 2 levers");
  for (double p : payoffs) {
    if (!(p >= 0.0)) Fail("lever payoff ", FormatDouble(p), " is negative");
  }
}

std::string LeverGameConfig::ToString() const {
  std::vector<std::string> parts;
  for (double p : payoffs) parts.push_back(FormatDouble(p));
  return "lever payoffs=" + Join(parts, ",");
}

TabularDecPOMDP LeverGame(const LeverGameConfig& config) {
  config.Validate();
  const int n = static_cast<int>(config.payoffs.size());
  TabularDecPOMDP game(config.ToString(), /*num_states=*/1, n,
                       /*num_observations=*/1, /*horizon=*/1);
  game.SetInitial(0, 1.0);
  for (int a0 = 0; a0 < n; ++a0) {
    for (int a1 = 0; a1 < n; ++a1) {
      const int joint = game.JointAction(a0, a1);
      game.SetTransition(0, joint, 0, 1.0);
      game.SetReward(0, joint, 0, a0 == a1 ? config.payoffs[a0] : 0.0);
    }
  }
  for (int slot = 0; slot <= game.num_joint_actions(); ++slot) {
    for (int i = 0; i < kNumPlayers; ++i) game.SetObservation(0, 0, slot, i, 1.0);
  }
  game.Validate();
  return game;
}

Realizer ActionRealizer() {
  return [](const Permutation& p) { return Relabeling::OfActions(p); };
}

SymmetryGroup LeverSymmetries(const LeverGameConfig& config) {
  config.Validate();
  std::map<double, std::vector<int>> classes;
  for (int a = 0; a < static_cast<int>(config.payoffs.size()); ++a) {
    classes[config.payoffs[a]].push_back(a);
  }
  OrbitDescriptor orbits;
  orbits.target = "actions";
  orbits.degree = static_cast<int>(config.payoffs.size());
  for (auto& [payoff, members] : classes) orbits.orbits.push_back(members);
  return SymmetryGroup::FromOrbits(std::move(orbits), ActionRealizer());
}

// ---------------------------------------------------------------------------
// Gridworld

void GridworldConfig::Validate() const {
  if (width < 1 || height < 1 || width % 2 == 0 || height % 2 == 0) {
    Fail("gridworld width and height must be odd and positive, got ", width,
         "x", height);
  }
  if (horizon < 1) Fail("gridworld horizon must be positive");
}

std::string GridworldConfig::ToString() const {
  return internal::StrCat("gridworld width=", width, " height=", height,
                          " horizon=", horizon);
}

namespace {

int Move(const GridworldConfig& c, int cell, int move) {
  int x = cell % c.width;
  int y = cell / c.width;
  switch (move) {
    case kUp:
      if (y > 0) --y;
      break;
    case kDown:
      if (y + 1 < c.height) ++y;
      break;
    case kLeft:
      if (x > 0) --x;
      break;
    case kRight:
      if (x + 1 < c.width) ++x;
      break;
  }
  return y * c.width + x;
}

}  // namespace

TabularDecPOMDP Gridworld(const GridworldConfig& config) {
  config.Validate();
  const int cells = config.width * config.height;
  const int goal = (config.height / 2) * config.width + config.width / 2;
  const int num_states = cells * cells;
  TabularDecPOMDP game(config.ToString(), num_states, /*num_actions=*/4,
                       /*num_observations=*/cells, config.horizon);
  auto state = [&](int c0, int c1) { return c0 * cells + c1; };
  const int done = state(goal, goal);
  const double start = 1.0 / ((cells - 1.0) * (cells - 1.0));
  for (int c0 = 0; c0 < cells; ++c0) {
    for (int c1 = 0; c1 < cells; ++c1) {
      if (c0 != goal && c1 != goal) game.SetInitial(state(c0, c1), start);
    }
  }
  for (int c0 = 0; c0 < cells; ++c0) {
    for (int c1 = 0; c1 < cells; ++c1) {
      const int s = state(c0, c1);
      for (int a0 = 0; a0 < 4; ++a0) {
        for (int a1 = 0; a1 < 4; ++a1) {
          const int joint = game.JointAction(a0, a1);
          const int next =
              s == done ? done : state(Move(config, c0, a0), Move(config, c1, a1));
          game.SetTransition(s, joint, next, 1.0);
          if (next == done && s != done) game.SetReward(next, joint, s, 1.0);
        }
      }
      for (int slot = 0; slot <= game.num_joint_actions(); ++slot) {
        game.SetObservation(c0, s, slot, 0, 1.0);
        game.SetObservation(c1, s, slot, 1, 1.0);
      }
    }
  }
  game.Validate();
  return game;
}

namespace {

Relabeling CellRelabeling(const GridworldConfig& config,
                          const std::vector<int>& cell_map,
                          const std::vector<int>& move_map) {
  const int cells = config.width * config.height;
  std::vector<int> states(cells * cells);
  for (int c0 = 0; c0 < cells; ++c0) {
    for (int c1 = 0; c1 < cells; ++c1) {
      states[c0 * cells + c1] = cell_map[c0] * cells + cell_map[c1];
    }
  }
  Relabeling phi = Relabeling::OfActions(Permutation(move_map));
  phi.states = Permutation(std::move(states));
  phi.observations = Permutation(cell_map);
  return phi;
}

}  // namespace

Relabeling GridReflection(const GridworldConfig& config, bool flip_x,
                          bool flip_y, bool remap_actions) {
  config.Validate();
  std::vector<int> cell_map(config.width * config.height);
  for (int y = 0; y < config.height; ++y) {
    for (int x = 0; x < config.width; ++x) {
      const int nx = flip_x ? config.width - 1 - x : x;
      const int ny = flip_y ? config.height - 1 - y : y;
      cell_map[y * config.width + x] = ny * config.width + nx;
    }
  }
  std::vector<int> moves{kUp, kDown, kLeft, kRight};
  if (remap_actions && flip_y) std::swap(moves[kUp], moves[kDown]);
  if (remap_actions && flip_x) std::swap(moves[kLeft], moves[kRight]);
  return CellRelabeling(config, cell_map, moves);
}

Relabeling GridRotation(const GridworldConfig& config, bool remap_actions) {
  config.Validate();
  if (config.width != config.height) {
    Fail("quarter turns need a square grid, got ", config.width, "x",
         config.height);
  }
  const int n = config.width;
  std::vector<int> cell_map(n * n);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      // Clockwise with y pointing down: (x, y) -> (n-1-y, x).
      cell_map[y * n + x] = x * n + (n - 1 - y);
    }
  }
  std::vector<int> moves{kUp, kDown, kLeft, kRight};
  if (remap_actions) {
    moves[kUp] = kRight;
    moves[kRight] = kDown;
    moves[kDown] = kLeft;
    moves[kLeft] = kUp;
  }
  return CellRelabeling(config, cell_map, moves);
}

}  // namespace coordlab
