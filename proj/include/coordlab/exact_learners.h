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

// Exact-gradient self-play and other-play for tabular games. Policies are
// softmax over per-history logits; each step ascends the exact gradient of
// the objective with respect to the logits of both players simultaneously.

#ifndef COORDLAB_EXACT_LEARNERS_H_
#define COORDLAB_EXACT_LEARNERS_H_

#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "coordlab/decpomdp.h"
#include "coordlab/symmetry.h"

namespace coordlab {

struct ExactTrainConfig {
  double learning_rate = 10.0;
  int steps = 500;
  // Standard deviation of the iid Gaussian logit noise at initialization.
  double init_scale = 0.5;
  uint64_t seed = 0;
  // Keep a copy of the policies every this many steps (0 = never).
  int snapshot_every = 0;
  // Other-play only: shift initial logits so the starting policy is uniform
  // over action equivalence classes (see OpExact).
  bool orbit_balanced_init = true;

  void Validate() const;
};

using Logits = std::map<Aoh, std::vector<double>>;

struct ExactTrainResult {
  std::array<TabularPolicy, kNumPlayers> policies{TabularPolicy(0, 1),
                                                  TabularPolicy(1, 1)};
  // Objective before each step, plus the value after the last one.
  std::vector<double> curve;
  // (step, policies) pairs when snapshots were requested; the final policies
  // are always included.
  std::vector<std::pair<int, std::array<TabularPolicy, kNumPlayers>>> snapshots;
};

TabularPolicy SoftmaxPolicy(int player, int num_actions, const Logits& logits);

// Ascends J(pi_0, pi_1).
ExactTrainResult SpExact(const TabularDecPOMDP& game,
                         const ExactTrainConfig& config);

// Ascends J_OP = E_{phi ~ Phi} J(pi_0, phi(pi_1)), evaluated exactly as
// J(pi_0, pi_1 mixed over Phi). With orbit_balanced_init, initial logits of
// each action are shifted by -log|orbit| when Phi is an orbit group over
// actions, so the starting policy is uniform over equivalence classes rather
// than over actions; with the trivial group this is the self-play start.
ExactTrainResult OpExact(const TabularDecPOMDP& game, const SymmetryGroup& group,
                         const ExactTrainConfig& config);

// J_OP for a fixed joint policy.
double OtherPlayValue(const TabularDecPOMDP& game, const SymmetryGroup& group,
                      const TabularPolicy& policy0,
                      const TabularPolicy& policy1);

// Greedy (argmax, lowest index on ties) version of a policy.
TabularPolicy GreedyPolicy(const TabularPolicy& policy);

}  // namespace coordlab

#endif  // COORDLAB_EXACT_LEARNERS_H_
