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

#include "coordlab/exact_learners.h"

#include <algorithm>
#include <cmath>

#include "coordlab/error.h"
#include "coordlab/rng.h"

namespace coordlab {
namespace {

constexpr uint64_t kInitStream = 0x696e69746c6f6769ULL;

std::array<Logits, kNumPlayers> InitialLogits(const TabularDecPOMDP& game,
                                              const ExactTrainConfig& config) {
  Rng rng(DeriveSeed(config.seed, kInitStream));
  std::array<Logits, kNumPlayers> logits;
  for (int i = 0; i < kNumPlayers; ++i) {
    for (const Aoh& h : ReachableHistories(game, i)) {
      std::vector<double> row(game.num_actions());
      for (double& x : row) x = config.init_scale * rng.Normal();
      logits[i][h] = std::move(row);
    }
  }
  return logits;
}

// dJ/dtheta(b) = pi(b) (g(b) - sum_a pi(a) g(a)).
void Ascend(const std::map<Aoh, std::vector<double>>& grad,
            const TabularPolicy& policy, double learning_rate, Logits& logits) {
  for (auto& [h, theta] : logits) {
    auto it = grad.find(h);
    if (it == grad.end()) continue;
    const std::vector<double>& g = it->second;
    const std::vector<double>& pi = policy.Probs(h);
    double mean = 0.0;
    for (size_t a = 0; a < g.size(); ++a) mean += pi[a] * g[a];
    for (size_t a = 0; a < g.size(); ++a) {
      theta[a] += learning_rate * pi[a] * (g[a] - mean);
    }
  }
}

template <typename Objective>
ExactTrainResult Train(const TabularDecPOMDP& game,
                       const ExactTrainConfig& config,
                       std::array<Logits, kNumPlayers> logits,
                       Objective&& objective) {
  const int n = game.num_actions();
  ExactTrainResult result;
  auto policies = [&] {
    return std::array<TabularPolicy, kNumPlayers>{
        SoftmaxPolicy(0, n, logits[0]), SoftmaxPolicy(1, n, logits[1])};
  };
  for (int step = 0; step < config.steps; ++step) {
    const auto pi = policies();
    if (config.snapshot_every > 0 && step % config.snapshot_every == 0) {
      result.snapshots.emplace_back(step, pi);
    }
    const ReturnGradient grad = objective(pi[0], pi[1]);
    result.curve.push_back(grad.value);
    for (int i = 0; i < kNumPlayers; ++i) {
      Ascend(grad.wrt_probs[i], pi[i], config.learning_rate, logits[i]);
    }
  }
  result.policies = policies();
  result.curve.push_back(objective(result.policies[0], result.policies[1]).value);
  result.snapshots.emplace_back(config.steps, result.policies);
  return result;
}

}  // namespace

void ExactTrainConfig::Validate() const {
  if (!(learning_rate > 0.0)) Fail("learning_rate must be positive");
  if (steps < 1) Fail("steps must be at least 1");
  if (!(init_scale >= 0.0)) Fail("init_scale must be nonnegative");
  if (snapshot_every < 0) Fail("snapshot_every must be nonnegative");
}

TabularPolicy SoftmaxPolicy(int player, int num_actions, const Logits& logits) {
  TabularPolicy policy(player, num_actions);
  for (const auto& [h, theta] : logits) {
    const double top = *std::max_element(theta.begin(), theta.end());
    std::vector<double> probs(theta.size());
    double total = 0.0;
    for (size_t a = 0; a < theta.size(); ++a) {
      probs[a] = std::exp(theta[a] - top);
      total += probs[a];
    }
    for (double& p : probs) p /= total;
    policy.Set(h, std::move(probs));
  }
  return policy;
}

ExactTrainResult SpExact(const TabularDecPOMDP& game,
                         const ExactTrainConfig& config) {
  config.Validate();
  return Train(game, config, InitialLogits(game, config),
               [&](const TabularPolicy& p0, const TabularPolicy& p1) {
                 return ExactReturnGradient(game, p0, p1);
               });
}

ExactTrainResult OpExact(const TabularDecPOMDP& game, const SymmetryGroup& group,
                         const ExactTrainConfig& config) {
  config.Validate();
  std::array<Logits, kNumPlayers> logits = InitialLogits(game, config);
  if (config.orbit_balanced_init && group.ActsOnActionsOnly()) {
    std::vector<int> orbit_size(game.num_actions(), 1);
    for (const auto& orbit : group.orbits().orbits) {
      for (int a : orbit) orbit_size[a] = static_cast<int>(orbit.size());
    }
    for (auto& per_player : logits) {
      for (auto& [h, theta] : per_player) {
        for (size_t a = 0; a < theta.size(); ++a) {
          theta[a] -= std::log(static_cast<double>(orbit_size[a]));
        }
      }
    }
  }
  const std::vector<Aoh> domain1 = ReachableHistories(game, 1);
  return Train(game, config, std::move(logits),
               [&](const TabularPolicy& p0, const TabularPolicy& p1) {
                 const TabularPolicy mixed = MixturePolicy(p1, group);
                 ReturnGradient grad = ExactReturnGradient(game, p0, mixed);
                 grad.wrt_probs[1] =
                     MixtureAdjoint(grad.wrt_probs[1], domain1, 1, group);
                 return grad;
               });
}

double OtherPlayValue(const TabularDecPOMDP& game, const SymmetryGroup& group,
                      const TabularPolicy& policy0,
                      const TabularPolicy& policy1) {
  return ExpectedReturnExact(game, policy0, MixturePolicy(policy1, group));
}

TabularPolicy GreedyPolicy(const TabularPolicy& policy) {
  TabularPolicy greedy(policy.player(), policy.num_actions());
  for (const auto& [h, probs] : policy.table()) {
    const int best = static_cast<int>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    std::vector<double> one_hot(probs.size(), 0.0);
    one_hot[best] = 1.0;
    greedy.Set(h, std::move(one_hot));
  }
  return greedy;
}

}  // namespace coordlab
