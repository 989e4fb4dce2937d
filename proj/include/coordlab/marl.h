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

// Tabular multi-agent learners for mini-Hanabi: independent epsilon-greedy
// Q-learning over encoded information states, used as the base algorithm for
// self-play, other-play, best responses, cognitive hierarchies, k-level
// reasoning and population training.

#ifndef COORDLAB_MARL_H_
#define COORDLAB_MARL_H_

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coordlab/agent.h"
#include "coordlab/mini_hanabi.h"
#include "coordlab/symmetry.h"

namespace coordlab {

struct MarlTrainConfig {
  int64_t episodes = 500'000;
  // Linear decay from epsilon_start to epsilon_end over the first
  // epsilon_decay_episodes episodes.
  double epsilon_start = 1.0;
  double epsilon_end = 0.05;
  int64_t epsilon_decay_episodes = 250'000;
  double learning_rate = 0.1;
  double discount = 1.0;
  std::string encoder = "hanabi_compact";
  RewardScheme reward_scheme = RewardScheme::kZeroOnBomb;
  uint64_t seed = 0;
  int64_t log_every = 10'000;

  void Validate() const;
  double Epsilon(int64_t episode) const;
};

struct MetricsRow {
  int64_t episode = 0;
  // Mean training return over the episodes since the previous row.
  double mean_return = 0.0;
  double epsilon = 0.0;
  bool operator==(const MetricsRow&) const = default;
};

std::string FormatMetrics(const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> ParseMetrics(std::string_view text);

class QTable {
 public:
  struct Row {
    std::vector<double> q;
    std::vector<bool> legal;
  };

  explicit QTable(int num_actions) : num_actions_(num_actions) {}

  Row& Touch(const std::string& key, const std::vector<bool>& legal);
  const Row* Find(const std::string& key) const;
  size_t size() const { return rows_.size(); }

  // Greedy view: argmax over legal actions, lowest index on ties; the
  // stochastic view is epsilon-greedy around it.
  Agent ToAgent(AgentMetadata metadata, double epsilon) const;

 private:
  int num_actions_;
  std::unordered_map<std::string, Row> rows_;
};

struct MarlResult {
  Agent agent;
  std::vector<MetricsRow> metrics;
};

MarlResult TrainSelfPlayMarl(const MiniHanabiConfig& env,
                             const MarlTrainConfig& config);

// Every episode draws one frame per seat iid uniform from `group`.
MarlResult TrainOtherPlayMarl(const MiniHanabiConfig& env,
                              const SymmetryGroup& group,
                              const MarlTrainConfig& config);

struct PoolMember {
  const Agent* agent;
  double weight;
};

struct BestResponseResult {
  Agent agent;
  std::vector<MetricsRow> metrics;
  // Pool index of the partner in each episode.
  std::vector<int> partner_log;
};

// The learner takes a uniformly chosen seat each episode and plays with a
// pool member drawn by weight, which acts greedily and never updates.
BestResponseResult BestResponseTrain(const MiniHanabiConfig& env,
                                     const std::vector<PoolMember>& pool,
                                     const MarlTrainConfig& config,
                                     const std::string& learner_id = "best_response");

struct LevelsResult {
  // levels[0] is the uniform agent.
  std::vector<Agent> levels;
  // partner_logs[k - 1] is the partner log of level k.
  std::vector<std::vector<int>> partner_logs;
};

// Level k best-responds to the uniform pool {a_0, ..., a_{k-1}}.
LevelsResult CognitiveHierarchyTrain(const MiniHanabiConfig& env, int levels,
                                     const MarlTrainConfig& config);
// Level k best-responds to a_{k-1} only.
LevelsResult KLevelTrain(const MiniHanabiConfig& env, int levels,
                         const MarlTrainConfig& config);

struct PopulationResult {
  std::vector<Agent> agents;
  // Ordered (seat 0, seat 1) agent indices per episode.
  std::vector<std::pair<int, int>> pairings;
  std::vector<MetricsRow> metrics;
};

// N agents with private tables; each episode pairs a uniformly drawn ordered
// pair and each agent learns only from its own seat's experience.
PopulationResult PopulationTrain(const MiniHanabiConfig& env, int n,
                                 const MarlTrainConfig& config);

// Mean training-time return of the uniform policy pair is the usual
// baseline; this measures it with `episodes` games.
double RandomBaseline(const MiniHanabiConfig& env, RewardScheme scheme,
                      int episodes, uint64_t seed);

}  // namespace coordlab

#endif  // COORDLAB_MARL_H_
