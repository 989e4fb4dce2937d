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

// Trained agents: a keyed policy table plus the metadata that ties it to an
// environment and a training run, and the versioned text file format.

#ifndef COORDLAB_AGENT_H_
#define COORDLAB_AGENT_H_

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "coordlab/decpomdp.h"
#include "coordlab/rng.h"

namespace coordlab {

inline constexpr int kAgentFormatMajor = 1;
inline constexpr int kAgentFormatMinor = 0;

struct AgentMetadata {
  // Canonical rules string of the environment and its FNV-1a hash.
  std::string env_config;
  uint64_t env_hash = 0;
  // Symmetry group descriptor used in training, or "none".
  std::string symmetry = "none";
  std::string learner = "uniform";
  uint64_t seed = 0;
  int64_t steps = 0;
  // Information-state encoder that produced the table keys.
  std::string encoder;

  bool operator==(const AgentMetadata&) const = default;
};

struct PolicyEntry {
  std::vector<bool> legal;
  // Action values (Q-values or probabilities); 0 on illegal actions.
  std::vector<double> values;
  // Stochastic view; supported on legal actions, sums to 1 within 1e-12.
  std::vector<double> probs;

  bool operator==(const PolicyEntry&) const = default;
};

class Agent {
 public:
  Agent(AgentMetadata metadata, int num_actions);

  const AgentMetadata& metadata() const { return metadata_; }
  AgentMetadata& mutable_metadata() { return metadata_; }
  int num_actions() const { return num_actions_; }
  const std::map<std::string, PolicyEntry>& table() const { return table_; }

  void SetEntry(const std::string& key, PolicyEntry entry);
  const PolicyEntry* Find(const std::string& key) const;

  // Argmax of the stored values over `legal`, lowest index on ties; -1 for
  // keys never stored.
  int GreedyAction(const std::string& key, const std::vector<bool>& legal) const;
  // Stored distribution, or uniform over `legal` for unseen keys.
  std::vector<double> Distribution(const std::string& key,
                                   const std::vector<bool>& legal) const;
  // Greedy play falls back to a uniform legal action on unseen keys.
  int Act(const std::string& key, const std::vector<bool>& legal, Rng& rng,
          bool greedy) const;

  std::string Serialize() const;
  static Agent Parse(std::string_view text);
  void Save(const std::string& path) const;
  static Agent Load(const std::string& path);

  bool operator==(const Agent&) const = default;

 private:
  AgentMetadata metadata_;
  int num_actions_;
  std::map<std::string, PolicyEntry> table_;
};

// Agent that plays uniformly over legal actions everywhere.
Agent UniformAgent(const std::string& env_config, int num_actions,
                   const std::string& encoder);

// Tabular-game agents hold one policy per seat under keys "<seat>:<AOH key>";
// values and probs are both the stored probabilities.
Agent TabularAgent(AgentMetadata metadata,
                   const std::array<TabularPolicy, kNumPlayers>& policies);
// The seat's policy; greedy turns each row into a one-hot on its argmax
// (lowest index on ties). Unseen histories stay uniform.
TabularPolicy SeatPolicy(const Agent& agent, int seat, bool greedy);

std::vector<bool> AllLegal(int num_actions);
int UniformLegalAction(const std::vector<bool>& legal, Rng& rng);

std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, std::string_view contents);

}  // namespace coordlab

#endif  // COORDLAB_AGENT_H_
