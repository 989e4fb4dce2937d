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

#include "coordlab/agent.h"

#include <fstream>
#include <sstream>

#include "coordlab/decpomdp.h"
#include "coordlab/error.h"
#include "coordlab/text.h"

namespace coordlab {
namespace {

constexpr std::string_view kMagic = "coordlab-agent";

std::string Doubles(const std::vector<double>& values) {
  std::vector<std::string> parts;
  for (double v : values) parts.push_back(FormatDouble(v));
  return Join(parts, ",");
}

std::string Bits(const std::vector<bool>& bits) {
  std::string out;
  for (bool b : bits) out.push_back(b ? '1' : '0');
  return out;
}

}  // namespace

Agent::Agent(AgentMetadata metadata, int num_actions)
    : metadata_(std::move(metadata)), num_actions_(num_actions) {
  if (num_actions < 1) Fail("agent needs at least one action");
  metadata_.env_hash = Fnv1a64(metadata_.env_config);
}

void Agent::SetEntry(const std::string& key, PolicyEntry entry) {
  if (key.empty() || key.find_first_of("\t\n") != std::string::npos) {
    Fail("policy key '", key, "' is empty or holds a tab or newline");
  }
  if (static_cast<int>(entry.legal.size()) != num_actions_ ||
      static_cast<int>(entry.values.size()) != num_actions_) {
    Fail("policy entry for '", key, "' has the wrong width");
  }
  CheckDistribution(entry.probs, num_actions_, key, &entry.legal);
  table_[key] = std::move(entry);
}

const PolicyEntry* Agent::Find(const std::string& key) const {
  auto it = table_.find(key);
  return it == table_.end() ? nullptr : &it->second;
}

int Agent::GreedyAction(const std::string& key,
                        const std::vector<bool>& legal) const {
  const PolicyEntry* entry = Find(key);
  if (entry == nullptr) return -1;
  int best = -1;
  for (int a = 0; a < num_actions_; ++a) {
    if (!legal[a]) continue;
    if (best < 0 || entry->values[a] > entry->values[best]) best = a;
  }
  return best;
}

std::vector<double> Agent::Distribution(const std::string& key,
                                        const std::vector<bool>& legal) const {
  if (const PolicyEntry* entry = Find(key)) {
    if (entry->legal != legal) {
      Fail("stored legal actions for '", key, "' differ from the game's");
    }
    return entry->probs;
  }
  int count = 0;
  for (bool b : legal) count += b;
  if (count == 0) Fail("no legal action at '", key, "'");
  std::vector<double> probs(num_actions_, 0.0);
  for (int a = 0; a < num_actions_; ++a) {
    if (legal[a]) probs[a] = 1.0 / count;
  }
  return probs;
}

int Agent::Act(const std::string& key, const std::vector<bool>& legal,
               Rng& rng, bool greedy) const {
  if (greedy) {
    const int a = GreedyAction(key, legal);
    return a >= 0 ? a : UniformLegalAction(legal, rng);
  }
  if (Find(key) == nullptr) return UniformLegalAction(legal, rng);
  const std::vector<double> probs = Distribution(key, legal);
  return rng.Categorical(probs);
}

std::string Agent::Serialize() const {
  std::ostringstream out;
  out << kMagic << " " << kAgentFormatMajor << "." << kAgentFormatMinor << "\n"
      << "env_config " << metadata_.env_config << "\n"
      << "env_hash " << HexU64(metadata_.env_hash) << "\n"
      << "symmetry " << metadata_.symmetry << "\n"
      << "learner " << metadata_.learner << "\n"
      << "seed " << metadata_.seed << "\n"
      << "steps " << metadata_.steps << "\n"
      << "encoder " << metadata_.encoder << "\n"
      << "actions " << num_actions_ << "\n"
      << "entries " << table_.size() << "\n";
  for (const auto& [key, e] : table_) {
    out << key << "\t" << Bits(e.legal) << "\t" << Doubles(e.values) << "\t"
        << Doubles(e.probs) << "\n";
  }
  return out.str();
}

Agent Agent::Parse(std::string_view text) {
  std::vector<std::string> lines = Split(text, '\n');
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  size_t next = 0;
  auto header = [&](std::string_view name) -> std::string {
    if (next >= lines.size()) Fail("agent file ends before '", name, "'");
    const std::string& line = lines[next++];
    const size_t space = line.find(' ');
    if (line.substr(0, space) != name) {
      Fail("agent file line ", next, ": expected '", name, "', got '", line,
           "'");
    }
    return space == std::string::npos ? "" : line.substr(space + 1);
  };
  const std::string version = header(kMagic);
  const std::vector<std::string> parts = Split(version, '.');
  if (parts.size() != 2) Fail("malformed agent format version '", version, "'");
  if (ParseInt(parts[0]) != kAgentFormatMajor) {
    Fail("agent format ", version, " is not readable by version ",
         kAgentFormatMajor, ".", kAgentFormatMinor);
  }
  AgentMetadata meta;
  meta.env_config = header("env_config");
  const std::string hash = header("env_hash");
  meta.symmetry = header("symmetry");
  meta.learner = header("learner");
  meta.seed = static_cast<uint64_t>(std::stoull(header("seed")));
  meta.steps = ParseInt(header("steps"));
  meta.encoder = header("encoder");
  const int num_actions = static_cast<int>(ParseInt(header("actions")));
  const int64_t entries = ParseInt(header("entries"));
  Agent agent(meta, num_actions);
  if (HexU64(agent.metadata().env_hash) != hash) {
    Fail("agent env hash ", hash, " does not match its env_config (",
         HexU64(agent.metadata().env_hash), ")");
  }
  if (static_cast<int64_t>(lines.size() - next) != entries) {
    Fail("agent file declares ", entries, " entries but holds ",
         lines.size() - next);
  }
  for (; next < lines.size(); ++next) {
    const std::vector<std::string> fields = Split(lines[next], '\t');
    if (fields.size() != 4) {
      Fail("agent file line ", next + 1, ": expected 4 tab-separated fields");
    }
    PolicyEntry e;
    for (char c : fields[1]) {
      if (c != '0' && c != '1') Fail("agent file line ", next + 1, ": bad mask");
      e.legal.push_back(c == '1');
    }
    for (const auto& v : Split(fields[2], ',')) e.values.push_back(ParseDouble(v));
    for (const auto& v : Split(fields[3], ',')) e.probs.push_back(ParseDouble(v));
    agent.SetEntry(fields[0], std::move(e));
  }
  return agent;
}

void Agent::Save(const std::string& path) const { WriteFile(path, Serialize()); }

Agent Agent::Load(const std::string& path) { return Parse(ReadFile(path)); }

Agent UniformAgent(const std::string& env_config, int num_actions,
                   const std::string& encoder) {
  AgentMetadata meta;
  meta.env_config = env_config;
  meta.learner = "uniform";
  meta.encoder = encoder;
  return Agent(meta, num_actions);
}

Agent TabularAgent(AgentMetadata metadata,
                   const std::array<TabularPolicy, kNumPlayers>& policies) {
  Agent agent(std::move(metadata), policies[0].num_actions());
  for (int seat = 0; seat < kNumPlayers; ++seat) {
    for (const auto& [history, probs] : policies[seat].table()) {
      PolicyEntry entry{AllLegal(agent.num_actions()), probs, probs};
      agent.SetEntry(std::to_string(seat) + ":" + AohKey(history),
                     std::move(entry));
    }
  }
  return agent;
}

TabularPolicy SeatPolicy(const Agent& agent, int seat, bool greedy) {
  TabularPolicy policy(seat, agent.num_actions());
  const std::string prefix = std::to_string(seat) + ":";
  for (const auto& [key, entry] : agent.table()) {
    if (key.compare(0, prefix.size(), prefix) != 0) continue;
    const Aoh history = ParseAohKey(std::string_view(key).substr(prefix.size()));
    if (!greedy) {
      policy.Set(history, entry.probs);
      continue;
    }
    const int best = agent.GreedyAction(key, entry.legal);
    std::vector<double> one_hot(agent.num_actions(), 0.0);
    one_hot[best] = 1.0;
    policy.Set(history, std::move(one_hot));
  }
  return policy;
}

std::vector<bool> AllLegal(int num_actions) {
  return std::vector<bool>(num_actions, true);
}

int UniformLegalAction(const std::vector<bool>& legal, Rng& rng) {
  std::vector<int> options;
  for (int a = 0; a < static_cast<int>(legal.size()); ++a) {
    if (legal[a]) options.push_back(a);
  }
  if (options.empty()) Fail("no legal action available");
  return options[rng.UniformInt(static_cast<int>(options.size()))];
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) Fail("cannot open '", path, "'");
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

void WriteFile(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) Fail("cannot write '", path, "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) Fail("write to '", path, "' failed");
}

}  // namespace coordlab
