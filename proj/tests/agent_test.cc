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

#include <cstdio>
#include <filesystem>

#include "doctest.h"

#include "coordlab/agent.h"
#include "coordlab/env_spec.h"
#include "coordlab/error.h"
#include "coordlab/exact_learners.h"
#include "coordlab/text.h"

namespace coordlab {
namespace {

Agent SmallAgent() {
  EnvSpec env;
  AgentMetadata meta;
  meta.env_config = env.RulesString();
  meta.learner = "selfplay_marl";
  meta.seed = 12;
  meta.steps = 345;
  meta.encoder = kHanabiEncoder;
  Agent agent(meta, 4);
  agent.SetEntry("k|1", {{true, true, false, true},
                         {0.5, -1.25, 0.0, 0.1},
                         {0.1, 0.1, 0.0, 0.8}});
  agent.SetEntry("k|2", {{false, true, false, false},
                         {0.0, 3.0, 0.0, 0.0},
                         {0.0, 1.0, 0.0, 0.0}});
  return agent;
}

TEST_CASE("agent files round-trip byte-identically") {
  const Agent agent = SmallAgent();
  const std::string text = agent.Serialize();
  const Agent back = Agent::Parse(text);
  CHECK(back == agent);
  CHECK(back.Serialize() == text);

  const auto path = std::filesystem::temp_directory_path() / "coordlab_agent.txt";
  agent.Save(path.string());
  CHECK(Agent::Load(path.string()) == agent);
  CHECK(ReadFile(path.string()) == text);
  std::filesystem::remove(path);
}

TEST_CASE("agent header carries the rules hash") {
  const Agent agent = SmallAgent();
  CHECK(agent.metadata().env_hash == EnvSpec().Hash());
  CHECK(agent.metadata().env_hash == Fnv1a64(agent.metadata().env_config));
}

TEST_CASE("agent files refuse a tampered hash or a new major version") {
  const std::string text = SmallAgent().Serialize();
  std::string bad_hash = text;
  const size_t at = bad_hash.find("env_hash ") + 9;
  bad_hash[at] = bad_hash[at] == '0' ? '1' : '0';
  CHECK_THROWS_WITH_AS(Agent::Parse(bad_hash), doctest::Contains("hash"),
                       CoordError);
  std::string bad_version = text;
  bad_version.replace(bad_version.find("1.0"), 3, "2.0");
  CHECK_THROWS_AS(Agent::Parse(bad_version), CoordError);
  CHECK_THROWS_AS(Agent::Load("/nonexistent/agent.txt"), CoordError);
}

TEST_CASE("policy entries are validated") {
  Agent agent = SmallAgent();
  // Mass on an illegal action.
  CHECK_THROWS(agent.SetEntry("x", {{true, false, true, true},
                                    {0, 0, 0, 0},
                                    {0.5, 0.5, 0.0, 0.0}}));
  // Not normalized.
  CHECK_THROWS(agent.SetEntry("x", {{true, true, true, true},
                                    {0, 0, 0, 0},
                                    {0.5, 0.4, 0.0, 0.0}}));
  CHECK_THROWS(agent.SetEntry("bad\tkey", {{true, true, true, true},
                                           {0, 0, 0, 0},
                                           {0.25, 0.25, 0.25, 0.25}}));
}

TEST_CASE("greedy play breaks ties low and falls back to uniform") {
  Agent agent = SmallAgent();
  agent.SetEntry("tie", {{true, true, true, true},
                         {1.0, 2.0, 2.0, 0.0},
                         {0.25, 0.25, 0.25, 0.25}});
  const std::vector<bool> all = AllLegal(4);
  CHECK(agent.GreedyAction("tie", all) == 1);
  CHECK(agent.GreedyAction("unseen", all) == -1);
  const std::vector<bool> legal{false, true, true, false};
  const auto dist = agent.Distribution("unseen", legal);
  CHECK(dist == std::vector<double>{0.0, 0.5, 0.5, 0.0});
  Rng rng(1);
  std::array<int, 4> counts{};
  for (int i = 0; i < 2000; ++i) ++counts[agent.Act("unseen", legal, rng, true)];
  CHECK(counts[0] == 0);
  CHECK(counts[3] == 0);
  CHECK(counts[1] > 900);
  CHECK(counts[2] > 900);
}

TEST_CASE("tabular agents reproduce the trained seat policies") {
  EnvSpec env;
  env.kind = EnvKind::kLever;
  const TabularDecPOMDP game = env.Tabular();
  ExactTrainConfig config;
  config.steps = 20;
  const ExactTrainResult r = SpExact(game, config);
  AgentMetadata meta;
  meta.env_config = env.RulesString();
  meta.learner = "sp_exact";
  meta.encoder = kAohEncoder;
  const Agent agent = TabularAgent(meta, r.policies);
  CHECK(Agent::Parse(agent.Serialize()) == agent);
  for (int seat = 0; seat < kNumPlayers; ++seat) {
    CHECK(SeatPolicy(agent, seat, false) == r.policies[seat]);
    CHECK(SeatPolicy(agent, seat, true) == GreedyPolicy(r.policies[seat]));
  }
}

TEST_CASE("rules strings round-trip and exclude the reward scheme") {
  for (const char* rules :
       {"lever payoffs=1,1,0.9", "gridworld width=3 height=5 horizon=4",
        "mini_hanabi colors=3 ranks=2 hand_size=2 copies=2,1 hint_tokens=2 "
        "life_tokens=2"}) {
    const EnvSpec env = EnvSpec::ParseRules(rules);
    CHECK(env.RulesString() == rules);
  }
  EnvSpec a, b;
  b.hanabi.reward_scheme = RewardScheme::kKeepOnBomb;
  CHECK(a.Hash() == b.Hash());
  b.hanabi.hint_tokens = 2;
  CHECK(a.Hash() != b.Hash());
  CHECK_THROWS(EnvSpec::ParseRules("lever"));
  CHECK_THROWS(EnvSpec::ParseRules("gridworld width=2 height=3 horizon=1"));
  CHECK_THROWS(EnvSpec::ParseRules("lever payoffs=1,1 extra=3"));
  CHECK_THROWS(EnvSpec::ParseRules("chess"));
}

TEST_CASE("symmetry specs build and verify per environment") {
  EnvSpec hanabi;
  CHECK(VerifyGroup(hanabi, BuildSymmetryGroup(hanabi, "color")).passed);
  const VerificationReport rank =
      VerifyGroup(hanabi, BuildSymmetryGroup(hanabi, "rank"));
  CHECK_FALSE(rank.passed);
  CHECK(rank.condition == "reward");
  EnvSpec lever;
  lever.kind = EnvKind::kLever;
  const SymmetryGroup g = BuildSymmetryGroup(lever, "auto");
  CHECK(g.Size() == 362880);
  CHECK(VerifyGroup(lever, g).passed);
  CHECK(BuildSymmetryGroup(lever, "none").Size() == 1);
  const VerificationReport swap = VerifyElement(lever, Relabeling::Parse(
      "actions=[9 1 2 3 4 5 6 7 8 0]"));
  CHECK_FALSE(swap.passed);
  CHECK(swap.condition == "reward");
  CHECK_THROWS(BuildSymmetryGroup(lever, "color"));
}

}  // namespace
}  // namespace coordlab
