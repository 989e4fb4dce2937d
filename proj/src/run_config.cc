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

#include "coordlab/run_config.h"

#include <functional>
#include <map>
#include <set>

#include "coordlab/agent.h"
#include "coordlab/error.h"
#include "coordlab/text.h"

namespace coordlab {
namespace {

struct Rule {
  const char* name;
  LearnerRule rule;
};

constexpr Rule kRules[] = {
    {"sp_exact", LearnerRule::kSpExact},
    {"op_exact", LearnerRule::kOpExact},
    {"selfplay_marl", LearnerRule::kSelfPlayMarl},
    {"otherplay_marl", LearnerRule::kOtherPlayMarl},
    {"cognitive_hierarchy", LearnerRule::kCognitiveHierarchy},
    {"k_level", LearnerRule::kKLevel},
    {"population", LearnerRule::kPopulation},
};

bool ParseBool(const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  Fail("expected true or false, got '", value, "'");
}

int ParseIntValue(const std::string& value) {
  return static_cast<int>(ParseInt(value));
}

uint64_t ParseUnsigned(std::string_view text) {
  const int64_t v = ParseInt(text);
  if (v < 0) Fail("expected a nonnegative integer, got '", text, "'");
  return static_cast<uint64_t>(v);
}

std::string Where(const std::string& source, int line) {
  return source + ":" + std::to_string(line);
}

}  // namespace

std::vector<ConfigEntry> ParseConfigEntries(std::string_view text,
                                            const std::string& source) {
  std::vector<ConfigEntry> entries;
  std::set<std::string> seen;
  const std::vector<std::string> lines = Split(text, '\n');
  for (size_t i = 0; i < lines.size(); ++i) {
    const int line = static_cast<int>(i) + 1;
    const std::string_view body = Trim(lines[i]);
    if (body.empty() || body[0] == '#') continue;
    const size_t eq = body.find('=');
    const std::string lhs(Trim(body.substr(0, eq == std::string::npos ? 0 : eq)));
    const size_t dot = lhs.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot == 0 ||
        dot + 1 == lhs.size()) {
      Fail(Where(source, line), ": expected 'section.key = value', got '", body,
           "'");
    }
    ConfigEntry e{lhs.substr(0, dot), lhs.substr(dot + 1),
                  std::string(Trim(body.substr(eq + 1))), line};
    if (e.value.empty()) Fail(Where(source, line), ": '", lhs, "' has no value");
    if (!seen.insert(lhs).second) {
      Fail(Where(source, line), ": duplicate key '", lhs, "'");
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

std::string LearnerRuleName(LearnerRule rule) {
  for (const Rule& r : kRules) {
    if (r.rule == rule) return r.name;
  }
  return "";
}

bool IsExactRule(LearnerRule rule) {
  return rule == LearnerRule::kSpExact || rule == LearnerRule::kOpExact;
}

std::vector<uint64_t> ParseSeedList(std::string_view text) {
  std::vector<uint64_t> seeds;
  for (const std::string& part : Split(text, ',')) {
    const std::string item(Trim(part));
    const size_t range = item.find("..");
    if (range == std::string::npos) {
      seeds.push_back(ParseUnsigned(item));
      continue;
    }
    const uint64_t lo = ParseUnsigned(item.substr(0, range));
    const uint64_t hi = ParseUnsigned(item.substr(range + 2));
    if (hi < lo || hi - lo >= 100'000) Fail("bad seed range '", item, "'");
    for (uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  }
  if (seeds.empty()) Fail("seed list is empty");
  return seeds;
}

RunConfig RunConfig::Parse(std::string_view text, const std::string& source,
                           bool verify_symmetry) {
  const std::vector<ConfigEntry> entries = ParseConfigEntries(text, source);
  RunConfig config;
  config.source = std::string(text);

  // The environment kind decides which env keys apply, so read it first.
  std::string kind = "mini_hanabi";
  for (const auto& e : entries) {
    if (e.section == "env" && e.key == "kind") kind = e.value;
  }
  static const std::map<std::string, EnvKind> kKinds{
      {"lever", EnvKind::kLever},
      {"gridworld", EnvKind::kGridworld},
      {"mini_hanabi", EnvKind::kMiniHanabi}};
  bool scheme_set = false;
  bool env_scheme_set = false;
  using Setter = std::function<void(const std::string&)>;
  const std::map<std::string, std::map<std::string, Setter>> keys{
      {"env",
       {{"kind",
         [&](const std::string& v) {
           auto it = kKinds.find(v);
           if (it == kKinds.end()) Fail("unknown environment kind '", v, "'");
           config.env.kind = it->second;
         }},
        {"payoffs",
         [&](const std::string& v) {
           config.env.lever.payoffs.clear();
           for (const auto& p : Split(v, ',')) {
             config.env.lever.payoffs.push_back(ParseDouble(Trim(p)));
           }
         }},
        {"width", [&](const std::string& v) { config.env.grid.width = ParseIntValue(v); }},
        {"height", [&](const std::string& v) { config.env.grid.height = ParseIntValue(v); }},
        {"horizon", [&](const std::string& v) { config.env.grid.horizon = ParseIntValue(v); }},
        {"colors", [&](const std::string& v) { config.env.hanabi.colors = ParseIntValue(v); }},
        {"ranks", [&](const std::string& v) { config.env.hanabi.ranks = ParseIntValue(v); }},
        {"hand_size", [&](const std::string& v) { config.env.hanabi.hand_size = ParseIntValue(v); }},
        {"copies",
         [&](const std::string& v) {
           config.env.hanabi.copies.clear();
           for (const auto& n : Split(v, ',')) {
             config.env.hanabi.copies.push_back(ParseIntValue(std::string(Trim(n))));
           }
         }},
        {"hint_tokens", [&](const std::string& v) { config.env.hanabi.hint_tokens = ParseIntValue(v); }},
        {"life_tokens", [&](const std::string& v) { config.env.hanabi.life_tokens = ParseIntValue(v); }},
        {"reward_scheme",
         [&](const std::string& v) {
           config.env.hanabi.reward_scheme = ParseRewardScheme(v);
           env_scheme_set = true;
         }}}},
      {"symmetry", {{"group", [&](const std::string& v) { config.symmetry = v; }}}},
      {"learner",
       {{"rule",
         [&](const std::string& v) {
           for (const Rule& r : kRules) {
             if (v == r.name) {
               config.rule = r.rule;
               return;
             }
           }
           Fail("unknown learner rule '", v, "'");
         }},
        {"seeds", [&](const std::string& v) { config.seeds = ParseSeedList(v); }},
        {"learning_rate",
         [&](const std::string& v) {
           config.exact.learning_rate = config.marl.learning_rate = ParseDouble(v);
         }},
        {"steps", [&](const std::string& v) { config.exact.steps = ParseIntValue(v); }},
        {"init_scale", [&](const std::string& v) { config.exact.init_scale = ParseDouble(v); }},
        {"snapshot_every", [&](const std::string& v) { config.exact.snapshot_every = ParseIntValue(v); }},
        {"orbit_balanced_init",
         [&](const std::string& v) { config.exact.orbit_balanced_init = ParseBool(v); }},
        {"episodes", [&](const std::string& v) { config.marl.episodes = ParseInt(v); }},
        {"epsilon_start", [&](const std::string& v) { config.marl.epsilon_start = ParseDouble(v); }},
        {"epsilon_end", [&](const std::string& v) { config.marl.epsilon_end = ParseDouble(v); }},
        {"epsilon_decay_episodes",
         [&](const std::string& v) { config.marl.epsilon_decay_episodes = ParseInt(v); }},
        {"discount", [&](const std::string& v) { config.marl.discount = ParseDouble(v); }},
        {"encoder", [&](const std::string& v) { config.marl.encoder = v; }},
        {"reward_scheme",
         [&](const std::string& v) {
           config.marl.reward_scheme = ParseRewardScheme(v);
           scheme_set = true;
         }},
        {"log_every", [&](const std::string& v) { config.marl.log_every = ParseInt(v); }},
        {"levels", [&](const std::string& v) { config.levels = ParseIntValue(v); }},
        {"population_size",
         [&](const std::string& v) { config.population_size = ParseIntValue(v); }}}},
      {"eval",
       {{"games", [&](const std::string& v) { config.eval.games = ParseIntValue(v); }},
        {"episodes", [&](const std::string& v) { config.eval.episodes = ParseIntValue(v); }},
        {"seed", [&](const std::string& v) { config.eval.seed = ParseUnsigned(v); }},
        {"both_orders", [&](const std::string& v) { config.eval.both_orders = ParseBool(v); }}}},
  };
  static const std::map<std::string, EnvKind> kEnvKeyKind{
      {"payoffs", EnvKind::kLever},          {"width", EnvKind::kGridworld},
      {"height", EnvKind::kGridworld},       {"horizon", EnvKind::kGridworld},
      {"colors", EnvKind::kMiniHanabi},      {"ranks", EnvKind::kMiniHanabi},
      {"hand_size", EnvKind::kMiniHanabi},   {"copies", EnvKind::kMiniHanabi},
      {"hint_tokens", EnvKind::kMiniHanabi}, {"life_tokens", EnvKind::kMiniHanabi},
      {"reward_scheme", EnvKind::kMiniHanabi}};

  for (const auto& e : entries) {
    const std::string where = Where(source, e.line);
    auto section = keys.find(e.section);
    if (section == keys.end()) Fail(where, ": unknown section '", e.section, "'");
    auto setter = section->second.find(e.key);
    if (setter == section->second.end()) {
      Fail(where, ": unknown key '", e.section, ".", e.key, "'");
    }
    try {
      setter->second(e.value);
      if (e.section == "env") {
        auto k = kEnvKeyKind.find(e.key);
        if (k != kEnvKeyKind.end() && kKinds.count(kind) &&
            kKinds.at(kind) != k->second) {
          Fail("key does not apply to env.kind = ", kind);
        }
      }
    } catch (const CoordError& err) {
      Fail(where, ": ", e.section, ".", e.key, ": ", err.what());
    }
  }

  // Appendix baselines train without the bomb-out penalty unless told
  // otherwise.
  if (!scheme_set && (config.rule == LearnerRule::kCognitiveHierarchy ||
                      config.rule == LearnerRule::kKLevel ||
                      config.rule == LearnerRule::kPopulation)) {
    config.marl.reward_scheme = RewardScheme::kKeepOnBomb;
  }
  if (!env_scheme_set) config.env.hanabi.reward_scheme = config.marl.reward_scheme;

  auto fail = [&](auto&&... args) {
    Fail(source, ": ", std::forward<decltype(args)>(args)...);
  };
  if (config.seeds.empty()) fail("learner.seeds is required");
  try {
    config.env.Validate();
    if (IsExactRule(config.rule)) {
      config.exact.Validate();
    } else {
      config.marl.Validate();
    }
  } catch (const CoordError& err) {
    fail(err.what());
  }
  const bool exact = IsExactRule(config.rule);
  if (exact != config.env.IsTabular()) {
    fail("learner.rule = ", LearnerRuleName(config.rule),
         " does not apply to env.kind = ", kind);
  }
  const bool other_play = config.rule == LearnerRule::kOpExact ||
                          config.rule == LearnerRule::kOtherPlayMarl;
  if (!other_play && config.symmetry != "none") {
    fail("symmetry.group applies only to op_exact and otherplay_marl");
  }
  if (config.levels < 1) fail("learner.levels must be at least 1");
  if (config.population_size < 1) fail("learner.population_size must be at least 1");
  if (config.eval.games < 1 || config.eval.episodes < 1) {
    fail("eval.games and eval.episodes must be positive");
  }
  if (other_play) {
    SymmetryGroup group = SymmetryGroup::Trivial();
    try {
      group = BuildSymmetryGroup(config.env, config.symmetry);
    } catch (const CoordError& err) {
      fail("symmetry.group: ", err.what());
    }
    const VerificationReport report =
        verify_symmetry ? VerifyGroup(config.env, group) : VerificationReport{};
    if (!report.passed) {
      fail("symmetry.group = ", config.symmetry, " fails verification on the ",
           report.condition, " condition: ", report.witness);
    }
  }
  return config;
}

RunConfig RunConfig::Load(const std::string& path, bool verify_symmetry) {
  return Parse(ReadFile(path), path, verify_symmetry);
}

}  // namespace coordlab
