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

#include "coordlab/env_spec.h"

#include <map>

#include "coordlab/error.h"
#include "coordlab/text.h"

namespace coordlab {
namespace {

std::map<std::string, std::string> KeyValues(const std::vector<std::string>& words,
                                             size_t first) {
  std::map<std::string, std::string> out;
  for (size_t i = first; i < words.size(); ++i) {
    const size_t eq = words[i].find('=');
    if (eq == std::string::npos) Fail("expected key=value, got '", words[i], "'");
    out[words[i].substr(0, eq)] = words[i].substr(eq + 1);
  }
  return out;
}

std::string Take(std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) Fail("environment string lacks '", key, "'");
  std::string value = it->second;
  kv.erase(it);
  return value;
}

int TakeInt(std::map<std::string, std::string>& kv, const std::string& key) {
  return static_cast<int>(ParseInt(Take(kv, key)));
}

Realizer RealizerFor(const EnvSpec& env, const std::string& target) {
  if (env.kind == EnvKind::kMiniHanabi) {
    return MiniHanabi(env.hanabi).MakeRealizer(target);
  }
  if (target != "actions") Fail("tabular games only permute 'actions'");
  return ActionRealizer();
}

}  // namespace

std::string EnvSpec::RulesString() const {
  switch (kind) {
    case EnvKind::kLever:
      return lever.ToString();
    case EnvKind::kGridworld:
      return grid.ToString();
    case EnvKind::kMiniHanabi: {
      std::string s = hanabi.ToString();
      return s.substr(0, s.find(" reward_scheme="));
    }
  }
  return "";
}

uint64_t EnvSpec::Hash() const { return Fnv1a64(RulesString()); }

EnvSpec EnvSpec::ParseRules(std::string_view rules) {
  const std::vector<std::string> words = SplitWhitespace(rules);
  if (words.empty()) Fail("empty environment string");
  auto kv = KeyValues(words, 1);
  EnvSpec env;
  if (words[0] == "lever") {
    env.kind = EnvKind::kLever;
    env.lever.payoffs.clear();
    for (const auto& p : Split(Take(kv, "payoffs"), ',')) {
      env.lever.payoffs.push_back(ParseDouble(p));
    }
  } else if (words[0] == "gridworld") {
    env.kind = EnvKind::kGridworld;
    env.grid.width = TakeInt(kv, "width");
    env.grid.height = TakeInt(kv, "height");
    env.grid.horizon = TakeInt(kv, "horizon");
  } else if (words[0] == "mini_hanabi") {
    env.kind = EnvKind::kMiniHanabi;
    MiniHanabiConfig& c = env.hanabi;
    c.colors = TakeInt(kv, "colors");
    c.ranks = TakeInt(kv, "ranks");
    c.hand_size = TakeInt(kv, "hand_size");
    c.copies.clear();
    for (const auto& n : Split(Take(kv, "copies"), ',')) {
      c.copies.push_back(static_cast<int>(ParseInt(n)));
    }
    c.hint_tokens = TakeInt(kv, "hint_tokens");
    c.life_tokens = TakeInt(kv, "life_tokens");
    if (kv.count("reward_scheme")) {
      c.reward_scheme = ParseRewardScheme(Take(kv, "reward_scheme"));
    }
  } else {
    Fail("unknown environment kind '", words[0], "'");
  }
  if (!kv.empty()) Fail("unknown environment key '", kv.begin()->first, "'");
  env.Validate();
  return env;
}

void EnvSpec::Validate() const {
  switch (kind) {
    case EnvKind::kLever:
      lever.Validate();
      break;
    case EnvKind::kGridworld:
      grid.Validate();
      break;
    case EnvKind::kMiniHanabi:
      hanabi.Validate();
      break;
  }
}

TabularDecPOMDP EnvSpec::Tabular() const {
  if (kind == EnvKind::kLever) return LeverGame(lever);
  if (kind == EnvKind::kGridworld) return Gridworld(grid);
  Fail("mini-Hanabi is not a tabular game");
}

int EnvSpec::NumActions() const {
  switch (kind) {
    case EnvKind::kLever:
      return static_cast<int>(lever.payoffs.size());
    case EnvKind::kGridworld:
      return 4;
    case EnvKind::kMiniHanabi:
      return MiniHanabi(hanabi).NumActions();
  }
  return 0;
}

std::string EnvSpec::Encoder() const {
  return IsTabular() ? kAohEncoder : kHanabiEncoder;
}

SymmetryGroup BuildSymmetryGroup(const EnvSpec& env, const std::string& spec) {
  if (spec == "none" || spec == "trivial" || spec == "identity") {
    return SymmetryGroup::Trivial();
  }
  if (spec == "auto") {
    switch (env.kind) {
      case EnvKind::kLever:
        return LeverSymmetries(env.lever);
      case EnvKind::kGridworld:
        return EnumerateSymmetries(env.Tabular());
      case EnvKind::kMiniHanabi:
        return HanabiColorSymmetries(MiniHanabi(env.hanabi));
    }
  }
  if (env.kind == EnvKind::kMiniHanabi && spec == "color") {
    return HanabiColorSymmetries(MiniHanabi(env.hanabi));
  }
  if (env.kind == EnvKind::kMiniHanabi && spec == "rank") {
    return HanabiRankPermutations(MiniHanabi(env.hanabi));
  }
  return SymmetryGroup::Parse(spec, [&](const std::string& target, int) {
    return RealizerFor(env, target);
  });
}

VerificationReport VerifyElement(const EnvSpec& env, const Relabeling& phi,
                                 int episodes, uint64_t seed) {
  if (env.IsTabular()) return VerifyEquivalence(env.Tabular(), phi);
  return VerifyEquivalenceSampled(MiniHanabi(env.hanabi), phi, episodes, seed);
}

VerificationReport VerifyGroup(const EnvSpec& env, const SymmetryGroup& group,
                               int episodes, uint64_t seed) {
  std::vector<Relabeling> checks;
  if (group.kind() == SymmetryGroup::Kind::kOrbits) {
    // Adjacent transpositions generate each orbit's symmetric group.
    for (const auto& orbit : group.orbits().orbits) {
      for (size_t k = 0; k + 1 < orbit.size(); ++k) {
        checks.push_back(group.Realize(Permutation::Transposition(
            group.orbits().degree, orbit[k], orbit[k + 1])));
      }
    }
    Rng rng(DeriveSeed(seed, 1));
    for (int k = 0; k < 20; ++k) checks.push_back(group.Sample(rng));
  } else {
    checks = group.generators();
  }
  for (const Relabeling& phi : checks) {
    VerificationReport report = VerifyElement(env, phi, episodes, seed);
    if (!report.passed) {
      report.witness = "element " + phi.ToString() + ": " + report.witness;
      return report;
    }
  }
  return {};
}

}  // namespace coordlab
