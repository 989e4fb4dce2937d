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

// Run configs: line-oriented "section.key = value" files. Blank lines and
// lines starting with '#' are ignored. Every error names the file and line.
//
//   env.kind = mini_hanabi
//   symmetry.group = color
//   learner.rule = otherplay_marl
//   learner.seeds = 0..2
//   eval.games = 1000

#ifndef COORDLAB_RUN_CONFIG_H_
#define COORDLAB_RUN_CONFIG_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coordlab/env_spec.h"
#include "coordlab/exact_learners.h"
#include "coordlab/marl.h"

namespace coordlab {

struct ConfigEntry {
  std::string section;
  std::string key;
  std::string value;
  int line = 0;
};

// Syntax only: one entry per non-comment line, duplicates rejected.
std::vector<ConfigEntry> ParseConfigEntries(std::string_view text,
                                            const std::string& source);

enum class LearnerRule {
  kSpExact,
  kOpExact,
  kSelfPlayMarl,
  kOtherPlayMarl,
  kCognitiveHierarchy,
  kKLevel,
  kPopulation,
};

std::string LearnerRuleName(LearnerRule rule);
bool IsExactRule(LearnerRule rule);

struct EvalConfig {
  int games = 1000;
  int episodes = 1000;
  uint64_t seed = 0;
  bool both_orders = false;
};

struct RunConfig {
  EnvSpec env;
  std::string symmetry = "none";
  LearnerRule rule = LearnerRule::kSelfPlayMarl;
  std::vector<uint64_t> seeds;
  ExactTrainConfig exact;
  MarlTrainConfig marl;
  // Trained levels for cognitive_hierarchy / k_level.
  int levels = 3;
  int population_size = 2;
  EvalConfig eval;
  std::string source;

  // Parses and validates, including verification of the symmetry group
  // against the environment unless `verify_symmetry` is off; failures carry
  // the witness.
  static RunConfig Parse(std::string_view text, const std::string& source,
                         bool verify_symmetry = true);
  static RunConfig Load(const std::string& path, bool verify_symmetry = true);
};

// "0,1,5" or inclusive ranges "0..29", possibly mixed.
std::vector<uint64_t> ParseSeedList(std::string_view text);

}  // namespace coordlab

#endif  // COORDLAB_RUN_CONFIG_H_
