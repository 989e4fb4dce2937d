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

#include "coordlab/runner.h"

#include <filesystem>
#include <map>
#include <sstream>

#include "coordlab/agent.h"
#include "coordlab/error.h"
#include "coordlab/evaluation.h"
#include "coordlab/parallel.h"
#include "coordlab/text.h"

namespace coordlab {
namespace {

namespace fs = std::filesystem;

std::string SeedName(uint64_t seed) { return "seed" + std::to_string(seed); }

std::string ObjectiveCurve(const std::vector<double>& curve) {
  std::ostringstream out;
  out << "step\tobjective\n";
  for (size_t i = 0; i < curve.size(); ++i) {
    out << i << "\t" << FormatDouble(curve[i]) << "\n";
  }
  return out.str();
}

struct Output {
  std::vector<std::pair<std::string, std::string>> files;
};

std::vector<CurvePoint> ExactCurves(const TabularDecPOMDP& game,
                                    const std::vector<ExactTrainResult>& runs) {
  std::vector<CurvePoint> points;
  const size_t n = runs.front().snapshots.size();
  for (size_t k = 0; k < n; ++k) {
    CurvePoint p;
    p.step = runs.front().snapshots[k].first;
    std::vector<double> train, test;
    for (size_t s = 0; s < runs.size(); ++s) {
      train.push_back(runs[s].curve[p.step]);
      for (size_t t = 0; t < runs.size(); ++t) {
        if (s == t) continue;
        test.push_back(ExpectedReturnExact(game, runs[s].snapshots[k].second[0],
                                           runs[t].snapshots[k].second[1]));
      }
    }
    auto mean = [](const std::vector<double>& xs) {
      double total = 0.0;
      for (double x : xs) total += x;
      return xs.empty() ? 0.0 : total / xs.size();
    };
    p.train_mean = mean(train);
    p.train_sem = Sem(train);
    p.test_mean = mean(test);
    p.test_sem = Sem(test);
    points.push_back(p);
  }
  return points;
}

}  // namespace

std::string FormatCurves(const std::vector<CurvePoint>& points) {
  std::ostringstream out;
  out << "step\ttrain_mean\ttrain_sem\ttest_mean\ttest_sem\n";
  for (const auto& p : points) {
    out << p.step << "\t" << FormatDouble(p.train_mean) << "\t"
        << FormatDouble(p.train_sem) << "\t" << FormatDouble(p.test_mean) << "\t"
        << FormatDouble(p.test_sem) << "\n";
  }
  return out.str();
}

std::vector<CurvePoint> ParseCurves(std::string_view text) {
  std::vector<std::string> lines = Split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != "step\ttrain_mean\ttrain_sem\ttest_mean\ttest_sem") {
    Fail("curve file lacks its header");
  }
  std::vector<CurvePoint> points;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto f = Split(lines[i], '\t');
    if (f.size() != 5) Fail("curve line ", i + 1, ": expected 5 fields");
    points.push_back({static_cast<int>(ParseInt(f[0])), ParseDouble(f[1]),
                      ParseDouble(f[2]), ParseDouble(f[3]), ParseDouble(f[4])});
  }
  return points;
}

std::vector<std::string> TrainRun(const RunConfig& config,
                                  const std::string& out_dir) {
  fs::create_directories(out_dir);
  const int n = static_cast<int>(config.seeds.size());
  std::vector<Output> outputs(n);
  std::vector<ExactTrainResult> exact_runs(n);
  const std::string rules = config.env.RulesString();
  const SymmetryGroup group = BuildSymmetryGroup(config.env, config.symmetry);

  ParallelFor(n, [&](int i) {
    const uint64_t seed = config.seeds[i];
    const std::string name = SeedName(seed);
    auto& files = outputs[i].files;
    if (IsExactRule(config.rule)) {
      ExactTrainConfig exact = config.exact;
      exact.seed = seed;
      const TabularDecPOMDP game = config.env.Tabular();
      ExactTrainResult r = config.rule == LearnerRule::kOpExact
                               ? OpExact(game, group, exact)
                               : SpExact(game, exact);
      AgentMetadata meta;
      meta.env_config = rules;
      meta.symmetry = config.rule == LearnerRule::kOpExact ? group.Descriptor()
                                                           : "none";
      meta.learner = LearnerRuleName(config.rule);
      meta.seed = seed;
      meta.steps = exact.steps;
      meta.encoder = kAohEncoder;
      files.emplace_back(name + ".agent", TabularAgent(meta, r.policies).Serialize());
      files.emplace_back("curve_" + name + ".tsv", ObjectiveCurve(r.curve));
      exact_runs[i] = std::move(r);
      return;
    }
    MarlTrainConfig marl = config.marl;
    marl.seed = seed;
    const MiniHanabiConfig& env = config.env.hanabi;
    switch (config.rule) {
      case LearnerRule::kSelfPlayMarl:
      case LearnerRule::kOtherPlayMarl: {
        const MarlResult r = config.rule == LearnerRule::kSelfPlayMarl
                                 ? TrainSelfPlayMarl(env, marl)
                                 : TrainOtherPlayMarl(env, group, marl);
        files.emplace_back(name + ".agent", r.agent.Serialize());
        files.emplace_back("metrics_" + name + ".tsv", FormatMetrics(r.metrics));
        break;
      }
      case LearnerRule::kCognitiveHierarchy:
      case LearnerRule::kKLevel: {
        const LevelsResult r = config.rule == LearnerRule::kKLevel
                                   ? KLevelTrain(env, config.levels, marl)
                                   : CognitiveHierarchyTrain(env, config.levels, marl);
        for (size_t k = 0; k < r.levels.size(); ++k) {
          files.emplace_back(name + "_level" + std::to_string(k) + ".agent",
                             r.levels[k].Serialize());
        }
        break;
      }
      case LearnerRule::kPopulation: {
        const PopulationResult r = PopulationTrain(env, config.population_size, marl);
        for (size_t k = 0; k < r.agents.size(); ++k) {
          files.emplace_back(name + "_member" + std::to_string(k) + ".agent",
                             r.agents[k].Serialize());
        }
        files.emplace_back("metrics_" + name + ".tsv", FormatMetrics(r.metrics));
        break;
      }
      default:
        Fail("unhandled learner rule");
    }
  });

  std::vector<std::string> written;
  auto write = [&](const std::string& file, const std::string& contents) {
    const std::string path = (fs::path(out_dir) / file).string();
    WriteFile(path, contents);
    written.push_back(path);
  };
  write("config.txt", config.source);
  for (const Output& o : outputs) {
    for (const auto& [file, contents] : o.files) write(file, contents);
  }
  if (IsExactRule(config.rule) && config.exact.snapshot_every > 0) {
    write("curves.tsv", FormatCurves(ExactCurves(config.env.Tabular(), exact_runs)));
  }
  return written;
}

}  // namespace coordlab
