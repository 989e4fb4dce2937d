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

// Command-line front end: train, eval, symmetry and serve.

#include <csignal>
#include <filesystem>
#include <iostream>
#include <set>

#include "CLI11.hpp"

#include "coordlab/agent.h"
#include "coordlab/env_spec.h"
#include "coordlab/error.h"
#include "coordlab/evaluation.h"
#include "coordlab/play_service.h"
#include "coordlab/run_config.h"
#include "coordlab/runner.h"
#include "coordlab/text.h"

namespace coordlab {
namespace {

namespace fs = std::filesystem;

struct LoadedAgents {
  std::vector<Agent> agents;
  std::vector<std::string> names;
};

// Paths may be agent files or directories of *.agent files. Names are file
// stems, made unique with a numeric suffix when needed.
LoadedAgents LoadAgents(const std::vector<std::string>& paths) {
  std::vector<fs::path> files;
  for (const std::string& p : paths) {
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.path().extension() == ".agent") found.push_back(entry.path());
      }
      std::sort(found.begin(), found.end());
      if (found.empty()) Fail("no .agent files in '", p, "'");
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.emplace_back(p);
    }
  }
  if (files.empty()) Fail("no agents given");
  LoadedAgents out;
  std::set<std::string> used;
  for (const fs::path& f : files) {
    out.agents.push_back(Agent::Load(f.string()));
    std::string name = f.stem().string();
    for (int k = 2; used.count(name); ++k) name = f.stem().string() + "_" + std::to_string(k);
    used.insert(name);
    out.names.push_back(name);
  }
  return out;
}

std::vector<const Agent*> Pointers(const LoadedAgents& loaded) {
  std::vector<const Agent*> out;
  for (const Agent& a : loaded.agents) out.push_back(&a);
  return out;
}

std::string OutPath(const std::string& dir, const std::string& file) {
  fs::create_directories(dir);
  return (fs::path(dir) / file).string();
}

int Train(const std::string& config_path, const std::string& out,
          const std::string& seeds) {
  RunConfig config = RunConfig::Load(config_path);
  if (!seeds.empty()) config.seeds = ParseSeedList(seeds);
  for (const std::string& path : TrainRun(config, out)) std::cout << path << "\n";
  return 0;
}

int EvalCrossPlay(const std::vector<std::string>& paths, const std::string& out,
                  int games, uint64_t seed, const std::string& scheme,
                  bool both_orders, bool stochastic) {
  const LoadedAgents loaded = LoadAgents(paths);
  const EnvSpec env = EnvSpec::ParseRules(loaded.agents.front().metadata().env_config);
  CrossPlayOptions options;
  options.games = games;
  options.seed = seed;
  options.scheme = ParseRewardScheme(scheme);
  options.both_orders = both_orders;
  options.greedy = !stochastic;
  const auto ptrs = Pointers(loaded);
  const CrossPlayMatrix m =
      CrossPlay(env, ptrs, ptrs, loaded.names, loaded.names, options);
  const CrossPlaySummary s = Summarize(m);
  WriteFile(OutPath(out, "crossplay.tsv"), m.ToTsv());
  WriteFile(OutPath(out, "crossplay_grid.tsv"), m.ToGrid());
  const std::string summary =
      s.ToString() + "worst_rule\tlowest mean off-diagonal score over row and column\n";
  WriteFile(OutPath(out, "summary.tsv"), summary);
  std::cout << summary;
  return 0;
}

int EvalConventions(const std::vector<std::string>& paths, const std::string& out,
                    int episodes, uint64_t seed, bool stochastic) {
  const LoadedAgents loaded = LoadAgents(paths);
  for (size_t i = 0; i < loaded.agents.size(); ++i) {
    const EnvSpec env = EnvSpec::ParseRules(loaded.agents[i].metadata().env_config);
    if (env.kind != EnvKind::kMiniHanabi) Fail("conventions need a mini-Hanabi agent");
    const ConventionMatrix m = ComputeConventions(MiniHanabi(env.hanabi),
                                                  loaded.agents[i], episodes, seed,
                                                  !stochastic);
    const std::string path = OutPath(out, "conventions_" + loaded.names[i] + ".tsv");
    WriteFile(path, m.ToTsv());
    std::cout << path << "\n";
  }
  return 0;
}

int EvalPaired(const std::vector<std::string>& paths, const std::string& out,
               int decks, uint64_t seed, const std::string& scheme) {
  const LoadedAgents loaded = LoadAgents(paths);
  if (loaded.agents.size() != 3) {
    Fail("paired needs exactly three agents: A, B and the partner");
  }
  const EnvSpec env = EnvSpec::ParseRules(loaded.agents[0].metadata().env_config);
  for (const Agent& a : loaded.agents) {
    if (a.metadata().env_hash != env.Hash()) Fail("agents disagree on the environment");
  }
  if (env.kind != EnvKind::kMiniHanabi) Fail("paired comparison needs mini-Hanabi agents");
  std::vector<uint64_t> seeds;
  for (int k = 0; k < decks; ++k) seeds.push_back(DeriveSeed(seed, k));
  const PairedComparison c =
      PairedSeedComparison(MiniHanabi(env.hanabi), loaded.agents[0], loaded.agents[1],
                           loaded.agents[2], seeds, ParseRewardScheme(scheme));
  WriteFile(OutPath(out, "paired.tsv"), c.ToTsv());
  std::cout << "wins " << c.wins << " ties " << c.ties << " losses " << c.losses
            << " p_value " << FormatDouble(c.p_value)
            << (c.ties_only ? " (ties only)" : "") << "\n";
  return 0;
}

EnvSpec EnvFrom(const std::string& rules, const std::string& config_path,
                std::string* group) {
  if (!rules.empty() == !config_path.empty()) Fail("give exactly one of --env and --config");
  if (!rules.empty()) return EnvSpec::ParseRules(rules);
  const RunConfig config = RunConfig::Load(config_path, /*verify_symmetry=*/false);
  if (group != nullptr && group->empty()) *group = config.symmetry;
  return config.env;
}

int SymmetryVerify(const std::string& rules, const std::string& config_path,
                   std::string group, const std::string& element, int episodes,
                   uint64_t seed) {
  if (!group.empty() && !element.empty()) Fail("give either --group or --element");
  const EnvSpec env = EnvFrom(rules, config_path, element.empty() ? &group : nullptr);
  VerificationReport report;
  if (!element.empty()) {
    report = VerifyElement(env, Relabeling::Parse(element), episodes, seed);
  } else {
    if (group.empty()) Fail("give --group or --element");
    report = VerifyGroup(env, BuildSymmetryGroup(env, group), episodes, seed);
  }
  if (report.passed) {
    std::cout << "pass\n";
    return 0;
  }
  std::cout << "fail\tcondition=" << report.condition << "\twitness=" << report.witness
            << "\n";
  return 1;
}

int SymmetryEnumerate(const std::string& rules, const std::string& config_path) {
  const EnvSpec env = EnvFrom(rules, config_path, nullptr);
  if (!env.IsTabular()) Fail("enumeration needs a tabular environment");
  const SymmetryGroup group = EnumerateSymmetries(env.Tabular());
  std::cout << "size\t" << group.Size() << "\n";
  for (const Relabeling& phi : group.elements()) std::cout << phi.ToString() << "\n";
  return 0;
}

PlayServer* g_server = nullptr;

int Serve(const std::vector<std::string>& paths, const std::string& bind) {
  const LoadedAgents loaded = LoadAgents(paths);
  std::map<std::string, Agent> agents;
  for (size_t i = 0; i < loaded.agents.size(); ++i) {
    agents.emplace(loaded.names[i], loaded.agents[i]);
  }
  const size_t colon = bind.rfind(':');
  if (colon == std::string::npos) Fail("--bind must look like host:port");
  const std::string host = bind.substr(0, colon);
  const int port = static_cast<int>(ParseInt(bind.substr(colon + 1)));
  SessionManager manager(std::move(agents));
  PlayServer server(&manager);
  const int bound = server.Bind(host, port);
  if (bound < 0) Fail("cannot bind ", bind);
  std::cout << "serving " << loaded.names.size() << " agent(s) on http://" << host
            << ":" << bound << std::endl;
  g_server = &server;
  std::signal(SIGINT, [](int) { g_server->Stop(); });
  std::signal(SIGTERM, [](int) { g_server->Stop(); });
  server.Serve();
  g_server = nullptr;
  return 0;
}

}  // namespace
}  // namespace coordlab

int main(int argc, char** argv) {
  using namespace coordlab;
  CLI::App app{"Zero-shot coordination lab: other-play, self-play and baselines"};
  app.require_subcommand(1);

  std::string config, out, seeds, scheme, env_rules, group, element, bind = "127.0.0.1:8080";
  std::vector<std::string> agents;
  int games = 1000, episodes = 1000, decks = 20, verify_episodes = 100;
  uint64_t seed = 0;
  bool both_orders = false, stochastic = false;

  CLI::App* train = app.add_subcommand("train", "train agents from a run config");
  train->add_option("--config", config, "run config file")->required();
  train->add_option("--out", out, "output directory")->required();
  train->add_option("--seeds", seeds, "override learner.seeds, e.g. 0..29");

  CLI::App* eval = app.add_subcommand("eval", "evaluate agent files");
  eval->require_subcommand(1);
  CLI::App* crossplay = eval->add_subcommand("crossplay", "cross-play matrix and summary");
  CLI::App* conventions = eval->add_subcommand("conventions", "P(own action | partner's last)");
  CLI::App* paired = eval->add_subcommand("paired", "deck-matched comparison of A and B");
  for (CLI::App* sub : {crossplay, conventions, paired}) {
    sub->add_option("--agents", agents, "agent files or directories")
        ->required()
        ->delimiter(',');
    sub->add_option("--out", out, "output directory")->required();
    sub->add_option("--seed", seed, "evaluation seed");
  }
  crossplay->add_option("--games", games, "games per cell");
  crossplay->add_option("--scheme", scheme, "zero_on_bomb or keep_on_bomb")
      ->default_val("zero_on_bomb");
  crossplay->add_flag("--both-orders", both_orders, "average both seatings per cell");
  crossplay->add_flag("--stochastic", stochastic, "sample from the stored distributions");
  conventions->add_option("--games,--episodes", episodes, "self-play episodes");
  conventions->add_flag("--stochastic", stochastic, "sample from the stored distributions");
  paired->add_option("--games,--decks", decks, "number of decks");
  paired->add_option("--scheme", scheme, "scoring")->default_val("keep_on_bomb");

  CLI::App* symmetry = app.add_subcommand("symmetry", "verify or enumerate symmetries");
  symmetry->require_subcommand(1);
  CLI::App* verify = symmetry->add_subcommand("verify", "check a group or one relabeling");
  CLI::App* enumerate = symmetry->add_subcommand("enumerate", "brute-force search");
  for (CLI::App* sub : {verify, enumerate}) {
    sub->add_option("--env", env_rules, "rules string, e.g. \"lever payoffs=1,1,0.9\"");
    sub->add_option("--config", config, "run config file");
  }
  verify->add_option("--group", group, "none, auto, color, rank or a descriptor");
  verify->add_option("--element", element, "relabeling, e.g. \"actions=[1 0 2]\"");
  verify->add_option("--episodes", verify_episodes, "coupled episodes for sampled checks");
  verify->add_option("--seed", seed, "verification seed");

  CLI::App* serve = app.add_subcommand("serve", "run the play service");
  serve->add_option("--agents", agents, "agent files or directories")
      ->required()
      ->delimiter(',');
  serve->add_option("--bind", bind, "host:port");

  CLI11_PARSE(app, argc, argv);
  try {
    if (train->parsed()) return Train(config, out, seeds);
    if (crossplay->parsed()) {
      return EvalCrossPlay(agents, out, games, seed, scheme, both_orders, stochastic);
    }
    if (conventions->parsed()) return EvalConventions(agents, out, episodes, seed, stochastic);
    if (paired->parsed()) return EvalPaired(agents, out, decks, seed, scheme);
    if (verify->parsed()) {
      return SymmetryVerify(env_rules, config, group, element, verify_episodes, seed);
    }
    if (enumerate->parsed()) return SymmetryEnumerate(env_rules, config);
    if (serve->parsed()) return Serve(agents, bind);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
