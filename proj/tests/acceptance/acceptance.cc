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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. Trains from the shipped configs, so a full run
// takes a few minutes on one core.
//
//   acceptance [--work DIR] [--only NAME]

#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "coordlab/agent.h"
#include "coordlab/env_spec.h"
#include "coordlab/evaluation.h"
#include "coordlab/exact_learners.h"
#include "coordlab/hanabi_play.h"
#include "coordlab/marl.h"
#include "coordlab/run_config.h"
#include "coordlab/runner.h"
#include "coordlab/symmetry.h"
#include "coordlab/tabular_envs.h"
#include "coordlab/text.h"
#include "../test_util.h"

namespace coordlab {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Fmt(const char* format, ...) __attribute__((format(printf, 1, 2)));
std::string Fmt(const char* format, ...) {
  char buf[1024];
  va_list args;
  va_start(args, format);
  vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

fs::path g_work;

std::string ConfigPath(const std::string& name) {
  return (fs::path(COORDLAB_SOURCE_DIR) / "configs" / name).string();
}

fs::path FreshDir(const std::string& name) {
  const fs::path dir = g_work / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

double Mean(const std::vector<double>& xs) {
  double total = 0.0;
  for (double x : xs) total += x;
  return xs.empty() ? 0.0 : total / xs.size();
}

Aoh Start() {
  Aoh h;
  h.observations = {0};
  return h;
}

int Argmax(const std::vector<double>& p) {
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

// Lever criteria share this: exact training on every seed of a config, then
// train value and exact cross-play over ordered seed pairs s != t.
struct LeverRun {
  std::vector<std::array<TabularPolicy, 2>> policies;
  std::vector<double> train;
  double cross = 0.0;
};

LeverRun RunLever(const RunConfig& config) {
  const TabularDecPOMDP game = config.env.Tabular();
  const SymmetryGroup group = BuildSymmetryGroup(config.env, config.symmetry);
  LeverRun run;
  for (uint64_t seed : config.seeds) {
    ExactTrainConfig exact = config.exact;
    exact.seed = seed;
    ExactTrainResult r = config.rule == LearnerRule::kOpExact
                             ? OpExact(game, group, exact)
                             : SpExact(game, exact);
    run.train.push_back(r.curve.back());
    run.policies.push_back(r.policies);
  }
  std::vector<double> cross;
  for (size_t s = 0; s < run.policies.size(); ++s) {
    for (size_t t = 0; t < run.policies.size(); ++t) {
      if (s == t) continue;
      cross.push_back(ExpectedReturnExact(game, run.policies[s][0],
                                          run.policies[t][1]));
    }
  }
  run.cross = Mean(cross);
  return run;
}

Outcome LeverOp() {
  const RunConfig config = RunConfig::Load(ConfigPath("lever_op.txt"));
  const LeverRun run = RunLever(config);
  int on_safe = 0;
  for (const auto& pi : run.policies) {
    on_safe += Argmax(pi[0].Probs(Start())) == 9 && Argmax(pi[1].Probs(Start())) == 9;
  }
  const double train = Mean(run.train);
  Outcome o;
  o.pass = run.policies.size() == 30 && on_safe >= 29 && train >= 0.88 &&
           train <= 0.90 && run.cross >= 0.88 && run.cross <= 0.90;
  o.detail = Fmt("seeds=%zu on_0.9_lever=%d train=%.4f cross=%.4f",
                 run.policies.size(), on_safe, train, run.cross);
  return o;
}

Outcome LeverSp() {
  const RunConfig config = RunConfig::Load(ConfigPath("lever_sp.txt"));
  const LeverRun run = RunLever(config);
  const double train = Mean(run.train);
  Outcome o;
  o.pass = run.policies.size() == 30 && train >= 0.99 && run.cross >= 0.06 &&
           run.cross <= 0.17;
  o.detail = Fmt("seeds=%zu train=%.4f cross=%.4f", run.policies.size(), train,
                 run.cross);
  return o;
}

LeverGameConfig Levers(std::vector<double> payoffs) {
  LeverGameConfig c;
  c.payoffs = std::move(payoffs);
  return c;
}

Outcome MixtureIdentity() {
  const TabularDecPOMDP game = LeverGame(Levers({1, 1, 0.9}));
  const SymmetryGroup group = EnumerateSymmetries(game);
  Rng rng(1001);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const TabularPolicy a = testing::RandomPolicy(game, 0, rng);
    const TabularPolicy b = testing::RandomPolicy(game, 1, rng);
    double lhs = 0.0;
    for (const Relabeling& phi : group.elements()) {
      lhs += ExpectedReturnExact(game, a, ApplyToPolicy(phi, b));
    }
    lhs /= group.elements().size();
    const double rhs = ExpectedReturnExact(game, MixturePolicy(a, group),
                                           MixturePolicy(b, group));
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  Outcome o;
  o.pass = group.Size() == 2 && worst < 1e-9;
  o.detail = Fmt("|group|=%llu pairs=100 max_err=%.3g",
                 static_cast<unsigned long long>(group.Size()), worst);
  return o;
}

Outcome Invariance() {
  struct Case {
    std::string name;
    TabularDecPOMDP game;
    SymmetryGroup group;
  };
  std::vector<Case> cases;
  for (auto payoffs : {std::vector<double>{1, 1, 0.9}, std::vector<double>{1, 1, 1, 0.9}}) {
    const TabularDecPOMDP g = LeverGame(Levers(payoffs));
    cases.push_back({"lever" + std::to_string(payoffs.size()), g,
                     SymmetryGroup::Explicit(EnumerateSymmetries(g).Enumerate())});
  }
  const TabularDecPOMDP grid = Gridworld(GridworldConfig{});
  cases.push_back({"gridworld", grid,
                   SymmetryGroup::Explicit(EnumerateSymmetries(grid).Enumerate())});
  Rng rng(1002);
  Outcome o;
  for (const Case& c : cases) {
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
      const TabularPolicy a = testing::RandomPolicy(c.game, 0, rng);
      const TabularPolicy b = testing::RandomPolicy(c.game, 1, rng);
      const double j = ExpectedReturnExact(c.game, a, b);
      for (const Relabeling& phi : c.group.elements()) {
        const double k = ExpectedReturnExact(c.game, ApplyToPolicy(phi, a),
                                             ApplyToPolicy(phi, b));
        worst = std::max(worst, std::abs(j - k));
      }
    }
    o.pass &= worst < 1e-9 && c.group.Size() > 1;
    o.detail += Fmt("%s%s |group|=%llu max_err=%.3g", o.detail.empty() ? "" : " ",
                    c.name.c_str(), static_cast<unsigned long long>(c.group.Size()),
                    worst);
  }
  return o;
}

Outcome SafeLeverOptimal() {
  const LeverGameConfig config = LeverGameConfig::Canonical();
  const TabularDecPOMDP game = LeverGame(config);
  const SymmetryGroup group = LeverSymmetries(config);
  const int n = game.num_actions();
  auto det = [&](int player, int a) {
    return TabularPolicy::Deterministic(player, n, {Start()}, a);
  };
  // Every deterministic joint policy that plays the same lever in both seats,
  // against the group mixture of the partner's lever.
  std::vector<double> own(n);
  for (int a = 0; a < n; ++a) {
    own[a] = ExpectedReturnExact(game, det(0, a), MixturePolicy(det(1, a), group));
  }
  bool values_ok = std::abs(own[9] - 0.9) < 1e-12;
  for (int a = 0; a < 9; ++a) values_ok &= std::abs(own[a] - 1.0 / 9) < 1e-12;
  int best_count = 0;
  for (int a = 0; a < n; ++a) best_count += own[a] >= own[9] - 1e-12;
  // Best response in both seats to the mixture of delta(0.9).
  const TabularPolicy mix1 = MixturePolicy(det(1, 9), group);
  const TabularPolicy mix0 = MixturePolicy(det(0, 9), group);
  double best_dev = -1.0;
  for (int b = 0; b < n; ++b) {
    best_dev = std::max(best_dev, ExpectedReturnExact(game, det(0, b), mix1) -
                                      ExpectedReturnExact(game, det(0, 9), mix1));
    best_dev = std::max(best_dev, ExpectedReturnExact(game, mix0, det(1, b)) -
                                      ExpectedReturnExact(game, mix0, det(1, 9)));
  }
  Outcome o;
  o.pass = values_ok && best_count == 1 && Argmax(own) == 9 && best_dev <= 1e-12;
  o.detail = Fmt("J(0.9)=%.6f J(1.0 lever)=%.6f unique=%d best_deviation_gain=%.3g",
                 own[9], own[0], best_count == 1, best_dev);
  return o;
}

Outcome Verification() {
  EnvSpec lever;
  lever.kind = EnvKind::kLever;
  EnvSpec grid;
  grid.kind = EnvKind::kGridworld;
  EnvSpec hanabi;
  hanabi.kind = EnvKind::kMiniHanabi;
  Outcome o;
  std::vector<std::string> parts;
  for (const EnvSpec* env : {&lever, &grid, &hanabi}) {
    const bool ok = VerifyElement(*env, Relabeling::Identity(), 100, 7).passed;
    o.pass &= ok;
    parts.push_back(Fmt("identity[%s]=%s", env->RulesString().substr(0, env->RulesString().find(' ')).c_str(),
                        ok ? "pass" : "fail"));
  }
  const VerificationReport swap = VerifyElement(
      lever, Relabeling::OfActions(Permutation::Transposition(10, 0, 9)));
  o.pass &= !swap.passed && swap.condition == "reward" && !swap.witness.empty();
  parts.push_back("swap0.9<->1.0=" + std::string(swap.passed ? "pass" : "fail:" + swap.condition));

  const MiniHanabi game(hanabi.hanabi);
  const VerificationReport color =
      VerifyElement(hanabi, game.ColorRelabeling(Permutation::Transposition(2, 0, 1)), 100, 7);
  o.pass &= color.passed;
  parts.push_back(std::string("color_swap=") + (color.passed ? "pass" : "fail"));
  const VerificationReport rank =
      VerifyElement(hanabi, game.RankRelabeling(Permutation::Transposition(3, 0, 1)), 100, 7);
  o.pass &= !rank.passed && !rank.witness.empty();
  parts.push_back("rank_swap=" + std::string(rank.passed ? "pass" : "fail:" + rank.condition));
  for (const auto& p : parts) o.detail += (o.detail.empty() ? "" : " ") + p;
  return o;
}

std::vector<Agent> LoadAgents(const std::vector<std::string>& paths) {
  std::vector<Agent> agents;
  for (const auto& p : paths) agents.push_back(Agent::Load(p));
  return agents;
}

std::vector<std::string> AgentFiles(const std::vector<std::string>& written,
                                    const std::string& contains = "") {
  std::vector<std::string> out;
  for (const auto& p : written) {
    if (p.ends_with(".agent") && p.find(contains) != std::string::npos) out.push_back(p);
  }
  return out;
}

CrossPlayMatrix Matrix(const EnvSpec& env, const std::vector<Agent>& agents,
                       const std::vector<std::string>& names, int games,
                       uint64_t seed, RewardScheme scheme) {
  std::vector<const Agent*> ptrs;
  for (const Agent& a : agents) ptrs.push_back(&a);
  CrossPlayOptions options;
  options.games = games;
  options.seed = seed;
  options.scheme = scheme;
  return CrossPlay(env, ptrs, ptrs, names, names, options);
}

std::vector<std::string> Stems(const std::vector<std::string>& paths) {
  std::vector<std::string> names;
  for (const auto& p : paths) names.push_back(fs::path(p).stem().string());
  return names;
}

Outcome HanabiGap() {
  RunConfig sp = RunConfig::Load(ConfigPath("hanabi_sp.txt"));
  RunConfig op = RunConfig::Load(ConfigPath("hanabi_op.txt"));
  Outcome o;
  int both = 0;
  for (int rep = 0; rep < 3; ++rep) {
    std::vector<uint64_t> seeds;
    for (int k = 0; k < 3; ++k) seeds.push_back(sp.seeds.at(k) + 3 * rep);
    sp.seeds = op.seeds = seeds;
    std::map<std::string, CrossPlaySummary> summary;
    for (RunConfig* config : {&sp, &op}) {
      const std::string tag = config == &sp ? "sp" : "op";
      const fs::path dir = FreshDir("gap/rep" + std::to_string(rep) + "/" + tag);
      const auto files = AgentFiles(TrainRun(*config, dir.string()));
      const CrossPlayMatrix m =
          Matrix(config->env, LoadAgents(files), Stems(files), config->eval.games,
                 config->eval.seed + rep, config->env.hanabi.reward_scheme);
      WriteFile((dir / "crossplay.tsv").string(), m.ToTsv());
      summary[tag] = Summarize(m);
    }
    const CrossPlaySummary& s = summary["sp"];
    const CrossPlaySummary& p = summary["op"];
    const bool ok = p.self_play - p.cross_play < s.self_play - s.cross_play &&
                    p.cross_play > s.cross_play;
    both += ok;
    o.detail += Fmt("%srep%d[sp self=%.2f cross=%.2f | op self=%.2f cross=%.2f]%s",
                    rep ? " " : "", rep, s.self_play, s.cross_play, p.self_play,
                    p.cross_play, ok ? "" : "x");
  }
  o.pass = both >= 2;
  o.detail = Fmt("holds=%d/3 ", both) + o.detail;
  return o;
}

Outcome Binomial() {
  const double p = ExactBinomialTest(15, 3);
  Outcome o;
  o.pass = std::abs(p - 0.003769) <= 1e-6;
  o.detail = Fmt("p(15,3)=%.7f", p);
  return o;
}

double MaxRowError(const ConventionMatrix& m) {
  double worst = 0.0;
  for (size_t r = 0; r < m.probs.size(); ++r) {
    int64_t n = 0;
    double total = 0.0;
    for (size_t c = 0; c < m.probs[r].size(); ++c) {
      n += m.counts[r][c];
      total += m.probs[r][c];
    }
    if (n > 0) worst = std::max(worst, std::abs(total - 1.0));
  }
  return worst;
}

Outcome Conventions() {
  EnvSpec env;
  env.kind = EnvKind::kMiniHanabi;
  const MiniHanabi game(env.hanabi);
  const Agent uniform = UniformAgent(env.RulesString(), game.NumActions(), kHanabiEncoder);
  const ConventionMatrix m = ComputeConventions(game, uniform, 1000, 31, false);
  // Each decision picks a cell with probability 1/|legal|, so a row's count
  // is a sum of independent Bernoullis with mean n * reference; its variance
  // is at most n * ref * (1 - ref).
  double worst_z = 0.0;
  int cells = 0;
  for (size_t r = 0; r < m.probs.size(); ++r) {
    int64_t n = 0;
    for (int64_t c : m.counts[r]) n += c;
    if (n < 30) continue;
    for (size_t c = 0; c < m.probs[r].size(); ++c) {
      const double ref = m.uniform_reference[r][c];
      const double sd = std::sqrt(std::max(ref * (1 - ref), 1e-12) / n);
      worst_z = std::max(worst_z, std::abs(m.probs[r][c] - ref) / sd);
      ++cells;
    }
  }
  double trained_err = 0.0;
  const fs::path trained = g_work / "gap/rep0/sp/seed0.agent";
  if (fs::exists(trained)) {
    trained_err = MaxRowError(ComputeConventions(game, Agent::Load(trained.string()), 1000, 31));
  }
  const double uniform_err = MaxRowError(m);
  Outcome o;
  o.pass = uniform_err <= 1e-12 && trained_err <= 1e-12 && cells > 0 && worst_z < 4.5;
  o.detail = Fmt("row_sum_err uniform=%.2g trained=%.2g%s cells=%d max_z=%.2f (bound 4.5)",
                 uniform_err, trained_err, fs::exists(trained) ? "" : "(skipped)",
                 cells, worst_z);
  return o;
}

// Upper 0.1% chi-square point by Wilson-Hilferty.
double ChiSquareBound(int dof) {
  const double z = 3.09;
  return dof * std::pow(1 - 2.0 / (9 * dof) + z * std::sqrt(2.0 / (9 * dof)), 3);
}

std::pair<double, int> LevelZeroChiSquare(const MiniHanabi& game, const Agent& zero) {
  std::map<std::vector<bool>, std::vector<int>> counts;
  Rng rng(41);
  int states = 0;
  for (int e = 0; states < 20'000; ++e) {
    HanabiState state = game.NewGame(DeriveSeed(42, e));
    while (!state.IsTerminal() && states < 20'000) {
      const std::vector<bool> legal = state.LegalMask();
      const int a = zero.Act(EncodeCompact(state.Observe(state.current_player())),
                             legal, rng, false);
      auto& c = counts[legal];
      c.resize(game.NumActions());
      ++c[a];
      ++states;
      state.Apply(a);
    }
  }
  double chi2 = 0.0;
  int dof = 0;
  for (const auto& [legal, c] : counts) {
    int n = 0, k = 0;
    for (int a = 0; a < game.NumActions(); ++a) {
      n += c[a];
      k += legal[a];
      if (!legal[a] && c[a] > 0) return {1e300, 1};
    }
    if (n < 50 * k || k < 2) continue;
    for (int a = 0; a < game.NumActions(); ++a) {
      if (!legal[a]) continue;
      const double expected = static_cast<double>(n) / k;
      chi2 += (c[a] - expected) * (c[a] - expected) / expected;
    }
    dof += k - 1;
  }
  return {chi2, dof};
}

// Mean over trained levels of (self-play - intra-level cross-play).
double LevelGap(const RunConfig& config, const std::vector<std::string>& written,
                std::string& detail) {
  std::vector<double> gaps;
  for (int k = 1; k <= config.levels; ++k) {
    const auto files = AgentFiles(written, "_level" + std::to_string(k) + ".agent");
    const CrossPlaySummary s = Summarize(Matrix(config.env, LoadAgents(files), Stems(files),
                                                config.eval.games, config.eval.seed,
                                                config.env.hanabi.reward_scheme));
    gaps.push_back(s.self_play - s.cross_play);
    detail += Fmt(" L%d=%.2f/%.2f", k, s.self_play, s.cross_play);
  }
  return Mean(gaps);
}

Outcome Appendix() {
  Outcome o;
  const RunConfig ch = RunConfig::Load(ConfigPath("hanabi_ch.txt"));
  const auto ch_files = TrainRun(ch, FreshDir("appendix/ch").string());
  const MiniHanabi game(ch.env.hanabi);
  const auto zero = AgentFiles(ch_files, "seed0_level0.agent");
  const auto [chi2, dof] = LevelZeroChiSquare(game, Agent::Load(zero.at(0)));
  const bool uniform_ok = dof > 10 && chi2 < ChiSquareBound(dof);
  o.detail = Fmt("level0 chi2=%.1f dof=%d bound=%.1f;", chi2, dof, ChiSquareBound(dof));

  std::string ch_detail;
  const double ch_gap = LevelGap(ch, ch_files, ch_detail);
  const RunConfig kl = RunConfig::Load(ConfigPath("hanabi_klevel.txt"));
  std::string kl_detail;
  const double kl_gap = LevelGap(kl, TrainRun(kl, FreshDir("appendix/klevel").string()),
                                 kl_detail);
  o.detail += Fmt(" ch self/cross%s mean_gap=%.3f; klevel self/cross%s mean_gap=%.3f;",
                  ch_detail.c_str(), ch_gap, kl_detail.c_str(), kl_gap);

  const RunConfig pop = RunConfig::Load(ConfigPath("hanabi_population.txt"));
  const auto files = AgentFiles(TrainRun(pop, FreshDir("appendix/population").string()));
  const CrossPlayMatrix m = Matrix(pop.env, LoadAgents(files), Stems(files),
                                   pop.eval.games, pop.eval.seed,
                                   pop.env.hanabi.reward_scheme);
  std::vector<double> intra, inter;
  for (size_t i = 0; i < m.rows.size(); ++i) {
    for (size_t j = 0; j < m.cols.size(); ++j) {
      const bool same = m.rows[i].substr(0, m.rows[i].find('_')) ==
                        m.cols[j].substr(0, m.cols[j].find('_'));
      (same ? intra : inter).push_back(m.mean[i][j]);
    }
  }
  const bool pop_ok = !inter.empty() && Mean(intra) > Mean(inter);
  o.detail += Fmt(" population intra=%.2f inter=%.2f", Mean(intra), Mean(inter));
  o.pass = uniform_ok && ch_gap >= 0.0 && kl_gap >= 0.0 && pop_ok;
  o.detail = Fmt("level0=%s ch=%s klevel=%s population=%s; ", uniform_ok ? "ok" : "bad",
                 ch_gap >= 0.0 ? "ok" : "bad", kl_gap >= 0.0 ? "ok" : "bad",
                 pop_ok ? "ok" : "bad") + o.detail;
  return o;
}

bool SameFiles(const std::vector<std::string>& a, const std::vector<std::string>& b,
               int& compared) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (fs::path(a[i]).filename() != fs::path(b[i]).filename()) return false;
    if (ReadFile(a[i]) != ReadFile(b[i])) return false;
    ++compared;
  }
  return true;
}

Outcome Persistence() {
  Outcome o;
  int compared = 0;
  bool identical = true;
  std::vector<std::string> all;
  auto twice = [&](RunConfig config, const std::string& tag) {
    const auto a = TrainRun(config, FreshDir("determinism/" + tag + "_a").string());
    const auto b = TrainRun(config, FreshDir("determinism/" + tag + "_b").string());
    identical &= SameFiles(a, b, compared);
    all.insert(all.end(), a.begin(), a.end());
  };
  twice(RunConfig::Load(ConfigPath("lever_op.txt")), "lever_op");
  twice(RunConfig::Load(ConfigPath("gridworld_op.txt")), "gridworld_op");
  for (const char* name : {"hanabi_sp.txt", "hanabi_op.txt", "hanabi_klevel.txt",
                           "hanabi_population.txt"}) {
    RunConfig config = RunConfig::Load(ConfigPath(name));
    config.seeds = {5};
    config.marl.episodes = 20'000;
    config.marl.epsilon_decay_episodes = 10'000;
    config.marl.log_every = 2'000;
    config.levels = std::min(config.levels, 2);
    twice(config, fs::path(name).stem().string());
  }

  // Every artifact reloads to an equal value and re-serializes to the same
  // bytes.
  int reloaded = 0;
  bool round_trip = true;
  auto check = [&](bool ok, const std::string& what) {
    if (!ok) {
      round_trip = false;
      o.detail += " roundtrip_fail=" + what;
    }
    ++reloaded;
  };
  std::vector<Agent> hanabi_agents;
  for (const auto& path : all) {
    const std::string text = ReadFile(path);
    const std::string file = fs::path(path).filename().string();
    if (file.ends_with(".agent")) {
      const Agent agent = Agent::Load(path);
      check(agent.Serialize() == text && Agent::Parse(text) == agent, file);
      if (agent.metadata().encoder == kHanabiEncoder) hanabi_agents.push_back(agent);
    } else if (file.starts_with("metrics_")) {
      check(FormatMetrics(ParseMetrics(text)) == text, file);
    } else if (file.starts_with("curve_")) {
      std::ostringstream again;
      std::istringstream in(text);
      std::string line;
      std::getline(in, line);
      again << line << "\n";
      while (std::getline(in, line)) {
        const size_t tab = line.find('\t');
        again << ParseInt(line.substr(0, tab)) << "\t"
              << FormatDouble(ParseDouble(line.substr(tab + 1))) << "\n";
      }
      check(again.str() == text, file);
    } else if (file == "curves.tsv") {
      check(FormatCurves(ParseCurves(text)) == text, file);
    } else if (file == "config.txt") {
      RunConfig::Parse(text, path);
      ++reloaded;
    }
  }
  EnvSpec env;
  env.kind = EnvKind::kMiniHanabi;
  const MiniHanabi game(env.hanabi);
  std::vector<std::string> names;
  for (size_t i = 0; i < hanabi_agents.size(); ++i) names.push_back("a" + std::to_string(i));
  const CrossPlayMatrix m = Matrix(env, hanabi_agents, names, 50, 3, RewardScheme::kZeroOnBomb);
  check(CrossPlayMatrix::ParseTsv(m.ToTsv()) == m, "crossplay");
  const ConventionMatrix c = ComputeConventions(game, hanabi_agents.at(0), 200, 3);
  check(ConventionMatrix::ParseTsv(c.ToTsv()) == c, "conventions");
  std::vector<uint64_t> decks;
  for (int k = 0; k < 20; ++k) decks.push_back(DeriveSeed(9, k));
  const PairedComparison p = PairedSeedComparison(game, hanabi_agents.at(0),
                                                  hanabi_agents.at(1),
                                                  hanabi_agents.at(2), decks);
  check(PairedComparison::ParseTsv(p.ToTsv()) == p, "paired");

  o.pass = identical && round_trip && compared > 10;
  o.detail = Fmt("byte_identical=%d files_compared=%d artifacts_reloaded=%d",
                 identical, compared, reloaded) + o.detail;
  return o;
}

struct Criterion {
  std::string name;
  std::function<Outcome()> run;
  // Runtime ceiling in seconds; 0 for none.
  double limit = 0.0;
};

int Main(int argc, char** argv) {
  g_work = "acceptance_work";
  std::string only;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string flag = argv[i];
    if (flag == "--work") g_work = argv[i + 1];
    else if (flag == "--only") only = argv[i + 1];
  }
  // Conventions reuses a trained agent from the gap run, so order matters.
  const std::vector<Criterion> criteria = {
      {"lever_op", LeverOp, 10},
      {"lever_sp", LeverSp, 10},
      {"mixture_identity", MixtureIdentity, 5},
      {"symmetry_invariance", Invariance},
      {"safe_lever_best_response", SafeLeverOptimal},
      {"symmetry_verification", Verification},
      {"hanabi_op_sp_gap", HanabiGap, 1800},
      {"binomial_test", Binomial},
      {"convention_matrices", Conventions},
      {"appendix_baselines", Appendix},
      {"determinism_persistence", Persistence},
  };
  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && c.name != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit > 0 && seconds >= c.limit) {
      o.pass = false;
      o.detail += Fmt(" over the %.0f s limit", c.limit);
    }
    failures += !o.pass;
    std::printf("%s %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.name.c_str(),
                o.detail.c_str(), seconds);
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace coordlab

int main(int argc, char** argv) { return coordlab::Main(argc, argv); }
