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

#include "coordlab/marl.h"

#include <algorithm>
#include <array>
#include <optional>
#include <sstream>

#include "coordlab/env_spec.h"
#include "coordlab/error.h"
#include "coordlab/hanabi_play.h"
#include "coordlab/text.h"

namespace coordlab {
namespace {

constexpr uint64_t kDeckStream = 0x6465636b;
constexpr uint64_t kFrameStream = 0x6672616d65;
constexpr uint64_t kPairStream = 0x70616972;

struct Seat {
  QTable* table = nullptr;
  const Agent* fixed = nullptr;
};

struct Step {
  QTable::Row* row;
  int action;
  double reward = 0.0;
  int next = -1;
};

int GreedyRandomTies(const QTable::Row& row, Rng& rng) {
  double best = 0.0;
  int count = 0;
  int choice = -1;
  for (int a = 0; a < static_cast<int>(row.q.size()); ++a) {
    if (!row.legal[a]) continue;
    if (count == 0 || row.q[a] > best) {
      best = row.q[a];
      count = 1;
      choice = a;
    } else if (row.q[a] == best) {
      // Reservoir sampling over the tied maxima.
      if (rng.UniformInt(++count) == 0) choice = a;
    }
  }
  return choice;
}

double MaxLegal(const QTable::Row& row) {
  double best = 0.0;
  bool any = false;
  for (size_t a = 0; a < row.q.size(); ++a) {
    if (row.legal[a] && (!any || row.q[a] > best)) {
      best = row.q[a];
      any = true;
    }
  }
  return best;
}

// Plays one training episode and applies backward Q-learning updates to the
// tables of learning seats. Returns the episode return.
double RunEpisode(const MiniHanabi& game, uint64_t deck_seed, Rng& rng,
                  const std::array<Seat, kNumPlayers>& seats,
                  const OtherPlayWrapper& frames, double epsilon,
                  const MarlTrainConfig& config) {
  HanabiState state = game.NewGame(deck_seed);
  std::vector<Step> steps;
  std::array<int, kNumPlayers> open{-1, -1};
  double total = 0.0;
  while (!state.IsTerminal()) {
    const int p = state.current_player();
    const FramedView view = frames.View(state, p);
    int a;
    if (seats[p].table != nullptr) {
      QTable::Row& row = seats[p].table->Touch(view.key, view.legal);
      if (rng.UniformDouble() < epsilon) {
        a = UniformLegalAction(view.legal, rng);
      } else {
        a = GreedyRandomTies(row, rng);
      }
      const int index = static_cast<int>(steps.size());
      steps.push_back({&row, a});
      if (open[p] >= 0) steps[open[p]].next = index;
      open[p] = index;
    } else {
      a = seats[p].fixed->Act(view.key, view.legal, rng, /*greedy=*/true);
    }
    const double r = state.Apply(frames.ToEnv(p, a));
    total += r;
    for (int i = 0; i < kNumPlayers; ++i) {
      if (open[i] >= 0) steps[open[i]].reward += r;
    }
  }
  for (int k = static_cast<int>(steps.size()) - 1; k >= 0; --k) {
    Step& s = steps[k];
    const double bootstrap =
        s.next >= 0 ? config.discount * MaxLegal(*steps[s.next].row) : 0.0;
    double& q = s.row->q[s.action];
    q += config.learning_rate * (s.reward + bootstrap - q);
  }
  return total;
}

class MetricsLogger {
 public:
  explicit MetricsLogger(const MarlTrainConfig& config) : config_(config) {}
  void Add(int64_t episode, double ret) {
    sum_ += ret;
    ++count_;
    if ((episode + 1) % config_.log_every == 0 || episode + 1 == config_.episodes) {
      rows_.push_back({episode + 1, sum_ / count_, config_.Epsilon(episode)});
      sum_ = 0.0;
      count_ = 0;
    }
  }
  std::vector<MetricsRow> rows() const { return rows_; }

 private:
  const MarlTrainConfig& config_;
  double sum_ = 0.0;
  int64_t count_ = 0;
  std::vector<MetricsRow> rows_;
};

MiniHanabiConfig WithScheme(MiniHanabiConfig env, RewardScheme scheme) {
  env.reward_scheme = scheme;
  return env;
}

AgentMetadata Metadata(const MiniHanabiConfig& env, const MarlTrainConfig& config,
                       const std::string& learner, const std::string& symmetry) {
  EnvSpec spec;
  spec.kind = EnvKind::kMiniHanabi;
  spec.hanabi = env;
  AgentMetadata meta;
  meta.env_config = spec.RulesString();
  meta.symmetry = symmetry;
  meta.learner = learner;
  meta.seed = config.seed;
  meta.steps = config.episodes;
  meta.encoder = config.encoder;
  return meta;
}

uint64_t DeckSeed(const MarlTrainConfig& config, int64_t episode) {
  return DeriveSeed(DeriveSeed(config.seed, kDeckStream), episode);
}

MarlResult SharedTableTraining(const MiniHanabiConfig& env,
                               const SymmetryGroup* group,
                               const MarlTrainConfig& config,
                               const std::string& learner) {
  config.Validate();
  const MiniHanabi game(WithScheme(env, config.reward_scheme));
  QTable table(game.NumActions());
  MetricsLogger log(config);
  const OtherPlayWrapper identity(&game, {});
  const uint64_t frame_seed = DeriveSeed(config.seed, kFrameStream);
  for (int64_t e = 0; e < config.episodes; ++e) {
    Rng rng = Rng::ForEpisode(config.seed, e);
    std::optional<OtherPlayWrapper> frames;
    if (group != nullptr) {
      Rng frame_rng = Rng::ForEpisode(frame_seed, e);
      frames.emplace(&game, *group, frame_rng);
    }
    const double ret =
        RunEpisode(game, DeckSeed(config, e), rng, {Seat{&table}, Seat{&table}},
                   frames ? *frames : identity, config.Epsilon(e), config);
    log.Add(e, ret);
  }
  const std::string symmetry = group ? group->Descriptor() : "none";
  return {table.ToAgent(Metadata(env, config, learner, symmetry),
                        config.epsilon_end),
          log.rows()};
}

}  // namespace

void MarlTrainConfig::Validate() const {
  if (episodes < 1) Fail("episodes must be at least 1");
  for (double eps : {epsilon_start, epsilon_end}) {
    if (!(eps >= 0.0 && eps <= 1.0)) Fail("epsilon must lie in [0, 1]");
  }
  if (epsilon_decay_episodes < 0) Fail("epsilon_decay_episodes must be >= 0");
  if (!(learning_rate > 0.0 && learning_rate <= 1.0)) {
    Fail("learning_rate must lie in (0, 1]");
  }
  if (!(discount > 0.0 && discount <= 1.0)) Fail("discount must lie in (0, 1]");
  if (encoder != kHanabiEncoder) Fail("unknown encoder '", encoder, "'");
  if (log_every < 1) Fail("log_every must be at least 1");
}

double MarlTrainConfig::Epsilon(int64_t episode) const {
  if (episode >= epsilon_decay_episodes) return epsilon_end;
  const double t = static_cast<double>(episode) /
                   static_cast<double>(epsilon_decay_episodes);
  return epsilon_start + t * (epsilon_end - epsilon_start);
}

std::string FormatMetrics(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  out << "episode\tmean_return\tepsilon\n";
  for (const auto& r : rows) {
    out << r.episode << "\t" << FormatDouble(r.mean_return) << "\t"
        << FormatDouble(r.epsilon) << "\n";
  }
  return out.str();
}

std::vector<MetricsRow> ParseMetrics(std::string_view text) {
  std::vector<std::string> lines = Split(text, '\n');
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines[0] != "episode\tmean_return\tepsilon") {
    Fail("metrics file lacks its header");
  }
  std::vector<MetricsRow> rows;
  for (size_t i = 1; i < lines.size(); ++i) {
    const auto f = Split(lines[i], '\t');
    if (f.size() != 3) Fail("metrics line ", i + 1, ": expected 3 fields");
    rows.push_back({ParseInt(f[0]), ParseDouble(f[1]), ParseDouble(f[2])});
  }
  return rows;
}

QTable::Row& QTable::Touch(const std::string& key,
                           const std::vector<bool>& legal) {
  auto [it, inserted] = rows_.try_emplace(key);
  if (inserted) {
    it->second.q.assign(num_actions_, 0.0);
    it->second.legal = legal;
  }
  return it->second;
}

const QTable::Row* QTable::Find(const std::string& key) const {
  auto it = rows_.find(key);
  return it == rows_.end() ? nullptr : &it->second;
}

Agent QTable::ToAgent(AgentMetadata metadata, double epsilon) const {
  Agent agent(std::move(metadata), num_actions_);
  for (const auto& [key, row] : rows_) {
    PolicyEntry entry;
    entry.legal = row.legal;
    entry.values.assign(num_actions_, 0.0);
    int best = -1;
    int n = 0;
    for (int a = 0; a < num_actions_; ++a) {
      if (!row.legal[a]) continue;
      entry.values[a] = row.q[a];
      ++n;
      if (best < 0 || row.q[a] > row.q[best]) best = a;
    }
    entry.probs.assign(num_actions_, 0.0);
    for (int a = 0; a < num_actions_; ++a) {
      if (row.legal[a]) entry.probs[a] = epsilon / n;
    }
    entry.probs[best] += 1.0 - epsilon;
    double sum = 0.0;
    for (double p : entry.probs) sum += p;
    entry.probs[best] += 1.0 - sum;
    agent.SetEntry(key, std::move(entry));
  }
  return agent;
}

MarlResult TrainSelfPlayMarl(const MiniHanabiConfig& env,
                             const MarlTrainConfig& config) {
  return SharedTableTraining(env, nullptr, config, "selfplay_marl");
}

MarlResult TrainOtherPlayMarl(const MiniHanabiConfig& env,
                              const SymmetryGroup& group,
                              const MarlTrainConfig& config) {
  return SharedTableTraining(env, &group, config, "otherplay_marl");
}

BestResponseResult BestResponseTrain(const MiniHanabiConfig& env,
                                     const std::vector<PoolMember>& pool,
                                     const MarlTrainConfig& config,
                                     const std::string& learner_id) {
  config.Validate();
  if (pool.empty()) Fail("best response needs a nonempty partner pool");
  std::vector<double> weights;
  double total = 0.0;
  for (const auto& m : pool) {
    if (!(m.weight >= 0.0)) Fail("pool weights must be nonnegative");
    weights.push_back(m.weight);
    total += m.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) Fail("pool weights sum to ", total, ", not 1");
  const MiniHanabi game(WithScheme(env, config.reward_scheme));
  QTable table(game.NumActions());
  MetricsLogger log(config);
  const OtherPlayWrapper identity(&game, {});
  const uint64_t pair_seed = DeriveSeed(config.seed, kPairStream);
  BestResponseResult result{Agent(AgentMetadata{}, 1), {}, {}};
  result.partner_log.reserve(config.episodes);
  for (int64_t e = 0; e < config.episodes; ++e) {
    Rng pair_rng = Rng::ForEpisode(pair_seed, e);
    const int partner = pair_rng.Categorical(weights);
    const int seat = pair_rng.UniformInt(kNumPlayers);
    result.partner_log.push_back(partner);
    std::array<Seat, kNumPlayers> seats;
    seats[seat].table = &table;
    seats[1 - seat].fixed = pool[partner].agent;
    Rng rng = Rng::ForEpisode(config.seed, e);
    log.Add(e, RunEpisode(game, DeckSeed(config, e), rng, seats, identity,
                          config.Epsilon(e), config));
  }
  result.agent = table.ToAgent(Metadata(env, config, learner_id, "none"),
                               config.epsilon_end);
  result.metrics = log.rows();
  return result;
}

namespace {

LevelsResult LevelTraining(const MiniHanabiConfig& env, int levels,
                           const MarlTrainConfig& config, bool whole_pool,
                           const std::string& prefix) {
  if (levels < 1) Fail("need at least one trained level");
  EnvSpec spec;
  spec.hanabi = env;
  LevelsResult result;
  result.levels.push_back(UniformAgent(spec.RulesString(),
                                       MiniHanabi(env).NumActions(),
                                       config.encoder));
  for (int k = 1; k <= levels; ++k) {
    std::vector<PoolMember> pool;
    const int first = whole_pool ? 0 : k - 1;
    for (int j = first; j < k; ++j) {
      pool.push_back({&result.levels[j], 1.0 / (k - first)});
    }
    MarlTrainConfig level_config = config;
    level_config.seed = DeriveSeed(config.seed, k);
    BestResponseResult br = BestResponseTrain(env, pool, level_config,
                                              prefix + std::to_string(k));
    br.agent.mutable_metadata().seed = config.seed;
    result.levels.push_back(std::move(br.agent));
    result.partner_logs.push_back(std::move(br.partner_log));
  }
  return result;
}

}  // namespace

LevelsResult CognitiveHierarchyTrain(const MiniHanabiConfig& env, int levels,
                                     const MarlTrainConfig& config) {
  return LevelTraining(env, levels, config, /*whole_pool=*/true, "ch_level_");
}

LevelsResult KLevelTrain(const MiniHanabiConfig& env, int levels,
                         const MarlTrainConfig& config) {
  return LevelTraining(env, levels, config, /*whole_pool=*/false, "klevel_");
}

PopulationResult PopulationTrain(const MiniHanabiConfig& env, int n,
                                 const MarlTrainConfig& config) {
  config.Validate();
  if (n < 1) Fail("population needs at least one agent");
  const MiniHanabi game(WithScheme(env, config.reward_scheme));
  std::vector<QTable> tables(n, QTable(game.NumActions()));
  MetricsLogger log(config);
  const OtherPlayWrapper identity(&game, {});
  const uint64_t pair_seed = DeriveSeed(config.seed, kPairStream);
  PopulationResult result;
  result.pairings.reserve(config.episodes);
  for (int64_t e = 0; e < config.episodes; ++e) {
    Rng pair_rng = Rng::ForEpisode(pair_seed, e);
    const int i = pair_rng.UniformInt(n);
    const int j = pair_rng.UniformInt(n);
    result.pairings.emplace_back(i, j);
    Rng rng = Rng::ForEpisode(config.seed, e);
    log.Add(e, RunEpisode(game, DeckSeed(config, e), rng,
                          {Seat{&tables[i]}, Seat{&tables[j]}}, identity,
                          config.Epsilon(e), config));
  }
  for (int k = 0; k < n; ++k) {
    const std::string id = "population_" + std::to_string(k);
    result.agents.push_back(tables[k].ToAgent(Metadata(env, config, id, "none"),
                                              config.epsilon_end));
  }
  result.metrics = log.rows();
  return result;
}

double RandomBaseline(const MiniHanabiConfig& env, RewardScheme scheme,
                      int episodes, uint64_t seed) {
  const MiniHanabi game(env);
  const Agent uniform = UniformAgent("", game.NumActions(), kHanabiEncoder);
  double total = 0.0;
  for (int e = 0; e < episodes; ++e) {
    Rng rng = Rng::ForEpisode(seed, e);
    total += PlayHanabi(game, {&uniform, &uniform}, DeriveSeed(seed, e), rng)
                 .Score(scheme);
  }
  return total / episodes;
}

}  // namespace coordlab
