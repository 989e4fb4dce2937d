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

#include "coordlab/decpomdp.h"

#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include "coordlab/error.h"
#include "coordlab/rng.h"
#include "coordlab/text.h"

namespace coordlab {

namespace {

constexpr double kRowTolerance = 1e-12;

double Sum(std::span<const double> values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

// Depth-first walk over every (state, history pair) node of the game tree.
// Value mode skips zero-probability joint actions; gradient mode expands all
// of them because dJ/dpi(a) needs the value of unplayed actions too.
class Enumerator {
 public:
  Enumerator(const TabularDecPOMDP& game, const TabularPolicy& policy0,
             const TabularPolicy& policy1, bool full_expansion)
      : game_(game),
        policies_{&policy0, &policy1},
        full_expansion_(full_expansion) {}

  double Run() {
    double total = 0.0;
    const int slot = game_.InitialSlot();
    for (int s = 0; s < game_.num_states(); ++s) {
      const double p0 = game_.Initial(s);
      if (p0 <= 0.0) continue;
      for (int o0 = 0; o0 < game_.num_observations(); ++o0) {
        const double q0 = game_.Observation(o0, s, slot, 0);
        if (q0 <= 0.0) continue;
        for (int o1 = 0; o1 < game_.num_observations(); ++o1) {
          const double q1 = game_.Observation(o1, s, slot, 1);
          if (q1 <= 0.0) continue;
          Aoh h0, h1;
          h0.observations.push_back(o0);
          h1.observations.push_back(o1);
          const double reach = p0 * q0 * q1;
          total += reach * Visit(0, s, h0, h1, reach);
        }
      }
    }
    return total;
  }

  ReturnGradient gradient;
  bool record_gradient = false;

 private:
  void CountPath() {
    if (++paths_ > kMaxEnumeratedPaths) {
      Fail("exact enumeration of '", game_.name(), "' exceeds ",
           kMaxEnumeratedPaths, " weighted paths");
    }
  }

  std::vector<double>& GradientRow(int player, const Aoh& history) {
    auto& table = gradient.wrt_probs[player];
    auto it = table.find(history);
    if (it == table.end()) {
      it = table.emplace(history, std::vector<double>(game_.num_actions(), 0.0))
               .first;
    }
    return it->second;
  }

  // Expected discounted return from step t onward (discounted relative to t).
  // `reach` carries the probability of this node times discount^t.
  double Visit(int t, int s, const Aoh& h0, const Aoh& h1, double reach) {
    if (t >= game_.horizon()) return 0.0;
    const auto& p0 = policies_[0]->Probs(h0);
    const auto& p1 = policies_[1]->Probs(h1);
    const int n = game_.num_actions();
    std::vector<double>* g0 = record_gradient ? &GradientRow(0, h0) : nullptr;
    std::vector<double>* g1 = record_gradient ? &GradientRow(1, h1) : nullptr;
    double value = 0.0;
    for (int a0 = 0; a0 < n; ++a0) {
      for (int a1 = 0; a1 < n; ++a1) {
        const double w = p0[a0] * p1[a1];
        if (w <= 0.0 && !full_expansion_) continue;
        const int joint = game_.JointAction(a0, a1);
        double q = 0.0;
        for (int s2 = 0; s2 < game_.num_states(); ++s2) {
          const double p = game_.Transition(s, joint, s2);
          if (p <= 0.0) continue;
          const double r = game_.Reward(s2, joint, s);
          double cont = 0.0;
          if (t + 1 < game_.horizon()) {
            for (int o0 = 0; o0 < game_.num_observations(); ++o0) {
              const double q0 = game_.Observation(o0, s2, joint, 0);
              if (q0 <= 0.0) continue;
              for (int o1 = 0; o1 < game_.num_observations(); ++o1) {
                const double q1 = game_.Observation(o1, s2, joint, 1);
                if (q1 <= 0.0) continue;
                Aoh c0 = h0;
                Aoh c1 = h1;
                c0.Extend(a0, r, o0);
                c1.Extend(a1, r, o1);
                const double child_reach =
                    reach * w * p * q0 * q1 * game_.discount();
                cont += q0 * q1 * Visit(t + 1, s2, c0, c1, child_reach);
              }
            }
          } else {
            CountPath();
          }
          q += p * (r + game_.discount() * cont);
        }
        if (record_gradient) {
          (*g0)[a0] += reach * p1[a1] * q;
          (*g1)[a1] += reach * p0[a0] * q;
        }
        value += w * q;
      }
    }
    return value;
  }

  const TabularDecPOMDP& game_;
  std::array<const TabularPolicy*, kNumPlayers> policies_;
  bool full_expansion_;
  int64_t paths_ = 0;
};

}  // namespace

std::string AohKey(const Aoh& history) {
  std::ostringstream out;
  out << history.observations.at(0);
  for (int t = 0; t < history.timestep(); ++t) {
    out << ' ' << history.actions[t] << ' ' << FormatDouble(history.rewards[t])
        << ' ' << history.observations[t + 1];
  }
  return out.str();
}

Aoh ParseAohKey(std::string_view key) {
  const auto tokens = SplitWhitespace(key);
  if (tokens.empty() || tokens.size() % 3 != 1) {
    Fail("malformed history key '", key, "'");
  }
  Aoh history;
  history.observations.push_back(static_cast<int>(ParseInt(tokens[0])));
  for (size_t i = 1; i < tokens.size(); i += 3) {
    history.Extend(static_cast<int>(ParseInt(tokens[i])),
                   ParseDouble(tokens[i + 1]),
                   static_cast<int>(ParseInt(tokens[i + 2])));
  }
  return history;
}

double EpisodeReturn(std::span<const double> rewards, double discount) {
  double total = 0.0;
  double weight = 1.0;
  for (double r : rewards) {
    total += weight * r;
    weight *= discount;
  }
  return total;
}

TabularDecPOMDP::TabularDecPOMDP(std::string name, int num_states,
                                 int num_actions, int num_observations,
                                 int horizon, double discount)
    : name_(std::move(name)),
      num_states_(num_states),
      num_actions_(num_actions),
      num_observations_(num_observations),
      horizon_(horizon),
      discount_(discount) {
  COORD_CHECK(num_states > 0 && num_actions > 0 && num_observations > 0,
              "empty game '", name_, "'");
  COORD_CHECK(horizon > 0, "horizon ", horizon);
  COORD_CHECK(discount > 0.0 && discount <= 1.0, "discount ", discount);
  initial_.assign(num_states, 0.0);
  const size_t transitions =
      static_cast<size_t>(num_states) * num_joint_actions() * num_states;
  transition_.assign(transitions, 0.0);
  reward_.assign(transitions, 0.0);
  observation_.assign(static_cast<size_t>(kNumPlayers) * num_states *
                          (num_joint_actions() + 1) * num_observations,
                      0.0);
}

void TabularDecPOMDP::Validate() const {
  auto check_row = [&](std::span<const double> row, auto&&... where) {
    for (double p : row) {
      if (p < 0.0) Fail(name_, ": negative probability in ", where...);
    }
    const double total = Sum(row);
    if (std::abs(total - 1.0) > kRowTolerance) {
      Fail(name_, ": ", where..., " sums to ", FormatDouble(total));
    }
  };
  check_row(initial_, "initial distribution");
  for (int s = 0; s < num_states_; ++s) {
    for (int joint = 0; joint < num_joint_actions(); ++joint) {
      check_row(std::span(transition_).subspan(TransitionIndex(s, joint, 0),
                                               num_states_),
                "transition row s=", s, " a=", joint);
    }
    for (int player = 0; player < kNumPlayers; ++player) {
      for (int slot = 0; slot <= num_joint_actions(); ++slot) {
        check_row(std::span(observation_)
                      .subspan(ObservationIndex(0, s, slot, player),
                               num_observations_),
                  "observation row s=", s, " prev=", slot, " player=", player);
      }
    }
  }
}

TabularPolicy::TabularPolicy(int player, int num_actions)
    : player_(player),
      num_actions_(num_actions),
      uniform_(num_actions, 1.0 / num_actions) {
  COORD_CHECK(player >= 0 && player < kNumPlayers, "player ", player);
  COORD_CHECK(num_actions > 0, "num_actions ", num_actions);
}

TabularPolicy TabularPolicy::Deterministic(int player, int num_actions,
                                           const std::vector<Aoh>& histories,
                                           int action) {
  TabularPolicy policy(player, num_actions);
  std::vector<double> one_hot(num_actions, 0.0);
  one_hot.at(action) = 1.0;
  for (const Aoh& h : histories) policy.Set(h, one_hot);
  return policy;
}

const std::vector<double>& TabularPolicy::Probs(const Aoh& history) const {
  auto it = table_.find(history);
  return it == table_.end() ? uniform_ : it->second;
}

void TabularPolicy::Set(const Aoh& history, std::vector<double> probs) {
  CheckDistribution(probs, num_actions_, AohKey(history));
  table_[history] = std::move(probs);
}

void CheckDistribution(std::span<const double> probs, int num_actions,
                       std::string_view where, const std::vector<bool>* legal) {
  if (static_cast<int>(probs.size()) != num_actions) {
    Fail("distribution at '", where, "' has ", probs.size(),
         " entries, expected ", num_actions);
  }
  for (int a = 0; a < num_actions; ++a) {
    if (!(probs[a] >= 0.0)) {
      Fail("distribution at '", where, "' has entry ", FormatDouble(probs[a]),
           " for action ", a);
    }
    if (legal != nullptr && probs[a] > 0.0 && !(*legal)[a]) {
      Fail("distribution at '", where, "' puts mass on illegal action ", a);
    }
  }
  const double total = Sum(probs);
  if (std::abs(total - 1.0) > kRowTolerance) {
    Fail("distribution at '", where, "' sums to ", FormatDouble(total));
  }
}

Trajectory Rollout(const TabularDecPOMDP& game, const TabularPolicy& policy0,
                   const TabularPolicy& policy1, uint64_t seed) {
  const std::array<const TabularPolicy*, kNumPlayers> policies{&policy0,
                                                               &policy1};
  Rng rng(seed);
  Trajectory trajectory;
  trajectory.seed = seed;
  std::vector<double> row(game.num_states());
  std::vector<double> obs_row(game.num_observations());

  auto sample_observations = [&](int s, int slot) {
    std::array<int, kNumPlayers> obs{};
    for (int i = 0; i < kNumPlayers; ++i) {
      for (int o = 0; o < game.num_observations(); ++o) {
        obs_row[o] = game.Observation(o, s, slot, i);
      }
      obs[i] = rng.Categorical(obs_row);
    }
    return obs;
  };

  for (int s = 0; s < game.num_states(); ++s) row[s] = game.Initial(s);
  int s = rng.Categorical(row);
  trajectory.states.push_back(s);
  trajectory.observations.push_back(sample_observations(s, game.InitialSlot()));
  for (int i = 0; i < kNumPlayers; ++i) {
    trajectory.histories[i].observations.push_back(
        trajectory.observations[0][i]);
  }

  for (int t = 0; t < game.horizon(); ++t) {
    std::array<int, kNumPlayers> actions{};
    for (int i = 0; i < kNumPlayers; ++i) {
      const auto& probs = policies[i]->Probs(trajectory.histories[i]);
      CheckDistribution(probs, game.num_actions(),
                        AohKey(trajectory.histories[i]));
      actions[i] = rng.Categorical(probs);
    }
    const int joint = game.JointAction(actions[0], actions[1]);
    for (int s2 = 0; s2 < game.num_states(); ++s2) {
      row[s2] = game.Transition(s, joint, s2);
    }
    const int s_next = rng.Categorical(row);
    const double r = game.Reward(s_next, joint, s);
    const auto obs = sample_observations(s_next, joint);
    trajectory.states.push_back(s_next);
    trajectory.joint_actions.push_back(actions);
    trajectory.rewards.push_back(r);
    trajectory.observations.push_back(obs);
    for (int i = 0; i < kNumPlayers; ++i) {
      trajectory.histories[i].Extend(actions[i], r, obs[i]);
    }
    s = s_next;
  }
  return trajectory;
}

double ExpectedReturnExact(const TabularDecPOMDP& game,
                           const TabularPolicy& policy0,
                           const TabularPolicy& policy1) {
  Enumerator enumerator(game, policy0, policy1, /*full_expansion=*/false);
  return enumerator.Run();
}

ReturnGradient ExactReturnGradient(const TabularDecPOMDP& game,
                                   const TabularPolicy& policy0,
                                   const TabularPolicy& policy1) {
  Enumerator enumerator(game, policy0, policy1, /*full_expansion=*/true);
  enumerator.record_gradient = true;
  const double value = enumerator.Run();
  ReturnGradient result = std::move(enumerator.gradient);
  result.value = value;
  return result;
}

std::vector<Aoh> ReachableHistories(const TabularDecPOMDP& game, int player) {
  const TabularPolicy uniform0(0, game.num_actions());
  const TabularPolicy uniform1(1, game.num_actions());
  const ReturnGradient walk = ExactReturnGradient(game, uniform0, uniform1);
  std::vector<Aoh> histories;
  for (const auto& [history, unused] : walk.wrt_probs[player]) {
    histories.push_back(history);
  }
  return histories;
}

}  // namespace coordlab
