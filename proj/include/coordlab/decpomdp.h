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

// Two-player fully cooperative Dec-POMDPs given by explicit tables, with
// histories, trajectories, seeded rollouts and exact expected returns.

#ifndef COORDLAB_DECPOMDP_H_
#define COORDLAB_DECPOMDP_H_

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace coordlab {

inline constexpr int kNumPlayers = 2;
// Action slot of the player who does not move on a turn-based step.
inline constexpr int kNoAction = -1;

// Per-player action-observation history {o_0, a_0, r_0, ..., o_t}.
template <typename Obs>
struct BasicHistory {
  std::vector<Obs> observations;
  std::vector<int> actions;
  std::vector<double> rewards;

  int timestep() const { return static_cast<int>(actions.size()); }
  bool IsWellFormed() const {
    return observations.size() == actions.size() + 1 &&
           rewards.size() == actions.size();
  }
  void Extend(int action, double reward, Obs observation) {
    actions.push_back(action);
    rewards.push_back(reward);
    observations.push_back(std::move(observation));
  }
  auto operator<=>(const BasicHistory&) const = default;
};

using Aoh = BasicHistory<int>;

// "o0 a0 r0 o1 ..." with rewards in shortest round-trip form.
std::string AohKey(const Aoh& history);
Aoh ParseAohKey(std::string_view key);

template <typename Obs>
struct BasicTrajectory {
  uint64_t seed = 0;
  // State indices s_0..s_T; empty for environments without enumerable states.
  std::vector<int> states;
  // observations[t][i] is player i's observation before acting at step t;
  // one extra entry after the last step.
  std::vector<std::array<Obs, kNumPlayers>> observations;
  std::vector<std::array<int, kNumPlayers>> joint_actions;
  std::vector<double> rewards;
  std::array<BasicHistory<Obs>, kNumPlayers> histories;
};

using Trajectory = BasicTrajectory<int>;

// Rebuilds player i's history from the joint record.
template <typename Obs>
BasicHistory<Obs> ProjectHistory(const BasicTrajectory<Obs>& trajectory,
                                 int player) {
  BasicHistory<Obs> history;
  if (trajectory.observations.empty()) return history;
  history.observations.push_back(trajectory.observations[0][player]);
  for (size_t t = 0; t < trajectory.joint_actions.size(); ++t) {
    history.Extend(trajectory.joint_actions[t][player], trajectory.rewards[t],
                   trajectory.observations[t + 1][player]);
  }
  return history;
}

// R(tau) = sum_t discount^t r_t.
double EpisodeReturn(std::span<const double> rewards, double discount = 1.0);

template <typename Obs>
double EpisodeReturn(const BasicTrajectory<Obs>& trajectory,
                     double discount = 1.0) {
  return EpisodeReturn(trajectory.rewards, discount);
}

// Finite Dec-POMDP. Joint actions are indexed a0 * num_actions + a1. The
// observation function is O(o | s, previous joint action, player); at t = 0
// the previous joint action is the reserved slot InitialSlot().
class TabularDecPOMDP {
 public:
  TabularDecPOMDP(std::string name, int num_states, int num_actions,
                  int num_observations, int horizon, double discount = 1.0);

  const std::string& name() const { return name_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  int num_joint_actions() const { return num_actions_ * num_actions_; }
  int num_observations() const { return num_observations_; }
  int horizon() const { return horizon_; }
  double discount() const { return discount_; }
  int InitialSlot() const { return num_joint_actions(); }
  int JointAction(int a0, int a1) const { return a0 * num_actions_ + a1; }

  double Initial(int s) const { return initial_[s]; }
  double Transition(int s, int joint, int s_next) const {
    return transition_[TransitionIndex(s, joint, s_next)];
  }
  // R(s', a, s).
  double Reward(int s_next, int joint, int s) const {
    return reward_[TransitionIndex(s, joint, s_next)];
  }
  double Observation(int o, int s, int prev_slot, int player) const {
    return observation_[ObservationIndex(o, s, prev_slot, player)];
  }

  void SetInitial(int s, double p) { initial_[s] = p; }
  void SetTransition(int s, int joint, int s_next, double p) {
    transition_[TransitionIndex(s, joint, s_next)] = p;
  }
  void SetReward(int s_next, int joint, int s, double r) {
    reward_[TransitionIndex(s, joint, s_next)] = r;
  }
  void SetObservation(int o, int s, int prev_slot, int player, double p) {
    observation_[ObservationIndex(o, s, prev_slot, player)] = p;
  }

  // Throws unless the initial, transition and observation rows each sum to
  // 1 within 1e-12 and hold no negative entries.
  void Validate() const;

 private:
  size_t TransitionIndex(int s, int joint, int s_next) const {
    return (static_cast<size_t>(s) * num_joint_actions() + joint) * num_states_ +
           s_next;
  }
  size_t ObservationIndex(int o, int s, int prev_slot, int player) const {
    return ((static_cast<size_t>(player) * num_states_ + s) *
                (num_joint_actions() + 1) +
            prev_slot) *
               num_observations_ +
           o;
  }

  std::string name_;
  int num_states_;
  int num_actions_;
  int num_observations_;
  int horizon_;
  double discount_;
  std::vector<double> initial_;
  std::vector<double> transition_;
  std::vector<double> reward_;
  std::vector<double> observation_;
};

// Stochastic policy pi_i(a | tau) stored as an explicit table over
// histories. Histories missing from the table play uniformly.
class TabularPolicy {
 public:
  TabularPolicy(int player, int num_actions);

  static TabularPolicy Deterministic(int player, int num_actions,
                                     const std::vector<Aoh>& histories,
                                     int action);

  int player() const { return player_; }
  int num_actions() const { return num_actions_; }

  const std::vector<double>& Probs(const Aoh& history) const;
  bool Contains(const Aoh& history) const { return table_.count(history) > 0; }
  // Throws if `probs` has the wrong size, a negative entry, or does not sum to
  // 1 within 1e-12.
  void Set(const Aoh& history, std::vector<double> probs);

  const std::map<Aoh, std::vector<double>>& table() const { return table_; }

  bool operator==(const TabularPolicy&) const = default;

 private:
  int player_;
  int num_actions_;
  std::vector<double> uniform_;
  std::map<Aoh, std::vector<double>> table_;
};

// Throws CoordError naming `where` unless `probs` is a distribution over
// `num_actions` actions that is zero off `legal` (when given).
void CheckDistribution(std::span<const double> probs, int num_actions,
                       std::string_view where,
                       const std::vector<bool>* legal = nullptr);

// Samples one episode. Identical inputs and seed give identical output.
Trajectory Rollout(const TabularDecPOMDP& game, const TabularPolicy& policy0,
                   const TabularPolicy& policy1, uint64_t seed);

inline constexpr int64_t kMaxEnumeratedPaths = 1'000'000;

// J(pi_0, pi_1) by exhaustive enumeration. Throws once more than
// kMaxEnumeratedPaths weighted paths would be visited.
double ExpectedReturnExact(const TabularDecPOMDP& game,
                           const TabularPolicy& policy0,
                           const TabularPolicy& policy1);

struct ReturnGradient {
  double value = 0.0;
  // dJ / d pi_i(a | tau), for every history reachable under some policy.
  std::array<std::map<Aoh, std::vector<double>>, kNumPlayers> wrt_probs;
};

ReturnGradient ExactReturnGradient(const TabularDecPOMDP& game,
                                   const TabularPolicy& policy0,
                                   const TabularPolicy& policy1);

// Histories of `player` reachable with positive probability under some joint
// policy, i.e. under uniform play.
std::vector<Aoh> ReachableHistories(const TabularDecPOMDP& game, int player);

}  // namespace coordlab

#endif  // COORDLAB_DECPOMDP_H_
