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

#include <cmath>

#include "doctest.h"

#include "coordlab/evaluation.h"
#include "coordlab/exact_learners.h"
#include "coordlab/tabular_envs.h"
#include "test_util.h"

namespace coordlab {
namespace {

const Aoh kRoot{{0}, {}, {}};

int ArgMax(const std::vector<double>& p) {
  return static_cast<int>(std::max_element(p.begin(), p.end()) - p.begin());
}

TEST_CASE("sp_exact reaches a pure coordinated equilibrium on every seed") {
  const TabularDecPOMDP game = LeverGame(LeverGameConfig::Canonical());
  double total = 0.0;
  int on_one = 0;
  for (uint64_t seed = 0; seed < 30; ++seed) {
    ExactTrainConfig config;
    config.seed = seed;
    const ExactTrainResult r = SpExact(game, config);
    const auto& p0 = r.policies[0].Probs(kRoot);
    const auto& p1 = r.policies[1].Probs(kRoot);
    CHECK(ArgMax(p0) == ArgMax(p1));
    CHECK(p0[ArgMax(p0)] > 0.99);
    on_one += ArgMax(p0) < 9;
    total += r.curve.back();
  }
  CHECK(total / 30 >= 0.99);
  // The 0.9 lever is a strict local optimum, so a few seeds may land there.
  CHECK(on_one >= 25);
}

TEST_CASE("sp_exact from the symmetric start spreads over the 1.0 levers") {
  const TabularDecPOMDP game = LeverGame(LeverGameConfig::Canonical());
  ExactTrainConfig config;
  config.init_scale = 0.0;
  config.steps = 3000;
  const ExactTrainResult r = SpExact(game, config);
  const auto& p = r.policies[0].Probs(kRoot);
  for (int a = 0; a < 9; ++a) CHECK(p[a] == doctest::Approx(1.0 / 9).epsilon(1e-3));
  CHECK(p[9] < 1e-3);
  CHECK(r.curve.back() == doctest::Approx(1.0 / 9).epsilon(1e-3));
}

TEST_CASE("one-action game returns that action's payoff") {
  TabularDecPOMDP game("single", 1, 1, 1, 1);
  game.SetInitial(0, 1.0);
  game.SetTransition(0, 0, 0, 1.0);
  game.SetReward(0, 0, 0, 0.7);
  for (int slot = 0; slot <= game.num_joint_actions(); ++slot) {
    for (int i = 0; i < kNumPlayers; ++i) game.SetObservation(0, 0, slot, i, 1.0);
  }
  game.Validate();
  const ExactTrainResult r = SpExact(game, {});
  CHECK(r.policies[0].Probs(kRoot)[0] == 1.0);
  CHECK(r.curve.back() == doctest::Approx(0.7));
}

TEST_CASE("op_exact on the canonical lever game picks the 0.9 lever") {
  const LeverGameConfig cfg = LeverGameConfig::Canonical();
  const TabularDecPOMDP game = LeverGame(cfg);
  const SymmetryGroup group = LeverSymmetries(cfg);
  for (uint64_t seed = 0; seed < 5; ++seed) {
    ExactTrainConfig config;
    config.seed = seed;
    const ExactTrainResult r = OpExact(game, group, config);
    CHECK(ArgMax(r.policies[0].Probs(kRoot)) == 9);
    CHECK(ArgMax(r.policies[1].Probs(kRoot)) == 9);
    CHECK(r.curve.back() == doctest::Approx(0.9).epsilon(0.01));
  }
}

TEST_CASE("other-play value is 0.1 for every policy when all levers pay 1") {
  LeverGameConfig cfg;
  cfg.payoffs.assign(10, 1.0);
  const TabularDecPOMDP game = LeverGame(cfg);
  const SymmetryGroup group = LeverSymmetries(cfg);
  Rng rng(5);
  for (int k = 0; k < 20; ++k) {
    const TabularPolicy p0 = testing::RandomPolicy(game, 0, rng);
    const TabularPolicy p1 = testing::RandomPolicy(game, 1, rng);
    CHECK(OtherPlayValue(game, group, p0, p1) == doctest::Approx(0.1).epsilon(1e-12));
  }
}

TEST_CASE("op_exact with the trivial group matches sp_exact") {
  const TabularDecPOMDP game = LeverGame(LeverGameConfig::Canonical());
  for (uint64_t seed : {0, 3, 11}) {
    ExactTrainConfig config;
    config.seed = seed;
    config.steps = 100;
    const ExactTrainResult sp = SpExact(game, config);
    const ExactTrainResult op = OpExact(game, SymmetryGroup::Trivial(), config);
    CHECK(sp.curve == op.curve);
    CHECK(sp.policies[0] == op.policies[0]);
    CHECK(sp.policies[1] == op.policies[1]);
  }
}

TEST_CASE("other-play value matches a sampled estimate over the group") {
  const LeverGameConfig cfg = LeverGameConfig::Canonical();
  const TabularDecPOMDP game = LeverGame(cfg);
  const SymmetryGroup group = LeverSymmetries(cfg);
  Rng rng(17);
  for (int k = 0; k < 3; ++k) {
    const TabularPolicy p0 = testing::RandomPolicy(game, 0, rng);
    const TabularPolicy p1 = testing::RandomPolicy(game, 1, rng);
    std::vector<double> samples;
    for (int n = 0; n < 100'000; ++n) {
      samples.push_back(
          ExpectedReturnExact(game, p0, ApplyToPolicy(group.Sample(rng), p1)));
    }
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= samples.size();
    CHECK(std::abs(mean - OtherPlayValue(game, group, p0, p1)) <=
          3 * Sem(samples) + 1e-12);
  }
}

TEST_CASE("policy rows stay normalized and training is deterministic") {
  const LeverGameConfig cfg = LeverGameConfig::Canonical();
  const TabularDecPOMDP game = LeverGame(cfg);
  ExactTrainConfig config;
  config.seed = 4;
  config.steps = 50;
  config.snapshot_every = 1;
  const ExactTrainResult a = OpExact(game, LeverSymmetries(cfg), config);
  const ExactTrainResult b = OpExact(game, LeverSymmetries(cfg), config);
  CHECK(a.curve == b.curve);
  CHECK(a.snapshots.size() >= 50);
  for (const auto& [step, policies] : a.snapshots) {
    for (const auto& pi : policies) {
      for (const auto& [h, p] : pi.table()) {
        double sum = 0.0;
        for (double x : p) sum += x;
        CHECK(std::abs(sum - 1.0) <= 1e-12);
      }
    }
  }
}

TEST_CASE("invalid exact configs are rejected") {
  ExactTrainConfig config;
  config.learning_rate = 0.0;
  CHECK_THROWS(config.Validate());
  config = {};
  config.steps = 0;
  CHECK_THROWS(config.Validate());
}

}  // namespace
}  // namespace coordlab
