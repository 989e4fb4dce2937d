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

// Cross-play matrices and their summaries, convention matrices, and the
// statistics used to compare agents.

#ifndef COORDLAB_EVALUATION_H_
#define COORDLAB_EVALUATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coordlab/agent.h"
#include "coordlab/env_spec.h"
#include "coordlab/mini_hanabi.h"

namespace coordlab {

// Sample standard deviation over sqrt(n); 0 for fewer than two samples.
double Sem(std::span<const double> samples);

struct CrossPlayOptions {
  int games = 1000;
  uint64_t seed = 0;
  // Scoring for mini-Hanabi; tabular games use the episode return.
  RewardScheme scheme = RewardScheme::kZeroOnBomb;
  // Average (row, col) and (col, row) seatings instead of fixing the row
  // agent in seat 0.
  bool both_orders = false;
  bool greedy = true;
};

struct CrossPlayMatrix {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> sem;
  std::string env_config;
  int games = 0;
  uint64_t seed = 0;
  std::string scheme;
  bool both_orders = false;
  bool greedy = true;

  // Comment header with the metadata, then one "row col mean sem" line per
  // cell, tab separated.
  std::string ToTsv() const;
  static CrossPlayMatrix ParseTsv(std::string_view text);
  // Plot-ready grid of means: header of column names, one line per row.
  std::string ToGrid() const;
  bool operator==(const CrossPlayMatrix&) const = default;
};

// Cell (i, j): mean score of rows[i] in seat 0 with cols[j] in seat 1 over
// `games` episodes. Game g uses the same deck (or rollout seed) in every cell.
// All agents must carry the hash of `env`.
CrossPlayMatrix CrossPlay(const EnvSpec& env,
                          const std::vector<const Agent*>& rows,
                          const std::vector<const Agent*>& cols,
                          const std::vector<std::string>& row_names,
                          const std::vector<std::string>& col_names,
                          const CrossPlayOptions& options);

struct CrossPlaySummary {
  double cross_play = 0.0;
  double cross_play_sem = 0.0;
  // Off-diagonal mean without the worst agent's row and column; equals
  // cross_play for matrices smaller than 3x3.
  double cross_play_star = 0.0;
  double cross_play_star_sem = 0.0;
  double self_play = 0.0;
  double self_play_sem = 0.0;
  // Agent with the lowest mean off-diagonal score over its row and column.
  int worst = -1;
  std::string worst_name;

  std::string ToString() const;
};

// Means are over cells; s.e.m. is the spread of cell means over sqrt(cells).
CrossPlaySummary Summarize(const CrossPlayMatrix& matrix);

struct ConventionMatrix {
  std::vector<std::string> actions;
  // counts[prev][next]: partner played `prev` at t-1, the agent `next` at t.
  std::vector<std::vector<int64_t>> counts;
  std::vector<std::vector<double>> probs;
  // Uniform-over-legal reference accumulated at the same decision points.
  std::vector<std::vector<double>> uniform_reference;
  int episodes = 0;

  std::string ToTsv() const;
  static ConventionMatrix ParseTsv(std::string_view text);
  bool operator==(const ConventionMatrix&) const = default;
};

// Self-play of `agent` with itself, pooling every decision after the first.
ConventionMatrix ComputeConventions(const MiniHanabi& game, const Agent& agent,
                                    int episodes, uint64_t seed,
                                    bool greedy = true);

// One-sided P(X >= wins), X ~ Binomial(wins + losses, 1/2), summed exactly.
double ExactBinomialTest(int wins, int losses);

struct PairedDeck {
  uint64_t deck_seed = 0;
  int score_a = 0;
  int score_b = 0;
  bool operator==(const PairedDeck&) const = default;
};

struct PairedComparison {
  std::vector<PairedDeck> decks;
  int wins = 0;
  int ties = 0;
  int losses = 0;
  double p_value = 1.0;
  // No non-tied deck: the test is undefined and p is reported as 1.
  bool ties_only = false;

  std::string ToTsv() const;
  static PairedComparison ParseTsv(std::string_view text);
  bool operator==(const PairedComparison&) const = default;
};

PairedComparison ComparePairs(std::vector<PairedDeck> decks);

// Agents A and B each play every deck with `partner`; the partner takes seat
// 1 on even deck indices and seat 0 on odd ones. Keep-on-bomb scoring.
PairedComparison PairedSeedComparison(const MiniHanabi& game, const Agent& a,
                                      const Agent& b, const Agent& partner,
                                      const std::vector<uint64_t>& decks,
                                      RewardScheme scheme =
                                          RewardScheme::kKeepOnBomb);

}  // namespace coordlab

#endif  // COORDLAB_EVALUATION_H_
