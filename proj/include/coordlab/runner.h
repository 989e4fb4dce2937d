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

// Drives the learners from a RunConfig and writes agent files, metrics and
// curves into an output directory.

#ifndef COORDLAB_RUNNER_H_
#define COORDLAB_RUNNER_H_

#include <string>
#include <vector>

#include "coordlab/run_config.h"

namespace coordlab {

// Seeds train in parallel; every output file depends only on (config, seed).
// Returns the written paths in a fixed order.
std::vector<std::string> TrainRun(const RunConfig& config,
                                  const std::string& out_dir);

// Train and test curves for the exact learners at each snapshot step: the
// learner objective of every seed (train) and J between players of different
// seeds (test), as mean and s.e.m. over seeds / ordered seed pairs.
struct CurvePoint {
  int step = 0;
  double train_mean = 0.0;
  double train_sem = 0.0;
  double test_mean = 0.0;
  double test_sem = 0.0;
  bool operator==(const CurvePoint&) const = default;
};

std::string FormatCurves(const std::vector<CurvePoint>& points);
std::vector<CurvePoint> ParseCurves(std::string_view text);

}  // namespace coordlab

#endif  // COORDLAB_RUNNER_H_
