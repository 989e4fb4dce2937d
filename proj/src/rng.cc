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

#include "coordlab/rng.h"

#include <cmath>
#include <numbers>

#include "coordlab/error.h"

namespace coordlab {

uint64_t MixBits(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t a, uint64_t b) {
  return MixBits(MixBits(a) ^ (b * 0xD6E8FEB86659FD93ULL + 0x632BE59BD9B4E019ULL));
}

Rng Rng::ForEpisode(uint64_t run_seed, uint64_t episode_index) {
  return Rng(DeriveSeed(run_seed, episode_index));
}

uint64_t Rng::NextU64() {
  return MixBits(key_ ^ MixBits(counter_++));
}

int Rng::UniformInt(int n) {
  COORD_CHECK(n > 0, "UniformInt bound ", n);
  const uint64_t bound = static_cast<uint64_t>(n);
  // Rejection keeps the draw exactly uniform.
  const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  uint64_t x;
  do {
    x = NextU64();
  } while (x >= limit);
  return static_cast<int>(x % bound);
}

double Rng::UniformDouble() {
  return static_cast<double>(NextU64() >> 11) * 0x1.0p-53;
}

double Rng::Normal() {
  double u1 = UniformDouble();
  const double u2 = UniformDouble();
  if (u1 < 1e-300) u1 = 1e-300;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::Categorical(std::span<const double> weights) {
  double total = 0.0;
  for (double w : weights) total += w;
  COORD_CHECK(total > 0.0, "categorical weights sum to ", total);
  const double u = UniformDouble() * total;
  double acc = 0.0;
  int last_positive = -1;
  for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
    if (weights[i] <= 0.0) continue;
    acc += weights[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;
}

}  // namespace coordlab
