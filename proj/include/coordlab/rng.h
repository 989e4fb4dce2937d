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

#ifndef COORDLAB_RNG_H_
#define COORDLAB_RNG_H_

#include <cstdint>
#include <span>
#include <vector>

namespace coordlab {

// Counter-based generator: the n-th output is a pure function of (key, n),
// so streams derived from (run seed, episode index) do not depend on the
// order in which episodes are executed. All draws use our own integer
// arithmetic, never the implementation-defined std:: distributions, so
// results are identical across standard libraries.
class Rng {
 public:
  explicit Rng(uint64_t key) : key_(key) {}

  // Stream for one episode (or any other indexed sub-task) of a run.
  static Rng ForEpisode(uint64_t run_seed, uint64_t episode_index);

  uint64_t NextU64();
  // Uniform in [0, n). n must be positive.
  int UniformInt(int n);
  // Uniform in [0, 1) with 53 random bits.
  double UniformDouble();
  double Normal();
  // Index drawn from a (not necessarily normalized) nonnegative weight vector.
  int Categorical(std::span<const double> weights);

  template <typename T>
  void Shuffle(std::vector<T>& values) {
    for (int i = static_cast<int>(values.size()) - 1; i > 0; --i) {
      int j = UniformInt(i + 1);
      std::swap(values[i], values[j]);
    }
  }

  uint64_t key() const { return key_; }
  uint64_t counter() const { return counter_; }

 private:
  uint64_t key_;
  uint64_t counter_ = 0;
};

// SplitMix64 finalizer.
uint64_t MixBits(uint64_t x);
// Order-sensitive combination of two 64-bit values into a seed.
uint64_t DeriveSeed(uint64_t a, uint64_t b);

}  // namespace coordlab

#endif  // COORDLAB_RNG_H_
