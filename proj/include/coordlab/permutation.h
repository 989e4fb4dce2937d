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

#ifndef COORDLAB_PERMUTATION_H_
#define COORDLAB_PERMUTATION_H_

#include <compare>
#include <string>
#include <string_view>
#include <vector>

namespace coordlab {

// A bijection on {0, ..., n-1}, stored as its image array.
class Permutation {
 public:
  Permutation() = default;
  // Throws if `images` is not a bijection onto {0, ..., size-1}.
  explicit Permutation(std::vector<int> images);

  static Permutation Identity(int n);
  static Permutation Transposition(int n, int a, int b);

  int size() const { return static_cast<int>(images_.size()); }
  int operator()(int x) const { return images_[x]; }
  const std::vector<int>& images() const { return images_; }

  bool IsIdentity() const;
  Permutation Inverse() const;

  // (*this * other)(x) == (*this)(other(x)).
  Permutation operator*(const Permutation& other) const;

  auto operator<=>(const Permutation&) const = default;

  // "[2 0 1]"
  std::string ToString() const;
  static Permutation Parse(std::string_view text);

 private:
  std::vector<int> images_;
};

bool IsBijection(const std::vector<int>& images);

}  // namespace coordlab

#endif  // COORDLAB_PERMUTATION_H_
