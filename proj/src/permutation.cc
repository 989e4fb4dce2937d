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

#include "coordlab/permutation.h"

#include <numeric>
#include <sstream>
#include <utility>

#include "coordlab/error.h"

namespace coordlab {

bool IsBijection(const std::vector<int>& images) {
  std::vector<bool> seen(images.size(), false);
  for (int x : images) {
    if (x < 0 || x >= static_cast<int>(images.size()) || seen[x]) return false;
    seen[x] = true;
  }
  return true;
}

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  if (!IsBijection(images_)) Fail("not a bijection: ", ToString());
}

Permutation Permutation::Identity(int n) {
  std::vector<int> images(n);
  std::iota(images.begin(), images.end(), 0);
  return Permutation(std::move(images));
}

Permutation Permutation::Transposition(int n, int a, int b) {
  std::vector<int> images(n);
  std::iota(images.begin(), images.end(), 0);
  COORD_CHECK(a >= 0 && a < n && b >= 0 && b < n, "transposition (", a, " ", b,
              ") out of range ", n);
  std::swap(images[a], images[b]);
  return Permutation(std::move(images));
}

bool Permutation::IsIdentity() const {
  for (int i = 0; i < size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::Inverse() const {
  std::vector<int> inverse(images_.size());
  for (int i = 0; i < size(); ++i) inverse[images_[i]] = i;
  return Permutation(std::move(inverse));
}

Permutation Permutation::operator*(const Permutation& other) const {
  COORD_CHECK(size() == other.size(), "composing permutations of size ", size(),
              " and ", other.size());
  std::vector<int> images(images_.size());
  for (int i = 0; i < size(); ++i) images[i] = images_[other.images_[i]];
  return Permutation(std::move(images));
}

std::string Permutation::ToString() const {
  std::ostringstream out;
  out << '[';
  for (int i = 0; i < size(); ++i) {
    if (i > 0) out << ' ';
    out << images_[i];
  }
  out << ']';
  return out.str();
}

Permutation Permutation::Parse(std::string_view text) {
  std::string body(text);
  const auto open = body.find('[');
  const auto close = body.rfind(']');
  if (open == std::string::npos || close == std::string::npos || close < open) {
    Fail("permutation must be written as [i0 i1 ...], got '", text, "'");
  }
  std::istringstream in(body.substr(open + 1, close - open - 1));
  std::vector<int> images;
  std::string token;
  while (in >> token) {
    try {
      size_t used = 0;
      images.push_back(std::stoi(token, &used));
      if (used != token.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      Fail("bad permutation entry '", token, "' in '", text, "'");
    }
  }
  return Permutation(std::move(images));
}

}  // namespace coordlab
