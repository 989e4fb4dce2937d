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

#ifndef COORDLAB_ERROR_H_
#define COORDLAB_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace coordlab {

// Raised on any contract violation: invalid configs, malformed files,
// illegal policy output, exceeded enumeration guards.
class CoordError : public std::runtime_error {
 public:
  explicit CoordError(const std::string& message)
      : std::runtime_error(message) {}
};

namespace internal {
template <typename... Args>
std::string StrCat(Args&&... args) {
  std::ostringstream out;
  (out << ... << std::forward<Args>(args));
  return out.str();
}
}  // namespace internal

template <typename... Args>
[[noreturn]] void Fail(Args&&... args) {
  throw CoordError(internal::StrCat(std::forward<Args>(args)...));
}

#define COORD_CHECK(cond, ...)                                            \
  do {                                                                    \
    if (!(cond)) ::coordlab::Fail("Check failed: " #cond ": ", __VA_ARGS__); \
  } while (0)

}  // namespace coordlab

#endif  // COORDLAB_ERROR_H_
