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

// Small text helpers shared by the file formats.

#ifndef COORDLAB_TEXT_H_
#define COORDLAB_TEXT_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace coordlab {

// Shortest representation that parses back to the identical double.
std::string FormatDouble(double value);
double ParseDouble(std::string_view text);
int64_t ParseInt(std::string_view text);

std::vector<std::string> SplitWhitespace(std::string_view text);
std::vector<std::string> Split(std::string_view text, char delimiter);
std::string_view Trim(std::string_view text);
std::string Join(const std::vector<std::string>& parts, std::string_view sep);

// FNV-1a, used for environment config hashes.
uint64_t Fnv1a64(std::string_view text);
std::string HexU64(uint64_t value);

}  // namespace coordlab

#endif  // COORDLAB_TEXT_H_
