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

// Deterministic fan-out of independent tasks over a bounded number of
// threads. Results are written by index, so the thread count never changes
// the output.

#ifndef COORDLAB_PARALLEL_H_
#define COORDLAB_PARALLEL_H_

#include <functional>

namespace coordlab {

// COORDLAB_THREADS if set (>= 1), else the hardware concurrency.
int ThreadCount();

void ParallelFor(int n, const std::function<void(int)>& task,
                 int threads = ThreadCount());

}  // namespace coordlab

#endif  // COORDLAB_PARALLEL_H_
