// Copyright 2026 The qmlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QMLAB_PARALLEL_HPP
#define QMLAB_PARALLEL_HPP

#include <functional>

namespace qmlab {

/// Worker count: QMLAB_THREADS if set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
int worker_count();

/// Runs body(0..n-1) on up to worker_count() threads. Each index runs
/// exactly once; the first exception thrown is rethrown after all workers
/// have joined.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace qmlab

#endif  // QMLAB_PARALLEL_HPP
