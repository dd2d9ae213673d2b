// Copyright 2026 The Shiftlab Authors
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

#ifndef SHIFTLAB_PARALLEL_H_
#define SHIFTLAB_PARALLEL_H_

#include <functional>

namespace shiftlab {

// Worker count: hardware concurrency, capped by the SHL_THREADS environment
// variable when it holds a positive integer.
int WorkerCount();

// Runs body(0) .. body(count - 1) on up to WorkerCount() threads. Each index
// runs exactly once; the first exception thrown by any index is rethrown
// after all workers finish.
void ParallelFor(int count, const std::function<void(int)>& body);

}  // namespace shiftlab

#endif  // SHIFTLAB_PARALLEL_H_
