// Copyright 2026 The Riskshed Authors
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

#ifndef RISKSHED_PARALLEL_H_
#define RISKSHED_PARALLEL_H_

#include <functional>

namespace riskshed {

// Worker count: `requested` if positive, else RISKSHED_THREADS, else 1.
int resolve_threads(int requested);

// Runs body(i) for i in [0, n) on up to `threads` workers. Results must be
// written by index so the outcome does not depend on scheduling. If bodies
// throw, the exception from the lowest index is rethrown.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

}  // namespace riskshed

#endif  // RISKSHED_PARALLEL_H_
