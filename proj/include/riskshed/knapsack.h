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

#ifndef RISKSHED_KNAPSACK_H_
#define RISKSHED_KNAPSACK_H_

#include <cstdint>
#include <string>

#include "riskshed/dep.h"
#include "riskshed/model.h"

namespace riskshed {

// Stochastic multidimensional knapsack with binary stages:
//   min c^T x + E[q^T y]  s.t.  A x <= b,  W y <= h(w) - sum_i x_i.
// Values are negated so that optimal objectives are negative.
struct KnapsackGenSpec {
  int n1 = 10;
  int n2 = 20;
  int m1 = 10;
  int m2 = 20;
  int scenarios = 50;
  std::uint64_t seed = 1;
  char letter = 'a';

  // Throws InvalidModel on non-positive sizes or a letter outside a-z.
  void check() const;
  // K.<n1>.<n2>.<scenarios>.<letter>
  std::string name() const;
  bool operator==(const KnapsackGenSpec&) const = default;
};

// Draw order: A, b, c, W, then q and h scenario by scenario. If the largest
// first-stage sum_i x_i could exceed some h_j, the draw is repeated on the
// next derived stream so that y = 0 stays feasible for every feasible x.
TwoStageProblem generate_knapsack(const KnapsackGenSpec& spec);

// Sizes of the risk-neutral extensive form.
DepStats audit_dimensions(const TwoStageProblem& problem);

// Closed-form sizes: n1 + S n2, m1 + S m2, m1 n1 + S m2 (n1 + n2).
DepStats knapsack_dimensions(const KnapsackGenSpec& spec);

}  // namespace riskshed

#endif  // RISKSHED_KNAPSACK_H_
