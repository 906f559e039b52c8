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

#ifndef RISKSHED_DEP_H_
#define RISKSHED_DEP_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskshed/mip.h"
#include "riskshed/model.h"

namespace riskshed {

// Where every block of the extensive form lives in the emitted matrix.
struct DepIndex {
  std::vector<int> x;
  std::vector<std::vector<int>> y;  // y[scenario][j]
  std::vector<int> v;               // one per scenario, empty if unused
  // Collapsed ASD: running partial sums of the mean, the last one is the
  // mean itself; empty otherwise.
  std::vector<int> mean_partials;
  std::vector<int> first_stage_rows;
  std::vector<std::vector<int>> recourse_rows;
  std::vector<int> excess_rows;     // v >= cost rows
  std::vector<int> mean_rows;       // v >= mean rows (ASD)
  std::vector<int> mean_definition_rows;  // collapsed ASD only
};

struct DepStats {
  long long variables = 0;
  long long binaries = 0;
  long long constraints = 0;
  long long nonzeros = 0;
  bool operator==(const DepStats&) const = default;
};

struct DepArtifact {
  MixedBinaryProgram mip;
  DepIndex index;
  // Counts predicted from the problem data and the index maps.
  DepStats stats;
  std::string label;
};

struct AsdDepOptions {
  // Replace the per-scenario copies of the mean row with a chain of
  // partial-sum columns plus v >= mean rows. In this form v and the mean
  // hold recourse cost only, since c^T x cancels in f - mean.
  bool collapse_mean = false;
};

DepArtifact build_dep_expectation(const TwoStageProblem& problem);

// (1+rho) c^T x + sum p q^T y + rho sum p v with v >= q^T y - eta, v >= 0.
// With ExcessBase::kTotalCost the excess rows include c^T x and the
// objective carries c^T x once.
DepArtifact build_dep_ee(const TwoStageProblem& problem, double rho,
                         double eta,
                         ExcessBase base = ExcessBase::kSecondStageOnly);

// (1-rho)(c^T x + sum p q^T y) + rho sum p v, v free, with
// v >= c^T x + q^T y and v >= c^T x + sum p q^T y for every scenario.
DepArtifact build_dep_asd(const TwoStageProblem& problem, double rho,
                          const AsdDepOptions& options = {});

// (1-rho) c^T x + sum p [(1-rho) q^T y + rho v],
// v >= c^T x + q^T y - eta, v >= 0.
DepArtifact build_dep_modified_ee(const TwoStageProblem& problem, double rho,
                                  double eta);

DepArtifact build_dep(const TwoStageProblem& problem, const RiskSpec& spec,
                      const AsdDepOptions& options = {});

// Counts read off the emitted matrix.
DepStats measured_stats(const DepArtifact& dep);

// Fixes the first-stage block to x through column bounds.
void pin_first_stage(DepArtifact& dep, std::span<const double> x);

std::vector<double> first_stage_part(const DepArtifact& dep,
                                     std::span<const double> solution);

}  // namespace riskshed

#endif  // RISKSHED_DEP_H_
