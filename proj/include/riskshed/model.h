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

#ifndef RISKSHED_MODEL_H_
#define RISKSHED_MODEL_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "riskshed/lp.h"
#include "riskshed/mip.h"
#include "riskshed/sparse.h"

namespace riskshed {

// One realization of the second-stage data:
//   min q^T y  s.t.  W y (sense) h - T x,  lower <= y <= upper.
struct Scenario {
  double probability = 0.0;
  std::vector<double> recourse_cost;  // q
  SparseMatrix recourse_matrix;       // W, m2 x n2
  SparseMatrix technology_matrix;     // T, m2 x n1
  std::vector<double> rhs;            // h
  std::vector<Sense> senses;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::uint8_t> binary;

  bool operator==(const Scenario&) const = default;
};

struct TwoStageProblem {
  std::vector<double> first_stage_cost;  // c
  SparseMatrix first_stage_matrix;       // A, m1 x n1
  std::vector<Sense> first_stage_senses;
  std::vector<double> first_stage_rhs;   // b
  std::vector<double> first_stage_lower;
  std::vector<double> first_stage_upper;
  std::vector<std::uint8_t> first_stage_binary;
  std::vector<Scenario> scenarios;

  int n1() const { return static_cast<int>(first_stage_cost.size()); }
  int m1() const { return first_stage_matrix.rows(); }
  int n2() const {
    return scenarios.empty()
               ? 0
               : static_cast<int>(scenarios.front().recourse_cost.size());
  }
  int m2() const {
    return scenarios.empty() ? 0
                             : static_cast<int>(scenarios.front().rhs.size());
  }
  int num_scenarios() const { return static_cast<int>(scenarios.size()); }
  bool all_first_stage_binary() const;

  bool operator==(const TwoStageProblem&) const = default;
};

enum class Measure : std::uint8_t {
  kExpectation,
  kExpectedExcess,
  kModifiedExpectedExcess,
  kAbsoluteSemiDeviation,
};

// What the expected-excess target is compared against.
enum class ExcessBase : std::uint8_t {
  // c^T x + q^T y, as in the decomposition subproblem.
  kTotalCost,
  // q^T y only, as in the extensive expected-excess model.
  kSecondStageOnly,
};

struct RiskSpec {
  Measure measure = Measure::kExpectation;
  double rho = 0.0;
  std::optional<double> eta;
  ExcessBase excess_base = ExcessBase::kTotalCost;

  // Throws InvalidModel if rho is outside [0, 1] or eta is missing/extra.
  void check() const;
};

std::string measure_name(Measure measure);

// Per-scenario costs at a fixed first-stage point.
struct ObjectiveBreakdown {
  double first_stage_cost = 0.0;        // c^T x
  std::vector<double> recourse;         // phi_w(x)
  std::vector<double> total;            // f_w = c^T x + phi_w(x)
  std::vector<double> probability;
  double expectation = 0.0;             // sum p_w f_w
};

struct EvaluationOptions {
  // Solve second stages as LPs instead of enforcing integrality.
  bool relax = false;
  int threads = 1;
  MipOptions mip;
};

// Diagnostics for dimension mismatches, probability mass, and non-finite
// data. Empty when the problem is well formed.
std::vector<std::string> validate(const TwoStageProblem& problem);

// Renormalizes probabilities whose sum is within 1e-6 of one (returning a
// warning), and throws InvalidModel if validate() reports anything else.
std::optional<std::string> prepare(TwoStageProblem& problem);

// Largest violation of first-stage rows, bounds, and integrality at x.
double first_stage_violation(const TwoStageProblem& problem,
                             std::span<const double> x);

// The second-stage program of scenario k at x, over y only.
MixedBinaryProgram second_stage_program(const TwoStageProblem& problem,
                                        std::span<const double> x, int k,
                                        bool relax);

// phi_k(x) = min q^T y. Throws InfeasibleSecondStage or Unbounded.
double evaluate_scenario_cost(const TwoStageProblem& problem,
                              std::span<const double> x, int k,
                              const EvaluationOptions& options = {});

ObjectiveBreakdown evaluate_breakdown(const TwoStageProblem& problem,
                                      std::span<const double> x,
                                      const EvaluationOptions& options = {});

// The risk objective computed from per-scenario costs.
double objective_value(const ObjectiveBreakdown& breakdown,
                       const RiskSpec& spec);

double evaluate_objective(const TwoStageProblem& problem,
                          std::span<const double> x, const RiskSpec& spec,
                          const EvaluationOptions& options = {});

}  // namespace riskshed

#endif  // RISKSHED_MODEL_H_
