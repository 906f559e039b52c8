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

#ifndef RISKSHED_LSHAPED_H_
#define RISKSHED_LSHAPED_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "riskshed/lp.h"
#include "riskshed/mip.h"
#include "riskshed/model.h"

namespace riskshed {

enum class CutOrigin : std::uint8_t { kClassic, kSubgradient };

// alpha^T x + theta >= beta0 + beta_eta * eta. Keeping the eta dependence
// explicit leaves the cut valid after the target moves, because dual
// feasibility of the subproblems does not depend on their right-hand side.
struct OptimalityCut {
  std::vector<double> alpha;
  double beta0 = 0.0;
  double beta_eta = 0.0;
  CutOrigin origin = CutOrigin::kClassic;
  // Scenario whose epigraph variable the cut bounds (multicut), or -1.
  int scenario = -1;

  double beta(double eta) const { return beta0 + beta_eta * eta; }
};

struct SubproblemResult {
  int scenario = 0;
  LpStatus status = LpStatus::kInfeasible;
  double objective = 0.0;
  // Row multipliers: recourse rows first, then the excess row.
  std::vector<double> dual;
  // Contribution of nonbasic column bounds to the dual objective.
  double bound_term = 0.0;
};

// min (1-rho) q^T y + rho v  s.t.  W y (sense) h - T x,
// -q^T y + v >= c^T x - eta, y within its bounds (integrality dropped),
// v >= 0. Columns are y then v.
LinearProgram build_subproblem_lp(const TwoStageProblem& problem,
                                  std::span<const double> x, int k, double rho,
                                  double eta);

// Throws InfeasibleSecondStage or Unbounded if any scenario fails.
std::vector<SubproblemResult> solve_subproblems(const TwoStageProblem& problem,
                                                std::span<const double> x,
                                                double rho, double eta,
                                                int threads = 1);

// Per-scenario pieces of a cut: T^T pi - pi_excess c and the rhs terms.
struct ScenarioCutTerms {
  std::vector<double> gradient;
  double beta0 = 0.0;
  double beta_eta = 0.0;
};
ScenarioCutTerms scenario_cut_terms(const TwoStageProblem& problem,
                                    const SubproblemResult& result);

// Aggregated cut alpha = sum p (T^T pi - pi_e c), beta = sum p (pi^T h +
// bound term) - eta sum p pi_e. Throws CutGenerationFailure if any
// scenario was not solved to optimality.
OptimalityCut generate_optimality_cut(const std::vector<SubproblemResult>& results,
                                      const TwoStageProblem& problem);

// One cut per scenario for the multicut master.
std::vector<OptimalityCut> generate_multicut(
    const std::vector<SubproblemResult>& results, const TwoStageProblem& problem);

struct LShapedOptions {
  // Stop when upper - master <= tolerance * max(1, |master|).
  double tolerance = 1e-6;
  int iteration_cap = 200;
  double theta_floor = -1e9;
  bool multicut = false;
  int threads = 1;
  MipOptions master;
};

struct MasterState {
  std::vector<OptimalityCut> cuts;
  int iteration = 0;
  std::vector<double> incumbent;
  double master_value = -kInfinity;
  bool floor_active = false;
};

struct LShapedIteration {
  int k = 0;
  double master_value = 0.0;
  double evaluation = 0.0;  // (1-rho) c^T x^k + sum p f^k
  double gap = 0.0;
  double cut_norm = 0.0;
};

struct LShapedResult {
  std::vector<double> x;          // best evaluated x^k
  double lower_bound = -kInfinity;
  double upper_bound = kInfinity;
  MasterState state;
  std::vector<LShapedIteration> history;
  bool cap_reached = false;
};

// The master epigraph covers the whole subproblem objective:
// min (1-rho) c^T x + theta subject to the first-stage rows and the cuts.
struct MasterProblem {
  MixedBinaryProgram mip;
  std::vector<int> theta;  // one column, or one per scenario
};
MasterProblem build_master(const TwoStageProblem& problem, double rho,
                           double eta, const std::vector<OptimalityCut>& cuts,
                           bool multicut, double theta_floor);

// L-shaped method for the modified expected-excess problem with relaxed
// recourse. `warm` supplies cuts from an earlier run (for any eta).
LShapedResult lshaped_solve(const TwoStageProblem& problem, double rho,
                            double eta, const LShapedOptions& options = {},
                            const MasterState* warm = nullptr);

void write_lshaped_history(std::ostream& out,
                           const std::vector<LShapedIteration>& history);

}  // namespace riskshed

#endif  // RISKSHED_LSHAPED_H_
