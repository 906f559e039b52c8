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

#ifndef RISKSHED_RM_ASD_H_
#define RISKSHED_RM_ASD_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "riskshed/lshaped.h"
#include "riskshed/mip.h"
#include "riskshed/model.h"

namespace riskshed {

// What happens to the lower bound once the target rises above the
// risk-neutral value, where the sandwich no longer holds.
enum class EtaPolicy : std::uint8_t { kStrict, kHeuristic };

// How the lower bound min_x ModEE(x; eta) + rho eta is certified.
enum class BoundSource : std::uint8_t {
  // Extensive modified expected-excess model, exact for binary recourse.
  kExtensiveForm,
  // Converged L-shaped master over the LP-relaxed recourse. Weaker, but
  // never builds the full extensive form.
  kClassicMaster,
};

// How the starting point and the risk-neutral value are obtained.
enum class InitialSolver : std::uint8_t { kExtensiveForm, kLShaped };

struct RmAsdConfig {
  double rho = 0.5;
  // Defaults scale with the risk-neutral value, see resolve().
  std::optional<double> epsilon;
  std::optional<double> xi;
  int max_iterations = 50;
  EtaPolicy eta_policy = EtaPolicy::kStrict;
  BoundSource bound_source = BoundSource::kExtensiveForm;
  InitialSolver initial_solver = InitialSolver::kExtensiveForm;
  // Halve xi after this many iterations without bound movement (0 = off).
  int stall_window = 3;
  int threads = 1;
  MipOptions mip;
  LShapedOptions lshaped;

  void check() const;
};

struct RmAsdRecord {
  int iteration = 0;
  double eta = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  double gap = 0.0;  // percent, relative to |LB|
  int s_plus = 0;
  int s_minus = 0;
  int cuts_added = 0;
  bool lower_bound_updated = false;
  double xi = 0.0;
  double seconds = 0.0;
};

struct RmAsdState {
  double eta = 0.0;
  // Risk-neutral value (or a certified lower bound on it). Lower-bound
  // updates need eta at or below it.
  double eta_ceiling = 0.0;
  double lower_bound = -kInfinity;
  double upper_bound = kInfinity;
  double xi = 0.0;
  double epsilon = 0.0;
  std::vector<double> incumbent;       // achieves upper_bound
  std::vector<double> candidate;       // latest x-hat
  std::vector<double> candidate_costs; // f_w(x-hat)
  std::vector<int> s_plus;
  std::vector<int> s_minus;
  std::vector<OptimalityCut> cuts;
  std::vector<RmAsdRecord> history;
  int iteration = 0;
  int stalled = 0;
};

struct RmAsdResult {
  RmAsdState state;
  bool converged = false;
  bool cap_reached = false;
};

// Solves the risk-neutral problem, sets eta to its value and computes the
// first bounds. LB is the certified minimum of ModEE(.; eta) + rho eta,
// UB the exact ASD objective at x-hat.
RmAsdState initialize(const TwoStageProblem& problem, const RmAsdConfig& config);

// Rebuilds S+ and S- from candidate_costs and steps eta by +-xi toward the
// heavier side. Ties leave eta unchanged.
void adjust_target(RmAsdState& state, const TwoStageProblem& problem);

// Subgradient cut: scenarios whose relaxed modified-EE value reaches the
// mean contribute their own dual terms, the rest contribute the
// probability-weighted average of all scenarios' terms.
OptimalityCut mod_ee_sc_cut(const std::vector<SubproblemResult>& results,
                            const TwoStageProblem& problem);
OptimalityCut mod_ee_sc_cut(const TwoStageProblem& problem,
                            std::span<const double> x, double rho, double eta,
                            int threads = 1);

RmAsdResult rm_asd_solve(const TwoStageProblem& problem,
                         const RmAsdConfig& config);

// Wall time is written only when `timing` is set so that default output is
// reproducible.
void write_rm_asd_history(std::ostream& out,
                          const std::vector<RmAsdRecord>& history, bool timing);

}  // namespace riskshed

#endif  // RISKSHED_RM_ASD_H_
