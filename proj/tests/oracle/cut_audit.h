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

#ifndef RISKSHED_TESTS_ORACLE_CUT_AUDIT_H_
#define RISKSHED_TESTS_ORACLE_CUT_AUDIT_H_

#include <span>
#include <vector>

#include "riskshed/lshaped.h"
#include "riskshed/model.h"

namespace oracle {

// Relaxed modified expected-excess value of scenario k at x:
// min (1-rho) q^T y + rho max(c^T x + q^T y - eta, 0) over the LP relaxation,
// assembled here and solved by the dense tableau.
double relaxed_excess_recourse(const riskshed::TwoStageProblem& problem,
                               std::span<const double> x, int k, double rho,
                               double eta);

struct AuditReport {
  int points = 0;
  int checks = 0;
  int violations = 0;
  double max_violation = 0.0;  // max of beta - alpha^T x - theta*(x)
  std::vector<double> worst_x;
  int worst_cut = -1;
};

// Checks alpha^T x + theta*(x) >= beta(eta) at each x, where theta*(x) is the
// true relaxed recourse (probability-weighted sum for aggregated cuts, the
// scenario value for multicut cuts). Violations above `tolerance` count.
AuditReport cut_validity_audit(const riskshed::TwoStageProblem& problem,
                               const std::vector<riskshed::OptimalityCut>& cuts,
                               double rho, double eta,
                               const std::vector<std::vector<double>>& points,
                               double tolerance = 1e-7);

}  // namespace oracle

#endif  // RISKSHED_TESTS_ORACLE_CUT_AUDIT_H_
