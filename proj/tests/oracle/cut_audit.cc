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

#include "oracle/cut_audit.h"

#include <cmath>
#include <stdexcept>

#include "oracle/dense_lp.h"

namespace oracle {

using riskshed::Sense;

double relaxed_excess_recourse(const riskshed::TwoStageProblem& problem,
                               std::span<const double> x, int k, double rho,
                               double eta) {
  const riskshed::Scenario& s = problem.scenarios[k];
  const int n2 = problem.n2();
  const int m2 = problem.m2();
  double cx = 0.0;
  for (int j = 0; j < problem.n1(); ++j) cx += problem.first_stage_cost[j] * x[j];
  // Columns: y (n2), then the excess e >= 0 with e >= c^T x + q^T y - eta.
  std::vector<riskshed::Triplet> t;
  riskshed::LinearProgram lp;
  for (int r = 0; r < m2; ++r) {
    double rhs = s.rhs[r];
    for (int j = 0; j < problem.n1(); ++j) rhs -= s.technology_matrix.coeff(r, j) * x[j];
    for (int j = 0; j < n2; ++j) {
      const double w = s.recourse_matrix.coeff(r, j);
      if (w != 0.0) t.push_back({r, j, w});
    }
    lp.senses.push_back(s.senses[r]);
    lp.rhs.push_back(rhs);
  }
  for (int j = 0; j < n2; ++j) {
    if (s.recourse_cost[j] != 0.0) t.push_back({m2, j, s.recourse_cost[j]});
  }
  t.push_back({m2, n2, -1.0});
  lp.senses.push_back(Sense::kLessEqual);
  lp.rhs.push_back(eta - cx);
  lp.matrix = riskshed::SparseMatrix(m2 + 1, n2 + 1, t);
  for (int j = 0; j < n2; ++j) {
    lp.objective.push_back((1.0 - rho) * s.recourse_cost[j]);
    lp.lower.push_back(s.lower[j]);
    lp.upper.push_back(s.upper[j]);
  }
  lp.objective.push_back(rho);
  lp.lower.push_back(0.0);
  lp.upper.push_back(riskshed::kInfinity);
  const DenseResult r = dense_solve(lp);
  if (r.status != DenseStatus::kOptimal) {
    throw std::runtime_error("audit: relaxed subproblem not optimal");
  }
  return r.objective;
}

AuditReport cut_validity_audit(const riskshed::TwoStageProblem& problem,
                               const std::vector<riskshed::OptimalityCut>& cuts,
                               double rho, double eta,
                               const std::vector<std::vector<double>>& points,
                               double tolerance) {
  AuditReport report;
  report.max_violation = -riskshed::kInfinity;
  for (const std::vector<double>& x : points) {
    ++report.points;
    std::vector<double> value(problem.num_scenarios());
    double total = 0.0;
    for (int k = 0; k < problem.num_scenarios(); ++k) {
      value[k] = relaxed_excess_recourse(problem, x, k, rho, eta);
      total += problem.scenarios[k].probability * value[k];
    }
    for (std::size_t c = 0; c < cuts.size(); ++c) {
      const riskshed::OptimalityCut& cut = cuts[c];
      double lhs = cut.scenario < 0 ? total : value[cut.scenario];
      for (int j = 0; j < problem.n1(); ++j) lhs += cut.alpha[j] * x[j];
      const double violation = cut.beta(eta) - lhs;
      ++report.checks;
      if (violation > tolerance) ++report.violations;
      if (violation > report.max_violation) {
        report.max_violation = violation;
        report.worst_x = x;
        report.worst_cut = static_cast<int>(c);
      }
    }
  }
  return report;
}

}  // namespace oracle
