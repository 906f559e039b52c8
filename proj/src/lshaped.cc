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

#include "riskshed/lshaped.h"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "riskshed/errors.h"
#include "riskshed/parallel.h"

namespace riskshed {

LinearProgram build_subproblem_lp(const TwoStageProblem& problem,
                                  std::span<const double> x, int k, double rho,
                                  double eta) {
  const Scenario& s = problem.scenarios.at(k);
  const int n2 = problem.n2();
  const int m2 = problem.m2();
  LinearProgram lp;
  for (int j = 0; j < n2; ++j) lp.objective.push_back((1.0 - rho) * s.recourse_cost[j]);
  lp.objective.push_back(rho);
  lp.lower = s.lower;
  lp.upper = s.upper;
  lp.lower.push_back(0.0);
  lp.upper.push_back(kInfinity);
  std::vector<Triplet> entries = s.recourse_matrix.triplets();
  for (int j = 0; j < n2; ++j) {
    entries.push_back({m2, j, -s.recourse_cost[j]});
  }
  entries.push_back({m2, n2, 1.0});
  lp.matrix = SparseMatrix(m2 + 1, n2 + 1, std::move(entries));
  lp.senses = s.senses;
  lp.senses.push_back(Sense::kGreaterEqual);
  const std::vector<double> tx = s.technology_matrix.multiply(x);
  lp.rhs = s.rhs;
  for (int r = 0; r < m2; ++r) lp.rhs[r] -= tx[r];
  double cx = 0.0;
  for (int j = 0; j < problem.n1(); ++j) cx += problem.first_stage_cost[j] * x[j];
  lp.rhs.push_back(cx - eta);
  return lp;
}

std::vector<SubproblemResult> solve_subproblems(const TwoStageProblem& problem,
                                                std::span<const double> x,
                                                double rho, double eta,
                                                int threads) {
  const int n = problem.num_scenarios();
  std::vector<SubproblemResult> out(n);
  parallel_for(n, threads, [&](int k) {
    const LinearProgram lp = build_subproblem_lp(problem, x, k, rho, eta);
    const LpSolution sol = solve_lp(lp);
    SubproblemResult& r = out[k];
    r.scenario = k;
    r.status = sol.status;
    if (sol.status == LpStatus::kInfeasible) {
      throw InfeasibleSecondStage("scenario " + std::to_string(k) +
                                  ": relaxed subproblem infeasible");
    }
    if (sol.status == LpStatus::kUnbounded) {
      throw Unbounded("scenario " + std::to_string(k) +
                      ": relaxed subproblem unbounded");
    }
    r.objective = sol.objective;
    r.dual = sol.dual;
    double rows = 0.0;
    for (int i = 0; i < lp.num_rows(); ++i) rows += sol.dual[i] * lp.rhs[i];
    r.bound_term = dual_objective(lp, sol) - rows;
  });
  return out;
}

ScenarioCutTerms scenario_cut_terms(const TwoStageProblem& problem,
                                    const SubproblemResult& result) {
  const Scenario& s = problem.scenarios.at(result.scenario);
  const int m2 = problem.m2();
  std::vector<double> pi(result.dual.begin(), result.dual.begin() + m2);
  const double pi_excess = result.dual.at(m2);
  ScenarioCutTerms t;
  t.gradient = s.technology_matrix.transpose_multiply(pi);
  for (int j = 0; j < problem.n1(); ++j) {
    t.gradient[j] -= pi_excess * problem.first_stage_cost[j];
  }
  for (int r = 0; r < m2; ++r) t.beta0 += pi[r] * s.rhs[r];
  t.beta0 += result.bound_term;
  t.beta_eta = -pi_excess;
  return t;
}

namespace {

void require_optimal(const std::vector<SubproblemResult>& results,
                     const TwoStageProblem& problem) {
  if (static_cast<int>(results.size()) != problem.num_scenarios()) {
    throw CutGenerationFailure("subproblem results do not cover every scenario");
  }
  for (const SubproblemResult& r : results) {
    if (r.status != LpStatus::kOptimal) {
      throw CutGenerationFailure("scenario " + std::to_string(r.scenario) +
                                 " was not solved to optimality");
    }
  }
}

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double d : v) s += d * d;
  return std::sqrt(s);
}

}  // namespace

OptimalityCut generate_optimality_cut(const std::vector<SubproblemResult>& results,
                                      const TwoStageProblem& problem) {
  require_optimal(results, problem);
  OptimalityCut cut;
  cut.alpha.assign(problem.n1(), 0.0);
  for (const SubproblemResult& r : results) {
    const double p = problem.scenarios[r.scenario].probability;
    const ScenarioCutTerms t = scenario_cut_terms(problem, r);
    for (int j = 0; j < problem.n1(); ++j) cut.alpha[j] += p * t.gradient[j];
    cut.beta0 += p * t.beta0;
    cut.beta_eta += p * t.beta_eta;
  }
  return cut;
}

std::vector<OptimalityCut> generate_multicut(
    const std::vector<SubproblemResult>& results, const TwoStageProblem& problem) {
  require_optimal(results, problem);
  std::vector<OptimalityCut> cuts;
  for (const SubproblemResult& r : results) {
    const ScenarioCutTerms t = scenario_cut_terms(problem, r);
    OptimalityCut cut;
    cut.alpha = t.gradient;
    cut.beta0 = t.beta0;
    cut.beta_eta = t.beta_eta;
    cut.scenario = r.scenario;
    cuts.push_back(std::move(cut));
  }
  return cuts;
}

MasterProblem build_master(const TwoStageProblem& problem, double rho,
                           double eta, const std::vector<OptimalityCut>& cuts,
                           bool multicut, double theta_floor) {
  const int n1 = problem.n1();
  MasterProblem master;
  LinearProgram& lp = master.mip.lp;
  for (int j = 0; j < n1; ++j) {
    lp.objective.push_back((1.0 - rho) * problem.first_stage_cost[j]);
    lp.lower.push_back(problem.first_stage_lower[j]);
    lp.upper.push_back(problem.first_stage_upper[j]);
    if (problem.first_stage_binary[j]) master.mip.binaries.push_back(j);
  }
  const int thetas = multicut ? problem.num_scenarios() : 1;
  for (int t = 0; t < thetas; ++t) {
    master.theta.push_back(static_cast<int>(lp.objective.size()));
    lp.objective.push_back(multicut ? problem.scenarios[t].probability : 1.0);
    lp.lower.push_back(theta_floor);
    lp.upper.push_back(kInfinity);
  }
  std::vector<Triplet> entries = problem.first_stage_matrix.triplets();
  lp.senses = problem.first_stage_senses;
  lp.rhs = problem.first_stage_rhs;
  int row = problem.m1();
  for (const OptimalityCut& cut : cuts) {
    for (int j = 0; j < n1; ++j) {
      if (cut.alpha[j] != 0.0) entries.push_back({row, j, cut.alpha[j]});
    }
    if (!multicut || cut.scenario < 0) {
      if (multicut) {
        for (int t = 0; t < thetas; ++t) {
          entries.push_back({row, master.theta[t], problem.scenarios[t].probability});
        }
      } else {
        entries.push_back({row, master.theta[0], 1.0});
      }
    } else {
      entries.push_back({row, master.theta.at(cut.scenario), 1.0});
    }
    lp.senses.push_back(Sense::kGreaterEqual);
    lp.rhs.push_back(cut.beta(eta));
    ++row;
  }
  lp.matrix = SparseMatrix(row, static_cast<int>(lp.objective.size()),
                           std::move(entries));
  return master;
}

LShapedResult lshaped_solve(const TwoStageProblem& problem, double rho,
                            double eta, const LShapedOptions& options,
                            const MasterState* warm) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidModel("rho must lie in [0, 1]");
  LShapedResult result;
  if (warm != nullptr) {
    for (const OptimalityCut& cut : warm->cuts) {
      // Aggregated and scenario cuts only mix in a multicut master, and
      // subgradient cuts do not bound the relaxed recourse.
      if (!options.multicut && cut.scenario >= 0) continue;
      if (cut.origin != CutOrigin::kClassic) continue;
      result.state.cuts.push_back(cut);
    }
  }
  double cx_weight = 1.0 - rho;
  for (int k = 1; k <= options.iteration_cap; ++k) {
    const MasterProblem master = build_master(problem, rho, eta, result.state.cuts,
                                              options.multicut,
                                              options.theta_floor);
    const MipSolution ms = solve_mip(master.mip, options.master);
    if (ms.status == MipStatus::kInfeasible) {
      throw InvalidModel("first-stage feasible set is empty");
    }
    if (ms.status != MipStatus::kOptimal) {
      throw NumericalFailure("master problem was not solved to optimality");
    }
    std::vector<double> x(ms.x.begin(), ms.x.begin() + problem.n1());
    bool floor_active = false;
    for (int t : master.theta) {
      floor_active |= ms.x[t] <= options.theta_floor + 1e-6 * std::abs(options.theta_floor);
    }
    // The master value bounds the relaxed problem only once theta is off the
    // artificial floor.
    if (!floor_active) {
      result.lower_bound = std::max(result.lower_bound, ms.objective);
    }
    result.state.master_value = ms.objective;
    result.state.floor_active = floor_active;
    result.state.iteration = k;

    const std::vector<SubproblemResult> subs =
        solve_subproblems(problem, x, rho, eta, options.threads);
    double cx = 0.0;
    for (int j = 0; j < problem.n1(); ++j) cx += problem.first_stage_cost[j] * x[j];
    double expected = 0.0;
    for (const SubproblemResult& r : subs) {
      expected += problem.scenarios[r.scenario].probability * r.objective;
    }
    const double evaluation = cx_weight * cx + expected;
    if (evaluation < result.upper_bound) {
      result.upper_bound = evaluation;
      result.x = x;
      result.state.incumbent = x;
    }
    LShapedIteration row;
    row.k = k;
    row.master_value = ms.objective;
    row.evaluation = evaluation;
    row.gap = evaluation - ms.objective;
    const double tol = options.tolerance * std::max(1.0, std::abs(ms.objective));
    if (!floor_active && evaluation - ms.objective <= tol) {
      result.history.push_back(row);
      return result;
    }
    if (options.multicut) {
      for (OptimalityCut& cut : generate_multicut(subs, problem)) {
        row.cut_norm = std::max(row.cut_norm, norm(cut.alpha));
        result.state.cuts.push_back(std::move(cut));
      }
    } else {
      OptimalityCut cut = generate_optimality_cut(subs, problem);
      row.cut_norm = norm(cut.alpha);
      result.state.cuts.push_back(std::move(cut));
    }
    result.history.push_back(row);
  }
  result.cap_reached = true;
  return result;
}

void write_lshaped_history(std::ostream& out,
                           const std::vector<LShapedIteration>& history) {
  out << "k,master_value,evaluation,gap,cut_norm\n";
  char buf[256];
  for (const LShapedIteration& r : history) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g\n", r.k,
                  r.master_value, r.evaluation, r.gap, r.cut_norm);
    out << buf;
  }
}

}  // namespace riskshed
