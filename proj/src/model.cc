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

#include "riskshed/model.h"

#include <cmath>
#include <cstdio>
#include <string>

#include "riskshed/errors.h"
#include "riskshed/parallel.h"

namespace riskshed {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

bool all_finite(std::span<const double> v) {
  for (double d : v) {
    if (!std::isfinite(d)) return false;
  }
  return true;
}

bool matrix_finite(const SparseMatrix& m) {
  for (int r = 0; r < m.rows(); ++r) {
    if (!all_finite(m.row_values(r))) return false;
  }
  return true;
}

bool bounds_ok(const std::vector<double>& lo, const std::vector<double>& hi) {
  for (std::size_t j = 0; j < lo.size(); ++j) {
    if (std::isnan(lo[j]) || std::isnan(hi[j]) || lo[j] > hi[j] ||
        lo[j] == kInfinity || hi[j] == -kInfinity) {
      return false;
    }
  }
  return true;
}

}  // namespace

bool TwoStageProblem::all_first_stage_binary() const {
  for (std::uint8_t b : first_stage_binary) {
    if (!b) return false;
  }
  return true;
}

void RiskSpec::check() const {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw InvalidModel("rho must lie in [0, 1], got " + num(rho));
  }
  const bool needs_eta = measure == Measure::kExpectedExcess ||
                         measure == Measure::kModifiedExpectedExcess;
  if (needs_eta && !eta) {
    throw InvalidModel(measure_name(measure) + " requires a target eta");
  }
  if (!needs_eta && eta) {
    throw InvalidModel(measure_name(measure) + " does not take a target eta");
  }
  if (eta && !std::isfinite(*eta)) throw InvalidModel("eta must be finite");
}

std::string measure_name(Measure measure) {
  switch (measure) {
    case Measure::kExpectation:
      return "expectation";
    case Measure::kExpectedExcess:
      return "expected-excess";
    case Measure::kModifiedExpectedExcess:
      return "modified-expected-excess";
    case Measure::kAbsoluteSemiDeviation:
      return "absolute-semideviation";
  }
  return "unknown";
}

std::vector<std::string> validate(const TwoStageProblem& problem) {
  std::vector<std::string> out;
  const int n1 = problem.n1();
  if (n1 < 1) out.push_back("no first-stage variables");
  if (problem.first_stage_matrix.cols() != n1) {
    out.push_back("first-stage matrix has " +
                  std::to_string(problem.first_stage_matrix.cols()) +
                  " columns ≠ " + std::to_string(n1));
  }
  const int m1 = problem.m1();
  if (static_cast<int>(problem.first_stage_rhs.size()) != m1 ||
      static_cast<int>(problem.first_stage_senses.size()) != m1) {
    out.push_back("first-stage rhs/sense length ≠ " + std::to_string(m1));
  }
  if (static_cast<int>(problem.first_stage_lower.size()) != n1 ||
      static_cast<int>(problem.first_stage_upper.size()) != n1 ||
      static_cast<int>(problem.first_stage_binary.size()) != n1) {
    out.push_back("first-stage bound/integrality length ≠ " +
                  std::to_string(n1));
  } else {
    if (!bounds_ok(problem.first_stage_lower, problem.first_stage_upper)) {
      out.push_back("first-stage bounds invalid");
    }
    for (int j = 0; j < n1; ++j) {
      if (problem.first_stage_binary[j] &&
          (problem.first_stage_lower[j] < 0 ||
           problem.first_stage_upper[j] > 1)) {
        out.push_back("first-stage binary " + std::to_string(j) +
                      " has bounds outside [0, 1]");
      }
    }
  }
  if (!all_finite(problem.first_stage_cost) ||
      !all_finite(problem.first_stage_rhs) ||
      !matrix_finite(problem.first_stage_matrix)) {
    out.push_back("first-stage data has non-finite entries");
  }
  if (problem.scenarios.empty()) {
    out.push_back("no scenarios");
    return out;
  }
  const int n2 = problem.n2();
  const int m2 = problem.m2();
  double mass = 0.0;
  for (int k = 0; k < problem.num_scenarios(); ++k) {
    const Scenario& s = problem.scenarios[k];
    const std::string tag = "scenario " + std::to_string(k) + ": ";
    mass += s.probability;
    if (!(s.probability > 0.0 && s.probability <= 1.0)) {
      out.push_back(tag + "probability " + num(s.probability) +
                    " outside (0, 1]");
    }
    if (static_cast<int>(s.recourse_cost.size()) != n2) {
      out.push_back(tag + "recourse cost length " +
                    std::to_string(s.recourse_cost.size()) + " ≠ " +
                    std::to_string(n2));
    }
    if (static_cast<int>(s.rhs.size()) != m2) {
      out.push_back(tag + "rhs length " + std::to_string(s.rhs.size()) +
                    " ≠ " + std::to_string(m2));
    }
    if (static_cast<int>(s.senses.size()) != static_cast<int>(s.rhs.size())) {
      out.push_back(tag + "sense length " + std::to_string(s.senses.size()) +
                    " ≠ " + std::to_string(s.rhs.size()));
    }
    if (s.recourse_matrix.rows() != m2 || s.recourse_matrix.cols() != n2) {
      out.push_back(tag + "recourse matrix is " +
                    std::to_string(s.recourse_matrix.rows()) + "x" +
                    std::to_string(s.recourse_matrix.cols()) + " ≠ " +
                    std::to_string(m2) + "x" + std::to_string(n2));
    }
    if (s.technology_matrix.rows() != m2 || s.technology_matrix.cols() != n1) {
      out.push_back(tag + "technology matrix is " +
                    std::to_string(s.technology_matrix.rows()) + "x" +
                    std::to_string(s.technology_matrix.cols()) + " ≠ " +
                    std::to_string(m2) + "x" + std::to_string(n1));
    }
    if (static_cast<int>(s.lower.size()) != n2 ||
        static_cast<int>(s.upper.size()) != n2 ||
        static_cast<int>(s.binary.size()) != n2) {
      out.push_back(tag + "bound/integrality length ≠ " + std::to_string(n2));
    } else {
      if (!bounds_ok(s.lower, s.upper)) out.push_back(tag + "bounds invalid");
      for (int j = 0; j < n2; ++j) {
        if (s.binary[j] && (s.lower[j] < 0 || s.upper[j] > 1)) {
          out.push_back(tag + "binary " + std::to_string(j) +
                        " has bounds outside [0, 1]");
        }
      }
    }
    if (!all_finite(s.recourse_cost) || !all_finite(s.rhs) ||
        !matrix_finite(s.recourse_matrix) ||
        !matrix_finite(s.technology_matrix)) {
      out.push_back(tag + "non-finite entries");
    }
  }
  if (std::abs(mass - 1.0) > 1e-9) {
    out.push_back("probabilities sum to " + num(mass));
  }
  return out;
}

std::optional<std::string> prepare(TwoStageProblem& problem) {
  double mass = 0.0;
  for (const Scenario& s : problem.scenarios) mass += s.probability;
  std::optional<std::string> warning;
  if (!problem.scenarios.empty() && std::abs(mass - 1.0) > 1e-9 &&
      std::abs(mass - 1.0) <= 1e-6) {
    for (Scenario& s : problem.scenarios) s.probability /= mass;
    warning = "probabilities summed to " + num(mass) + "; renormalized";
  }
  const std::vector<std::string> issues = validate(problem);
  if (!issues.empty()) {
    std::string message = "invalid problem:";
    for (const std::string& s : issues) message += "\n  " + s;
    throw InvalidModel(message);
  }
  return warning;
}

double first_stage_violation(const TwoStageProblem& problem,
                             std::span<const double> x) {
  LinearProgram lp;
  lp.matrix = problem.first_stage_matrix;
  lp.senses = problem.first_stage_senses;
  lp.rhs = problem.first_stage_rhs;
  lp.lower = problem.first_stage_lower;
  lp.upper = problem.first_stage_upper;
  lp.objective = problem.first_stage_cost;
  double worst = max_violation(lp, x);
  for (int j = 0; j < problem.n1(); ++j) {
    if (problem.first_stage_binary[j]) {
      worst = std::max(worst, std::min(std::abs(x[j]), std::abs(x[j] - 1.0)));
    }
  }
  return worst;
}

MixedBinaryProgram second_stage_program(const TwoStageProblem& problem,
                                        std::span<const double> x, int k,
                                        bool relax) {
  const Scenario& s = problem.scenarios.at(k);
  MixedBinaryProgram mip;
  mip.lp.objective = s.recourse_cost;
  mip.lp.matrix = s.recourse_matrix;
  mip.lp.senses = s.senses;
  mip.lp.rhs = s.rhs;
  const std::vector<double> tx = s.technology_matrix.multiply(x);
  for (int r = 0; r < problem.m2(); ++r) mip.lp.rhs[r] -= tx[r];
  mip.lp.lower = s.lower;
  mip.lp.upper = s.upper;
  if (!relax) {
    for (int j = 0; j < problem.n2(); ++j) {
      if (s.binary[j]) mip.binaries.push_back(j);
    }
  }
  return mip;
}

double evaluate_scenario_cost(const TwoStageProblem& problem,
                              std::span<const double> x, int k,
                              const EvaluationOptions& options) {
  const MixedBinaryProgram mip =
      second_stage_program(problem, x, k, options.relax);
  const MipSolution sol = solve_mip(mip, options.mip);
  switch (sol.status) {
    case MipStatus::kOptimal:
      return sol.objective;
    case MipStatus::kInfeasible:
      throw InfeasibleSecondStage("scenario " + std::to_string(k) +
                                  " has no feasible recourse");
    case MipStatus::kUnbounded:
      throw Unbounded("scenario " + std::to_string(k) +
                      " recourse is unbounded");
    case MipStatus::kNodeCapReached:
      throw NumericalFailure("scenario " + std::to_string(k) +
                             " recourse hit the node cap");
  }
  return sol.objective;
}

ObjectiveBreakdown evaluate_breakdown(const TwoStageProblem& problem,
                                      std::span<const double> x,
                                      const EvaluationOptions& options) {
  ObjectiveBreakdown out;
  for (int j = 0; j < problem.n1(); ++j) {
    out.first_stage_cost += problem.first_stage_cost[j] * x[j];
  }
  const int n = problem.num_scenarios();
  out.recourse.assign(n, 0.0);
  parallel_for(n, options.threads, [&](int k) {
    out.recourse[k] = evaluate_scenario_cost(problem, x, k, options);
  });
  out.total.resize(n);
  out.probability.resize(n);
  for (int k = 0; k < n; ++k) {
    out.total[k] = out.first_stage_cost + out.recourse[k];
    out.probability[k] = problem.scenarios[k].probability;
    out.expectation += out.probability[k] * out.total[k];
  }
  return out;
}

double objective_value(const ObjectiveBreakdown& b, const RiskSpec& spec) {
  spec.check();
  const int n = static_cast<int>(b.total.size());
  const double rho = spec.rho;
  switch (spec.measure) {
    case Measure::kExpectation:
      return b.expectation;
    case Measure::kExpectedExcess: {
      double excess = 0.0;
      if (spec.excess_base == ExcessBase::kTotalCost) {
        for (int k = 0; k < n; ++k) {
          excess += b.probability[k] * std::max(b.total[k] - *spec.eta, 0.0);
        }
        return b.expectation + rho * excess;
      }
      for (int k = 0; k < n; ++k) {
        excess += b.probability[k] * std::max(b.recourse[k] - *spec.eta, 0.0);
      }
      return b.expectation + rho * b.first_stage_cost + rho * excess;
    }
    case Measure::kModifiedExpectedExcess: {
      double excess = 0.0;
      for (int k = 0; k < n; ++k) {
        excess += b.probability[k] * std::max(b.total[k] - *spec.eta, 0.0);
      }
      return (1.0 - rho) * b.expectation + rho * excess;
    }
    case Measure::kAbsoluteSemiDeviation: {
      double dev = 0.0;
      for (int k = 0; k < n; ++k) {
        dev += b.probability[k] * std::max(b.total[k] - b.expectation, 0.0);
      }
      return b.expectation + rho * dev;
    }
  }
  return b.expectation;
}

double evaluate_objective(const TwoStageProblem& problem,
                          std::span<const double> x, const RiskSpec& spec,
                          const EvaluationOptions& options) {
  spec.check();
  return objective_value(evaluate_breakdown(problem, x, options), spec);
}

}  // namespace riskshed
