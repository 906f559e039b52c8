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

#include "riskshed/rm_asd.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <utility>

#include "riskshed/dep.h"
#include "riskshed/errors.h"

namespace riskshed {

void RmAsdConfig::check() const {
  if (!(rho >= 0.0 && rho <= 1.0)) throw InvalidModel("rho must lie in [0, 1]");
  if (epsilon && !(*epsilon > 0.0)) throw InvalidModel("epsilon must be positive");
  if (xi && !(*xi > 0.0)) throw InvalidModel("xi must be positive");
  if (max_iterations < 0) throw InvalidModel("max_iterations must be >= 0");
  if (stall_window < 0) throw InvalidModel("stall_window must be >= 0");
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> snap(const TwoStageProblem& problem, std::vector<double> x) {
  for (int j = 0; j < problem.n1(); ++j) {
    if (problem.first_stage_binary[j]) x[j] = std::round(x[j]);
  }
  return x;
}

// Exact ASD evaluations, memoized by point.
class Evaluator {
 public:
  Evaluator(const TwoStageProblem& problem, const RmAsdConfig& config)
      : problem_(problem) {
    options_.threads = config.threads;
    options_.mip = config.mip;
    spec_.measure = Measure::kAbsoluteSemiDeviation;
    spec_.rho = config.rho;
  }

  const ObjectiveBreakdown& breakdown(const std::vector<double>& x) {
    auto it = cache_.find(x);
    if (it == cache_.end()) {
      it = cache_.emplace(x, evaluate_breakdown(problem_, x, options_)).first;
    }
    return it->second;
  }

  double asd(const std::vector<double>& x) {
    return objective_value(breakdown(x), spec_);
  }

 private:
  const TwoStageProblem& problem_;
  EvaluationOptions options_;
  RiskSpec spec_;
  std::map<std::vector<double>, ObjectiveBreakdown> cache_;
};

struct Bound {
  double value = -kInfinity;  // includes rho * eta
  std::vector<double> x;
};

// min_x ModEE(x; eta) + rho eta, certified from below.
Bound certified_bound(const TwoStageProblem& problem, const RmAsdConfig& config,
                      double eta, MasterState& pool) {
  Bound b;
  if (config.bound_source == BoundSource::kExtensiveForm) {
    const DepArtifact dep = build_dep_modified_ee(problem, config.rho, eta);
    const MipSolution sol = solve_mip(dep.mip, config.mip);
    if (sol.status == MipStatus::kInfeasible) {
      throw InvalidModel("first-stage feasible set is empty");
    }
    if (sol.status == MipStatus::kUnbounded) throw Unbounded("extensive form is unbounded");
    b.value = sol.bound + config.rho * eta;
    if (sol.has_incumbent()) b.x = snap(problem, first_stage_part(dep, sol.x));
    return b;
  }
  LShapedOptions options = config.lshaped;
  options.threads = config.threads;
  const LShapedResult r = lshaped_solve(problem, config.rho, eta, options, &pool);
  pool = r.state;
  b.value = r.lower_bound + config.rho * eta;
  if (!r.x.empty()) b.x = snap(problem, r.x);
  return b;
}

bool offer(RmAsdState& state, Evaluator& eval, const std::vector<double>& x) {
  if (x.empty()) return false;
  const double value = eval.asd(x);
  if (value < state.upper_bound) {
    state.upper_bound = value;
    state.incumbent = x;
    return true;
  }
  return false;
}

void set_candidate(RmAsdState& state, Evaluator& eval, std::vector<double> x) {
  state.candidate_costs = eval.breakdown(x).total;
  state.candidate = std::move(x);
}

RmAsdRecord record(const RmAsdState& state, int cuts_added, bool updated,
                   Clock::time_point start) {
  RmAsdRecord r;
  r.iteration = state.iteration;
  r.eta = state.eta;
  r.lower_bound = state.lower_bound;
  r.upper_bound = state.upper_bound;
  r.gap = relative_gap_percent(state.lower_bound, state.upper_bound);
  r.s_plus = static_cast<int>(state.s_plus.size());
  r.s_minus = static_cast<int>(state.s_minus.size());
  r.cuts_added = cuts_added;
  r.lower_bound_updated = updated;
  r.xi = state.xi;
  r.seconds = seconds_since(start);
  return r;
}

RmAsdState initialize_impl(const TwoStageProblem& problem,
                           const RmAsdConfig& config, Evaluator& eval,
                           MasterState& pool, Clock::time_point start) {
  config.check();
  RmAsdState state;
  std::vector<double> x_hat;
  double neutral = 0.0;
  if (config.initial_solver == InitialSolver::kExtensiveForm) {
    const DepArtifact dep = build_dep_expectation(problem);
    const MipSolution sol = solve_mip(dep.mip, config.mip);
    if (sol.status == MipStatus::kInfeasible) {
      throw InvalidModel("first-stage feasible set is empty");
    }
    if (sol.status == MipStatus::kUnbounded) throw Unbounded("extensive form is unbounded");
    if (!sol.has_incumbent()) {
      throw NumericalFailure("risk-neutral model stopped without an incumbent");
    }
    x_hat = snap(problem, first_stage_part(dep, sol.x));
    neutral = sol.bound;
  } else {
    LShapedOptions options = config.lshaped;
    options.threads = config.threads;
    const LShapedResult r = lshaped_solve(problem, 0.0, 0.0, options);
    if (!std::isfinite(r.lower_bound) || r.x.empty()) {
      throw NumericalFailure("risk-neutral L-shaped run produced no bound");
    }
    x_hat = snap(problem, r.x);
    neutral = r.lower_bound;
  }
  // neutral <= Q_E, so both it and the modified-EE minimum at eta = neutral
  // bound the ASD optimum from below.
  state.eta = neutral;
  state.eta_ceiling = neutral;
  const double scale = std::max(1.0, std::abs(neutral));
  state.xi = config.xi.value_or(0.01 * scale);
  state.epsilon = config.epsilon.value_or(1e-4 * scale);

  const Bound b = certified_bound(problem, config, state.eta, pool);
  state.lower_bound = std::max(neutral, b.value);
  offer(state, eval, x_hat);
  offer(state, eval, b.x);
  // The bound and the exact evaluation can cross by rounding when the gap
  // is closed.
  if (state.lower_bound > state.upper_bound &&
      state.lower_bound - state.upper_bound <=
          1e-9 * std::max(1.0, std::abs(state.upper_bound))) {
    state.lower_bound = state.upper_bound;
  }
  set_candidate(state, eval, x_hat);
  state.history.push_back(record(state, 0, true, start));
  return state;
}

}  // namespace

RmAsdState initialize(const TwoStageProblem& problem, const RmAsdConfig& config) {
  Evaluator eval(problem, config);
  MasterState pool;
  return initialize_impl(problem, config, eval, pool, Clock::now());
}

void adjust_target(RmAsdState& state, const TwoStageProblem& problem) {
  state.s_plus.clear();
  state.s_minus.clear();
  const double tol = 1e-9 * std::max(1.0, std::abs(state.eta));
  double mass_plus = 0.0;
  double mass_minus = 0.0;
  for (int k = 0; k < static_cast<int>(state.candidate_costs.size()); ++k) {
    const double f = state.candidate_costs[k];
    const double p = problem.scenarios.at(k).probability;
    if (f > state.eta + tol) {
      state.s_plus.push_back(k);
      mass_plus += p;
    } else if (f < state.eta - tol) {
      state.s_minus.push_back(k);
      mass_minus += p;
    }
  }
  if (mass_plus > mass_minus) {
    state.eta += state.xi;
  } else if (mass_plus < mass_minus) {
    state.eta -= state.xi;
  }
}

OptimalityCut mod_ee_sc_cut(const std::vector<SubproblemResult>& results,
                            const TwoStageProblem& problem) {
  // Validates statuses and gives the expectation aggregate.
  const OptimalityCut mean_cut = generate_optimality_cut(results, problem);
  double mean = 0.0;
  for (const SubproblemResult& r : results) {
    mean += problem.scenarios[r.scenario].probability * r.objective;
  }
  const double tol = 1e-9 * std::max(1.0, std::abs(mean));
  OptimalityCut cut;
  cut.origin = CutOrigin::kSubgradient;
  cut.alpha.assign(problem.n1(), 0.0);
  double low_mass = 0.0;
  for (const SubproblemResult& r : results) {
    const double p = problem.scenarios[r.scenario].probability;
    if (r.objective >= mean - tol) {
      const ScenarioCutTerms t = scenario_cut_terms(problem, r);
      for (int j = 0; j < problem.n1(); ++j) cut.alpha[j] += p * t.gradient[j];
      cut.beta0 += p * t.beta0;
      cut.beta_eta += p * t.beta_eta;
    } else {
      low_mass += p;
    }
  }
  for (int j = 0; j < problem.n1(); ++j) cut.alpha[j] += low_mass * mean_cut.alpha[j];
  cut.beta0 += low_mass * mean_cut.beta0;
  cut.beta_eta += low_mass * mean_cut.beta_eta;
  return cut;
}

OptimalityCut mod_ee_sc_cut(const TwoStageProblem& problem,
                            std::span<const double> x, double rho, double eta,
                            int threads) {
  return mod_ee_sc_cut(solve_subproblems(problem, x, rho, eta, threads), problem);
}

RmAsdResult rm_asd_solve(const TwoStageProblem& problem,
                         const RmAsdConfig& config) {
  const Clock::time_point start = Clock::now();
  Evaluator eval(problem, config);
  MasterState pool;
  RmAsdResult result;
  RmAsdState& state = result.state;
  state = initialize_impl(problem, config, eval, pool, start);

  while (state.upper_bound - state.lower_bound >= state.epsilon) {
    if (state.iteration >= config.max_iterations) {
      result.cap_reached = true;
      return result;
    }
    ++state.iteration;
    const double lb_before = state.lower_bound;
    const double ub_before = state.upper_bound;

    adjust_target(state, problem);

    const std::vector<SubproblemResult> subs = solve_subproblems(
        problem, state.candidate, config.rho, state.eta, config.threads);
    state.cuts.push_back(generate_optimality_cut(subs, problem));
    state.cuts.push_back(mod_ee_sc_cut(subs, problem));

    const MasterProblem master =
        build_master(problem, config.rho, state.eta, state.cuts, false,
                     config.lshaped.theta_floor);
    const MipSolution ms = solve_mip(master.mip, config.mip);
    if (ms.status == MipStatus::kInfeasible) {
      throw InvalidModel("first-stage feasible set is empty");
    }
    if (!ms.has_incumbent()) {
      throw NumericalFailure("master problem stopped without an incumbent");
    }
    std::vector<double> x(ms.x.begin(), ms.x.begin() + problem.n1());
    x = snap(problem, std::move(x));

    // For every x, ModEE(x; eta) + rho eta is nondecreasing in eta, so below
    // the ceiling a fresh bound can never beat the one taken at the ceiling.
    // Only the heuristic policy looks above it.
    bool updated = false;
    const double ceiling_tol = 1e-12 * std::max(1.0, std::abs(state.eta_ceiling));
    if (config.eta_policy == EtaPolicy::kHeuristic &&
        state.eta > state.eta_ceiling + ceiling_tol) {
      const Bound b = certified_bound(problem, config, state.eta, pool);
      if (b.value > state.lower_bound) {
        state.lower_bound = b.value;
        updated = true;
      }
      offer(state, eval, b.x);
    }
    offer(state, eval, x);
    set_candidate(state, eval, std::move(x));

    if (config.stall_window > 0 && state.lower_bound == lb_before &&
        state.upper_bound == ub_before) {
      if (++state.stalled >= config.stall_window) {
        state.xi *= 0.5;
        state.stalled = 0;
      }
    } else {
      state.stalled = 0;
    }
    state.history.push_back(record(state, 2, updated, start));
  }
  result.converged = true;
  return result;
}

void write_rm_asd_history(std::ostream& out,
                          const std::vector<RmAsdRecord>& history, bool timing) {
  out << "iteration,eta,lb,ub,gap,s_plus,s_minus,cuts_added";
  out << (timing ? ",wall_seconds\n" : "\n");
  char buf[320];
  for (const RmAsdRecord& r : history) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g,%d,%d,%d",
                  r.iteration, r.eta, r.lower_bound, r.upper_bound, r.gap,
                  r.s_plus, r.s_minus, r.cuts_added);
    out << buf;
    if (timing) {
      std::snprintf(buf, sizeof buf, ",%.6f", r.seconds);
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace riskshed
