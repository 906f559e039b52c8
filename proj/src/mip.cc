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

#include "riskshed/mip.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <queue>
#include <string>
#include <utility>

#include "riskshed/errors.h"

namespace riskshed {

void MixedBinaryProgram::check() const {
  lp.check();
  for (int j : binaries) {
    if (j < 0 || j >= lp.num_cols()) {
      throw InvalidModel("binary index " + std::to_string(j) + " out of range");
    }
    if (lp.lower[j] < 0.0 || lp.upper[j] > 1.0) {
      throw InvalidModel("binary column " + std::to_string(j) +
                         " has bounds outside [0, 1]");
    }
  }
}

double relative_gap_percent(double lb, double ub) {
  if (ub == lb) return 0.0;
  return 100.0 * (ub - lb) / std::max(std::abs(lb), 1e-12);
}

namespace {

// Row and bound violations relative to 1 + |rhs| (or |bound|).
double scaled_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0.0;
  for (int j = 0; j < lp.num_cols(); ++j) {
    if (x[j] < lp.lower[j]) {
      worst = std::max(worst, (lp.lower[j] - x[j]) / (1 + std::abs(lp.lower[j])));
    }
    if (x[j] > lp.upper[j]) {
      worst = std::max(worst, (x[j] - lp.upper[j]) / (1 + std::abs(lp.upper[j])));
    }
  }
  for (int r = 0; r < lp.num_rows(); ++r) {
    const double a = lp.matrix.row_dot(r, x);
    double v = 0.0;
    switch (lp.senses[r]) {
      case Sense::kGreaterEqual:
        v = lp.rhs[r] - a;
        break;
      case Sense::kLessEqual:
        v = a - lp.rhs[r];
        break;
      case Sense::kEqual:
        v = std::abs(a - lp.rhs[r]);
        break;
    }
    worst = std::max(worst, v / (1 + std::abs(lp.rhs[r])));
  }
  return worst;
}

struct Fixing {
  int col;
  double value;
};

struct Node {
  double bound;
  int id;
  std::vector<Fixing> fixings;
  std::shared_ptr<const Basis> basis;
  // Branch that created the node, for pseudocost updates.
  int branch_col = -1;
  bool branch_up = false;
  double parent_fraction = 0.0;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

// Average objective gain per unit of rounding, per column and direction.
class Pseudocosts {
 public:
  explicit Pseudocosts(int cols) : sum_(2 * cols, 0.0), count_(2 * cols, 0) {}

  void record(int col, bool up, double gain, double distance) {
    if (distance <= 0.0) return;
    sum_[2 * col + up] += std::max(0.0, gain) / distance;
    ++count_[2 * col + up];
    total_[up] += std::max(0.0, gain) / distance;
    ++total_count_[up];
  }

  double estimate(int col, bool up) const {
    if (count_[2 * col + up] > 0) return sum_[2 * col + up] / count_[2 * col + up];
    if (total_count_[up] > 0) return total_[up] / total_count_[up];
    return 1.0;
  }

 private:
  std::vector<double> sum_;
  std::vector<int> count_;
  double total_[2] = {0.0, 0.0};
  int total_count_[2] = {0, 0};
};

class BranchAndBound {
 public:
  BranchAndBound(const MixedBinaryProgram& mip, const MipOptions& options)
      : mip_(mip),
        options_(options),
        solver_(mip.lp, options.simplex),
        pseudocosts_(mip.lp.num_cols()) {
    is_binary_.assign(mip.lp.num_cols(), false);
    for (int j : mip.binaries) is_binary_[j] = true;
    has_continuous_ =
        static_cast<int>(mip.binaries.size()) < mip.lp.num_cols();
  }

  MipSolution run();

 private:
  double tolerance(double value) const {
    return std::max(options_.absolute_gap,
                    options_.relative_gap * std::abs(value));
  }
  bool pruned(double bound) const {
    return bound >= incumbent_value_ - tolerance(incumbent_value_);
  }
  void apply(const std::vector<Fixing>& fixings);
  LpStatus solve_node(const std::vector<Fixing>& fixings, const Basis* warm);
  int branching_column(const std::vector<double>& x) const;
  void fix_by_reduced_cost(const LpSolution& sol, std::vector<Fixing>& fixings);
  void consider(const std::vector<double>& x);
  void dive(std::vector<Fixing> fixings);
  void round_down(const std::vector<double>& x);
  void rins(const std::vector<double>& relaxed);

  const MixedBinaryProgram& mip_;
  const MipOptions& options_;
  SimplexSolver solver_;
  Pseudocosts pseudocosts_;
  std::vector<bool> is_binary_;
  bool has_continuous_ = false;
  std::vector<double> incumbent_;
  double incumbent_value_ = kInfinity;
};

void BranchAndBound::apply(const std::vector<Fixing>& fixings) {
  for (int j : mip_.binaries) {
    solver_.set_column_bounds(j, mip_.lp.lower[j], mip_.lp.upper[j]);
  }
  for (const Fixing& f : fixings) solver_.set_column_bounds(f.col, f.value, f.value);
}

LpStatus BranchAndBound::solve_node(const std::vector<Fixing>& fixings,
                                    const Basis* warm) {
  apply(fixings);
  if (warm != nullptr) solver_.set_basis(*warm);
  try {
    return solver_.solve();
  } catch (const NumericalFailure&) {
    // Continue from a fresh slack basis with frequent refactorization.
    SimplexOptions careful = options_.simplex;
    careful.refactor_interval = std::min(careful.refactor_interval, 10);
    careful.degenerate_limit = 0;
    solver_ = SimplexSolver(mip_.lp, careful);
    apply(fixings);
    return solver_.solve();
  }
}

// Pseudocost product score; ties go to the lowest index.
int BranchAndBound::branching_column(const std::vector<double>& x) const {
  int best = -1;
  double best_score = -1.0;
  for (int j : mip_.binaries) {
    const double f = x[j] - std::floor(x[j]);
    if (std::min(f, 1.0 - f) <= options_.integrality_tolerance) continue;
    const double down = std::max(1e-6, f * pseudocosts_.estimate(j, false));
    const double up = std::max(1e-6, (1.0 - f) * pseudocosts_.estimate(j, true));
    const double score = down * up;
    if (score > best_score) {
      best_score = score;
      best = j;
    }
  }
  return best;
}

// A free binary whose reduced cost alone lifts the node bound past the
// incumbent can be fixed at its current bound for the whole subtree.
void BranchAndBound::fix_by_reduced_cost(const LpSolution& sol,
                                         std::vector<Fixing>& fixings) {
  if (incumbent_.empty()) return;
  const double slack = incumbent_value_ - tolerance(incumbent_value_) - sol.objective;
  if (slack < 0.0) return;
  for (int j : mip_.binaries) {
    if (solver_.column_lower(j) == solver_.column_upper(j)) continue;
    const double d = sol.reduced_cost[j];
    const double v = sol.primal[j];
    if (v <= options_.integrality_tolerance && d > slack) {
      fixings.push_back({j, 0.0});
    } else if (v >= 1.0 - options_.integrality_tolerance && -d > slack) {
      fixings.push_back({j, 1.0});
    }
  }
}

// Snap binaries, re-optimize the continuous part from the current basis,
// and keep the point if it improves the incumbent. Bounds are restored
// afterwards so callers still see the node's fixings.
void BranchAndBound::consider(const std::vector<double>& x) {
  std::vector<double> point = x;
  for (int j : mip_.binaries) point[j] = point[j] >= 0.5 ? 1.0 : 0.0;
  if (has_continuous_) {
    std::vector<std::pair<double, double>> saved;
    saved.reserve(mip_.binaries.size());
    for (int j : mip_.binaries) {
      saved.emplace_back(solver_.column_lower(j), solver_.column_upper(j));
      solver_.set_column_bounds(j, point[j], point[j]);
    }
    bool solved = false;
    try {
      if (solver_.solve() == LpStatus::kOptimal) {
        std::vector<double> primal = solver_.solution().primal;
        for (int j : mip_.binaries) primal[j] = point[j];
        point = std::move(primal);
        solved = true;
      }
    } catch (const NumericalFailure&) {
      solver_ = SimplexSolver(mip_.lp, options_.simplex);
    }
    for (std::size_t k = 0; k < mip_.binaries.size(); ++k) {
      solver_.set_column_bounds(mip_.binaries[k], saved[k].first, saved[k].second);
    }
    if (!solved) return;
  }
  if (scaled_violation(mip_.lp, point) > 1e-7) return;
  double value = 0.0;
  for (int j = 0; j < mip_.lp.num_cols(); ++j) {
    value += mip_.lp.objective[j] * point[j];
  }
  if (value < incumbent_value_) {
    incumbent_value_ = value;
    incumbent_ = std::move(point);
  }
}

// Fractional binaries to zero, which keeps packing rows satisfied.
void BranchAndBound::round_down(const std::vector<double>& x) {
  std::vector<double> point = x;
  for (int j : mip_.binaries) {
    if (point[j] < 1.0 - options_.integrality_tolerance) point[j] = 0.0;
  }
  consider(point);
}

// Rounding dive: fix the integral binaries, round the least fractional one,
// and flip that rounding once if the LP turns infeasible.
void BranchAndBound::dive(std::vector<Fixing> fixings) {
  LpStatus status = solve_node(fixings, nullptr);
  for (std::size_t depth = 0; depth <= mip_.binaries.size(); ++depth) {
    if (status != LpStatus::kOptimal) return;
    const LpSolution sol = solver_.solution();
    if (pruned(sol.objective)) return;
    int pick = -1;
    double pick_frac = 1.0;
    for (int j : mip_.binaries) {
      const double v = sol.primal[j];
      const double frac = std::min(v, 1.0 - v);
      if (frac > options_.integrality_tolerance && frac < pick_frac) {
        pick_frac = frac;
        pick = j;
      }
    }
    if (pick < 0) {
      consider(sol.primal);
      return;
    }
    for (int j : mip_.binaries) {
      const double v = sol.primal[j];
      if (solver_.column_lower(j) == solver_.column_upper(j)) continue;
      if (std::min(v, 1.0 - v) <= options_.integrality_tolerance) {
        fixings.push_back({j, v >= 0.5 ? 1.0 : 0.0});
      }
    }
    const double rounded = sol.primal[pick] >= 0.5 ? 1.0 : 0.0;
    fixings.push_back({pick, rounded});
    const Basis basis = solver_.basis();
    status = solve_node(fixings, &basis);
    if (status != LpStatus::kOptimal) {
      fixings.back().value = 1.0 - rounded;
      status = solve_node(fixings, &basis);
    }
  }
}

void BranchAndBound::rins(const std::vector<double>& relaxed) {
  if (incumbent_.empty()) return;
  MixedBinaryProgram sub = mip_;
  std::size_t fixed = 0;
  for (int j : mip_.binaries) {
    if (std::abs(incumbent_[j] - relaxed[j]) <= options_.integrality_tolerance) {
      sub.lp.lower[j] = sub.lp.upper[j] = incumbent_[j];
      ++fixed;
    }
  }
  // Nothing to search, or too little fixed for the sub-problem to be small.
  if (fixed == mip_.binaries.size() || 2 * fixed < mip_.binaries.size()) return;
  MipOptions options = options_;
  options.rins_interval = 0;
  options.node_cap = options_.rins_node_cap;
  options.start = incumbent_;
  const MipSolution found = solve_mip(sub, options);
  if (found.has_incumbent() &&
      found.objective < incumbent_value_ - tolerance(incumbent_value_)) {
    incumbent_value_ = found.objective;
    incumbent_ = found.x;
  }
}

MipSolution BranchAndBound::run() {
  MipSolution result;
  if (options_.start && static_cast<int>(options_.start->size()) ==
                            mip_.lp.num_cols()) {
    consider(*options_.start);
  }
  const LpStatus root = solve_node({}, nullptr);
  result.nodes = 1;
  if (root == LpStatus::kUnbounded) {
    result.status = MipStatus::kUnbounded;
    return result;
  }
  if (root == LpStatus::kInfeasible) {
    result.status = MipStatus::kInfeasible;
    return result;
  }
  const LpSolution root_sol = solver_.solution();
  auto root_basis = std::make_shared<const Basis>(solver_.basis());
  if (options_.root_dive && branching_column(root_sol.primal) >= 0) {
    dive({});
  }

  std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
  int next_id = 0;
  std::optional<Node> plunge;
  open.push(Node{root_sol.objective, next_id++, {}, nullptr});
  bool root_pending = true;
  double best_bound = root_sol.objective;

  while (plunge || !open.empty()) {
    Node node;
    if (plunge) {
      node = std::move(*plunge);
      plunge.reset();
    } else {
      node = open.top();
      best_bound = node.bound;
      if (pruned(node.bound)) break;
      open.pop();
    }
    if (pruned(node.bound)) continue;
    if (result.nodes >= options_.node_cap) {
      open.push(std::move(node));
      result.status = MipStatus::kNodeCapReached;
      result.bound = std::min(open.top().bound, incumbent_value_);
      result.objective = incumbent_value_;
      result.x = incumbent_;
      return result;
    }
    LpSolution sol;
    std::shared_ptr<const Basis> basis;
    if (root_pending) {
      root_pending = false;
      sol = root_sol;
      basis = root_basis;
    } else {
      ++result.nodes;
      const LpStatus status = solve_node(node.fixings, node.basis.get());
      if (status != LpStatus::kOptimal) continue;
      sol = solver_.solution();
      basis = std::make_shared<const Basis>(solver_.basis());
      if (node.branch_col >= 0) {
        pseudocosts_.record(node.branch_col, node.branch_up,
                            sol.objective - node.bound,
                            node.branch_up ? 1.0 - node.parent_fraction
                                           : node.parent_fraction);
      }
    }
    if (pruned(sol.objective)) continue;
    const int col = branching_column(sol.primal);
    if (col < 0) {
      consider(sol.primal);
      continue;
    }
    // Cheap rounding heuristic; it needs an LP when continuous columns
    // must be re-optimized, so it runs less often then.
    if (!has_continuous_ || result.nodes % 16 == 1) round_down(sol.primal);
    if (options_.rins_interval > 0 &&
        (result.nodes - 1) % options_.rins_interval == 0) {
      rins(sol.primal);
    }
    std::vector<Fixing> fixings = node.fixings;
    fix_by_reduced_cost(sol, fixings);
    const double frac = sol.primal[col] - std::floor(sol.primal[col]);
    // Plunge into the child on the rounding side, queue the other one.
    const bool up_first = frac >= 0.5;
    for (bool up : {up_first, !up_first}) {
      Node child{sol.objective, next_id++, fixings, basis, col, up, frac};
      child.fixings.push_back({col, up ? 1.0 : 0.0});
      if (up == up_first) {
        plunge = std::move(child);
      } else {
        open.push(std::move(child));
      }
    }
  }
  best_bound = open.empty() ? incumbent_value_ : std::min(open.top().bound, incumbent_value_);
  result.bound = std::min(best_bound, incumbent_value_);
  if (incumbent_.empty()) {
    result.status = MipStatus::kInfeasible;
    return result;
  }
  result.status = MipStatus::kOptimal;
  result.objective = incumbent_value_;
  result.x = incumbent_;
  return result;
}

}  // namespace

MipSolution solve_mip(const MixedBinaryProgram& mip, const MipOptions& options) {
  mip.check();
  if (mip.binaries.empty()) {
    const LpSolution sol = solve_lp(mip.lp, options.simplex);
    MipSolution result;
    result.nodes = 1;
    if (sol.status == LpStatus::kInfeasible) return result;
    if (sol.status == LpStatus::kUnbounded) {
      result.status = MipStatus::kUnbounded;
      return result;
    }
    result.status = MipStatus::kOptimal;
    result.x = sol.primal;
    result.objective = sol.objective;
    result.bound = sol.objective;
    return result;
  }
  BranchAndBound bb(mip, options);
  return bb.run();
}

}  // namespace riskshed
