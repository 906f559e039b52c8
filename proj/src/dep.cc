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

#include "riskshed/dep.h"

#include <cmath>
#include <utility>

#include "riskshed/errors.h"

namespace riskshed {
namespace {

// Accumulates columns and rows; nonzeros are predicted as rows are added.
class Builder {
 public:
  int add_column(double cost, double lo, double hi, bool binary) {
    const int j = static_cast<int>(objective_.size());
    objective_.push_back(cost);
    lower_.push_back(lo);
    upper_.push_back(hi);
    if (binary) binaries_.push_back(j);
    return j;
  }

  int add_row(const std::vector<std::pair<int, double>>& terms, Sense sense,
              double rhs) {
    const int r = static_cast<int>(rhs_.size());
    for (const auto& [col, value] : terms) {
      if (value != 0.0) {
        entries_.push_back({r, col, value});
        ++predicted_nonzeros_;
      }
    }
    senses_.push_back(sense);
    rhs_.push_back(rhs);
    return r;
  }

  // Copies the rows of `block` with column offsets given by `cols`, appending
  // to row `r`. Returns the number of entries added.
  void add_block(int r, const SparseMatrix& block, int block_row,
                 const std::vector<int>& cols) {
    const auto idx = block.row_indices(block_row);
    const auto val = block.row_values(block_row);
    for (std::size_t t = 0; t < idx.size(); ++t) {
      entries_.push_back({r, cols[idx[t]], val[t]});
      ++predicted_nonzeros_;
    }
  }

  int new_row(Sense sense, double rhs) {
    senses_.push_back(sense);
    rhs_.push_back(rhs);
    return static_cast<int>(rhs_.size()) - 1;
  }

  DepArtifact finish(DepIndex index, std::string label) {
    DepArtifact out;
    out.mip.lp.objective = std::move(objective_);
    out.mip.lp.lower = std::move(lower_);
    out.mip.lp.upper = std::move(upper_);
    out.mip.lp.senses = std::move(senses_);
    out.mip.lp.rhs = std::move(rhs_);
    const int rows = static_cast<int>(out.mip.lp.rhs.size());
    const int cols = static_cast<int>(out.mip.lp.objective.size());
    out.mip.lp.matrix = SparseMatrix(rows, cols, std::move(entries_));
    out.mip.binaries = std::move(binaries_);
    out.index = std::move(index);
    out.label = std::move(label);
    // Predicted from the index maps and the rows emitted by the builder.
    out.stats.variables = static_cast<long long>(out.index.x.size()) +
                          static_cast<long long>(out.index.v.size()) +
                          static_cast<long long>(out.index.mean_partials.size());
    for (const auto& block : out.index.y) out.stats.variables += block.size();
    out.stats.constraints =
        static_cast<long long>(out.index.first_stage_rows.size()) +
        static_cast<long long>(out.index.excess_rows.size()) +
        static_cast<long long>(out.index.mean_rows.size()) +
        static_cast<long long>(out.index.mean_definition_rows.size());
    for (const auto& block : out.index.recourse_rows) {
      out.stats.constraints += block.size();
    }
    out.stats.binaries = static_cast<long long>(out.mip.binaries.size());
    out.stats.nonzeros = predicted_nonzeros_;
    return out;
  }

 private:
  std::vector<double> objective_;
  std::vector<double> lower_;
  std::vector<double> upper_;
  std::vector<int> binaries_;
  std::vector<Sense> senses_;
  std::vector<double> rhs_;
  std::vector<Triplet> entries_;
  long long predicted_nonzeros_ = 0;
};

// Adds x, every y block, the first-stage rows and the recourse rows. The
// objective weights are supplied by the caller.
DepIndex add_common(Builder& b, const TwoStageProblem& problem, double x_weight,
                    double y_weight) {
  if (!validate(problem).empty()) {
    throw InvalidModel("cannot build an extensive form of an invalid problem");
  }
  DepIndex index;
  for (int j = 0; j < problem.n1(); ++j) {
    index.x.push_back(b.add_column(x_weight * problem.first_stage_cost[j],
                                   problem.first_stage_lower[j],
                                   problem.first_stage_upper[j],
                                   problem.first_stage_binary[j] != 0));
  }
  for (const Scenario& s : problem.scenarios) {
    std::vector<int> cols;
    for (int j = 0; j < problem.n2(); ++j) {
      cols.push_back(b.add_column(y_weight * s.probability * s.recourse_cost[j],
                                  s.lower[j], s.upper[j], s.binary[j] != 0));
    }
    index.y.push_back(std::move(cols));
  }
  for (int r = 0; r < problem.m1(); ++r) {
    const int row =
        b.new_row(problem.first_stage_senses[r], problem.first_stage_rhs[r]);
    b.add_block(row, problem.first_stage_matrix, r, index.x);
    index.first_stage_rows.push_back(row);
  }
  for (int k = 0; k < problem.num_scenarios(); ++k) {
    const Scenario& s = problem.scenarios[k];
    std::vector<int> rows;
    for (int r = 0; r < problem.m2(); ++r) {
      const int row = b.new_row(s.senses[r], s.rhs[r]);
      b.add_block(row, s.technology_matrix, r, index.x);
      b.add_block(row, s.recourse_matrix, r, index.y[k]);
      rows.push_back(row);
    }
    index.recourse_rows.push_back(std::move(rows));
  }
  return index;
}

void check_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw InvalidModel("rho must lie in [0, 1]");
  }
}

// Terms of -(c^T x) and -(q_k^T y_k) scaled by `weight`.
void append_cost_terms(std::vector<std::pair<int, double>>& terms,
                       const TwoStageProblem& problem, const DepIndex& index,
                       int k, double weight, bool with_first_stage) {
  if (with_first_stage) {
    for (int j = 0; j < problem.n1(); ++j) {
      terms.emplace_back(index.x[j], -problem.first_stage_cost[j]);
    }
  }
  const Scenario& s = problem.scenarios[k];
  for (int j = 0; j < problem.n2(); ++j) {
    terms.emplace_back(index.y[k][j], -weight * s.recourse_cost[j]);
  }
}

// c^T x cancels in f_w - mean, so here v and the mean measure the
// recourse part only: c^T x + (1-rho) sum p q^T y + rho sum p v with
// v >= q^T y, v >= mean and mean = sum p q^T y. Keeping the first-stage
// block out of the coupling rows keeps basis factors sparse.
DepArtifact build_dep_asd_collapsed(const TwoStageProblem& problem,
                                    double rho) {
  Builder b;
  DepIndex index = add_common(b, problem, 1.0, 1.0 - rho);
  for (const Scenario& s : problem.scenarios) {
    index.v.push_back(
        b.add_column(rho * s.probability, -kInfinity, kInfinity, false));
  }
  const int n = problem.num_scenarios();
  for (int k = 0; k < n; ++k) {
    std::vector<std::pair<int, double>> terms{{index.v[k], 1.0}};
    append_cost_terms(terms, problem, index, k, 1.0, false);
    index.excess_rows.push_back(b.add_row(terms, Sense::kGreaterEqual, 0.0));
  }
  // Running partial sums g_k = g_{k-1} + p_k q_k^T y_k; the last one is
  // the mean. Each row touches a single scenario block.
  int previous = -1;
  for (int k = 0; k < n; ++k) {
    const Scenario& s = problem.scenarios[k];
    const int partial = b.add_column(0.0, -kInfinity, kInfinity, false);
    std::vector<std::pair<int, double>> terms{{partial, 1.0}};
    if (previous >= 0) terms.emplace_back(previous, -1.0);
    for (int j = 0; j < problem.n2(); ++j) {
      terms.emplace_back(index.y[k][j], -s.probability * s.recourse_cost[j]);
    }
    index.mean_definition_rows.push_back(b.add_row(terms, Sense::kEqual, 0.0));
    index.mean_partials.push_back(partial);
    previous = partial;
  }
  for (int k = 0; k < n; ++k) {
    index.mean_rows.push_back(b.add_row(
        {{index.v[k], 1.0}, {previous, -1.0}}, Sense::kGreaterEqual, 0.0));
  }
  return b.finish(std::move(index), "absolute-semideviation");
}

}  // namespace

DepArtifact build_dep_expectation(const TwoStageProblem& problem) {
  Builder b;
  DepIndex index = add_common(b, problem, 1.0, 1.0);
  return b.finish(std::move(index), "expectation");
}

DepArtifact build_dep_ee(const TwoStageProblem& problem, double rho, double eta,
                         ExcessBase base) {
  check_rho(rho);
  Builder b;
  const bool total = base == ExcessBase::kTotalCost;
  DepIndex index = add_common(b, problem, total ? 1.0 : 1.0 + rho, 1.0);
  for (const Scenario& s : problem.scenarios) {
    index.v.push_back(b.add_column(rho * s.probability, 0.0, kInfinity, false));
  }
  for (int k = 0; k < problem.num_scenarios(); ++k) {
    std::vector<std::pair<int, double>> terms{{index.v[k], 1.0}};
    append_cost_terms(terms, problem, index, k, 1.0, total);
    index.excess_rows.push_back(
        b.add_row(terms, Sense::kGreaterEqual, -eta));
  }
  return b.finish(std::move(index), "expected-excess");
}

DepArtifact build_dep_asd(const TwoStageProblem& problem, double rho,
                          const AsdDepOptions& options) {
  check_rho(rho);
  if (options.collapse_mean) return build_dep_asd_collapsed(problem, rho);
  Builder b;
  DepIndex index = add_common(b, problem, 1.0 - rho, 1.0 - rho);
  for (const Scenario& s : problem.scenarios) {
    index.v.push_back(
        b.add_column(rho * s.probability, -kInfinity, kInfinity, false));
  }
  const int n = problem.num_scenarios();
  for (int k = 0; k < n; ++k) {
    std::vector<std::pair<int, double>> terms{{index.v[k], 1.0}};
    append_cost_terms(terms, problem, index, k, 1.0, true);
    index.excess_rows.push_back(b.add_row(terms, Sense::kGreaterEqual, 0.0));
  }
  // c^T x + sum_w p_w q_w^T y_w as (column, -coefficient) terms.
  std::vector<std::pair<int, double>> mean_terms;
  for (int j = 0; j < problem.n1(); ++j) {
    mean_terms.emplace_back(index.x[j], -problem.first_stage_cost[j]);
  }
  for (int k = 0; k < n; ++k) {
    const Scenario& s = problem.scenarios[k];
    for (int j = 0; j < problem.n2(); ++j) {
      mean_terms.emplace_back(index.y[k][j],
                              -s.probability * s.recourse_cost[j]);
    }
  }
  for (int k = 0; k < n; ++k) {
    std::vector<std::pair<int, double>> terms{{index.v[k], 1.0}};
    terms.insert(terms.end(), mean_terms.begin(), mean_terms.end());
    index.mean_rows.push_back(b.add_row(terms, Sense::kGreaterEqual, 0.0));
  }
  return b.finish(std::move(index), "absolute-semideviation");
}

DepArtifact build_dep_modified_ee(const TwoStageProblem& problem, double rho,
                                  double eta) {
  check_rho(rho);
  Builder b;
  DepIndex index = add_common(b, problem, 1.0 - rho, 1.0 - rho);
  for (const Scenario& s : problem.scenarios) {
    index.v.push_back(b.add_column(rho * s.probability, 0.0, kInfinity, false));
  }
  for (int k = 0; k < problem.num_scenarios(); ++k) {
    std::vector<std::pair<int, double>> terms{{index.v[k], 1.0}};
    append_cost_terms(terms, problem, index, k, 1.0, true);
    index.excess_rows.push_back(
        b.add_row(terms, Sense::kGreaterEqual, -eta));
  }
  return b.finish(std::move(index), "modified-expected-excess");
}

DepArtifact build_dep(const TwoStageProblem& problem, const RiskSpec& spec,
                      const AsdDepOptions& options) {
  spec.check();
  switch (spec.measure) {
    case Measure::kExpectation:
      return build_dep_expectation(problem);
    case Measure::kExpectedExcess:
      return build_dep_ee(problem, spec.rho, *spec.eta, spec.excess_base);
    case Measure::kModifiedExpectedExcess:
      return build_dep_modified_ee(problem, spec.rho, *spec.eta);
    case Measure::kAbsoluteSemiDeviation:
      return build_dep_asd(problem, spec.rho, options);
  }
  throw InvalidModel("unknown measure");
}

DepStats measured_stats(const DepArtifact& dep) {
  DepStats s;
  s.variables = dep.mip.lp.num_cols();
  s.binaries = static_cast<long long>(dep.mip.binaries.size());
  s.constraints = dep.mip.lp.num_rows();
  s.nonzeros = static_cast<long long>(dep.mip.lp.matrix.nonzeros());
  return s;
}

void pin_first_stage(DepArtifact& dep, std::span<const double> x) {
  for (std::size_t j = 0; j < dep.index.x.size(); ++j) {
    dep.mip.lp.lower[dep.index.x[j]] = x[j];
    dep.mip.lp.upper[dep.index.x[j]] = x[j];
  }
}

std::vector<double> first_stage_part(const DepArtifact& dep,
                                     std::span<const double> solution) {
  std::vector<double> x;
  x.reserve(dep.index.x.size());
  for (int j : dep.index.x) x.push_back(solution[j]);
  return x;
}

}  // namespace riskshed
