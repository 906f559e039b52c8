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

#include "riskshed/knapsack.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "riskshed/errors.h"
#include "riskshed/rng.h"

namespace riskshed {

void KnapsackGenSpec::check() const {
  if (n1 <= 0 || n2 <= 0 || m1 <= 0 || m2 <= 0 || scenarios <= 0) {
    throw InvalidModel("knapsack sizes must be positive");
  }
  if (letter < 'a' || letter > 'z') throw InvalidModel("letter must be in a-z");
}

std::string KnapsackGenSpec::name() const {
  return "K." + std::to_string(n1) + "." + std::to_string(n2) + "." +
         std::to_string(scenarios) + "." + std::string(1, letter);
}

namespace {

constexpr int kMaxAttempts = 64;

// Dense weights in [2, 8) and one right-hand side per row drawn from
// [2 + 2 Wmax, 4 Wmax).
SparseMatrix knapsack_rows(Rng& rng, int rows, int cols,
                           std::vector<double>& rhs) {
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(rows) * cols);
  std::vector<double> wmax(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double w = rng.uniform(2.0, 8.0);
      wmax[r] = std::max(wmax[r], w);
      t.push_back({r, c, w});
    }
  }
  rhs.resize(rows);
  for (int r = 0; r < rows; ++r) {
    rhs[r] = rng.uniform(2.0 + 2.0 * wmax[r], 4.0 * wmax[r]);
  }
  return SparseMatrix(rows, cols, std::move(t));
}

TwoStageProblem draw(const KnapsackGenSpec& spec, Rng& rng) {
  TwoStageProblem p;
  p.first_stage_matrix = knapsack_rows(rng, spec.m1, spec.n1, p.first_stage_rhs);
  p.first_stage_senses.assign(spec.m1, Sense::kLessEqual);
  p.first_stage_cost.resize(spec.n1);
  for (double& c : p.first_stage_cost) c = -rng.uniform(400.0, 650.0);
  p.first_stage_lower.assign(spec.n1, 0.0);
  p.first_stage_upper.assign(spec.n1, 1.0);
  p.first_stage_binary.assign(spec.n1, 1);

  std::vector<double> unused;
  const SparseMatrix w = knapsack_rows(rng, spec.m2, spec.n2, unused);
  std::vector<double> wmax(spec.m2, 0.0);
  for (int r = 0; r < spec.m2; ++r) {
    for (double v : w.row_values(r)) wmax[r] = std::max(wmax[r], v);
  }
  std::vector<Triplet> ones;
  for (int r = 0; r < spec.m2; ++r) {
    for (int c = 0; c < spec.n1; ++c) ones.push_back({r, c, 1.0});
  }
  const SparseMatrix t(spec.m2, spec.n1, std::move(ones));

  for (int k = 0; k < spec.scenarios; ++k) {
    Scenario s;
    s.probability = 1.0 / spec.scenarios;
    s.recourse_cost.resize(spec.n2);
    for (double& q : s.recourse_cost) q = -rng.uniform(6.0, 16.0);
    s.rhs.resize(spec.m2);
    for (int r = 0; r < spec.m2; ++r) {
      s.rhs[r] = rng.uniform(2.0 + 2.0 * wmax[r], 4.0 * wmax[r]);
    }
    s.recourse_matrix = w;
    s.technology_matrix = t;
    s.senses.assign(spec.m2, Sense::kLessEqual);
    s.lower.assign(spec.n2, 0.0);
    s.upper.assign(spec.n2, 1.0);
    s.binary.assign(spec.n2, 1);
    p.scenarios.push_back(std::move(s));
  }
  return p;
}

// Upper bound on sum_i x_i over the first-stage feasible set: no row can
// hold more items than its lightest weights allow.
double max_first_stage_sum(const TwoStageProblem& p) {
  double bound = p.n1();
  for (int r = 0; r < p.m1(); ++r) {
    std::vector<double> w(p.first_stage_matrix.row_values(r).begin(),
                          p.first_stage_matrix.row_values(r).end());
    std::sort(w.begin(), w.end());
    double used = 0.0;
    int count = 0;
    for (double v : w) {
      if (used + v > p.first_stage_rhs[r]) break;
      used += v;
      ++count;
    }
    bound = std::min(bound, static_cast<double>(count));
  }
  return bound;
}

}  // namespace

TwoStageProblem generate_knapsack(const KnapsackGenSpec& spec) {
  spec.check();
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    Rng rng(attempt == 0 ? spec.seed : Rng::derive(spec.seed, attempt));
    TwoStageProblem p = draw(spec, rng);
    double min_h = std::numeric_limits<double>::infinity();
    for (const Scenario& s : p.scenarios) {
      for (double h : s.rhs) min_h = std::min(min_h, h);
    }
    if (max_first_stage_sum(p) <= min_h) return p;
  }
  throw InvalidModel("could not draw a knapsack instance with complete recourse");
}

DepStats audit_dimensions(const TwoStageProblem& problem) {
  return measured_stats(build_dep_expectation(problem));
}

DepStats knapsack_dimensions(const KnapsackGenSpec& spec) {
  DepStats s;
  const long long k = spec.scenarios;
  s.variables = spec.n1 + k * spec.n2;
  s.binaries = s.variables;
  s.constraints = spec.m1 + k * spec.m2;
  s.nonzeros = static_cast<long long>(spec.m1) * spec.n1 +
               k * spec.m2 * (spec.n1 + spec.n2);
  return s;
}

}  // namespace riskshed
