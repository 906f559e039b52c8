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

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "oracle/brute_force.h"
#include "oracle/toys.h"
#include "riskshed/dep.h"

using namespace riskshed;

namespace {

double solve(const DepArtifact& dep) {
  const MipSolution sol = solve_mip(dep.mip);
  REQUIRE(sol.status == MipStatus::kOptimal);
  return sol.objective;
}

void check_index_bijection(const DepArtifact& dep) {
  std::set<int> cols(dep.index.x.begin(), dep.index.x.end());
  for (const auto& b : dep.index.y) cols.insert(b.begin(), b.end());
  cols.insert(dep.index.v.begin(), dep.index.v.end());
  cols.insert(dep.index.mean_partials.begin(), dep.index.mean_partials.end());
  CHECK(static_cast<int>(cols.size()) == dep.mip.lp.num_cols());
  CHECK(*cols.begin() == 0);
  CHECK(*cols.rbegin() == dep.mip.lp.num_cols() - 1);
  std::set<int> rows(dep.index.first_stage_rows.begin(),
                     dep.index.first_stage_rows.end());
  for (const auto& b : dep.index.recourse_rows) rows.insert(b.begin(), b.end());
  rows.insert(dep.index.excess_rows.begin(), dep.index.excess_rows.end());
  rows.insert(dep.index.mean_rows.begin(), dep.index.mean_rows.end());
  rows.insert(dep.index.mean_definition_rows.begin(),
              dep.index.mean_definition_rows.end());
  CHECK(static_cast<int>(rows.size()) == dep.mip.lp.num_rows());
  if (!rows.empty()) CHECK(*rows.rbegin() == dep.mip.lp.num_rows() - 1);
}

std::vector<DepArtifact> all_builders(const TwoStageProblem& p, double rho,
                                      double eta) {
  std::vector<DepArtifact> out;
  out.push_back(build_dep_expectation(p));
  out.push_back(build_dep_ee(p, rho, eta));
  out.push_back(build_dep_ee(p, rho, eta, ExcessBase::kTotalCost));
  out.push_back(build_dep_asd(p, rho));
  out.push_back(build_dep_asd(p, rho, {.collapse_mean = true}));
  out.push_back(build_dep_modified_ee(p, rho, eta));
  return out;
}

}  // namespace

TEST_CASE("structural audit and index maps") {
  Rng rng(10);
  for (int trial = 0; trial < 10; ++trial) {
    oracle::ToyShape shape;
    shape.scenarios = 1 + trial % 4;
    const TwoStageProblem p = oracle::random_toy(rng, shape);
    for (const DepArtifact& dep : all_builders(p, 0.4, -10.0)) {
      CAPTURE(dep.label);
      CHECK(dep.stats == measured_stats(dep));
      check_index_bijection(dep);
    }
  }
  const TwoStageProblem p = oracle::random_toy(rng, {});
  const DepArtifact asd = build_dep_asd(p, 0.5);
  CHECK(asd.index.excess_rows.size() + asd.index.mean_rows.size() ==
        2 * p.scenarios.size());
  for (int v : asd.index.v) CHECK(asd.mip.lp.lower[v] == -kInfinity);
}

TEST_CASE("values at pinned x equal the evaluators") {
  Rng rng(11);
  for (int trial = 0; trial < 15; ++trial) {
    oracle::ToyShape shape;
    shape.scenarios = 2 + trial % 3;
    const TwoStageProblem p = oracle::random_toy(rng, shape);
    const auto points = oracle::feasible_points(p);
    const auto& x = points[rng.below(points.size())];
    const double rho = rng.uniform01();
    const double eta = rng.uniform(-40, 0);
    const std::vector<std::pair<DepArtifact, RiskSpec>> cases = {
        {build_dep_expectation(p), {Measure::kExpectation, rho, std::nullopt}},
        {build_dep_ee(p, rho, eta),
         {Measure::kExpectedExcess, rho, eta, ExcessBase::kSecondStageOnly}},
        {build_dep_ee(p, rho, eta, ExcessBase::kTotalCost),
         {Measure::kExpectedExcess, rho, eta}},
        {build_dep_asd(p, rho), {Measure::kAbsoluteSemiDeviation, rho, std::nullopt}},
        {build_dep_asd(p, rho, {.collapse_mean = true}),
         {Measure::kAbsoluteSemiDeviation, rho, std::nullopt}},
        {build_dep_modified_ee(p, rho, eta),
         {Measure::kModifiedExpectedExcess, rho, eta}},
    };
    for (auto [dep, spec] : cases) {
      CAPTURE(dep.label);
      pin_first_stage(dep, x);
      const double expected = evaluate_objective(p, x, spec);
      CHECK(std::abs(solve(dep) - expected) <= 1e-7 * (1 + std::abs(expected)));
    }
    // Relaxed second stage: LP-valued DEP against LP-based evaluation.
    EvaluationOptions relaxed;
    relaxed.relax = true;
    DepArtifact asd = build_dep_asd(p, rho);
    asd.mip.binaries.erase(
        std::remove_if(asd.mip.binaries.begin(), asd.mip.binaries.end(),
                       [&](int j) { return j >= p.n1(); }),
        asd.mip.binaries.end());
    pin_first_stage(asd, x);
    const double expected = evaluate_objective(
        p, x, {Measure::kAbsoluteSemiDeviation, rho, std::nullopt}, relaxed);
    CHECK(std::abs(solve(asd) - expected) <= 1e-7 * (1 + std::abs(expected)));
  }
}

TEST_CASE("modified EE with a very low target") {
  Rng rng(12);
  const TwoStageProblem p = oracle::random_toy(rng, {});
  const auto x = oracle::feasible_points(p).back();
  const double rho = 0.7;
  const double eta = -1e6;
  DepArtifact dep = build_dep_modified_ee(p, rho, eta);
  pin_first_stage(dep, x);
  const double mean =
      evaluate_objective(p, x, {Measure::kExpectation, 0.0, std::nullopt});
  CHECK(solve(dep) + rho * eta == doctest::Approx(mean).epsilon(1e-9));
}

TEST_CASE("extensive forms equal brute-force minimization") {
  Rng rng(13);
  for (int trial = 0; trial < 12; ++trial) {
    oracle::ToyShape shape;
    shape.n1 = 2 + trial % 5;
    shape.n2 = 2 + (trial * 7) % 5;
    shape.scenarios = 1 + trial % 5;
    const TwoStageProblem p = oracle::random_toy(rng, shape);
    const double rho = rng.uniform01();
    const double eta = rng.uniform(-40, 0);
    CAPTURE(trial);
    const std::vector<std::pair<DepArtifact, RiskSpec>> cases = {
        {build_dep_expectation(p), {Measure::kExpectation, rho, std::nullopt}},
        {build_dep_ee(p, rho, eta),
         {Measure::kExpectedExcess, rho, eta, ExcessBase::kSecondStageOnly}},
        {build_dep_ee(p, rho, eta, ExcessBase::kTotalCost),
         {Measure::kExpectedExcess, rho, eta}},
        {build_dep_asd(p, rho), {Measure::kAbsoluteSemiDeviation, rho, std::nullopt}},
        {build_dep_asd(p, rho, {.collapse_mean = true}),
         {Measure::kAbsoluteSemiDeviation, rho, std::nullopt}},
        {build_dep_modified_ee(p, rho, eta),
         {Measure::kModifiedExpectedExcess, rho, eta}},
    };
    for (const auto& [dep, spec] : cases) {
      CAPTURE(dep.label);
      const double expected = oracle::brute_force_optimum(p, spec).objective;
      CHECK(std::abs(solve(dep) - expected) <= 1e-6 * (1 + std::abs(expected)));
    }
  }
}

TEST_CASE("reductions at rho = 0 and with one scenario") {
  Rng rng(14);
  for (int trial = 0; trial < 6; ++trial) {
    oracle::ToyShape shape;
    shape.scenarios = 3;
    const TwoStageProblem p = oracle::random_toy(rng, shape);
    const double base = solve(build_dep_expectation(p));
    CHECK(solve(build_dep_asd(p, 0.0)) == doctest::Approx(base).epsilon(1e-12));
    CHECK(solve(build_dep_ee(p, 0.0, -3.0)) == doctest::Approx(base).epsilon(1e-12));
    CHECK(solve(build_dep_modified_ee(p, 0.0, -3.0)) ==
          doctest::Approx(base).epsilon(1e-12));
    // Target above every achievable second-stage cost leaves v at zero.
    const MipSolution ee = solve_mip(build_dep_ee(p, 0.6, 1e4).mip);
    const DepArtifact dep = build_dep_ee(p, 0.6, 1e4);
    for (int v : dep.index.v) CHECK(ee.x[v] == doctest::Approx(0.0));

    shape.scenarios = 1;
    const TwoStageProblem one = oracle::random_toy(rng, shape);
    CHECK(solve(build_dep_asd(one, 0.8)) ==
          doctest::Approx(solve(build_dep_expectation(one))).epsilon(1e-12));
  }
}
