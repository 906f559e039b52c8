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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracle/freight.h"
#include "riskshed/errors.h"
#include "riskshed/mssop.h"
#include "riskshed/rng.h"

using namespace riskshed;

namespace {

MssopInstance tiny_instance(int items, int periods, int scenarios, std::uint64_t seed) {
  MssopGenSpec spec;
  spec.items = items;
  spec.periods = periods;
  spec.scenarios = scenarios;
  spec.seed = seed;
  return generate_mssop_instance(spec);
}

}  // namespace

TEST_CASE("generated instances follow the recipe") {
  const MssopInstance in = tiny_instance(5, 10, 25, 3);
  CHECK(in.validate().empty());
  CHECK(in.freight_cost == std::vector<double>{0, 1000, 1000, 1500, 1500, 2200, 2200});
  CHECK(in.breakpoint_weight ==
        std::vector<double>{0, 0, 17500, 17500, 35000, 35000, 70000});
  CHECK(in.scenarios() == 25);
  CHECK(in == tiny_instance(5, 10, 25, 3));
  CHECK_FALSE(in == tiny_instance(5, 10, 25, 4));
  int lumpy = 0;
  for (int i = 0; i < 5; ++i) {
    CHECK((in.holding_cost[i] >= 50 && in.holding_cost[i] < 100));
    CHECK((in.setup_cost[i] >= 500 && in.setup_cost[i] < 1000));
    CHECK((in.unit_weight[i] >= 1 && in.unit_weight[i] < 5));
    CHECK((in.lost_sales_penalty[i] >= 150 && in.lost_sales_penalty[i] < 300));
    CHECK(in.initial_inventory[i] == 0.0);
    for (int t = 0; t < 10; ++t) lumpy += in.demand_mean[i][t] == 150.0;
  }
  CHECK(lumpy == 10);
  double sum = 0.0;
  for (const auto& d : in.demand) {
    for (const auto& row : d) {
      for (double v : row) {
        CHECK(v == std::round(v));
        CHECK(v >= 0.0);
        sum += v;
      }
    }
  }
  // 40 cells at 100 and 10 at 150 per scenario.
  CHECK(sum / 25 == doctest::Approx(5500.0).epsilon(0.02));

  MssopGenSpec bad;
  bad.lumpy_fraction = 1.5;
  CHECK_THROWS_AS(generate_mssop_instance(bad), InvalidModel);
}

TEST_CASE("two-stage mapping") {
  const MssopInstance in = tiny_instance(2, 3, 2, 5);
  const TwoStageProblem p = build_mssop_two_stage(in);
  CHECK(validate(p).empty());
  CHECK(p.n1() == 2 * (2 + 7) * 3);
  CHECK(p.m1() == 2 * 3 + 3 * (1 + 7 + 3));
  CHECK(p.n2() == 12);
  CHECK(p.m2() == 6);
  CHECK(p.scenarios[1].upper[6 + 1] == in.demand[1][0][1]);

  // At fixed orders the recourse LP matches the closed-form recursion.
  Rng rng(8);
  const MssopLayout L = mssop_layout(in);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x(p.n1(), 0.0);
    for (int i = 0; i < 2; ++i) {
      for (int t = 0; t < 3; ++t) {
        x[L.x(i, t)] = std::floor(rng.uniform(0, 250));
        x[L.y(i, t)] = 1.0;
      }
    }
    for (int k = 0; k < 2; ++k) {
      double expected = 0.0;
      for (int i = 0; i < 2; ++i) {
        double stock = in.initial_inventory[i];
        for (int t = 0; t < 3; ++t) {
          const double avail = stock + x[L.x(i, t)];
          const double d = in.demand[k][i][t];
          expected += in.holding_cost[i] * std::max(0.0, avail - d) +
                      in.lost_sales_penalty[i] * std::max(0.0, d - avail);
          stock = std::max(0.0, avail - d);
        }
      }
      CHECK(evaluate_scenario_cost(p, x, k) == doctest::Approx(expected));
    }
  }
}

TEST_CASE("zero demand gives the null plan") {
  MssopInstance in = tiny_instance(2, 3, 2, 6);
  for (auto& d : in.demand) {
    for (auto& row : d) {
      for (double& v : row) v = 0.0;
    }
  }
  const TwoStageProblem p = build_mssop_two_stage(in);
  const DepArtifact dep = build_dep_expectation(p);
  const MipSolution sol = solve_mip(dep.mip);
  REQUIRE(sol.status == MipStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(0.0));
  const ReplenishmentPlan plan =
      round_plan(in, plan_from_first_stage(in, first_stage_part(dep, sol.x)));
  for (const auto& row : plan.y) {
    for (double v : row) CHECK(v == 0.0);
  }
}

TEST_CASE("single item, single period") {
  MssopInstance in;
  in.items = 1;
  in.periods = 1;
  in.setup_cost = {700};
  in.freight_cost = default_freight_cost();
  in.breakpoint_weight = default_breakpoint_weight();
  in.unit_weight = {3};
  in.holding_cost = {60};
  in.lost_sales_penalty = {1e6};
  in.initial_inventory = {0};
  in.demand = {{{10}}};
  in.probability = {1.0};
  in.demand_mean = {{10}};
  in.demand_sd = {{0}};
  const TwoStageProblem p = build_mssop_two_stage(in);
  const DepArtifact dep = build_dep_expectation(p);
  const MipSolution sol = solve_mip(dep.mip);
  REQUIRE(sol.status == MipStatus::kOptimal);
  const ReplenishmentPlan plan = plan_from_first_stage(in, first_stage_part(dep, sol.x));
  CHECK(plan.x[0][0] == doctest::Approx(10.0));
  CHECK(plan.y[0][0] == doctest::Approx(1.0));
  // Weight 30 lies in the segment [m_2, m_3] = [0, 17500].
  CHECK(plan.q[1][0] == doctest::Approx(1.0));
  CHECK(sol.objective == doctest::Approx(700 + 1000));
  CHECK(replenishment_cost(in, round_plan(in, plan)) == doctest::Approx(1700));
}

TEST_CASE("freight charge matches the freight rows") {
  const MssopInstance in = tiny_instance(1, 1, 1, 1);
  const auto& m = in.breakpoint_weight;
  const auto& f = in.freight_cost;
  CHECK(freight_charge(m, f, 0.0) == 0.0);
  CHECK(freight_charge(m, f, 1.0) == 1000.0);
  CHECK(freight_charge(m, f, 17500.0) == 1000.0);
  CHECK(freight_charge(m, f, 17500.5) == 1500.0);
  CHECK(freight_charge(m, f, 70000.0) == 2200.0);
  CHECK(std::isinf(freight_charge(m, f, 70000.5)));
  // A schedule with sloped segments.
  const std::vector<double> m2{0, 100, 300};
  const std::vector<double> f2{50, 150, 250};
  CHECK(freight_charge(m2, f2, 50) == doctest::Approx(100));
  CHECK(freight_charge(m2, f2, 200) == doctest::Approx(200));
  Rng rng(9);
  for (int trial = 0; trial < 100; ++trial) {
    const double w = trial < 5 ? 17500.0 * trial / 2 : rng.uniform(0.0, 70000.0);
    CAPTURE(w);
    CHECK(oracle::freight_by_mip(in, w) == doctest::Approx(freight_charge(m, f, w)));
  }
}

TEST_CASE("simulation recursion") {
  const MssopInstance in = tiny_instance(3, 4, 3, 7);
  ReplenishmentPlan none;
  none.x.assign(3, std::vector<double>(4, 0.0));
  none.y = none.x;
  none.q.assign(7, std::vector<double>(4, 0.0));
  none.z = none.q;
  SimulationOptions opts;
  opts.replications = 4;
  opts.seed = 17;
  const SimulationReport empty = simulate_policy(in, none, opts);
  for (const auto& rec : empty.replications) {
    double demand = 0.0;
    for (const auto& row : rec.demand) {
      for (double d : row) demand += d;
    }
    CHECK(rec.lost_sales_quantity == demand);
    CHECK(rec.holding_cost == 0.0);
    CHECK(rec.replenishment_cost == 0.0);
  }

  // Ordering exactly the sampled demand leaves nothing lost or held.
  SimulationOptions one = opts;
  one.replications = 1;
  ReplenishmentPlan exact = none;
  exact.x = empty.replications[0].demand;
  const SimulationReport matched = simulate_policy(in, exact, one);
  CHECK(matched.replications[0].lost_sales_count == 0);
  CHECK(matched.replications[0].holding_cost == 0.0);
  CHECK(matched.replications[0].demand == empty.replications[0].demand);

  one.zero_demand = true;
  const SimulationReport zero = simulate_policy(in, exact, one);
  CHECK(zero.replications[0].lost_sales_quantity == 0.0);
  double held = 0.0;
  for (int i = 0; i < 3; ++i) {
    double stock = 0.0;
    for (int t = 0; t < 4; ++t) {
      stock += exact.x[i][t];
      held += in.holding_cost[i] * stock;
    }
  }
  CHECK(zero.replications[0].holding_cost == doctest::Approx(held));

  ReplenishmentPlan wrong = none;
  wrong.x.pop_back();
  CHECK_THROWS_AS(simulate_policy(in, wrong, opts), InvalidModel);
}

TEST_CASE("mass balance over many trajectories") {
  const MssopInstance in = tiny_instance(5, 10, 2, 11);
  Rng rng(12);
  int trajectories = 0;
  for (int policy = 0; policy < 20; ++policy) {
    ReplenishmentPlan plan;
    plan.x.assign(5, std::vector<double>(10, 0.0));
    for (auto& row : plan.x) {
      for (double& v : row) v = rng.uniform01() < 0.4 ? std::floor(rng.uniform(0, 400)) : 0.0;
    }
    plan.y = plan.x;
    plan.q.assign(7, std::vector<double>(10, 0.0));
    plan.z = plan.q;
    SimulationOptions opts;
    opts.replications = 10;
    opts.seed = 100 + policy;
    const SimulationReport r = simulate_policy(in, plan, opts);
    for (const auto& rec : r.replications) {
      CHECK(rec.balance_residual == 0.0);
      trajectories += 5;  // one per item
    }
  }
  CHECK(trajectories == 1000);
}

TEST_CASE("policy comparison on common random numbers") {
  const MssopInstance in = tiny_instance(2, 4, 5, 13);
  CompareOptions opts;
  opts.simulation.replications = 3;
  opts.simulation.seed = 5;
  opts.mip.node_cap = 100000;
  const auto out = compare_policies(in, {0.0, 0.5}, opts);
  REQUIRE(out.size() == 3);
  CHECK(out[0].label == "neutral");
  CHECK(out[1].label == "asd(0)");
  CHECK(out[2].label == "asd(0.5)");
  // rho = 0 reproduces the neutral optimum value.
  CHECK(out[1].objective == doctest::Approx(out[0].objective));
  for (const auto& o : out) {
    CHECK(o.status == MipStatus::kOptimal);
    for (int r = 0; r < 3; ++r) {
      CHECK(o.simulation.replications[r].demand == out[0].simulation.replications[r].demand);
    }
    // Setup linkage in the chosen plans.
    for (int i = 0; i < in.items; ++i) {
      for (int t = 0; t < in.periods; ++t) {
        if (o.plan.x[i][t] > 0.0) CHECK(o.plan.y[i][t] == 1.0);
      }
    }
  }
  // The extensive-form objective equals the evaluator at the chosen point.
  const TwoStageProblem p = build_mssop_two_stage(in);
  const DepArtifact dep = build_dep_expectation(p);
  const MipSolution sol = solve_mip(dep.mip);
  const auto x = first_stage_part(dep, sol.x);
  CHECK(evaluate_objective(p, x, RiskSpec{}) == doctest::Approx(sol.objective).epsilon(1e-7));
}
