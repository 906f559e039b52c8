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

#ifndef RISKSHED_MSSOP_H_
#define RISKSHED_MSSOP_H_

#include <cstdint>
#include <string>
#include <vector>

#include "riskshed/dep.h"
#include "riskshed/mip.h"
#include "riskshed/model.h"

namespace riskshed {

// Multi-item single-source ordering: item setups, a piecewise freight
// schedule per period, and inventory or lost sales as recourse.
struct MssopInstance {
  int items = 0;
  int periods = 0;
  std::vector<double> setup_cost;          // k_i
  std::vector<double> freight_cost;        // f_j
  std::vector<double> breakpoint_weight;   // m_j
  std::vector<double> unit_weight;         // w_i
  std::vector<double> holding_cost;        // h_i
  std::vector<double> lost_sales_penalty;  // p_i
  std::vector<double> initial_inventory;   // o_i
  // demand[w][i][t]
  std::vector<std::vector<std::vector<double>>> demand;
  std::vector<double> probability;
  // Sampling distribution of d_it, used again by the simulator.
  std::vector<std::vector<double>> demand_mean;
  std::vector<std::vector<double>> demand_sd;

  int breakpoints() const { return static_cast<int>(freight_cost.size()); }
  int scenarios() const { return static_cast<int>(demand.size()); }
  // Empty when well formed.
  std::vector<std::string> validate() const;
  bool operator==(const MssopInstance&) const = default;
};

struct MssopGenSpec {
  int items = 5;
  int periods = 10;
  int scenarios = 25;
  double lumpy_fraction = 0.2;
  std::uint64_t seed = 1;
  void check() const;
  bool operator==(const MssopGenSpec&) const = default;
};

// The seven-point freight schedule used for every generated instance.
std::vector<double> default_freight_cost();
std::vector<double> default_breakpoint_weight();

// Draw order: h, k, w, p per item, then the lumpy cells, then demands
// scenario by scenario (item-major). Demands are rounded and cut at zero.
MssopInstance generate_mssop_instance(const MssopGenSpec& spec);

// Column layout of the first stage: x (I x T), y (I x T), q (J x T),
// z (J x T), each item- or breakpoint-major.
struct MssopLayout {
  int items = 0;
  int periods = 0;
  int breakpoints = 0;
  int x(int i, int t) const { return i * periods + t; }
  int y(int i, int t) const { return items * periods + i * periods + t; }
  int q(int j, int t) const { return 2 * items * periods + j * periods + t; }
  int z(int j, int t) const {
    return 2 * items * periods + breakpoints * periods + j * periods + t;
  }
  int columns() const { return 2 * (items + breakpoints) * periods; }
};
MssopLayout mssop_layout(const MssopInstance& instance);

// Second-stage columns are v (I x T) then u (I x T); one balance row per
// item and period.
TwoStageProblem build_mssop_two_stage(const MssopInstance& instance);

struct ReplenishmentPlan {
  std::vector<std::vector<double>> x;  // [i][t]
  std::vector<std::vector<double>> y;
  std::vector<std::vector<double>> q;  // [j][t]
  std::vector<std::vector<double>> z;
  bool operator==(const ReplenishmentPlan&) const = default;
};

ReplenishmentPlan plan_from_first_stage(const MssopInstance& instance,
                                        const std::vector<double>& x);
std::vector<double> first_stage_from_plan(const MssopInstance& instance,
                                          const ReplenishmentPlan& plan);

// Order quantities rounded to whole units, setups re-derived from them.
ReplenishmentPlan round_plan(const MssopInstance& instance,
                             const ReplenishmentPlan& plan);

// Cheapest charge for shipping `weight` under the schedule: the lower
// envelope of the segment interpolants. +inf beyond the last breakpoint.
double freight_charge(const std::vector<double>& breakpoint_weight,
                      const std::vector<double>& freight_cost, double weight);

// Setups plus freight of the shipped weight in every period.
double replenishment_cost(const MssopInstance& instance,
                          const ReplenishmentPlan& plan);

struct ReplicationRecord {
  int replication = 0;
  int lost_sales_count = 0;       // item-periods with u > 0
  double lost_sales_quantity = 0.0;
  double holding_cost = 0.0;
  double penalty_cost = 0.0;
  double replenishment_cost = 0.0;
  double total_cost = 0.0;
  // Largest |v - v_prev - x - u + d| along the trajectory.
  double balance_residual = 0.0;
  std::vector<std::vector<double>> demand;  // [i][t]
};

struct SimulationReport {
  std::string policy;
  std::vector<ReplicationRecord> replications;
  double mean_lost_sales_count = 0.0;
  double mean_lost_sales_quantity = 0.0;
  double mean_total_cost = 0.0;
  double mean_replenishment_cost = 0.0;
};

struct SimulationOptions {
  int replications = 5;
  std::uint64_t seed = 1;
  // Every demand is zero (a sanity run).
  bool zero_demand = false;
};

// Replication r draws its demands from stream derive(seed, r) in item-major
// order, so policies simulated with the same seed see the same demands. The
// recursion takes u = max(0, d - v_prev - x) and v = max(0, v_prev + x - d),
// which is optimal at fixed orders.
SimulationReport simulate_policy(const MssopInstance& instance,
                                 const ReplenishmentPlan& plan,
                                 const SimulationOptions& options,
                                 const std::string& policy = "plan");

struct PolicyOutcome {
  std::string label;           // "neutral" or "asd(0.5)"
  double rho = 0.0;            // 0 for the neutral policy
  MipStatus status = MipStatus::kInfeasible;
  double objective = 0.0;
  double bound = 0.0;
  ReplenishmentPlan plan;      // rounded
  SimulationReport simulation;
};

// Extensive-form start with every setup on and, per period, the cheapest
// freight segment that carries the peak demand weight. Only the binaries
// matter; the solver re-optimizes the continuous columns. Empty if the
// peak weight exceeds the schedule.
std::vector<double> setup_everywhere_start(const MssopInstance& instance,
                                           const DepArtifact& dep);

struct CompareOptions {
  SimulationOptions simulation;
  // The setup-everywhere start is what supplies plans at this size; the
  // node budget mostly tightens the reported bound.
  MipOptions mip = [] {
    MipOptions o;
    o.node_cap = 50;
    return o;
  }();
};

// Solves the risk-neutral model and the collapsed ASD model for each rho
// (seeded with setup_everywhere_start unless a start is given), then
// simulates every plan on common random numbers.
std::vector<PolicyOutcome> compare_policies(const MssopInstance& instance,
                                            const std::vector<double>& rhos,
                                            const CompareOptions& options = {});

}  // namespace riskshed

#endif  // RISKSHED_MSSOP_H_
