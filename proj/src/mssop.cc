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

#include "riskshed/mssop.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "riskshed/errors.h"
#include "riskshed/rng.h"

namespace riskshed {

namespace {

template <typename T>
std::vector<std::vector<T>> grid(int rows, int cols, T value = T()) {
  return std::vector<std::vector<T>>(rows, std::vector<T>(cols, value));
}

}  // namespace

std::vector<std::string> MssopInstance::validate() const {
  std::vector<std::string> issues;
  if (items <= 0 || periods <= 0) issues.push_back("items and periods must be positive");
  const auto per_item = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != items) {
      issues.push_back(std::string(name) + " has " + std::to_string(v.size()) +
                       " entries, expected " + std::to_string(items));
    }
    for (double d : v) {
      if (!(d >= 0.0) || !std::isfinite(d)) {
        issues.push_back(std::string(name) + " must be finite and >= 0");
        break;
      }
    }
  };
  per_item(setup_cost, "setup_cost");
  per_item(unit_weight, "unit_weight");
  per_item(holding_cost, "holding_cost");
  per_item(lost_sales_penalty, "lost_sales_penalty");
  per_item(initial_inventory, "initial_inventory");
  if (freight_cost.size() != breakpoint_weight.size() || freight_cost.size() < 2) {
    issues.push_back("freight schedule needs matching f and m with at least 2 points");
  } else {
    for (std::size_t j = 1; j < freight_cost.size(); ++j) {
      if (freight_cost[j] < freight_cost[j - 1] ||
          breakpoint_weight[j] < breakpoint_weight[j - 1]) {
        issues.push_back("freight schedule must be nondecreasing");
        break;
      }
    }
  }
  if (demand.empty()) issues.push_back("no scenarios");
  if (probability.size() != demand.size()) issues.push_back("probability count differs from scenarios");
  double mass = 0.0;
  for (double p : probability) mass += p;
  if (!probability.empty() && std::abs(mass - 1.0) > 1e-9) {
    issues.push_back("probabilities sum to " + std::to_string(mass));
  }
  for (std::size_t w = 0; w < demand.size(); ++w) {
    bool ok = static_cast<int>(demand[w].size()) == items;
    for (const auto& row : demand[w]) ok = ok && static_cast<int>(row.size()) == periods;
    if (!ok) {
      issues.push_back("scenario " + std::to_string(w) + ": demand shape differs from items x periods");
      continue;
    }
    for (const auto& row : demand[w]) {
      for (double d : row) {
        if (!(d >= 0.0) || !std::isfinite(d)) {
          issues.push_back("scenario " + std::to_string(w) + ": negative demand");
          break;
        }
      }
    }
  }
  return issues;
}

void MssopGenSpec::check() const {
  if (items <= 0 || periods <= 0 || scenarios <= 0) {
    throw InvalidModel("items, periods and scenarios must be positive");
  }
  if (!(lumpy_fraction >= 0.0 && lumpy_fraction <= 1.0)) {
    throw InvalidModel("lumpy_fraction must lie in [0, 1]");
  }
}

std::vector<double> default_freight_cost() {
  return {0, 1000, 1000, 1500, 1500, 2200, 2200};
}

std::vector<double> default_breakpoint_weight() {
  return {0, 0, 17500, 17500, 35000, 35000, 70000};
}

MssopInstance generate_mssop_instance(const MssopGenSpec& spec) {
  spec.check();
  Rng rng(spec.seed);
  MssopInstance in;
  in.items = spec.items;
  in.periods = spec.periods;
  in.freight_cost = default_freight_cost();
  in.breakpoint_weight = default_breakpoint_weight();
  for (int i = 0; i < spec.items; ++i) {
    in.holding_cost.push_back(rng.uniform(50.0, 100.0));
    in.setup_cost.push_back(rng.uniform(500.0, 1000.0));
    in.unit_weight.push_back(rng.uniform(1.0, 5.0));
    in.lost_sales_penalty.push_back(rng.uniform(150.0, 300.0));
  }
  in.initial_inventory.assign(spec.items, 0.0);

  // Partial Fisher-Yates over the item-period cells.
  const int cells = spec.items * spec.periods;
  const int lumpy = static_cast<int>(std::lround(spec.lumpy_fraction * cells));
  std::vector<int> order(cells);
  std::iota(order.begin(), order.end(), 0);
  for (int c = 0; c < lumpy; ++c) {
    const int pick = c + static_cast<int>(rng.below(cells - c));
    std::swap(order[c], order[pick]);
  }
  in.demand_mean = grid(spec.items, spec.periods, 100.0);
  in.demand_sd = grid(spec.items, spec.periods, 10.0);
  for (int c = 0; c < lumpy; ++c) {
    in.demand_mean[order[c] / spec.periods][order[c] % spec.periods] = 150.0;
    in.demand_sd[order[c] / spec.periods][order[c] % spec.periods] = 20.0;
  }
  for (int w = 0; w < spec.scenarios; ++w) {
    auto d = grid(spec.items, spec.periods, 0.0);
    for (int i = 0; i < spec.items; ++i) {
      for (int t = 0; t < spec.periods; ++t) {
        d[i][t] = std::max(0.0, std::round(rng.normal(in.demand_mean[i][t],
                                                      in.demand_sd[i][t])));
      }
    }
    in.demand.push_back(std::move(d));
  }
  in.probability.assign(spec.scenarios, 1.0 / spec.scenarios);
  return in;
}

MssopLayout mssop_layout(const MssopInstance& instance) {
  return {instance.items, instance.periods, instance.breakpoints()};
}

TwoStageProblem build_mssop_two_stage(const MssopInstance& in) {
  const std::vector<std::string> issues = in.validate();
  if (!issues.empty()) throw InvalidModel("mssop instance: " + issues.front());
  const MssopLayout L = mssop_layout(in);
  const int I = in.items;
  const int T = in.periods;
  const int J = in.breakpoints();
  const int n1 = L.columns();

  TwoStageProblem p;
  p.first_stage_cost.assign(n1, 0.0);
  p.first_stage_lower.assign(n1, 0.0);
  p.first_stage_upper.assign(n1, 1.0);
  p.first_stage_binary.assign(n1, 0);
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      p.first_stage_upper[L.x(i, t)] = kInfinity;
      p.first_stage_cost[L.y(i, t)] = in.setup_cost[i];
      p.first_stage_binary[L.y(i, t)] = 1;
    }
  }
  for (int j = 0; j < J; ++j) {
    for (int t = 0; t < T; ++t) {
      p.first_stage_cost[L.z(j, t)] = in.freight_cost[j];
      p.first_stage_binary[L.q(j, t)] = 1;
    }
  }

  std::vector<Triplet> a;
  int row = 0;
  const auto add_row = [&](Sense sense, double rhs) {
    p.first_stage_senses.push_back(sense);
    p.first_stage_rhs.push_back(rhs);
    return row++;
  };
  // x_it <= M_it y_it with M_it the largest remaining demand.
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      double big_m = 0.0;
      for (int s = t; s < T; ++s) {
        double peak = 0.0;
        for (const auto& d : in.demand) peak = std::max(peak, d[i][s]);
        big_m += peak;
      }
      const int r = add_row(Sense::kLessEqual, 0.0);
      a.push_back({r, L.x(i, t), 1.0});
      a.push_back({r, L.y(i, t), -big_m});
      // An item without remaining demand is never ordered.
      if (big_m == 0.0) p.first_stage_upper[L.x(i, t)] = 0.0;
    }
  }
  for (int t = 0; t < T; ++t) {
    // Shipped weight within the selected freight segment.
    int r = add_row(Sense::kLessEqual, 0.0);
    for (int i = 0; i < I; ++i) a.push_back({r, L.x(i, t), in.unit_weight[i]});
    for (int j = 0; j < J; ++j) a.push_back({r, L.z(j, t), -in.breakpoint_weight[j]});
    // Adjacency: z_j may be positive only next to the active segment.
    for (int j = 0; j < J; ++j) {
      r = add_row(Sense::kLessEqual, 0.0);
      a.push_back({r, L.z(j, t), 1.0});
      if (j > 0) a.push_back({r, L.q(j - 1, t), -1.0});
      if (j < J - 1) a.push_back({r, L.q(j, t), -1.0});
    }
    r = add_row(Sense::kLessEqual, 1.0);
    for (int j = 0; j < J; ++j) a.push_back({r, L.z(j, t), 1.0});
    r = add_row(Sense::kLessEqual, 1.0);
    for (int j = 0; j < J; ++j) a.push_back({r, L.q(j, t), 1.0});
    // The weights form a full convex combination whenever a segment is
    // chosen; otherwise a partial weight would price freight linearly.
    r = add_row(Sense::kEqual, 0.0);
    for (int j = 0; j < J; ++j) {
      a.push_back({r, L.z(j, t), 1.0});
      a.push_back({r, L.q(j, t), -1.0});
    }
  }
  p.first_stage_matrix = SparseMatrix(row, n1, std::move(a));

  // v_it - v_i,t-1 - u_it - x_it = o_i [t = 0] - d_it.
  const int n2 = 2 * I * T;
  const auto v = [&](int i, int t) { return i * T + t; };
  const auto u = [&](int i, int t) { return I * T + i * T + t; };
  std::vector<Triplet> w_entries;
  std::vector<Triplet> t_entries;
  for (int i = 0; i < I; ++i) {
    for (int t = 0; t < T; ++t) {
      const int r = i * T + t;
      w_entries.push_back({r, v(i, t), 1.0});
      if (t > 0) w_entries.push_back({r, v(i, t - 1), -1.0});
      w_entries.push_back({r, u(i, t), -1.0});
      t_entries.push_back({r, L.x(i, t), -1.0});
    }
  }
  const SparseMatrix w_matrix(I * T, n2, std::move(w_entries));
  const SparseMatrix t_matrix(I * T, n1, std::move(t_entries));
  for (int s = 0; s < in.scenarios(); ++s) {
    Scenario sc;
    sc.probability = in.probability[s];
    sc.recourse_cost.assign(n2, 0.0);
    sc.lower.assign(n2, 0.0);
    sc.upper.assign(n2, kInfinity);
    sc.binary.assign(n2, 0);
    sc.rhs.assign(I * T, 0.0);
    for (int i = 0; i < I; ++i) {
      for (int t = 0; t < T; ++t) {
        sc.recourse_cost[v(i, t)] = in.holding_cost[i];
        sc.recourse_cost[u(i, t)] = in.lost_sales_penalty[i];
        sc.upper[u(i, t)] = in.demand[s][i][t];
        sc.rhs[i * T + t] = (t == 0 ? in.initial_inventory[i] : 0.0) - in.demand[s][i][t];
      }
    }
    sc.senses.assign(I * T, Sense::kEqual);
    sc.recourse_matrix = w_matrix;
    sc.technology_matrix = t_matrix;
    p.scenarios.push_back(std::move(sc));
  }
  return p;
}

ReplenishmentPlan plan_from_first_stage(const MssopInstance& instance,
                                        const std::vector<double>& x) {
  const MssopLayout L = mssop_layout(instance);
  if (static_cast<int>(x.size()) != L.columns()) {
    throw InvalidModel("first-stage vector does not match the instance");
  }
  ReplenishmentPlan plan;
  plan.x = grid(L.items, L.periods, 0.0);
  plan.y = grid(L.items, L.periods, 0.0);
  plan.q = grid(L.breakpoints, L.periods, 0.0);
  plan.z = grid(L.breakpoints, L.periods, 0.0);
  for (int t = 0; t < L.periods; ++t) {
    for (int i = 0; i < L.items; ++i) {
      plan.x[i][t] = x[L.x(i, t)];
      plan.y[i][t] = x[L.y(i, t)];
    }
    for (int j = 0; j < L.breakpoints; ++j) {
      plan.q[j][t] = x[L.q(j, t)];
      plan.z[j][t] = x[L.z(j, t)];
    }
  }
  return plan;
}

std::vector<double> first_stage_from_plan(const MssopInstance& instance,
                                          const ReplenishmentPlan& plan) {
  const MssopLayout L = mssop_layout(instance);
  std::vector<double> x(L.columns(), 0.0);
  for (int t = 0; t < L.periods; ++t) {
    for (int i = 0; i < L.items; ++i) {
      x[L.x(i, t)] = plan.x.at(i).at(t);
      x[L.y(i, t)] = plan.y.at(i).at(t);
    }
    for (int j = 0; j < L.breakpoints; ++j) {
      x[L.q(j, t)] = plan.q.at(j).at(t);
      x[L.z(j, t)] = plan.z.at(j).at(t);
    }
  }
  return x;
}

ReplenishmentPlan round_plan(const MssopInstance& instance,
                             const ReplenishmentPlan& plan) {
  ReplenishmentPlan r = plan;
  for (int i = 0; i < instance.items; ++i) {
    for (int t = 0; t < instance.periods; ++t) {
      r.x[i][t] = std::max(0.0, std::round(plan.x[i][t]));
      r.y[i][t] = r.x[i][t] > 0.0 ? 1.0 : 0.0;
    }
  }
  for (auto& row : r.q) {
    for (double& v : row) v = std::round(v);
  }
  return r;
}

double freight_charge(const std::vector<double>& m, const std::vector<double>& f,
                      double weight) {
  if (weight <= 0.0) return 0.0;
  double best = kInfinity;
  for (std::size_t s = 0; s + 1 < m.size(); ++s) {
    if (weight <= m[s]) {
      best = std::min(best, f[s]);
    } else if (weight <= m[s + 1]) {
      const double lambda = (weight - m[s]) / (m[s + 1] - m[s]);
      best = std::min(best, f[s] + lambda * (f[s + 1] - f[s]));
    }
  }
  return best;
}

double replenishment_cost(const MssopInstance& instance,
                          const ReplenishmentPlan& plan) {
  double cost = 0.0;
  for (int t = 0; t < instance.periods; ++t) {
    double weight = 0.0;
    for (int i = 0; i < instance.items; ++i) {
      if (plan.x[i][t] > 0.0) cost += instance.setup_cost[i];
      weight += instance.unit_weight[i] * plan.x[i][t];
    }
    cost += freight_charge(instance.breakpoint_weight, instance.freight_cost, weight);
  }
  return cost;
}

SimulationReport simulate_policy(const MssopInstance& instance,
                                 const ReplenishmentPlan& plan,
                                 const SimulationOptions& options,
                                 const std::string& policy) {
  if (static_cast<int>(plan.x.size()) != instance.items ||
      (instance.items > 0 && static_cast<int>(plan.x[0].size()) != instance.periods)) {
    throw InvalidModel("plan does not match the instance dimensions");
  }
  if (options.replications <= 0) throw InvalidModel("replications must be positive");
  SimulationReport report;
  report.policy = policy;
  const double fixed = replenishment_cost(instance, plan);
  for (int r = 0; r < options.replications; ++r) {
    Rng rng(Rng::derive(options.seed, static_cast<std::uint64_t>(r)));
    ReplicationRecord rec;
    rec.replication = r;
    rec.demand = grid(instance.items, instance.periods, 0.0);
    for (int i = 0; i < instance.items; ++i) {
      for (int t = 0; t < instance.periods; ++t) {
        const double draw = rng.normal(instance.demand_mean.at(i).at(t),
                                       instance.demand_sd.at(i).at(t));
        rec.demand[i][t] = options.zero_demand ? 0.0 : std::max(0.0, std::round(draw));
      }
    }
    for (int i = 0; i < instance.items; ++i) {
      double stock = instance.initial_inventory[i];
      for (int t = 0; t < instance.periods; ++t) {
        const double d = rec.demand[i][t];
        const double available = stock + plan.x[i][t];
        const double lost = std::max(0.0, d - available);
        const double end = std::max(0.0, available - d);
        rec.balance_residual = std::max(
            rec.balance_residual, std::abs(end - stock - plan.x[i][t] - lost + d));
        if (lost > 0.0) ++rec.lost_sales_count;
        rec.lost_sales_quantity += lost;
        rec.holding_cost += instance.holding_cost[i] * end;
        rec.penalty_cost += instance.lost_sales_penalty[i] * lost;
        stock = end;
      }
    }
    rec.replenishment_cost = fixed;
    rec.total_cost = fixed + rec.holding_cost + rec.penalty_cost;
    report.mean_lost_sales_count += rec.lost_sales_count;
    report.mean_lost_sales_quantity += rec.lost_sales_quantity;
    report.mean_total_cost += rec.total_cost;
    report.mean_replenishment_cost += rec.replenishment_cost;
    report.replications.push_back(std::move(rec));
  }
  const double n = options.replications;
  report.mean_lost_sales_count /= n;
  report.mean_lost_sales_quantity /= n;
  report.mean_total_cost /= n;
  report.mean_replenishment_cost /= n;
  return report;
}

std::vector<double> setup_everywhere_start(const MssopInstance& instance,
                                           const DepArtifact& dep) {
  const MssopLayout L = mssop_layout(instance);
  std::vector<double> first(L.columns(), 0.0);
  for (int t = 0; t < L.periods; ++t) {
    double weight = 0.0;
    for (int i = 0; i < L.items; ++i) {
      first[L.y(i, t)] = 1.0;
      double peak = 0.0;
      for (const auto& d : instance.demand) peak = std::max(peak, d[i][t]);
      weight += instance.unit_weight[i] * peak;
    }
    // Cheapest segment whose upper breakpoint carries the weight.
    int best = -1;
    double best_cost = kInfinity;
    for (int j = 0; j + 1 < L.breakpoints; ++j) {
      if (instance.breakpoint_weight[j + 1] < weight) continue;
      const double cost = weight <= instance.breakpoint_weight[j]
                              ? instance.freight_cost[j]
                              : instance.freight_cost[j + 1];
      if (cost < best_cost) {
        best_cost = cost;
        best = j;
      }
    }
    if (best < 0) return {};
    first[L.q(best, t)] = 1.0;
  }
  std::vector<double> start(dep.mip.lp.num_cols(), 0.0);
  for (int c = 0; c < L.columns(); ++c) start[dep.index.x[c]] = first[c];
  return start;
}

std::vector<PolicyOutcome> compare_policies(const MssopInstance& instance,
                                            const std::vector<double>& rhos,
                                            const CompareOptions& options) {
  const TwoStageProblem problem = build_mssop_two_stage(instance);
  std::vector<PolicyOutcome> out;
  const auto run = [&](const std::string& label, double rho, const DepArtifact& dep) {
    MipOptions mip = options.mip;
    if (!mip.start) {
      std::vector<double> start = setup_everywhere_start(instance, dep);
      if (!start.empty()) mip.start = std::move(start);
    }
    const MipSolution sol = solve_mip(dep.mip, mip);
    if (!sol.has_incumbent()) {
      throw InvalidModel("no replenishment plan found for " + label);
    }
    PolicyOutcome o;
    o.label = label;
    o.rho = rho;
    o.status = sol.status;
    o.objective = sol.objective;
    o.bound = sol.bound;
    o.plan = round_plan(instance, plan_from_first_stage(instance, first_stage_part(dep, sol.x)));
    o.simulation = simulate_policy(instance, o.plan, options.simulation, label);
    out.push_back(std::move(o));
  };
  run("neutral", 0.0, build_dep_expectation(problem));
  AsdDepOptions collapsed;
  collapsed.collapse_mean = true;
  for (double rho : rhos) {
    char label[32];
    std::snprintf(label, sizeof label, "asd(%g)", rho);
    run(label, rho, build_dep_asd(problem, rho, collapsed));
  }
  return out;
}

}  // namespace riskshed
