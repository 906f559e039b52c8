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


// Acceptance run: one PASS/FAIL line per criterion. The exit status counts
// only the hard criteria; the MSSOP ordering (8) is a statistical finding
// and is reported without failing the run.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "oracle/brute_force.h"
#include "oracle/freight.h"
#include "oracle/toys.h"
#include "riskshed/dep.h"
#include "riskshed/knapsack.h"
#include "riskshed/lshaped.h"
#include "riskshed/mip.h"
#include "riskshed/mssop.h"
#include "riskshed/rm_asd.h"
#include "riskshed/rng.h"

using namespace riskshed;
namespace fs = std::filesystem;

namespace {

// Pinned tolerances and budgets.
constexpr double kChainTolerance = 1e-8;
constexpr double kOracleRelTolerance = 1e-6;
constexpr double kReductionTolerance = 1e-9;
constexpr double kLShapedRelTolerance = 1e-6;
constexpr double kSandwichTolerance = 1e-9;
constexpr double kTargetGapPercent = 5.0;
constexpr double kTableGapTolerance = 0.02;
constexpr double kBalanceTolerance = 0.0;
constexpr double kFreightRelTolerance = 1e-9;

constexpr double kBudget1 = 1.0;
constexpr double kBudget3 = 60.0;
constexpr double kBudget4 = 600.0;
constexpr double kBudget7 = 120.0;
constexpr double kBudget8 = 600.0;

struct Verdict {
  bool pass = false;
  std::string detail;
};

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::abs(b));
}

double dep_value(const DepArtifact& dep) {
  const MipSolution sol = solve_mip(dep.mip);
  return sol.status == MipStatus::kOptimal ? sol.objective : std::nan("");
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

Verdict table_dimensions() {
  struct Row {
    int n1, n2, scenarios;
    long long vars, constr, nnz;
  };
  const Row rows[] = {
      {10, 20, 50, 1010, 1010, 30100},   {10, 20, 100, 2010, 2010, 60100},
      {20, 30, 50, 1520, 1010, 50200},   {20, 30, 100, 3020, 2010, 100200},
      {30, 40, 50, 2030, 1010, 70300},   {30, 40, 100, 4030, 2010, 140300},
      {40, 50, 50, 2540, 1010, 90400},   {40, 50, 100, 5040, 2010, 180400},
  };
  const auto start = std::chrono::steady_clock::now();
  int matched = 0;
  for (const Row& r : rows) {
    KnapsackGenSpec spec;
    spec.n1 = r.n1;
    spec.n2 = r.n2;
    spec.scenarios = r.scenarios;
    const DepStats s = audit_dimensions(generate_knapsack(spec));
    if (s.variables == r.vars && s.binaries == r.vars && s.constraints == r.constr &&
        s.nonzeros == r.nnz) {
      ++matched;
    }
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {matched == 8 && secs < kBudget1,
          std::to_string(matched) + "/8 rows exact, " + fmt(secs, 3) + " s"};
}

Verdict bound_chain() {
  Rng rng(2);
  int draws = 0;
  int held = 0;
  int agree = 0;
  double worst = 0.0;
  while (draws < 200) {
    oracle::ToyShape shape;
    shape.n1 = 2 + static_cast<int>(rng.below(5));
    shape.n2 = 2 + static_cast<int>(rng.below(5));
    shape.scenarios = 1 + static_cast<int>(rng.below(6));
    const TwoStageProblem p = oracle::random_toy(rng, shape);
    const auto points = oracle::feasible_points(p);
    const auto& x = points[rng.below(points.size())];
    const double cx = std::inner_product(x.begin(), x.end(), p.first_stage_cost.begin(), 0.0);
    const std::vector<double> rec = oracle::recourse_values(p, x, false);
    double mean = 0.0;
    for (int k = 0; k < p.num_scenarios(); ++k) mean += p.scenarios[k].probability * (cx + rec[k]);
    const double rho = rng.uniform01();
    const double eta = mean - rng.uniform(0, 30);
    const RiskSpec e{Measure::kExpectation, rho, std::nullopt};
    const RiskSpec m{Measure::kModifiedExpectedExcess, rho, eta};
    const RiskSpec a{Measure::kAbsoluteSemiDeviation, rho, std::nullopt};
    const double qe = oracle::measure_value(p, cx, rec, e);
    const double mod = oracle::measure_value(p, cx, rec, m) + rho * eta;
    const double asd = oracle::measure_value(p, cx, rec, a);
    worst = std::max({worst, qe - mod, mod - asd});
    if (qe <= mod + kChainTolerance && mod <= asd + kChainTolerance) ++held;
    const ObjectiveBreakdown b = evaluate_breakdown(p, x);
    if (close_rel(objective_value(b, e), qe, kChainTolerance) &&
        close_rel(objective_value(b, m) + rho * eta, mod, kChainTolerance) &&
        close_rel(objective_value(b, a), asd, kChainTolerance)) {
      ++agree;
    }
    ++draws;
  }
  return {held == draws && agree == draws,
          "chain held on " + std::to_string(held) + "/" + std::to_string(draws) +
              " draws, evaluator agreed on " + std::to_string(agree) +
              ", worst violation " + fmt(worst)};
}

Verdict extensive_forms() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(3);
  int matched = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    oracle::ToyShape shape;
    shape.n1 = 2 + static_cast<int>(rng.below(5));
    shape.n2 = 2 + static_cast<int>(rng.below(5));
    shape.scenarios = 1 + static_cast<int>(rng.below(5));
    const TwoStageProblem p = oracle::random_toy(rng, shape);
    const double rho = rng.uniform01();
    const double eta = rng.uniform(-40, 0);
    const RiskSpec asd{Measure::kAbsoluteSemiDeviation, rho, std::nullopt};
    const RiskSpec ee{Measure::kExpectedExcess, rho, eta, ExcessBase::kSecondStageOnly};
    const double asd_opt = oracle::brute_force_optimum(p, asd).objective;
    const double ee_opt = oracle::brute_force_optimum(p, ee).objective;
    const double vals[] = {dep_value(build_dep_asd(p, rho)),
                           dep_value(build_dep_asd(p, rho, {.collapse_mean = true}))};
    bool ok = close_rel(dep_value(build_dep_ee(p, rho, eta)), ee_opt, kOracleRelTolerance);
    worst = std::max(worst, std::abs(dep_value(build_dep_ee(p, rho, eta)) - ee_opt));
    for (double v : vals) {
      ok = ok && close_rel(v, asd_opt, kOracleRelTolerance);
      worst = std::max(worst, std::abs(v - asd_opt));
    }
    if (ok) ++matched;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {matched == 20 && secs < kBudget3,
          std::to_string(matched) + "/20 instances, worst abs diff " + fmt(worst) + ", " +
              fmt(secs, 3) + " s"};
}

Verdict sandwich() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(4);
  int bracketed = 0;
  int monotone = 0;
  int tight = 0;
  double gap_sum = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    oracle::ToyShape shape;
    shape.n1 = 3 + static_cast<int>(rng.below(4));
    shape.n2 = 3 + static_cast<int>(rng.below(4));
    shape.scenarios = 3 + static_cast<int>(rng.below(3));
    const TwoStageProblem p = oracle::random_toy(rng, shape);
    RmAsdConfig config;
    config.rho = 0.25 + 0.5 * rng.uniform01();
    config.eta_policy = EtaPolicy::kStrict;
    const RiskSpec spec{Measure::kAbsoluteSemiDeviation, config.rho, std::nullopt};
    const double optimum = oracle::brute_force_optimum(p, spec).objective;
    const RmAsdResult r = rm_asd_solve(p, config);
    const double slack = kSandwichTolerance * std::max(1.0, std::abs(optimum));
    if (r.state.lower_bound <= optimum + slack && optimum <= r.state.upper_bound + slack) {
      ++bracketed;
    }
    bool mono = true;
    const auto& h = r.state.history;
    for (std::size_t i = 1; i < h.size(); ++i) {
      mono = mono && h[i].lower_bound >= h[i - 1].lower_bound &&
             h[i].upper_bound <= h[i - 1].upper_bound;
    }
    if (mono) ++monotone;
    const double gap = relative_gap_percent(r.state.lower_bound, r.state.upper_bound);
    gap_sum += gap;
    if (gap <= kTargetGapPercent) ++tight;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {bracketed == 20 && monotone == 20 && tight >= 10 && secs < kBudget4,
          "bracketed " + std::to_string(bracketed) + "/20, monotone " +
              std::to_string(monotone) + "/20, gap <= 5% on " + std::to_string(tight) +
              "/20 (mean " + fmt(gap_sum / 20, 3) + "%), " + fmt(secs, 3) + " s"};
}

Verdict table_gaps() {
  struct Row {
    const char* name;
    double lb, ub, gap;
  };
  // Reference (LB, UB, Gap) triples, kept verbatim including a repeated label.
  const Row rows[] = {
      {"knaps.10.20.50.a", -89.82, -87.61, 2.46},  {"knaps.10.20.50.b", -91.30, -89.08, 2.43},
      {"knaps.10.20.50.c", -82.99, -80.23, 3.32},  {"knaps.10.20.50.d", -83.44, -80.24, 3.83},
      {"knaps.10.20.50.e", -88.49, -86.56, 2.18},  {"knaps.10.20.100.a", -62.64, -59.60, 4.84},
      {"knaps.10.20.100.b", -65.15, -63.51, 2.51}, {"knaps.10.20.100.c", -59.22, -58.33, 1.49},
      {"knaps.10.20.100.d", -59.21, -56.59, 4.42}, {"knaps.10.20.100.e", -59.42, -57.12, 3.87},
      {"knaps.20.30.50.a", -93.62, -91.83, 1.91},  {"knaps.20.30.50.b", -91.70, -90.17, 1.67},
      {"knaps.20.30.50.c", -90.14, -88.54, 1.77},  {"knaps.20.30.50.d", -90.44, -88.04, 2.66},
      {"knaps.20.30.50.e", -91.88, -90.10, 1.93},  {"knaps.20.30.100.a", -68.76, -67.15, 2.33},
      {"knaps.20.30.100.b", -61.03, -58.47, 4.20}, {"knaps.20.30.100.c", -64.77, -62.35, 3.74},
      {"knaps.20.30.100.d", -64.16, -61.89, 3.54}, {"knaps.20.30.100.e", -60.92, -57.80, 5.13},
      {"knaps.30.40.50.a", -95.22, -94.33, 0.94},  {"knaps.30.40.50.b", -94.02, -92.07, 2.07},
      {"knaps.30.40.50.c", -93.86, -92.84, 1.08},  {"knaps.30.40.50.d", -94.90, -93.18, 1.81},
      {"knaps.30.40.50.e", -96.09, -95.61, 0.49},  {"knaps.30.40.100.a", -67.11, -63.72, 5.05},
      {"knaps.30.40.100.b", -68.66, -66.61, 2.98}, {"knaps.30.40.100.c", -62.96, -61.47, 2.37},
      {"knaps.30.40.100.d", -65.73, -64.02, 2.61}, {"knaps.30.40.100.e", -64.12, -62.89, 1.92},
      {"knaps.40.50.50.a", -95.13, -93.94, 1.26},  {"knaps.40.50.50.b", -96.04, -94.97, 1.12},
      {"knaps.40.50.50.c", -93.89, -93.70, 0.20},  {"knaps.40.50.50.c", -96.84, -96.60, 0.24},
      {"knaps.40.50.50.d", -95.96, -95.81, 0.16},  {"knaps.40.50.100.a", -66.61, -65.77, 1.26},
      {"knaps.40.50.100.b", -67.55, -67.19, 0.53}, {"knaps.40.50.100.c", -68.67, -65.54, 4.57},
      {"knaps.40.50.100.d", -66.98, -66.26, 1.07}, {"knaps.40.50.100.e", -66.44, -65.08, 2.04},
  };
  int by_lb = 0;
  int by_ub = 0;
  for (const Row& r : rows) {
    if (std::abs(relative_gap_percent(r.lb, r.ub) - r.gap) <= kTableGapTolerance) ++by_lb;
    if (std::abs(100 * (r.ub - r.lb) / std::abs(r.ub) - r.gap) <= kTableGapTolerance) ++by_ub;
  }
  return {by_lb == 40, std::to_string(by_lb) + "/40 with the |LB| denominator (" +
                           std::to_string(by_ub) + "/40 with |UB|)"};
}

Verdict reductions() {
  Rng rng(6);
  int held = 0;
  for (int trial = 0; trial < 10; ++trial) {
    oracle::ToyShape shape;
    shape.scenarios = 2 + trial % 4;
    const TwoStageProblem p = oracle::random_toy(rng, shape);
    const double eta = rng.uniform(-40, 0);
    const double base = dep_value(build_dep_expectation(p));
    const double at_zero[] = {
        dep_value(build_dep_ee(p, 0.0, eta)),
        dep_value(build_dep_ee(p, 0.0, eta, ExcessBase::kTotalCost)),
        dep_value(build_dep_modified_ee(p, 0.0, eta)),
        dep_value(build_dep_asd(p, 0.0)),
        dep_value(build_dep_asd(p, 0.0, {.collapse_mean = true})),
    };
    bool ok = true;
    for (double v : at_zero) ok = ok && close_rel(v, base, kReductionTolerance);
    shape.scenarios = 1;
    const TwoStageProblem one = oracle::random_toy(rng, shape);
    const double rho = rng.uniform01();
    const double one_base = dep_value(build_dep_expectation(one));
    ok = ok && close_rel(dep_value(build_dep_asd(one, rho)), one_base, kReductionTolerance) &&
         close_rel(dep_value(build_dep_asd(one, rho, {.collapse_mean = true})), one_base,
                   kReductionTolerance);
    if (ok) ++held;
  }
  return {held == 10, std::to_string(held) + "/10 toys"};
}

Verdict lshaped_exactness() {
  const auto start = std::chrono::steady_clock::now();
  Rng rng(7);
  int matched = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    oracle::ToyShape shape;
    shape.n1 = 3 + trial % 4;
    shape.n2 = 5;
    shape.m2 = 4;
    shape.scenarios = 2 + trial % 4;
    shape.integral_recourse = true;
    TwoStageProblem p = oracle::random_toy(rng, shape);
    // The recourse polytope is integral, so the decomposition's LP
    // subproblems and the extensive form agree without integrality on y.
    for (Scenario& s : p.scenarios) std::fill(s.binary.begin(), s.binary.end(), 0);
    const double rho = rng.uniform01();
    const double eta = rng.uniform(-30, 0);
    const double expected = dep_value(build_dep_modified_ee(p, rho, eta));
    const LShapedResult r = lshaped_solve(p, rho, eta);
    worst = std::max(worst, std::abs(r.upper_bound - expected));
    if (!r.cap_reached && close_rel(r.upper_bound, expected, kLShapedRelTolerance)) ++matched;
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {matched == 10 && secs < kBudget7,
          std::to_string(matched) + "/10 instances, worst abs diff " + fmt(worst) + ", " +
              fmt(secs, 3) + " s"};
}

Verdict mssop_ordering() {
  const auto start = std::chrono::steady_clock::now();
  MssopGenSpec spec;
  spec.items = 5;
  spec.periods = 10;
  spec.scenarios = 25;
  const MssopInstance in = generate_mssop_instance(spec);
  CompareOptions opts;
  opts.simulation.replications = 5;
  const auto out = compare_policies(in, {0.5, 0.9}, opts);
  const SimulationReport& n = out[0].simulation;
  const SimulationReport& a5 = out[1].simulation;
  const SimulationReport& a9 = out[2].simulation;
  const bool count = n.mean_lost_sales_count >= a5.mean_lost_sales_count &&
                     a5.mean_lost_sales_count >= a9.mean_lost_sales_count;
  const bool quantity = n.mean_lost_sales_quantity >= a5.mean_lost_sales_quantity &&
                        a5.mean_lost_sales_quantity >= a9.mean_lost_sales_quantity;
  const bool cost = n.mean_total_cost <= a5.mean_total_cost &&
                    a5.mean_total_cost <= a9.mean_total_cost;
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  auto triple = [](double a, double b, double c) {
    return fmt(a, 6) + "/" + fmt(b, 6) + "/" + fmt(c, 6);
  };
  std::string detail =
      "neutral/asd(0.5)/asd(0.9) lost-sales count " +
      triple(n.mean_lost_sales_count, a5.mean_lost_sales_count, a9.mean_lost_sales_count) +
      (count ? " ordered" : " not ordered") + ", quantity " +
      triple(n.mean_lost_sales_quantity, a5.mean_lost_sales_quantity,
             a9.mean_lost_sales_quantity) +
      (quantity ? " ordered" : " not ordered") + ", total cost " +
      triple(n.mean_total_cost, a5.mean_total_cost, a9.mean_total_cost) +
      (cost ? " ordered" : " not ordered") + ", " + fmt(secs, 3) + " s";
  return {count && quantity && cost && secs < kBudget8, detail};
}

Verdict invariants() {
  MssopGenSpec spec;
  spec.items = 5;
  spec.periods = 10;
  spec.scenarios = 2;
  spec.seed = 11;
  const MssopInstance in = generate_mssop_instance(spec);
  Rng rng(9);
  int trajectories = 0;
  int violations = 0;
  for (int policy = 0; policy < 20; ++policy) {
    ReplenishmentPlan plan;
    plan.x.assign(in.items, std::vector<double>(in.periods, 0.0));
    for (auto& row : plan.x) {
      for (double& v : row) v = rng.uniform01() < 0.4 ? std::floor(rng.uniform(0, 400)) : 0.0;
    }
    plan.y = plan.x;
    plan.q.assign(in.breakpoints(), std::vector<double>(in.periods, 0.0));
    plan.z = plan.q;
    SimulationOptions opts;
    opts.replications = 10;
    opts.seed = 100 + policy;
    for (const ReplicationRecord& rec : simulate_policy(in, plan, opts).replications) {
      // Replay every item trajectory and check the balance
      // v_t = v_{t-1} + x_t + u_t - d_t with v, u >= 0 and no stock left
      // over in a period that lost sales.
      int count = 0;
      double quantity = 0.0;
      double holding = 0.0;
      for (int i = 0; i < in.items; ++i) {
        double v = in.initial_inventory[i];
        for (int t = 0; t < in.periods; ++t) {
          const double d = rec.demand[i][t];
          const double u = std::max(0.0, d - v - plan.x[i][t]);
          const double next = v + plan.x[i][t] + u - d;
          if (next < 0.0 || u < 0.0 || (u > 0.0 && next != 0.0)) ++violations;
          if (u > 0.0) ++count;
          quantity += u;
          holding += in.holding_cost[i] * next;
          v = next;
        }
        ++trajectories;
      }
      if (rec.balance_residual > kBalanceTolerance || rec.lost_sales_count != count ||
          !close_rel(rec.lost_sales_quantity, quantity, 1e-12) ||
          !close_rel(rec.holding_cost, holding, 1e-12)) {
        ++violations;
      }
    }
  }
  int freight_bad = 0;
  const double top = in.breakpoint_weight.back();
  for (int trial = 0; trial < 100; ++trial) {
    const double w = trial < in.breakpoints() ? in.breakpoint_weight[trial]
                                              : rng.uniform(0.0, top);
    const double lib = freight_charge(in.breakpoint_weight, in.freight_cost, w);
    if (!close_rel(lib, oracle::freight_by_mip(in, w), kFreightRelTolerance)) ++freight_bad;
  }
  return {trajectories == 1000 && violations == 0 && freight_bad == 0,
          std::to_string(violations) + " balance violations over " +
              std::to_string(trajectories) + " trajectories, " +
              std::to_string(freight_bad) + " freight mismatches over 100 weights"};
}

Verdict determinism() {
  const fs::path dir = fs::temp_directory_path() / "riskshed_acceptance_rerun";
  fs::remove_all(dir);
  fs::create_directories(dir);
  auto run = [&](const std::string& args) {
    const std::string cmd = "cd '" + dir.string() + "' && '" RISKSHED_CLI "' " + args +
                            " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  const std::vector<std::string> runs = {
      "gen knapsack --n1 4 --n2 4 --m1 2 --m2 3 --scens 4 --seed 5 --out k.sp2.json",
      "solve --in k.sp2.json --out k-neutral.result.json",
      "solve --in k.sp2.json --risk asd --rho 0.5 --out k-asd.result.json",
      "solve --in k.sp2.json --risk ee --rho 0.5 --eta -1500 --out k-ee.result.json",
      "solve --in k.sp2.json --risk asd --rho 0.5 --method rm-asd --out k-rm.result.json",
      "solve --in k.sp2.json --risk mod-ee --rho 0.5 --eta -1500 --method lshaped "
      "--out k-ls.result.json",
      "export-mps --in k.sp2.json --risk asd --rho 0.5 --out k.mps",
      "gen mssop --items 2 --periods 4 --scens 5 --seed 3 --out m.sp2.json",
      "audit --in m.sp2.json",
      "solve --in m.sp2.json --out m.result.json",
      "simulate --in m.sp2.json --plan m.result.json --plan-csv m.plan.csv",
      "compare --in m.sp2.json --rho 0.5 --node-cap 1000 --out c.sim.csv",
      "report --inputs m.sim.csv c.sim.csv --out report.csv",
  };
  int setup_failed = 0;
  for (const std::string& r : runs) {
    if (run(r) != 0) ++setup_failed;
  }
  int manifests = 0;
  int reproduced = 0;
  std::vector<fs::path> found;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().string().ends_with(".manifest.json")) found.push_back(entry.path());
  }
  std::sort(found.begin(), found.end());
  for (const fs::path& m : found) {
    ++manifests;
    if (run("rerun --manifest '" + m.filename().string() + "'") == 0) ++reproduced;
  }
  fs::remove_all(dir);
  return {setup_failed == 0 && manifests == static_cast<int>(runs.size()) &&
              reproduced == manifests,
          std::to_string(reproduced) + "/" + std::to_string(manifests) +
              " runs reproduced byte-identically, " + std::to_string(setup_failed) +
              " runs failed"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* title;
    bool hard;
    std::function<Verdict()> check;
  };
  const Criterion criteria[] = {
      {1, "extensive form dimensions", true, table_dimensions},
      {2, "bound chain", true, bound_chain},
      {3, "extensive forms vs brute force", true, extensive_forms},
      {4, "RM-ASD sandwich", true, sandwich},
      {5, "gap convention", true, table_gaps},
      {6, "reduction identities", true, reductions},
      {7, "L-shaped exactness", true, lshaped_exactness},
      {8, "MSSOP risk ordering", false, mssop_ordering},
      {9, "mass balance and freight", true, invariants},
      {10, "rerun determinism", true, determinism},
  };
  int hard_failures = 0;
  for (const Criterion& c : criteria) {
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass && c.hard) ++hard_failures;
    std::printf("criterion %d: %s %s%s: %s\n", c.id, v.pass ? "PASS" : "FAIL", c.title,
                c.hard ? "" : " (finding, not gating)", v.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d hard criteria failed\n", hard_failures);
  return hard_failures == 0 ? 0 : 1;
}
