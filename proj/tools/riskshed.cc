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


// riskshed: generate, solve, simulate, audit and report two-stage
// mean-risk problems. Exit codes: 0 ok, 1 error, 2 usage or config,
// 3 infeasible, 4 cap reached (outputs still written).

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riskshed/dep.h"
#include "riskshed/errors.h"
#include "riskshed/io.h"
#include "riskshed/knapsack.h"
#include "riskshed/lshaped.h"
#include "riskshed/mip.h"
#include "riskshed/model.h"
#include "riskshed/mssop.h"
#include "riskshed/parallel.h"
#include "riskshed/rm_asd.h"

namespace fs = std::filesystem;
using namespace riskshed;

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kUsage = 2;
constexpr int kInfeasible = 3;
constexpr int kCapReached = 4;

// Raised for option combinations that parse but make no sense.
class ConfigError : public Error {
 public:
  using Error::Error;
};

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Replaces the last extension: a.result.json -> a.result.manifest.json.
std::string sibling(const std::string& path, const std::string& suffix) {
  const fs::path p(path);
  return (p.parent_path() / (p.stem().string() + suffix)).string();
}

std::string strip_suffix(const std::string& path, const std::string& suffix) {
  if (path.size() > suffix.size() &&
      path.compare(path.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return path.substr(0, path.size() - suffix.size());
  }
  return fs::path(path).replace_extension().string();
}

void write_text(const std::string& path, const std::string& text) {
  write_file_atomic(path, text);
}

// What a subcommand did, for the manifest.
struct Outcome {
  int exit_status = kOk;
  std::map<std::string, std::string> config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::string manifest_path;
};

// ---- gen ------------------------------------------------------------------

struct GenKnapsackArgs {
  KnapsackGenSpec spec;
  std::string out;
};

struct GenMssopArgs {
  MssopGenSpec spec;
  std::string out;
};

void print_audit(const DepStats& s) {
  std::cout << "vars=" << s.variables << " constr=" << s.constraints
            << " nnz=" << s.nonzeros << '\n';
}

Outcome gen_knapsack(const GenKnapsackArgs& a) {
  a.spec.check();
  Outcome o;
  const ProblemFile file = make_problem_file(a.spec);
  const std::string out = a.out.empty() ? a.spec.name() + ".sp2.json" : a.out;
  write_text(out, serialize_problem(file));
  std::cout << "wrote " << out << '\n';
  print_audit(audit_dimensions(file.problem));
  o.config = {{"kind", "knapsack"},
              {"n1", std::to_string(a.spec.n1)},
              {"n2", std::to_string(a.spec.n2)},
              {"m1", std::to_string(a.spec.m1)},
              {"m2", std::to_string(a.spec.m2)},
              {"scens", std::to_string(a.spec.scenarios)},
              {"seed", std::to_string(a.spec.seed)},
              {"letter", std::string(1, a.spec.letter)}};
  o.outputs = {out};
  return o;
}

Outcome gen_mssop(const GenMssopArgs& a) {
  a.spec.check();
  Outcome o;
  const ProblemFile file = make_problem_file(a.spec);
  const std::string out = a.out.empty() ? file.name + ".sp2.json" : a.out;
  write_text(out, serialize_problem(file));
  std::cout << "wrote " << out << '\n';
  print_audit(audit_dimensions(file.materialize()));
  o.config = {{"kind", "mssop"},
              {"items", std::to_string(a.spec.items)},
              {"periods", std::to_string(a.spec.periods)},
              {"scens", std::to_string(a.spec.scenarios)},
              {"lumpy", fmt(a.spec.lumpy_fraction)},
              {"seed", std::to_string(a.spec.seed)}};
  o.outputs = {out};
  return o;
}

// ---- solve ----------------------------------------------------------------

struct SolveArgs {
  std::string in;
  std::string out;
  std::string history;
  std::string risk = "neutral";
  std::string method = "dep";
  std::string asd_form = "collapsed";
  std::string excess_base = "total";
  double rho = 0.5;
  std::optional<double> eta;
  int node_cap = 100000;
  int iteration_cap = 50;
  int lshaped_iteration_cap = 200;
  double tolerance = 1e-6;
  std::optional<double> epsilon;
  std::optional<double> xi;
  std::string eta_policy = "strict";
  std::string bound_source = "dep";
  std::string initial = "dep";
  bool multicut = false;
  bool record_timing = false;
};

RiskSpec risk_spec(const SolveArgs& a) {
  RiskSpec spec;
  if (a.risk == "neutral") {
    spec.measure = Measure::kExpectation;
    spec.rho = 0.0;
    if (a.eta) throw ConfigError("--eta is only used with --risk ee or mod-ee");
    return spec;
  }
  spec.rho = a.rho;
  if (a.risk == "asd") {
    spec.measure = Measure::kAbsoluteSemiDeviation;
    if (a.eta) throw ConfigError("--eta is only used with --risk ee or mod-ee");
  } else {
    spec.measure = a.risk == "ee" ? Measure::kExpectedExcess
                                  : Measure::kModifiedExpectedExcess;
    if (!a.eta) throw ConfigError("--risk " + a.risk + " needs --eta");
    spec.eta = a.eta;
    spec.excess_base = a.excess_base == "total" ? ExcessBase::kTotalCost
                                                : ExcessBase::kSecondStageOnly;
  }
  spec.check();
  return spec;
}

void print_row(const std::string& name, double lb, double ub) {
  std::printf("%-24s %14s %14s %8s\n", "Instance", "LB", "UB", "Gap(%)");
  std::printf("%-24s %14.2f %14.2f %8.2f\n", name.c_str(), lb, ub,
              relative_gap_percent(lb, ub));
}

std::map<std::string, double> evaluate_at(const TwoStageProblem& p,
                                          const std::vector<double>& x,
                                          const RiskSpec& spec, int threads,
                                          const MipOptions& mip) {
  EvaluationOptions eval;
  eval.threads = threads;
  eval.mip = mip;
  const ObjectiveBreakdown b = evaluate_breakdown(p, x, eval);
  std::map<std::string, double> out{{"expectation", b.expectation}};
  if (spec.measure != Measure::kExpectation) {
    out[measure_name(spec.measure)] = objective_value(b, spec);
  }
  return out;
}

Outcome solve(const SolveArgs& a, int threads) {
  Outcome o;
  const RiskSpec spec = risk_spec(a);
  if (a.method == "rm-asd" && spec.measure != Measure::kAbsoluteSemiDeviation) {
    throw ConfigError("--method rm-asd requires --risk asd");
  }
  if (a.method == "lshaped" && spec.measure != Measure::kModifiedExpectedExcess &&
      spec.measure != Measure::kExpectation) {
    throw ConfigError("--method lshaped solves --risk mod-ee (or neutral)");
  }
  const ProblemFile file = parse_problem(read_file(a.in));
  TwoStageProblem problem = file.materialize();
  if (auto warning = prepare(problem)) std::cerr << "warning: " << *warning << '\n';
  const std::string input_checksum = fnv1a64_hex(serialize_problem(file));

  const std::string out =
      a.out.empty() ? strip_suffix(a.in, ".sp2.json") + ".result.json" : a.out;
  std::string history;
  if (a.method != "dep") {
    history = a.history.empty() ? strip_suffix(out, ".result.json") + ".history.csv"
                                : a.history;
  }

  MipOptions mip;
  mip.node_cap = a.node_cap;
  ResultFile r;
  r.solver = a.method;
  r.input_checksum = input_checksum;
  r.history = history;
  r.config = {{"risk", a.risk},
              {"method", a.method},
              {"node_cap", std::to_string(a.node_cap)}};
  if (a.risk != "neutral") r.config["rho"] = fmt(spec.rho);
  if (spec.eta) r.config["eta"] = fmt(*spec.eta);
  if (spec.measure == Measure::kExpectedExcess) r.config["excess_base"] = a.excess_base;
  if (spec.measure == Measure::kAbsoluteSemiDeviation && a.method == "dep") {
    r.config["asd_form"] = a.asd_form;
  }
  bool capped = false;
  bool infeasible = false;

  if (a.method == "dep") {
    AsdDepOptions asd;
    asd.collapse_mean = a.asd_form == "collapsed";
    const DepArtifact dep = build_dep(problem, spec, asd);
    const MipSolution sol = solve_mip(dep.mip, mip);
    if (sol.status == MipStatus::kUnbounded) throw Unbounded("extensive form is unbounded");
    infeasible = !sol.has_incumbent();
    capped = sol.status == MipStatus::kNodeCapReached;
    if (infeasible) {
      r.lower_bound = sol.status == MipStatus::kInfeasible ? kInfinity : sol.bound;
      r.upper_bound = kInfinity;
    } else {
      r.x = first_stage_part(dep, sol.x);
      r.lower_bound = sol.bound;
      r.upper_bound = sol.objective;
      r.objectives = evaluate_at(problem, r.x, spec, threads, MipOptions{});
      r.objectives["dep_objective"] = sol.objective;
    }
  } else if (a.method == "lshaped") {
    LShapedOptions opts;
    opts.iteration_cap = a.lshaped_iteration_cap;
    opts.tolerance = a.tolerance;
    opts.multicut = a.multicut;
    opts.threads = threads;
    opts.master = mip;
    r.config["iteration_cap"] = std::to_string(a.lshaped_iteration_cap);
    r.config["tolerance"] = fmt(a.tolerance);
    r.config["multicut"] = a.multicut ? "true" : "false";
    const double eta = spec.eta.value_or(0.0);
    const LShapedResult res = lshaped_solve(problem, spec.rho, eta, opts);
    capped = res.cap_reached;
    r.x = res.x;
    r.lower_bound = res.lower_bound;
    r.upper_bound = res.upper_bound;
    r.objectives = {{"relaxed_modified_ee", res.upper_bound}};
    std::ostringstream csv;
    write_lshaped_history(csv, res.history);
    write_text(history, csv.str());
  } else {
    RmAsdConfig cfg;
    cfg.rho = spec.rho;
    cfg.epsilon = a.epsilon;
    cfg.xi = a.xi;
    cfg.max_iterations = a.iteration_cap;
    cfg.eta_policy = a.eta_policy == "strict" ? EtaPolicy::kStrict : EtaPolicy::kHeuristic;
    cfg.bound_source = a.bound_source == "dep" ? BoundSource::kExtensiveForm
                                               : BoundSource::kClassicMaster;
    cfg.initial_solver = a.initial == "dep" ? InitialSolver::kExtensiveForm
                                            : InitialSolver::kLShaped;
    cfg.threads = threads;
    cfg.mip = mip;
    cfg.lshaped.threads = threads;
    cfg.lshaped.master = mip;
    r.config["iteration_cap"] = std::to_string(a.iteration_cap);
    r.config["eta_policy"] = a.eta_policy;
    r.config["bound_source"] = a.bound_source;
    r.config["initial"] = a.initial;
    if (a.epsilon) r.config["epsilon"] = fmt(*a.epsilon);
    if (a.xi) r.config["xi"] = fmt(*a.xi);
    const RmAsdResult res = rm_asd_solve(problem, cfg);
    capped = res.cap_reached;
    r.x = res.state.incumbent;
    r.lower_bound = res.state.lower_bound;
    r.upper_bound = res.state.upper_bound;
    r.objectives = evaluate_at(problem, r.x, spec, threads, MipOptions{});
    r.objectives["final_eta"] = res.state.eta;
    std::ostringstream csv;
    write_rm_asd_history(csv, res.state.history, a.record_timing);
    write_text(history, csv.str());
  }
  r.status = infeasible ? "infeasible" : capped ? "cap" : "optimal";
  r.gap_percent = infeasible ? kInfinity : relative_gap_percent(r.lower_bound, r.upper_bound);
  write_text(out, serialize_result(r));

  print_row(file.name, r.lower_bound, r.upper_bound);
  std::cout << "status " << r.status << ", wrote " << out << '\n';
  o.config = r.config;
  o.config["asd_form"] = a.asd_form;
  o.config["threads"] = std::to_string(threads);
  o.config["record_timing"] = a.record_timing ? "true" : "false";
  o.inputs = {a.in};
  o.outputs = {out};
  if (!history.empty()) o.outputs.push_back(history);
  o.exit_status = infeasible ? kInfeasible : capped ? kCapReached : kOk;
  return o;
}

// ---- simulate and compare -------------------------------------------------

struct SimulateArgs {
  std::string in;
  std::string plan;
  std::string out;
  std::string plan_csv;
  std::string policy;
  int reps = 5;
  std::uint64_t seed = 1;
  bool zero_demand = false;
};

MssopInstance load_mssop(const std::string& path) {
  const ProblemFile file = parse_problem(read_file(path));
  if (file.kind != ProblemKind::kMssop) {
    throw ConfigError(path + " is not an mssop instance");
  }
  return *file.mssop;
}

std::string policy_label(const ResultFile& r) {
  const auto risk = r.config.find("risk");
  if (risk == r.config.end() || risk->second == "neutral") return "neutral";
  const auto rho = r.config.find("rho");
  return risk->second + "(" + (rho == r.config.end() ? "?" : rho->second) + ")";
}

Outcome simulate(const SimulateArgs& a) {
  Outcome o;
  const MssopInstance instance = load_mssop(a.in);
  const ResultFile result = parse_result(read_file(a.plan));
  const MssopLayout layout = mssop_layout(instance);
  if (static_cast<int>(result.x.size()) != layout.columns()) {
    throw ConfigError("plan has " + std::to_string(result.x.size()) +
                      " first-stage values, the instance needs " +
                      std::to_string(layout.columns()));
  }
  if (a.reps < 1) throw ConfigError("--reps must be positive");
  const ReplenishmentPlan plan =
      round_plan(instance, plan_from_first_stage(instance, result.x));
  SimulationOptions sim;
  sim.replications = a.reps;
  sim.seed = a.seed;
  sim.zero_demand = a.zero_demand;
  const std::string policy = a.policy.empty() ? policy_label(result) : a.policy;
  const SimulationReport report = simulate_policy(instance, plan, sim, policy);
  const std::string out =
      a.out.empty() ? strip_suffix(a.plan, ".result.json") + ".sim.csv" : a.out;
  std::ostringstream csv;
  write_simulation_csv(csv, {report});
  write_text(out, csv.str());
  o.outputs = {out};
  if (!a.plan_csv.empty()) {
    std::ostringstream p;
    write_plan_csv(p, plan);
    write_text(a.plan_csv, p.str());
    o.outputs.push_back(a.plan_csv);
  }
  std::printf("%-12s lost-sales count %.2f, quantity %.2f, total cost %.2f\n",
              policy.c_str(), report.mean_lost_sales_count,
              report.mean_lost_sales_quantity, report.mean_total_cost);
  o.config = {{"reps", std::to_string(a.reps)},
              {"seed", std::to_string(a.seed)},
              {"zero_demand", a.zero_demand ? "true" : "false"},
              {"policy", policy}};
  o.inputs = {a.in, a.plan};
  return o;
}

struct CompareArgs {
  std::string in;
  std::string out;
  std::vector<double> rhos = {0.5, 0.9};
  int reps = 5;
  std::uint64_t seed = 1;
  int node_cap = 50;
  std::string plans_dir;
};

Outcome compare(const CompareArgs& a) {
  Outcome o;
  const MssopInstance instance = load_mssop(a.in);
  CompareOptions opts;
  opts.simulation.replications = a.reps;
  opts.simulation.seed = a.seed;
  opts.mip.node_cap = a.node_cap;
  const std::vector<PolicyOutcome> outcomes = compare_policies(instance, a.rhos, opts);
  std::vector<SimulationReport> reports;
  std::printf("%-10s %14s %14s %10s %10s %12s\n", "policy", "objective", "bound",
              "ls_count", "ls_qty", "total_cost");
  for (const PolicyOutcome& p : outcomes) {
    reports.push_back(p.simulation);
    std::printf("%-10s %14.2f %14.2f %10.2f %10.2f %12.2f\n", p.label.c_str(),
                p.objective, p.bound, p.simulation.mean_lost_sales_count,
                p.simulation.mean_lost_sales_quantity, p.simulation.mean_total_cost);
    if (!a.plans_dir.empty()) {
      fs::create_directories(a.plans_dir);
      const std::string path = (fs::path(a.plans_dir) / (p.label + ".plan.csv")).string();
      std::ostringstream csv;
      write_plan_csv(csv, p.plan);
      write_text(path, csv.str());
      o.outputs.push_back(path);
    }
  }
  const std::string out =
      a.out.empty() ? strip_suffix(a.in, ".sp2.json") + ".compare.sim.csv" : a.out;
  std::ostringstream csv;
  write_simulation_csv(csv, reports);
  write_text(out, csv.str());
  o.outputs.insert(o.outputs.begin(), out);
  std::string rhos;
  for (double r : a.rhos) rhos += (rhos.empty() ? "" : ",") + fmt(r);
  o.config = {{"rho", rhos},
              {"reps", std::to_string(a.reps)},
              {"seed", std::to_string(a.seed)},
              {"node_cap", std::to_string(a.node_cap)}};
  o.inputs = {a.in};
  return o;
}

// ---- report ---------------------------------------------------------------

struct ReportArgs {
  std::vector<std::string> inputs;
  std::string out;
  std::string plot_dir;
};

const char* kSimulationHeader =
    "policy,replication,lost_sales_count,lost_sales_quantity,holding_cost,"
    "penalty_cost,replenishment_cost,total_cost,demand";

struct MeanRow {
  std::string policy;
  int replications = 0;
  std::vector<std::string> values;  // the seven means as written
};

std::vector<MeanRow> read_means(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line;
  if (!std::getline(in, line) || line != kSimulationHeader) {
    throw ConfigError(path + " is not a simulation table");
  }
  std::vector<MeanRow> rows;
  std::map<std::string, int> counts;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (cells.size() != 9) throw ConfigError(path + ": malformed row '" + line + "'");
    if (cells[1] == "mean") {
      rows.push_back({cells[0], counts[cells[0]],
                      std::vector<std::string>(cells.begin() + 2, cells.end())});
    } else {
      ++counts[cells[0]];
    }
  }
  return rows;
}

// Bar chart of one metric by policy.
std::string svg_bars(const std::string& title, const std::vector<MeanRow>& rows,
                     int column) {
  double top = 0.0;
  for (const MeanRow& r : rows) top = std::max(top, std::stod(r.values[column]));
  if (top <= 0.0) top = 1.0;
  const int width = 80 + 90 * static_cast<int>(rows.size());
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
    << "\" height=\"260\">\n<text x=\"10\" y=\"20\" font-size=\"14\">" << title
    << "</text>\n";
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double v = std::stod(rows[k].values[column]);
    const int h = static_cast<int>(180.0 * v / top);
    const int x = 50 + 90 * static_cast<int>(k);
    s << "<rect x=\"" << x << "\" y=\"" << 220 - h << "\" width=\"60\" height=\"" << h
      << "\" fill=\"#4a6fa5\"/>\n<text x=\"" << x << "\" y=\"240\" font-size=\"11\">"
      << rows[k].policy << "</text>\n<text x=\"" << x << "\" y=\"" << 215 - h
      << "\" font-size=\"10\">" << rows[k].values[column] << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

Outcome report(const ReportArgs& a) {
  Outcome o;
  if (a.inputs.empty()) throw ConfigError("report needs at least one input");
  std::vector<MeanRow> rows;
  for (const std::string& path : a.inputs) {
    const std::vector<MeanRow> part = read_means(path);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  std::ostringstream csv;
  csv << "policy,replications,lost_sales_count,lost_sales_quantity,holding_cost,"
         "penalty_cost,replenishment_cost,total_cost,demand\n";
  for (const MeanRow& r : rows) {
    csv << r.policy << ',' << r.replications;
    for (const std::string& v : r.values) csv << ',' << v;
    csv << '\n';
  }
  const std::string out = a.out.empty() ? "report.csv" : a.out;
  write_text(out, csv.str());
  std::cout << csv.str();
  o.outputs = {out};
  if (!a.plot_dir.empty()) {
    fs::create_directories(a.plot_dir);
    const std::pair<const char*, int> charts[] = {
        {"lost_sales_count", 0}, {"lost_sales_quantity", 1}, {"total_cost", 5}};
    for (const auto& [name, column] : charts) {
      const std::string path = (fs::path(a.plot_dir) / (std::string(name) + ".svg")).string();
      write_text(path, svg_bars(name, rows, column));
      o.outputs.push_back(path);
    }
  }
  o.inputs = a.inputs;
  return o;
}

// ---- audit and export -----------------------------------------------------

struct AuditArgs {
  std::string in;
};

Outcome audit(const AuditArgs& a) {
  Outcome o;
  const ProblemFile file = parse_problem(read_file(a.in));
  const TwoStageProblem problem = file.materialize();
  std::cout << file.name << " (" << kind_name(file.kind) << ")\n";
  print_audit(audit_dimensions(problem));
  int status = kOk;
  for (const std::string& issue : validate(problem)) {
    std::cout << "invalid: " << issue << '\n';
    status = kError;
  }
  if (file.knapsack_spec) {
    const bool same = generate_knapsack(*file.knapsack_spec) == file.problem;
    std::cout << "regenerated from spec: " << (same ? "identical" : "differs") << '\n';
    if (!same) status = kError;
    const DepStats closed = knapsack_dimensions(*file.knapsack_spec);
    if (!(closed == audit_dimensions(problem))) {
      std::cout << "closed-form dimensions differ\n";
      status = kError;
    }
  }
  if (file.mssop_spec) {
    const bool same = generate_mssop_instance(*file.mssop_spec) == *file.mssop;
    std::cout << "regenerated from spec: " << (same ? "identical" : "differs") << '\n';
    if (!same) status = kError;
  }
  o.inputs = {a.in};
  o.exit_status = status;
  return o;
}

struct ExportArgs {
  SolveArgs solve;  // risk, rho, eta, asd_form
  std::string out;
};

Outcome export_mps(const ExportArgs& a) {
  Outcome o;
  const RiskSpec spec = risk_spec(a.solve);
  const ProblemFile file = parse_problem(read_file(a.solve.in));
  AsdDepOptions asd;
  asd.collapse_mean = a.solve.asd_form == "collapsed";
  const DepArtifact dep = build_dep(file.materialize(), spec, asd);
  const std::string out =
      a.out.empty() ? strip_suffix(a.solve.in, ".sp2.json") + ".mps" : a.out;
  std::ostringstream text;
  write_mps(text, dep.mip, file.name);
  write_text(out, text.str());
  std::cout << "wrote " << out << '\n';
  o.config = {{"risk", a.solve.risk}, {"asd_form", a.solve.asd_form}};
  if (a.solve.risk != "neutral") o.config["rho"] = fmt(spec.rho);
  if (spec.eta) o.config["eta"] = fmt(*spec.eta);
  o.inputs = {a.solve.in};
  o.outputs = {out};
  return o;
}

// ---- dispatch -------------------------------------------------------------

int dispatch(const std::vector<std::string>& args, bool write_manifest);

int rerun(const std::string& manifest_path) {
  const RunManifest m = parse_manifest(read_file(manifest_path));
  std::map<std::string, std::optional<std::string>> before;
  for (const std::string& path : m.outputs) {
    before[path] = fs::exists(path) ? std::optional(read_file(path)) : std::nullopt;
  }
  const int status = dispatch(m.arguments, false);
  if (status != m.exit_status) {
    std::cout << "exit status " << status << " differs from recorded "
              << m.exit_status << '\n';
  }
  bool same = status == m.exit_status;
  for (const std::string& path : m.outputs) {
    const bool identical =
        before[path] && fs::exists(path) && read_file(path) == *before[path];
    std::cout << (identical ? "reproduced " : "differs ") << path << '\n';
    same = same && identical;
  }
  return same ? kOk : kError;
}

// Next to the first output, or next to the input for runs without one.
std::string manifest_for(const Outcome& o, const std::string& requested,
                         const std::string& subcommand) {
  if (!requested.empty()) return requested;
  if (!o.outputs.empty()) return sibling(o.outputs.front(), ".manifest.json");
  if (!o.inputs.empty()) {
    return sibling(o.inputs.front(), "." + subcommand + ".manifest.json");
  }
  return "";
}

int dispatch(const std::vector<std::string>& args, bool write_manifest) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"riskshed: two-stage mean-risk stochastic programs"};
  app.require_subcommand(1);
  std::string manifest_path;
  int threads_flag = 0;
  app.add_option("--manifest", manifest_path, "Manifest path (default: next to the first output)");
  app.add_option("--threads", threads_flag, "Worker threads (default: RISKSHED_THREADS, else 1)")
      ->check(CLI::NonNegativeNumber);

  const std::vector<std::string> risks = {"neutral", "ee", "mod-ee", "asd"};

  auto* gen = app.add_subcommand("gen", "Generate a problem file");
  gen->require_subcommand(1);
  GenKnapsackArgs gk;
  auto* gen_k = gen->add_subcommand("knapsack", "Stochastic multidimensional knapsack");
  gen_k->add_option("--n1", gk.spec.n1, "First-stage items")->capture_default_str();
  gen_k->add_option("--n2", gk.spec.n2, "Second-stage items")->capture_default_str();
  gen_k->add_option("--m1", gk.spec.m1, "First-stage rows")->capture_default_str();
  gen_k->add_option("--m2", gk.spec.m2, "Second-stage rows")->capture_default_str();
  gen_k->add_option("--scens", gk.spec.scenarios, "Scenarios")->required();
  gen_k->add_option("--seed", gk.spec.seed)->capture_default_str();
  gen_k->add_option("--letter", gk.spec.letter, "Instance letter")->capture_default_str();
  gen_k->add_option("--out", gk.out, "Output (default <name>.sp2.json)");
  GenMssopArgs gm;
  auto* gen_m = gen->add_subcommand("mssop", "Multi-item single-source ordering");
  gen_m->add_option("--items", gm.spec.items)->capture_default_str();
  gen_m->add_option("--periods", gm.spec.periods)->capture_default_str();
  gen_m->add_option("--scens", gm.spec.scenarios, "Scenarios")->required();
  gen_m->add_option("--lumpy", gm.spec.lumpy_fraction, "Share of lumpy item-periods")
      ->capture_default_str();
  gen_m->add_option("--seed", gm.spec.seed)->capture_default_str();
  gen_m->add_option("--out", gm.out, "Output (default <name>.sp2.json)");

  SolveArgs sa;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a problem file");
  auto add_model_options = [&](CLI::App* cmd, SolveArgs& s) {
    cmd->add_option("--in", s.in, "Problem file")->required();
    cmd->add_option("--risk", s.risk)->check(CLI::IsMember(risks))->capture_default_str();
    cmd->add_option("--rho", s.rho)->check(CLI::Range(0.0, 1.0))->capture_default_str();
    cmd->add_option("--eta", s.eta, "Target for ee and mod-ee");
    cmd->add_option("--asd-form", s.asd_form, "Extensive ASD model")
        ->check(CLI::IsMember({"collapsed", "literal"}))
        ->capture_default_str();
    cmd->add_option("--excess-base", s.excess_base, "What ee compares with eta")
        ->check(CLI::IsMember({"total", "second-stage"}))
        ->capture_default_str();
  };
  add_model_options(solve_cmd, sa);
  solve_cmd->add_option("--method", sa.method)
      ->check(CLI::IsMember({"dep", "lshaped", "rm-asd"}))
      ->capture_default_str();
  solve_cmd->add_option("--out", sa.out, "Result file (default <in>.result.json)");
  solve_cmd->add_option("--history", sa.history, "Iteration history CSV");
  solve_cmd->add_option("--node-cap", sa.node_cap)->check(CLI::PositiveNumber)->capture_default_str();
  solve_cmd->add_option("--iter-cap", sa.iteration_cap, "RM-ASD iterations")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  solve_cmd->add_option("--lshaped-iter-cap", sa.lshaped_iteration_cap)
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  solve_cmd->add_option("--tolerance", sa.tolerance, "L-shaped relative tolerance")
      ->capture_default_str();
  solve_cmd->add_option("--epsilon", sa.epsilon, "RM-ASD gap tolerance (absolute)");
  solve_cmd->add_option("--xi", sa.xi, "RM-ASD target step");
  solve_cmd->add_option("--eta-policy", sa.eta_policy)
      ->check(CLI::IsMember({"strict", "heuristic"}))
      ->capture_default_str();
  solve_cmd->add_option("--bound-source", sa.bound_source)
      ->check(CLI::IsMember({"dep", "lshaped"}))
      ->capture_default_str();
  solve_cmd->add_option("--initial", sa.initial)
      ->check(CLI::IsMember({"dep", "lshaped"}))
      ->capture_default_str();
  solve_cmd->add_flag("--multicut", sa.multicut);
  solve_cmd->add_flag("--record-timing", sa.record_timing, "Wall time in the history");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Simulate an mssop plan");
  sim_cmd->add_option("--in", sim.in, "mssop problem file")->required();
  sim_cmd->add_option("--plan", sim.plan, "Result file holding the plan")->required();
  sim_cmd->add_option("--reps", sim.reps)->capture_default_str();
  sim_cmd->add_option("--seed", sim.seed)->capture_default_str();
  sim_cmd->add_option("--out", sim.out, "Simulation CSV (default <plan>.sim.csv)");
  sim_cmd->add_option("--plan-csv", sim.plan_csv, "Also write the order matrix");
  sim_cmd->add_option("--policy", sim.policy, "Label (default from the result)");
  sim_cmd->add_flag("--zero-demand", sim.zero_demand);

  CompareArgs cmp;
  auto* cmp_cmd = app.add_subcommand("compare", "Solve and simulate neutral and ASD mssop policies");
  cmp_cmd->add_option("--in", cmp.in, "mssop problem file")->required();
  cmp_cmd->add_option("--rho", cmp.rhos, "ASD weights")->delimiter(',')->capture_default_str();
  cmp_cmd->add_option("--reps", cmp.reps)->capture_default_str();
  cmp_cmd->add_option("--seed", cmp.seed)->capture_default_str();
  cmp_cmd->add_option("--node-cap", cmp.node_cap)->check(CLI::PositiveNumber)->capture_default_str();
  cmp_cmd->add_option("--out", cmp.out, "Simulation CSV");
  cmp_cmd->add_option("--plans-dir", cmp.plans_dir, "Write one order matrix per policy");

  ReportArgs rep;
  auto* rep_cmd = app.add_subcommand("report", "Aggregate simulation tables");
  rep_cmd->add_option("--inputs", rep.inputs, "Simulation CSVs")->required();
  rep_cmd->add_option("--out", rep.out, "Aggregated CSV")->capture_default_str();
  rep_cmd->add_option("--plot-dir", rep.plot_dir, "Write SVG bar charts here");

  AuditArgs aud;
  auto* audit_cmd = app.add_subcommand("audit", "Check a problem file");
  audit_cmd->add_option("--in", aud.in)->required();

  ExportArgs ex;
  auto* export_cmd = app.add_subcommand("export-mps", "Write the extensive form as MPS");
  add_model_options(export_cmd, ex.solve);
  export_cmd->add_option("--out", ex.out, "MPS file (default <in>.mps)");

  std::string rerun_manifest;
  auto* rerun_cmd = app.add_subcommand("rerun", "Repeat a run and compare its outputs");
  rerun_cmd->add_option("--manifest", rerun_manifest)->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e);
    return kOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const int threads = resolve_threads(threads_flag);
  Outcome o;
  std::string subcommand;
  try {
    if (*rerun_cmd) return rerun(rerun_manifest);
    if (*gen_k) {
      subcommand = "gen";
      o = gen_knapsack(gk);
    } else if (*gen_m) {
      subcommand = "gen";
      o = gen_mssop(gm);
    } else if (*solve_cmd) {
      subcommand = "solve";
      o = solve(sa, threads);
    } else if (*sim_cmd) {
      subcommand = "simulate";
      o = simulate(sim);
    } else if (*cmp_cmd) {
      subcommand = "compare";
      o = compare(cmp);
    } else if (*rep_cmd) {
      subcommand = "report";
      o = report(rep);
    } else if (*audit_cmd) {
      subcommand = "audit";
      o = audit(aud);
    } else if (*export_cmd) {
      subcommand = "export-mps";
      o = export_mps(ex);
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const InvalidModel& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const VersionMismatch& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }

  const std::string path = manifest_for(o, manifest_path, subcommand);
  if (write_manifest && !path.empty()) {
    RunManifest m;
    m.subcommand = subcommand;
    m.arguments = args;
    m.config = o.config;
    m.inputs = o.inputs;
    m.outputs = o.outputs;
    m.wall_seconds = std::chrono::duration<double>(
                         std::chrono::steady_clock::now() - start)
                         .count();
    m.exit_status = o.exit_status;
    write_file_atomic(path, serialize_manifest(m));
  }
  return o.exit_status;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return dispatch(args, true);
}
