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


#ifndef RISKSHED_IO_H_
#define RISKSHED_IO_H_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "riskshed/knapsack.h"
#include "riskshed/model.h"
#include "riskshed/mssop.h"

namespace riskshed {

// Files carry "format", "version" and a trailing "checksum": the FNV-1a
// 64-bit hash of the compact JSON of every other top-level field. Numbers
// are written in shortest round-trip form; infinities as "inf" / "-inf".
// Readers throw VersionMismatch for any other version and ParseError, with
// the offending field path or line, for everything else.
inline constexpr int kFormatVersion = 1;

enum class ProblemKind : std::uint8_t { kGeneric, kKnapsack, kMssop };

// "generic-sp2", "knapsack", "mssop"
std::string kind_name(ProblemKind kind);

// A problem plus where it came from. Generated kinds keep their generator
// spec next to the materialized data, so files can be regenerated or
// shipped dense.
struct ProblemFile {
  ProblemKind kind = ProblemKind::kGeneric;
  std::string name;
  std::optional<std::uint64_t> seed;
  std::optional<KnapsackGenSpec> knapsack_spec;
  std::optional<MssopGenSpec> mssop_spec;
  TwoStageProblem problem;              // generic and knapsack payload
  std::optional<MssopInstance> mssop;   // mssop payload

  // The two-stage problem, built from the instance for kMssop.
  TwoStageProblem materialize() const;
  bool operator==(const ProblemFile&) const = default;
};

ProblemFile make_problem_file(const KnapsackGenSpec& spec);
ProblemFile make_problem_file(const MssopGenSpec& spec);
ProblemFile make_problem_file(TwoStageProblem problem, std::string name);

std::string serialize_problem(const ProblemFile& file);
ProblemFile parse_problem(std::string_view text);

// Solver output. Wall time is kept out so reruns are byte-identical; it
// lives in the run manifest.
struct ResultFile {
  std::string solver;                         // dep, lshaped, rm-asd, compare
  std::map<std::string, std::string> config;  // every option, resolved
  std::string status;                         // optimal, cap, infeasible
  std::map<std::string, double> objectives;
  double lower_bound = -kInfinity;
  double upper_bound = kInfinity;
  double gap_percent = kInfinity;
  std::vector<double> x;
  std::string history;                        // path of the history CSV
  std::string input_checksum;
  bool operator==(const ResultFile&) const = default;
};

// Both throw (InvalidModel / ParseError) if lower_bound > upper_bound
// beyond 1e-9 relative.
std::string serialize_result(const ResultFile& result);
ResultFile parse_result(std::string_view text);

struct RunManifest {
  std::string subcommand;
  // Arguments after the subcommand, enough to repeat the run.
  std::vector<std::string> arguments;
  std::map<std::string, std::string> config;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  double wall_seconds = 0.0;
  int exit_status = 0;
  bool operator==(const RunManifest&) const = default;
};

std::string serialize_manifest(const RunManifest& manifest);
RunManifest parse_manifest(std::string_view text);

// 16 lowercase hex digits.
std::string fnv1a64_hex(std::string_view bytes);

// Writes to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path,
                       std::string_view content);
// Throws ParseError if the file cannot be opened.
std::string read_file(const std::filesystem::path& path);

// Order quantities as an items x periods matrix: "item,t1,...,tT".
void write_plan_csv(std::ostream& out, const ReplenishmentPlan& plan);

// One row per policy and replication, then one "mean" row per policy.
// The last column is the replication's total demand, equal across
// policies simulated on common random numbers.
void write_simulation_csv(std::ostream& out,
                          const std::vector<SimulationReport>& reports);

}  // namespace riskshed

#endif  // RISKSHED_IO_H_
