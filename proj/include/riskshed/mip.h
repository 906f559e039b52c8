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

#ifndef RISKSHED_MIP_H_
#define RISKSHED_MIP_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "riskshed/lp.h"

namespace riskshed {

// A linear program with some columns restricted to {0, 1}.
struct MixedBinaryProgram {
  LinearProgram lp;
  std::vector<int> binaries;

  // Throws InvalidModel if a binary index is out of range or its bounds are
  // not inside [0, 1].
  void check() const;
};

enum class MipStatus : std::uint8_t {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kNodeCapReached,
};

struct MipOptions {
  double relative_gap = 1e-10;
  double absolute_gap = 1e-9;
  int node_cap = 100000;
  // A binary within this distance of 0 or 1 counts as integral.
  double integrality_tolerance = 1e-7;
  // Rounding dive from the root LP to find an early incumbent.
  bool root_dive = true;
  // RINS: every `rins_interval` nodes (0 = never, the root counts as node 1)
  // binaries on which the node LP agrees with the incumbent are fixed and
  // the rest is searched as a sub-problem with `rins_node_cap` nodes.
  int rins_interval = 0;
  int rins_node_cap = 200;
  // Optional starting point; used as the first incumbent if feasible.
  std::optional<std::vector<double>> start;
  SimplexOptions simplex;
};

struct MipSolution {
  MipStatus status = MipStatus::kInfeasible;
  std::vector<double> x;
  double objective = kInfinity;
  double bound = -kInfinity;
  int nodes = 0;
  bool has_incumbent() const { return !x.empty(); }
};

// Best-bound branch-and-bound with plunging, pseudocost branching (ties to
// the lowest index) and reduced-cost fixing. Deterministic for identical
// inputs.
MipSolution solve_mip(const MixedBinaryProgram& mip,
                      const MipOptions& options = {});

// Fixed-field MPS, minimization. Rows are R0000001.., columns C0000001..,
// the objective row is COST. Binaries sit between INTORG/INTEND markers
// with BV bounds. Values are printed with as many digits as fit the
// 12-character field, so coefficients needing more are rounded.
void write_mps(std::ostream& out, const MixedBinaryProgram& mip,
               const std::string& name);

// 100 * (ub - lb) / |lb|; zero when the bounds agree.
double relative_gap_percent(double lb, double ub);

}  // namespace riskshed

#endif  // RISKSHED_MIP_H_
