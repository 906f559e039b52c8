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
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "riskshed/errors.h"
#include "riskshed/mip.h"

namespace riskshed {
namespace {

std::string fit12(double v) {
  char buf[40];
  for (int digits = 17; digits > 0; --digits) {
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    if (std::string(buf).size() <= 12) return buf;
  }
  return buf;
}

std::string label(char prefix, int index) {
  if (index + 1 > 9999999) throw InvalidModel("too many rows or columns for MPS names");
  char buf[16];
  std::snprintf(buf, sizeof buf, "%c%07d", prefix, index + 1);
  return buf;
}

// Field starts at columns 2, 5, 15, 25, 40, 50 (1-based).
std::string line(const std::string& f1, const std::string& f2,
                 const std::string& f3 = "", const std::string& f4 = "") {
  std::string out = " " + f1;
  out.resize(4, ' ');
  out += f2;
  if (!f3.empty() || !f4.empty()) {
    out.resize(14, ' ');
    out += f3;
  }
  if (!f4.empty()) {
    out.resize(24, ' ');
    out += f4;
  }
  return out;
}

}  // namespace

void write_mps(std::ostream& out, const MixedBinaryProgram& mip,
               const std::string& name) {
  mip.check();
  const LinearProgram& lp = mip.lp;
  const int m = lp.num_rows();
  const int n = lp.num_cols();
  std::vector<bool> binary(n, false);
  for (int j : mip.binaries) binary[j] = true;

  std::vector<std::vector<std::pair<int, double>>> columns(n);
  for (const Triplet& t : lp.matrix.triplets()) {
    columns[t.col].emplace_back(t.row, t.value);
  }

  out << "NAME          " << name << '\n' << "ROWS\n" << " N  COST\n";
  for (int i = 0; i < m; ++i) {
    const char* s = lp.senses[i] == Sense::kLessEqual ? "L"
                    : lp.senses[i] == Sense::kEqual   ? "E"
                                                      : "G";
    out << line(s, label('R', i)) << '\n';
  }
  out << "COLUMNS\n";
  bool in_integer_block = false;
  int marker = 0;
  for (int j = 0; j < n; ++j) {
    if (binary[j] != in_integer_block) {
      char tag[16];
      std::snprintf(tag, sizeof tag, "M%07d", ++marker);
      out << line("", tag, "'MARKER'",
                  binary[j] ? "'INTORG'" : "'INTEND'")
          << '\n';
      in_integer_block = binary[j];
    }
    const std::string col = label('C', j);
    if (lp.objective[j] != 0.0 || columns[j].empty()) {
      out << line("", col, "COST", fit12(lp.objective[j])) << '\n';
    }
    for (const auto& [row, value] : columns[j]) {
      out << line("", col, label('R', row), fit12(value)) << '\n';
    }
  }
  if (in_integer_block) {
    char tag[16];
    std::snprintf(tag, sizeof tag, "M%07d", ++marker);
    out << line("", tag, "'MARKER'", "'INTEND'") << '\n';
  }
  out << "RHS\n";
  for (int i = 0; i < m; ++i) {
    if (lp.rhs[i] != 0.0) out << line("", "RHS", label('R', i), fit12(lp.rhs[i])) << '\n';
  }
  out << "BOUNDS\n";
  for (int j = 0; j < n; ++j) {
    const std::string col = label('C', j);
    const double lo = lp.lower[j];
    const double up = lp.upper[j];
    if (binary[j] && lo == 0.0 && up == 1.0) {
      out << line("BV", "BND", col) << '\n';
    } else if (lo == up) {
      out << line("FX", "BND", col, fit12(lo)) << '\n';
    } else if (std::isinf(lo) && std::isinf(up)) {
      out << line("FR", "BND", col) << '\n';
    } else {
      if (std::isinf(lo)) {
        out << line("MI", "BND", col) << '\n';
      } else if (lo != 0.0) {
        out << line("LO", "BND", col, fit12(lo)) << '\n';
      }
      if (!std::isinf(up)) out << line("UP", "BND", col, fit12(up)) << '\n';
    }
  }
  out << "ENDATA\n";
}

}  // namespace riskshed
