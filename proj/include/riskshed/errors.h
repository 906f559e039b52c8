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

#ifndef RISKSHED_ERRORS_H_
#define RISKSHED_ERRORS_H_

#include <stdexcept>
#include <string>

namespace riskshed {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A second-stage problem has no feasible completion for the given first-stage
// point (relatively complete recourse does not hold).
class InfeasibleSecondStage : public Error {
 public:
  using Error::Error;
};

class Unbounded : public Error {
 public:
  using Error::Error;
};

// Simplex pivoting stalled, hit its iteration cap, or lost accuracy.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

class CutGenerationFailure : public Error {
 public:
  using Error::Error;
};

class InvalidModel : public Error {
 public:
  using Error::Error;
};

// Brute-force oracles refuse instances above their enumeration caps.
class ScaleRefused : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace riskshed

#endif  // RISKSHED_ERRORS_H_
