// Copyright 2026 The csgbound Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace csg {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller passed arguments outside an operation's precondition
// (unavailable move, state outside the end component, ...).
class UsageError : public Error {
 public:
  using Error::Error;
};

// Input data failed validation. Carries every diagnostic found.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<std::string> diagnostics);

  const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

 private:
  std::vector<std::string> diagnostics_;
};

// Numerical breakdown inside the LP solver or a linear solve.
class SolverError : public Error {
 public:
  using Error::Error;
};

// An algorithmic invariant was violated; indicates a bug or a corrupted model.
class InternalError : public Error {
 public:
  using Error::Error;
};

}  // namespace csg
