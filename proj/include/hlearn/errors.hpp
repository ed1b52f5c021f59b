// Copyright 2026 The hlearn Authors
//
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

#pragma once

#include <stdexcept>
#include <string>

namespace hlearn {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operands live on different qubit counts, or a dense cap was exceeded.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A parameter is outside the documented domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The oracle was asked for an evolution shorter than its minimum time.
class MinimumTimeViolation : public Error {
 public:
  using Error::Error;
};

/// Learner parameters select a branch that cannot run (e.g. integer time 0).
class RegimeError : public Error {
 public:
  using Error::Error;
};

/// Convergence precondition of a series expansion is not met.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// Malformed Hamiltonian text input.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace hlearn
