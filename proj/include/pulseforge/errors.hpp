// Copyright 2026 The Pulseforge Authors
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

#ifndef PULSEFORGE_ERRORS_HPP
#define PULSEFORGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace pulseforge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : Error {
  using Error::Error;
};

// Hermitian-only routines received a matrix that fails the Hermiticity check.
struct NotHermitianError : Error {
  using Error::Error;
};

// Time argument outside the segment / schedule it was evaluated against.
struct OutOfSegmentError : Error {
  using Error::Error;
};
struct OutOfRangeError : Error {
  using Error::Error;
};

// Pure-state propagation requested while a decay rate is nonzero.
struct DissipationPresentError : Error {
  using Error::Error;
};

// The adaptive step controller cannot satisfy the tolerance.
struct StepSizeUnderflowError : Error {
  using Error::Error;
};

// Genome genes outside their box bounds.
struct OutOfBoundsError : Error {
  using Error::Error;
};

// No Pareto-front member satisfies the selection constraint.
struct EmptyFeasibleSetError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

}  // namespace pulseforge

#endif  // PULSEFORGE_ERRORS_HPP
