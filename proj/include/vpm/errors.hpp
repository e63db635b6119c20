// Copyright 2026 The vpmetro Authors
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

namespace vpm {

/// Argument outside the mathematical domain of an operation.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Invalid experiment or search configuration. Maps to CLI exit code 2.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A quantity that must be nonzero vanished (e.g. Tr[rho^n] or y_e). Maps to exit code 3.
struct DegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// y_e == 0: the configuration carries no information about omega.
struct NoSignalError : DegeneracyError {
    using DegeneracyError::DegeneracyError;
};

/// Dense oracle asked for more memory than the guard allows.
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Least-squares fit could not be performed.
struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace vpm
