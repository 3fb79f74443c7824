// Copyright 2026 The ocsim Authors
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

#ifndef OCSIM_ERROR_HPP
#define OCSIM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ocsim {

/// Error categories. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
    validation = 1,
    solver_failure = 2,
    sizing = 3,
};

class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {
    }
    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

/// Malformed input: bad shapes, invalid states, unsupported dimensions, index errors.
class ValidationError : public Error {
   public:
    explicit ValidationError(const std::string &what) : Error(ErrorKind::validation, what) {
    }
};

/// A numerical routine failed to reach its tolerances.
class SolverError : public Error {
   public:
    SolverError(const std::string &what, double residual)
        : Error(ErrorKind::solver_failure, what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {
    }
    double residual() const noexcept {
        return residual_;
    }

   private:
    double residual_;
};

/// A problem exceeds a configured size cap.
class SizingError : public Error {
   public:
    explicit SizingError(const std::string &what) : Error(ErrorKind::sizing, what) {
    }
};

}  // namespace ocsim

#endif
