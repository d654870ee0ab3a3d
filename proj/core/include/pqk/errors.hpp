// Copyright 2026 The pqk Authors
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

namespace pqk {

/// Failure categories. The CLI maps each one onto a process exit status.
enum class ErrorCategory {
    Usage,        // caller violated a documented precondition
    Config,       // invalid configuration value
    Ingestion,    // dataset could not be read or is unusable
    Degenerate,   // data or model has no solution (e.g. one class only)
    Convergence,  // iterative solver ran out of budget
    Internal,
};

const char *category_name(ErrorCategory category);

class Error : public std::runtime_error {
   public:
    Error(ErrorCategory category, const std::string &message);

    ErrorCategory category() const noexcept { return category_; }

   private:
    ErrorCategory category_;
};

class UsageError : public Error {
   public:
    explicit UsageError(const std::string &message) : Error(ErrorCategory::Usage, message) {}
};

class ConfigError : public Error {
   public:
    explicit ConfigError(const std::string &message) : Error(ErrorCategory::Config, message) {}
};

class IngestionError : public Error {
   public:
    explicit IngestionError(const std::string &message) : Error(ErrorCategory::Ingestion, message) {}
};

class DegenerateError : public Error {
   public:
    explicit DegenerateError(const std::string &message) : Error(ErrorCategory::Degenerate, message) {}
};

}  // namespace pqk
