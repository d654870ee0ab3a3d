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

#include "pqk/errors.hpp"

namespace pqk {

const char *category_name(ErrorCategory category) {
    switch (category) {
        case ErrorCategory::Usage:
            return "usage";
        case ErrorCategory::Config:
            return "config";
        case ErrorCategory::Ingestion:
            return "ingestion";
        case ErrorCategory::Degenerate:
            return "degenerate";
        case ErrorCategory::Convergence:
            return "convergence";
        case ErrorCategory::Internal:
            return "internal";
    }
    return "internal";
}

Error::Error(ErrorCategory category, const std::string &message)
    : std::runtime_error(message), category_(category) {}

}  // namespace pqk
