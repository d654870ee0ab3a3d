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

#include <iosfwd>
#include <string>
#include <vector>

#include "cli/config.hpp"
#include "pqk/errors.hpp"

namespace pqk::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIngestion = 3;
inline constexpr int kExitConvergence = 4;
inline constexpr int kExitInternal = 5;

int exit_status(ErrorCategory category);

/// Executes config.command, writing artifacts under config.output_dir and a
/// short summary to `out`. Errors are reported on `err`; the return value is
/// the process exit status.
int run_command(const RunConfig &config, std::ostream &out, std::ostream &err);

/// Full command line handling: `pqk <command> [--config FILE] [--key.path=value ...]`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

}  // namespace pqk::cli
