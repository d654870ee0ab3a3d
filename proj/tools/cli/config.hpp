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

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "pqk/kernels.hpp"
#include "pqk/pipeline.hpp"
#include "pqk/svm.hpp"

namespace pqk::cli {

inline const std::vector<std::string> kCommands{"encode", "gram",     "cv",      "grid-search",
                                                "shot-sweep", "table2", "validate"};

struct DatasetConfig {
    std::string path;
    std::string label_column;
    ColumnMap columns;
};

/// Fully resolved and validated run configuration.
struct RunConfig {
    std::string command;
    DatasetConfig dataset;
    KernelSpec kernel;
    TrainConfig svm;
    std::vector<double> c_grid;      // empty: default grid
    std::vector<double> gamma_grid;  // empty: default grid for the kernel
    CvOptions cv;
    std::vector<std::uint64_t> sweep_shots;
    std::uint64_t seed = 0;
    std::string output_dir;
    int jobs = 1;
    std::string gram_format;  // "csv" or "binary"
    bool n_qubits_from_dataset = true;

    /// The resolved configuration as JSON (key order fixed by the schema).
    nlohmann::ordered_json resolved;
    /// Hex FNV-1a 64 of resolved.dump().
    std::string config_hash;
};

/// Documented defaults for every key.
nlohmann::ordered_json default_config();

/// Merges `file_text` (may be empty) and `overrides` (each "a.b.c=value")
/// over the defaults, then validates. `command` wins over a "command" key
/// in the file. Throws ConfigError naming the offending key.
RunConfig parse_config(const std::string &command, const std::string &file_text,
                       const std::vector<std::string> &overrides);

/// Reads the file at `path` (empty path: no file) and calls parse_config.
RunConfig load_config(const std::string &command, const std::string &path,
                      const std::vector<std::string> &overrides);

std::size_t edit_distance(const std::string &a, const std::string &b);

std::string fnv1a_hex(const std::string &text);

}  // namespace pqk::cli
