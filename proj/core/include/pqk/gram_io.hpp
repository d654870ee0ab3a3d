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

// Gram matrix serialization.
//
// CSV: full matrix, row-major, one row per line, values printed with 17
// significant digits. Lines starting with '#' are comments and are skipped
// on read.
//
// Binary: "GRAM", u64 size, then size*size float64 values, all little-endian.

#include <iosfwd>
#include <string>

#include "pqk/kernels.hpp"

namespace pqk {

void write_gram_csv(std::ostream &out, const GramMatrix &gram, const std::string &comment = {});
GramMatrix read_gram_csv(std::istream &in);

void write_gram_binary(std::ostream &out, const GramMatrix &gram);
GramMatrix read_gram_binary(std::istream &in);

}  // namespace pqk
