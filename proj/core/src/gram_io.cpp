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

#include "pqk/gram_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <sstream>

#include "pqk/errors.hpp"

namespace pqk {
namespace {

constexpr std::array<char, 4> kMagic{'G', 'R', 'A', 'M'};

void put_u64_le(std::ostream &out, std::uint64_t value) {
    std::array<char, 8> bytes{};
    for (int b = 0; b < 8; ++b) {
        bytes[static_cast<std::size_t>(b)] = static_cast<char>((value >> (8 * b)) & 0xFFU);
    }
    out.write(bytes.data(), bytes.size());
}

std::uint64_t get_u64_le(std::istream &in) {
    std::array<unsigned char, 8> bytes{};
    in.read(reinterpret_cast<char *>(bytes.data()), bytes.size());
    if (!in) {
        throw IngestionError("truncated binary Gram file");
    }
    std::uint64_t value = 0;
    for (int b = 7; b >= 0; --b) {
        value = (value << 8) | bytes[static_cast<std::size_t>(b)];
    }
    return value;
}

}  // namespace

void write_gram_csv(std::ostream &out, const GramMatrix &gram, const std::string &comment) {
    if (!comment.empty()) {
        out << "# " << comment << '\n';
    }
    char buffer[32];
    for (std::size_t i = 0; i < gram.size(); ++i) {
        for (std::size_t j = 0; j < gram.size(); ++j) {
            std::snprintf(buffer, sizeof buffer, "%.17g", gram(i, j));
            if (j > 0) {
                out << ',';
            }
            out << buffer;
        }
        out << '\n';
    }
}

GramMatrix read_gram_csv(std::istream &in) {
    std::vector<double> entries;
    std::size_t rows = 0;
    std::size_t width = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line.front() == '#') {
            continue;
        }
        std::size_t count = 0;
        std::stringstream fields(line);
        std::string field;
        while (std::getline(fields, field, ',')) {
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
            if (ec != std::errc{} || ptr != field.data() + field.size()) {
                throw IngestionError("malformed Gram CSV value '" + field + "' on row " + std::to_string(rows));
            }
            entries.push_back(value);
            ++count;
        }
        if (rows == 0) {
            width = count;
        } else if (count != width) {
            throw IngestionError("Gram CSV row " + std::to_string(rows) + " has " + std::to_string(count) +
                                 " values, expected " + std::to_string(width));
        }
        ++rows;
    }
    if (rows != width) {
        throw IngestionError("Gram CSV is not square");
    }
    return GramMatrix::from_row_major(rows, std::move(entries));
}

void write_gram_binary(std::ostream &out, const GramMatrix &gram) {
    out.write(kMagic.data(), kMagic.size());
    put_u64_le(out, gram.size());
    for (double v : gram.entries()) {
        put_u64_le(out, std::bit_cast<std::uint64_t>(v));
    }
}

GramMatrix read_gram_binary(std::istream &in) {
    std::array<char, 4> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) {
        throw IngestionError("not a binary Gram file (bad magic)");
    }
    const std::uint64_t size = get_u64_le(in);
    if (size > (std::uint64_t{1} << 16)) {
        throw IngestionError("binary Gram file declares an implausible size " + std::to_string(size));
    }
    std::vector<double> entries(static_cast<std::size_t>(size * size));
    for (double &v : entries) {
        v = std::bit_cast<double>(get_u64_le(in));
    }
    return GramMatrix::from_row_major(static_cast<std::size_t>(size), std::move(entries));
}

}  // namespace pqk
