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

#include "cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "pqk/errors.hpp"

namespace pqk::cli {

using ordered_json = nlohmann::ordered_json;

namespace {

enum class FieldType { String, Number, Integer, Bool, NumberList, IntegerList, StringMap };

struct Field {
    FieldType type;
    bool nullable = false;
};

// Every configurable key and the JSON type it accepts.
const std::vector<std::pair<std::string, Field>> &schema() {
    static const std::vector<std::pair<std::string, Field>> fields{
        {"command", {FieldType::String, true}},
        {"dataset.path", {FieldType::String}},
        {"dataset.label_column", {FieldType::String}},
        {"dataset.columns", {FieldType::StringMap}},
        {"kernel.kind", {FieldType::String}},
        {"kernel.gamma", {FieldType::Number}},
        {"kernel.feature_map.family", {FieldType::String}},
        {"kernel.feature_map.n_qubits", {FieldType::Integer, true}},
        {"kernel.feature_map.with_cnot_ring", {FieldType::Bool}},
        {"kernel.feature_map.reps", {FieldType::Integer, true}},
        {"kernel.feature_map.evolution_time", {FieldType::Number}},
        {"kernel.strategy", {FieldType::String}},
        {"kernel.shots", {FieldType::Integer, true}},
        {"svm.C", {FieldType::Number}},
        {"svm.kkt_tolerance", {FieldType::Number}},
        {"svm.max_passes", {FieldType::Integer}},
        {"svm.max_iterations", {FieldType::Integer, true}},
        {"svm.alpha_tol", {FieldType::Number}},
        {"grid.C", {FieldType::NumberList, true}},
        {"grid.gamma", {FieldType::NumberList, true}},
        {"cv.folds", {FieldType::Integer}},
        {"cv.scaling", {FieldType::String}},
        {"cv.interval", {FieldType::NumberList}},
        {"sweep.shots", {FieldType::IntegerList}},
        {"seed", {FieldType::Integer}},
        {"output_dir", {FieldType::String}},
        {"jobs", {FieldType::Integer}},
        {"gram.format", {FieldType::String}},
    };
    return fields;
}

const Field *find_field(const std::string &path) {
    for (const auto &[name, field] : schema()) {
        if (name == path) return &field;
    }
    return nullptr;
}

bool is_group(const std::string &path) {
    const std::string prefix = path + ".";
    return std::any_of(schema().begin(), schema().end(),
                       [&](const auto &entry) { return entry.first.starts_with(prefix); });
}

std::string join(const std::string &prefix, const std::string &key) {
    return prefix.empty() ? key : prefix + "." + key;
}

std::string type_name(FieldType type) {
    switch (type) {
        case FieldType::String: return "a string";
        case FieldType::Number: return "a number";
        case FieldType::Integer: return "an integer";
        case FieldType::Bool: return "a boolean";
        case FieldType::NumberList: return "an array of numbers";
        case FieldType::IntegerList: return "an array of integers";
        case FieldType::StringMap: return "an object of strings";
    }
    return "?";
}

bool matches(const ordered_json &value, FieldType type) {
    switch (type) {
        case FieldType::String: return value.is_string();
        case FieldType::Number: return value.is_number();
        case FieldType::Integer: return value.is_number_integer();
        case FieldType::Bool: return value.is_boolean();
        case FieldType::NumberList:
            return value.is_array() &&
                   std::all_of(value.begin(), value.end(), [](const auto &v) { return v.is_number(); });
        case FieldType::IntegerList:
            return value.is_array() &&
                   std::all_of(value.begin(), value.end(), [](const auto &v) { return v.is_number_integer(); });
        case FieldType::StringMap:
            return value.is_object() &&
                   std::all_of(value.begin(), value.end(), [](const auto &v) { return v.is_string(); });
    }
    return false;
}

[[noreturn]] void unknown_key(const std::string &path) {
    const auto dot = path.rfind('.');
    const std::string leaf = dot == std::string::npos ? path : path.substr(dot + 1);
    std::string best;
    std::size_t best_distance = std::numeric_limits<std::size_t>::max();
    for (const auto &[name, field] : schema()) {
        // Candidate names: every component of every known path.
        std::size_t start = 0;
        std::string so_far;
        while (start <= name.size()) {
            const auto end = std::min(name.find('.', start), name.size());
            const std::string part = name.substr(start, end - start);
            so_far = join(so_far, part);
            const std::size_t d = edit_distance(leaf, part);
            if (d < best_distance) {
                best_distance = d;
                best = so_far;
            }
            start = end + 1;
        }
    }
    std::string message = "unknown configuration key \"" + path + "\"";
    if (best_distance <= std::max<std::size_t>(2, leaf.size() / 3)) {
        const auto best_dot = best.rfind('.');
        const std::string best_leaf = best_dot == std::string::npos ? best : best.substr(best_dot + 1);
        message += "; did you mean \"" + best_leaf + "\" (" + best + ")?";
    }
    throw ConfigError(message);
}

void check_value(const std::string &path, const ordered_json &value) {
    const Field *field = find_field(path);
    if (field == nullptr) unknown_key(path);
    if (value.is_null() && field->nullable) return;
    if (!matches(value, field->type)) {
        throw ConfigError("configuration key \"" + path + "\" must be " + type_name(field->type) +
                          (field->nullable ? " or null" : "") + ", got " + value.dump());
    }
}

ordered_json *locate(ordered_json &root, const std::string &path) {
    ordered_json *node = &root;
    std::size_t start = 0;
    while (true) {
        const auto end = path.find('.', start);
        const std::string key = path.substr(start, end == std::string::npos ? std::string::npos : end - start);
        node = &(*node)[key];
        if (end == std::string::npos) return node;
        start = end + 1;
    }
}

// Copies every key of `source` into `target`, validating as it goes.
void merge(ordered_json &target, const ordered_json &source, const std::string &prefix) {
    for (auto it = source.begin(); it != source.end(); ++it) {
        const std::string path = join(prefix, it.key());
        if (find_field(path) == nullptr && is_group(path)) {
            if (!it.value().is_object()) {
                throw ConfigError("configuration key \"" + path + "\" must be an object, got " + it.value().dump());
            }
            merge(target, it.value(), path);
            continue;
        }
        check_value(path, it.value());
        *locate(target, path) = it.value();
    }
}

ordered_json parse_flag_value(const std::string &path, const std::string &text) {
    const Field *field = find_field(path);
    if (field == nullptr) {
        if (is_group(path)) throw ConfigError("configuration key \"" + path + "\" is a group, not a value");
        unknown_key(path);
    }
    if (field->type == FieldType::String && text != "null") return text;
    try {
        return ordered_json::parse(text);
    } catch (const nlohmann::json::exception &) {
        throw ConfigError("configuration key \"" + path + "\" must be " + type_name(field->type) + ", got \"" +
                          text + "\"");
    }
}

template <typename T>
T get(const ordered_json &doc, const std::string &path) {
    const ordered_json *node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto end = path.find('.', start);
        node = &node->at(path.substr(start, end == std::string::npos ? std::string::npos : end - start));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return node->get<T>();
}

bool is_null(const ordered_json &doc, const std::string &path) {
    const ordered_json *node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto end = path.find('.', start);
        node = &node->at(path.substr(start, end == std::string::npos ? std::string::npos : end - start));
        if (end == std::string::npos) return node->is_null();
        start = end + 1;
    }
}

[[noreturn]] void invalid(const std::string &path, const std::string &why) {
    throw ConfigError("configuration key \"" + path + "\" " + why);
}

// Rewrites a library ConfigError so the message names the config key.
template <typename F>
auto with_path(const std::string &path, F &&f) {
    try {
        return f();
    } catch (const Error &e) {
        invalid(path, std::string("is invalid: ") + e.what());
    }
}

RunConfig resolve(ordered_json doc) {
    RunConfig config;
    config.command = get<std::string>(doc, "command");
    if (std::find(kCommands.begin(), kCommands.end(), config.command) == kCommands.end()) {
        invalid("command", "names an unknown command \"" + config.command + "\"");
    }

    config.dataset.path = get<std::string>(doc, "dataset.path");
    config.dataset.label_column = get<std::string>(doc, "dataset.label_column");
    if (config.dataset.label_column.empty()) invalid("dataset.label_column", "must not be empty");
    for (const auto &[name, header] : doc["dataset"]["columns"].items()) {
        config.dataset.columns.columns.emplace_back(name, header.get<std::string>());
    }
    if (config.dataset.columns.columns.empty()) invalid("dataset.columns", "must name at least one column");
    if (config.command != "validate" && config.dataset.path.empty()) {
        invalid("dataset.path", "is required by \"" + config.command + "\"");
    }

    KernelSpec &k = config.kernel;
    k.kind = with_path("kernel.kind", [&] { return parse_kernel(get<std::string>(doc, "kernel.kind")); });
    k.gamma = get<double>(doc, "kernel.gamma");
    k.feature_map.family = with_path("kernel.feature_map.family",
                                     [&] { return parse_family(get<std::string>(doc, "kernel.feature_map.family")); });
    config.n_qubits_from_dataset = is_null(doc, "kernel.feature_map.n_qubits");
    k.feature_map.n_qubits = config.n_qubits_from_dataset
                                 ? static_cast<int>(config.dataset.columns.columns.size())
                                 : get<int>(doc, "kernel.feature_map.n_qubits");
    if (!config.n_qubits_from_dataset &&
        static_cast<std::size_t>(k.feature_map.n_qubits) != config.dataset.columns.columns.size()) {
        invalid("kernel.feature_map.n_qubits", "must equal the number of dataset columns (" +
                                                   std::to_string(config.dataset.columns.columns.size()) + ")");
    }
    k.feature_map.with_cnot_ring = get<bool>(doc, "kernel.feature_map.with_cnot_ring");
    k.feature_map.reps = is_null(doc, "kernel.feature_map.reps") ? 0 : get<int>(doc, "kernel.feature_map.reps");
    if (!is_null(doc, "kernel.feature_map.reps") && k.feature_map.reps < 1) {
        invalid("kernel.feature_map.reps", "must be at least 1");
    }
    k.feature_map.evolution_time = get<double>(doc, "kernel.feature_map.evolution_time");
    k.strategy = with_path("kernel.strategy", [&] { return parse_projection(get<std::string>(doc, "kernel.strategy")); });
    if (!is_null(doc, "kernel.shots")) {
        const auto shots = get<std::int64_t>(doc, "kernel.shots");
        if (shots < 1) invalid("kernel.shots", "must be at least 1");
        k.shots = ShotSettings{static_cast<std::uint64_t>(shots), 0};
    }
    with_path("kernel", [&] {
        k.validate();
        return 0;
    });

    TrainConfig &svm = config.svm;
    svm.C = get<double>(doc, "svm.C");
    svm.kkt_tolerance = get<double>(doc, "svm.kkt_tolerance");
    svm.max_passes = get<int>(doc, "svm.max_passes");
    if (!is_null(doc, "svm.max_iterations")) {
        const auto iters = get<std::int64_t>(doc, "svm.max_iterations");
        if (iters < 1) invalid("svm.max_iterations", "must be at least 1");
        svm.max_iterations = static_cast<std::size_t>(iters);
    }
    svm.alpha_tol = get<double>(doc, "svm.alpha_tol");
    if (!(svm.C > 0.0) || !std::isfinite(svm.C)) invalid("svm.C", "must be positive and finite");
    if (!(svm.kkt_tolerance > 0.0)) invalid("svm.kkt_tolerance", "must be positive");
    if (svm.max_passes < 1) invalid("svm.max_passes", "must be at least 1");
    if (!(svm.alpha_tol >= 0.0)) invalid("svm.alpha_tol", "must be non-negative");

    for (const char *path : {"grid.C", "grid.gamma"}) {
        if (is_null(doc, path)) continue;
        auto values = get<std::vector<double>>(doc, path);
        if (values.empty()) invalid(path, "must not be empty");
        for (double v : values) {
            if (!(v > 0.0) || !std::isfinite(v)) invalid(path, "entries must be positive and finite");
        }
        (std::string(path) == "grid.C" ? config.c_grid : config.gamma_grid) = std::move(values);
    }

    config.cv.folds = get<int>(doc, "cv.folds");
    if (config.cv.folds < 2) invalid("cv.folds", "must be at least 2");
    const auto scaling = get<std::string>(doc, "cv.scaling");
    if (scaling == "global") {
        config.cv.scaling = ScalingMode::Global;
    } else if (scaling == "fold") {
        config.cv.scaling = ScalingMode::FoldWise;
    } else {
        invalid("cv.scaling", "must be \"global\" or \"fold\", got \"" + scaling + "\"");
    }
    const auto interval = get<std::vector<double>>(doc, "cv.interval");
    if (interval.size() != 2 || !(interval[0] < interval[1]) || !std::isfinite(interval[0]) ||
        !std::isfinite(interval[1])) {
        invalid("cv.interval", "must be [lo, hi] with lo < hi");
    }
    config.cv.lo = interval[0];
    config.cv.hi = interval[1];

    for (auto shots : get<std::vector<std::int64_t>>(doc, "sweep.shots")) {
        if (shots < 1) invalid("sweep.shots", "entries must be at least 1");
        config.sweep_shots.push_back(static_cast<std::uint64_t>(shots));
    }
    if (config.command == "shot-sweep" && config.sweep_shots.empty()) invalid("sweep.shots", "must not be empty");

    const auto seed = get<std::int64_t>(doc, "seed");
    if (seed < 0) invalid("seed", "must be non-negative");
    config.seed = static_cast<std::uint64_t>(seed);
    config.cv.seed = config.seed;
    if (config.kernel.shots) config.kernel.shots->seed = config.seed;

    config.output_dir = get<std::string>(doc, "output_dir");
    if (config.output_dir.empty()) invalid("output_dir", "must not be empty");
    config.jobs = get<int>(doc, "jobs");
    if (config.jobs < 1) invalid("jobs", "must be at least 1");
    config.cv.jobs = config.jobs;
    config.cv.solver = config.svm;
    config.gram_format = get<std::string>(doc, "gram.format");
    if (config.gram_format != "csv" && config.gram_format != "binary") {
        invalid("gram.format", "must be \"csv\" or \"binary\", got \"" + config.gram_format + "\"");
    }

    // The echo records the effective n_qubits so it reads as a complete run
    // description. jobs and output_dir do not change results and are left
    // out of the hash.
    doc["kernel"]["feature_map"]["n_qubits"] = k.feature_map.n_qubits;
    ordered_json hashed = doc;
    hashed.erase("jobs");
    hashed.erase("output_dir");
    config.config_hash = fnv1a_hex(hashed.dump());
    config.resolved = std::move(doc);
    return config;
}

}  // namespace

ordered_json default_config() {
    ordered_json columns = ordered_json::object();
    for (const auto &[name, header] : ColumnMap::sensor_defaults().columns) columns[name] = header;
    return ordered_json{
        {"command", nullptr},
        {"dataset", {{"path", ""}, {"label_column", kDefaultLabelColumn}, {"columns", columns}}},
        {"kernel",
         {{"kind", "PQK"},
          {"gamma", 0.1},
          {"feature_map",
           {{"family", "ThreeD"},
            {"n_qubits", nullptr},
            {"with_cnot_ring", true},
            {"reps", nullptr},
            {"evolution_time", std::numbers::pi / 2}}},
          {"strategy", "M2"},
          {"shots", nullptr}}},
        {"svm",
         {{"C", 1.0}, {"kkt_tolerance", 1e-3}, {"max_passes", 10}, {"max_iterations", nullptr}, {"alpha_tol", 1e-8}}},
        {"grid", {{"C", nullptr}, {"gamma", nullptr}}},
        {"cv", {{"folds", 10}, {"scaling", "global"}, {"interval", {0.0, std::numbers::pi}}}},
        {"sweep", {{"shots", {16, 32, 64, 128, 256, 512, 1024, 1500, 2048, 4096, 8192}}}},
        {"seed", 42},
        {"output_dir", "pqk-out"},
        {"jobs", 1},
        {"gram", {{"format", "csv"}}},
    };
}

RunConfig parse_config(const std::string &command, const std::string &file_text,
                       const std::vector<std::string> &overrides) {
    ordered_json doc = default_config();
    if (!file_text.empty()) {
        ordered_json file;
        try {
            file = ordered_json::parse(file_text);
        } catch (const nlohmann::json::parse_error &e) {
            throw ConfigError(std::string("configuration file is not valid JSON: ") + e.what());
        }
        if (!file.is_object()) throw ConfigError("configuration file must hold a JSON object");
        merge(doc, file, "");
    }
    for (const auto &flag : overrides) {
        std::string body = flag;
        if (body.starts_with("--")) body.erase(0, 2);
        const auto eq = body.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw ConfigError("malformed override \"" + flag + "\"; expected --key.path=value");
        }
        const std::string path = body.substr(0, eq);
        const ordered_json value = parse_flag_value(path, body.substr(eq + 1));
        check_value(path, value);
        *locate(doc, path) = value;
    }
    if (!command.empty()) doc["command"] = command;
    if (doc["command"].is_null()) throw ConfigError("configuration key \"command\" is required");
    return resolve(std::move(doc));
}

RunConfig load_config(const std::string &command, const std::string &path,
                      const std::vector<std::string> &overrides) {
    std::string text;
    if (!path.empty()) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("cannot read configuration file \"" + path + "\"");
        std::ostringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
        if (text.empty()) throw ConfigError("configuration file \"" + path + "\" is empty");
    }
    return parse_config(command, text, overrides);
}

std::size_t edit_distance(const std::string &a, const std::string &b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t above = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diagonal = above;
        }
    }
    return row[b.size()];
}

std::string fnv1a_hex(const std::string &text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buffer[17];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

}  // namespace pqk::cli
