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

#include "pqk/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>

#include "pqk/errors.hpp"
#include "pqk/parallel.hpp"
#include "pqk/random.hpp"

namespace pqk {
namespace {

std::string trim(std::string_view text) {
    std::size_t begin = 0;
    std::size_t end = text.size();
    while (begin < end && std::isspace(static_cast<unsigned char>(text[begin]))) {
        ++begin;
    }
    while (end > begin && std::isspace(static_cast<unsigned char>(text[end - 1]))) {
        --end;
    }
    return std::string(text.substr(begin, end - begin));
}

std::string lower(std::string text) {
    std::transform(text.begin(), text.end(), text.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return text;
}

// RFC 4180-style split: quoted fields may contain commas and "" escapes.
std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    for (std::size_t k = 0; k < line.size(); ++k) {
        const char ch = line[k];
        if (quoted) {
            if (ch == '"') {
                if (k + 1 < line.size() && line[k + 1] == '"') {
                    current.push_back('"');
                    ++k;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == ',') {
            fields.push_back(trim(current));
            current.clear();
        } else if (ch != '\r') {
            current.push_back(ch);
        }
    }
    fields.push_back(trim(current));
    return fields;
}

std::optional<double> parse_number(const std::string &field) {
    if (field.empty()) {
        return std::nullopt;
    }
    double value = 0.0;
    const char *first = field.data();
    if (*first == '+') {
        ++first;
    }
    const auto [ptr, ec] = std::from_chars(first, field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

std::optional<int> parse_label(const std::string &field) {
    if (auto number = parse_number(field)) {
        return *number != 0.0 ? 1 : -1;
    }
    const std::string key = lower(field);
    if (key == "occupied" || key == "true" || key == "yes") {
        return 1;
    }
    if (key == "non-occupied" || key == "non_occupied" || key == "not occupied" || key == "unoccupied" ||
        key == "false" || key == "no") {
        return -1;
    }
    return std::nullopt;
}

void check_binary_labels(std::span<const int> labels) {
    for (int y : labels) {
        if (y != 1 && y != -1) {
            throw UsageError("labels must be -1 or +1");
        }
    }
}

std::vector<std::size_t> complement(std::size_t n, std::span<const std::size_t> excluded) {
    std::vector<bool> skip(n, false);
    for (std::size_t i : excluded) {
        skip[i] = true;
    }
    std::vector<std::size_t> rest;
    rest.reserve(n - excluded.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (!skip[i]) {
            rest.push_back(i);
        }
    }
    return rest;
}

void shuffle(std::vector<std::size_t> &items, SeededRng &rng) {
    for (std::size_t k = items.size(); k > 1; --k) {
        const std::size_t pick = static_cast<std::size_t>(rng.below(k));
        std::swap(items[k - 1], items[pick]);
    }
}

std::vector<int> gather(std::span<const int> values, std::span<const std::size_t> indices) {
    std::vector<int> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        out.push_back(values[i]);
    }
    return out;
}

double evaluate_fold(const GramMatrix &gram, std::span<const int> labels, std::span<const std::size_t> train,
                     std::span<const std::size_t> test, double C, const TrainConfig &solver, std::size_t fold) {
    try {
        TrainConfig config = solver;
        config.C = C;
        const GramMatrix train_gram = gram.principal_submatrix(train);
        const std::vector<int> train_labels = gather(labels, train);
        const SvmModel model = train_smo(train_gram, train_labels, config);

        std::vector<int> predicted;
        predicted.reserve(test.size());
        for (std::size_t row : test) {
            predicted.push_back(predict(model, gram.row_slice(row, train)));
        }
        return accuracy(gather(labels, test), predicted);
    } catch (const ConvergenceError &e) {
        throw ConvergenceError("fold " + std::to_string(fold) + ": " + e.what(), e.best_iterate());
    } catch (const Error &e) {
        throw Error(e.category(), "fold " + std::to_string(fold) + ": " + e.what());
    }
}

void check_grid(std::span<const double> grid, const char *name) {
    if (grid.empty()) {
        throw ConfigError(std::string(name) + " grid is empty");
    }
    for (double v : grid) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw ConfigError(std::string(name) + " grid values must be positive and finite");
        }
    }
}

// accuracy[g][c][f]
using GridAccuracies = std::vector<std::vector<std::vector<double>>>;

GridAccuracies evaluate_grid(const Dataset &dataset, const KernelSpec &spec, std::span<const double> c_grid,
                             std::span<const double> gamma_grid, const CvOptions &options) {
    if (dataset.size() == 0) {
        throw UsageError("cannot cross-validate an empty dataset");
    }
    if (!(options.lo < options.hi)) {
        throw ConfigError("scaling interval must satisfy lo < hi");
    }
    check_grid(c_grid, "C");
    check_grid(gamma_grid, "gamma");
    spec.validate();

    const auto folds = stratified_folds(dataset.labels, options.folds, options.seed);
    const std::size_t k = folds.size();
    std::vector<std::vector<std::size_t>> train(k);
    for (std::size_t f = 0; f < k; ++f) {
        train[f] = complement(dataset.size(), folds[f]);
    }

    GridAccuracies acc(gamma_grid.size(),
                       std::vector<std::vector<double>>(c_grid.size(), std::vector<double>(k, 0.0)));

    auto run_cells = [&](const GramMatrix &gram, std::size_t g, std::span<const std::size_t> fold_ids) {
        const std::size_t cells = c_grid.size() * fold_ids.size();
        parallel_for(cells, options.jobs, [&](std::size_t cell) {
            const std::size_t c = cell / fold_ids.size();
            const std::size_t f = fold_ids[cell % fold_ids.size()];
            acc[g][c][f] = evaluate_fold(gram, dataset.labels, train[f], folds[f], c_grid[c], options.solver, f);
        });
    };

    if (options.scaling == ScalingMode::Global) {
        const auto scaled = apply_scaler(fit_scaler(dataset.features, options.lo, options.hi), dataset.features);
        const PreparedKernel prepared = PreparedKernel::prepare(scaled, spec, options.jobs);
        std::vector<std::size_t> all_folds(k);
        std::iota(all_folds.begin(), all_folds.end(), 0);
        for (std::size_t g = 0; g < gamma_grid.size(); ++g) {
            run_cells(prepared.gram(gamma_grid[g], options.jobs), g, all_folds);
        }
    } else {
        for (std::size_t f = 0; f < k; ++f) {
            const ScalerParams scaler = fit_scaler(dataset.features, train[f], options.lo, options.hi);
            const auto scaled = apply_scaler(scaler, dataset.features);
            const PreparedKernel prepared = PreparedKernel::prepare(scaled, spec, options.jobs);
            const std::size_t only[] = {f};
            for (std::size_t g = 0; g < gamma_grid.size(); ++g) {
                run_cells(prepared.gram(gamma_grid[g], options.jobs), g, only);
            }
        }
    }
    return acc;
}

CvResult make_result(std::vector<double> fold_accuracies, const HyperParams &hp, std::string kernel) {
    CvResult result;
    const FoldSummary summary = summarize_folds(fold_accuracies);
    result.fold_accuracies = std::move(fold_accuracies);
    result.mean = summary.mean;
    result.ci_half_width = summary.ci_half_width;
    result.hyperparams = hp;
    result.kernel = std::move(kernel);
    return result;
}

}  // namespace

// ---------------------------------------------------------------------------
// Dataset

std::size_t Dataset::count(int label) const {
    return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), label));
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    Dataset out;
    out.column_names = column_names;
    for (std::size_t i : indices) {
        if (i >= size()) {
            throw UsageError("dataset subset index out of range");
        }
        out.features.push_back(features[i]);
        out.labels.push_back(labels[i]);
    }
    return out;
}

ColumnMap ColumnMap::sensor_defaults() {
    ColumnMap map;
    for (const char *name : {"illuminance", "blinds", "lamps", "rh", "co2", "temp"}) {
        map.columns.emplace_back(name, name);
    }
    return map;
}

Dataset load_dataset(std::istream &in, const ColumnMap &columns, const std::string &label_column) {
    if (columns.columns.empty()) {
        throw ConfigError("dataset.columns is empty");
    }
    std::string line;
    if (!std::getline(in, line)) {
        throw IngestionError("dataset is empty (no header row)");
    }
    const auto header = split_csv_line(line);
    auto find_column = [&](const std::string &csv_name, const std::string &feature) {
        for (std::size_t k = 0; k < header.size(); ++k) {
            if (header[k] == csv_name) {
                return k;
            }
        }
        throw IngestionError("dataset has no column \"" + csv_name + "\"" +
                             (csv_name == feature ? std::string() : " (mapped from \"" + feature + "\")"));
    };

    std::vector<std::size_t> feature_cols;
    Dataset dataset;
    for (const auto &[feature, csv_name] : columns.columns) {
        feature_cols.push_back(find_column(csv_name, feature));
        dataset.column_names.push_back(feature);
    }
    const std::size_t label_col = find_column(label_column, label_column);

    while (std::getline(in, line)) {
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_csv_line(line);
        FeatureVector row;
        row.reserve(feature_cols.size());
        bool usable = label_col < fields.size();
        for (std::size_t col : feature_cols) {
            if (!usable) {
                break;
            }
            const auto value = col < fields.size() ? parse_number(fields[col]) : std::nullopt;
            if (!value) {
                usable = false;
            } else {
                row.push_back(*value);
            }
        }
        const auto label = usable ? parse_label(fields[label_col]) : std::nullopt;
        if (!usable || !label) {
            ++dataset.dropped_rows;
            continue;
        }
        dataset.features.push_back(std::move(row));
        dataset.labels.push_back(*label);
    }

    if (dataset.size() == 0) {
        throw IngestionError("dataset has no usable rows (" + std::to_string(dataset.dropped_rows) + " dropped)");
    }
    if (dataset.count(1) == 0 || dataset.count(-1) == 0) {
        throw IngestionError("dataset labels contain a single class");
    }
    return dataset;
}

Dataset load_dataset(const std::string &path, const ColumnMap &columns, const std::string &label_column) {
    std::ifstream in(path);
    if (!in) {
        throw IngestionError("cannot open dataset file '" + path + "'");
    }
    return load_dataset(in, columns, label_column);
}

// ---------------------------------------------------------------------------
// Scaling

ScalerParams fit_scaler(std::span<const FeatureVector> features, std::span<const std::size_t> rows, double lo,
                        double hi) {
    if (!(lo < hi)) {
        throw UsageError("scaler interval must satisfy lo < hi");
    }
    if (rows.empty()) {
        throw UsageError("cannot fit a scaler on zero rows");
    }
    const std::size_t width = features[rows.front()].size();
    ScalerParams params;
    params.lo = lo;
    params.hi = hi;
    params.ranges.resize(width);
    for (std::size_t c = 0; c < width; ++c) {
        params.ranges[c] = {features[rows.front()][c], features[rows.front()][c]};
    }
    for (std::size_t r : rows) {
        if (features[r].size() != width) {
            throw UsageError("scaler rows have inconsistent lengths");
        }
        for (std::size_t c = 0; c < width; ++c) {
            params.ranges[c].first = std::min(params.ranges[c].first, features[r][c]);
            params.ranges[c].second = std::max(params.ranges[c].second, features[r][c]);
        }
    }
    return params;
}

ScalerParams fit_scaler(std::span<const FeatureVector> features, double lo, double hi) {
    std::vector<std::size_t> rows(features.size());
    std::iota(rows.begin(), rows.end(), 0);
    return fit_scaler(features, rows, lo, hi);
}

std::vector<FeatureVector> apply_scaler(const ScalerParams &params, std::span<const FeatureVector> features) {
    const double mid = 0.5 * (params.lo + params.hi);
    std::vector<FeatureVector> out;
    out.reserve(features.size());
    for (const auto &row : features) {
        if (row.size() != params.ranges.size()) {
            throw UsageError("scaler was fitted on " + std::to_string(params.ranges.size()) + " columns, row has " +
                             std::to_string(row.size()));
        }
        FeatureVector scaled(row.size());
        for (std::size_t c = 0; c < row.size(); ++c) {
            const auto [min, max] = params.ranges[c];
            if (max == min) {
                scaled[c] = mid;
                continue;
            }
            const double t = (row[c] - min) / (max - min);
            scaled[c] = std::clamp(params.lo + t * (params.hi - params.lo), params.lo, params.hi);
        }
        out.push_back(std::move(scaled));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Folds and metrics

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, int k, std::uint64_t seed) {
    if (k < 2) {
        throw ConfigError("cv.folds must be >= 2");
    }
    check_binary_labels(labels);
    std::vector<std::vector<std::size_t>> folds(static_cast<std::size_t>(k));
    std::size_t next = 0;
    for (int label : {-1, 1}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == label) {
                members.push_back(i);
            }
        }
        if (members.size() < static_cast<std::size_t>(k)) {
            throw ConfigError("class " + std::to_string(label) + " has " + std::to_string(members.size()) +
                              " members, fewer than the " + std::to_string(k) + " folds requested");
        }
        SeededRng rng(derive_seed(seed, label == 1 ? 1 : 0));
        shuffle(members, rng);
        for (std::size_t i : members) {
            folds[next % folds.size()].push_back(i);
            ++next;
        }
    }
    for (auto &fold : folds) {
        std::sort(fold.begin(), fold.end());
    }
    return folds;
}

std::vector<std::size_t> stratified_subsample(std::span<const int> labels, std::size_t count, std::uint64_t seed) {
    check_binary_labels(labels);
    if (count > labels.size()) {
        throw UsageError("subsample larger than the dataset");
    }
    std::vector<std::size_t> picked;
    std::size_t remaining = count;
    std::size_t pool = labels.size();
    for (int label : {-1, 1}) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (labels[i] == label) {
                members.push_back(i);
            }
        }
        const std::size_t quota =
            label == 1 ? remaining
                       : static_cast<std::size_t>(std::llround(static_cast<double>(count) * members.size() / pool));
        SeededRng rng(derive_seed(seed, label == 1 ? 1 : 0));
        shuffle(members, rng);
        const std::size_t take = std::min(quota, members.size());
        picked.insert(picked.end(), members.begin(), members.begin() + static_cast<std::ptrdiff_t>(take));
        remaining -= take;
    }
    std::sort(picked.begin(), picked.end());
    return picked;
}

double accuracy(std::span<const int> y_true, std::span<const int> y_pred) {
    if (y_true.empty() || y_true.size() != y_pred.size()) {
        throw UsageError("accuracy needs two non-empty sequences of equal length");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        hits += y_true[i] == y_pred[i] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(y_true.size());
}

FoldSummary summarize_folds(std::span<const double> fold_accuracies) {
    const std::size_t k = fold_accuracies.size();
    if (k == 0) {
        throw UsageError("no fold accuracies to summarize");
    }
    FoldSummary summary;
    summary.mean = std::accumulate(fold_accuracies.begin(), fold_accuracies.end(), 0.0) / static_cast<double>(k);
    if (k > 1) {
        // Deviations from the first fold, so equal folds give exactly zero.
        const double shift = fold_accuracies[0];
        double sum = 0.0;
        double squares = 0.0;
        for (double a : fold_accuracies) {
            sum += a - shift;
            squares += (a - shift) * (a - shift);
        }
        const double variance = std::max(0.0, (squares - sum * sum / static_cast<double>(k)) / static_cast<double>(k - 1));
        const double std_dev = std::sqrt(variance);
        summary.ci_half_width = 1.96 * std_dev / std::sqrt(static_cast<double>(k));
    }
    return summary;
}

// ---------------------------------------------------------------------------
// Cross-validation, grid search, shot sweep

CvResult cross_validate_gram(const GramMatrix &gram, std::span<const int> labels,
                             std::span<const std::vector<std::size_t>> folds, const HyperParams &hp,
                             const TrainConfig &solver, int jobs) {
    if (gram.size() != labels.size()) {
        throw UsageError("Gram matrix and labels differ in size");
    }
    std::vector<double> fold_acc(folds.size(), 0.0);
    parallel_for(folds.size(), jobs, [&](std::size_t f) {
        const auto train = complement(labels.size(), folds[f]);
        fold_acc[f] = evaluate_fold(gram, labels, train, folds[f], hp.C, solver, f);
    });
    return make_result(std::move(fold_acc), hp, "precomputed");
}

CvResult cross_validate(const Dataset &dataset, const KernelSpec &spec, const HyperParams &hp,
                        const CvOptions &options) {
    const double c_grid[] = {hp.C};
    const double gamma_grid[] = {hp.gamma};
    KernelSpec effective = spec;
    effective.gamma = hp.gamma;
    auto acc = evaluate_grid(dataset, effective, c_grid, gamma_grid, options);
    return make_result(std::move(acc[0][0]), hp, effective.describe());
}

std::vector<double> default_c_grid() { return {0.1, 1.0, 10.0, 100.0, 1000.0}; }

std::vector<double> default_gamma_grid(const KernelSpec &spec) {
    std::vector<double> grid{0.001, 0.01, 0.1, 1.0, 10.0};
    if (spec.kind == KernelKind::PQK) {
        const ProjectionStrategy strategy(spec.strategy, spec.feature_map.n_qubits);
        const double scale_aware = 1.0 / static_cast<double>(strategy.feature_count());
        if (std::find(grid.begin(), grid.end(), scale_aware) == grid.end()) {
            grid.push_back(scale_aware);
            std::sort(grid.begin(), grid.end());
        }
    }
    return grid;
}

GridResult grid_search(const Dataset &dataset, const KernelSpec &spec, std::span<const double> c_grid,
                       std::span<const double> gamma_grid, const CvOptions &options) {
    check_grid(c_grid, "C");
    check_grid(gamma_grid, "gamma");
    const std::span<const double> gammas = spec.uses_gamma() ? gamma_grid : gamma_grid.first(1);
    const auto acc = evaluate_grid(dataset, spec, c_grid, gammas, options);

    GridResult grid;
    bool have_best = false;
    for (std::size_t g = 0; g < gammas.size(); ++g) {
        KernelSpec cell_spec = spec;
        cell_spec.gamma = gammas[g];
        for (std::size_t c = 0; c < c_grid.size(); ++c) {
            const HyperParams hp{c_grid[c], gammas[g]};
            CvResult result = make_result(acc[g][c], hp, cell_spec.describe());
            const bool better =
                !have_best || result.mean > grid.best_result.mean ||
                (result.mean == grid.best_result.mean &&
                 (hp.C < grid.best.C || (hp.C == grid.best.C && hp.gamma < grid.best.gamma)));
            if (better) {
                grid.best = hp;
                grid.best_result = result;
                have_best = true;
            }
            grid.table.push_back(std::move(result));
        }
    }
    return grid;
}

std::vector<ShotSweepRow> shot_sweep(const Dataset &dataset, const KernelSpec &spec, const HyperParams &hp,
                                     std::span<const std::uint64_t> shot_counts, const CvOptions &options) {
    if (spec.kind != KernelKind::PQK) {
        throw ConfigError("shot sweep requires a PQK kernel");
    }
    if (shot_counts.empty()) {
        throw ConfigError("shots list is empty");
    }
    for (std::size_t k = 0; k < shot_counts.size(); ++k) {
        if (shot_counts[k] == 0 || (k > 0 && shot_counts[k] <= shot_counts[k - 1])) {
            throw ConfigError("shots must be positive and strictly ascending");
        }
    }
    std::vector<ShotSweepRow> rows;
    for (std::uint64_t shots : shot_counts) {
        KernelSpec sampled = spec;
        sampled.shots = ShotSettings{shots, options.seed};
        rows.push_back({shots, cross_validate(dataset, sampled, hp, options)});
    }
    return rows;
}

std::vector<KernelSpec> comparison_table_specs(int n_qubits) {
    std::vector<FeatureMapSpec> maps;
    auto add_map = [&](FeatureMapFamily family, bool ring) {
        FeatureMapSpec fm;
        fm.family = family;
        fm.n_qubits = n_qubits;
        fm.with_cnot_ring = ring;
        maps.push_back(fm);
    };
    add_map(FeatureMapFamily::RotX, false);
    add_map(FeatureMapFamily::ThreeD, true);
    add_map(FeatureMapFamily::ThreeD, false);
    add_map(FeatureMapFamily::ZZ, false);
    add_map(FeatureMapFamily::IQP, false);
    add_map(FeatureMapFamily::Trotterized, false);

    std::vector<KernelSpec> specs;
    for (ProjectionMode mode : {ProjectionMode::M1, ProjectionMode::M2, ProjectionMode::Union}) {
        for (const auto &fm : maps) {
            KernelSpec spec;
            spec.kind = KernelKind::PQK;
            spec.feature_map = fm;
            spec.strategy = mode;
            specs.push_back(spec);
        }
    }
    for (const auto &fm : maps) {
        KernelSpec spec;
        spec.kind = KernelKind::FidelityQK;
        spec.feature_map = fm;
        specs.push_back(spec);
    }
    KernelSpec rbf;
    rbf.kind = KernelKind::RBF;
    specs.push_back(rbf);
    return specs;
}

}  // namespace pqk
