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

// Dataset ingestion, scaling, stratified cross-validation, grid search and
// the shot-count sweep.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pqk/kernels.hpp"
#include "pqk/svm.hpp"

namespace pqk {

struct Dataset {
    std::vector<FeatureVector> features;  // N rows of d values
    std::vector<int> labels;              // +1 occupied, -1 non-occupied
    std::vector<std::string> column_names;
    std::size_t dropped_rows = 0;  // rows rejected at load time

    std::size_t size() const noexcept { return labels.size(); }
    std::size_t dimension() const noexcept { return column_names.size(); }
    std::size_t count(int label) const;
    /// Rows `indices`, in that order.
    Dataset subset(std::span<const std::size_t> indices) const;
};

/// Ordered (feature name, CSV header) pairs.
struct ColumnMap {
    std::vector<std::pair<std::string, std::string>> columns;

    /// illuminance, blinds, lamps, rh, co2, temp, each read from a header of
    /// the same name.
    static ColumnMap sensor_defaults();
};

inline constexpr const char *kDefaultLabelColumn = "occupancy";

/// Reads a CSV with a header row. Rows with a missing or non-numeric
/// feature, or an unrecognised label, are dropped and counted. Labels:
/// numeric non-zero / "occupied" / "true" / "yes" -> +1; zero /
/// "non-occupied" / "unoccupied" / "false" / "no" -> -1.
Dataset load_dataset(const std::string &path, const ColumnMap &columns, const std::string &label_column);
Dataset load_dataset(std::istream &in, const ColumnMap &columns, const std::string &label_column);

struct ScalerParams {
    std::vector<std::pair<double, double>> ranges;  // per-column (min, max)
    double lo = 0.0;
    double hi = std::numbers::pi;
};

/// Min-max fit over all rows, or over `rows` only.
ScalerParams fit_scaler(std::span<const FeatureVector> features, double lo = 0.0, double hi = std::numbers::pi);
ScalerParams fit_scaler(std::span<const FeatureVector> features, std::span<const std::size_t> rows, double lo,
                        double hi);
inline ScalerParams fit_scaler(const Dataset &dataset, double lo = 0.0, double hi = std::numbers::pi) {
    return fit_scaler(dataset.features, lo, hi);
}

/// Affine map of each column onto [lo, hi], clamped. Constant columns map to
/// the midpoint.
std::vector<FeatureVector> apply_scaler(const ScalerParams &params, std::span<const FeatureVector> features);

/// Per-class seeded shuffle, then round-robin assignment continuing across
/// classes. Fold sizes differ by at most one.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const int> labels, int k, std::uint64_t seed);

/// Seeded class-proportional subsample of `count` rows, returned in
/// ascending index order.
std::vector<std::size_t> stratified_subsample(std::span<const int> labels, std::size_t count, std::uint64_t seed);

double accuracy(std::span<const int> y_true, std::span<const int> y_pred);

struct HyperParams {
    double C = 1.0;
    double gamma = 1.0;

    bool operator==(const HyperParams &) const = default;
};

enum class ScalingMode { Global, FoldWise };

struct CvOptions {
    int folds = 10;
    std::uint64_t seed = 0;
    ScalingMode scaling = ScalingMode::Global;
    double lo = 0.0;
    double hi = std::numbers::pi;
    int jobs = 1;
    TrainConfig solver{};  // C is taken from the hyperparameters
};

struct CvResult {
    std::vector<double> fold_accuracies;
    double mean = 0.0;
    double ci_half_width = 0.0;  // 1.96 * sample std / sqrt(k)
    HyperParams hyperparams{};
    std::string kernel;
};

struct FoldSummary {
    double mean = 0.0;
    double ci_half_width = 0.0;
};

FoldSummary summarize_folds(std::span<const double> fold_accuracies);

/// Trains on the complement of each fold (rows/columns sliced from `gram`)
/// and scores the held-out rows.
CvResult cross_validate_gram(const GramMatrix &gram, std::span<const int> labels,
                             std::span<const std::vector<std::size_t>> folds, const HyperParams &hp,
                             const TrainConfig &solver, int jobs = 1);

CvResult cross_validate(const Dataset &dataset, const KernelSpec &spec, const HyperParams &hp,
                        const CvOptions &options);

struct GridResult {
    HyperParams best{};
    CvResult best_result;
    std::vector<CvResult> table;  // gamma-major, then C, in grid order
};

std::vector<double> default_c_grid();
/// {0.001, 0.01, 0.1, 1, 10}, plus 1/(projected feature count) for PQK.
std::vector<double> default_gamma_grid(const KernelSpec &spec);

/// Best mean accuracy; ties go to the smaller C, then the smaller gamma.
/// Kernels that ignore gamma are evaluated at the first gamma only.
GridResult grid_search(const Dataset &dataset, const KernelSpec &spec, std::span<const double> c_grid,
                       std::span<const double> gamma_grid, const CvOptions &options);

struct ShotSweepRow {
    std::uint64_t shots = 0;
    CvResult result;
};

/// Cross-validates `spec` (a PQK) with sampled expectations at every shot
/// count, keeping hp fixed. Shot seeds derive from options.seed.
std::vector<ShotSweepRow> shot_sweep(const Dataset &dataset, const KernelSpec &spec, const HyperParams &hp,
                                     std::span<const std::uint64_t> shot_counts, const CvOptions &options);

/// Every kernel / feature map / projection combination of the comparison
/// table, for n_qubits features.
std::vector<KernelSpec> comparison_table_specs(int n_qubits);

}  // namespace pqk
