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

// Soft-margin kernel SVM on a precomputed Gram matrix, trained by sequential
// minimal optimization of the dual
//
//   max  sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
//   s.t. 0 <= a_i <= C,  sum_i a_i y_i = 0.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqk/errors.hpp"
#include "pqk/kernels.hpp"

namespace pqk {

struct TrainConfig {
    double C = 1.0;
    double kkt_tolerance = 1e-3;
    /// Consecutive pair updates that fail to move any multiplier before the
    /// solver gives up with a ConvergenceError.
    int max_passes = 10;
    /// 0 selects 10 * N * 100.
    std::size_t max_iterations = 0;
    double alpha_tol = 1e-8;
    /// Optional per-point scale of the box bound: a_i <= C * box_weights[i].
    std::vector<double> box_weights;

    void validate(std::size_t n_points) const;
    std::size_t iteration_budget(std::size_t n_points) const;
};

struct SvmModel {
    std::vector<double> alphas;
    std::vector<int> labels;
    std::vector<std::size_t> support_indices;
    double bias = 0.0;
    double C = 1.0;
    double dual_objective = 0.0;
    std::size_t iterations = 0;
};

class ConvergenceError : public Error {
   public:
    ConvergenceError(const std::string &message, SvmModel best)
        : Error(ErrorCategory::Convergence, message), best_(std::move(best)) {}

    /// The last feasible iterate reached before the budget ran out.
    const SvmModel &best_iterate() const noexcept { return best_; }

   private:
    SvmModel best_;
};

/// Throws DegenerateError for single-class labels, ConvergenceError when the
/// iteration budget is exhausted.
SvmModel train_smo(const GramMatrix &gram, std::span<const int> labels, const TrainConfig &config);

/// sum a_i - 1/2 sum_ij a_i a_j y_i y_j K_ij
double dual_objective(const GramMatrix &gram, std::span<const int> labels, std::span<const double> alphas);

/// b* = mean over free support vectors of y_i - sum_j a_j y_j K_ij. With no
/// free vector, the midpoint of the interval allowed by the bound vectors.
double compute_bias(const GramMatrix &gram, std::span<const int> labels, std::span<const double> alphas,
                    std::span<const double> upper_bounds, double alpha_tol = 1e-8);
double compute_bias(const GramMatrix &gram, std::span<const int> labels, std::span<const double> alphas, double C,
                    double alpha_tol = 1e-8);

/// sum over support vectors of a_i y_i kernel_row[i] + b*, where
/// kernel_row[i] = k(x_i, x) over the training set.
double decision_value(const SvmModel &model, std::span<const double> kernel_row);

/// +1 for values >= 0, -1 otherwise.
int sign_label(double value);
int predict(const SvmModel &model, std::span<const double> kernel_row);

/// {"alphas", "labels", "support_indices", "bias", "C", "dual_objective"}
std::string model_to_json(const SvmModel &model);
SvmModel model_from_json(std::string_view text);

}  // namespace pqk
