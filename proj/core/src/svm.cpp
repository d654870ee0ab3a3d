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

#include "pqk/svm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>

#include "json.hpp"

namespace pqk {
namespace {

constexpr double kMinCurvature = 1e-12;

void check_labels(std::span<const int> labels) {
    bool has_pos = false;
    bool has_neg = false;
    for (int y : labels) {
        if (y == 1) {
            has_pos = true;
        } else if (y == -1) {
            has_neg = true;
        } else {
            throw UsageError("labels must be -1 or +1, got " + std::to_string(y));
        }
    }
    if (!has_pos || !has_neg) {
        throw DegenerateError("training labels contain a single class");
    }
}

std::vector<double> upper_bounds(const TrainConfig &config, std::size_t n) {
    std::vector<double> upper(n, config.C);
    if (!config.box_weights.empty()) {
        for (std::size_t i = 0; i < n; ++i) {
            upper[i] = config.C * config.box_weights[i];
        }
    }
    return upper;
}

SvmModel assemble(const GramMatrix &gram, std::span<const int> labels, std::vector<double> alphas,
                  std::span<const double> upper, const TrainConfig &config, std::size_t iterations) {
    SvmModel model;
    model.labels.assign(labels.begin(), labels.end());
    model.C = config.C;
    model.iterations = iterations;
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] > config.alpha_tol) {
            model.support_indices.push_back(i);
        }
    }
    model.dual_objective = dual_objective(gram, labels, alphas);
    model.bias = compute_bias(gram, labels, alphas, upper, config.alpha_tol);
    model.alphas = std::move(alphas);
    return model;
}

}  // namespace

void TrainConfig::validate(std::size_t n_points) const {
    if (!(C > 0.0) || !std::isfinite(C)) {
        throw ConfigError("svm.C must be a positive finite number");
    }
    if (!(kkt_tolerance > 0.0)) {
        throw ConfigError("svm.kkt_tolerance must be positive");
    }
    if (max_passes < 1) {
        throw ConfigError("svm.max_passes must be >= 1");
    }
    if (!(alpha_tol > 0.0)) {
        throw ConfigError("svm.alpha_tol must be positive");
    }
    if (!box_weights.empty()) {
        if (box_weights.size() != n_points) {
            throw UsageError("box_weights needs one entry per training point");
        }
        for (double w : box_weights) {
            if (!(w > 0.0) || !std::isfinite(w)) {
                throw UsageError("box_weights entries must be positive");
            }
        }
    }
}

std::size_t TrainConfig::iteration_budget(std::size_t n_points) const {
    return max_iterations > 0 ? max_iterations : 10 * n_points * 100;
}

double dual_objective(const GramMatrix &gram, std::span<const int> labels, std::span<const double> alphas) {
    const std::size_t n = alphas.size();
    double linear = 0.0;
    double quadratic = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (alphas[i] == 0.0) {
            continue;
        }
        linear += alphas[i];
        double inner = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            inner += alphas[j] * labels[j] * gram(i, j);
        }
        quadratic += alphas[i] * labels[i] * inner;
    }
    return linear - 0.5 * quadratic;
}

double compute_bias(const GramMatrix &gram, std::span<const int> labels, std::span<const double> alphas,
                    std::span<const double> upper, double alpha_tol) {
    const std::size_t n = alphas.size();
    if (labels.size() != n || upper.size() != n || gram.size() != n) {
        throw UsageError("compute_bias: size mismatch");
    }
    bool any_support = false;
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double higher = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < n; ++i) {
        double g = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (alphas[j] != 0.0) {
                g += alphas[j] * labels[j] * gram(i, j);
            }
        }
        const double candidate = labels[i] - g;  // b making y_i f(x_i) = 1
        const bool at_zero = alphas[i] <= alpha_tol;
        const bool at_upper = alphas[i] >= upper[i] - alpha_tol;
        any_support = any_support || !at_zero;
        if (!at_zero && !at_upper) {
            free_sum += candidate;
            ++free_count;
        } else if ((labels[i] == 1) == at_zero) {
            // y=+1 at 0 or y=-1 at C: y_i f(x_i) >= 1 bounds b from below.
            lower = std::max(lower, candidate);
        } else {
            higher = std::min(higher, candidate);
        }
    }
    if (!any_support) {
        throw DegenerateError("model has no support vectors");
    }
    if (free_count > 0) {
        return free_sum / static_cast<double>(free_count);
    }
    if (std::isfinite(lower) && std::isfinite(higher)) {
        return 0.5 * (lower + higher);
    }
    return std::isfinite(lower) ? lower : higher;
}

double compute_bias(const GramMatrix &gram, std::span<const int> labels, std::span<const double> alphas, double C,
                    double alpha_tol) {
    const std::vector<double> upper(alphas.size(), C);
    return compute_bias(gram, labels, alphas, upper, alpha_tol);
}

SvmModel train_smo(const GramMatrix &gram, std::span<const int> labels, const TrainConfig &config) {
    const std::size_t n = labels.size();
    if (gram.size() != n) {
        throw UsageError("Gram matrix size " + std::to_string(gram.size()) + " does not match " +
                         std::to_string(n) + " labels");
    }
    if (n < 2) {
        throw UsageError("train_smo needs at least 2 points");
    }
    check_labels(labels);
    config.validate(n);

    const std::vector<double> upper = upper_bounds(config, n);
    std::vector<double> alpha(n, 0.0);
    // error[k] = sum_j a_j y_j K_kj - y_k  (decision value without bias, minus label)
    std::vector<double> error(n);
    for (std::size_t k = 0; k < n; ++k) {
        error[k] = -labels[k];
    }

    std::vector<double> diagonal(n);
    for (std::size_t k = 0; k < n; ++k) {
        diagonal[k] = gram(k, k);
    }

    const std::size_t budget = config.iteration_budget(n);
    std::size_t iteration = 0;
    int stalled = 0;
#ifndef NDEBUG
    double previous_objective = 0.0;
#endif

    while (true) {
        // i: the maximal violator among indices whose y*a may increase.
        // j: among indices whose y*a may decrease with E_j > E_i, the one
        // whose pair step gains the most, (E_j - E_i)^2 / curvature. The
        // stopping gap is the first-order one, max E over those minus E_i.
        std::size_t i = n;
        for (std::size_t k = 0; k < n; ++k) {
            const bool can_raise = labels[k] == 1 ? alpha[k] < upper[k] : alpha[k] > 0.0;
            if (can_raise && (i == n || error[k] < error[i])) {
                i = k;
            }
        }
        std::size_t j = n;
        double max_error = -std::numeric_limits<double>::infinity();
        if (i != n) {
            const auto row_i = gram.row(i);
            double best_gain = -1.0;
            for (std::size_t k = 0; k < n; ++k) {
                const bool can_lower = labels[k] == 1 ? alpha[k] > 0.0 : alpha[k] < upper[k];
                if (!can_lower) {
                    continue;
                }
                max_error = std::max(max_error, error[k]);
                const double diff = error[k] - error[i];
                if (diff <= 0.0) {
                    continue;
                }
                const double curvature = std::max(diagonal[i] + diagonal[k] - 2.0 * row_i[k], kMinCurvature);
                const double gain = diff * diff / curvature;
                if (gain > best_gain) {
                    best_gain = gain;
                    j = k;
                }
            }
        }
        if (i == n || j == n || max_error - error[i] <= config.kkt_tolerance) {
            break;
        }
        if (iteration >= budget) {
            SvmModel best = assemble(gram, labels, alpha, upper, config, iteration);
            throw ConvergenceError("SMO exhausted its budget of " + std::to_string(budget) +
                                       " iterations (KKT gap " + std::to_string(max_error - error[i]) + ")",
                                   std::move(best));
        }
        ++iteration;

        // Step t along the feasible direction: y_i a_i rises by t, y_j a_j
        // falls by t. The unclipped optimum is (E_j - E_i) / curvature; each
        // multiplier limits t by its own distance to the bound it moves
        // towards, and lands exactly on that bound when it is the limit.
        const double yi = labels[i];
        const double yj = labels[j];
        const double room_i = yi > 0 ? upper[i] - alpha[i] : alpha[i];
        const double room_j = yj > 0 ? alpha[j] : upper[j] - alpha[j];
        const double curvature = std::max(diagonal[i] + diagonal[j] - 2.0 * gram(i, j), kMinCurvature);
        const double t = std::min({(error[j] - error[i]) / curvature, room_i, room_j});
        const double ai = t == room_i ? (yi > 0 ? upper[i] : 0.0) : alpha[i] + yi * t;
        const double aj = t == room_j ? (yj > 0 ? 0.0 : upper[j]) : alpha[j] - yj * t;
        const double delta_i = ai - alpha[i];
        const double delta_j = aj - alpha[j];

        if (delta_i == 0.0 && delta_j == 0.0) {
            if (++stalled >= config.max_passes) {
                SvmModel best = assemble(gram, labels, alpha, upper, config, iteration);
                throw ConvergenceError("SMO stalled: " + std::to_string(stalled) +
                                           " consecutive pair updates made no progress",
                                       std::move(best));
            }
            continue;
        }
        stalled = 0;
        alpha[i] = ai;
        alpha[j] = aj;
        const auto row_i = gram.row(i);
        const auto row_j = gram.row(j);
        const double wi = delta_i * yi;
        const double wj = delta_j * yj;
        for (std::size_t k = 0; k < n; ++k) {
            error[k] += wi * row_i[k] + wj * row_j[k];
        }
#ifndef NDEBUG
        double objective = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            objective += alpha[k] - 0.5 * alpha[k] * (labels[k] * error[k] + 1.0);
        }
        assert(objective >= previous_objective - 1e-9 * std::max(1.0, std::abs(previous_objective)));
        previous_objective = objective;
#endif
    }

    SvmModel model = assemble(gram, labels, std::move(alpha), upper, config, iteration);
    if (model.support_indices.empty()) {
        throw DegenerateError("training produced no support vectors");
    }
    return model;
}

double decision_value(const SvmModel &model, std::span<const double> kernel_row) {
    if (kernel_row.size() != model.alphas.size()) {
        throw UsageError("kernel row has " + std::to_string(kernel_row.size()) + " entries, model has " +
                         std::to_string(model.alphas.size()) + " training points");
    }
    double value = 0.0;
    for (std::size_t i : model.support_indices) {
        value += model.alphas[i] * model.labels[i] * kernel_row[i];
    }
    return value + model.bias;
}

int sign_label(double value) { return value >= 0.0 ? 1 : -1; }

int predict(const SvmModel &model, std::span<const double> kernel_row) {
    return sign_label(decision_value(model, kernel_row));
}

std::string model_to_json(const SvmModel &model) {
    nlohmann::json doc;
    doc["alphas"] = model.alphas;
    doc["labels"] = model.labels;
    doc["support_indices"] = model.support_indices;
    doc["bias"] = model.bias;
    doc["C"] = model.C;
    doc["dual_objective"] = model.dual_objective;
    return doc.dump(2);
}

SvmModel model_from_json(std::string_view text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        SvmModel model;
        model.alphas = doc.at("alphas").get<std::vector<double>>();
        model.labels = doc.at("labels").get<std::vector<int>>();
        model.support_indices = doc.at("support_indices").get<std::vector<std::size_t>>();
        model.bias = doc.at("bias").get<double>();
        model.C = doc.at("C").get<double>();
        model.dual_objective = doc.at("dual_objective").get<double>();
        if (model.labels.size() != model.alphas.size()) {
            throw UsageError("model JSON: alphas and labels differ in length");
        }
        for (std::size_t i : model.support_indices) {
            if (i >= model.alphas.size()) {
                throw UsageError("model JSON: support index out of range");
            }
        }
        return model;
    } catch (const nlohmann::json::exception &e) {
        throw UsageError(std::string("model JSON: ") + e.what());
    }
}

}  // namespace pqk
