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

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "pqk/errors.hpp"
#include "pqk/kernels.hpp"
#include "pqk/random.hpp"
#include "pqk/svm.hpp"
#include "pqk/validation/oracles.hpp"

namespace pqk {
namespace {

GramMatrix linear_gram(const std::vector<double> &x) {
    GramMatrix g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < x.size(); ++j) g(i, j) = x[i] * x[j];
    }
    return g;
}

GramMatrix rbf_gram(const std::vector<FeatureVector> &points, double gamma) {
    return gram_matrix(points, KernelSpec{KernelKind::RBF, gamma});
}

TrainConfig tight(double C) {
    TrainConfig config;
    config.C = C;
    config.kkt_tolerance = 1e-10;
    return config;
}

TEST(Smo, TwoPointAnalytic) {
    const auto gram = linear_gram({-1.0, 1.0});
    const std::vector<int> y{-1, 1};
    const auto model = train_smo(gram, y, tight(10.0));
    EXPECT_NEAR(model.alphas[0], 0.5, 1e-9);
    EXPECT_NEAR(model.alphas[1], 0.5, 1e-9);
    EXPECT_NEAR(model.bias, 0.0, 1e-9);
    EXPECT_NEAR(model.dual_objective, 0.5, 1e-9);
    const std::vector<double> row_at_zero{0.0, 0.0};
    EXPECT_NEAR(decision_value(model, row_at_zero), 0.0, 1e-9);
    EXPECT_NEAR(compute_bias(gram, y, model.alphas, 10.0), 0.0, 1e-9);
}

TEST(Smo, XorIsSeparableWithAllSupportVectors) {
    const std::vector<FeatureVector> x{{0, 0}, {1, 1}, {0, 1}, {1, 0}};
    const std::vector<int> y{-1, -1, 1, 1};
    const auto gram = rbf_gram(x, 1.0);
    const auto model = train_smo(gram, y, tight(10.0));
    EXPECT_EQ(model.support_indices.size(), 4u);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_EQ(predict(model, gram.row(i)), y[i]);
    const auto oracle = validation::solve_dual_qp(gram, y, 10.0);
    EXPECT_NEAR(model.dual_objective, oracle.objective, 1e-8);
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(model.alphas[i], oracle.alphas[i], 1e-6);
}

TEST(Smo, SingleClassIsDegenerate) {
    const auto gram = linear_gram({1.0, 2.0, 3.0});
    const std::vector<int> y{1, 1, 1};
    EXPECT_THROW(train_smo(gram, y, TrainConfig{}), DegenerateError);
}

TEST(Smo, InvalidInputs) {
    const auto gram = linear_gram({1.0, 2.0});
    EXPECT_THROW(train_smo(gram, std::vector<int>{1, 0}, TrainConfig{}), Error);
    EXPECT_THROW(train_smo(gram, std::vector<int>{1, -1, 1}, TrainConfig{}), Error);
    TrainConfig bad;
    bad.C = 0.0;
    EXPECT_THROW(train_smo(gram, std::vector<int>{1, -1}, bad), ConfigError);
}

TEST(Smo, LabelFlipNegatesDecisions) {
    SeededRng rng(1);
    std::vector<FeatureVector> x(12, FeatureVector(2));
    std::vector<int> y(12);
    for (std::size_t i = 0; i < 12; ++i) {
        x[i] = {rng.uniform() * 3, rng.uniform() * 3};
        y[i] = (x[i][0] + 0.3 * x[i][1] > 1.8) ? 1 : -1;
    }
    std::vector<int> flipped(y);
    for (int &v : flipped) v = -v;
    const auto gram = rbf_gram(x, 0.7);
    const auto a = train_smo(gram, y, tight(5.0));
    const auto b = train_smo(gram, flipped, tight(5.0));
    for (std::size_t i = 0; i < 12; ++i) {
        EXPECT_NEAR(decision_value(a, gram.row(i)), -decision_value(b, gram.row(i)), 1e-7);
    }
}

TEST(Smo, DuplicatePointEqualsHalfWeightedCopies) {
    // A point duplicated with each copy at box weight 1/2 behaves like the
    // single point with the full box.
    const std::vector<FeatureVector> base{{0.0}, {0.4}, {1.0}, {1.3}, {0.7}};
    const std::vector<int> y{-1, -1, 1, 1, -1};
    std::vector<FeatureVector> dup(base);
    dup.push_back(base[4]);
    std::vector<int> ydup(y);
    ydup.push_back(y[4]);
    const double C = 0.8;
    const auto m1 = train_smo(rbf_gram(base, 2.0), y, tight(C));
    TrainConfig weighted = tight(C);
    weighted.box_weights = {1, 1, 1, 1, 0.5, 0.5};
    const auto gram_dup = rbf_gram(dup, 2.0);
    const auto m2 = train_smo(gram_dup, ydup, weighted);
    EXPECT_NEAR(m1.dual_objective, m2.dual_objective, 1e-8);
    EXPECT_NEAR(m1.alphas[4], m2.alphas[4] + m2.alphas[5], 1e-6);
    EXPECT_NEAR(m1.bias, m2.bias, 1e-6);
}

TEST(Smo, FeasibleAndKktOnRandomProblems) {
    SeededRng rng(2);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 6 + rng.below(20);
        std::vector<FeatureVector> x(n, FeatureVector(3));
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (double &v : x[i]) v = rng.uniform();
            y[i] = i < 2 ? (i == 0 ? 1 : -1) : (rng.uniform() < 0.5 ? 1 : -1);
        }
        const double C = 0.1 + rng.uniform() * 50;
        const auto gram = rbf_gram(x, 2.0);
        TrainConfig config;
        config.C = C;
        const auto model = train_smo(gram, y, config);
        double balance = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_GE(model.alphas[i], 0.0);
            EXPECT_LE(model.alphas[i], C);
            balance += model.alphas[i] * y[i];
        }
        EXPECT_NEAR(balance, 0.0, 1e-9 * C * n);
        EXPECT_NEAR(model.dual_objective, dual_objective(gram, y, model.alphas), 1e-9);
        // KKT residual: the maximal violation is within tolerance.
        double up = -1e300, low = 1e300;
        for (std::size_t i = 0; i < n; ++i) {
            double f = 0.0;
            for (std::size_t j = 0; j < n; ++j) f += model.alphas[j] * y[j] * gram(i, j);
            const double e = f - y[i];
            const bool can_raise = y[i] == 1 ? model.alphas[i] < C : model.alphas[i] > 0;
            const bool can_lower = y[i] == 1 ? model.alphas[i] > 0 : model.alphas[i] < C;
            if (can_raise) low = std::min(low, e);
            if (can_lower) up = std::max(up, e);
        }
        EXPECT_LE(up - low, config.kkt_tolerance);
    }
}

TEST(Smo, HardProblemsAtLargeC) {
    SeededRng rng(3);
    std::vector<FeatureVector> x(60, FeatureVector(2));
    std::vector<int> y(60);
    for (std::size_t i = 0; i < 60; ++i) {
        x[i] = {rng.uniform(), rng.uniform()};
        y[i] = rng.uniform() < 0.5 ? 1 : -1;  // pure noise labels
    }
    y[0] = 1;
    y[1] = -1;
    for (double C : {100.0, 1000.0}) {
        for (double gamma : {0.001, 10.0}) {
            TrainConfig config;
            config.C = C;
            EXPECT_NO_THROW(train_smo(rbf_gram(x, gamma), y, config)) << C << " " << gamma;
        }
    }
}

TEST(Smo, BudgetExhaustionReportsBestIterate) {
    SeededRng rng(4);
    std::vector<FeatureVector> x(40, FeatureVector(2));
    std::vector<int> y(40);
    for (std::size_t i = 0; i < 40; ++i) {
        x[i] = {rng.uniform(), rng.uniform()};
        y[i] = i % 2 ? 1 : -1;
    }
    TrainConfig config = tight(100.0);
    config.max_iterations = 3;
    try {
        train_smo(rbf_gram(x, 5.0), y, config);
        FAIL() << "expected ConvergenceError";
    } catch (const ConvergenceError &e) {
        EXPECT_EQ(e.category(), ErrorCategory::Convergence);
        EXPECT_EQ(e.best_iterate().iterations, 3u);
        double balance = 0.0;
        for (std::size_t i = 0; i < 40; ++i) balance += e.best_iterate().alphas[i] * y[i];
        EXPECT_NEAR(balance, 0.0, 1e-9);
    }
}

TEST(Bias, ShiftedPoints) {
    // 1D points 0 (label -1) and 2 (label +1): w = 1, b = -1.
    const auto gram = linear_gram({0.0, 2.0});
    const std::vector<int> y{-1, 1};
    const auto model = train_smo(gram, y, tight(10.0));
    EXPECT_NEAR(model.bias, -1.0, 1e-9);
}

TEST(Bias, FallbackWithoutFreeVectors) {
    // Every multiplier at its bound: the midpoint of the feasible interval.
    const auto gram = linear_gram({-1.0, 1.0});
    const std::vector<int> y{-1, 1};
    const std::vector<double> alphas{0.1, 0.1};
    const double b = compute_bias(gram, y, alphas, 0.1);
    EXPECT_TRUE(std::isfinite(b));
    EXPECT_NEAR(b, 0.0, 1e-12);
}

TEST(Decision, FreeSupportVectorOnMargin) {
    const std::vector<FeatureVector> x{{0.0}, {0.5}, {1.5}, {2.0}, {0.8}, {1.1}};
    const std::vector<int> y{-1, -1, 1, 1, -1, 1};
    const auto gram = rbf_gram(x, 1.0);
    TrainConfig config = tight(1000.0);
    const auto model = train_smo(gram, y, config);
    for (std::size_t i : model.support_indices) {
        if (model.alphas[i] < model.C - 1e-8) {
            EXPECT_NEAR(decision_value(model, gram.row(i)), y[i], 1e-6);
        }
    }
}

TEST(Decision, ZeroAlphasGiveBias) {
    SvmModel model;
    model.alphas = {0.0, 0.0};
    model.labels = {1, -1};
    model.bias = 0.25;
    const std::vector<double> row{0.3, 0.9};
    EXPECT_EQ(decision_value(model, row), 0.25);
    EXPECT_THROW(decision_value(model, std::vector<double>{1.0}), Error);
}

TEST(Predict, SignWithTieToPositive) {
    EXPECT_EQ(sign_label(2.3), 1);
    EXPECT_EQ(sign_label(-0.1), -1);
    EXPECT_EQ(sign_label(0.0), 1);
    EXPECT_EQ(sign_label(-0.0), 1);
}

TEST(ModelJson, RoundTrip) {
    const auto gram = linear_gram({-1.0, 0.5, 1.0});
    const std::vector<int> y{-1, -1, 1};
    const auto model = train_smo(gram, y, TrainConfig{});
    const auto back = model_from_json(model_to_json(model));
    EXPECT_EQ(back.alphas, model.alphas);
    EXPECT_EQ(back.labels, model.labels);
    EXPECT_EQ(back.support_indices, model.support_indices);
    EXPECT_EQ(back.bias, model.bias);
    EXPECT_EQ(back.C, model.C);
    EXPECT_THROW(model_from_json("{not json"), Error);
}

}  // namespace
}  // namespace pqk
