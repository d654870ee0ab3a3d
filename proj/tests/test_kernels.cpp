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
#include <numbers>
#include <sstream>
#include <vector>

#include "pqk/errors.hpp"
#include "pqk/gram_io.hpp"
#include "pqk/kernels.hpp"
#include "pqk/random.hpp"

namespace pqk {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<FeatureVector> random_points(std::size_t count, int dim, std::uint64_t seed) {
    SeededRng rng(seed);
    std::vector<FeatureVector> points(count, FeatureVector(dim));
    for (auto &p : points) {
        for (double &v : p) v = rng.uniform() * kPi;
    }
    return points;
}

KernelSpec pqk_spec(FeatureMapFamily family, ProjectionMode mode, int n, double gamma = 0.5) {
    KernelSpec spec;
    spec.kind = KernelKind::PQK;
    spec.gamma = gamma;
    spec.feature_map = FeatureMapSpec{family, n, family == FeatureMapFamily::ThreeD};
    spec.strategy = mode;
    return spec;
}

TEST(Projection, FeatureCountsAndOrder) {
    const ProjectionStrategy m1(ProjectionMode::M1, 6);
    const ProjectionStrategy m2(ProjectionMode::M2, 6);
    const ProjectionStrategy u(ProjectionMode::Union, 6);
    EXPECT_EQ(m1.feature_count(), 18u);
    EXPECT_EQ(m2.feature_count(), 18u);
    EXPECT_EQ(u.feature_count(), 36u);
    EXPECT_EQ(m1.observables()[0].observable.label(), "X0");
    EXPECT_EQ(m1.observables()[1].observable.label(), "Y0");
    EXPECT_EQ(m1.observables()[5].observable.label(), "Z1");
    EXPECT_EQ(m2.observables()[0].observable.label(), "X0X1");
    EXPECT_EQ(m2.observables()[17].observable.label(), "Z5Z0");
    EXPECT_EQ(u.observables()[18].observable.label(), "X0X1");
    EXPECT_EQ(m2.observables()[15].subset, (std::vector<int>{5, 0}));
}

TEST(Projection, ZeroStateValues) {
    const auto zero = new_zero_state(4);
    for (auto mode : {ProjectionMode::M1, ProjectionMode::M2}) {
        const auto f = project_state(zero, ProjectionStrategy(mode, 4));
        ASSERT_EQ(f.size(), 12u);
        for (std::size_t k = 0; k < f.size(); k += 3) {
            EXPECT_EQ(f[k], 0.0);
            EXPECT_EQ(f[k + 1], 0.0);
            EXPECT_EQ(f[k + 2], 1.0);
        }
    }
}

TEST(Projection, RotXClosedForm) {
    const auto points = random_points(20, 3, 8);
    const FeatureMapSpec map{FeatureMapFamily::RotX, 3};
    const ProjectionStrategy m1(ProjectionMode::M1, 3);
    for (const auto &x : points) {
        const auto f = project_state(encode(map, x), m1);
        for (int j = 0; j < 3; ++j) {
            EXPECT_NEAR(f[3 * j], 0.0, 1e-12);
            EXPECT_NEAR(f[3 * j + 1], -std::sin(2 * x[j]), 1e-12);
            EXPECT_NEAR(f[3 * j + 2], std::cos(2 * x[j]), 1e-12);
        }
    }
}

TEST(Projection, DimensionMismatch) {
    EXPECT_THROW(project_state(new_zero_state(3), ProjectionStrategy(ProjectionMode::M1, 4)), Error);
}

TEST(Projection, ShotsConvergeToExact) {
    const auto x = random_points(1, 4, 9)[0];
    const auto state = encode(FeatureMapSpec{FeatureMapFamily::ThreeD, 4, true}, x);
    const ProjectionStrategy strategy(ProjectionMode::Union, 4);
    const auto exact = project_state(state, strategy);
    const auto sampled = project_state(state, strategy, ShotSettings{1 << 18, 5});
    for (std::size_t k = 0; k < exact.size(); ++k) {
        EXPECT_NEAR(sampled[k], exact[k], 5.0 / std::sqrt(double(1 << 18)));
    }
    EXPECT_EQ(sampled, project_state(state, strategy, ShotSettings{1 << 18, 5}));
}

TEST(Rbf, Values) {
    const std::vector<double> x{0.0, 0.0};
    const std::vector<double> y{1.0, 1.0};
    EXPECT_DOUBLE_EQ(rbf_kernel(x, x, 3.0), 1.0);
    EXPECT_DOUBLE_EQ(rbf_kernel(y, y, 0.1), 1.0);
    EXPECT_NEAR(rbf_kernel(x, y, 0.5), std::exp(-1.0), 1e-15);
    EXPECT_THROW(rbf_kernel(x, std::vector<double>{1.0}, 1.0), Error);
}

TEST(Fidelity, Values) {
    const FeatureMapSpec map{FeatureMapFamily::RotX, 1};
    const std::vector<double> zero{0.0};
    const std::vector<double> half{kPi / 2};
    EXPECT_NEAR(fidelity_kernel(zero, half, map), 0.0, 1e-15);
    const auto points = random_points(10, 4, 10);
    const FeatureMapSpec zz{FeatureMapFamily::ZZ, 4};
    for (const auto &x : points) EXPECT_NEAR(fidelity_kernel(x, x, zz), 1.0, 1e-12);
}

TEST(Fidelity, RotXProductOfCosines) {
    const auto points = random_points(20, 3, 12);
    const FeatureMapSpec map{FeatureMapFamily::RotX, 3};
    for (std::size_t i = 0; i + 1 < points.size(); i += 2) {
        double expected = 1.0;
        for (int j = 0; j < 3; ++j) expected *= std::pow(std::cos(points[i][j] - points[i + 1][j]), 2);
        EXPECT_NEAR(fidelity_kernel(points[i], points[i + 1], map), expected, 1e-12);
    }
}

TEST(Pqk, Values) {
    const std::vector<double> f{0.1, -0.4, 0.9};
    const std::vector<double> g{0.5, 0.2, -0.3};
    EXPECT_EQ(pqk_kernel(f, f, 2.0), 1.0);
    EXPECT_NEAR(pqk_kernel(f, g, 1e-12), 1.0, 1e-11);
    EXPECT_EQ(pqk_kernel(f, g, 0.7), rbf_kernel(f, g, 0.7));
}

TEST(Gram, SinglePointAndIdenticalPoints) {
    const auto one = random_points(1, 3, 13);
    for (const auto &spec : {pqk_spec(FeatureMapFamily::ZZ, ProjectionMode::M2, 3),
                             KernelSpec{KernelKind::RBF, 0.3}}) {
        const auto g1 = gram_matrix(one, spec);
        ASSERT_EQ(g1.size(), 1u);
        EXPECT_NEAR(g1(0, 0), 1.0, 1e-15);
        const std::vector<FeatureVector> same(3, one[0]);
        const auto g3 = gram_matrix(same, spec);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(g3(i, j), 1.0, 1e-15);
        }
    }
    KernelSpec fid;
    fid.kind = KernelKind::FidelityQK;
    fid.feature_map = FeatureMapSpec{FeatureMapFamily::IQP, 3};
    const std::vector<FeatureVector> same(3, one[0]);
    const auto g = gram_matrix(same, fid);
    for (double v : g.entries()) EXPECT_NEAR(v, 1.0, 1e-12);
}

TEST(Gram, SymmetricWithUnitDiagonal) {
    const auto points = random_points(15, 4, 14);
    KernelSpec fid;
    fid.kind = KernelKind::FidelityQK;
    fid.feature_map = FeatureMapSpec{FeatureMapFamily::ThreeD, 4, true};
    for (const auto &spec : {pqk_spec(FeatureMapFamily::IQP, ProjectionMode::Union, 4), fid}) {
        const auto g = gram_matrix(points, spec);
        for (std::size_t i = 0; i < g.size(); ++i) {
            EXPECT_NEAR(g(i, i), 1.0, 1e-12);
            for (std::size_t j = 0; j < g.size(); ++j) EXPECT_EQ(g(i, j), g(j, i));
        }
    }
}

TEST(Gram, MatchesPairwiseDefinition) {
    const auto points = random_points(8, 3, 15);
    const auto spec = pqk_spec(FeatureMapFamily::ThreeD, ProjectionMode::M2, 3, 0.8);
    const auto g = gram_matrix(points, spec);
    const ProjectionStrategy strategy(ProjectionMode::M2, 3);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto fi = project_state(encode(spec.feature_map, points[i]), strategy);
        for (std::size_t j = 0; j < points.size(); ++j) {
            const auto fj = project_state(encode(spec.feature_map, points[j]), strategy);
            EXPECT_EQ(g(i, j), pqk_kernel(fi, fj, 0.8));
        }
    }
}

TEST(Gram, JobsDoNotChangeResult) {
    const auto points = random_points(30, 4, 16);
    auto spec = pqk_spec(FeatureMapFamily::ThreeD, ProjectionMode::Union, 4);
    spec.shots = ShotSettings{256, 77};
    EXPECT_EQ(gram_matrix(points, spec, 1), gram_matrix(points, spec, 3));
}

TEST(Gram, PreparedReusedAcrossGamma) {
    const auto points = random_points(12, 3, 17);
    const auto spec = pqk_spec(FeatureMapFamily::RotX, ProjectionMode::M1, 3);
    const auto prepared = PreparedKernel::prepare(points, spec);
    for (double gamma : {0.01, 1.0, 10.0}) {
        auto s = spec;
        s.gamma = gamma;
        EXPECT_EQ(prepared.gram(gamma), gram_matrix(points, s));
    }
}

TEST(Gram, SpecValidation) {
    const auto points = random_points(3, 3, 18);
    auto spec = pqk_spec(FeatureMapFamily::RotX, ProjectionMode::M1, 4);
    EXPECT_THROW(gram_matrix(points, spec), Error);
    auto bad_gamma = pqk_spec(FeatureMapFamily::RotX, ProjectionMode::M1, 3, -1.0);
    EXPECT_THROW(bad_gamma.validate(), ConfigError);
    KernelSpec rbf_with_shots{KernelKind::RBF, 1.0};
    rbf_with_shots.shots = ShotSettings{};
    EXPECT_THROW(rbf_with_shots.validate(), ConfigError);
}

TEST(Psd, AnalyticCases) {
    GramMatrix identity(3);
    for (std::size_t i = 0; i < 3; ++i) identity(i, i) = 1.0;
    const auto id = check_psd(identity);
    EXPECT_NEAR(id.min_eigenvalue, 1.0, 1e-14);
    EXPECT_TRUE(id.passed);
    const auto bad = check_psd(GramMatrix::from_row_major(2, {1, 2, 2, 1}));
    EXPECT_NEAR(bad.min_eigenvalue, -1.0, 1e-14);
    EXPECT_FALSE(bad.passed);
    const std::vector<double> rect{1, 2, 3, 4, 5, 6};
    EXPECT_THROW(check_psd(rect, 2, 3), Error);
}

TEST(Psd, ExactPqkGramPasses) {
    const auto points = random_points(100, 4, 19);
    const auto report = check_psd(gram_matrix(points, pqk_spec(FeatureMapFamily::ThreeD, ProjectionMode::M2, 4)));
    EXPECT_TRUE(report.passed) << report.min_eigenvalue;
}

TEST(GramIo, CsvRoundTripIsExact) {
    const auto points = random_points(7, 3, 20);
    const auto g = gram_matrix(points, pqk_spec(FeatureMapFamily::ZZ, ProjectionMode::M1, 3));
    std::stringstream buffer;
    write_gram_csv(buffer, g, "provenance line");
    EXPECT_EQ(buffer.str().rfind("# provenance line\n", 0), 0u);
    EXPECT_EQ(read_gram_csv(buffer), g);
}

TEST(GramIo, BinaryRoundTripIsExact) {
    const auto points = random_points(9, 2, 21);
    const auto g = gram_matrix(points, KernelSpec{KernelKind::RBF, 0.25});
    std::stringstream buffer;
    write_gram_binary(buffer, g);
    EXPECT_EQ(buffer.str().size(), 4u + 8u + 81u * 8u);
    EXPECT_EQ(buffer.str().substr(0, 4), "GRAM");
    EXPECT_EQ(read_gram_binary(buffer), g);
}

TEST(GramIo, MalformedInputRejected) {
    std::stringstream ragged("1,0\n0\n");
    EXPECT_THROW(read_gram_csv(ragged), Error);
    std::stringstream junk("1,x\n0,1\n");
    EXPECT_THROW(read_gram_csv(junk), Error);
    std::stringstream truncated(std::string("GRAM\x02\0\0\0\0\0\0\0", 12));
    EXPECT_THROW(read_gram_binary(truncated), Error);
}

}  // namespace
}  // namespace pqk
