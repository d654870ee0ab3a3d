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

#include "pqk/validation/properties.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "pqk/feature_maps.hpp"
#include "pqk/kernels.hpp"
#include "pqk/pipeline.hpp"
#include "pqk/quantum_state.hpp"
#include "pqk/random.hpp"
#include "pqk/svm.hpp"
#include "pqk/validation/oracles.hpp"

namespace pqk::validation {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_vector(std::size_t n, double lo, double hi, SeededRng &rng) {
    std::vector<double> v(n);
    for (double &x : v) {
        x = lo + (hi - lo) * rng.uniform();
    }
    return v;
}

std::vector<FeatureVector> random_points(std::size_t count, std::size_t dim, SeededRng &rng) {
    std::vector<FeatureVector> points;
    for (std::size_t i = 0; i < count; ++i) {
        points.push_back(random_vector(dim, 0.0, kPi, rng));
    }
    return points;
}

std::string format(double value) {
    std::ostringstream out;
    out.precision(3);
    out << value;
    return out.str();
}

double mean_of(std::span<const double> v) {
    double total = 0.0;
    for (double x : v) {
        total += x;
    }
    return total / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
    const double m = mean_of(v);
    double total = 0.0;
    for (double x : v) {
        total += (x - m) * (x - m);
    }
    return std::sqrt(total / static_cast<double>(v.size() - 1));
}

}  // namespace

CheckResult check_simulator_oracle(std::uint64_t seed) {
    SeededRng rng(seed);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(3));
        const Circuit circuit = random_circuit(n, 10, rng);
        const Eigen::VectorXcd expected = dense_run(n, circuit);
        const Eigen::VectorXcd actual = to_eigen(run_circuit(n, circuit));
        worst = std::max(worst, (expected - actual).cwiseAbs().maxCoeff());
    }
    return {"7", "simulator matches dense matrix products (100 circuits, <=3 qubits)", worst < 1e-12, worst, 1e-12,
            "max amplitude error " + format(worst)};
}

CheckResult check_rdm_oracle(std::uint64_t seed) {
    SeededRng rng(seed);
    double worst = 0.0;
    double worst_hermitian = 0.0;
    double worst_trace = 0.0;
    double min_eigen = 1.0;
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(5));
        const Statevector state = random_state(n, rng);
        std::vector<int> order(static_cast<std::size_t>(n));
        for (int q = 0; q < n; ++q) {
            order[static_cast<std::size_t>(q)] = q;
        }
        for (std::size_t k = order.size(); k > 1; --k) {
            std::swap(order[k - 1], order[rng.below(k)]);
        }
        const std::size_t m = 1 + rng.below(static_cast<std::uint64_t>(n));
        const std::vector<int> keep(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));

        const DensityMatrix rho = reduced_density_matrix(state, keep);
        const Eigen::VectorXcd psi = to_eigen(state);
        const Eigen::MatrixXcd full = psi * psi.adjoint();
        const Eigen::MatrixXcd expected = dense_partial_trace(full, n, keep);
        for (std::size_t r = 0; r < rho.dimension(); ++r) {
            for (std::size_t c = 0; c < rho.dimension(); ++c) {
                worst = std::max(worst, std::abs(rho.at(r, c) - expected(static_cast<Eigen::Index>(r),
                                                                         static_cast<Eigen::Index>(c))));
            }
        }
        worst_hermitian = std::max(worst_hermitian, rho.max_hermitian_deviation());
        worst_trace = std::max(worst_trace, std::abs(rho.trace() - Complex{1.0, 0.0}));
        min_eigen = std::min(min_eigen, rho.min_eigenvalue());
    }
    const bool passed = worst <= 1e-12 && worst_hermitian <= 1e-10 && worst_trace <= 1e-10 && min_eigen >= -1e-9;
    return {"8", "partial traces match the full density-matrix oracle (100 cases)", passed, worst, 1e-12,
            "max entry error " + format(worst) + ", hermitian dev " + format(worst_hermitian) + ", trace dev " +
                format(worst_trace) + ", min eigenvalue " + format(min_eigen)};
}

CheckResult check_rotx_identities(std::uint64_t seed) {
    SeededRng rng(seed);
    FeatureMapSpec rotx;
    rotx.family = FeatureMapFamily::RotX;
    rotx.n_qubits = 6;
    const ProjectionStrategy m1(ProjectionMode::M1, 6);
    double worst_fidelity = 0.0;
    double worst_projection = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto x = random_vector(6, 0.0, kPi, rng);
        const auto y = random_vector(6, 0.0, kPi, rng);
        double product = 1.0;
        for (std::size_t j = 0; j < 6; ++j) {
            product *= std::cos(x[j] - y[j]) * std::cos(x[j] - y[j]);
        }
        worst_fidelity = std::max(worst_fidelity, std::abs(fidelity_kernel(x, y, rotx) - product));

        const auto features = project_state(encode(rotx, x), m1);
        for (std::size_t j = 0; j < 6; ++j) {
            worst_projection = std::max(worst_projection, std::abs(features[3 * j + 0]));
            worst_projection = std::max(worst_projection, std::abs(features[3 * j + 1] + std::sin(2.0 * x[j])));
            worst_projection = std::max(worst_projection, std::abs(features[3 * j + 2] - std::cos(2.0 * x[j])));
        }
    }
    const double worst = std::max(worst_fidelity, worst_projection);
    return {"9", "RotX fidelity and M1 projections match closed forms (100 vectors)", worst <= 1e-10, worst, 1e-10,
            "fidelity error " + format(worst_fidelity) + ", projection error " + format(worst_projection)};
}

CheckResult check_pqk_rbf_equivalence(std::uint64_t seed) {
    SeededRng rng(seed);
    const auto points = random_points(50, 6, rng);
    std::size_t mismatches = 0;
    std::size_t grams = 0;
    for (const KernelSpec &base : comparison_table_specs(6)) {
        if (base.kind != KernelKind::PQK) {
            continue;
        }
        KernelSpec spec = base;
        spec.gamma = 0.05 + rng.uniform();
        const GramMatrix gram = gram_matrix(points, spec);

        const ProjectionStrategy strategy(spec.strategy, 6);
        std::vector<ProjectedFeatures> features;
        for (const auto &x : points) {
            features.push_back(project_state(encode(spec.feature_map, x), strategy));
        }
        for (std::size_t i = 0; i < points.size(); ++i) {
            for (std::size_t j = 0; j < points.size(); ++j) {
                if (gram(i, j) != rbf_kernel(features[i], features[j], spec.gamma)) {
                    ++mismatches;
                }
            }
        }
        ++grams;
    }
    return {"10", "PQK Gram is bit-identical to RBF over recomputed projections (50 points)", mismatches == 0,
            static_cast<double>(mismatches), 0.0,
            std::to_string(mismatches) + " differing entries over " + std::to_string(grams) + " Gram matrices"};
}

CheckResult check_gram_psd(std::uint64_t seed) {
    SeededRng rng(seed);
    const auto points = random_points(200, 6, rng);
    double min_eigen = 1.0;
    std::string worst_kernel;
    for (KernelSpec spec : comparison_table_specs(6)) {
        spec.gamma = spec.kind == KernelKind::RBF ? 0.5 : 0.1;
        const PsdReport report = check_psd(gram_matrix(points, spec));
        if (report.min_eigenvalue < min_eigen) {
            min_eigen = report.min_eigenvalue;
            worst_kernel = spec.describe();
        }
    }
    return {"11", "every exact-kernel Gram over 200 points is PSD", min_eigen >= -1e-8, min_eigen, -1e-8,
            "smallest eigenvalue " + format(min_eigen) + " (" + worst_kernel + ")"};
}

CheckResult check_svm_oracle(std::uint64_t seed) {
    SeededRng rng(seed);
    double worst_objective = 0.0;
    std::size_t prediction_mismatches = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 4 + static_cast<std::size_t>(rng.below(9));
        std::vector<FeatureVector> points;
        std::vector<int> labels;
        for (std::size_t i = 0; i < n; ++i) {
            points.push_back(random_vector(2, 0.0, 1.0, rng));
            labels.push_back(i < 2 ? (i == 0 ? 1 : -1) : (rng.below(2) == 0 ? 1 : -1));
        }
        const double gamma = 0.5 + 2.0 * rng.uniform();
        static constexpr double kCs[] = {0.5, 1.0, 5.0, 10.0};
        const double C = kCs[rng.below(4)];

        GramMatrix gram(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                gram(i, j) = rbf_kernel(points[i], points[j], gamma);
            }
        }
        TrainConfig config;
        config.C = C;
        config.kkt_tolerance = 1e-10;
        const SvmModel model = train_smo(gram, labels, config);
        const QpSolution oracle = solve_dual_qp(gram, labels, C);
        worst_objective = std::max(worst_objective, std::abs(model.dual_objective - oracle.objective));

        for (int gx = 0; gx <= 10; ++gx) {
            for (int gy = 0; gy <= 10; ++gy) {
                const FeatureVector query{-0.25 + 0.15 * gx, -0.25 + 0.15 * gy};
                std::vector<double> row(n);
                double oracle_value = oracle.bias;
                for (std::size_t i = 0; i < n; ++i) {
                    row[i] = rbf_kernel(points[i], query, gamma);
                    oracle_value += oracle.alphas[i] * labels[i] * row[i];
                }
                if (predict(model, row) != (oracle_value >= 0.0 ? 1 : -1)) {
                    ++prediction_mismatches;
                }
            }
        }
    }

    // Two points x = -1, +1 under a linear kernel: a = (0.5, 0.5), b = 0.
    const GramMatrix two = GramMatrix::from_row_major(2, {1.0, -1.0, -1.0, 1.0});
    const int two_labels[] = {-1, 1};
    TrainConfig two_config;
    two_config.C = 10.0;
    const SvmModel analytic = train_smo(two, two_labels, two_config);
    const double analytic_error = std::max({std::abs(analytic.alphas[0] - 0.5), std::abs(analytic.alphas[1] - 0.5),
                                            std::abs(analytic.bias)});

    const bool passed = worst_objective <= 1e-6 && prediction_mismatches == 0 && analytic_error <= 1e-9;
    return {"12", "SMO matches the projected-gradient QP oracle (50 datasets, N<=12)", passed, worst_objective, 1e-6,
            "max dual objective gap " + format(worst_objective) + ", prediction mismatches " +
                std::to_string(prediction_mismatches) + ", two-point error " + format(analytic_error)};
}

CheckResult check_shot_statistics(std::uint64_t seed) {
    constexpr int kSeeds = 200;
    std::ostringstream detail;
    bool passed = true;

    // Unbiasedness on <X> of |0> and on a random two-qubit observable.
    SeededRng rng(seed);
    const Statevector zero = Statevector::zero(1);
    const Statevector mixed = random_state(2, rng);
    const PauliObservable x0 = PauliObservable::parse({0}, "X");
    const PauliObservable yz = PauliObservable::parse({0, 1}, "YZ");
    const std::pair<const Statevector *, const PauliObservable *> cases[] = {{&zero, &x0}, {&mixed, &yz}};
    constexpr std::uint64_t kShots = 4096;
    double worst_z = 0.0;
    for (std::size_t c = 0; c < 2; ++c) {
        const auto &[state, obs] = cases[c];
        std::vector<int> support = obs->support();
        const double exact = pauli_expectation(reduced_density_matrix(*state, support), *obs);
        std::vector<double> estimates;
        for (int s = 0; s < kSeeds; ++s) {
            estimates.push_back(sampled_pauli_expectation(*state, *obs, kShots, derive_seed(seed, 1000 * c + s)));
        }
        const double standard_error = std::sqrt(std::max(1.0 - exact * exact, 1e-12) / (kShots * kSeeds));
        const double z = std::abs(mean_of(estimates) - exact) / standard_error;
        worst_z = std::max(worst_z, z);
        passed = passed && z <= 3.0;
    }
    detail << "bias " << format(worst_z) << " standard errors";

    // Spread across seeds should fall like shots^-1/2.
    const std::uint64_t shot_counts[] = {64, 256, 1024, 4096};
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::uint64_t shots : shot_counts) {
        std::vector<double> estimates;
        for (int s = 0; s < kSeeds; ++s) {
            estimates.push_back(sampled_pauli_expectation(zero, x0, shots, derive_seed(seed ^ shots, s)));
        }
        const double lx = std::log(static_cast<double>(shots));
        const double ly = std::log(sample_std(estimates));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double count = 4.0;
    const double slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
    const double deviation = std::abs(slope + 0.5);
    passed = passed && deviation <= 0.1;
    detail << ", error-scaling exponent " << format(slope);

    return {"13", "shot estimator is unbiased and its error scales as shots^-1/2", passed, deviation, 0.1,
            detail.str()};
}

std::vector<CheckResult> run_property_suite(std::uint64_t seed) {
    return {
        check_simulator_oracle(derive_seed(seed, 7)),  check_rdm_oracle(derive_seed(seed, 8)),
        check_rotx_identities(derive_seed(seed, 9)),   check_pqk_rbf_equivalence(derive_seed(seed, 10)),
        check_gram_psd(derive_seed(seed, 11)),         check_svm_oracle(derive_seed(seed, 12)),
        check_shot_statistics(derive_seed(seed, 13)),
    };
}

}  // namespace pqk::validation
