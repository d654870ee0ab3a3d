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

#include "pqk/kernels.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "pqk/errors.hpp"
#include "pqk/parallel.hpp"
#include "pqk/random.hpp"

namespace pqk {
namespace {

double squared_distance(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw UsageError("kernel arguments have different lengths (" + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()) + ")");
    }
    double total = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        total += d * d;
    }
    return total;
}

double gaussian(std::span<const double> x, std::span<const double> y, double gamma) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw UsageError("gamma must be a positive finite number");
    }
    return std::exp(-gamma * squared_distance(x, y));
}

void add_subset(std::vector<ProjectedObservable> &out, std::vector<int> subset) {
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
        std::vector<Pauli> letters(subset.size(), p);
        out.push_back({subset, PauliObservable(subset, std::move(letters))});
    }
}

}  // namespace

std::string_view projection_name(ProjectionMode mode) {
    switch (mode) {
        case ProjectionMode::M1:
            return "M1";
        case ProjectionMode::M2:
            return "M2";
        case ProjectionMode::Union:
            return "Union";
    }
    return "?";
}

ProjectionMode parse_projection(std::string_view name) {
    for (auto m : {ProjectionMode::M1, ProjectionMode::M2, ProjectionMode::Union}) {
        if (projection_name(m) == name) {
            return m;
        }
    }
    throw ConfigError("unknown projection strategy '" + std::string(name) + "' (expected M1, M2 or Union)");
}

ProjectionStrategy::ProjectionStrategy(ProjectionMode mode, int n_qubits) : mode_(mode), n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw UsageError("projection strategy qubit count out of range");
    }
    if (mode != ProjectionMode::M1 && n_qubits < 2) {
        throw UsageError(std::string(projection_name(mode)) + " projection needs at least 2 qubits");
    }
    if (mode == ProjectionMode::M1 || mode == ProjectionMode::Union) {
        for (int j = 0; j < n_qubits; ++j) {
            add_subset(observables_, {j});
        }
    }
    if (mode == ProjectionMode::M2 || mode == ProjectionMode::Union) {
        for (int j = 0; j < n_qubits; ++j) {
            add_subset(observables_, {j, (j + 1) % n_qubits});
        }
    }
}

std::string_view kernel_name(KernelKind kind) {
    switch (kind) {
        case KernelKind::RBF:
            return "RBF";
        case KernelKind::FidelityQK:
            return "FidelityQK";
        case KernelKind::PQK:
            return "PQK";
    }
    return "?";
}

KernelKind parse_kernel(std::string_view name) {
    for (auto k : {KernelKind::RBF, KernelKind::FidelityQK, KernelKind::PQK}) {
        if (kernel_name(k) == name) {
            return k;
        }
    }
    throw ConfigError("unknown kernel kind '" + std::string(name) + "' (expected RBF, FidelityQK or PQK)");
}

void KernelSpec::validate() const {
    if (uses_gamma() && (!(gamma > 0.0) || !std::isfinite(gamma))) {
        throw ConfigError("kernel.gamma must be a positive finite number");
    }
    if (kind == KernelKind::RBF) {
        if (shots) {
            throw ConfigError("kernel.shots is only supported for PQK");
        }
        return;
    }
    const FeatureMapSpec &fm = feature_map;
    if (fm.n_qubits < 1 || fm.n_qubits > kMaxQubits) {
        throw ConfigError("kernel.feature_map.n_qubits must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (fm.reps < 0) {
        throw ConfigError("kernel.feature_map.reps must be >= 1 (or 0 for the family default)");
    }
    if (!std::isfinite(fm.evolution_time)) {
        throw ConfigError("kernel.feature_map.evolution_time must be finite");
    }
    const bool entangling = fm.family == FeatureMapFamily::ZZ || fm.family == FeatureMapFamily::IQP ||
                            fm.family == FeatureMapFamily::Trotterized ||
                            (fm.family == FeatureMapFamily::ThreeD && fm.with_cnot_ring);
    if (entangling && fm.n_qubits < 2) {
        throw ConfigError("kernel.feature_map: " + fm.describe() + " needs at least 2 qubits");
    }
    if (kind == KernelKind::PQK) {
        if (strategy != ProjectionMode::M1 && fm.n_qubits < 2) {
            throw ConfigError("kernel.strategy " + std::string(projection_name(strategy)) + " needs at least 2 qubits");
        }
        if (shots && shots->shots == 0) {
            throw ConfigError("kernel.shots must be >= 1");
        }
    } else if (shots) {
        throw ConfigError("kernel.shots is only supported for PQK");
    }
}

std::string KernelSpec::describe() const {
    std::ostringstream out;
    out << kernel_name(kind);
    if (kind != KernelKind::RBF) {
        out << "/" << feature_map.describe();
    }
    if (kind == KernelKind::PQK) {
        out << "/" << projection_name(strategy);
        if (shots) {
            out << "/shots=" << shots->shots;
        }
    }
    return out.str();
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) { return gaussian(x, y, gamma); }

double pqk_kernel(std::span<const double> f, std::span<const double> g, double gamma) { return gaussian(f, g, gamma); }

double state_fidelity(const Statevector &a, const Statevector &b) {
    return std::clamp(std::norm(b.inner(a)), 0.0, 1.0);
}

double fidelity_kernel(std::span<const double> x, std::span<const double> y, const FeatureMapSpec &map) {
    return state_fidelity(encode(map, x), encode(map, y));
}

ProjectedFeatures project_state(const Statevector &state, const ProjectionStrategy &strategy,
                                std::optional<ShotSettings> shots) {
    if (strategy.n_qubits() != state.n_qubits()) {
        throw UsageError("projection strategy is for " + std::to_string(strategy.n_qubits()) +
                         " qubits but the state has " + std::to_string(state.n_qubits()));
    }
    const auto &observables = strategy.observables();
    ProjectedFeatures features(observables.size(), 0.0);

    if (shots) {
        for (std::size_t k = 0; k < observables.size(); ++k) {
            features[k] = sampled_pauli_expectation(state, observables[k].observable, shots->shots,
                                                    derive_seed(shots->seed, k));
        }
        return features;
    }

    // Observables sharing a subset are adjacent; reuse the reduced density matrix.
    std::optional<DensityMatrix> rho;
    for (std::size_t k = 0; k < observables.size(); ++k) {
        if (!rho || rho->qubits() != observables[k].subset) {
            rho = reduced_density_matrix(state, observables[k].subset);
        }
        features[k] = pauli_expectation(*rho, observables[k].observable);
    }
    return features;
}

// ---------------------------------------------------------------------------
// GramMatrix

GramMatrix GramMatrix::from_row_major(std::size_t size, std::vector<double> entries) {
    if (entries.size() != size * size) {
        throw UsageError("Gram matrix needs " + std::to_string(size * size) + " entries, got " +
                         std::to_string(entries.size()));
    }
    GramMatrix gram;
    gram.size_ = size;
    gram.entries_ = std::move(entries);
    return gram;
}

GramMatrix GramMatrix::principal_submatrix(std::span<const std::size_t> indices) const {
    GramMatrix sub(indices.size());
    for (std::size_t a = 0; a < indices.size(); ++a) {
        const double *src = entries_.data() + indices[a] * size_;
        double *dst = sub.entries_.data() + a * indices.size();
        for (std::size_t b = 0; b < indices.size(); ++b) {
            dst[b] = src[indices[b]];
        }
    }
    return sub;
}

std::vector<double> GramMatrix::row_slice(std::size_t row, std::span<const std::size_t> cols) const {
    std::vector<double> out(cols.size());
    const double *src = entries_.data() + row * size_;
    for (std::size_t b = 0; b < cols.size(); ++b) {
        out[b] = src[cols[b]];
    }
    return out;
}

// ---------------------------------------------------------------------------
// PreparedKernel

PreparedKernel PreparedKernel::prepare(std::span<const FeatureVector> dataset, const KernelSpec &spec, int jobs) {
    if (dataset.empty()) {
        throw UsageError("cannot build a kernel over an empty dataset");
    }
    spec.validate();

    PreparedKernel prepared;
    prepared.spec_ = spec;
    prepared.count_ = dataset.size();

    switch (spec.kind) {
        case KernelKind::RBF: {
            const std::size_t width = dataset.front().size();
            for (const auto &x : dataset) {
                if (x.size() != width) {
                    throw UsageError("dataset rows have inconsistent lengths");
                }
            }
            prepared.vectors_.assign(dataset.begin(), dataset.end());
            break;
        }
        case KernelKind::FidelityQK: {
            std::vector<std::optional<Statevector>> states(dataset.size());
            parallel_for(dataset.size(), jobs, [&](std::size_t i) { states[i] = encode(spec.feature_map, dataset[i]); });
            prepared.states_.reserve(dataset.size());
            for (auto &s : states) {
                prepared.states_.push_back(std::move(*s));
            }
            break;
        }
        case KernelKind::PQK: {
            const ProjectionStrategy strategy(spec.strategy, spec.feature_map.n_qubits);
            prepared.vectors_.resize(dataset.size());
            parallel_for(dataset.size(), jobs, [&](std::size_t i) {
                std::optional<ShotSettings> point_shots;
                if (spec.shots) {
                    point_shots = ShotSettings{spec.shots->shots, spec.shots->seed ^ static_cast<std::uint64_t>(i)};
                }
                prepared.vectors_[i] = project_state(encode(spec.feature_map, dataset[i]), strategy, point_shots);
            });
            break;
        }
    }
    return prepared;
}

double PreparedKernel::entry(std::size_t i, std::size_t j, double gamma) const {
    switch (spec_.kind) {
        case KernelKind::RBF:
            return rbf_kernel(vectors_[i], vectors_[j], gamma);
        case KernelKind::PQK:
            return pqk_kernel(vectors_[i], vectors_[j], gamma);
        case KernelKind::FidelityQK:
            return state_fidelity(states_[i], states_[j]);
    }
    throw Error(ErrorCategory::Internal, "unhandled kernel kind");
}

GramMatrix PreparedKernel::gram(double gamma, int jobs) const {
    if (spec_.uses_gamma() && (!(gamma > 0.0) || !std::isfinite(gamma))) {
        throw UsageError("gamma must be a positive finite number");
    }
    GramMatrix gram(count_);
    parallel_for(count_, jobs, [&](std::size_t i) {
        for (std::size_t j = i; j < count_; ++j) {
            gram(i, j) = entry(i, j, gamma);
        }
    });
    for (std::size_t i = 0; i < count_; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            gram(i, j) = gram(j, i);
        }
    }
    return gram;
}

GramMatrix gram_matrix(std::span<const FeatureVector> dataset, const KernelSpec &spec, int jobs) {
    return PreparedKernel::prepare(dataset, spec, jobs).gram(jobs);
}

// ---------------------------------------------------------------------------
// PSD check

PsdReport check_psd(std::span<const double> row_major, std::size_t rows, std::size_t cols, double tol) {
    if (rows != cols) {
        throw UsageError("check_psd needs a square matrix, got " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (row_major.size() != rows * cols) {
        throw UsageError("check_psd: entry count does not match the shape");
    }
    if (rows == 0) {
        return {0.0, true};
    }
    const auto n = static_cast<Eigen::Index>(rows);
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            m(r, c) = row_major[static_cast<std::size_t>(r * n + c)];
        }
    }
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
    const double smallest = solver.eigenvalues().minCoeff();
    return {smallest, smallest >= tol};
}

PsdReport check_psd(const GramMatrix &gram, double tol) {
    return check_psd(gram.entries(), gram.size(), gram.size(), tol);
}

}  // namespace pqk
