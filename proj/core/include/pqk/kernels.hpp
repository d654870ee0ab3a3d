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

// Classical RBF, fidelity and projected quantum kernels, and Gram matrices
// built from them.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqk/feature_maps.hpp"
#include "pqk/quantum_state.hpp"

namespace pqk {

enum class ProjectionMode { M1, M2, Union };

std::string_view projection_name(ProjectionMode mode);
ProjectionMode parse_projection(std::string_view name);

/// One measured quantity of a projection: a Pauli observable on the qubit
/// subset it is measured over.
struct ProjectedObservable {
    std::vector<int> subset;
    PauliObservable observable;
};

/// Which subsets and Pauli operators a state is projected onto.
///   M1:    {j} for every qubit, with X, Y, Z               -> 3n features
///   M2:    {j, (j+1) mod n} for every j, with XX, YY, ZZ   -> 3n features
///   Union: M1 followed by M2                               -> 6n features
/// Enumeration order is fixed: subsets in the order above, letters X, Y, Z.
class ProjectionStrategy {
   public:
    ProjectionStrategy(ProjectionMode mode, int n_qubits);

    ProjectionMode mode() const noexcept { return mode_; }
    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t feature_count() const noexcept { return observables_.size(); }
    const std::vector<ProjectedObservable> &observables() const noexcept { return observables_; }

   private:
    ProjectionMode mode_;
    int n_qubits_;
    std::vector<ProjectedObservable> observables_;
};

using ProjectedFeatures = std::vector<double>;

struct ShotSettings {
    std::uint64_t shots = 1024;
    std::uint64_t seed = 0;

    bool operator==(const ShotSettings &) const = default;
};

enum class KernelKind { RBF, FidelityQK, PQK };

std::string_view kernel_name(KernelKind kind);
KernelKind parse_kernel(std::string_view name);

struct KernelSpec {
    KernelKind kind = KernelKind::RBF;
    double gamma = 1.0;                  // RBF, PQK
    FeatureMapSpec feature_map{};        // FidelityQK, PQK
    ProjectionMode strategy = ProjectionMode::M1;  // PQK
    std::optional<ShotSettings> shots;   // PQK; absent means exact expectations

    bool uses_gamma() const noexcept { return kind != KernelKind::FidelityQK; }
    /// Throws ConfigError naming the offending field.
    void validate() const;
    std::string describe() const;
};

/// exp(-gamma ||x - y||^2)
double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

/// |<a|b>|^2
double state_fidelity(const Statevector &a, const Statevector &b);

/// |<phi(y)|phi(x)>|^2 from directly simulated statevectors.
double fidelity_kernel(std::span<const double> x, std::span<const double> y, const FeatureMapSpec &map);

/// Expectation of every observable of the strategy, each clamped to [-1, 1].
/// With shots, observable k is estimated from shots->shots samples seeded
/// with derive_seed(shots->seed, k).
ProjectedFeatures project_state(const Statevector &state, const ProjectionStrategy &strategy,
                                 std::optional<ShotSettings> shots = std::nullopt);

/// exp(-gamma sum_k (f_k - g_k)^2); the same arithmetic as rbf_kernel.
double pqk_kernel(std::span<const double> f, std::span<const double> g, double gamma);

/// Dense symmetric kernel matrix, row-major.
class GramMatrix {
   public:
    GramMatrix() = default;
    explicit GramMatrix(std::size_t size) : size_(size), entries_(size * size, 0.0) {}

    /// Throws UsageError unless entries.size() == size * size.
    static GramMatrix from_row_major(std::size_t size, std::vector<double> entries);

    std::size_t size() const noexcept { return size_; }
    double operator()(std::size_t i, std::size_t j) const { return entries_[i * size_ + j]; }
    double &operator()(std::size_t i, std::size_t j) { return entries_[i * size_ + j]; }
    std::span<const double> row(std::size_t i) const { return {entries_.data() + i * size_, size_}; }
    std::span<const double> entries() const noexcept { return entries_; }

    /// K restricted to rows and columns in `indices` (in that order).
    GramMatrix principal_submatrix(std::span<const std::size_t> indices) const;
    /// K[row, cols[0]], K[row, cols[1]], ...
    std::vector<double> row_slice(std::size_t row, std::span<const std::size_t> cols) const;

    bool operator==(const GramMatrix &) const = default;

   private:
    std::size_t size_ = 0;
    std::vector<double> entries_;
};

/// Per-point representations of a dataset under one kernel spec: raw
/// vectors (RBF), encoded states (FidelityQK) or projected features (PQK).
/// Every point is encoded and projected exactly once; Gram matrices for any
/// gamma are then assembled from the cache.
class PreparedKernel {
   public:
    /// With spec.shots set, point i is sampled with seed (spec.shots->seed ^ i).
    static PreparedKernel prepare(std::span<const FeatureVector> dataset, const KernelSpec &spec, int jobs = 1);

    const KernelSpec &spec() const noexcept { return spec_; }
    std::size_t size() const noexcept { return count_; }
    /// Projected features (PQK) or raw vectors (RBF); empty for FidelityQK.
    const std::vector<std::vector<double>> &vectors() const noexcept { return vectors_; }
    const std::vector<Statevector> &states() const noexcept { return states_; }

    double entry(std::size_t i, std::size_t j, double gamma) const;

    /// Upper triangle computed, lower mirrored. gamma is ignored by FidelityQK.
    GramMatrix gram(double gamma, int jobs = 1) const;
    GramMatrix gram(int jobs = 1) const { return gram(spec_.gamma, jobs); }

   private:
    KernelSpec spec_;
    std::size_t count_ = 0;
    std::vector<std::vector<double>> vectors_;
    std::vector<Statevector> states_;
};

GramMatrix gram_matrix(std::span<const FeatureVector> dataset, const KernelSpec &spec, int jobs = 1);

struct PsdReport {
    double min_eigenvalue = 0.0;
    bool passed = false;
};

inline constexpr double kDefaultPsdTolerance = -1e-8;

/// Smallest eigenvalue of (K + K^T)/2 and whether it is >= tol.
PsdReport check_psd(const GramMatrix &gram, double tol = kDefaultPsdTolerance);
PsdReport check_psd(std::span<const double> row_major, std::size_t rows, std::size_t cols,
                    double tol = kDefaultPsdTolerance);

}  // namespace pqk
