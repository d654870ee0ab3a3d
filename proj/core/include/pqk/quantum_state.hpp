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

// Dense statevector simulation: gates, reduced density matrices and Pauli
// expectation values (exact and finite-shot).
//
// Qubit 0 is the most significant bit of an amplitude index, so for n qubits
// the basis state |q0 q1 ... q(n-1)> has index q0*2^(n-1) + ... + q(n-1).

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pqk {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 12;

enum class GateKind { RX, RY, RZ, H, S_DAG, PHASE, CNOT, RZZ };

const char *gate_name(GateKind kind);

/// One gate of a circuit. Rotations use the half-angle convention
/// R_A(theta) = exp(-i theta A / 2); PHASE(theta) = diag(1, e^{i theta});
/// RZZ(theta) = exp(-i theta Z(x)Z / 2). For CNOT the control is qubit(0).
struct Gate {
    GateKind kind = GateKind::H;
    std::array<int, 2> targets{0, 0};
    int arity = 1;
    double angle = 0.0;

    std::span<const int> qubits() const { return {targets.data(), static_cast<std::size_t>(arity)}; }

    static Gate rx(int q, double theta) { return {GateKind::RX, {q, 0}, 1, theta}; }
    static Gate ry(int q, double theta) { return {GateKind::RY, {q, 0}, 1, theta}; }
    static Gate rz(int q, double theta) { return {GateKind::RZ, {q, 0}, 1, theta}; }
    static Gate h(int q) { return {GateKind::H, {q, 0}, 1, 0.0}; }
    static Gate s_dag(int q) { return {GateKind::S_DAG, {q, 0}, 1, 0.0}; }
    static Gate phase(int q, double theta) { return {GateKind::PHASE, {q, 0}, 1, theta}; }
    static Gate cnot(int control, int target) { return {GateKind::CNOT, {control, target}, 2, 0.0}; }
    static Gate rzz(int a, int b, double theta) { return {GateKind::RZZ, {a, b}, 2, theta}; }

    bool operator==(const Gate &) const = default;
};

using Circuit = std::vector<Gate>;

/// Normalized amplitude vector over n qubits. Immutable from the outside
/// except through gate application.
class Statevector {
   public:
    /// |0...0> on n qubits, 1 <= n <= kMaxQubits.
    static Statevector zero(int n_qubits);

    /// Takes ownership of amplitudes; the length must be 2^n for some
    /// 1 <= n <= kMaxQubits and the norm must be 1 within 1e-10.
    static Statevector from_amplitudes(std::vector<Complex> amplitudes);

    int n_qubits() const noexcept { return n_qubits_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    const Complex &operator[](std::size_t index) const { return amplitudes_[index]; }

    double norm_squared() const;

    /// <this|other>
    Complex inner(const Statevector &other) const;

    /// In-place application; throws UsageError on invalid qubit indices.
    void apply(const Gate &gate);

    bool operator==(const Statevector &) const = default;

   private:
    Statevector(int n_qubits, std::vector<Complex> amplitudes)
        : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {}

    int n_qubits_ = 0;
    std::vector<Complex> amplitudes_;
};

Statevector new_zero_state(int n_qubits);

Statevector apply_gate(Statevector state, const Gate &gate);

/// Left-to-right fold of apply_gate over |0...0>.
Statevector run_circuit(int n_qubits, std::span<const Gate> circuit);

/// Density matrix over an ordered list of qubits of some parent register.
/// qubits()[0] is the most significant bit of the row/column index.
class DensityMatrix {
   public:
    /// Validates shape, Hermiticity (1e-10) and unit trace (1e-10).
    static DensityMatrix from_entries(std::vector<int> qubits, std::vector<Complex> row_major);

    /// |psi><psi| over all qubits of the state.
    static DensityMatrix pure(const Statevector &state);

    int m_qubits() const noexcept { return static_cast<int>(qubits_.size()); }
    std::size_t dimension() const noexcept { return std::size_t{1} << qubits_.size(); }
    const std::vector<int> &qubits() const noexcept { return qubits_; }
    std::span<const Complex> entries() const noexcept { return entries_; }
    const Complex &at(std::size_t row, std::size_t col) const { return entries_[row * dimension() + col]; }

    Complex trace() const;
    /// Tr(rho^2); 1 for pure states.
    double purity() const;
    double max_hermitian_deviation() const;
    double min_eigenvalue() const;

   private:
    DensityMatrix(std::vector<int> qubits, std::vector<Complex> entries)
        : qubits_(std::move(qubits)), entries_(std::move(entries)) {}

    friend DensityMatrix reduced_density_matrix(const Statevector &, std::span<const int>);

    std::vector<int> qubits_;
    std::vector<Complex> entries_;
};

/// Partial trace of |psi><psi| over every qubit not in keep. The order of
/// keep fixes the qubit order of the result.
DensityMatrix reduced_density_matrix(const Statevector &state, std::span<const int> keep);

enum class Pauli : std::uint8_t { X, Y, Z };

char pauli_letter(Pauli p);

/// Tensor product of Pauli matrices over an ordered, duplicate-free support.
class PauliObservable {
   public:
    PauliObservable(std::vector<int> support, std::vector<Pauli> letters);

    /// e.g. parse({0, 2}, "XZ")
    static PauliObservable parse(std::vector<int> support, std::string_view letters);

    const std::vector<int> &support() const noexcept { return support_; }
    const std::vector<Pauli> &letters() const noexcept { return letters_; }
    std::string label() const;

   private:
    std::vector<int> support_;
    std::vector<Pauli> letters_;
};

/// Tr(O rho), clamped to [-1, 1]. The observable's support must equal the
/// qubit list of rho.
double pauli_expectation(const DensityMatrix &rho, const PauliObservable &obs);

/// Finite-shot estimate of <obs>: rotates the support into the observable's
/// eigenbasis, draws `shots` outcomes from the exact marginal distribution by
/// inverse CDF and averages the +-1 parities. Deterministic in `seed`.
double sampled_pauli_expectation(const Statevector &state, const PauliObservable &obs,
                                 std::uint64_t shots, std::uint64_t seed);

}  // namespace pqk
