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

// Dense brute-force references. Everything here is built from explicit
// matrices (gate generators exponentiated with a generic matrix exponential,
// Kronecker embeddings, full density matrices) and shares no code path with
// the statevector simulator or the SMO solver it is used to check.

#include <Eigen/Dense>

#include <cstdint>
#include <span>
#include <vector>

#include "pqk/kernels.hpp"
#include "pqk/quantum_state.hpp"
#include "pqk/random.hpp"

namespace pqk::validation {

/// Unitary of one gate acting on n qubits (qubit 0 = most significant bit),
/// via exp(-i theta G / 2) of the gate's generator G.
Eigen::MatrixXcd dense_gate_matrix(const Gate &gate, int n_qubits);

/// Product of dense gate matrices applied to |0...0>.
Eigen::VectorXcd dense_run(int n_qubits, std::span<const Gate> circuit);

Eigen::VectorXcd to_eigen(const Statevector &state);

/// Tr over every qubit not in keep of the full 2^n x 2^n density matrix.
Eigen::MatrixXcd dense_partial_trace(const Eigen::MatrixXcd &rho, int n_qubits, std::span<const int> keep);

/// Kronecker product of the 2x2 Pauli matrices, first letter most significant.
Eigen::MatrixXcd dense_pauli(const PauliObservable &obs);

/// Uniformly random gate from the full alphabet on n qubits.
Gate random_gate(int n_qubits, SeededRng &rng);
Circuit random_circuit(int n_qubits, int gate_count, SeededRng &rng);
/// Normalized state with i.i.d. Gaussian real and imaginary parts.
Statevector random_state(int n_qubits, SeededRng &rng);
double standard_normal(SeededRng &rng);

struct QpSolution {
    std::vector<double> alphas;
    double bias = 0.0;
    double objective = 0.0;
    std::size_t iterations = 0;
};

/// Box- and equality-constrained SVM dual solved by accelerated projected
/// gradient ascent with restarts. The projection onto
/// {0 <= a <= C, y.a = 0} is found by bisection on its multiplier.
QpSolution solve_dual_qp(const GramMatrix &gram, std::span<const int> labels, double C,
                         std::size_t max_iterations = 2'000'000);

}  // namespace pqk::validation
