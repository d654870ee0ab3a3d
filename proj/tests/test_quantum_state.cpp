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
#include <vector>

#include "pqk/errors.hpp"
#include "pqk/quantum_state.hpp"
#include "pqk/random.hpp"
#include "pqk/validation/oracles.hpp"

namespace pqk {
namespace {

using validation::dense_gate_matrix;
using validation::dense_run;
using validation::to_eigen;

constexpr double kPi = std::numbers::pi;

double max_diff(const Statevector &state, const Eigen::VectorXcd &ref) {
    return (to_eigen(state) - ref).cwiseAbs().maxCoeff();
}

Statevector bell() { return run_circuit(2, Circuit{Gate::h(0), Gate::cnot(0, 1)}); }

TEST(Statevector, ZeroState) {
    const auto one = new_zero_state(1);
    ASSERT_EQ(one.dimension(), 2u);
    EXPECT_EQ(one[0], Complex(1, 0));
    EXPECT_EQ(one[1], Complex(0, 0));
    const auto two = new_zero_state(2);
    EXPECT_EQ(two.dimension(), 4u);
    EXPECT_EQ(two[0], Complex(1, 0));
    for (std::size_t k = 1; k < 4; ++k) EXPECT_EQ(two[k], Complex(0, 0));
}

TEST(Statevector, QubitCap) {
    EXPECT_NO_THROW(new_zero_state(kMaxQubits));
    EXPECT_THROW(new_zero_state(kMaxQubits + 1), Error);
    EXPECT_THROW(new_zero_state(0), Error);
}

TEST(Statevector, FromAmplitudesValidates) {
    EXPECT_THROW(Statevector::from_amplitudes({1.0, 1.0}), Error);
    EXPECT_THROW(Statevector::from_amplitudes({1.0, 0.0, 0.0}), Error);
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NO_THROW(Statevector::from_amplitudes({r, Complex(0, r)}));
}

TEST(Gates, RxZeroIsIdentity) {
    SeededRng rng(5);
    const auto state = validation::random_state(3, rng);
    for (int q = 0; q < 3; ++q) {
        EXPECT_EQ(apply_gate(state, Gate::rx(q, 0.0)), state);
    }
}

TEST(Gates, CnotTruthTable) {
    // |10>: qubit 0 is the most significant bit, so index 2.
    const auto s10 = run_circuit(2, Circuit{Gate::rx(0, kPi)});
    const auto out = apply_gate(s10, Gate::cnot(0, 1));
    EXPECT_NEAR(std::abs(out[3]), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(out[2]), 0.0, 1e-15);
}

TEST(Gates, RxPiOnZero) {
    const auto out = run_circuit(1, Circuit{Gate::rx(0, kPi)});
    EXPECT_NEAR(std::abs(out[0]), 0.0, 1e-15);
    EXPECT_NEAR(out[1].real(), 0.0, 1e-15);
    EXPECT_NEAR(out[1].imag(), -1.0, 1e-15);
    // Against exp(-i pi X / 2) built by the generic matrix exponential.
    Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(2);
    zero(0) = 1.0;
    EXPECT_LT(max_diff(out, dense_gate_matrix(Gate::rx(0, kPi), 1) * zero), 1e-12);
}

TEST(Gates, EveryKindMatchesDenseMatrix) {
    SeededRng rng(11);
    const Circuit gates{Gate::rx(1, 0.3),   Gate::ry(0, -1.1), Gate::rz(2, 2.5),   Gate::h(1),
                        Gate::s_dag(2),     Gate::phase(0, 0.7), Gate::cnot(2, 0), Gate::rzz(0, 2, 1.9)};
    for (const auto &gate : gates) {
        const auto state = validation::random_state(3, rng);
        const Eigen::VectorXcd expected = dense_gate_matrix(gate, 3) * to_eigen(state);
        EXPECT_LT(max_diff(apply_gate(state, gate), expected), 1e-12) << gate_name(gate.kind);
    }
}

TEST(Gates, InvalidQubitsRejected) {
    auto state = new_zero_state(2);
    EXPECT_THROW(state.apply(Gate::rx(2, 0.1)), Error);
    EXPECT_THROW(state.apply(Gate::rx(-1, 0.1)), Error);
    EXPECT_THROW(state.apply(Gate::cnot(1, 1)), Error);
}

TEST(Gates, NormPreserved) {
    SeededRng rng(3);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(4));
        auto state = validation::random_state(n, rng);
        state.apply(validation::random_gate(n, rng));
        EXPECT_NEAR(state.norm_squared(), 1.0, 1e-10);
    }
}

TEST(RunCircuit, EmptyCircuit) {
    const auto out = run_circuit(3, Circuit{});
    EXPECT_EQ(out, new_zero_state(3));
}

TEST(RunCircuit, BellState) {
    const auto out = bell();
    const double r = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(out[0].real(), r, 1e-15);
    EXPECT_NEAR(out[3].real(), r, 1e-15);
    EXPECT_NEAR(std::abs(out[1]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out[2]), 0.0, 1e-15);
}

TEST(RunCircuit, RandomCircuitMatchesDenseProduct) {
    SeededRng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const auto circuit = validation::random_circuit(3, 10, rng);
        EXPECT_LT(max_diff(run_circuit(3, circuit), dense_run(3, circuit)), 1e-12);
    }
}

TEST(ReducedDensityMatrix, ProductState) {
    const auto state = run_circuit(2, Circuit{Gate::h(1)});  // |0> (x) |+>
    const std::vector<int> keep{1};
    const auto rho = reduced_density_matrix(state, keep);
    for (std::size_t r = 0; r < 2; ++r) {
        for (std::size_t c = 0; c < 2; ++c) {
            EXPECT_NEAR(rho.at(r, c).real(), 0.5, 1e-15);
            EXPECT_NEAR(rho.at(r, c).imag(), 0.0, 1e-15);
        }
    }
}

TEST(ReducedDensityMatrix, BellMarginal) {
    const std::vector<int> keep{0};
    const auto rho = reduced_density_matrix(bell(), keep);
    EXPECT_NEAR(rho.at(0, 0).real(), 0.5, 1e-15);
    EXPECT_NEAR(rho.at(1, 1).real(), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(rho.at(0, 1)), 0.0, 1e-15);
    EXPECT_NEAR(rho.purity(), 0.5, 1e-15);
}

TEST(ReducedDensityMatrix, MatchesDensePartialTrace) {
    SeededRng rng(23);
    const std::vector<int> keep{0, 2};
    for (int trial = 0; trial < 10; ++trial) {
        const auto state = validation::random_state(3, rng);
        const Eigen::VectorXcd psi = to_eigen(state);
        const Eigen::MatrixXcd expected = validation::dense_partial_trace(psi * psi.adjoint(), 3, keep);
        const auto rho = reduced_density_matrix(state, keep);
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 4; ++c) {
                EXPECT_LT(std::abs(rho.at(r, c) - expected(r, c)), 1e-12);
            }
        }
        EXPECT_LT(rho.max_hermitian_deviation(), 1e-12);
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
        EXPECT_GT(rho.min_eigenvalue(), -1e-12);
    }
}

TEST(ReducedDensityMatrix, KeepOrderingAndValidation) {
    const auto state = run_circuit(2, Circuit{Gate::rx(0, kPi)});  // |10>
    const std::vector<int> reversed{1, 0};
    const auto rho = reduced_density_matrix(state, reversed);
    EXPECT_NEAR(rho.at(1, 1).real(), 1.0, 1e-15);  // |01> in (q1, q0) order
    const std::vector<int> duplicate{0, 0};
    EXPECT_THROW(reduced_density_matrix(state, duplicate), Error);
    const std::vector<int> out_of_range{2};
    EXPECT_THROW(reduced_density_matrix(state, out_of_range), Error);
}

TEST(PauliExpectation, BasicValues) {
    const auto rho0 = DensityMatrix::pure(new_zero_state(1));
    EXPECT_DOUBLE_EQ(pauli_expectation(rho0, PauliObservable::parse({0}, "Z")), 1.0);
    EXPECT_DOUBLE_EQ(pauli_expectation(rho0, PauliObservable::parse({0}, "X")), 0.0);
    const std::vector<int> both{0, 1};
    const auto rho_bell = reduced_density_matrix(bell(), both);
    EXPECT_NEAR(pauli_expectation(rho_bell, PauliObservable::parse({0, 1}, "ZZ")), 1.0, 1e-15);
    EXPECT_NEAR(pauli_expectation(rho_bell, PauliObservable::parse({0, 1}, "XX")), 1.0, 1e-15);
    EXPECT_NEAR(pauli_expectation(rho_bell, PauliObservable::parse({0, 1}, "YY")), -1.0, 1e-15);
}

TEST(PauliExpectation, MatchesDenseTrace) {
    SeededRng rng(29);
    const std::vector<int> keep{2, 0};
    for (const char *letters : {"XY", "ZZ", "YX", "XZ"}) {
        const auto state = validation::random_state(3, rng);
        const auto rho = reduced_density_matrix(state, keep);
        const auto obs = PauliObservable::parse(keep, letters);
        const Eigen::VectorXcd psi = to_eigen(state);
        const Eigen::MatrixXcd sub = validation::dense_partial_trace(psi * psi.adjoint(), 3, keep);
        const double expected = (validation::dense_pauli(obs) * sub).trace().real();
        EXPECT_NEAR(pauli_expectation(rho, obs), expected, 1e-12) << letters;
    }
}

TEST(PauliExpectation, SupportMustMatch) {
    const std::vector<int> keep{0};
    const auto rho = reduced_density_matrix(bell(), keep);
    EXPECT_THROW(pauli_expectation(rho, PauliObservable::parse({1}, "Z")), Error);
    EXPECT_THROW(PauliObservable::parse({0, 0}, "ZZ"), Error);
    EXPECT_THROW(PauliObservable::parse({0}, "Q"), Error);
}

TEST(SampledExpectation, DeterministicOutcomes) {
    const auto zero = new_zero_state(1);
    for (std::uint64_t seed : {0ULL, 1ULL, 99ULL}) {
        EXPECT_EQ(sampled_pauli_expectation(zero, PauliObservable::parse({0}, "Z"), 17, seed), 1.0);
    }
    const double r = 1.0 / std::sqrt(2.0);
    const auto plus_i = Statevector::from_amplitudes({r, Complex(0, r)});
    for (std::uint64_t shots : {1ULL, 10ULL, 1000ULL}) {
        EXPECT_EQ(sampled_pauli_expectation(plus_i, PauliObservable::parse({0}, "Y"), shots, 4), 1.0);
    }
    const auto plus = run_circuit(1, Circuit{Gate::h(0)});
    EXPECT_EQ(sampled_pauli_expectation(plus, PauliObservable::parse({0}, "X"), 64, 4), 1.0);
}

TEST(SampledExpectation, UnbiasedForX) {
    const auto zero = new_zero_state(1);
    const auto obs = PauliObservable::parse({0}, "X");
    const std::uint64_t shots = 4096;
    const int seeds = 200;
    double sum = 0.0;
    for (int s = 0; s < seeds; ++s) sum += sampled_pauli_expectation(zero, obs, shots, derive_seed(8, s));
    EXPECT_LT(std::abs(sum / seeds), 3.0 / std::sqrt(seeds * static_cast<double>(shots)));
}

TEST(SampledExpectation, SameSeedSameEstimate) {
    SeededRng rng(31);
    const auto state = validation::random_state(3, rng);
    const auto obs = PauliObservable::parse({0, 2}, "XY");
    EXPECT_EQ(sampled_pauli_expectation(state, obs, 500, 12), sampled_pauli_expectation(state, obs, 500, 12));
    EXPECT_THROW(sampled_pauli_expectation(state, obs, 0, 12), Error);
}

}  // namespace
}  // namespace pqk
