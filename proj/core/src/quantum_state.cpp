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

#include "pqk/quantum_state.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pqk/errors.hpp"
#include "pqk/random.hpp"

namespace pqk {
namespace {

constexpr double kNormTolerance = 1e-10;

using Matrix2 = std::array<Complex, 4>;  // row-major

std::size_t bit_of(int n_qubits, int qubit) { return std::size_t{1} << (n_qubits - 1 - qubit); }

Matrix2 single_qubit_matrix(const Gate &gate) {
    const double c = std::cos(gate.angle / 2.0);
    const double s = std::sin(gate.angle / 2.0);
    const Complex i{0.0, 1.0};
    switch (gate.kind) {
        case GateKind::RX:
            return {c, -i * s, -i * s, c};
        case GateKind::RY:
            return {c, -s, s, c};
        case GateKind::RZ:
            return {std::polar(1.0, -gate.angle / 2.0), 0.0, 0.0, std::polar(1.0, gate.angle / 2.0)};
        case GateKind::H: {
            const double r = 1.0 / std::sqrt(2.0);
            return {r, r, r, -r};
        }
        case GateKind::S_DAG:
            return {1.0, 0.0, 0.0, -i};
        case GateKind::PHASE:
            return {1.0, 0.0, 0.0, std::polar(1.0, gate.angle)};
        default:
            throw Error(ErrorCategory::Internal, "not a single-qubit gate");
    }
}

void check_gate(const Gate &gate, int n_qubits) {
    const bool two_qubit = gate.kind == GateKind::CNOT || gate.kind == GateKind::RZZ;
    const int expected = two_qubit ? 2 : 1;
    if (gate.arity != expected) {
        throw UsageError(std::string(gate_name(gate.kind)) + " takes " + std::to_string(expected) + " qubit(s)");
    }
    for (int q : gate.qubits()) {
        if (q < 0 || q >= n_qubits) {
            throw UsageError(std::string(gate_name(gate.kind)) + ": qubit index " + std::to_string(q) +
                             " out of range for " + std::to_string(n_qubits) + " qubits");
        }
    }
    if (two_qubit && gate.targets[0] == gate.targets[1]) {
        throw UsageError(std::string(gate_name(gate.kind)) + ": qubit indices must be distinct");
    }
}

void check_qubit_list(std::span<const int> qubits, int n_qubits, const char *what) {
    if (qubits.empty()) {
        throw UsageError(std::string(what) + ": qubit list is empty");
    }
    std::vector<bool> seen(static_cast<std::size_t>(std::max(n_qubits, 0)), false);
    for (int q : qubits) {
        if (q < 0 || q >= n_qubits) {
            throw UsageError(std::string(what) + ": qubit index " + std::to_string(q) + " out of range");
        }
        if (seen[static_cast<std::size_t>(q)]) {
            throw UsageError(std::string(what) + ": duplicate qubit index " + std::to_string(q));
        }
        seen[static_cast<std::size_t>(q)] = true;
    }
}

}  // namespace

const char *gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::RX:
            return "RX";
        case GateKind::RY:
            return "RY";
        case GateKind::RZ:
            return "RZ";
        case GateKind::H:
            return "H";
        case GateKind::S_DAG:
            return "S_DAG";
        case GateKind::PHASE:
            return "PHASE";
        case GateKind::CNOT:
            return "CNOT";
        case GateKind::RZZ:
            return "RZZ";
    }
    return "?";
}

Statevector Statevector::zero(int n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw ConfigError("n_qubits must be in [1, " + std::to_string(kMaxQubits) + "], got " +
                          std::to_string(n_qubits));
    }
    std::vector<Complex> amplitudes(std::size_t{1} << n_qubits, Complex{0.0, 0.0});
    amplitudes[0] = 1.0;
    return Statevector(n_qubits, std::move(amplitudes));
}

Statevector Statevector::from_amplitudes(std::vector<Complex> amplitudes) {
    const std::size_t dim = amplitudes.size();
    if (dim < 2 || !std::has_single_bit(dim)) {
        throw UsageError("amplitude count must be a power of two >= 2");
    }
    const int n = std::countr_zero(dim);
    if (n > kMaxQubits) {
        throw ConfigError("statevector exceeds " + std::to_string(kMaxQubits) + " qubits");
    }
    Statevector state(n, std::move(amplitudes));
    if (std::abs(state.norm_squared() - 1.0) > kNormTolerance) {
        throw UsageError("statevector is not normalized");
    }
    return state;
}

double Statevector::norm_squared() const {
    double total = 0.0;
    for (const Complex &a : amplitudes_) {
        total += std::norm(a);
    }
    return total;
}

Complex Statevector::inner(const Statevector &other) const {
    if (other.n_qubits_ != n_qubits_) {
        throw UsageError("inner product of states with different qubit counts");
    }
    Complex total{0.0, 0.0};
    for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
        total += std::conj(amplitudes_[k]) * other.amplitudes_[k];
    }
    return total;
}

void Statevector::apply(const Gate &gate) {
    check_gate(gate, n_qubits_);
    const std::size_t dim = amplitudes_.size();

    if (gate.kind == GateKind::CNOT) {
        const std::size_t control = bit_of(n_qubits_, gate.targets[0]);
        const std::size_t target = bit_of(n_qubits_, gate.targets[1]);
        for (std::size_t k = 0; k < dim; ++k) {
            if ((k & control) && !(k & target)) {
                std::swap(amplitudes_[k], amplitudes_[k | target]);
            }
        }
        return;
    }
    if (gate.kind == GateKind::RZZ) {
        const std::size_t a = bit_of(n_qubits_, gate.targets[0]);
        const std::size_t b = bit_of(n_qubits_, gate.targets[1]);
        const Complex same = std::polar(1.0, -gate.angle / 2.0);
        const Complex differ = std::polar(1.0, gate.angle / 2.0);
        for (std::size_t k = 0; k < dim; ++k) {
            const bool parity = ((k & a) != 0) != ((k & b) != 0);
            amplitudes_[k] *= parity ? differ : same;
        }
        return;
    }

    const Matrix2 m = single_qubit_matrix(gate);
    const std::size_t mask = bit_of(n_qubits_, gate.targets[0]);
    for (std::size_t k = 0; k < dim; ++k) {
        if (k & mask) {
            continue;
        }
        const Complex a0 = amplitudes_[k];
        const Complex a1 = amplitudes_[k | mask];
        amplitudes_[k] = m[0] * a0 + m[1] * a1;
        amplitudes_[k | mask] = m[2] * a0 + m[3] * a1;
    }
}

Statevector new_zero_state(int n_qubits) { return Statevector::zero(n_qubits); }

Statevector apply_gate(Statevector state, const Gate &gate) {
    state.apply(gate);
    return state;
}

Statevector run_circuit(int n_qubits, std::span<const Gate> circuit) {
    Statevector state = Statevector::zero(n_qubits);
    for (const Gate &gate : circuit) {
        state.apply(gate);
    }
    return state;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix DensityMatrix::from_entries(std::vector<int> qubits, std::vector<Complex> row_major) {
    if (qubits.empty() || qubits.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw UsageError("density matrix qubit count out of range");
    }
    const std::size_t dim = std::size_t{1} << qubits.size();
    if (row_major.size() != dim * dim) {
        throw UsageError("density matrix entry count does not match 2^m x 2^m");
    }
    DensityMatrix rho(std::move(qubits), std::move(row_major));
    if (rho.max_hermitian_deviation() > kNormTolerance) {
        throw UsageError("density matrix is not Hermitian");
    }
    if (std::abs(rho.trace() - Complex{1.0, 0.0}) > kNormTolerance) {
        throw UsageError("density matrix trace is not 1");
    }
    return rho;
}

DensityMatrix DensityMatrix::pure(const Statevector &state) {
    std::vector<int> all(static_cast<std::size_t>(state.n_qubits()));
    std::iota(all.begin(), all.end(), 0);
    return reduced_density_matrix(state, all);
}

Complex DensityMatrix::trace() const {
    Complex total{0.0, 0.0};
    for (std::size_t k = 0; k < dimension(); ++k) {
        total += at(k, k);
    }
    return total;
}

double DensityMatrix::purity() const {
    // Tr(rho^2) = sum_ij |rho_ij|^2 for Hermitian rho.
    double total = 0.0;
    for (const Complex &e : entries_) {
        total += std::norm(e);
    }
    return total;
}

double DensityMatrix::max_hermitian_deviation() const {
    double worst = 0.0;
    const std::size_t dim = dimension();
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = r; c < dim; ++c) {
            worst = std::max(worst, std::abs(at(r, c) - std::conj(at(c, r))));
        }
    }
    return worst;
}

double DensityMatrix::min_eigenvalue() const {
    const auto dim = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) {
            m(r, c) = at(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

DensityMatrix reduced_density_matrix(const Statevector &state, std::span<const int> keep) {
    const int n = state.n_qubits();
    check_qubit_list(keep, n, "reduced_density_matrix");

    const int m = static_cast<int>(keep.size());
    std::vector<bool> kept(static_cast<std::size_t>(n), false);
    for (int q : keep) {
        kept[static_cast<std::size_t>(q)] = true;
    }
    std::vector<int> env;
    for (int q = 0; q < n; ++q) {
        if (!kept[static_cast<std::size_t>(q)]) {
            env.push_back(q);
        }
    }

    const std::size_t sub_dim = std::size_t{1} << m;
    const std::size_t env_dim = std::size_t{1} << env.size();

    // Regroup amplitudes as an env_dim x sub_dim matrix A, then rho = A^T conj(A).
    std::vector<Complex> grouped(env_dim * sub_dim);
    for (std::size_t index = 0; index < state.dimension(); ++index) {
        std::size_t k = 0;
        for (int t = 0; t < m; ++t) {
            k = (k << 1) | ((index & bit_of(n, keep[static_cast<std::size_t>(t)])) ? 1U : 0U);
        }
        std::size_t e = 0;
        for (int q : env) {
            e = (e << 1) | ((index & bit_of(n, q)) ? 1U : 0U);
        }
        grouped[e * sub_dim + k] = state[index];
    }

    std::vector<Complex> rho(sub_dim * sub_dim, Complex{0.0, 0.0});
    for (std::size_t r = 0; r < sub_dim; ++r) {
        for (std::size_t c = r; c < sub_dim; ++c) {
            Complex total{0.0, 0.0};
            for (std::size_t e = 0; e < env_dim; ++e) {
                total += grouped[e * sub_dim + r] * std::conj(grouped[e * sub_dim + c]);
            }
            rho[r * sub_dim + c] = total;
            rho[c * sub_dim + r] = std::conj(total);
        }
        rho[r * sub_dim + r] = Complex{rho[r * sub_dim + r].real(), 0.0};
    }
    return DensityMatrix(std::vector<int>(keep.begin(), keep.end()), std::move(rho));
}

// ---------------------------------------------------------------------------
// Pauli observables

char pauli_letter(Pauli p) {
    switch (p) {
        case Pauli::X:
            return 'X';
        case Pauli::Y:
            return 'Y';
        case Pauli::Z:
            return 'Z';
    }
    return '?';
}

PauliObservable::PauliObservable(std::vector<int> support, std::vector<Pauli> letters)
    : support_(std::move(support)), letters_(std::move(letters)) {
    if (support_.empty() || support_.size() != letters_.size()) {
        throw UsageError("Pauli observable needs one letter per support qubit");
    }
    std::vector<int> sorted = support_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.front() < 0) {
        throw UsageError("Pauli observable support must be distinct non-negative indices");
    }
}

PauliObservable PauliObservable::parse(std::vector<int> support, std::string_view letters) {
    std::vector<Pauli> parsed;
    for (char ch : letters) {
        switch (ch) {
            case 'X':
                parsed.push_back(Pauli::X);
                break;
            case 'Y':
                parsed.push_back(Pauli::Y);
                break;
            case 'Z':
                parsed.push_back(Pauli::Z);
                break;
            default:
                throw UsageError(std::string("unknown Pauli letter '") + ch + "'");
        }
    }
    return PauliObservable(std::move(support), std::move(parsed));
}

std::string PauliObservable::label() const {
    std::ostringstream out;
    for (std::size_t t = 0; t < letters_.size(); ++t) {
        out << pauli_letter(letters_[t]) << support_[t];
    }
    return out.str();
}

double pauli_expectation(const DensityMatrix &rho, const PauliObservable &obs) {
    if (obs.support() != rho.qubits()) {
        throw UsageError("observable support " + obs.label() + " does not match the density matrix qubits");
    }
    const int m = rho.m_qubits();
    const std::size_t dim = rho.dimension();

    std::size_t flip = 0;
    for (int t = 0; t < m; ++t) {
        if (obs.letters()[static_cast<std::size_t>(t)] != Pauli::Z) {
            flip |= std::size_t{1} << (m - 1 - t);
        }
    }

    // Tr(O rho) = sum_b O[b^flip, b] * rho[b, b^flip]
    Complex total{0.0, 0.0};
    for (std::size_t b = 0; b < dim; ++b) {
        const std::size_t a = b ^ flip;
        Complex element{1.0, 0.0};
        for (int t = 0; t < m; ++t) {
            const bool bit_b = (b >> (m - 1 - t)) & 1U;
            switch (obs.letters()[static_cast<std::size_t>(t)]) {
                case Pauli::X:
                    break;
                case Pauli::Y:
                    // <0|Y|1> = -i, <1|Y|0> = +i
                    element *= bit_b ? Complex{0.0, -1.0} : Complex{0.0, 1.0};
                    break;
                case Pauli::Z:
                    if (bit_b) {
                        element = -element;
                    }
                    break;
            }
        }
        total += element * rho.at(b, a);
    }
    return std::clamp(total.real(), -1.0, 1.0);
}

double sampled_pauli_expectation(const Statevector &state, const PauliObservable &obs, std::uint64_t shots,
                                 std::uint64_t seed) {
    if (shots == 0) {
        throw UsageError("shots must be at least 1");
    }
    const int n = state.n_qubits();
    check_qubit_list(obs.support(), n, "sampled_pauli_expectation");

    Statevector rotated = state;
    for (std::size_t t = 0; t < obs.support().size(); ++t) {
        const int q = obs.support()[t];
        switch (obs.letters()[t]) {
            case Pauli::X:
                rotated.apply(Gate::h(q));
                break;
            case Pauli::Y:
                rotated.apply(Gate::s_dag(q));
                rotated.apply(Gate::h(q));
                break;
            case Pauli::Z:
                break;
        }
    }

    // Only the parity of the measured bits matters, but outcomes are drawn
    // over the full 2^m marginal so the sampling path is the literal one.
    const int m = static_cast<int>(obs.support().size());
    std::vector<double> marginal(std::size_t{1} << m, 0.0);
    for (std::size_t index = 0; index < rotated.dimension(); ++index) {
        std::size_t outcome = 0;
        for (int q : obs.support()) {
            outcome = (outcome << 1) | ((index & bit_of(n, q)) ? 1U : 0U);
        }
        marginal[outcome] += std::norm(rotated[index]);
    }

    std::vector<double> cdf(marginal.size());
    std::partial_sum(marginal.begin(), marginal.end(), cdf.begin());
    std::size_t last_nonzero = 0;
    for (std::size_t k = 0; k < marginal.size(); ++k) {
        if (marginal[k] > 0.0) {
            last_nonzero = k;
        }
    }
    const double total_mass = cdf.back();

    SeededRng rng(seed);
    std::int64_t parity_sum = 0;
    for (std::uint64_t shot = 0; shot < shots; ++shot) {
        const double u = rng.uniform() * total_mass;
        std::size_t outcome = last_nonzero;
        for (std::size_t k = 0; k < cdf.size(); ++k) {
            if (u < cdf[k]) {
                outcome = k;
                break;
            }
        }
        parity_sum += (std::popcount(outcome) & 1U) ? -1 : 1;
    }
    return static_cast<double>(parity_sum) / static_cast<double>(shots);
}

}  // namespace pqk
