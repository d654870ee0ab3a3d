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

#include "pqk/validation/oracles.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace pqk::validation {
namespace {

using Eigen::Matrix2cd;
using Eigen::MatrixXcd;

const Complex kI{0.0, 1.0};

Matrix2cd pauli_x() { return (Matrix2cd() << 0, 1, 1, 0).finished(); }
Matrix2cd pauli_y() { return (Matrix2cd() << 0, -kI, kI, 0).finished(); }
Matrix2cd pauli_z() { return (Matrix2cd() << 1, 0, 0, -1).finished(); }
Matrix2cd projector_one() { return (Matrix2cd() << 0, 0, 0, 1).finished(); }
Matrix2cd projector_zero() { return (Matrix2cd() << 1, 0, 0, 0).finished(); }

MatrixXcd local_matrix(const Gate &gate) {
    const double theta = gate.angle;
    switch (gate.kind) {
        case GateKind::RX:
            return MatrixXcd((-kI * (theta / 2.0) * pauli_x()).exp());
        case GateKind::RY:
            return MatrixXcd((-kI * (theta / 2.0) * pauli_y()).exp());
        case GateKind::RZ:
            return MatrixXcd((-kI * (theta / 2.0) * pauli_z()).exp());
        case GateKind::H:
            return MatrixXcd((pauli_x() + pauli_z()) / std::sqrt(2.0));
        case GateKind::S_DAG:
            return MatrixXcd((-kI * (std::numbers::pi / 2.0) * projector_one()).exp());
        case GateKind::PHASE:
            return MatrixXcd((kI * theta * projector_one()).exp());
        case GateKind::CNOT: {
            const MatrixXcd id = Matrix2cd::Identity();
            return Eigen::kroneckerProduct(projector_zero(), id).eval() +
                   Eigen::kroneckerProduct(projector_one(), pauli_x()).eval();
        }
        case GateKind::RZZ: {
            const MatrixXcd zz = Eigen::kroneckerProduct(pauli_z(), pauli_z()).eval();
            return MatrixXcd((-kI * (theta / 2.0) * zz).exp());
        }
    }
    throw std::logic_error("unknown gate");
}

int bit(std::size_t index, int n_qubits, int qubit) { return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1U); }

// Embeds a 2^k x 2^k operator acting on `qubits` (first = most significant)
// into the full n-qubit space.
MatrixXcd embed(const MatrixXcd &local, std::span<const int> qubits, int n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    MatrixXcd full = MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    std::size_t support_mask = 0;
    for (int q : qubits) {
        support_mask |= std::size_t{1} << (n_qubits - 1 - q);
    }
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            if ((r & ~support_mask) != (c & ~support_mask)) {
                continue;
            }
            std::size_t lr = 0;
            std::size_t lc = 0;
            for (int q : qubits) {
                lr = (lr << 1) | static_cast<std::size_t>(bit(r, n_qubits, q));
                lc = (lc << 1) | static_cast<std::size_t>(bit(c, n_qubits, q));
            }
            full(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                local(static_cast<Eigen::Index>(lr), static_cast<Eigen::Index>(lc));
        }
    }
    return full;
}

double objective_of(const Eigen::MatrixXd &q, const Eigen::VectorXd &a) { return 0.5 * a.dot(q * a) - a.sum(); }

Eigen::VectorXd project(const Eigen::VectorXd &v, const Eigen::VectorXd &y, double C) {
    auto at = [&](double lambda) {
        return Eigen::VectorXd((v - lambda * y).cwiseMax(0.0).cwiseMin(C));
    };
    double lo = -(v.cwiseAbs().maxCoeff() + C + 1.0);
    double hi = -lo;
    // y.a(lambda) is non-increasing in lambda.
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (y.dot(at(mid)) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return at(0.5 * (lo + hi));
}

}  // namespace

Eigen::MatrixXcd dense_gate_matrix(const Gate &gate, int n_qubits) {
    const auto qubits = gate.qubits();
    return embed(local_matrix(gate), qubits, n_qubits);
}

Eigen::VectorXcd dense_run(int n_qubits, std::span<const Gate> circuit) {
    const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
    MatrixXcd unitary = MatrixXcd::Identity(dim, dim);
    for (const Gate &gate : circuit) {
        unitary = dense_gate_matrix(gate, n_qubits) * unitary;
    }
    Eigen::VectorXcd zero = Eigen::VectorXcd::Zero(dim);
    zero(0) = 1.0;
    return unitary * zero;
}

Eigen::VectorXcd to_eigen(const Statevector &state) {
    Eigen::VectorXcd v(static_cast<Eigen::Index>(state.dimension()));
    for (std::size_t k = 0; k < state.dimension(); ++k) {
        v(static_cast<Eigen::Index>(k)) = state[k];
    }
    return v;
}

Eigen::MatrixXcd dense_partial_trace(const Eigen::MatrixXcd &rho, int n_qubits, std::span<const int> keep) {
    const int m = static_cast<int>(keep.size());
    const std::size_t full_dim = std::size_t{1} << n_qubits;
    const std::size_t sub_dim = std::size_t{1} << m;
    MatrixXcd out = MatrixXcd::Zero(static_cast<Eigen::Index>(sub_dim), static_cast<Eigen::Index>(sub_dim));
    // Sum rho[r, c] over all pairs whose traced-out bits agree.
    for (std::size_t r = 0; r < full_dim; ++r) {
        for (std::size_t c = 0; c < full_dim; ++c) {
            bool same_env = true;
            for (int q = 0; q < n_qubits && same_env; ++q) {
                if (std::find(keep.begin(), keep.end(), q) == keep.end() &&
                    bit(r, n_qubits, q) != bit(c, n_qubits, q)) {
                    same_env = false;
                }
            }
            if (!same_env) {
                continue;
            }
            std::size_t lr = 0;
            std::size_t lc = 0;
            for (int q : keep) {
                lr = (lr << 1) | static_cast<std::size_t>(bit(r, n_qubits, q));
                lc = (lc << 1) | static_cast<std::size_t>(bit(c, n_qubits, q));
            }
            out(static_cast<Eigen::Index>(lr), static_cast<Eigen::Index>(lc)) +=
                rho(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
        }
    }
    return out;
}

Eigen::MatrixXcd dense_pauli(const PauliObservable &obs) {
    MatrixXcd out = MatrixXcd::Identity(1, 1);
    for (Pauli p : obs.letters()) {
        const Matrix2cd factor = p == Pauli::X ? pauli_x() : p == Pauli::Y ? pauli_y() : pauli_z();
        out = Eigen::kroneckerProduct(out, factor).eval();
    }
    return out;
}

double standard_normal(SeededRng &rng) {
    // Box-Muller; 1 - u keeps the logarithm finite.
    const double u = 1.0 - rng.uniform();
    const double v = rng.uniform();
    return std::sqrt(-2.0 * std::log(u)) * std::cos(2.0 * std::numbers::pi * v);
}

Statevector random_state(int n_qubits, SeededRng &rng) {
    std::vector<Complex> amplitudes(std::size_t{1} << n_qubits);
    double norm = 0.0;
    for (auto &a : amplitudes) {
        a = Complex{standard_normal(rng), standard_normal(rng)};
        norm += std::norm(a);
    }
    for (auto &a : amplitudes) {
        a /= std::sqrt(norm);
    }
    return Statevector::from_amplitudes(std::move(amplitudes));
}

Gate random_gate(int n_qubits, SeededRng &rng) {
    static constexpr GateKind kinds[] = {GateKind::RX, GateKind::RY,    GateKind::RZ,   GateKind::H,
                                         GateKind::S_DAG, GateKind::PHASE, GateKind::CNOT, GateKind::RZZ};
    const std::uint64_t choices = n_qubits >= 2 ? 8 : 6;
    const GateKind kind = kinds[rng.below(choices)];
    const double angle = (rng.uniform() * 4.0 - 2.0) * std::numbers::pi;
    const int a = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_qubits)));
    switch (kind) {
        case GateKind::CNOT:
        case GateKind::RZZ: {
            int b = static_cast<int>(rng.below(static_cast<std::uint64_t>(n_qubits - 1)));
            if (b >= a) {
                ++b;
            }
            return kind == GateKind::CNOT ? Gate::cnot(a, b) : Gate::rzz(a, b, angle);
        }
        case GateKind::H:
            return Gate::h(a);
        case GateKind::S_DAG:
            return Gate::s_dag(a);
        default:
            return Gate{kind, {a, 0}, 1, angle};
    }
}

Circuit random_circuit(int n_qubits, int gate_count, SeededRng &rng) {
    Circuit circuit;
    for (int g = 0; g < gate_count; ++g) {
        circuit.push_back(random_gate(n_qubits, rng));
    }
    return circuit;
}

QpSolution solve_dual_qp(const GramMatrix &gram, std::span<const int> labels, double C,
                         std::size_t max_iterations) {
    const auto n = static_cast<Eigen::Index>(labels.size());
    Eigen::VectorXd y(n);
    Eigen::MatrixXd q(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        y(i) = labels[static_cast<std::size_t>(i)];
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            q(i, j) = y(i) * y(j) * gram(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
    const double lipschitz = std::max(eig.eigenvalues().maxCoeff(), 1e-12);
    const double step = 1.0 / lipschitz;

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd previous = x;
    Eigen::VectorXd momentum = x;
    double t = 1.0;
    double f_prev = objective_of(q, x);
    std::size_t iteration = 0;
    std::size_t quiet = 0;
    for (; iteration < max_iterations; ++iteration) {
        const Eigen::VectorXd grad = q * momentum - Eigen::VectorXd::Ones(n);
        x = project(momentum - step * grad, y, C);
        const double f = objective_of(q, x);
        if (f > f_prev && t > 1.0) {
            // Function-value restart; a plain projected-gradient step follows.
            t = 1.0;
            momentum = previous;
            x = previous;
            continue;
        }
        const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        momentum = x + ((t - 1.0) / t_next) * (x - previous);
        const double change = (x - previous).cwiseAbs().maxCoeff();
        previous = x;
        t = t_next;
        f_prev = f;
        quiet = change < 1e-15 ? quiet + 1 : 0;
        if (quiet >= 50) {
            break;
        }
    }

    QpSolution solution;
    solution.iterations = iteration;
    solution.alphas.assign(previous.data(), previous.data() + n);
    solution.objective = -objective_of(q, previous);

    // Bias from the KKT conditions, computed independently of the solver.
    const double tol = 1e-9 * std::max(1.0, C);
    double free_sum = 0.0;
    int free_count = 0;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        double g = 0.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            g += previous(j) * y(j) * gram(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
        }
        const double b = y(i) - g;
        const double a = previous(i);
        if (a > tol && a < C - tol) {
            free_sum += b;
            ++free_count;
        } else if ((a <= tol && y(i) > 0) || (a >= C - tol && y(i) < 0)) {
            lower = std::max(lower, b);
        } else {
            upper = std::min(upper, b);
        }
    }
    if (free_count > 0) {
        solution.bias = free_sum / free_count;
    } else if (std::isfinite(lower) && std::isfinite(upper)) {
        solution.bias = 0.5 * (lower + upper);
    } else {
        solution.bias = std::isfinite(lower) ? lower : upper;
    }
    return solution;
}

}  // namespace pqk::validation
