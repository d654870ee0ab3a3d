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

#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "pqk/quantum_state.hpp"

namespace pqk {

using FeatureVector = std::vector<double>;

enum class FeatureMapFamily { RotX, ThreeD, ZZ, IQP, Trotterized };

/// Canonical names: "RotX", "ThreeD", "ZZ", "IQP", "Trotterized".
std::string_view family_name(FeatureMapFamily family);
/// Inverse of family_name; throws ConfigError on an unknown name.
FeatureMapFamily parse_family(std::string_view name);

struct FeatureMapSpec {
    FeatureMapFamily family = FeatureMapFamily::RotX;
    int n_qubits = 6;
    bool with_cnot_ring = false;  // ThreeD only
    int reps = 0;                 // ZZ / IQP repetitions, Trotterized steps; 0 selects the family default
    double evolution_time = std::numbers::pi / 2.0;  // Trotterized only

    /// reps with the family default substituted (ZZ 2, IQP 2, Trotterized 3).
    int effective_reps() const;

    /// Short human-readable tag, e.g. "ThreeD+ring" or "ZZ(reps=2)".
    std::string describe() const;

    bool operator==(const FeatureMapSpec &) const = default;
};

int default_reps(FeatureMapFamily family);

/// RX(2 x_j) on every qubit, i.e. exp(-i X_j x_j).
Circuit build_rotx_circuit(std::span<const double> x);

/// Per qubit RX(x_j) RY(x_j) RZ(x_j); optionally followed by the CNOT ring
/// CNOT(j, (j+1) mod n).
Circuit build_3d_circuit(std::span<const double> x, bool with_cnot_ring);

/// ZZ feature map with full entanglement.
Circuit build_zz_circuit(std::span<const double> x, int reps);

/// H layer, RZ(2 x_j) layer, RZZ(2 x_i x_j) on every pair i<j; repeated.
Circuit build_iqp_circuit(std::span<const double> x, int reps);

/// RX(2 x_j) upload followed by `steps` first-order Trotter steps of the
/// nearest-neighbour XX+YY+ZZ chain for total time evolution_time.
Circuit build_trotter_circuit(std::span<const double> x, int steps, double evolution_time);

Circuit build_circuit(const FeatureMapSpec &spec, std::span<const double> x);

/// |phi(x)> = U(x)|0...0>
Statevector encode(const FeatureMapSpec &spec, std::span<const double> x);

}  // namespace pqk
