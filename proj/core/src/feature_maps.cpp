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

#include "pqk/feature_maps.hpp"

#include <cmath>
#include <sstream>

#include "pqk/errors.hpp"

namespace pqk {
namespace {

constexpr double kPi = std::numbers::pi;

int width(std::span<const double> x) { return static_cast<int>(x.size()); }

void require_finite(std::span<const double> x, const char *builder) {
    if (x.empty() || x.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw UsageError(std::string(builder) + ": feature vector length must be in [1, " +
                         std::to_string(kMaxQubits) + "]");
    }
    for (double v : x) {
        if (!std::isfinite(v)) {
            throw UsageError(std::string(builder) + ": non-finite feature value");
        }
    }
}

void require_entangling_width(std::span<const double> x, const char *builder) {
    require_finite(x, builder);
    if (x.size() < 2) {
        throw UsageError(std::string(builder) + ": needs at least 2 qubits");
    }
}

void require_positive(int value, const char *builder, const char *what) {
    if (value < 1) {
        throw UsageError(std::string(builder) + ": " + what + " must be >= 1");
    }
}

}  // namespace

std::string_view family_name(FeatureMapFamily family) {
    switch (family) {
        case FeatureMapFamily::RotX:
            return "RotX";
        case FeatureMapFamily::ThreeD:
            return "ThreeD";
        case FeatureMapFamily::ZZ:
            return "ZZ";
        case FeatureMapFamily::IQP:
            return "IQP";
        case FeatureMapFamily::Trotterized:
            return "Trotterized";
    }
    return "?";
}

FeatureMapFamily parse_family(std::string_view name) {
    for (auto f : {FeatureMapFamily::RotX, FeatureMapFamily::ThreeD, FeatureMapFamily::ZZ, FeatureMapFamily::IQP,
                   FeatureMapFamily::Trotterized}) {
        if (family_name(f) == name) {
            return f;
        }
    }
    throw ConfigError("unknown feature map family '" + std::string(name) +
                      "' (expected RotX, ThreeD, ZZ, IQP or Trotterized)");
}

int default_reps(FeatureMapFamily family) {
    switch (family) {
        case FeatureMapFamily::ZZ:
        case FeatureMapFamily::IQP:
            return 2;
        case FeatureMapFamily::Trotterized:
            return 3;
        default:
            return 1;
    }
}

int FeatureMapSpec::effective_reps() const { return reps > 0 ? reps : default_reps(family); }

std::string FeatureMapSpec::describe() const {
    std::ostringstream out;
    out << family_name(family);
    switch (family) {
        case FeatureMapFamily::ThreeD:
            if (with_cnot_ring) {
                out << "+ring";
            }
            break;
        case FeatureMapFamily::ZZ:
        case FeatureMapFamily::IQP:
            out << "(reps=" << effective_reps() << ")";
            break;
        case FeatureMapFamily::Trotterized:
            out << "(steps=" << effective_reps() << ",t=" << evolution_time << ")";
            break;
        default:
            break;
    }
    return out.str();
}

Circuit build_rotx_circuit(std::span<const double> x) {
    require_finite(x, "RotX");
    Circuit circuit;
    circuit.reserve(x.size());
    for (int j = 0; j < width(x); ++j) {
        circuit.push_back(Gate::rx(j, 2.0 * x[static_cast<std::size_t>(j)]));
    }
    return circuit;
}

Circuit build_3d_circuit(std::span<const double> x, bool with_cnot_ring) {
    if (with_cnot_ring) {
        require_entangling_width(x, "ThreeD");
    } else {
        require_finite(x, "ThreeD");
    }
    const int n = width(x);
    Circuit circuit;
    circuit.reserve(static_cast<std::size_t>(with_cnot_ring ? 4 * n : 3 * n));
    for (int j = 0; j < n; ++j) {
        const double angle = x[static_cast<std::size_t>(j)];
        circuit.push_back(Gate::rx(j, angle));
        circuit.push_back(Gate::ry(j, angle));
        circuit.push_back(Gate::rz(j, angle));
    }
    if (with_cnot_ring) {
        for (int j = 0; j < n; ++j) {
            circuit.push_back(Gate::cnot(j, (j + 1) % n));
        }
    }
    return circuit;
}

Circuit build_zz_circuit(std::span<const double> x, int reps) {
    require_entangling_width(x, "ZZ");
    require_positive(reps, "ZZ", "reps");
    const int n = width(x);
    Circuit circuit;
    for (int r = 0; r < reps; ++r) {
        for (int j = 0; j < n; ++j) {
            circuit.push_back(Gate::h(j));
        }
        for (int j = 0; j < n; ++j) {
            circuit.push_back(Gate::phase(j, 2.0 * x[static_cast<std::size_t>(j)]));
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double coupling =
                    2.0 * (kPi - x[static_cast<std::size_t>(i)]) * (kPi - x[static_cast<std::size_t>(j)]);
                circuit.push_back(Gate::cnot(i, j));
                circuit.push_back(Gate::phase(j, coupling));
                circuit.push_back(Gate::cnot(i, j));
            }
        }
    }
    return circuit;
}

Circuit build_iqp_circuit(std::span<const double> x, int reps) {
    require_entangling_width(x, "IQP");
    require_positive(reps, "IQP", "reps");
    const int n = width(x);
    Circuit circuit;
    for (int r = 0; r < reps; ++r) {
        for (int j = 0; j < n; ++j) {
            circuit.push_back(Gate::h(j));
        }
        for (int j = 0; j < n; ++j) {
            circuit.push_back(Gate::rz(j, 2.0 * x[static_cast<std::size_t>(j)]));
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                circuit.push_back(
                    Gate::rzz(i, j, 2.0 * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)]));
            }
        }
    }
    return circuit;
}

Circuit build_trotter_circuit(std::span<const double> x, int steps, double evolution_time) {
    require_entangling_width(x, "Trotterized");
    require_positive(steps, "Trotterized", "steps");
    if (!std::isfinite(evolution_time)) {
        throw UsageError("Trotterized: evolution_time must be finite");
    }
    const int n = width(x);
    const double angle = 2.0 * evolution_time / steps;

    Circuit circuit = build_rotx_circuit(x);
    for (int s = 0; s < steps; ++s) {
        for (int j = 0; j + 1 < n; ++j) {
            const int k = j + 1;
            // exp(-i tau X(x)X): H maps X onto Z.
            circuit.push_back(Gate::h(j));
            circuit.push_back(Gate::h(k));
            circuit.push_back(Gate::rzz(j, k, angle));
            circuit.push_back(Gate::h(j));
            circuit.push_back(Gate::h(k));
            // exp(-i tau Y(x)Y): H S_DAG maps Y onto Z; undone by H then S = PHASE(pi/2).
            circuit.push_back(Gate::s_dag(j));
            circuit.push_back(Gate::s_dag(k));
            circuit.push_back(Gate::h(j));
            circuit.push_back(Gate::h(k));
            circuit.push_back(Gate::rzz(j, k, angle));
            circuit.push_back(Gate::h(j));
            circuit.push_back(Gate::h(k));
            circuit.push_back(Gate::phase(j, kPi / 2.0));
            circuit.push_back(Gate::phase(k, kPi / 2.0));
            // exp(-i tau Z(x)Z)
            circuit.push_back(Gate::rzz(j, k, angle));
        }
    }
    return circuit;
}

Circuit build_circuit(const FeatureMapSpec &spec, std::span<const double> x) {
    if (static_cast<int>(x.size()) != spec.n_qubits) {
        throw UsageError("feature vector has " + std::to_string(x.size()) + " entries but the " +
                         std::string(family_name(spec.family)) + " map expects " + std::to_string(spec.n_qubits));
    }
    switch (spec.family) {
        case FeatureMapFamily::RotX:
            return build_rotx_circuit(x);
        case FeatureMapFamily::ThreeD:
            return build_3d_circuit(x, spec.with_cnot_ring);
        case FeatureMapFamily::ZZ:
            return build_zz_circuit(x, spec.effective_reps());
        case FeatureMapFamily::IQP:
            return build_iqp_circuit(x, spec.effective_reps());
        case FeatureMapFamily::Trotterized:
            return build_trotter_circuit(x, spec.effective_reps(), spec.evolution_time);
    }
    throw Error(ErrorCategory::Internal, "unhandled feature map family");
}

Statevector encode(const FeatureMapSpec &spec, std::span<const double> x) {
    return run_circuit(spec.n_qubits, build_circuit(spec, x));
}

}  // namespace pqk
