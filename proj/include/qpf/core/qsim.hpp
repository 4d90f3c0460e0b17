// Copyright 2026 The qpf-bench Authors
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

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

/// Exact statevector simulation for small registers. Only the gates the
/// filter circuit needs are provided: Y rotations, CNOT, and Pauli-Z
/// expectation values.
///
/// Basis indexing is little-endian: bit k of an amplitude index is the state
/// of qubit k.
namespace qpf::qsim {

inline constexpr int kMaxQubits = 12;

class StateVector {
  public:
    /// |0...0> on `n_qubits` qubits. Throws UsageError outside [1, kMaxQubits].
    explicit StateVector(int n_qubits);

    int n_qubits() const noexcept { return n_qubits_; }
    std::span<const std::complex<double>> amplitudes() const noexcept { return amps_; }
    std::span<std::complex<double>> amplitudes() noexcept { return amps_; }
    double norm_squared() const noexcept;

    /// RY(theta) = exp(-i theta Y / 2) on `qubit`.
    void apply_ry(int qubit, double theta);
    void apply_cnot(int control, int target);
    /// <Z> on `qubit`, in [-1, 1].
    double expect_z(int qubit) const;

  private:
    void check_qubit(int qubit) const;

    int n_qubits_;
    std::vector<std::complex<double>> amps_;
};

inline StateVector new_zero_state(int n_qubits) { return StateVector(n_qubits); }

/// RY whose angle comes either from the external angle array (by index) or is
/// fixed in the circuit.
struct RyGate {
    int qubit = 0;
    std::optional<size_t> bound_input;
    double theta = 0.0;

    bool operator==(const RyGate &) const = default;
};

struct CnotGate {
    int control = 0;
    int target = 1;

    bool operator==(const CnotGate &) const = default;
};

using GateOp = std::variant<RyGate, CnotGate>;

class CircuitSpec {
  public:
    explicit CircuitSpec(int n_qubits, std::vector<GateOp> gates = {});

    int n_qubits() const noexcept { return n_qubits_; }
    const std::vector<GateOp> &gates() const noexcept { return gates_; }
    /// Number of external angles run_circuit expects: one past the largest
    /// bound input index.
    size_t n_inputs() const noexcept { return n_inputs_; }

    CircuitSpec &ry_input(int qubit, size_t input);
    CircuitSpec &ry_fixed(int qubit, double theta);
    CircuitSpec &cnot(int control, int target);

    bool operator==(const CircuitSpec &) const = default;

  private:
    void add(GateOp gate);

    int n_qubits_;
    std::vector<GateOp> gates_;
    size_t n_inputs_ = 0;
};

/// Applies `spec` to |0...0> and returns <Z> for every qubit.
std::vector<double> run_circuit(const CircuitSpec &spec, std::span<const double> thetas);

/// Text form of a gate list, e.g. "ry:0=in0 ry:1=1.5 cnot:0,1".
std::string describe(const CircuitSpec &spec);

}  // namespace qpf::qsim
