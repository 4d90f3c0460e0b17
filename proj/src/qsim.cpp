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

#include "qpf/core/qsim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "qpf/core/error.hpp"

namespace qpf::qsim {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw UsageError(fmt::format("qubit count {} outside [1, {}]", n_qubits, kMaxQubits));
    }
    amps_.assign(size_t{1} << n_qubits, {0.0, 0.0});
    amps_[0] = 1.0;
}

void StateVector::check_qubit(int qubit) const {
    if (qubit < 0 || qubit >= n_qubits_) {
        throw UsageError(fmt::format("qubit index {} out of range for {} qubits", qubit, n_qubits_));
    }
}

double StateVector::norm_squared() const noexcept {
    double total = 0.0;
    for (const auto &a : amps_) {
        total += std::norm(a);
    }
    return total;
}

void StateVector::apply_ry(int qubit, double theta) {
    check_qubit(qubit);
    if (!std::isfinite(theta)) {
        throw UsageError("rotation angle is not finite");
    }
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const size_t bit = size_t{1} << qubit;
    for (size_t i = 0; i < amps_.size(); i++) {
        if (i & bit) {
            continue;
        }
        auto a0 = amps_[i];
        auto a1 = amps_[i | bit];
        amps_[i] = c * a0 - s * a1;
        amps_[i | bit] = s * a0 + c * a1;
    }
}

void StateVector::apply_cnot(int control, int target) {
    check_qubit(control);
    check_qubit(target);
    if (control == target) {
        throw UsageError(fmt::format("CNOT control and target are both qubit {}", control));
    }
    const size_t cbit = size_t{1} << control;
    const size_t tbit = size_t{1} << target;
    for (size_t i = 0; i < amps_.size(); i++) {
        if ((i & cbit) && !(i & tbit)) {
            std::swap(amps_[i], amps_[i | tbit]);
        }
    }
}

double StateVector::expect_z(int qubit) const {
    check_qubit(qubit);
    const size_t bit = size_t{1} << qubit;
    double total = 0.0;
    for (size_t i = 0; i < amps_.size(); i++) {
        total += (i & bit) ? -std::norm(amps_[i]) : std::norm(amps_[i]);
    }
    return std::clamp(total, -1.0, 1.0);
}

CircuitSpec::CircuitSpec(int n_qubits, std::vector<GateOp> gates) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw UsageError(fmt::format("qubit count {} outside [1, {}]", n_qubits, kMaxQubits));
    }
    for (auto &g : gates) {
        add(std::move(g));
    }
}

void CircuitSpec::add(GateOp gate) {
    auto check = [&](int q) {
        if (q < 0 || q >= n_qubits_) {
            throw UsageError(fmt::format("gate qubit {} out of range for {} qubits", q, n_qubits_));
        }
    };
    if (auto *ry = std::get_if<RyGate>(&gate)) {
        check(ry->qubit);
        if (ry->bound_input) {
            n_inputs_ = std::max(n_inputs_, *ry->bound_input + 1);
        } else if (!std::isfinite(ry->theta)) {
            throw UsageError("fixed rotation angle is not finite");
        }
    } else {
        auto &cx = std::get<CnotGate>(gate);
        check(cx.control);
        check(cx.target);
        if (cx.control == cx.target) {
            throw UsageError(fmt::format("CNOT control and target are both qubit {}", cx.control));
        }
    }
    gates_.push_back(std::move(gate));
}

CircuitSpec &CircuitSpec::ry_input(int qubit, size_t input) {
    add(RyGate{qubit, input, 0.0});
    return *this;
}

CircuitSpec &CircuitSpec::ry_fixed(int qubit, double theta) {
    add(RyGate{qubit, std::nullopt, theta});
    return *this;
}

CircuitSpec &CircuitSpec::cnot(int control, int target) {
    add(CnotGate{control, target});
    return *this;
}

std::vector<double> run_circuit(const CircuitSpec &spec, std::span<const double> thetas) {
    if (thetas.size() != spec.n_inputs()) {
        throw UsageError(
            fmt::format("circuit binds {} input angles but {} were given", spec.n_inputs(), thetas.size()));
    }
    StateVector state(spec.n_qubits());
    for (const auto &gate : spec.gates()) {
        if (const auto *ry = std::get_if<RyGate>(&gate)) {
            state.apply_ry(ry->qubit, ry->bound_input ? thetas[*ry->bound_input] : ry->theta);
        } else {
            const auto &cx = std::get<CnotGate>(gate);
            state.apply_cnot(cx.control, cx.target);
        }
    }
    std::vector<double> out(static_cast<size_t>(spec.n_qubits()));
    for (int q = 0; q < spec.n_qubits(); q++) {
        out[static_cast<size_t>(q)] = state.expect_z(q);
    }
    return out;
}

std::string describe(const CircuitSpec &spec) {
    std::string out;
    for (const auto &gate : spec.gates()) {
        if (!out.empty()) {
            out += ' ';
        }
        if (const auto *ry = std::get_if<RyGate>(&gate)) {
            if (ry->bound_input) {
                out += fmt::format("ry:{}=in{}", ry->qubit, *ry->bound_input);
            } else {
                out += fmt::format("ry:{}={}", ry->qubit, ry->theta);
            }
        } else {
            const auto &cx = std::get<CnotGate>(gate);
            out += fmt::format("cnot:{},{}", cx.control, cx.target);
        }
    }
    return out;
}

}  // namespace qpf::qsim
