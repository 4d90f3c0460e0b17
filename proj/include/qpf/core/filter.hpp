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

#include <array>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qpf/core/qsim.hpp"

/// The quantum pre-processing filter. Each non-overlapping 2x2 window of an
/// m x m image is encoded as four Y-rotation angles, passed through a fixed
/// 4-qubit circuit, and read out as four <Z> expectation values. The output
/// has shape 4 x (m/2) x (m/2), the same element count as the input.
namespace qpf::filter {

/// Position of a pixel inside a 2x2 window, in row-major order.
enum class WindowPos : int { TopLeft = 0, TopRight = 1, BottomLeft = 2, BottomRight = 3 };

/// Encoding RY(qubit k, input k) on all four qubits followed by `cnots`.
qsim::CircuitSpec make_circuit(std::span<const qsim::CnotGate> cnots);

/// CNOT(0 -> 1) then CNOT(2 -> 3).
qsim::CircuitSpec default_circuit();

/// Parses the entangling stage, e.g. "cnot:0,1 cnot:2,3" (space or ';'
/// separated). The encoding rotations are always prepended. An empty string
/// gives a circuit with no CNOTs.
qsim::CircuitSpec parse_circuit(std::string_view text);

/// Inverse of parse_circuit for circuits built by make_circuit.
std::string format_circuit(const qsim::CircuitSpec &circuit);

/// "0,1,2,3" -> qubit for TL, TR, BL, BR.
std::array<int, 4> parse_window_map(std::string_view text);
std::string format_window_map(const std::array<int, 4> &map);

struct QpfConfig {
    qsim::CircuitSpec circuit = default_circuit();
    /// Radians per unit pixel value.
    double angle_scale = std::numbers::pi;
    /// window_map[pos] is the qubit that encodes window position `pos`.
    std::array<int, 4> window_map = {0, 1, 2, 3};
};

/// Throws UsageError unless the circuit has 4 qubits and 4 bound inputs, the
/// window map is a permutation of 0..3, and the scale is finite.
void validate(const QpfConfig &config);

/// True when every qubit carries at most one rotation, all rotations precede
/// the CNOTs, and the CNOTs act on pairwise disjoint qubits. Such circuits
/// have the product closed form used by filter_window_closed_form.
bool closed_form_applicable(const qsim::CircuitSpec &circuit);

/// theta[window_map[pos]] = angle_scale * pixels[pos].
std::array<double, 4> encode_window(std::span<const double, 4> pixels, const QpfConfig &config);

/// Statevector evaluation of the filter on one window.
std::array<double, 4> filter_window(std::span<const double, 4> pixels, const QpfConfig &config);

/// Analytic evaluation: a control (or untouched) qubit gives cos(theta), a
/// target gives cos(theta_control) * cos(theta_target). Throws UsageError if
/// closed_form_applicable(config.circuit) is false.
std::array<double, 4> filter_window_closed_form(std::span<const double, 4> pixels, const QpfConfig &config);

/// Output of transform, laid out channel-major: values[(c * side + row) * side + col].
struct FeatureMap {
    size_t side = 0;
    std::vector<double> values;

    double at(size_t channel, size_t row, size_t col) const { return values[(channel * side + row) * side + col]; }
};

/// Square image with pixels in [0, 1], row-major.
struct ImageView {
    size_t m = 0;
    std::span<const double> pixels;
};

/// Reusable filter. Picks the closed form when the circuit allows it and the
/// statevector path otherwise; both give the same values within 1e-12.
class Filter {
  public:
    explicit Filter(QpfConfig config);

    const QpfConfig &config() const noexcept { return config_; }
    bool uses_closed_form() const noexcept { return closed_form_; }

    std::array<double, 4> window(std::span<const double, 4> pixels) const;

    /// Writes 4 * (m/2)^2 values into `out`. Throws UsageError for odd or
    /// zero m, size mismatches, or pixels outside [0, 1].
    void transform_into(ImageView image, std::span<double> out) const;
    FeatureMap transform(ImageView image) const;

  private:
    QpfConfig config_;
    bool closed_form_;
};

inline FeatureMap transform(ImageView image, const QpfConfig &config) { return Filter(config).transform(image); }

}  // namespace qpf::filter
