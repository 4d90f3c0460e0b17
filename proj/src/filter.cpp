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

#include "qpf/core/filter.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>

#include <fmt/format.h>

#include "qpf/core/error.hpp"

namespace qpf::filter {

namespace {

int parse_int(std::string_view text, std::string_view what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw UsageError(fmt::format("bad {} '{}'", what, text));
    }
    return value;
}

std::vector<std::string_view> split_any(std::string_view text, std::string_view separators) {
    std::vector<std::string_view> out;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t end = text.find_first_of(separators, pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        if (end > pos) {
            out.push_back(text.substr(pos, end - pos));
        }
        pos = end + 1;
    }
    return out;
}

void check_pixels(std::span<const double, 4> pixels) {
    for (double p : pixels) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw UsageError(fmt::format("pixel value {} outside [0, 1]", p));
        }
    }
}

}  // namespace

qsim::CircuitSpec make_circuit(std::span<const qsim::CnotGate> cnots) {
    qsim::CircuitSpec circuit(4);
    for (int q = 0; q < 4; q++) {
        circuit.ry_input(q, static_cast<size_t>(q));
    }
    for (const auto &cx : cnots) {
        circuit.cnot(cx.control, cx.target);
    }
    return circuit;
}

qsim::CircuitSpec default_circuit() {
    const qsim::CnotGate cnots[] = {{0, 1}, {2, 3}};
    return make_circuit(cnots);
}

qsim::CircuitSpec parse_circuit(std::string_view text) {
    std::vector<qsim::CnotGate> cnots;
    for (auto token : split_any(text, " \t;")) {
        if (!token.starts_with("cnot:")) {
            throw UsageError(fmt::format("unknown circuit element '{}' (expected cnot:C,T)", token));
        }
        auto args = token.substr(5);
        auto comma = args.find(',');
        if (comma == std::string_view::npos) {
            throw UsageError(fmt::format("bad circuit element '{}' (expected cnot:C,T)", token));
        }
        cnots.push_back({parse_int(args.substr(0, comma), "CNOT control"),
                         parse_int(args.substr(comma + 1), "CNOT target")});
    }
    return make_circuit(cnots);
}

std::string format_circuit(const qsim::CircuitSpec &circuit) {
    std::vector<qsim::CnotGate> cnots;
    for (const auto &gate : circuit.gates()) {
        if (const auto *cx = std::get_if<qsim::CnotGate>(&gate)) {
            cnots.push_back(*cx);
        }
    }
    if (make_circuit(cnots) != circuit) {
        return qsim::describe(circuit);
    }
    std::string out;
    for (const auto &cx : cnots) {
        if (!out.empty()) {
            out += ' ';
        }
        out += fmt::format("cnot:{},{}", cx.control, cx.target);
    }
    return out;
}

std::array<int, 4> parse_window_map(std::string_view text) {
    auto parts = split_any(text, ", ");
    if (parts.size() != 4) {
        throw UsageError(fmt::format("window map '{}' must list 4 qubits", text));
    }
    std::array<int, 4> map{};
    for (size_t i = 0; i < 4; i++) {
        map[i] = parse_int(parts[i], "window map entry");
    }
    auto sorted = map;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 4>{0, 1, 2, 3}) {
        throw UsageError(fmt::format("window map '{}' is not a permutation of 0..3", text));
    }
    return map;
}

std::string format_window_map(const std::array<int, 4> &map) {
    return fmt::format("{},{},{},{}", map[0], map[1], map[2], map[3]);
}

void validate(const QpfConfig &config) {
    if (config.circuit.n_qubits() != 4) {
        throw UsageError(fmt::format("filter circuit must have 4 qubits, has {}", config.circuit.n_qubits()));
    }
    if (config.circuit.n_inputs() != 4) {
        throw UsageError(fmt::format("filter circuit must bind 4 input angles, binds {}", config.circuit.n_inputs()));
    }
    auto sorted = config.window_map;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 4>{0, 1, 2, 3}) {
        throw UsageError(fmt::format("window map {} is not a permutation of 0..3", format_window_map(config.window_map)));
    }
    if (!std::isfinite(config.angle_scale)) {
        throw UsageError("angle scale is not finite");
    }
}

bool closed_form_applicable(const qsim::CircuitSpec &circuit) {
    std::vector<int> rotations(static_cast<size_t>(circuit.n_qubits()), 0);
    std::vector<int> entangled(static_cast<size_t>(circuit.n_qubits()), 0);
    bool seen_cnot = false;
    for (const auto &gate : circuit.gates()) {
        if (const auto *ry = std::get_if<qsim::RyGate>(&gate)) {
            if (seen_cnot || ++rotations[static_cast<size_t>(ry->qubit)] > 1) {
                return false;
            }
        } else {
            const auto &cx = std::get<qsim::CnotGate>(gate);
            seen_cnot = true;
            if (entangled[static_cast<size_t>(cx.control)]++ || entangled[static_cast<size_t>(cx.target)]++) {
                return false;
            }
        }
    }
    return true;
}

std::array<double, 4> encode_window(std::span<const double, 4> pixels, const QpfConfig &config) {
    check_pixels(pixels);
    std::array<double, 4> thetas{};
    for (size_t pos = 0; pos < 4; pos++) {
        thetas[static_cast<size_t>(config.window_map[pos])] = config.angle_scale * pixels[pos];
    }
    return thetas;
}

std::array<double, 4> filter_window(std::span<const double, 4> pixels, const QpfConfig &config) {
    auto thetas = encode_window(pixels, config);
    auto z = qsim::run_circuit(config.circuit, thetas);
    return {z[0], z[1], z[2], z[3]};
}

std::array<double, 4> filter_window_closed_form(std::span<const double, 4> pixels, const QpfConfig &config) {
    if (!closed_form_applicable(config.circuit)) {
        throw UsageError(fmt::format("circuit '{}' has no product closed form", qsim::describe(config.circuit)));
    }
    auto inputs = encode_window(pixels, config);
    std::array<double, 4> angle{};
    for (const auto &gate : config.circuit.gates()) {
        if (const auto *ry = std::get_if<qsim::RyGate>(&gate)) {
            angle[static_cast<size_t>(ry->qubit)] = ry->bound_input ? inputs[*ry->bound_input] : ry->theta;
        }
    }
    std::array<double, 4> z{};
    for (size_t q = 0; q < 4; q++) {
        z[q] = std::cos(angle[q]);
    }
    for (const auto &gate : config.circuit.gates()) {
        if (const auto *cx = std::get_if<qsim::CnotGate>(&gate)) {
            z[static_cast<size_t>(cx->target)] *= z[static_cast<size_t>(cx->control)];
        }
    }
    return z;
}

Filter::Filter(QpfConfig config) : config_(std::move(config)) {
    validate(config_);
    closed_form_ = closed_form_applicable(config_.circuit);
}

std::array<double, 4> Filter::window(std::span<const double, 4> pixels) const {
    return closed_form_ ? filter_window_closed_form(pixels, config_) : filter_window(pixels, config_);
}

void Filter::transform_into(ImageView image, std::span<double> out) const {
    const size_t m = image.m;
    if (m == 0 || m % 2 != 0) {
        throw UsageError(fmt::format("image side {} must be even and positive", m));
    }
    if (image.pixels.size() != m * m) {
        throw UsageError(fmt::format("image has {} pixels, expected {}", image.pixels.size(), m * m));
    }
    if (out.size() != m * m) {
        throw UsageError(fmt::format("feature buffer has {} slots, expected {}", out.size(), m * m));
    }
    const size_t side = m / 2;
    const size_t plane = side * side;
    for (size_t i = 0; i < side; i++) {
        for (size_t j = 0; j < side; j++) {
            const double *top = &image.pixels[(2 * i) * m + 2 * j];
            const double *bottom = top + m;
            const std::array<double, 4> window_pixels = {top[0], top[1], bottom[0], bottom[1]};
            auto z = window(window_pixels);
            for (size_t c = 0; c < 4; c++) {
                out[c * plane + i * side + j] = z[c];
            }
        }
    }
}

FeatureMap Filter::transform(ImageView image) const {
    FeatureMap fm;
    fm.side = image.m / 2;
    fm.values.resize(image.m * image.m);
    transform_into(image, fm.values);
    return fm;
}

}  // namespace qpf::filter
