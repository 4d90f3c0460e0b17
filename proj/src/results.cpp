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

#include "qpf/core/results.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <tuple>

#include <fmt/format.h>

#include "qpf/core/error.hpp"
#include "qpf/core/io.hpp"

namespace qpf::results {

const char *arm_name(Arm arm) { return arm == Arm::NN ? "NN" : "QPF-NN"; }

const char *protocol_name(Protocol protocol) { return protocol == Protocol::Full ? "full" : "small-sample"; }

Arm parse_arm(std::string_view text) {
    if (text == "NN" || text == "nn") {
        return Arm::NN;
    }
    if (text == "QPF-NN" || text == "qpf-nn") {
        return Arm::QpfNN;
    }
    throw DataError(fmt::format("unknown arm '{}'", text));
}

Protocol parse_protocol(std::string_view text) {
    if (text == "full") {
        return Protocol::Full;
    }
    if (text == "small-sample") {
        return Protocol::SmallSample;
    }
    throw DataError(fmt::format("unknown protocol '{}'", text));
}

bool ResultRow::same_outcome(const ResultRow &other) const {
    return key() == other.key() && seed == other.seed && accuracy == other.accuracy && epochs == other.epochs &&
           sample_digest == other.sample_digest;
}

bool canonical_less(const ResultRow &a, const ResultRow &b) {
    return std::tie(a.protocol, a.dataset, a.arm, a.trial, a.class_a, a.class_b) <
           std::tie(b.protocol, b.dataset, b.arm, b.trial, b.class_a, b.class_b);
}

std::string format_row(const ResultRow &row, bool with_wall_time) {
    auto line = fmt::format("{},{},{},{},{},{},{},{},{},{:016x}", protocol_name(row.protocol), row.dataset,
                            arm_name(row.arm), row.class_a, row.class_b, row.trial, row.seed, row.accuracy,
                            row.epochs, row.sample_digest);
    if (with_wall_time) {
        line += fmt::format(",{:.3f}", row.wall_time_ms);
    }
    return line;
}

namespace {

template <typename T>
T parse_number(std::string_view text, int base = 10) {
    T value{};
    std::from_chars_result r;
    if constexpr (std::is_floating_point_v<T>) {
        r = std::from_chars(text.data(), text.data() + text.size(), value);
    } else {
        r = std::from_chars(text.data(), text.data() + text.size(), value, base);
    }
    if (r.ec != std::errc() || r.ptr != text.data() + text.size()) {
        throw DataError(fmt::format("bad number '{}' in results", text));
    }
    return value;
}

}  // namespace

ResultRow parse_row(std::string_view line, bool with_wall_time) {
    auto f = io::split(line, ',');
    const size_t expected = with_wall_time ? 11 : 10;
    if (f.size() != expected) {
        throw DataError(fmt::format("results row has {} fields, expected {}: '{}'", f.size(), expected, line));
    }
    ResultRow row;
    row.protocol = parse_protocol(f[0]);
    row.dataset = f[1];
    row.arm = parse_arm(f[2]);
    row.class_a = parse_number<int>(f[3]);
    row.class_b = parse_number<int>(f[4]);
    row.trial = parse_number<size_t>(f[5]);
    row.seed = parse_number<uint64_t>(f[6]);
    row.accuracy = parse_number<double>(f[7]);
    row.epochs = parse_number<size_t>(f[8]);
    row.sample_digest = parse_number<uint64_t>(f[9], 16);
    if (with_wall_time) {
        row.wall_time_ms = parse_number<double>(f[10]);
    }
    if (!(row.accuracy >= 0.0 && row.accuracy <= 1.0)) {
        throw DataError(fmt::format("accuracy {} outside [0, 1]", row.accuracy));
    }
    return row;
}

std::vector<ResultRow> read_rows(const std::filesystem::path &path) {
    std::vector<ResultRow> rows;
    bool with_wall_time = false;
    bool seen_header = false;
    for (const auto &line : io::lines(io::read_text(path))) {
        if (line.empty() || line[0] == '#') {
            continue;
        }
        if (!seen_header) {
            if (line == kJournalHeader) {
                with_wall_time = true;
            } else if (line != kResultsHeader) {
                throw DataError(fmt::format("'{}' does not start with a results header", path.string()));
            }
            seen_header = true;
            continue;
        }
        rows.push_back(parse_row(line, with_wall_time));
    }
    return rows;
}

std::vector<std::pair<std::string, std::string>> read_comments(const std::filesystem::path &path) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto &line : io::lines(io::read_text(path))) {
        if (line.empty() || line[0] != '#') {
            break;
        }
        for (const auto &token : io::split(std::string_view(line).substr(1), ' ')) {
            auto eq = token.find('=');
            if (eq != std::string::npos) {
                out.emplace_back(token.substr(0, eq), token.substr(eq + 1));
            }
        }
    }
    return out;
}

PairMatrix::PairMatrix(int n_classes) : n_(n_classes) {
    if (n_classes < 0) {
        throw UsageError("negative class count");
    }
    cells_.resize(static_cast<size_t>(n_classes) * static_cast<size_t>(n_classes));
}

void PairMatrix::set(int a, int b, double accuracy) {
    if (a == b || a < 0 || b < 0 || a >= n_ || b >= n_) {
        throw UsageError(fmt::format("pair ({}, {}) is not an off-diagonal cell of a {}-class matrix", a, b, n_));
    }
    if (!(accuracy >= 0.0 && accuracy <= 1.0)) {
        throw UsageError(fmt::format("accuracy {} for pair ({}, {}) is outside [0, 1]", accuracy, a, b));
    }
    cells_[static_cast<size_t>(a) * static_cast<size_t>(n_) + static_cast<size_t>(b)] = accuracy;
}

std::optional<double> PairMatrix::get(int a, int b) const {
    if (a < 0 || b < 0 || a >= n_ || b >= n_) {
        return std::nullopt;
    }
    return cells_[static_cast<size_t>(a) * static_cast<size_t>(n_) + static_cast<size_t>(b)];
}

size_t PairMatrix::defined_count() const noexcept {
    size_t n = 0;
    for (const auto &c : cells_) {
        n += c.has_value();
    }
    return n;
}

double PairMatrix::mean() const {
    double total = 0.0;
    size_t n = 0;
    for (const auto &c : cells_) {
        if (c) {
            total += *c;
            n++;
        }
    }
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : total / static_cast<double>(n);
}

double TrialSeries::mean() const {
    if (per_trial.empty()) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    double total = 0.0;
    for (double v : per_trial) {
        total += v;
    }
    return total / static_cast<double>(per_trial.size());
}

}  // namespace qpf::results
