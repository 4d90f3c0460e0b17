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

#include "qpf/core/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <fmt/format.h>

#include "qpf/core/data.hpp"
#include "qpf/core/error.hpp"
#include "qpf/core/io.hpp"

namespace qpf::report {

using results::Arm;
using results::PairMatrix;
using results::Protocol;
using results::ResultRow;
using results::TrialSeries;

namespace {

std::pair<double, double> range_of(const PairMatrix &m) {
    double lo = INFINITY;
    double hi = -INFINITY;
    for (int a = 0; a < m.n_classes(); a++) {
        for (int b = 0; b < m.n_classes(); b++) {
            if (auto v = m.get(a, b); v && a != b) {
                lo = std::min(lo, *v);
                hi = std::max(hi, *v);
            }
        }
    }
    if (lo > hi) {
        return {0.0, 0.0};
    }
    return {lo, hi};
}

}  // namespace

uint8_t shade(double accuracy, double lo, double hi) {
    if (!(hi > lo)) {
        return 255;
    }
    double t = std::clamp((accuracy - lo) / (hi - lo), 0.0, 1.0);
    return static_cast<uint8_t>(std::lround(255.0 * t));
}

std::string heatmap_pgm(const PairMatrix &matrix) {
    const int n = matrix.n_classes();
    auto [lo, hi] = range_of(matrix);
    std::string out = fmt::format("P5\n# accuracy min={} max={}\n{} {}\n255\n", lo, hi, n, n);
    for (int a = 0; a < n; a++) {
        for (int b = 0; b < n; b++) {
            auto v = matrix.get(a, b);
            out.push_back(static_cast<char>(a != b && v ? shade(*v, lo, hi) : 0));
        }
    }
    return out;
}

std::string heatmap_csv(const PairMatrix &matrix) {
    const int n = matrix.n_classes();
    auto [lo, hi] = range_of(matrix);
    std::string out = fmt::format("# min={} max={} defined={} mean={}\nclass", lo, hi,
                                  matrix.defined_count(), matrix.mean());
    for (int b = 0; b < n; b++) {
        out += fmt::format(",{}", b);
    }
    out += '\n';
    for (int a = 0; a < n; a++) {
        out += fmt::format("{}", a);
        for (int b = 0; b < n; b++) {
            out += ',';
            if (auto v = matrix.get(a, b); v && a != b) {
                out += fmt::format("{}", *v);
            }
        }
        out += '\n';
    }
    return out;
}

void render_heatmap(const PairMatrix &matrix, const std::filesystem::path &pgm_path) {
    io::write_atomic(pgm_path, heatmap_pgm(matrix));
    auto csv_path = pgm_path;
    csv_path.replace_extension(".csv");
    io::write_atomic(csv_path, heatmap_csv(matrix));
}

std::string trial_curve_csv(const TrialSeries *nn, const TrialSeries *qpfnn) {
    if (nn && qpfnn && nn->per_trial.size() != qpfnn->per_trial.size()) {
        throw UsageError(fmt::format("trial series lengths differ ({} vs {})", nn->per_trial.size(),
                                     qpfnn->per_trial.size()));
    }
    const size_t n = nn ? nn->per_trial.size() : (qpfnn ? qpfnn->per_trial.size() : 0);
    auto mean_text = [](const TrialSeries *s) { return s ? fmt::format("{}", s->mean()) : std::string(); };
    std::string out = fmt::format("# trials={} nn_mean={} qpfnn_mean={}\ntrial,nn_accuracy,qpfnn_accuracy\n", n,
                                  mean_text(nn), mean_text(qpfnn));
    for (size_t t = 0; t < n; t++) {
        out += fmt::format("{},", t);
        if (nn) {
            out += fmt::format("{}", nn->per_trial[t]);
        }
        out += ',';
        if (qpfnn) {
            out += fmt::format("{}", qpfnn->per_trial[t]);
        }
        out += '\n';
    }
    return out;
}

void render_trial_curve(const TrialSeries *nn, const TrialSeries *qpfnn, const std::filesystem::path &csv_path) {
    io::write_atomic(csv_path, trial_curve_csv(nn, qpfnn));
}

namespace {

/// Sorted and deduplicated; throws on conflicting duplicates.
std::vector<ResultRow> canonical_rows(std::vector<ResultRow> rows) {
    std::sort(rows.begin(), rows.end(), [](const ResultRow &a, const ResultRow &b) {
        if (a.key() != b.key()) {
            return results::canonical_less(a, b);
        }
        return std::tie(a.accuracy, a.seed, a.epochs, a.sample_digest) <
               std::tie(b.accuracy, b.seed, b.epochs, b.sample_digest);
    });
    std::vector<ResultRow> out;
    for (const auto &row : rows) {
        if (!out.empty() && out.back().key() == row.key()) {
            if (!out.back().same_outcome(row)) {
                throw DataError(fmt::format("conflicting results for {} {} {} pair ({}, {}) trial {}",
                                            results::protocol_name(row.protocol), row.dataset,
                                            results::arm_name(row.arm), row.class_a, row.class_b, row.trial));
            }
            continue;
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace

std::map<Arm, PairMatrix> pair_matrices(const std::vector<ResultRow> &rows, int n_classes) {
    std::map<Arm, PairMatrix> out;
    for (const auto &row : rows) {
        auto it = out.try_emplace(row.arm, n_classes).first;
        it->second.set(row.class_a, row.class_b, row.accuracy);
    }
    return out;
}

std::map<Arm, TrialSeries> trial_series(const std::vector<ResultRow> &rows) {
    std::map<Arm, std::map<size_t, std::pair<double, size_t>>> sums;
    for (const auto &row : canonical_rows(rows)) {
        auto &cell = sums[row.arm][row.trial];
        cell.first += row.accuracy;
        cell.second++;
    }
    std::map<Arm, TrialSeries> out;
    for (const auto &[arm, per_trial] : sums) {
        auto &series = out[arm];
        for (const auto &[trial, cell] : per_trial) {
            series.per_trial.push_back(cell.first / static_cast<double>(cell.second));
        }
    }
    return out;
}

SummaryTable summarize(std::vector<ResultRow> rows) {
    rows = canonical_rows(std::move(rows));
    std::map<std::tuple<Protocol, Arm, std::string>, std::vector<ResultRow>> groups;
    for (const auto &row : rows) {
        groups[{row.protocol, row.arm, row.dataset}].push_back(row);
    }
    SummaryTable table;
    for (const auto &[key, group] : groups) {
        double mean = 0.0;
        if (std::get<0>(key) == Protocol::Full) {
            for (const auto &row : group) {
                mean += row.accuracy;
            }
            mean /= static_cast<double>(group.size());
        } else {
            mean = trial_series(group).begin()->second.mean();
        }
        table.cells[key] = mean;
    }
    return table;
}

SummaryTable build_summary(const std::filesystem::path &results_dir) {
    if (!std::filesystem::is_directory(results_dir)) {
        throw DataError(fmt::format("results directory '{}' does not exist", results_dir.string()));
    }
    std::vector<std::filesystem::path> files;
    for (const auto &entry : std::filesystem::recursive_directory_iterator(results_dir)) {
        if (entry.is_regular_file() && entry.path().filename() == "results.csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::vector<ResultRow> rows;
    for (const auto &f : files) {
        auto more = results::read_rows(f);
        rows.insert(rows.end(), more.begin(), more.end());
    }
    return summarize(std::move(rows));
}

std::string summary_csv(const SummaryTable &table) {
    static constexpr std::pair<Protocol, Arm> kRows[] = {
        {Protocol::Full, Arm::NN},
        {Protocol::Full, Arm::QpfNN},
        {Protocol::SmallSample, Arm::NN},
        {Protocol::SmallSample, Arm::QpfNN},
    };
    std::string out = "setting";
    for (const auto &info : data::known_datasets()) {
        out += "," + info.display_name;
    }
    out += '\n';
    for (const auto &[protocol, arm] : kRows) {
        out += fmt::format("\"{}, {}\"", protocol == Protocol::Full ? "All data" : "100 samples", results::arm_name(arm));
        for (const auto &info : data::known_datasets()) {
            out += ',';
            auto it = table.cells.find({protocol, arm, info.id});
            if (it != table.cells.end()) {
                out += fmt::format("{:.2f}", 100.0 * it->second);
            }
        }
        out += '\n';
    }
    return out;
}

size_t render_directory(const std::filesystem::path &results_dir) {
    size_t rendered = 0;
    std::vector<std::filesystem::path> files;
    for (const auto &entry : std::filesystem::recursive_directory_iterator(results_dir)) {
        if (entry.is_regular_file() && entry.path().filename() == "results.csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    for (const auto &f : files) {
        auto rows = canonical_rows(results::read_rows(f));
        std::vector<ResultRow> full;
        std::vector<ResultRow> small;
        for (const auto &row : rows) {
            (row.protocol == Protocol::Full ? full : small).push_back(row);
        }
        const auto dir = f.parent_path();
        if (!full.empty()) {
            const int n = data::dataset_info(full.front().dataset).n_classes;
            for (const auto &[arm, matrix] : pair_matrices(full, n)) {
                render_heatmap(matrix, dir / (arm == Arm::NN ? "heatmap_nn.pgm" : "heatmap_qpfnn.pgm"));
            }
        }
        if (!small.empty()) {
            auto series = trial_series(small);
            auto find = [&](Arm arm) { return series.count(arm) ? &series.at(arm) : nullptr; };
            render_trial_curve(find(Arm::NN), find(Arm::QpfNN), dir / "trial_curve.csv");
        }
        rendered++;
    }
    return rendered;
}

}  // namespace qpf::report
