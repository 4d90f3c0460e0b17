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

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "qpf/core/results.hpp"

/// Renders results as PGM heatmaps, trial-curve CSVs and the summary table.
/// All outputs are byte-for-byte deterministic for identical inputs.
namespace qpf::report {

/// Grey level of `accuracy` on the linear map [lo, hi] -> [0, 255]. When
/// lo == hi every value maps to 255.
uint8_t shade(double accuracy, double lo, double hi);

/// Binary PGM (P5, maxval 255), one pixel per cell, row a / column b. The
/// diagonal and missing cells are 0. A header comment records the range.
std::string heatmap_pgm(const results::PairMatrix &matrix);

/// n x n CSV of exact accuracies; diagonal and missing cells are empty.
std::string heatmap_csv(const results::PairMatrix &matrix);

/// Writes `pgm_path` and the CSV next to it (same stem, .csv).
void render_heatmap(const results::PairMatrix &matrix, const std::filesystem::path &pgm_path);

/// Columns trial,nn_accuracy,qpfnn_accuracy with the means in a comment
/// header. A missing arm leaves its column empty; two present arms must have
/// equal lengths (UsageError otherwise).
std::string trial_curve_csv(const results::TrialSeries *nn, const results::TrialSeries *qpfnn);
void render_trial_curve(const results::TrialSeries *nn, const results::TrialSeries *qpfnn,
                        const std::filesystem::path &csv_path);

/// Mean accuracy per (protocol, arm, dataset id).
struct SummaryTable {
    std::map<std::tuple<results::Protocol, results::Arm, std::string>, double> cells;

    bool empty() const noexcept { return cells.empty(); }
};

/// Full-data cells average over pairs; small-sample cells average the
/// per-trial pair means. Identical duplicate rows are dropped; duplicates
/// with different outcomes throw DataError.
SummaryTable summarize(std::vector<results::ResultRow> rows);

/// summarize over every results.csv under `results_dir`.
SummaryTable build_summary(const std::filesystem::path &results_dir);

/// Rows "All data, NN", "All data, QPF-NN", "Small sample, NN",
/// "Small sample, QPF-NN"; columns MNIST, EMNIST, CIFAR-10, GTSRB; cells in
/// percent with two decimals, empty when absent.
std::string summary_csv(const SummaryTable &table);

/// Per-arm pair matrices and trial series rebuilt from result rows.
std::map<results::Arm, results::PairMatrix> pair_matrices(const std::vector<results::ResultRow> &rows, int n_classes);
std::map<results::Arm, results::TrialSeries> trial_series(const std::vector<results::ResultRow> &rows);

/// Re-renders heatmaps or trial curves next to every results.csv under
/// `results_dir`. Returns the number of results files rendered.
size_t render_directory(const std::filesystem::path &results_dir);

}  // namespace qpf::report
