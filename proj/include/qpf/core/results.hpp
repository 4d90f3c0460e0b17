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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

/// Result records shared by the experiment harness (which writes them) and
/// the report renderers (which read them back).
namespace qpf::results {

enum class Arm { NN, QpfNN };
enum class Protocol { Full, SmallSample };

/// "NN" / "QPF-NN".
const char *arm_name(Arm arm);
/// "full" / "small-sample".
const char *protocol_name(Protocol protocol);
Arm parse_arm(std::string_view text);
Protocol parse_protocol(std::string_view text);

/// One trained-and-tested (pair, trial, arm) run.
struct ResultRow {
    Protocol protocol = Protocol::Full;
    std::string dataset;
    Arm arm = Arm::NN;
    int class_a = 0;
    int class_b = 1;
    size_t trial = 0;
    /// Draw seed for small-sample runs, init seed for full-data runs.
    uint64_t seed = 0;
    double accuracy = 0.0;
    size_t epochs = 0;
    /// Digest of the train/test sample indices the arm consumed.
    uint64_t sample_digest = 0;
    double wall_time_ms = 0.0;

    /// Identity of the run, independent of its outcome.
    auto key() const { return std::tuple(protocol, dataset, arm, class_a, class_b, trial); }
    /// Equal outcome, ignoring wall time.
    bool same_outcome(const ResultRow &other) const;
};

/// Canonical ordering: protocol, dataset, arm, trial, class_a, class_b.
bool canonical_less(const ResultRow &a, const ResultRow &b);

/// Column header of results.csv. Wall times are not part of it; they go to
/// timings.csv so that the results file depends only on the run's inputs.
inline constexpr std::string_view kResultsHeader =
    "protocol,dataset,arm,class_a,class_b,trial,seed,accuracy,epochs,sample_digest";
inline constexpr std::string_view kJournalHeader =
    "protocol,dataset,arm,class_a,class_b,trial,seed,accuracy,epochs,sample_digest,wall_time_ms";

/// Reals are printed with 17 significant digits so they parse back exactly.
std::string format_row(const ResultRow &row, bool with_wall_time);
/// Throws DataError on malformed input.
ResultRow parse_row(std::string_view line, bool with_wall_time);

/// Reads a results.csv or journal, skipping '#' comment lines and the header.
std::vector<ResultRow> read_rows(const std::filesystem::path &path);

/// Leading '# key=value' comment lines of a CSV file, split on spaces.
std::vector<std::pair<std::string, std::string>> read_comments(const std::filesystem::path &path);

/// Accuracy of every ordered pair (a, b), a != b, for one arm.
class PairMatrix {
  public:
    explicit PairMatrix(int n_classes = 0);

    int n_classes() const noexcept { return n_; }
    void set(int a, int b, double accuracy);
    std::optional<double> get(int a, int b) const;
    size_t defined_count() const noexcept;
    bool complete() const noexcept { return defined_count() == static_cast<size_t>(n_) * static_cast<size_t>(n_ - 1); }
    /// Mean over defined entries, row-major; NaN when none are defined.
    double mean() const;

  private:
    int n_;
    std::vector<std::optional<double>> cells_;
};

/// Per-trial accuracy averaged over pairs, for one arm.
struct TrialSeries {
    std::vector<double> per_trial;

    double mean() const;
};

}  // namespace qpf::results
