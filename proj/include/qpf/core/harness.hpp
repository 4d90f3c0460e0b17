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

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpf/core/data.hpp"
#include "qpf/core/filter.hpp"
#include "qpf/core/nn.hpp"
#include "qpf/core/results.hpp"

/// Experiment orchestration: all-ordered-pairs sweeps on full data and
/// repeated small-sample trials, with seeds derived from (base seed, pair,
/// trial, role) so that results do not depend on scheduling and both arms
/// see the same samples.
namespace qpf::harness {

using results::Arm;
using results::Protocol;

enum class Arms { NN, QpfNN, Both };

std::vector<Arm> arms_of(Arms arms);

struct ClassPair {
    int a = 0;
    int b = 1;

    auto operator<=>(const ClassPair &) const = default;
};

struct ExperimentConfig {
    std::string dataset = "mnist";
    std::filesystem::path data_root = "data";
    Arms arms = Arms::Both;
    Protocol protocol = Protocol::SmallSample;
    size_t trials = 100;
    size_t per_class_train = 80;
    size_t per_class_test = 20;
    uint64_t base_seed = 0;
    nn::TrainConfig train;
    filter::QpfConfig qpf;
    size_t jobs = 1;
    /// Restricts the run to these ordered pairs; empty means all of them.
    std::vector<ClassPair> pairs;
    /// Directory of precomputed filter outputs; empty means compute in memory.
    std::filesystem::path feature_cache;

    /// Sets one key from its text form. Keys: dataset, data_root, arms,
    /// protocol, trials, per_class_train, per_class_test, base_seed, epochs,
    /// batch_size, hidden, lr, beta1, beta2, epsilon, angle_scale, circuit,
    /// window_map, jobs, pairs, feature_cache. Dashes in keys are accepted
    /// in place of underscores. Throws UsageError.
    void set(std::string_view key, std::string_view value);
    std::string get(std::string_view key) const;

    /// Every key with its text value, in a fixed order.
    std::vector<std::pair<std::string, std::string>> entries() const;

    /// Flat "key = value" lines; '#' starts a comment.
    void load_file(const std::filesystem::path &path);

    void validate() const;
};

/// All (a, b) with a != b in lexicographic order.
std::vector<ClassPair> enumerate_pairs(int n_classes);

/// "0,1" or "0,1;5,8".
std::vector<ClassPair> parse_pairs(std::string_view text);
std::string format_pairs(const std::vector<ClassPair> &pairs);

enum class SeedRole : uint64_t { Draw = 1, Init = 2, Shuffle = 3 };

/// splitmix64 chain over (base, a, b, trial, role). The arm is deliberately
/// not an input, so both arms share draws, initial weights and batch order.
uint64_t derive_seed(uint64_t base_seed, ClassPair pair, uint64_t trial, SeedRole role);

/// A loaded dataset plus, when needed, its filter outputs.
struct Workspace {
    data::Dataset dataset;
    std::optional<data::LabeledSet> train_features;
    std::optional<data::LabeledSet> test_features;

    const data::LabeledSet &inputs(Arm arm, data::Partition partition) const;
};

/// Applies the filter to every sample of `images`.
data::LabeledSet transform_set(const data::LabeledSet &images, const filter::QpfConfig &config);

/// Writes the filter outputs of both partitions into `dir` as IDX files
/// named <dataset>-{train,test}-qpf-{images,labels}.idx, plus a
/// <dataset>-qpf.txt sidecar recording the filter configuration.
void write_feature_cache(const Workspace &ws, const filter::QpfConfig &config, const std::filesystem::path &dir);

/// Loads the dataset and, if an arm needs them, filter outputs (from the
/// feature cache when configured).
Workspace prepare_workspace(const ExperimentConfig &config);

/// Ensures filter outputs are present.
void ensure_features(Workspace &ws, const ExperimentConfig &config);

struct ArmOutcome {
    Arm arm = Arm::NN;
    double accuracy = 0.0;
    uint64_t sample_digest = 0;
    double wall_time_ms = 0.0;
    nn::History history;
};

/// Trains and evaluates each configured arm on `pair`. For the small-sample
/// protocol the samples are drawn with the (pair, trial) draw seed first;
/// all arms use that same draw.
std::vector<ArmOutcome> run_pair(const ExperimentConfig &config, const Workspace &ws, ClassPair pair,
                                 size_t trial = 0);

/// Append-only journal of finished runs keyed by (arm, pair, trial). Safe for
/// concurrent appends. Reopening a journal restores its rows so an
/// interrupted run resumes where it stopped.
class ResultStore {
  public:
    /// In-memory only.
    ResultStore() = default;
    /// Backed by `journal`; `run_id` must match an existing journal's.
    ResultStore(std::filesystem::path journal, uint64_t run_id);

    std::optional<results::ResultRow> find(Arm arm, ClassPair pair, size_t trial) const;
    void append(const results::ResultRow &row);
    std::vector<results::ResultRow> rows() const;

  private:
    std::filesystem::path journal_;
    mutable std::mutex mutex_;
    std::map<std::tuple<Arm, int, int, size_t>, results::ResultRow> rows_;
};

using Progress = std::function<void(size_t done, size_t total)>;

/// run_pair over the configured pairs; one matrix per arm.
std::map<Arm, results::PairMatrix> run_full_sweep(const ExperimentConfig &config, const Workspace &ws,
                                                  ResultStore &store, const Progress &progress = {});

/// `config.trials` trials of run_pair over the configured pairs; one series
/// per arm, each entry the mean over pairs of that trial.
std::map<Arm, results::TrialSeries> run_small_sample(const ExperimentConfig &config, const Workspace &ws,
                                                     ResultStore &store, const Progress &progress = {});

/// Hash of everything that determines results: the config (without jobs,
/// data_root and feature_cache) and the dataset checksums.
uint64_t run_id(const ExperimentConfig &config, const data::Dataset &dataset);

struct RunSummary {
    std::filesystem::path out_dir;
    std::map<Arm, double> means;
    size_t rows = 0;
};

/// Full command: writes manifest.txt (status=incomplete), runs the protocol
/// with a journal in `out_dir`, then writes results.csv, timings.csv, the
/// renders, and marks the manifest complete. On failure the manifest is left
/// with status=failed.
RunSummary run_experiment(const ExperimentConfig &config, const std::filesystem::path &out_dir,
                          std::string_view command, const Progress &progress = {});

}  // namespace qpf::harness
