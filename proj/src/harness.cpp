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

#include "qpf/core/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "qpf/core/error.hpp"
#include "qpf/core/io.hpp"
#include "qpf/core/log.hpp"
#include "qpf/core/report.hpp"
#include "qpf/core/rng.hpp"
#include "qpf/core/version.hpp"

namespace qpf::harness {

namespace fs = std::filesystem;
using results::ResultRow;

std::vector<Arm> arms_of(Arms arms) {
    switch (arms) {
    case Arms::NN:
        return {Arm::NN};
    case Arms::QpfNN:
        return {Arm::QpfNN};
    default:
        return {Arm::NN, Arm::QpfNN};
    }
}

// --- Configuration -------------------------------------------------------------

namespace {

template <typename T>
T parse_value(std::string_view key, std::string_view text) {
    text = io::trim(text);
    T value{};
    auto r = std::from_chars(text.data(), text.data() + text.size(), value);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size() || text.empty()) {
        throw UsageError(fmt::format("bad value '{}' for {}", text, key));
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            throw UsageError(fmt::format("value for {} must be finite", key));
        }
    }
    return value;
}

std::string real_text(double v) { return fmt::format("{}", v); }

const char *arms_text(Arms arms) {
    switch (arms) {
    case Arms::NN:
        return "nn";
    case Arms::QpfNN:
        return "qpf-nn";
    default:
        return "both";
    }
}

}  // namespace

void ExperimentConfig::set(std::string_view raw_key, std::string_view raw_value) {
    std::string key(io::trim(raw_key));
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value(io::trim(raw_value));
    if (key == "dataset") {
        dataset = data::dataset_info(value).id;
    } else if (key == "data_root") {
        data_root = value;
    } else if (key == "arms") {
        if (value == "nn" || value == "NN") {
            arms = Arms::NN;
        } else if (value == "qpf-nn" || value == "QPF-NN" || value == "qpf") {
            arms = Arms::QpfNN;
        } else if (value == "both") {
            arms = Arms::Both;
        } else {
            throw UsageError(fmt::format("arms must be nn, qpf-nn, or both, not '{}'", value));
        }
    } else if (key == "protocol") {
        if (value == "full") {
            protocol = Protocol::Full;
        } else if (value == "small-sample" || value == "small_sample") {
            protocol = Protocol::SmallSample;
        } else {
            throw UsageError(fmt::format("protocol must be full or small-sample, not '{}'", value));
        }
    } else if (key == "trials") {
        trials = parse_value<size_t>(key, value);
    } else if (key == "per_class_train") {
        per_class_train = parse_value<size_t>(key, value);
    } else if (key == "per_class_test") {
        per_class_test = parse_value<size_t>(key, value);
    } else if (key == "base_seed") {
        base_seed = parse_value<uint64_t>(key, value);
    } else if (key == "epochs") {
        train.epochs = parse_value<size_t>(key, value);
    } else if (key == "batch_size") {
        train.batch_size = parse_value<size_t>(key, value);
    } else if (key == "hidden") {
        train.hidden = parse_value<size_t>(key, value);
    } else if (key == "lr") {
        train.adam.lr = parse_value<double>(key, value);
    } else if (key == "beta1") {
        train.adam.beta1 = parse_value<double>(key, value);
    } else if (key == "beta2") {
        train.adam.beta2 = parse_value<double>(key, value);
    } else if (key == "epsilon") {
        train.adam.epsilon = parse_value<double>(key, value);
    } else if (key == "angle_scale") {
        qpf.angle_scale = parse_value<double>(key, value);
    } else if (key == "circuit") {
        qpf.circuit = filter::parse_circuit(value);
    } else if (key == "window_map") {
        qpf.window_map = filter::parse_window_map(value);
    } else if (key == "jobs") {
        jobs = parse_value<size_t>(key, value);
    } else if (key == "pairs") {
        pairs = parse_pairs(value);
    } else if (key == "feature_cache") {
        feature_cache = value;
    } else {
        throw UsageError(fmt::format("unknown configuration key '{}'", raw_key));
    }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::entries() const {
    return {
        {"dataset", dataset},
        {"data_root", data_root.string()},
        {"arms", arms_text(arms)},
        {"protocol", results::protocol_name(protocol)},
        {"trials", std::to_string(trials)},
        {"per_class_train", std::to_string(per_class_train)},
        {"per_class_test", std::to_string(per_class_test)},
        {"base_seed", std::to_string(base_seed)},
        {"epochs", std::to_string(train.epochs)},
        {"batch_size", std::to_string(train.batch_size)},
        {"hidden", std::to_string(train.hidden)},
        {"lr", real_text(train.adam.lr)},
        {"beta1", real_text(train.adam.beta1)},
        {"beta2", real_text(train.adam.beta2)},
        {"epsilon", real_text(train.adam.epsilon)},
        {"angle_scale", real_text(qpf.angle_scale)},
        {"circuit", filter::format_circuit(qpf.circuit)},
        {"window_map", filter::format_window_map(qpf.window_map)},
        {"jobs", std::to_string(jobs)},
        {"pairs", format_pairs(pairs)},
        {"feature_cache", feature_cache.string()},
    };
}

std::string ExperimentConfig::get(std::string_view raw_key) const {
    std::string key(raw_key);
    std::replace(key.begin(), key.end(), '-', '_');
    for (auto &[k, v] : entries()) {
        if (k == key) {
            return v;
        }
    }
    throw UsageError(fmt::format("unknown configuration key '{}'", raw_key));
}

void ExperimentConfig::load_file(const fs::path &path) {
    size_t line_no = 0;
    for (const auto &line : io::lines(io::read_text(path))) {
        line_no++;
        auto text = io::trim(std::string_view(line).substr(0, line.find('#')));
        if (text.empty()) {
            continue;
        }
        auto eq = text.find('=');
        if (eq == std::string_view::npos) {
            throw UsageError(fmt::format("{}:{}: expected key = value", path.string(), line_no));
        }
        set(text.substr(0, eq), text.substr(eq + 1));
    }
}

void ExperimentConfig::validate() const {
    const auto &info = data::dataset_info(dataset);
    if (trials == 0) {
        throw UsageError("trials must be at least 1");
    }
    if (protocol == Protocol::SmallSample && (per_class_train == 0 || per_class_test == 0)) {
        throw UsageError("small-sample runs need positive per-class train and test counts");
    }
    if (train.batch_size == 0) {
        throw UsageError("batch size must be at least 1");
    }
    if (train.hidden == 0) {
        throw UsageError("hidden width must be at least 1");
    }
    if (!(train.adam.lr > 0.0) || !(train.adam.epsilon > 0.0) || !(train.adam.beta1 >= 0.0 && train.adam.beta1 < 1.0) ||
        !(train.adam.beta2 >= 0.0 && train.adam.beta2 < 1.0)) {
        throw UsageError("Adam needs lr > 0, epsilon > 0 and betas in [0, 1)");
    }
    if (jobs == 0) {
        throw UsageError("jobs must be at least 1");
    }
    filter::validate(qpf);
    for (auto p : pairs) {
        if (p.a == p.b || p.a < 0 || p.b < 0 || p.a >= info.n_classes || p.b >= info.n_classes) {
            throw UsageError(fmt::format("pair ({}, {}) is not valid for {} classes", p.a, p.b, info.n_classes));
        }
    }
}

std::vector<ClassPair> enumerate_pairs(int n_classes) {
    std::vector<ClassPair> out;
    for (int a = 0; a < n_classes; a++) {
        for (int b = 0; b < n_classes; b++) {
            if (a != b) {
                out.push_back({a, b});
            }
        }
    }
    return out;
}

std::vector<ClassPair> parse_pairs(std::string_view text) {
    std::vector<ClassPair> out;
    for (const auto &item : io::split(text, ';')) {
        auto trimmed = io::trim(item);
        if (trimmed.empty()) {
            continue;
        }
        auto parts = io::split(trimmed, ',');
        if (parts.size() != 2) {
            throw UsageError(fmt::format("pair '{}' must be written a,b", trimmed));
        }
        out.push_back({parse_value<int>("pair", parts[0]), parse_value<int>("pair", parts[1])});
    }
    return out;
}

std::string format_pairs(const std::vector<ClassPair> &pairs) {
    std::string out;
    for (auto p : pairs) {
        if (!out.empty()) {
            out += ';';
        }
        out += fmt::format("{},{}", p.a, p.b);
    }
    return out;
}

uint64_t derive_seed(uint64_t base_seed, ClassPair pair, uint64_t trial, SeedRole role) {
    constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
    uint64_t h = SplitMix64::mix(base_seed + kGolden);
    for (uint64_t v : {static_cast<uint64_t>(static_cast<uint32_t>(pair.a)),
                       static_cast<uint64_t>(static_cast<uint32_t>(pair.b)), trial, static_cast<uint64_t>(role)}) {
        h = SplitMix64::mix(h ^ SplitMix64::mix(v + kGolden));
    }
    return h;
}

// --- Workspace -----------------------------------------------------------------

const data::LabeledSet &Workspace::inputs(Arm arm, data::Partition partition) const {
    const bool train = partition == data::Partition::Train;
    if (arm == Arm::NN) {
        return train ? dataset.train : dataset.test;
    }
    const auto &features = train ? train_features : test_features;
    if (!features) {
        throw UsageError("filter outputs were not prepared for the QPF-NN arm");
    }
    return *features;
}

data::LabeledSet transform_set(const data::LabeledSet &images, const filter::QpfConfig &config) {
    if (images.sample_shape.size() != 2 || images.sample_shape[0] != images.sample_shape[1]) {
        throw UsageError("the filter needs square single-channel images");
    }
    const size_t m = images.sample_shape[0];
    const filter::Filter qpf(config);
    data::LabeledSet out;
    out.sample_shape = {4, m / 2, m / 2};
    out.labels = images.labels;
    out.n_classes = images.n_classes;
    out.partition = images.partition;
    out.values.resize(images.values.rows(), images.values.cols());
    for (size_t i = 0; i < images.size(); i++) {
        qpf.transform_into({m, images.sample(i)},
                           {out.values.data() + i * static_cast<size_t>(out.values.cols()),
                            static_cast<size_t>(out.values.cols())});
    }
    return out;
}

namespace {

std::string filter_sidecar(const filter::QpfConfig &config) {
    return fmt::format("circuit={}\nangle_scale={}\nwindow_map={}\n", filter::format_circuit(config.circuit),
                       config.angle_scale, filter::format_window_map(config.window_map));
}

fs::path cache_file(const fs::path &dir, const std::string &dataset, data::Partition p, const char *what) {
    return dir / fmt::format("{}-{}-qpf-{}.idx", dataset, data::partition_name(p), what);
}

data::LabeledSet load_cached(const fs::path &dir, const data::Dataset &ds, data::Partition p) {
    const auto &images = p == data::Partition::Train ? ds.train : ds.test;
    auto set = data::load_idx(cache_file(dir, ds.info.id, p, "images"), cache_file(dir, ds.info.id, p, "labels"),
                              {p, ds.info.n_classes, false});
    const std::vector<size_t> shape = {4, ds.info.image_side / 2, ds.info.image_side / 2};
    if (set.sample_shape != shape || set.labels != images.labels) {
        throw DataError(fmt::format("feature cache in '{}' does not match the {} {} set", dir.string(), ds.info.id,
                                    data::partition_name(p)));
    }
    set.validate(-1.0, 1.0);
    return set;
}

}  // namespace

void write_feature_cache(const Workspace &ws, const filter::QpfConfig &config, const fs::path &dir) {
    for (auto p : {data::Partition::Train, data::Partition::Test}) {
        data::write_idx(ws.inputs(Arm::QpfNN, p), cache_file(dir, ws.dataset.info.id, p, "images"),
                        cache_file(dir, ws.dataset.info.id, p, "labels"));
    }
    io::write_atomic(dir / fmt::format("{}-qpf.txt", ws.dataset.info.id), filter_sidecar(config));
}

void ensure_features(Workspace &ws, const ExperimentConfig &config) {
    if (ws.train_features && ws.test_features) {
        return;
    }
    if (!config.feature_cache.empty()) {
        const auto sidecar = config.feature_cache / fmt::format("{}-qpf.txt", ws.dataset.info.id);
        if (io::read_text(sidecar) != filter_sidecar(config.qpf)) {
            throw DataError(fmt::format("feature cache '{}' was built with a different filter configuration",
                                        config.feature_cache.string()));
        }
        ws.train_features = load_cached(config.feature_cache, ws.dataset, data::Partition::Train);
        ws.test_features = load_cached(config.feature_cache, ws.dataset, data::Partition::Test);
        log::info("loaded filter outputs from {}", config.feature_cache.string());
        return;
    }
    ws.train_features = transform_set(ws.dataset.train, config.qpf);
    ws.test_features = transform_set(ws.dataset.test, config.qpf);
}

Workspace prepare_workspace(const ExperimentConfig &config) {
    Workspace ws;
    ws.dataset = data::load_dataset(config.dataset, config.data_root);
    log::info("loaded {}: {} train / {} test images", ws.dataset.info.display_name, ws.dataset.train.size(),
              ws.dataset.test.size());
    const auto arms = arms_of(config.arms);
    if (std::find(arms.begin(), arms.end(), Arm::QpfNN) != arms.end()) {
        ensure_features(ws, config);
    }
    return ws;
}

// --- Single pair -----------------------------------------------------------------

std::vector<ArmOutcome> run_pair(const ExperimentConfig &config, const Workspace &ws, ClassPair pair, size_t trial) {
    auto selected = data::extract_pair(ws.dataset.train, ws.dataset.test, pair.a, pair.b);
    if (config.protocol == Protocol::SmallSample) {
        selected = data::draw_small_sample(selected, derive_seed(config.base_seed, pair, trial, SeedRole::Draw),
                                           config.per_class_train, config.per_class_test);
    }
    const uint64_t init_seed = derive_seed(config.base_seed, pair, trial, SeedRole::Init);
    nn::TrainConfig train_config = config.train;
    train_config.seed = derive_seed(config.base_seed, pair, trial, SeedRole::Shuffle);

    std::vector<ArmOutcome> outcomes;
    for (Arm arm : arms_of(config.arms)) {
        const auto start = std::chrono::steady_clock::now();
        const auto train_set = data::materialize(ws.inputs(arm, data::Partition::Train), selected.train);
        const auto test_set = data::materialize(ws.inputs(arm, data::Partition::Test), selected.test);
        auto model = nn::init_model(train_set.sample_size(), config.train.hidden, 2, init_seed);
        ArmOutcome out;
        out.arm = arm;
        out.history = nn::train(model, train_set.values, train_set.labels, train_config);
        out.accuracy = nn::evaluate(model, test_set.values, test_set.labels);
        out.sample_digest = data::selection_digest(selected);
        out.wall_time_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

// --- Result store ------------------------------------------------------------------

ResultStore::ResultStore(fs::path journal, uint64_t run_id) : journal_(std::move(journal)) {
    const auto id_text = fmt::format("{:016x}", run_id);
    if (fs::exists(journal_)) {
        std::string found;
        for (const auto &[k, v] : results::read_comments(journal_)) {
            if (k == "run_id") {
                found = v;
            }
        }
        if (found != id_text) {
            throw UsageError(fmt::format("'{}' belongs to a different run (run_id {} vs {}); use a fresh output "
                                         "directory",
                                         journal_.string(), found, id_text));
        }
        for (auto &row : results::read_rows(journal_)) {
            rows_[{row.arm, row.class_a, row.class_b, row.trial}] = row;
        }
        if (!rows_.empty()) {
            log::info("resuming: {} finished runs found in {}", rows_.size(), journal_.string());
        }
    } else {
        io::write_atomic(journal_, fmt::format("# run_id={}\n{}\n", id_text, results::kJournalHeader));
    }
}

std::optional<ResultRow> ResultStore::find(Arm arm, ClassPair pair, size_t trial) const {
    std::lock_guard lock(mutex_);
    auto it = rows_.find({arm, pair.a, pair.b, trial});
    if (it == rows_.end()) {
        return std::nullopt;
    }
    return it->second;
}

void ResultStore::append(const ResultRow &row) {
    std::lock_guard lock(mutex_);
    auto [it, inserted] = rows_.try_emplace({row.arm, row.class_a, row.class_b, row.trial}, row);
    if (!inserted) {
        return;
    }
    if (!journal_.empty()) {
        io::append_line(journal_, results::format_row(row, true));
    }
}

std::vector<ResultRow> ResultStore::rows() const {
    std::lock_guard lock(mutex_);
    std::vector<ResultRow> out;
    for (const auto &[k, row] : rows_) {
        out.push_back(row);
    }
    std::sort(out.begin(), out.end(), results::canonical_less);
    return out;
}

// --- Protocols -------------------------------------------------------------------

namespace {

/// Runs fn(0..n-1) on `jobs` threads; rethrows the first failure.
void parallel_for(size_t n, size_t jobs, const std::function<void(size_t)> &fn) {
    std::atomic<size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (!failed) {
            size_t i = next++;
            if (i >= n) {
                return;
            }
            try {
                fn(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) {
                    error = std::current_exception();
                }
                failed = true;
            }
        }
    };
    const size_t threads = std::min(std::max<size_t>(jobs, 1), std::max<size_t>(n, 1));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (size_t t = 0; t < threads; t++) {
            pool.emplace_back(worker);
        }
    }
    if (error) {
        std::rethrow_exception(error);
    }
}

std::vector<ClassPair> configured_pairs(const ExperimentConfig &config, const Workspace &ws) {
    return config.pairs.empty() ? enumerate_pairs(ws.dataset.info.n_classes) : config.pairs;
}

/// Runs (pair, trial) unless every arm already has a stored result.
void run_task(const ExperimentConfig &config, const Workspace &ws, ResultStore &store, ClassPair pair, size_t trial) {
    const auto arms = arms_of(config.arms);
    bool done = true;
    for (Arm arm : arms) {
        done = done && store.find(arm, pair, trial).has_value();
    }
    if (done) {
        return;
    }
    const uint64_t seed = derive_seed(config.base_seed, pair, trial,
                                      config.protocol == Protocol::SmallSample ? SeedRole::Draw : SeedRole::Init);
    for (const auto &out : run_pair(config, ws, pair, trial)) {
        ResultRow row;
        row.protocol = config.protocol;
        row.dataset = config.dataset;
        row.arm = out.arm;
        row.class_a = pair.a;
        row.class_b = pair.b;
        row.trial = trial;
        row.seed = seed;
        row.accuracy = out.accuracy;
        row.epochs = config.train.epochs;
        row.sample_digest = out.sample_digest;
        row.wall_time_ms = out.wall_time_ms;
        store.append(row);
    }
}

class ProgressCounter {
  public:
    ProgressCounter(const Progress &progress, size_t total) : progress_(progress), total_(total) {}
    void tick() {
        std::lock_guard lock(mutex_);
        done_++;
        if (progress_) {
            progress_(done_, total_);
        }
    }

  private:
    const Progress &progress_;
    size_t total_;
    size_t done_ = 0;
    std::mutex mutex_;
};

}  // namespace

std::map<Arm, results::PairMatrix> run_full_sweep(const ExperimentConfig &config, const Workspace &ws,
                                                  ResultStore &store, const Progress &progress) {
    const auto pairs = configured_pairs(config, ws);
    ProgressCounter counter(progress, pairs.size());
    parallel_for(pairs.size(), config.jobs, [&](size_t i) {
        run_task(config, ws, store, pairs[i], 0);
        counter.tick();
    });
    std::map<Arm, results::PairMatrix> out;
    for (Arm arm : arms_of(config.arms)) {
        results::PairMatrix matrix(ws.dataset.info.n_classes);
        for (auto p : pairs) {
            matrix.set(p.a, p.b, store.find(arm, p, 0)->accuracy);
        }
        out.emplace(arm, std::move(matrix));
    }
    return out;
}

std::map<Arm, results::TrialSeries> run_small_sample(const ExperimentConfig &config, const Workspace &ws,
                                                     ResultStore &store, const Progress &progress) {
    const auto pairs = configured_pairs(config, ws);
    const size_t total = pairs.size() * config.trials;
    ProgressCounter counter(progress, total);
    parallel_for(total, config.jobs, [&](size_t i) {
        run_task(config, ws, store, pairs[i % pairs.size()], i / pairs.size());
        counter.tick();
    });
    std::map<Arm, results::TrialSeries> out;
    for (Arm arm : arms_of(config.arms)) {
        results::TrialSeries series;
        for (size_t t = 0; t < config.trials; t++) {
            double sum = 0.0;
            for (auto p : pairs) {
                sum += store.find(arm, p, t)->accuracy;
            }
            series.per_trial.push_back(sum / static_cast<double>(pairs.size()));
        }
        out.emplace(arm, std::move(series));
    }
    return out;
}

uint64_t run_id(const ExperimentConfig &config, const data::Dataset &dataset) {
    Fnv1a64 h;
    auto add = [&](std::string_view s) {
        h.update(s.data(), s.size());
        h.update("\n", 1);
    };
    add(kVersion);
    for (const auto &[k, v] : config.entries()) {
        if (k == "jobs" || k == "data_root" || k == "feature_cache") {
            continue;
        }
        add(k + "=" + v);
    }
    for (const auto &[file, sum] : dataset.checksums) {
        add(fmt::format("{}={:016x}", file, sum));
    }
    return h.value();
}

// --- Full command ------------------------------------------------------------------

namespace {

std::string timestamp() {
    return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(
                                                     std::chrono::system_clock::now())));
}

struct Manifest {
    std::string command;
    std::string status = "incomplete";
    std::string started;
    std::string finished;
    std::string run_id;
    std::string error;
    std::vector<std::pair<std::string, std::string>> config;
    std::vector<std::pair<std::string, uint64_t>> checksums;
    std::vector<std::pair<std::string, std::string>> outcome;

    void write(const fs::path &path) const {
        std::string out = "# qpf-bench run manifest\n";
        out += fmt::format("version={}\ncommand={}\nstatus={}\nstarted={}\n", kVersion, command, status, started);
        if (!finished.empty()) {
            out += fmt::format("finished={}\n", finished);
        }
        if (!run_id.empty()) {
            out += fmt::format("run_id={}\n", run_id);
        }
        out += "pair_draws=per-pair\n";
        for (const auto &[k, v] : config) {
            out += fmt::format("config.{}={}\n", k, v);
        }
        for (const auto &[f, sum] : checksums) {
            out += fmt::format("checksum.{}={:016x}\n", f, sum);
        }
        for (const auto &[k, v] : outcome) {
            out += fmt::format("{}={}\n", k, v);
        }
        if (!error.empty()) {
            out += fmt::format("error={}\n", error);
        }
        io::write_atomic(path, out);
    }
};

}  // namespace

RunSummary run_experiment(const ExperimentConfig &config, const fs::path &out_dir, std::string_view command,
                          const Progress &progress) {
    config.validate();
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) {
        throw DataError(fmt::format("cannot create output directory '{}'", out_dir.string()));
    }
    const auto manifest_path = out_dir / "manifest.txt";
    Manifest manifest;
    manifest.command = command;
    manifest.started = timestamp();
    manifest.config = config.entries();
    manifest.write(manifest_path);

    try {
        auto ws = prepare_workspace(config);
        const auto id = run_id(config, ws.dataset);
        const auto id_text = fmt::format("{:016x}", id);
        manifest.run_id = id_text;
        manifest.checksums = ws.dataset.checksums;
        manifest.write(manifest_path);

        ResultStore store(out_dir / "journal.csv", id);
        RunSummary summary;
        summary.out_dir = out_dir;
        if (config.protocol == Protocol::Full) {
            auto matrices = run_full_sweep(config, ws, store, progress);
            for (const auto &[arm, matrix] : matrices) {
                summary.means[arm] = matrix.mean();
                report::render_heatmap(matrix, out_dir / (arm == Arm::NN ? "heatmap_nn.pgm" : "heatmap_qpfnn.pgm"));
            }
        } else {
            auto series = run_small_sample(config, ws, store, progress);
            for (const auto &[arm, s] : series) {
                summary.means[arm] = s.mean();
            }
            auto find = [&](Arm arm) { return series.count(arm) ? &series.at(arm) : nullptr; };
            report::render_trial_curve(find(Arm::NN), find(Arm::QpfNN), out_dir / "trial_curve.csv");
        }

        const auto rows = store.rows();
        std::string results_text = fmt::format(
            "# qpf-bench results\n# manifest=manifest.txt run_id={} protocol={} dataset={} pair_draws=per-pair\n{}\n",
            id_text, results::protocol_name(config.protocol), config.dataset, results::kResultsHeader);
        std::string timings_text = "protocol,dataset,arm,class_a,class_b,trial,wall_time_ms\n";
        for (const auto &row : rows) {
            results_text += results::format_row(row, false) + "\n";
            timings_text += fmt::format("{},{},{},{},{},{},{:.3f}\n", results::protocol_name(row.protocol),
                                        row.dataset, results::arm_name(row.arm), row.class_a, row.class_b, row.trial,
                                        row.wall_time_ms);
        }
        io::write_atomic(out_dir / "results.csv", results_text);
        io::write_atomic(out_dir / "timings.csv", timings_text);
        summary.rows = rows.size();

        manifest.status = "complete";
        manifest.finished = timestamp();
        manifest.outcome.emplace_back("rows", std::to_string(rows.size()));
        for (const auto &[arm, mean] : summary.means) {
            manifest.outcome.emplace_back(fmt::format("mean.{}", results::arm_name(arm)), fmt::format("{}", mean));
        }
        manifest.write(manifest_path);
        return summary;
    } catch (const std::exception &e) {
        manifest.status = "failed";
        manifest.finished = timestamp();
        manifest.error = e.what();
        manifest.write(manifest_path);
        throw;
    }
}

}  // namespace qpf::harness
