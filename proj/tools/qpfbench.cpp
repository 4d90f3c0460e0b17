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

// qpfbench: command-line front end. Uses only the public C interface.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <deque>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qpf/qpf.h"

namespace {

struct Overrides {
    std::optional<std::string> config_file;
    std::deque<std::pair<std::string, std::optional<std::string>>> values;
    std::vector<std::string> pairs;
    std::vector<std::string> circuit;

    std::optional<std::string> &slot(const std::string &key) {
        values.emplace_back(key, std::nullopt);
        return values.back().second;
    }
};

int report_failure(qpf_status status) {
    std::fprintf(stderr, "qpfbench: %s\n", qpf_last_error());
    return static_cast<int>(status);
}

void add_config_options(CLI::App *cmd, Overrides &o, bool training) {
    cmd->add_option("--config", o.config_file, "key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--dataset", o.slot("dataset"), "mnist, emnist, cifar10 or gtsrb");
    cmd->add_option("--data-root", o.slot("data_root"), "dataset root (default $QPF_DATA_ROOT or ./data)");
    cmd->add_option("--angle-scale", o.slot("angle_scale"), "radians per unit pixel (default pi)");
    cmd->add_option("--circuit", o.circuit, "CNOT list, e.g. cnot:0,1 cnot:2,3");
    cmd->add_option("--window-map", o.slot("window_map"), "qubits for TL,TR,BL,BR (default 0,1,2,3)");
    if (!training) {
        return;
    }
    cmd->add_option("--arms", o.slot("arms"), "nn, qpf-nn or both");
    cmd->add_option("--pairs", o.pairs, "ordered class pair a,b (repeatable; default all)");
    cmd->add_option("--trials", o.slot("trials"), "number of small-sample trials");
    cmd->add_option("--per-class-train", o.slot("per_class_train"), "training samples per class and trial");
    cmd->add_option("--per-class-test", o.slot("per_class_test"), "test samples per class and trial");
    cmd->add_option("--base-seed", o.slot("base_seed"), "base seed for all derived seeds");
    cmd->add_option("--epochs", o.slot("epochs"), "training epochs (default 30)");
    cmd->add_option("--batch-size", o.slot("batch_size"));
    cmd->add_option("--hidden", o.slot("hidden"), "hidden layer width");
    cmd->add_option("--lr", o.slot("lr"), "Adam learning rate");
    cmd->add_option("--beta1", o.slot("beta1"), "Adam first-moment decay");
    cmd->add_option("--beta2", o.slot("beta2"), "Adam second-moment decay");
    cmd->add_option("--epsilon", o.slot("epsilon"), "Adam epsilon");
    cmd->add_option("--jobs", o.slot("jobs"), "worker threads");
    cmd->add_option("--feature-cache", o.slot("feature_cache"), "directory written by the filter command");
}

// Precedence: defaults < $QPF_DATA_ROOT < config file < flags.
qpf_status build_config(const Overrides &o, const char *protocol, qpf_config **out) {
    qpf_config *cfg = nullptr;
    qpf_status st = qpf_config_create(&cfg);
    if (st != QPF_OK) {
        return st;
    }
    auto set = [&](const char *key, const std::string &value) {
        if (st == QPF_OK) {
            st = qpf_config_set(cfg, key, value.c_str());
        }
    };
    if (const char *root = std::getenv("QPF_DATA_ROOT"); root != nullptr && *root != '\0') {
        set("data_root", root);
    }
    if (o.config_file && st == QPF_OK) {
        st = qpf_config_load_file(cfg, o.config_file->c_str());
    }
    if (protocol != nullptr) {
        set("protocol", protocol);
    }
    for (const auto &[key, value] : o.values) {
        if (value) {
            set(key.c_str(), *value);
        }
    }
    if (!o.pairs.empty()) {
        std::string joined;
        for (const auto &p : o.pairs) {
            joined += (joined.empty() ? "" : ";") + p;
        }
        set("pairs", joined);
    }
    if (!o.circuit.empty()) {
        std::string joined;
        for (const auto &g : o.circuit) {
            joined += (joined.empty() ? "" : " ") + g;
        }
        set("circuit", joined);
    }
    if (st != QPF_OK) {
        qpf_config_destroy(cfg);
        return st;
    }
    *out = cfg;
    return QPF_OK;
}

std::string config_value(const qpf_config *cfg, const char *key) {
    char buf[4096];
    return qpf_config_get(cfg, key, buf, sizeof buf) == QPF_OK ? std::string(buf) : std::string();
}

void print_progress(size_t done, size_t total, void *user) {
    auto *last = static_cast<size_t *>(user);
    size_t step = total >= 20 ? total / 20 : 1;
    if (done == total || done >= *last + step) {
        *last = done;
        std::fprintf(stderr, "  %zu/%zu runs\n", done, total);
    }
}

void print_mean(const char *arm, double mean) {
    if (!std::isnan(mean)) {
        std::printf("%-7s mean accuracy %.4f\n", arm, mean);
    }
}

int run_training(const Overrides &o, const char *protocol, const std::optional<std::string> &out_dir,
                 const std::string &command) {
    qpf_config *cfg = nullptr;
    if (qpf_status st = build_config(o, protocol, &cfg); st != QPF_OK) {
        return report_failure(st);
    }
    std::string dir = out_dir ? *out_dir
                              : "results/" + config_value(cfg, "dataset") + "-" +
                                    (std::string(protocol) == "full" ? "full" : "trials");
    size_t last = 0;
    qpf_run_result result{};
    qpf_status st = qpf_run(cfg, dir.c_str(), command.c_str(), print_progress, &last, &result);
    qpf_config_destroy(cfg);
    if (st != QPF_OK) {
        return report_failure(st);
    }
    std::printf("%zu result rows in %s\n", result.rows, dir.c_str());
    print_mean("NN", result.nn_mean);
    print_mean("QPF-NN", result.qpfnn_mean);
    return 0;
}

std::string command_line(int argc, char **argv) {
    std::string text;
    for (int i = 0; i < argc; i++) {
        text += (i ? " " : "") + std::string(argv[i]);
    }
    return text;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Pairwise benchmark of raw-pixel and quantum pre-processing filter classifiers"};
    app.set_version_flag("--version", std::string(qpf_version()));
    app.require_subcommand(1);
    app.fallthrough();
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress library log messages");

    // convert gtsrb
    auto *convert = app.add_subcommand("convert", "convert a raw dataset tree to IDX files");
    convert->require_subcommand(1);
    auto *gtsrb = convert->add_subcommand("gtsrb", "GTSRB images + annotation CSVs to 32x32 grayscale IDX");
    std::string src_dir, convert_out;
    std::vector<std::string> train_csv, test_csv;
    gtsrb->add_option("--src", src_dir, "GTSRB source directory")->required();
    gtsrb->add_option("--out", convert_out, "output directory, e.g. data/gtsrb")->required();
    gtsrb->add_option("--train-annotations", train_csv, "training annotation CSV (repeatable)");
    gtsrb->add_option("--test-annotations", test_csv, "test annotation CSV (repeatable)");

    // filter
    Overrides filter_opts;
    auto *filter = app.add_subcommand("filter", "apply the filter to a whole dataset and cache the features");
    add_config_options(filter, filter_opts, false);
    std::string filter_out;
    filter->add_option("--out", filter_out, "feature cache directory")->required();

    // sweep / trials
    Overrides sweep_opts, trial_opts;
    std::optional<std::string> sweep_out, trial_out;
    auto *sweep = app.add_subcommand("sweep", "train and test every ordered class pair on the full data");
    add_config_options(sweep, sweep_opts, true);
    sweep->add_option("--out", sweep_out, "output directory (default results/<dataset>-full)");
    auto *trials = app.add_subcommand("trials", "repeated small-sample trials over class pairs");
    add_config_options(trials, trial_opts, true);
    trials->add_option("--out", trial_out, "output directory (default results/<dataset>-trials)");

    // report
    auto *report = app.add_subcommand("report", "summarize result directories and re-render figures");
    std::string report_dir = "results";
    std::optional<std::string> report_out;
    report->add_option("--dir", report_dir, "results directory searched recursively");
    report->add_option("--out", report_out, "summary CSV path (default <dir>/summary.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return QPF_ERROR_USAGE;
    }

    if (quiet) {
        qpf_set_log_callback([](qpf_log_level level, const char *msg, void *) {
            if (level != QPF_LOG_INFO) {
                std::fprintf(stderr, "%s\n", msg);
            }
        }, nullptr);
    }
    const std::string command = command_line(argc, argv);

    if (gtsrb->parsed()) {
        std::vector<const char *> tr, te;
        for (const auto &s : train_csv) tr.push_back(s.c_str());
        for (const auto &s : test_csv) te.push_back(s.c_str());
        qpf_convert_result r{};
        qpf_status st = qpf_convert_gtsrb(src_dir.c_str(), tr.empty() ? nullptr : tr.data(), tr.size(),
                                          te.empty() ? nullptr : te.data(), te.size(), convert_out.c_str(), &r);
        if (st != QPF_OK) {
            return report_failure(st);
        }
        std::printf("train %zu (expected 34799)\ntest  %zu (expected 12630)\nclasses %d (expected 43)\n",
                    r.train_count, r.test_count, r.n_classes);
        return 0;
    }
    if (filter->parsed()) {
        qpf_config *cfg = nullptr;
        if (qpf_status st = build_config(filter_opts, nullptr, &cfg); st != QPF_OK) {
            return report_failure(st);
        }
        size_t n_train = 0, n_test = 0;
        qpf_status st = qpf_filter_dataset(cfg, filter_out.c_str(), &n_train, &n_test);
        std::string dataset = config_value(cfg, "dataset");
        qpf_config_destroy(cfg);
        if (st != QPF_OK) {
            return report_failure(st);
        }
        std::printf("%s: %zu train and %zu test feature maps in %s\n", dataset.c_str(), n_train, n_test,
                    filter_out.c_str());
        return 0;
    }
    if (sweep->parsed()) {
        return run_training(sweep_opts, "full", sweep_out, command);
    }
    if (trials->parsed()) {
        return run_training(trial_opts, "small-sample", trial_out, command);
    }
    if (report->parsed()) {
        std::string out = report_out ? *report_out : report_dir + "/summary.csv";
        size_t cells = 0;
        qpf_status st = qpf_report(report_dir.c_str(), out.c_str(), &cells);
        if (st != QPF_OK) {
            return report_failure(st);
        }
        std::FILE *f = std::fopen(out.c_str(), "rb");
        if (f != nullptr) {
            char buf[4096];
            size_t n;
            while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) {
                std::fwrite(buf, 1, n, stdout);
            }
            std::fclose(f);
        }
        return 0;
    }
    return QPF_ERROR_USAGE;
}
