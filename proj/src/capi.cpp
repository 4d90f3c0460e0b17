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

#include "qpf/qpf.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <string>

#include <fmt/format.h>

#include "qpf/core/data.hpp"
#include "qpf/core/error.hpp"
#include "qpf/core/filter.hpp"
#include "qpf/core/harness.hpp"
#include "qpf/core/io.hpp"
#include "qpf/core/log.hpp"
#include "qpf/core/qsim.hpp"
#include "qpf/core/report.hpp"
#include "qpf/core/version.hpp"

struct qpf_state {
    qpf::qsim::StateVector state;
};

struct qpf_filter {
    qpf::filter::Filter filter;
};

struct qpf_config {
    qpf::harness::ExperimentConfig config;
};

namespace {

thread_local std::string g_last_error;

qpf_status fail(qpf_status status, std::string message) {
    g_last_error = std::move(message);
    return status;
}

/// Runs `fn`, translating exceptions into status codes.
template <typename Fn>
qpf_status guarded(Fn &&fn) noexcept {
    try {
        fn();
        return QPF_OK;
    } catch (const qpf::Error &e) {
        return fail(static_cast<qpf_status>(e.kind()), e.what());
    } catch (const std::bad_alloc &) {
        return fail(QPF_ERROR_INTERNAL, "out of memory");
    } catch (const std::filesystem::filesystem_error &e) {
        return fail(QPF_ERROR_DATA, e.what());
    } catch (const std::exception &e) {
        return fail(QPF_ERROR_INTERNAL, e.what());
    }
}

template <typename T>
void require(const T *p, const char *what) {
    if (p == nullptr) {
        throw qpf::UsageError(fmt::format("{} is NULL", what));
    }
}

}  // namespace

extern "C" {

const char *qpf_version(void) { return qpf::kVersion; }

const char *qpf_last_error(void) { return g_last_error.c_str(); }

void qpf_set_log_callback(qpf_log_fn fn, void *user) {
    if (fn == nullptr) {
        qpf::log::set_sink({});
        return;
    }
    qpf::log::set_sink([fn, user](qpf::log::Level level, std::string_view message) {
        std::string text(message);
        fn(static_cast<qpf_log_level>(level), text.c_str(), user);
    });
}

// --- Statevector -------------------------------------------------------------

qpf_status qpf_state_create(int n_qubits, qpf_state **out) {
    return guarded([&] {
        require(out, "out");
        *out = new qpf_state{qpf::qsim::StateVector(n_qubits)};
    });
}

void qpf_state_destroy(qpf_state *state) { delete state; }

int qpf_state_qubits(const qpf_state *state) { return state ? state->state.n_qubits() : 0; }

qpf_status qpf_state_apply_ry(qpf_state *state, int qubit, double theta) {
    return guarded([&] {
        require(state, "state");
        state->state.apply_ry(qubit, theta);
    });
}

qpf_status qpf_state_apply_cnot(qpf_state *state, int control, int target) {
    return guarded([&] {
        require(state, "state");
        state->state.apply_cnot(control, target);
    });
}

qpf_status qpf_state_expect_z(const qpf_state *state, int qubit, double *out) {
    return guarded([&] {
        require(state, "state");
        require(out, "out");
        *out = state->state.expect_z(qubit);
    });
}

qpf_status qpf_state_amplitudes(const qpf_state *state, double *out, size_t capacity) {
    return guarded([&] {
        require(state, "state");
        require(out, "out");
        auto amps = state->state.amplitudes();
        if (capacity < 2 * amps.size()) {
            throw qpf::UsageError(fmt::format("amplitude buffer holds {} doubles, {} needed", capacity, 2 * amps.size()));
        }
        for (size_t i = 0; i < amps.size(); i++) {
            out[2 * i] = amps[i].real();
            out[2 * i + 1] = amps[i].imag();
        }
    });
}

// --- Filter ------------------------------------------------------------------

qpf_status qpf_filter_create(const char *circuit, double angle_scale, const char *window_map, qpf_filter **out) {
    return guarded([&] {
        require(out, "out");
        qpf::filter::QpfConfig config;
        if (circuit != nullptr) {
            config.circuit = qpf::filter::parse_circuit(circuit);
        }
        if (angle_scale != 0.0) {
            config.angle_scale = angle_scale;
        }
        if (window_map != nullptr) {
            config.window_map = qpf::filter::parse_window_map(window_map);
        }
        *out = new qpf_filter{qpf::filter::Filter(std::move(config))};
    });
}

void qpf_filter_destroy(qpf_filter *filter) { delete filter; }

qpf_status qpf_filter_window(const qpf_filter *filter, const double pixels[4], double out[4]) {
    return guarded([&] {
        require(filter, "filter");
        require(pixels, "pixels");
        require(out, "out");
        auto z = filter->filter.window(std::span<const double, 4>(pixels, 4));
        std::copy(z.begin(), z.end(), out);
    });
}

qpf_status qpf_filter_window_statevector(const qpf_filter *filter, const double pixels[4], double out[4]) {
    return guarded([&] {
        require(filter, "filter");
        require(pixels, "pixels");
        require(out, "out");
        auto z = qpf::filter::filter_window(std::span<const double, 4>(pixels, 4), filter->filter.config());
        std::copy(z.begin(), z.end(), out);
    });
}

qpf_status qpf_filter_image(const qpf_filter *filter, const double *image, size_t m, double *out) {
    return guarded([&] {
        require(filter, "filter");
        require(image, "image");
        require(out, "out");
        filter->filter.transform_into({m, {image, m * m}}, {out, m * m});
    });
}

// --- Configuration -------------------------------------------------------------

qpf_status qpf_config_create(qpf_config **out) {
    return guarded([&] {
        require(out, "out");
        *out = new qpf_config{};
    });
}

void qpf_config_destroy(qpf_config *config) { delete config; }

qpf_status qpf_config_set(qpf_config *config, const char *key, const char *value) {
    return guarded([&] {
        require(config, "config");
        require(key, "key");
        require(value, "value");
        config->config.set(key, value);
    });
}

qpf_status qpf_config_load_file(qpf_config *config, const char *path) {
    return guarded([&] {
        require(config, "config");
        require(path, "path");
        if (!std::filesystem::exists(path)) {
            throw qpf::UsageError(fmt::format("config file '{}' does not exist", path));
        }
        config->config.load_file(path);
    });
}

qpf_status qpf_config_get(const qpf_config *config, const char *key, char *buf, size_t size) {
    return guarded([&] {
        require(config, "config");
        require(key, "key");
        require(buf, "buf");
        auto value = config->config.get(key);
        if (value.size() + 1 > size) {
            throw qpf::UsageError(fmt::format("value of {} needs {} bytes", key, value.size() + 1));
        }
        std::memcpy(buf, value.c_str(), value.size() + 1);
    });
}

// --- Commands ------------------------------------------------------------------

qpf_status qpf_run(const qpf_config *config, const char *out_dir, const char *command, qpf_progress_fn progress,
                   void *user, qpf_run_result *result) {
    return guarded([&] {
        require(config, "config");
        require(out_dir, "out_dir");
        qpf::harness::Progress cb;
        if (progress != nullptr) {
            cb = [progress, user](size_t done, size_t total) { progress(done, total, user); };
        }
        auto summary = qpf::harness::run_experiment(config->config, out_dir, command ? command : "run", cb);
        if (result != nullptr) {
            constexpr double nan = std::numeric_limits<double>::quiet_NaN();
            auto mean = [&](qpf::results::Arm arm) {
                auto it = summary.means.find(arm);
                return it == summary.means.end() ? nan : it->second;
            };
            result->nn_mean = mean(qpf::results::Arm::NN);
            result->qpfnn_mean = mean(qpf::results::Arm::QpfNN);
            result->rows = summary.rows;
        }
    });
}

qpf_status qpf_filter_dataset(const qpf_config *config, const char *out_dir, size_t *train_count,
                              size_t *test_count) {
    return guarded([&] {
        require(config, "config");
        require(out_dir, "out_dir");
        auto cfg = config->config;
        cfg.validate();
        cfg.feature_cache.clear();
        qpf::harness::Workspace ws;
        ws.dataset = qpf::data::load_dataset(cfg.dataset, cfg.data_root);
        qpf::harness::ensure_features(ws, cfg);
        qpf::harness::write_feature_cache(ws, cfg.qpf, out_dir);
        if (train_count) {
            *train_count = ws.train_features->size();
        }
        if (test_count) {
            *test_count = ws.test_features->size();
        }
    });
}

qpf_status qpf_convert_gtsrb(const char *src_dir, const char *const *train_annotations, size_t n_train,
                             const char *const *test_annotations, size_t n_test, const char *out_dir,
                             qpf_convert_result *result) {
    return guarded([&] {
        require(src_dir, "src_dir");
        require(out_dir, "out_dir");
        auto [train, test] = [&] {
            if (train_annotations != nullptr && n_train > 0 && test_annotations != nullptr && n_test > 0) {
                std::vector<std::filesystem::path> tr(train_annotations, train_annotations + n_train);
                std::vector<std::filesystem::path> te(test_annotations, test_annotations + n_test);
                if (!std::filesystem::is_directory(src_dir)) {
                    throw qpf::DataError(fmt::format("GTSRB source directory '{}' does not exist", src_dir));
                }
                return std::pair{tr, te};
            }
            return qpf::data::find_gtsrb_annotations(src_dir);
        }();
        auto report = qpf::data::convert_gtsrb(train, test, out_dir);
        for (const auto &w : report.warnings) {
            qpf::log::warn("{}", w);
        }
        if (result != nullptr) {
            result->train_count = report.train_count;
            result->test_count = report.test_count;
            result->n_classes = report.n_classes;
        }
    });
}

qpf_status qpf_report(const char *results_dir, const char *out_csv, size_t *cells) {
    return guarded([&] {
        require(results_dir, "results_dir");
        auto table = qpf::report::build_summary(results_dir);
        if (cells != nullptr) {
            *cells = table.cells.size();
        }
        if (table.empty()) {
            throw qpf::DataError(fmt::format("no results found under '{}'", results_dir));
        }
        if (out_csv != nullptr) {
            qpf::io::write_atomic(out_csv, qpf::report::summary_csv(table));
        }
        qpf::report::render_directory(results_dir);
    });
}

}  // extern "C"
