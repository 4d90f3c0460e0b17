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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qpf/qpf.h"
#include "test_util.hpp"

namespace {

using qpf::testing::fixture;
using qpf::testing::TempDir;

const double kPi = 3.14159265358979323846;

TEST(CApi, Version) { EXPECT_STREQ(qpf_version(), "0.1.0"); }

TEST(CApi, StateLifecycle) {
    qpf_state *s = nullptr;
    ASSERT_EQ(qpf_state_create(2, &s), QPF_OK);
    EXPECT_EQ(qpf_state_qubits(s), 2);
    ASSERT_EQ(qpf_state_apply_ry(s, 1, kPi / 2), QPF_OK);
    ASSERT_EQ(qpf_state_apply_cnot(s, 1, 0), QPF_OK);
    double amps[8];
    ASSERT_EQ(qpf_state_amplitudes(s, amps, 8), QPF_OK);
    EXPECT_NEAR(amps[0], 1 / std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(amps[6], 1 / std::sqrt(2.0), 1e-12);
    double z = 2;
    ASSERT_EQ(qpf_state_expect_z(s, 0, &z), QPF_OK);
    EXPECT_NEAR(z, 0.0, 1e-12);

    EXPECT_EQ(qpf_state_amplitudes(s, amps, 7), QPF_ERROR_USAGE);
    EXPECT_EQ(qpf_state_apply_cnot(s, 1, 1), QPF_ERROR_USAGE);
    EXPECT_NE(std::string(qpf_last_error()).find("qubit"), std::string::npos) << qpf_last_error();
    EXPECT_EQ(qpf_state_apply_ry(nullptr, 0, 0.0), QPF_ERROR_USAGE);
    qpf_state_destroy(s);
    qpf_state_destroy(nullptr);

    qpf_state *big = nullptr;
    EXPECT_EQ(qpf_state_create(13, &big), QPF_ERROR_USAGE);
    EXPECT_EQ(big, nullptr);
}

TEST(CApi, FilterWindowAndImage) {
    qpf_filter *f = nullptr;
    ASSERT_EQ(qpf_filter_create(nullptr, 0.0, nullptr, &f), QPF_OK);
    const double px[4] = {1, 0, 0, 0};
    double out[4], sim[4];
    ASSERT_EQ(qpf_filter_window(f, px, out), QPF_OK);
    ASSERT_EQ(qpf_filter_window_statevector(f, px, sim), QPF_OK);
    const double want[4] = {-1, -1, 1, 1};
    for (int k = 0; k < 4; k++) {
        EXPECT_NEAR(out[k], want[k], 1e-12);
        EXPECT_NEAR(sim[k], want[k], 1e-12);
    }
    std::vector<double> img(28 * 28, 0.25), feat(28 * 28);
    ASSERT_EQ(qpf_filter_image(f, img.data(), 28, feat.data()), QPF_OK);
    EXPECT_NEAR(feat[0], std::cos(kPi / 4), 1e-12);
    EXPECT_NEAR(feat[14 * 14], std::cos(kPi / 4) * std::cos(kPi / 4), 1e-12);
    EXPECT_EQ(qpf_filter_image(f, img.data(), 27, feat.data()), QPF_ERROR_USAGE);

    qpf_filter *same = nullptr;
    ASSERT_EQ(qpf_filter_create("cnot:0,1 cnot:2,3", kPi, "0,1,2,3", &same), QPF_OK);
    double out2[4];
    ASSERT_EQ(qpf_filter_window(same, px, out2), QPF_OK);
    EXPECT_EQ(std::memcmp(out, out2, sizeof out), 0);
    qpf_filter_destroy(same);
    qpf_filter_destroy(f);

    qpf_filter *bad = nullptr;
    EXPECT_EQ(qpf_filter_create("cnot:0,9", 0.0, nullptr, &bad), QPF_ERROR_USAGE);
    EXPECT_EQ(qpf_filter_create(nullptr, 0.0, "0,0,1,2", &bad), QPF_ERROR_USAGE);
}

TEST(CApi, Config) {
    qpf_config *c = nullptr;
    ASSERT_EQ(qpf_config_create(&c), QPF_OK);
    ASSERT_EQ(qpf_config_set(c, "trials", "12"), QPF_OK);
    ASSERT_EQ(qpf_config_set(c, "per-class-test", "5"), QPF_OK);
    char buf[64];
    ASSERT_EQ(qpf_config_get(c, "trials", buf, sizeof buf), QPF_OK);
    EXPECT_STREQ(buf, "12");
    ASSERT_EQ(qpf_config_get(c, "per_class_test", buf, sizeof buf), QPF_OK);
    EXPECT_STREQ(buf, "5");
    EXPECT_EQ(qpf_config_get(c, "circuit", buf, 4), QPF_ERROR_USAGE);
    EXPECT_EQ(qpf_config_set(c, "nonsense", "1"), QPF_ERROR_USAGE);
    EXPECT_EQ(qpf_config_load_file(c, "/no/such/file.cfg"), QPF_ERROR_USAGE);
    qpf_config_destroy(c);
}

struct LogCapture {
    std::vector<std::string> lines;
};

TEST(CApi, RunAndReport) {
    TempDir root;
    std::filesystem::create_directories(root / "mnist");
    for (auto [from, to] : {std::pair{"mnist-sample-images.idx", "train-images-idx3-ubyte"},
                            std::pair{"mnist-sample-labels.idx", "train-labels-idx1-ubyte"},
                            std::pair{"mnist-sample-images.idx", "t10k-images-idx3-ubyte"},
                            std::pair{"mnist-sample-labels.idx", "t10k-labels-idx1-ubyte"}}) {
        std::filesystem::copy_file(fixture(from), root / "mnist" / to);
    }
    LogCapture log;
    qpf_set_log_callback([](qpf_log_level, const char *msg, void *user) {
        static_cast<LogCapture *>(user)->lines.emplace_back(msg);
    }, &log);

    qpf_config *c = nullptr;
    ASSERT_EQ(qpf_config_create(&c), QPF_OK);
    ASSERT_EQ(qpf_config_set(c, "data_root", root.path().c_str()), QPF_OK);
    ASSERT_EQ(qpf_config_set(c, "protocol", "full"), QPF_OK);
    ASSERT_EQ(qpf_config_set(c, "pairs", "0,1;1,0"), QPF_OK);
    ASSERT_EQ(qpf_config_set(c, "epochs", "2"), QPF_OK);
    ASSERT_EQ(qpf_config_set(c, "hidden", "8"), QPF_OK);

    TempDir out;
    size_t progress_calls = 0;
    qpf_run_result result{};
    ASSERT_EQ(qpf_run(c, (out / "run").c_str(), "capi-test",
                      [](size_t done, size_t total, void *user) {
                          EXPECT_LE(done, total);
                          ++*static_cast<size_t *>(user);
                      },
                      &progress_calls, &result),
              QPF_OK)
        << qpf_last_error();
    EXPECT_EQ(result.rows, 4u);
    EXPECT_EQ(progress_calls, 2u);
    EXPECT_GE(result.nn_mean, 0.0);
    EXPECT_LE(result.qpfnn_mean, 1.0);
    EXPECT_FALSE(log.lines.empty());

    size_t n_train = 0, n_test = 0;
    ASSERT_EQ(qpf_filter_dataset(c, (out / "cache").c_str(), &n_train, &n_test), QPF_OK) << qpf_last_error();
    EXPECT_EQ(n_train, 120u);
    EXPECT_TRUE(std::filesystem::exists(out / "cache/mnist-qpf.txt"));

    size_t cells = 0;
    ASSERT_EQ(qpf_report(out.path().c_str(), (out / "summary.csv").c_str(), &cells), QPF_OK) << qpf_last_error();
    EXPECT_EQ(cells, 2u);
    TempDir empty;
    EXPECT_EQ(qpf_report(empty.path().c_str(), nullptr, &cells), QPF_ERROR_DATA);
    EXPECT_EQ(cells, 0u);

    ASSERT_EQ(qpf_config_set(c, "dataset", "cifar10"), QPF_OK);
    EXPECT_EQ(qpf_run(c, (out / "nocifar").c_str(), nullptr, nullptr, nullptr, nullptr), QPF_ERROR_DATA);
    ASSERT_EQ(qpf_config_set(c, "dataset", "mnist"), QPF_OK);
    ASSERT_EQ(qpf_config_set(c, "lr", "1e300"), QPF_OK);
    EXPECT_EQ(qpf_run(c, (out / "nan").c_str(), nullptr, nullptr, nullptr, nullptr), QPF_ERROR_NUMERICAL);
    qpf_config_destroy(c);
    qpf_set_log_callback(nullptr, nullptr);
}

TEST(CApi, ConvertMissingSource) {
    TempDir out;
    qpf_convert_result r{};
    EXPECT_EQ(qpf_convert_gtsrb((out / "nope").c_str(), nullptr, 0, nullptr, 0, (out / "gt").c_str(), &r),
              QPF_ERROR_DATA);
    EXPECT_FALSE(std::filesystem::exists(out / "gt"));
}

}  // namespace
