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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qpf/core/data.hpp"
#include "qpf/core/error.hpp"
#include "qpf/core/io.hpp"
#include "test_util.hpp"

namespace {

namespace d = qpf::data;
using qpf::testing::fixture;
using qpf::testing::TempDir;

uint32_t be32(const std::vector<uint8_t> &b, size_t at) {
    return (uint32_t{b[at]} << 24) | (uint32_t{b[at + 1]} << 16) | (uint32_t{b[at + 2]} << 8) | b[at + 3];
}

void write_bytes(const std::filesystem::path &p, const std::vector<uint8_t> &bytes) {
    std::ofstream out(p, std::ios::binary);
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

d::LabeledSet synthetic_set(std::vector<int> per_class, size_t features, d::Partition part, uint64_t seed) {
    std::mt19937_64 rng(seed);
    d::LabeledSet set;
    set.partition = part;
    set.n_classes = static_cast<int>(per_class.size());
    set.sample_shape = {features};
    for (int c = 0; c < set.n_classes; c++) {
        for (int i = 0; i < per_class[c]; i++) {
            set.labels.push_back(c);
        }
    }
    std::shuffle(set.labels.begin(), set.labels.end(), rng);
    set.values = qpf::Matrix::Zero(static_cast<Eigen::Index>(set.labels.size()), static_cast<Eigen::Index>(features));
    for (Eigen::Index r = 0; r < set.values.rows(); r++) {
        set.values(r, 0) = static_cast<double>(r);
    }
    return set;
}

TEST(Idx, OfficialHeadersAndCounts) {
    struct Case {
        const char *file;
        uint32_t magic;
        uint32_t count;
    };
    for (auto c : {Case{"mnist-train-head-images.idx", 0x803, 60000}, Case{"mnist-train-head-labels.idx", 0x801, 60000},
                   Case{"mnist-test-head-images.idx", 0x803, 10000}, Case{"mnist-test-head-labels.idx", 0x801, 10000}}) {
        auto raw = qpf::io::read_bytes(fixture(c.file));
        ASSERT_GE(raw.size(), 8u);
        EXPECT_EQ(be32(raw, 0), c.magic) << c.file;
        EXPECT_EQ(be32(raw, 4), c.count) << c.file;
        auto h = d::read_idx_header(fixture(c.file));
        EXPECT_EQ(h.magic, c.magic);
        EXPECT_EQ(h.type, d::kIdxUByte);
        EXPECT_EQ(h.dims[0], c.count);
        if (c.magic == 0x803) {
            EXPECT_EQ(h.dims, (std::vector<uint32_t>{c.count, 28, 28}));
            EXPECT_EQ(h.header_bytes, 16u);
        }
    }
}

TEST(Idx, TruncatedPayloadRejected) {
    EXPECT_THROW(d::load_idx(fixture("mnist-train-head-images.idx"), fixture("mnist-train-head-labels.idx")),
                 qpf::DataError);
}

TEST(Idx, SampleLoadsBytesOver255) {
    auto set = d::load_idx(fixture("mnist-sample-images.idx"), fixture("mnist-sample-labels.idx"));
    auto img = qpf::io::read_bytes(fixture("mnist-sample-images.idx"));
    auto lab = qpf::io::read_bytes(fixture("mnist-sample-labels.idx"));
    ASSERT_EQ(set.size(), 120u);
    EXPECT_EQ(set.sample_shape, (std::vector<size_t>{28, 28}));
    EXPECT_EQ(set.n_classes, 10);
    bool saw_255 = false;
    for (size_t i = 0; i < set.size(); i++) {
        EXPECT_EQ(set.labels[i], lab[8 + i]);
        auto s = set.sample(i);
        for (size_t k = 0; k < 784; k++) {
            uint8_t b = img[16 + i * 784 + k];
            ASSERT_EQ(s[k], b / 255.0);
            if (b == 255) {
                saw_255 = true;
                ASSERT_EQ(s[k], 1.0);
            }
        }
    }
    EXPECT_TRUE(saw_255);
    EXPECT_NO_THROW(set.validate(0.0, 1.0));
}

TEST(Idx, MalformedFilesRejected) {
    TempDir tmp;
    auto img = qpf::io::read_bytes(fixture("mnist-sample-images.idx"));
    auto lab = qpf::io::read_bytes(fixture("mnist-sample-labels.idx"));

    auto bad_magic = img;
    bad_magic[3] = 0x04;
    write_bytes(tmp / "bad-magic", bad_magic);
    EXPECT_THROW(d::load_idx(tmp / "bad-magic", fixture("mnist-sample-labels.idx")), qpf::DataError);

    // labels in the image slot
    EXPECT_THROW(d::load_idx(fixture("mnist-sample-labels.idx"), fixture("mnist-sample-labels.idx")), qpf::DataError);
    EXPECT_THROW(d::load_idx(fixture("mnist-sample-images.idx"), fixture("mnist-sample-images.idx")), qpf::DataError);

    auto short_labels = lab;
    short_labels.pop_back();
    short_labels[7] = 119;
    write_bytes(tmp / "short-labels", short_labels);
    EXPECT_THROW(d::load_idx(fixture("mnist-sample-images.idx"), tmp / "short-labels"), qpf::DataError);

    auto truncated = img;
    truncated.resize(truncated.size() - 1);
    write_bytes(tmp / "truncated", truncated);
    EXPECT_THROW(d::load_idx(tmp / "truncated", fixture("mnist-sample-labels.idx")), qpf::DataError);

    write_bytes(tmp / "tiny", {0, 0});
    EXPECT_THROW(d::read_idx_header(tmp / "tiny"), qpf::DataError);
    EXPECT_THROW(d::load_idx(tmp / "missing", tmp / "missing2"), qpf::DataError);
}

TEST(Idx, RoundTripIsBitExact) {
    TempDir tmp;
    auto set = d::load_idx(fixture("mnist-sample-images.idx"), fixture("mnist-sample-labels.idx"));
    d::write_idx(set, tmp / "a-images", tmp / "a-labels");
    // Pure b/255 values are stored as bytes: identical to the source file.
    EXPECT_EQ(qpf::io::read_bytes(tmp / "a-images"), qpf::io::read_bytes(fixture("mnist-sample-images.idx")));
    EXPECT_EQ(qpf::io::read_bytes(tmp / "a-labels"), qpf::io::read_bytes(fixture("mnist-sample-labels.idx")));

    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1, 1);
    d::LabeledSet feats;
    feats.sample_shape = {4, 3, 3};
    feats.n_classes = 5;
    feats.values.resize(17, 36);
    for (Eigen::Index i = 0; i < feats.values.size(); i++) {
        feats.values.data()[i] = u(rng);
    }
    feats.values(0, 0) = -0.0;
    feats.values(0, 1) = 5e-324;
    for (int i = 0; i < 17; i++) {
        feats.labels.push_back(i % 5);
    }
    d::write_idx(feats, tmp / "f-images", tmp / "f-labels");
    EXPECT_EQ(d::read_idx_header(tmp / "f-images").type, d::kIdxDouble);
    auto back = d::load_idx(tmp / "f-images", tmp / "f-labels", {d::Partition::Test, 5, false});
    EXPECT_EQ(back.sample_shape, feats.sample_shape);
    EXPECT_EQ(back.labels, feats.labels);
    EXPECT_EQ(back.partition, d::Partition::Test);
    ASSERT_EQ(back.values.size(), feats.values.size());
    EXPECT_EQ(std::memcmp(back.values.data(), feats.values.data(), sizeof(double) * feats.values.size()), 0);
}

TEST(Idx, TransposeOption) {
    auto plain = d::load_idx(fixture("mnist-sample-images.idx"), fixture("mnist-sample-labels.idx"));
    auto t = d::load_idx(fixture("mnist-sample-images.idx"), fixture("mnist-sample-labels.idx"),
                         {d::Partition::Train, 0, true});
    for (size_t r = 0; r < 28; r++) {
        for (size_t c = 0; c < 28; c++) {
            EXPECT_EQ(t.sample(3)[r * 28 + c], plain.sample(3)[c * 28 + r]);
        }
    }
}

TEST(Cifar, GrayFormula) {
    EXPECT_EQ(d::rgb_to_gray(0, 0, 0), 0.0);
    EXPECT_NEAR(d::rgb_to_gray(255, 255, 255), 255.0, 1e-12);
    EXPECT_NEAR(d::rgb_to_gray(10, 20, 30), 0.299 * 10 + 0.587 * 20 + 0.114 * 30, 1e-12);
    EXPECT_NEAR(d::rgb_to_gray(10, 20, 30), 18.15, 1e-12);
    EXPECT_NEAR(d::rgb_to_gray(255, 0, 0), 76.245, 1e-12);
}

TEST(Cifar, RecordArithmetic) {
    EXPECT_EQ(d::kCifarRecordBytes, 3073u);
    TempDir tmp;
    std::vector<uint8_t> bytes;
    auto record = [&](uint8_t label, uint8_t r, uint8_t g, uint8_t b) {
        bytes.push_back(label);
        bytes.insert(bytes.end(), 1024, r);
        bytes.insert(bytes.end(), 1024, g);
        bytes.insert(bytes.end(), 1024, b);
    };
    record(3, 128, 128, 128);
    record(9, 255, 0, 0);
    record(0, 10, 20, 30);
    bytes[1 + 5] = 0;  // R of pixel 5 in record 0
    ASSERT_EQ(bytes.size(), 3 * 3073u);
    write_bytes(tmp / "batch.bin", bytes);
    const std::filesystem::path paths[] = {tmp / "batch.bin"};
    auto set = d::load_cifar10(paths, d::Partition::Test);
    ASSERT_EQ(set.size(), 3u);
    EXPECT_EQ(set.labels, (std::vector<int>{3, 9, 0}));
    EXPECT_EQ(set.sample_size(), 1024u);
    EXPECT_NEAR(set.sample(0)[0], 128 / 255.0, 1e-15);
    EXPECT_NEAR(set.sample(0)[5], (0.587 * 128 + 0.114 * 128) / 255, 1e-15);
    EXPECT_NEAR(set.sample(1)[100], 0.299, 1e-15);
    EXPECT_NEAR(set.sample(2)[1023], 18.15 / 255, 1e-15);

    bytes.push_back(0);
    write_bytes(tmp / "batch.bin", bytes);
    EXPECT_THROW(d::load_cifar10(paths, d::Partition::Test), qpf::DataError);
    bytes[0] = 10;
    bytes.pop_back();
    write_bytes(tmp / "batch.bin", bytes);
    EXPECT_THROW(d::load_cifar10(paths, d::Partition::Test), qpf::DataError);
}

TEST(Resize, Examples) {
    d::GrayImage two{2, 2, {0, 1, 0, 1}};
    EXPECT_EQ(d::resize_bilinear(two, 2, 2).pixels, two.pixels);

    std::mt19937_64 rng(32);
    std::uniform_real_distribution<double> u(0, 1);
    d::GrayImage big{32, 32, std::vector<double>(1024)};
    for (auto &p : big.pixels) {
        p = u(rng);
    }
    EXPECT_EQ(d::resize_bilinear(big, 32, 32).pixels, big.pixels);

    // Sample centres map to source x = (i + 0.5) / 2 - 0.5 = -0.25, 0.25, 0.75, 1.25,
    // clamped to [0, 1]; values follow the 0 -> 1 ramp.
    auto four = d::resize_bilinear(two, 4, 4);
    const double row[] = {0.0, 0.25, 0.75, 1.0};
    for (size_t y = 0; y < 4; y++) {
        for (size_t x = 0; x < 4; x++) {
            EXPECT_NEAR(four.at(x, y), row[x], 1e-15);
        }
    }
    EXPECT_THROW(d::resize_bilinear(d::GrayImage{}, 4, 4), qpf::UsageError);
    EXPECT_THROW(d::resize_bilinear(two, 0, 4), qpf::UsageError);
}

TEST(Resize, StaysInRange) {
    std::mt19937_64 rng(33);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 20; t++) {
        size_t w = 1 + rng() % 60, h = 1 + rng() % 60;
        d::GrayImage img{w, h, std::vector<double>(w * h)};
        for (auto &p : img.pixels) {
            p = u(rng);
        }
        for (double v : d::resize_bilinear(img, 32, 32).pixels) {
            ASSERT_GE(v, 0.0);
            ASSERT_LE(v, 1.0);
        }
    }
}

TEST(Decode, PngAndPnm) {
    auto rgb = d::decode_image(fixture("rgb-2x1.png"));
    EXPECT_EQ(rgb.width, 2u);
    EXPECT_EQ(rgb.height, 1u);
    EXPECT_EQ(rgb.rgb, (std::vector<uint8_t>{255, 0, 0, 10, 20, 30}));
    auto gray = d::decode_image(fixture("gray-3x2.png"));
    ASSERT_EQ(gray.rgb.size(), 18u);
    EXPECT_EQ(gray.rgb[3 * 5], 255);
    EXPECT_EQ(gray.rgb[3 * 1 + 2], 50);

    TempDir tmp;
    {
        std::ofstream p6(tmp / "a.ppm", std::ios::binary);
        p6 << "P6\n# comment\n2 1\n255\n";
        const char px[] = {'\xff', 0, 0, 10, 20, 30};
        p6.write(px, 6);
        std::ofstream p2(tmp / "b.pgm");
        p2 << "P2\n2 2\n15\n0 15\n5 10\n";
    }
    EXPECT_EQ(d::decode_image(tmp / "a.ppm").rgb, rgb.rgb);
    auto b = d::decode_image(tmp / "b.pgm");
    EXPECT_EQ(b.rgb[3], 255);
    EXPECT_EQ(b.rgb[6], 85);
    write_bytes(tmp / "junk.png", {1, 2, 3});
    EXPECT_THROW(d::decode_image(tmp / "junk.png"), qpf::DataError);
    EXPECT_THROW(d::decode_image(tmp / "none.ppm"), qpf::DataError);
}

TEST(Gtsrb, PreprocessWhiteImage) {
    auto g = d::preprocess_gtsrb(d::decode_image(fixture("white-15x15.png")));
    EXPECT_EQ(g.width, 32u);
    EXPECT_EQ(g.height, 32u);
    for (double v : g.pixels) {
        EXPECT_EQ(v, 1.0);
    }
}

TEST(Gtsrb, ConvertTree) {
    TempDir src;
    std::filesystem::create_directories(src / "Train/1");
    std::filesystem::create_directories(src / "Test");
    std::filesystem::copy_file(fixture("white-15x15.png"), src / "Train/1/a.png");
    std::filesystem::copy_file(fixture("rgb-2x1.png"), src / "Test/b.png");
    {
        std::ofstream tr(src / "Train.csv");
        tr << "Width,Height,Roi.X1,Roi.Y1,Roi.X2,Roi.Y2,ClassId,Path\n15,15,0,0,15,15,1,Train/1/a.png\n";
        std::ofstream te(src / "Test.csv");
        te << "Width,Height,Roi.X1,Roi.Y1,Roi.X2,Roi.Y2,ClassId,Path\r\n2,1,0,0,2,1,42,Test/b.png\r\n";
    }
    auto [train_csv, test_csv] = d::find_gtsrb_annotations(src.path());
    TempDir out;
    auto report = d::convert_gtsrb(train_csv, test_csv, out.path());
    EXPECT_EQ(report.train_count, 1u);
    EXPECT_EQ(report.test_count, 1u);
    EXPECT_EQ(report.n_classes, 43);
    EXPECT_EQ(report.warnings.size(), 2u);
    auto train = d::load_idx(out / "train-images.idx", out / "train-labels.idx");
    EXPECT_EQ(train.sample_shape, (std::vector<size_t>{32, 32}));
    EXPECT_EQ(train.labels, std::vector<int>{1});
    for (double v : train.sample(0)) {
        EXPECT_EQ(v, 1.0);
    }
    auto test = d::load_idx(out / "test-images.idx", out / "test-labels.idx");
    EXPECT_EQ(test.labels, std::vector<int>{42});
    EXPECT_NEAR(test.sample(0)[0], 0.299, 1e-12);
    EXPECT_NEAR(test.sample(0)[31], 18.15 / 255, 1e-12);

    auto first = qpf::io::read_bytes(out / "test-images.idx");
    d::convert_gtsrb(train_csv, test_csv, out.path());
    EXPECT_EQ(qpf::io::read_bytes(out / "test-images.idx"), first);
}

TEST(Gtsrb, OfficialLayoutAndErrors) {
    TempDir src;
    std::filesystem::create_directories(src / "Final_Training/Images/00007");
    std::filesystem::create_directories(src / "Final_Test/Images");
    std::filesystem::copy_file(fixture("white-15x15.png"), src / "Final_Training/Images/00007/x.png");
    std::filesystem::copy_file(fixture("white-15x15.png"), src / "Final_Test/Images/y.png");
    {
        std::ofstream tr(src / "Final_Training/Images/00007/GT-00007.csv");
        tr << "Filename;Width;Height;Roi.X1;Roi.Y1;Roi.X2;Roi.Y2;ClassId\nx.png;15;15;1;1;14;14;7\n";
        std::ofstream te(src / "Final_Test/Images/GT-final_test.csv");
        te << "Filename;Width;Height;Roi.X1;Roi.Y1;Roi.X2;Roi.Y2;ClassId\ny.png;15;15;1;1;14;14;3\n";
    }
    auto [tr, te] = d::find_gtsrb_annotations(src.path());
    ASSERT_EQ(tr.size(), 1u);
    ASSERT_EQ(te.size(), 1u);
    EXPECT_EQ(tr[0].filename(), "GT-00007.csv");
    EXPECT_EQ(te[0].filename(), "GT-final_test.csv");

    TempDir out;
    {
        std::ofstream bad(src / "Final_Test/Images/GT-final_test.csv");
        bad << "Filename;ClassId\ny.png;43\n";
    }
    EXPECT_THROW(d::convert_gtsrb(tr, te, out / "o"), qpf::DataError);
    EXPECT_FALSE(std::filesystem::exists(out / "o"));
    EXPECT_THROW(d::find_gtsrb_annotations(out / "missing"), qpf::DataError);
}

TEST(Pairs, ExtractPreservesOrderAndRemaps) {
    auto set = d::load_idx(fixture("mnist-sample-images.idx"), fixture("mnist-sample-labels.idx"));
    auto test = set;
    test.partition = d::Partition::Test;
    auto p = d::extract_pair(set, test, 0, 1);
    size_t n0 = std::count(set.labels.begin(), set.labels.end(), 0);
    size_t n1 = std::count(set.labels.begin(), set.labels.end(), 1);
    EXPECT_EQ(p.train.size(), n0 + n1);
    EXPECT_TRUE(std::is_sorted(p.train.indices.begin(), p.train.indices.end()));
    for (size_t k = 0; k < p.train.size(); k++) {
        EXPECT_EQ(p.train.labels[k], set.labels[p.train.indices[k]] == 0 ? 0 : 1);
        EXPECT_TRUE(set.labels[p.train.indices[k]] <= 1);
    }

    auto q = d::extract_pair(set, test, 1, 0);
    EXPECT_EQ(q.train.indices, p.train.indices);
    EXPECT_EQ(q.test.indices, p.test.indices);
    for (size_t k = 0; k < p.train.size(); k++) {
        EXPECT_EQ(q.train.labels[k], 1 - p.train.labels[k]);
    }

    EXPECT_THROW(d::extract_pair(set, test, 3, 3), qpf::UsageError);
    EXPECT_THROW(d::extract_pair(set, test, 0, 10), qpf::UsageError);
    auto no_twos = synthetic_set({5, 5, 0}, 2, d::Partition::Train, 1);
    EXPECT_THROW(d::extract_pair(no_twos, no_twos, 0, 2), qpf::DataError);
}

TEST(Pairs, SmallSampleDraws) {
    auto train = synthetic_set({150, 97, 80}, 3, d::Partition::Train, 2);
    auto test = synthetic_set({30, 25, 20}, 3, d::Partition::Test, 3);
    auto pair = d::extract_pair(train, test, 0, 1);
    for (uint64_t seed = 0; seed < 50; seed++) {
        auto s = d::draw_small_sample(pair, seed);
        ASSERT_EQ(s.train.size(), 160u);
        ASSERT_EQ(s.test.size(), 40u);
        EXPECT_EQ(std::count(s.train.labels.begin(), s.train.labels.end(), 0), 80);
        EXPECT_EQ(std::count(s.test.labels.begin(), s.test.labels.end(), 1), 20);
        EXPECT_EQ(std::set<size_t>(s.train.indices.begin(), s.train.indices.end()).size(), 160u);
        EXPECT_EQ(std::set<size_t>(s.test.indices.begin(), s.test.indices.end()).size(), 40u);
        for (size_t k = 0; k < s.train.size(); k++) {
            ASSERT_LT(s.train.indices[k], train.size());
            EXPECT_EQ(train.labels[s.train.indices[k]], s.train.labels[k] == 0 ? 0 : 1);
        }
        for (size_t k = 0; k < s.test.size(); k++) {
            EXPECT_EQ(test.labels[s.test.indices[k]], s.test.labels[k]);
        }
        auto again = d::draw_small_sample(pair, seed);
        EXPECT_EQ(again.train.indices, s.train.indices);
        EXPECT_EQ(again.test.indices, s.test.indices);
        EXPECT_EQ(d::selection_digest(again), d::selection_digest(s));
        auto other = d::draw_small_sample(pair, seed + 1000);
        EXPECT_NE(other.train.indices, s.train.indices);
        EXPECT_NE(d::selection_digest(other), d::selection_digest(s));
    }

    // A class with exactly 80 training samples is taken whole, in some order.
    auto exact = d::extract_pair(train, test, 2, 0);
    auto s = d::draw_small_sample(exact, 0);
    std::vector<size_t> drawn(s.train.indices.begin(), s.train.indices.begin() + 80);
    std::vector<size_t> all;
    for (size_t i = 0; i < train.size(); i++) {
        if (train.labels[i] == 2) {
            all.push_back(i);
        }
    }
    EXPECT_NE(drawn, all);
    std::sort(drawn.begin(), drawn.end());
    EXPECT_EQ(drawn, all);

    EXPECT_THROW(d::draw_small_sample(exact, 0, 81, 20), qpf::DataError);
    EXPECT_THROW(d::draw_small_sample(exact, 0, 80, 21), qpf::DataError);
}

TEST(Pairs, Materialize) {
    auto train = synthetic_set({10, 10}, 3, d::Partition::Train, 4);
    d::Selection sel{{4, 0, 7}, {1, 0, 1}};
    auto m = d::materialize(train, sel);
    EXPECT_EQ(m.size(), 3u);
    EXPECT_EQ(m.n_classes, 2);
    EXPECT_EQ(m.labels, sel.labels);
    EXPECT_EQ(m.values(0, 0), 4.0);
    EXPECT_EQ(m.values(2, 0), 7.0);
    d::Selection bad{{20}, {0}};
    EXPECT_THROW(d::materialize(train, bad), qpf::UsageError);
}

TEST(Registry, KnownDatasets) {
    EXPECT_EQ(d::dataset_info("mnist").expected_train, 60000u);
    EXPECT_EQ(d::dataset_info("mnist").expected_test, 10000u);
    EXPECT_EQ(d::dataset_info("emnist").n_classes, 47);
    EXPECT_EQ(d::dataset_info("emnist").expected_train, 112800u);
    EXPECT_EQ(d::dataset_info("cifar10").expected_train, 50000u);
    EXPECT_EQ(d::dataset_info("gtsrb").n_classes, 43);
    EXPECT_EQ(d::dataset_info("gtsrb").expected_train, 34799u);
    EXPECT_EQ(d::dataset_info("gtsrb").expected_test, 12630u);
    EXPECT_EQ(d::known_datasets().size(), 4u);
    EXPECT_THROW(d::dataset_info("imagenet"), qpf::UsageError);
}

TEST(Registry, LoadDatasetFromDirectory) {
    TempDir root;
    std::filesystem::create_directories(root / "mnist");
    std::filesystem::copy_file(fixture("mnist-sample-images.idx"), root / "mnist/train-images-idx3-ubyte");
    std::filesystem::copy_file(fixture("mnist-sample-labels.idx"), root / "mnist/train-labels-idx1-ubyte");
    std::filesystem::copy_file(fixture("mnist-sample-images.idx"), root / "mnist/t10k-images-idx3-ubyte");
    std::filesystem::copy_file(fixture("mnist-sample-labels.idx"), root / "mnist/t10k-labels-idx1-ubyte");
    auto ds = d::load_dataset("mnist", root.path());
    EXPECT_EQ(ds.train.size(), 120u);
    EXPECT_EQ(ds.test.partition, d::Partition::Test);
    EXPECT_EQ(ds.checksums.size(), 4u);
    EXPECT_EQ(ds.checksums[0].second, d::file_checksum(fixture("mnist-sample-images.idx")));
    EXPECT_THROW(d::load_dataset("cifar10", root.path()), qpf::DataError);
}

TEST(Registry, OfficialMnistCounts) {
    if (!qpf::testing::have_dataset("mnist")) {
        GTEST_SKIP() << "MNIST not present under " << qpf::testing::data_root();
    }
    auto ds = d::load_dataset("mnist", qpf::testing::data_root());
    EXPECT_EQ(ds.train.size(), 60000u);
    EXPECT_EQ(ds.test.size(), 10000u);
    EXPECT_EQ(ds.train.sample_size(), 784u);
    EXPECT_EQ(*std::max_element(ds.train.labels.begin(), ds.train.labels.end()), 9);
    EXPECT_NO_THROW(ds.train.validate(0.0, 1.0));
}

}  // namespace
