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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qpf/core/linalg.hpp"

/// Dataset ingestion: IDX files (MNIST, EMNIST, converted GTSRB, feature
/// caches), CIFAR-10 binary batches, GTSRB conversion from source images,
/// binary pair extraction and seeded small-sample draws.
namespace qpf::data {

enum class Partition { Train, Test };

const char *partition_name(Partition p);

/// A set of equally shaped samples stored one per row of `values`.
/// Images have shape {m, m} with pixels in [0, 1]; filter outputs have shape
/// {4, m/2, m/2} with values in [-1, 1].
struct LabeledSet {
    std::vector<size_t> sample_shape;
    Matrix values;
    std::vector<int> labels;
    int n_classes = 0;
    Partition partition = Partition::Train;

    size_t size() const noexcept { return labels.size(); }
    size_t sample_size() const noexcept;
    std::span<const double> sample(size_t i) const {
        return {values.data() + i * static_cast<size_t>(values.cols()), static_cast<size_t>(values.cols())};
    }

    /// Checks shape consistency, label range, and that every value lies in
    /// [lo, hi]. Throws DataError.
    void validate(double lo, double hi) const;
};

// --- IDX container -----------------------------------------------------------

inline constexpr uint32_t kIdxImageMagic = 0x00000803;
inline constexpr uint32_t kIdxLabelMagic = 0x00000801;
inline constexpr uint8_t kIdxUByte = 0x08;
inline constexpr uint8_t kIdxFloat = 0x0D;
inline constexpr uint8_t kIdxDouble = 0x0E;

struct IdxHeader {
    uint32_t magic = 0;
    uint8_t type = 0;
    std::vector<uint32_t> dims;
    size_t header_bytes = 0;

    size_t element_count() const;
};

/// Reads only the header of an IDX file.
IdxHeader read_idx_header(const std::filesystem::path &path);

struct LoadOptions {
    Partition partition = Partition::Train;
    /// 0 means one past the largest label seen.
    int n_classes = 0;
    /// Swap rows and columns of every image (EMNIST stores images transposed).
    bool transpose = false;
};

/// Loads an IDX image file and its IDX label file. Unsigned-byte pixels are
/// divided by 255; double and float payloads are taken as-is. Throws
/// DataError for a bad magic, truncated payload, or count mismatch.
LabeledSet load_idx(const std::filesystem::path &images_path, const std::filesystem::path &labels_path,
                    const LoadOptions &options = {});

/// Writes `set` as an IDX pair. Values that are all exact multiples of 1/255
/// are stored as unsigned bytes, anything else as 64-bit big-endian doubles,
/// so reloading reproduces every value bit for bit. Files are replaced
/// atomically.
void write_idx(const LabeledSet &set, const std::filesystem::path &images_path,
               const std::filesystem::path &labels_path);

// --- CIFAR-10 ----------------------------------------------------------------

inline constexpr size_t kCifarSide = 32;
inline constexpr size_t kCifarRecordBytes = 1 + 3 * kCifarSide * kCifarSide;

/// ITU-R BT.601 luma, 0.299 r + 0.587 g + 0.114 b, not re-quantized.
double rgb_to_gray(uint8_t r, uint8_t g, uint8_t b);

/// Reads CIFAR-10 binary batches, converting each record to grayscale / 255.
LabeledSet load_cifar10(std::span<const std::filesystem::path> batch_paths, Partition partition);

// --- GTSRB -------------------------------------------------------------------

/// Row-major grid of real values.
struct GrayImage {
    size_t width = 0;
    size_t height = 0;
    std::vector<double> pixels;

    double at(size_t x, size_t y) const { return pixels[y * width + x]; }
};

/// Bilinear resampling with pixel-centre alignment and edge clamping.
GrayImage resize_bilinear(const GrayImage &src, size_t out_width, size_t out_height);

struct RgbImage {
    size_t width = 0;
    size_t height = 0;
    std::vector<uint8_t> rgb;
};

/// Decodes PPM/PGM (binary or ASCII) and PNG files.
RgbImage decode_image(const std::filesystem::path &path);

/// Greyscale, resize to side x side, scale by 1/255.
GrayImage preprocess_gtsrb(const RgbImage &image, size_t side = 32);

struct ConvertReport {
    size_t train_count = 0;
    size_t test_count = 0;
    int n_classes = 0;
    std::vector<std::string> warnings;
};

/// Reads every image named in the annotation CSVs (columns Filename or Path,
/// and ClassId; paths relative to the CSV), preprocesses it, and writes
/// {train,test}-{images,labels}.idx into `out_dir`. Nothing is written unless
/// every image converts.
ConvertReport convert_gtsrb(std::span<const std::filesystem::path> train_annotations,
                            std::span<const std::filesystem::path> test_annotations,
                            const std::filesystem::path &out_dir);

/// Locates annotation files in a GTSRB tree: Train.csv / Test.csv at the
/// root, or the GT-*.csv files of the official Final_Training / Final_Test
/// layout.
std::pair<std::vector<std::filesystem::path>, std::vector<std::filesystem::path>> find_gtsrb_annotations(
    const std::filesystem::path &src_dir);

// --- Datasets ------------------------------------------------------------------

struct DatasetInfo {
    std::string id;
    std::string display_name;
    int n_classes;
    size_t image_side;
    size_t expected_train;
    size_t expected_test;
};

/// mnist, emnist, cifar10, gtsrb.
const DatasetInfo &dataset_info(std::string_view id);
std::span<const DatasetInfo> known_datasets();

struct Dataset {
    DatasetInfo info;
    LabeledSet train;
    LabeledSet test;
    /// (file name, FNV-1a 64 of its bytes) for every file read.
    std::vector<std::pair<std::string, uint64_t>> checksums;
};

/// Loads dataset `id` from `root/<id>/`. Expected file names:
///   mnist   train-images-idx3-ubyte, train-labels-idx1-ubyte, t10k-*
///   emnist  emnist-balanced-{train,test}-{images-idx3,labels-idx1}-ubyte
///   cifar10 data_batch_{1..5}.bin, test_batch.bin
///   gtsrb   {train,test}-{images,labels}.idx as written by convert_gtsrb
Dataset load_dataset(std::string_view id, const std::filesystem::path &root);

uint64_t file_checksum(const std::filesystem::path &path);

// --- Pairs and draws -------------------------------------------------------------

/// Rows of a source set plus binary labels (0 for class_a, 1 for class_b).
struct Selection {
    std::vector<size_t> indices;
    std::vector<int> labels;

    size_t size() const noexcept { return indices.size(); }
};

struct PairSet {
    int class_a = 0;
    int class_b = 1;
    Selection train;
    Selection test;
};

/// Samples of classes a and b from both partitions, in original order, with
/// a -> 0 and b -> 1. Throws UsageError for a == b or out-of-range classes and
/// DataError when either class is absent from a partition.
PairSet extract_pair(const LabeledSet &train, const LabeledSet &test, int a, int b);

/// Draws `per_class_train` training and `per_class_test` test samples of each
/// class without replacement. One splitmix64 stream seeded with `seed` feeds
/// a partial Fisher-Yates shuffle over class a's train indices, then class
/// b's, then the same for test. Output lists class a's draws, then class b's.
PairSet draw_small_sample(const PairSet &pair, uint64_t seed, size_t per_class_train = 80,
                          size_t per_class_test = 20);

/// Copies the selected rows into a standalone set with binary labels.
LabeledSet materialize(const LabeledSet &source, const Selection &selection);

/// FNV-1a over the train then test index lists.
uint64_t selection_digest(const PairSet &pair);

}  // namespace qpf::data
