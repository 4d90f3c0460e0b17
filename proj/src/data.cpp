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

#include "qpf/core/data.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include <fmt/format.h>
#include <png.h>

#include "qpf/core/error.hpp"
#include "qpf/core/io.hpp"
#include "qpf/core/rng.hpp"

namespace qpf::data {

namespace fs = std::filesystem;

const char *partition_name(Partition p) { return p == Partition::Train ? "train" : "test"; }

size_t LabeledSet::sample_size() const noexcept {
    size_t n = 1;
    for (auto d : sample_shape) {
        n *= d;
    }
    return n;
}

void LabeledSet::validate(double lo, double hi) const {
    if (static_cast<size_t>(values.rows()) != labels.size()) {
        throw DataError(fmt::format("{} samples but {} labels", values.rows(), labels.size()));
    }
    if (static_cast<size_t>(values.cols()) != sample_size()) {
        throw DataError(fmt::format("sample width {} does not match shape size {}", values.cols(), sample_size()));
    }
    for (int label : labels) {
        if (label < 0 || label >= n_classes) {
            throw DataError(fmt::format("label {} outside [0, {})", label, n_classes));
        }
    }
    const double *p = values.data();
    for (Eigen::Index i = 0; i < values.size(); i++) {
        if (!(p[i] >= lo && p[i] <= hi)) {
            throw DataError(fmt::format("value {} outside [{}, {}]", p[i], lo, hi));
        }
    }
}

// --- IDX -----------------------------------------------------------------------

namespace {

uint32_t read_be32(const uint8_t *p) {
    return (uint32_t{p[0]} << 24) | (uint32_t{p[1]} << 16) | (uint32_t{p[2]} << 8) | uint32_t{p[3]};
}

void put_be32(std::string &out, uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
        out.push_back(static_cast<char>((v >> shift) & 0xFF));
    }
}

size_t element_bytes(uint8_t type) {
    switch (type) {
    case kIdxUByte:
        return 1;
    case kIdxFloat:
        return 4;
    case kIdxDouble:
        return 8;
    default:
        return 0;
    }
}

IdxHeader parse_header(std::span<const uint8_t> bytes, const fs::path &path) {
    if (bytes.size() < 4) {
        throw DataError(fmt::format("'{}' is too short for an IDX header", path.string()));
    }
    IdxHeader h;
    h.magic = read_be32(bytes.data());
    h.type = bytes[2];
    const size_t ndims = bytes[3];
    if (bytes[0] != 0 || bytes[1] != 0 || element_bytes(h.type) == 0 || ndims == 0) {
        throw DataError(fmt::format("'{}' has bad IDX magic 0x{:08X}", path.string(), h.magic));
    }
    h.header_bytes = 4 + 4 * ndims;
    if (bytes.size() < h.header_bytes) {
        throw DataError(fmt::format("'{}' has a truncated IDX header", path.string()));
    }
    for (size_t d = 0; d < ndims; d++) {
        h.dims.push_back(read_be32(bytes.data() + 4 + 4 * d));
    }
    return h;
}

double decode_element(const uint8_t *p, uint8_t type) {
    switch (type) {
    case kIdxUByte:
        return static_cast<double>(p[0]) / 255.0;
    case kIdxFloat:
        return static_cast<double>(std::bit_cast<float>(read_be32(p)));
    default: {
        uint64_t bits = (uint64_t{read_be32(p)} << 32) | read_be32(p + 4);
        return std::bit_cast<double>(bits);
    }
    }
}

/// The unsigned byte b with b / 255.0 == v bit for bit, or -1.
int exact_byte(double v) {
    if (!(v >= 0.0 && v <= 1.0)) {
        return -1;
    }
    auto b = static_cast<int>(std::lround(v * 255.0));
    return static_cast<double>(b) / 255.0 == v ? b : -1;
}

}  // namespace

size_t IdxHeader::element_count() const {
    size_t n = 1;
    for (auto d : dims) {
        n *= d;
    }
    return n;
}

IdxHeader read_idx_header(const fs::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError(fmt::format("cannot open '{}'", path.string()));
    }
    std::vector<uint8_t> bytes(4 + 4 * 255);
    in.read(reinterpret_cast<char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    bytes.resize(static_cast<size_t>(in.gcount()));
    return parse_header(bytes, path);
}

LabeledSet load_idx(const fs::path &images_path, const fs::path &labels_path, const LoadOptions &options) {
    const auto image_bytes = io::read_bytes(images_path);
    const auto label_bytes = io::read_bytes(labels_path);

    const auto ih = parse_header(image_bytes, images_path);
    if (ih.dims.size() < 2 || (ih.type == kIdxUByte && ih.magic != kIdxImageMagic)) {
        throw DataError(fmt::format("'{}' has magic 0x{:08X}, expected image magic 0x{:08X}", images_path.string(),
                                    ih.magic, kIdxImageMagic));
    }
    const auto lh = parse_header(label_bytes, labels_path);
    if (lh.magic != kIdxLabelMagic) {
        throw DataError(fmt::format("'{}' has magic 0x{:08X}, expected label magic 0x{:08X}", labels_path.string(),
                                    lh.magic, kIdxLabelMagic));
    }

    const size_t count = ih.dims[0];
    const size_t esize = element_bytes(ih.type);
    const size_t payload = ih.element_count() * esize;
    if (image_bytes.size() != ih.header_bytes + payload) {
        throw DataError(fmt::format("'{}' payload is {} bytes, header implies {}", images_path.string(),
                                    image_bytes.size() - ih.header_bytes, payload));
    }
    if (label_bytes.size() != lh.header_bytes + lh.dims[0]) {
        throw DataError(fmt::format("'{}' payload is {} bytes, header implies {}", labels_path.string(),
                                    label_bytes.size() - lh.header_bytes, lh.dims[0]));
    }
    if (lh.dims[0] != count) {
        throw DataError(
            fmt::format("'{}' holds {} images but '{}' holds {} labels", images_path.string(), count,
                        labels_path.string(), lh.dims[0]));
    }

    LabeledSet set;
    set.partition = options.partition;
    set.sample_shape.assign(ih.dims.begin() + 1, ih.dims.end());
    const size_t width = set.sample_size();
    if (options.transpose && (set.sample_shape.size() != 2 || set.sample_shape[0] != set.sample_shape[1])) {
        throw UsageError("transpose requires square two-dimensional samples");
    }
    set.values.resize(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(width));
    const uint8_t *src = image_bytes.data() + ih.header_bytes;
    double *dst = set.values.data();
    const size_t side = set.sample_shape[0];
    for (size_t i = 0; i < count; i++) {
        for (size_t k = 0; k < width; k++) {
            size_t out = k;
            if (options.transpose) {
                out = (k % side) * side + k / side;
            }
            dst[i * width + out] = decode_element(src + (i * width + k) * esize, ih.type);
        }
    }

    set.labels.resize(count);
    int max_label = -1;
    for (size_t i = 0; i < count; i++) {
        set.labels[i] = label_bytes[lh.header_bytes + i];
        max_label = std::max(max_label, set.labels[i]);
    }
    set.n_classes = options.n_classes > 0 ? options.n_classes : max_label + 1;
    for (int label : set.labels) {
        if (label >= set.n_classes) {
            throw DataError(fmt::format("'{}' has label {} but the dataset has {} classes", labels_path.string(),
                                        label, set.n_classes));
        }
    }
    return set;
}

void write_idx(const LabeledSet &set, const fs::path &images_path, const fs::path &labels_path) {
    if (static_cast<size_t>(set.values.rows()) != set.size()) {
        throw UsageError("sample and label counts differ");
    }
    const double *p = set.values.data();
    const auto total = static_cast<size_t>(set.values.size());
    bool as_bytes = true;
    for (size_t i = 0; i < total && as_bytes; i++) {
        as_bytes = exact_byte(p[i]) >= 0;
    }
    const size_t ndims = 1 + set.sample_shape.size();
    std::string images;
    images.reserve(4 + 4 * ndims + total * (as_bytes ? 1 : 8));
    images.push_back(0);
    images.push_back(0);
    images.push_back(static_cast<char>(as_bytes ? kIdxUByte : kIdxDouble));
    images.push_back(static_cast<char>(ndims));
    put_be32(images, static_cast<uint32_t>(set.size()));
    for (auto d : set.sample_shape) {
        put_be32(images, static_cast<uint32_t>(d));
    }
    for (size_t i = 0; i < total; i++) {
        if (as_bytes) {
            images.push_back(static_cast<char>(exact_byte(p[i])));
        } else {
            auto bits = std::bit_cast<uint64_t>(p[i]);
            put_be32(images, static_cast<uint32_t>(bits >> 32));
            put_be32(images, static_cast<uint32_t>(bits));
        }
    }

    std::string labels;
    put_be32(labels, kIdxLabelMagic);
    put_be32(labels, static_cast<uint32_t>(set.size()));
    for (int label : set.labels) {
        if (label < 0 || label > 255) {
            throw UsageError(fmt::format("label {} does not fit an unsigned byte", label));
        }
        labels.push_back(static_cast<char>(label));
    }
    io::write_atomic(images_path, images);
    io::write_atomic(labels_path, labels);
}

// --- CIFAR-10 --------------------------------------------------------------------

double rgb_to_gray(uint8_t r, uint8_t g, uint8_t b) {
    // Integer weighted sum first: the only rounding is the final division.
    return static_cast<double>(299 * r + 587 * g + 114 * b) / 1000.0;
}

LabeledSet load_cifar10(std::span<const fs::path> batch_paths, Partition partition) {
    constexpr size_t plane = kCifarSide * kCifarSide;
    std::vector<std::vector<uint8_t>> batches;
    size_t records = 0;
    for (const auto &path : batch_paths) {
        auto bytes = io::read_bytes(path);
        if (bytes.empty() || bytes.size() % kCifarRecordBytes != 0) {
            throw DataError(fmt::format("'{}' is {} bytes, not a multiple of the {}-byte record", path.string(),
                                        bytes.size(), kCifarRecordBytes));
        }
        records += bytes.size() / kCifarRecordBytes;
        batches.push_back(std::move(bytes));
    }
    LabeledSet set;
    set.partition = partition;
    set.n_classes = 10;
    set.sample_shape = {kCifarSide, kCifarSide};
    set.values.resize(static_cast<Eigen::Index>(records), static_cast<Eigen::Index>(plane));
    set.labels.reserve(records);
    size_t row = 0;
    for (const auto &bytes : batches) {
        for (size_t off = 0; off < bytes.size(); off += kCifarRecordBytes, row++) {
            const uint8_t *rec = bytes.data() + off;
            if (rec[0] >= 10) {
                throw DataError(fmt::format("CIFAR-10 record {} has label {}", row, rec[0]));
            }
            set.labels.push_back(rec[0]);
            const uint8_t *r = rec + 1;
            const uint8_t *g = r + plane;
            const uint8_t *b = g + plane;
            for (size_t k = 0; k < plane; k++) {
                set.values(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(k)) =
                    rgb_to_gray(r[k], g[k], b[k]) / 255.0;
            }
        }
    }
    return set;
}

// --- GTSRB -----------------------------------------------------------------------

GrayImage resize_bilinear(const GrayImage &src, size_t out_width, size_t out_height) {
    if (src.width == 0 || src.height == 0 || src.pixels.size() != src.width * src.height) {
        throw UsageError(fmt::format("cannot resize a {}x{} image", src.width, src.height));
    }
    if (out_width == 0 || out_height == 0) {
        throw UsageError("resize target must be non-empty");
    }
    // Source coordinate of an output pixel centre, clamped to the edge samples.
    auto sample_coord = [](size_t out, size_t in_size, size_t out_size, size_t &lo, size_t &hi, double &frac) {
        double s = (static_cast<double>(out) + 0.5) * static_cast<double>(in_size) / static_cast<double>(out_size) - 0.5;
        s = std::clamp(s, 0.0, static_cast<double>(in_size - 1));
        lo = static_cast<size_t>(std::floor(s));
        hi = std::min(lo + 1, in_size - 1);
        frac = s - static_cast<double>(lo);
    };
    GrayImage out{out_width, out_height, std::vector<double>(out_width * out_height)};
    for (size_t y = 0; y < out_height; y++) {
        size_t y0, y1;
        double fy;
        sample_coord(y, src.height, out_height, y0, y1, fy);
        for (size_t x = 0; x < out_width; x++) {
            size_t x0, x1;
            double fx;
            sample_coord(x, src.width, out_width, x0, x1, fx);
            double top = src.at(x0, y0) * (1 - fx) + src.at(x1, y0) * fx;
            double bottom = src.at(x0, y1) * (1 - fx) + src.at(x1, y1) * fx;
            out.pixels[y * out_width + x] = top * (1 - fy) + bottom * fy;
        }
    }
    return out;
}

namespace {

RgbImage decode_pnm(const std::vector<uint8_t> &bytes, const fs::path &path) {
    size_t pos = 0;
    auto next_token = [&]() -> std::string {
        while (pos < bytes.size()) {
            if (bytes[pos] == '#') {
                while (pos < bytes.size() && bytes[pos] != '\n') {
                    pos++;
                }
            } else if (std::isspace(bytes[pos])) {
                pos++;
            } else {
                break;
            }
        }
        std::string tok;
        while (pos < bytes.size() && !std::isspace(bytes[pos]) && bytes[pos] != '#') {
            tok.push_back(static_cast<char>(bytes[pos++]));
        }
        return tok;
    };
    auto fail = [&](const char *why) { return DataError(fmt::format("'{}': {}", path.string(), why)); };
    auto number = [&]() -> long {
        auto tok = next_token();
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos) {
            throw fail("malformed PNM header");
        }
        return std::stol(tok);
    };

    const auto magic = next_token();
    const bool ascii = magic == "P2" || magic == "P3";
    const bool color = magic == "P3" || magic == "P6";
    if (!(ascii || magic == "P5" || magic == "P6")) {
        throw fail("unsupported PNM variant");
    }
    RgbImage img;
    img.width = static_cast<size_t>(number());
    img.height = static_cast<size_t>(number());
    const long maxval = number();
    if (img.width == 0 || img.height == 0 || maxval <= 0 || maxval > 255) {
        throw fail("unsupported PNM dimensions or maxval");
    }
    pos++;  // single whitespace after maxval
    const size_t channels = color ? 3 : 1;
    const size_t n = img.width * img.height * channels;
    std::vector<uint8_t> samples(n);
    if (ascii) {
        for (auto &s : samples) {
            s = static_cast<uint8_t>(number());
        }
    } else {
        if (bytes.size() < pos + n) {
            throw fail("truncated PNM payload");
        }
        std::copy_n(bytes.begin() + static_cast<std::ptrdiff_t>(pos), n, samples.begin());
    }
    if (maxval != 255) {
        for (auto &s : samples) {
            s = static_cast<uint8_t>(std::lround(s * 255.0 / static_cast<double>(maxval)));
        }
    }
    img.rgb.resize(img.width * img.height * 3);
    for (size_t i = 0; i < img.width * img.height; i++) {
        for (size_t c = 0; c < 3; c++) {
            img.rgb[3 * i + c] = samples[i * channels + (color ? c : 0)];
        }
    }
    return img;
}

RgbImage decode_png(const std::vector<uint8_t> &bytes, const fs::path &path) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw DataError(fmt::format("'{}': {}", path.string(), image.message));
    }
    image.format = PNG_FORMAT_RGB;
    RgbImage img;
    img.width = image.width;
    img.height = image.height;
    img.rgb.resize(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, img.rgb.data(), 0, nullptr)) {
        std::string message = image.message;
        png_image_free(&image);
        throw DataError(fmt::format("'{}': {}", path.string(), message));
    }
    return img;
}

}  // namespace

RgbImage decode_image(const fs::path &path) {
    auto bytes = io::read_bytes(path);
    static constexpr uint8_t kPngSignature[] = {0x89, 'P', 'N', 'G'};
    if (bytes.size() >= 4 && std::equal(std::begin(kPngSignature), std::end(kPngSignature), bytes.begin())) {
        return decode_png(bytes, path);
    }
    if (bytes.size() >= 2 && bytes[0] == 'P') {
        return decode_pnm(bytes, path);
    }
    throw DataError(fmt::format("'{}' is neither PNM nor PNG", path.string()));
}

GrayImage preprocess_gtsrb(const RgbImage &image, size_t side) {
    GrayImage gray{image.width, image.height, std::vector<double>(image.width * image.height)};
    for (size_t i = 0; i < gray.pixels.size(); i++) {
        gray.pixels[i] = rgb_to_gray(image.rgb[3 * i], image.rgb[3 * i + 1], image.rgb[3 * i + 2]);
    }
    auto out = resize_bilinear(gray, side, side);
    for (auto &p : out.pixels) {
        p = std::clamp(p / 255.0, 0.0, 1.0);
    }
    return out;
}

namespace {

constexpr int kGtsrbClasses = 43;

void convert_annotations(std::span<const fs::path> annotations, Partition partition, LabeledSet &set) {
    std::vector<double> pixels;
    for (const auto &csv : annotations) {
        auto rows = io::lines(io::read_text(csv));
        if (rows.empty()) {
            throw DataError(fmt::format("annotation file '{}' is empty", csv.string()));
        }
        const char sep = rows[0].find(';') != std::string::npos ? ';' : ',';
        auto header = io::split(rows[0], sep);
        long file_col = -1;
        long class_col = -1;
        for (size_t c = 0; c < header.size(); c++) {
            auto name = io::trim(header[c]);
            if (name == "Filename" || name == "Path") {
                file_col = static_cast<long>(c);
            } else if (name == "ClassId") {
                class_col = static_cast<long>(c);
            }
        }
        if (file_col < 0 || class_col < 0) {
            throw DataError(fmt::format("'{}' lacks Filename/Path or ClassId columns", csv.string()));
        }
        for (size_t r = 1; r < rows.size(); r++) {
            if (io::trim(rows[r]).empty()) {
                continue;
            }
            auto fields = io::split(rows[r], sep);
            if (fields.size() <= static_cast<size_t>(std::max(file_col, class_col))) {
                throw DataError(fmt::format("'{}' line {} has too few fields", csv.string(), r + 1));
            }
            auto class_text = std::string(io::trim(fields[static_cast<size_t>(class_col)]));
            int class_id = -1;
            if (!class_text.empty() && class_text.find_first_not_of("0123456789") == std::string::npos) {
                class_id = std::stoi(class_text);
            }
            if (class_id < 0 || class_id >= kGtsrbClasses) {
                throw DataError(fmt::format("'{}' line {}: unknown class id '{}'", csv.string(), r + 1, class_text));
            }
            auto image_path = csv.parent_path() / std::string(io::trim(fields[static_cast<size_t>(file_col)]));
            auto gray = preprocess_gtsrb(decode_image(image_path));
            pixels.insert(pixels.end(), gray.pixels.begin(), gray.pixels.end());
            set.labels.push_back(class_id);
        }
    }
    set.partition = partition;
    set.n_classes = kGtsrbClasses;
    set.sample_shape = {32, 32};
    set.values = Eigen::Map<Matrix>(pixels.data(), static_cast<Eigen::Index>(set.labels.size()), 32 * 32);
}

}  // namespace

ConvertReport convert_gtsrb(std::span<const fs::path> train_annotations, std::span<const fs::path> test_annotations,
                            const fs::path &out_dir) {
    if (train_annotations.empty() || test_annotations.empty()) {
        throw DataError("GTSRB conversion needs train and test annotation files");
    }
    LabeledSet train;
    LabeledSet test;
    convert_annotations(train_annotations, Partition::Train, train);
    convert_annotations(test_annotations, Partition::Test, test);

    ConvertReport report;
    report.train_count = train.size();
    report.test_count = test.size();
    report.n_classes = kGtsrbClasses;
    const auto &info = dataset_info("gtsrb");
    if (train.size() != info.expected_train) {
        report.warnings.push_back(
            fmt::format("train count {} differs from the expected {}", train.size(), info.expected_train));
    }
    if (test.size() != info.expected_test) {
        report.warnings.push_back(
            fmt::format("test count {} differs from the expected {}", test.size(), info.expected_test));
    }
    write_idx(train, out_dir / "train-images.idx", out_dir / "train-labels.idx");
    write_idx(test, out_dir / "test-images.idx", out_dir / "test-labels.idx");
    return report;
}

std::pair<std::vector<fs::path>, std::vector<fs::path>> find_gtsrb_annotations(const fs::path &src_dir) {
    if (!fs::is_directory(src_dir)) {
        throw DataError(fmt::format("GTSRB source directory '{}' does not exist", src_dir.string()));
    }
    std::vector<fs::path> train;
    std::vector<fs::path> test;
    if (fs::exists(src_dir / "Train.csv")) {
        train.push_back(src_dir / "Train.csv");
    }
    if (fs::exists(src_dir / "Test.csv")) {
        test.push_back(src_dir / "Test.csv");
    }
    if (train.empty() || test.empty()) {
        std::vector<fs::path> found;
        for (const auto &entry : fs::recursive_directory_iterator(src_dir)) {
            auto name = entry.path().filename().string();
            if (entry.is_regular_file() && name.starts_with("GT-") && name.ends_with(".csv")) {
                found.push_back(entry.path());
            }
        }
        std::sort(found.begin(), found.end());
        const bool need_train = train.empty();
        const bool need_test = test.empty();
        for (const auto &p : found) {
            bool is_test = fs::relative(p, src_dir).string().find("Test") != std::string::npos;
            if (is_test && need_test) {
                test.push_back(p);
            } else if (!is_test && need_train) {
                train.push_back(p);
            }
        }
    }
    if (train.empty() || test.empty()) {
        throw DataError(fmt::format("no GTSRB annotation files found under '{}'", src_dir.string()));
    }
    return {train, test};
}

// --- Datasets --------------------------------------------------------------------

namespace {

const std::array<DatasetInfo, 4> kDatasets = {{
    {"mnist", "MNIST", 10, 28, 60000, 10000},
    {"emnist", "EMNIST", 47, 28, 112800, 18800},
    {"cifar10", "CIFAR-10", 10, 32, 50000, 10000},
    {"gtsrb", "GTSRB", 43, 32, 34799, 12630},
}};

}  // namespace

std::span<const DatasetInfo> known_datasets() { return kDatasets; }

const DatasetInfo &dataset_info(std::string_view id) {
    for (const auto &info : kDatasets) {
        if (info.id == id) {
            return info;
        }
    }
    throw UsageError(fmt::format("unknown dataset '{}' (expected mnist, emnist, cifar10, or gtsrb)", id));
}

uint64_t file_checksum(const fs::path &path) {
    auto bytes = io::read_bytes(path);
    Fnv1a64 h;
    h.update(bytes.data(), bytes.size());
    return h.value();
}

Dataset load_dataset(std::string_view id, const fs::path &root) {
    Dataset ds;
    ds.info = dataset_info(id);
    const fs::path dir = root / ds.info.id;
    if (!fs::is_directory(dir)) {
        throw DataError(fmt::format("dataset directory '{}' does not exist", dir.string()));
    }
    std::vector<fs::path> files;
    auto idx_pair = [&](const fs::path &images, const fs::path &labels, Partition part, bool transpose) {
        files.push_back(images);
        files.push_back(labels);
        return load_idx(dir / images, dir / labels, {part, ds.info.n_classes, transpose});
    };
    if (ds.info.id == "mnist") {
        ds.train = idx_pair("train-images-idx3-ubyte", "train-labels-idx1-ubyte", Partition::Train, false);
        ds.test = idx_pair("t10k-images-idx3-ubyte", "t10k-labels-idx1-ubyte", Partition::Test, false);
    } else if (ds.info.id == "emnist") {
        ds.train = idx_pair("emnist-balanced-train-images-idx3-ubyte", "emnist-balanced-train-labels-idx1-ubyte",
                            Partition::Train, true);
        ds.test = idx_pair("emnist-balanced-test-images-idx3-ubyte", "emnist-balanced-test-labels-idx1-ubyte",
                           Partition::Test, true);
    } else if (ds.info.id == "cifar10") {
        std::vector<fs::path> train_batches;
        for (int i = 1; i <= 5; i++) {
            train_batches.push_back(dir / fmt::format("data_batch_{}.bin", i));
            files.push_back(train_batches.back().filename());
        }
        const fs::path test_batch[] = {dir / "test_batch.bin"};
        files.push_back("test_batch.bin");
        ds.train = load_cifar10(train_batches, Partition::Train);
        ds.test = load_cifar10(test_batch, Partition::Test);
    } else {
        ds.train = idx_pair("train-images.idx", "train-labels.idx", Partition::Train, false);
        ds.test = idx_pair("test-images.idx", "test-labels.idx", Partition::Test, false);
    }
    for (const auto &f : files) {
        ds.checksums.emplace_back(f.string(), file_checksum(dir / f));
    }
    const std::vector<size_t> shape = {ds.info.image_side, ds.info.image_side};
    if (ds.train.sample_shape != shape || ds.test.sample_shape != shape) {
        throw DataError(fmt::format("{} images are not {}x{}", ds.info.display_name, ds.info.image_side,
                                    ds.info.image_side));
    }
    ds.train.validate(0.0, 1.0);
    ds.test.validate(0.0, 1.0);
    return ds;
}

// --- Pairs and draws -------------------------------------------------------------

PairSet extract_pair(const LabeledSet &train, const LabeledSet &test, int a, int b) {
    const int n = train.n_classes;
    if (a == b) {
        throw UsageError(fmt::format("pair ({}, {}) repeats a class", a, b));
    }
    if (a < 0 || b < 0 || a >= n || b >= n || test.n_classes != n) {
        throw UsageError(fmt::format("pair ({}, {}) outside [0, {})", a, b, n));
    }
    PairSet pair;
    pair.class_a = a;
    pair.class_b = b;
    auto filter = [&](const LabeledSet &set, Selection &sel) {
        for (size_t i = 0; i < set.size(); i++) {
            if (set.labels[i] == a || set.labels[i] == b) {
                sel.indices.push_back(i);
                sel.labels.push_back(set.labels[i] == a ? 0 : 1);
            }
        }
        for (int binary : {0, 1}) {
            if (std::find(sel.labels.begin(), sel.labels.end(), binary) == sel.labels.end()) {
                throw DataError(fmt::format("class {} has no {} samples", binary == 0 ? a : b,
                                            partition_name(set.partition)));
            }
        }
    };
    filter(train, pair.train);
    filter(test, pair.test);
    return pair;
}

PairSet draw_small_sample(const PairSet &pair, uint64_t seed, size_t per_class_train, size_t per_class_test) {
    SplitMix64 rng(seed);
    PairSet out;
    out.class_a = pair.class_a;
    out.class_b = pair.class_b;
    auto draw = [&](const Selection &from, size_t per_class, Selection &to, const char *part) {
        for (int binary : {0, 1}) {
            std::vector<size_t> pool;
            for (size_t i = 0; i < from.size(); i++) {
                if (from.labels[i] == binary) {
                    pool.push_back(from.indices[i]);
                }
            }
            if (pool.size() < per_class) {
                throw DataError(fmt::format("class {} has {} {} samples, {} needed",
                                            binary == 0 ? pair.class_a : pair.class_b, pool.size(), part, per_class));
            }
            partial_shuffle(std::span(pool), per_class, rng);
            to.indices.insert(to.indices.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(per_class));
            to.labels.insert(to.labels.end(), per_class, binary);
        }
    };
    draw(pair.train, per_class_train, out.train, "train");
    draw(pair.test, per_class_test, out.test, "test");
    return out;
}

LabeledSet materialize(const LabeledSet &source, const Selection &selection) {
    LabeledSet out;
    out.sample_shape = source.sample_shape;
    out.n_classes = 2;
    out.partition = source.partition;
    out.labels = selection.labels;
    out.values.resize(static_cast<Eigen::Index>(selection.size()), source.values.cols());
    for (size_t r = 0; r < selection.size(); r++) {
        if (selection.indices[r] >= source.size()) {
            throw UsageError(fmt::format("selection index {} outside a set of {}", selection.indices[r], source.size()));
        }
        out.values.row(static_cast<Eigen::Index>(r)) = source.values.row(static_cast<Eigen::Index>(selection.indices[r]));
    }
    return out;
}

uint64_t selection_digest(const PairSet &pair) {
    Fnv1a64 h;
    for (const auto *sel : {&pair.train, &pair.test}) {
        h.update_u64(sel->size());
        for (size_t i = 0; i < sel->size(); i++) {
            h.update_u64(sel->indices[i]);
            h.update_u64(static_cast<uint64_t>(sel->labels[i]));
        }
    }
    return h.value();
}

}  // namespace qpf::data
