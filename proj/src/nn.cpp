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

#include "qpf/core/nn.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>

#include <fmt/format.h>

#include "qpf/core/error.hpp"
#include "qpf/core/io.hpp"
#include "qpf/core/rng.hpp"

namespace qpf::nn {

size_t MlpModel::parameter_count() const noexcept {
    return static_cast<size_t>(w1.size() + b1.size() + w2.size() + b2.size());
}

bool MlpModel::all_finite() const { return w1.allFinite() && b1.allFinite() && w2.allFinite() && b2.allFinite(); }

Gradients Gradients::zeros_like(const MlpModel &model) {
    return {Matrix::Zero(model.w1.rows(), model.w1.cols()), Vector::Zero(model.b1.size()),
            Matrix::Zero(model.w2.rows(), model.w2.cols()), Vector::Zero(model.b2.size())};
}

MlpModel init_model(size_t input_dim, size_t hidden_dim, size_t n_classes, uint64_t seed) {
    if (input_dim == 0 || hidden_dim == 0 || n_classes == 0) {
        throw UsageError("model dimensions must be positive");
    }
    SplitMix64 rng(seed);
    auto glorot = [&](size_t rows, size_t cols) {
        const double bound = std::sqrt(6.0 / static_cast<double>(rows + cols));
        Matrix w(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        double *p = w.data();
        for (Eigen::Index i = 0; i < w.size(); i++) {
            p[i] = (2.0 * rng.next_unit() - 1.0) * bound;
        }
        return w;
    };
    MlpModel model;
    model.w1 = glorot(hidden_dim, input_dim);
    model.b1 = Vector::Zero(static_cast<Eigen::Index>(hidden_dim));
    model.w2 = glorot(n_classes, hidden_dim);
    model.b2 = Vector::Zero(static_cast<Eigen::Index>(n_classes));
    return model;
}

ForwardCache forward(const MlpModel &model, const Matrix &batch) {
    if (static_cast<size_t>(batch.cols()) != model.input_dim()) {
        throw UsageError(fmt::format("batch width {} does not match model input {}", batch.cols(), model.input_dim()));
    }
    ForwardCache cache;
    cache.pre_hidden.noalias() = batch * model.w1.transpose();
    cache.pre_hidden.rowwise() += model.b1.transpose();
    cache.hidden = cache.pre_hidden.cwiseMax(0.0);
    cache.logits.noalias() = cache.hidden * model.w2.transpose();
    cache.logits.rowwise() += model.b2.transpose();
    return cache;
}

Matrix softmax(const Matrix &logits) {
    Matrix out(logits.rows(), logits.cols());
    for (Eigen::Index r = 0; r < logits.rows(); r++) {
        const double top = logits.row(r).maxCoeff();
        out.row(r) = (logits.row(r).array() - top).exp().matrix();
        out.row(r) /= out.row(r).sum();
    }
    return out;
}

namespace {

void check_labels(const MlpModel &model, const Matrix &batch, std::span<const int> labels) {
    if (static_cast<size_t>(batch.rows()) != labels.size()) {
        throw UsageError(fmt::format("{} samples but {} labels", batch.rows(), labels.size()));
    }
    for (int y : labels) {
        if (y < 0 || static_cast<size_t>(y) >= model.n_classes()) {
            throw UsageError(fmt::format("label {} outside [0, {})", y, model.n_classes()));
        }
    }
}

/// Mean cross-entropy; also leaves softmax probabilities in `probs`.
double cross_entropy(const Matrix &logits, std::span<const int> labels, Matrix *probs) {
    double total = 0.0;
    if (probs) {
        probs->resize(logits.rows(), logits.cols());
    }
    for (Eigen::Index r = 0; r < logits.rows(); r++) {
        const double top = logits.row(r).maxCoeff();
        const double log_sum = std::log((logits.row(r).array() - top).exp().sum()) + top;
        total += log_sum - logits(r, labels[static_cast<size_t>(r)]);
        if (probs) {
            probs->row(r) = (logits.row(r).array() - log_sum).exp().matrix();
        }
    }
    return total / static_cast<double>(logits.rows());
}

}  // namespace

double loss(const MlpModel &model, const Matrix &batch, std::span<const int> labels) {
    check_labels(model, batch, labels);
    return cross_entropy(forward(model, batch).logits, labels, nullptr);
}

namespace {

LossAndGrads backprop(const MlpModel &model, const Matrix &batch, std::span<const int> labels,
                      const ForwardCache &cache) {
    Matrix delta_out;
    LossAndGrads result;
    result.loss = cross_entropy(cache.logits, labels, &delta_out);
    const double scale = 1.0 / static_cast<double>(batch.rows());
    for (Eigen::Index r = 0; r < delta_out.rows(); r++) {
        delta_out(r, labels[static_cast<size_t>(r)]) -= 1.0;
    }
    delta_out *= scale;

    auto &g = result.grads;
    g.w2.noalias() = delta_out.transpose() * cache.hidden;
    g.b2 = delta_out.colwise().sum().transpose();
    Matrix delta_hidden = delta_out * model.w2;
    delta_hidden.array() *= (cache.pre_hidden.array() > 0.0).cast<double>();
    g.w1.noalias() = delta_hidden.transpose() * batch;
    g.b1 = delta_hidden.colwise().sum().transpose();
    return result;
}

int argmax_row(const Matrix &logits, Eigen::Index r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); c++) {
        if (logits(r, c) > logits(r, best)) {
            best = c;
        }
    }
    return static_cast<int>(best);
}

}  // namespace

LossAndGrads loss_and_grads(const MlpModel &model, const Matrix &batch, std::span<const int> labels) {
    check_labels(model, batch, labels);
    return backprop(model, batch, labels, forward(model, batch));
}

AdamState AdamState::fresh(const MlpModel &model, const AdamConfig &config) {
    return {config, Gradients::zeros_like(model), Gradients::zeros_like(model), 0};
}

namespace {

template <typename Param, typename Grad>
void adam_update(Param &theta, const Grad &g, Param &m, Param &v, const AdamConfig &c, double correction1,
                 double correction2) {
    m.array() = c.beta1 * m.array() + (1.0 - c.beta1) * g.array();
    v.array() = c.beta2 * v.array() + (1.0 - c.beta2) * g.array().square();
    theta.array() -= c.lr * (m.array() / correction1) / ((v.array() / correction2).sqrt() + c.epsilon);
}

}  // namespace

void adam_step(MlpModel &model, const Gradients &grads, AdamState &state) {
    if (grads.w1.rows() != model.w1.rows() || grads.w1.cols() != model.w1.cols() ||
        grads.w2.rows() != model.w2.rows() || grads.w2.cols() != model.w2.cols() ||
        grads.b1.size() != model.b1.size() || grads.b2.size() != model.b2.size()) {
        throw UsageError("gradient shapes do not match the model");
    }
    state.t++;
    const auto &c = state.config;
    const double c1 = 1.0 - std::pow(c.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(c.beta2, static_cast<double>(state.t));
    adam_update(model.w1, grads.w1, state.m.w1, state.v.w1, c, c1, c2);
    adam_update(model.b1, grads.b1, state.m.b1, state.v.b1, c, c1, c2);
    adam_update(model.w2, grads.w2, state.m.w2, state.v.w2, c, c1, c2);
    adam_update(model.b2, grads.b2, state.m.b2, state.v.b2, c, c1, c2);
}

std::vector<int> predict(const MlpModel &model, const Matrix &inputs) {
    const auto logits = forward(model, inputs).logits;
    std::vector<int> out(static_cast<size_t>(logits.rows()));
    for (Eigen::Index r = 0; r < logits.rows(); r++) {
        out[static_cast<size_t>(r)] = argmax_row(logits, r);
    }
    return out;
}

double evaluate(const MlpModel &model, const Matrix &inputs, std::span<const int> labels) {
    if (labels.empty()) {
        throw UsageError("cannot evaluate on an empty set");
    }
    if (static_cast<size_t>(inputs.rows()) != labels.size()) {
        throw UsageError(fmt::format("{} samples but {} labels", inputs.rows(), labels.size()));
    }
    const auto predicted = predict(model, inputs);
    size_t correct = 0;
    for (size_t i = 0; i < labels.size(); i++) {
        correct += predicted[i] == labels[i];
    }
    return static_cast<double>(correct) / static_cast<double>(labels.size());
}

History train(MlpModel &model, const Matrix &inputs, std::span<const int> labels, const TrainConfig &config) {
    const auto n = static_cast<size_t>(inputs.rows());
    if (n == 0) {
        throw UsageError("cannot train on an empty set");
    }
    if (config.batch_size == 0) {
        throw UsageError("batch size must be at least 1");
    }
    if (labels.size() != n) {
        throw UsageError(fmt::format("{} samples but {} labels", n, labels.size()));
    }
    SplitMix64 rng(config.seed);
    AdamState adam = AdamState::fresh(model, config.adam);
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; i++) {
        order[i] = i;
    }
    History history;
    Matrix batch;
    std::vector<int> batch_labels;
    for (size_t epoch = 0; epoch < config.epochs; epoch++) {
        shuffle(std::span(order), rng);
        double loss_sum = 0.0;
        size_t correct = 0;
        size_t steps = 0;
        for (size_t start = 0; start < n; start += config.batch_size) {
            const size_t len = std::min(config.batch_size, n - start);
            batch.resize(static_cast<Eigen::Index>(len), inputs.cols());
            batch_labels.resize(len);
            for (size_t k = 0; k < len; k++) {
                batch.row(static_cast<Eigen::Index>(k)) = inputs.row(static_cast<Eigen::Index>(order[start + k]));
                batch_labels[k] = labels[order[start + k]];
            }
            check_labels(model, batch, batch_labels);
            const auto cache = forward(model, batch);
            auto step = backprop(model, batch, batch_labels, cache);
            if (!std::isfinite(step.loss)) {
                throw NumericalError(fmt::format("non-finite loss at epoch {}, sample offset {}", epoch + 1, start));
            }
            for (size_t k = 0; k < len; k++) {
                correct += argmax_row(cache.logits, static_cast<Eigen::Index>(k)) == batch_labels[k];
            }
            loss_sum += step.loss * static_cast<double>(len);
            adam_step(model, step.grads, adam);
            steps++;
        }
        if (!model.all_finite()) {
            throw NumericalError(fmt::format("non-finite parameters after epoch {}", epoch + 1));
        }
        history.push_back({loss_sum / static_cast<double>(n), static_cast<double>(correct) / static_cast<double>(n), steps});
    }
    return history;
}

// --- Checkpoints -----------------------------------------------------------------

namespace {

constexpr char kCheckpointMagic[8] = {'Q', 'P', 'F', 'M', 'L', 'P', 0, 0};
constexpr uint32_t kCheckpointVersion = 1;

void put_u32(std::string &out, uint32_t v) {
    for (int i = 0; i < 4; i++) {
        out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
    }
}

void put_f64(std::string &out, double x) {
    auto bits = std::bit_cast<uint64_t>(x);
    for (int i = 0; i < 8; i++) {
        out.push_back(static_cast<char>((bits >> (8 * i)) & 0xFF));
    }
}

class Reader {
  public:
    Reader(std::vector<uint8_t> bytes, std::string name) : bytes_(std::move(bytes)), name_(std::move(name)) {}
    uint64_t take(size_t n) {
        if (pos_ + n > bytes_.size()) {
            throw DataError(fmt::format("checkpoint '{}' is truncated", name_));
        }
        uint64_t v = 0;
        for (size_t i = 0; i < n; i++) {
            v |= uint64_t{bytes_[pos_ + i]} << (8 * i);
        }
        pos_ += n;
        return v;
    }
    const uint8_t *raw(size_t n) {
        if (pos_ + n > bytes_.size()) {
            throw DataError(fmt::format("checkpoint '{}' is truncated", name_));
        }
        pos_ += n;
        return bytes_.data() + pos_ - n;
    }
    bool done() const { return pos_ == bytes_.size(); }

  private:
    std::vector<uint8_t> bytes_;
    std::string name_;
    size_t pos_ = 0;
};

}  // namespace

void save_model(const MlpModel &model, const std::filesystem::path &path) {
    std::string out(kCheckpointMagic, sizeof kCheckpointMagic);
    put_u32(out, kCheckpointVersion);
    put_u32(out, static_cast<uint32_t>(model.input_dim()));
    put_u32(out, static_cast<uint32_t>(model.hidden_dim()));
    put_u32(out, static_cast<uint32_t>(model.n_classes()));
    auto put_all = [&](const double *p, Eigen::Index n) {
        for (Eigen::Index i = 0; i < n; i++) {
            put_f64(out, p[i]);
        }
    };
    put_all(model.w1.data(), model.w1.size());
    put_all(model.b1.data(), model.b1.size());
    put_all(model.w2.data(), model.w2.size());
    put_all(model.b2.data(), model.b2.size());
    io::write_atomic(path, out);
}

MlpModel load_model(const std::filesystem::path &path) {
    Reader in(io::read_bytes(path), path.string());
    if (std::memcmp(in.raw(sizeof kCheckpointMagic), kCheckpointMagic, sizeof kCheckpointMagic) != 0) {
        throw DataError(fmt::format("'{}' is not a model checkpoint", path.string()));
    }
    if (auto version = in.take(4); version != kCheckpointVersion) {
        throw DataError(fmt::format("checkpoint '{}' has unsupported version {}", path.string(), version));
    }
    const auto input = static_cast<Eigen::Index>(in.take(4));
    const auto hidden = static_cast<Eigen::Index>(in.take(4));
    const auto classes = static_cast<Eigen::Index>(in.take(4));
    if (input == 0 || hidden == 0 || classes == 0) {
        throw DataError(fmt::format("checkpoint '{}' has a zero dimension", path.string()));
    }
    MlpModel model{Matrix(hidden, input), Vector(hidden), Matrix(classes, hidden), Vector(classes)};
    auto fill = [&](double *p, Eigen::Index n) {
        for (Eigen::Index i = 0; i < n; i++) {
            p[i] = std::bit_cast<double>(in.take(8));
        }
    };
    fill(model.w1.data(), model.w1.size());
    fill(model.b1.data(), model.b1.size());
    fill(model.w2.data(), model.w2.size());
    fill(model.b2.data(), model.b2.size());
    if (!in.done()) {
        throw DataError(fmt::format("checkpoint '{}' has trailing bytes", path.string()));
    }
    return model;
}

}  // namespace qpf::nn
