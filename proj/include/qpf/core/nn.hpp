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
#include <vector>

#include "qpf/core/linalg.hpp"

/// Two-layer fully connected classifier: flatten -> FC1 -> ReLU -> FC2 ->
/// softmax, trained with mean softmax cross-entropy and Adam. The same model
/// serves raw images and filter outputs, which have equal input widths.
namespace qpf::nn {

struct MlpModel {
    Matrix w1;  // hidden x input
    Vector b1;  // hidden
    Matrix w2;  // classes x hidden
    Vector b2;  // classes

    size_t input_dim() const noexcept { return static_cast<size_t>(w1.cols()); }
    size_t hidden_dim() const noexcept { return static_cast<size_t>(w1.rows()); }
    size_t n_classes() const noexcept { return static_cast<size_t>(w2.rows()); }
    size_t parameter_count() const noexcept;
    bool all_finite() const;
};

/// Parameter-shaped gradient (or moment) arrays.
struct Gradients {
    Matrix w1;
    Vector b1;
    Matrix w2;
    Vector b2;

    static Gradients zeros_like(const MlpModel &model);
};

/// Glorot-uniform weights drawn from splitmix64(seed) in the order w1, w2
/// (row-major); zero biases. Throws UsageError on zero dimensions.
MlpModel init_model(size_t input_dim, size_t hidden_dim, size_t n_classes, uint64_t seed);

struct ForwardCache {
    Matrix pre_hidden;  // batch x hidden, before ReLU
    Matrix hidden;      // batch x hidden
    Matrix logits;      // batch x classes
};

/// `batch` holds one sample per row. Throws UsageError on width mismatch.
ForwardCache forward(const MlpModel &model, const Matrix &batch);

/// Row-wise softmax.
Matrix softmax(const Matrix &logits);

struct LossAndGrads {
    double loss = 0.0;
    Gradients grads;
};

/// Mean cross-entropy over the batch and its gradient by backpropagation.
LossAndGrads loss_and_grads(const MlpModel &model, const Matrix &batch, std::span<const int> labels);

/// Mean cross-entropy only.
double loss(const MlpModel &model, const Matrix &batch, std::span<const int> labels);

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

struct AdamState {
    AdamConfig config;
    Gradients m;
    Gradients v;
    uint64_t t = 0;

    static AdamState fresh(const MlpModel &model, const AdamConfig &config = {});
};

/// One bias-corrected Adam update of every parameter.
void adam_step(MlpModel &model, const Gradients &grads, AdamState &state);

struct TrainConfig {
    size_t batch_size = 128;
    size_t epochs = 30;
    size_t hidden = 128;
    AdamConfig adam;
    /// Seeds the per-epoch shuffle.
    uint64_t seed = 0;
};

struct EpochStats {
    double loss = 0.0;
    /// Accuracy of the pre-update predictions made while training.
    double accuracy = 0.0;
    size_t steps = 0;
};

using History = std::vector<EpochStats>;

/// Runs epochs * ceil(N / batch_size) Adam steps. Each epoch reshuffles the
/// sample order with splitmix64(config.seed); the last partial batch is kept.
/// Throws NumericalError when the loss or a parameter becomes non-finite.
History train(MlpModel &model, const Matrix &inputs, std::span<const int> labels, const TrainConfig &config);

/// argmax of the logits, ties resolved toward the lower class.
std::vector<int> predict(const MlpModel &model, const Matrix &inputs);

/// Fraction of samples whose prediction equals the label.
double evaluate(const MlpModel &model, const Matrix &inputs, std::span<const int> labels);

/// Checkpoint layout (all integers and reals little-endian):
///   "QPFMLP\0\0", u32 version = 1, u32 input, u32 hidden, u32 classes,
///   then f64 w1 (row-major), b1, w2 (row-major), b2.
void save_model(const MlpModel &model, const std::filesystem::path &path);
MlpModel load_model(const std::filesystem::path &path);

}  // namespace qpf::nn
