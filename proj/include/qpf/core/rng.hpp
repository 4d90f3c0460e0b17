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

#include <cstdint>
#include <span>
#include <utility>

namespace qpf {

/// splitmix64 (Steele, Lea, Flood 2014). Every random draw in the toolkit
/// (sample selection, weight init, epoch shuffles) goes through this stream
/// so that runs are reproducible from a single 64-bit seed.
class SplitMix64 {
  public:
    using result_type = uint64_t;

    explicit SplitMix64(uint64_t seed) noexcept : state_(seed) {}

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return UINT64_MAX; }

    result_type operator()() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// The splitmix64 output finalizer.
    static constexpr uint64_t mix(uint64_t z) noexcept {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_unit() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
    uint64_t next_below(uint64_t bound) noexcept {
        __uint128_t product = static_cast<__uint128_t>((*this)()) * bound;
        auto low = static_cast<uint64_t>(product);
        if (low < bound) {
            uint64_t threshold = (0 - bound) % bound;
            while (low < threshold) {
                product = static_cast<__uint128_t>((*this)()) * bound;
                low = static_cast<uint64_t>(product);
            }
        }
        return static_cast<uint64_t>(product >> 64);
    }

  private:
    uint64_t state_;
};

/// Moves `count` uniformly chosen elements of `items` to its front (partial
/// Fisher-Yates). The selected prefix is in draw order.
template <typename T>
void partial_shuffle(std::span<T> items, size_t count, SplitMix64 &rng) {
    for (size_t i = 0; i < count && i + 1 < items.size(); i++) {
        size_t j = i + static_cast<size_t>(rng.next_below(items.size() - i));
        using std::swap;
        swap(items[i], items[j]);
    }
}

template <typename T>
void shuffle(std::span<T> items, SplitMix64 &rng) {
    partial_shuffle(items, items.size(), rng);
}

/// FNV-1a, used for dataset checksums and sample-index digests.
class Fnv1a64 {
  public:
    void update(const void *data, size_t size) noexcept {
        auto bytes = static_cast<const unsigned char *>(data);
        for (size_t i = 0; i < size; i++) {
            hash_ ^= bytes[i];
            hash_ *= 0x100000001B3ULL;
        }
    }
    void update_u64(uint64_t v) noexcept {
        unsigned char le[8];
        for (int i = 0; i < 8; i++) {
            le[i] = static_cast<unsigned char>(v >> (8 * i));
        }
        update(le, 8);
    }
    uint64_t value() const noexcept { return hash_; }

  private:
    uint64_t hash_ = 0xCBF29CE484222325ULL;
};

}  // namespace qpf
