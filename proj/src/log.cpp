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

#include "qpf/core/log.hpp"

#include <cstdio>
#include <mutex>

namespace qpf::log {

namespace {

std::mutex &sink_mutex() {
    static std::mutex m;
    return m;
}

Sink &current_sink() {
    static Sink sink;
    return sink;
}

}  // namespace

void set_sink(Sink sink) {
    std::lock_guard lock(sink_mutex());
    current_sink() = std::move(sink);
}

void write(Level level, std::string_view message) {
    std::lock_guard lock(sink_mutex());
    if (current_sink()) {
        current_sink()(level, message);
        return;
    }
    static constexpr const char *kTags[] = {"info", "warning", "error"};
    std::fprintf(stderr, "[%s] %.*s\n", kTags[static_cast<int>(level)], static_cast<int>(message.size()),
                 message.data());
}

}  // namespace qpf::log
